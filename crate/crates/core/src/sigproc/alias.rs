//! Undersampling arithmetic: folding a true frequency into the Nyquist band
//! and enumerating the true frequencies an alias could have come from.

use alloc::vec::Vec;

use super::SigprocError;

/// A closed frequency interval in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Band {
    pub low_hz: f64,
    pub high_hz: f64,
}

/// Typical acousto-optic drive range.
pub const AOM_BAND: Band = Band { low_hz: 80e6, high_hz: 250e6 };

impl Band {
    pub const fn new(low_hz: f64, high_hz: f64) -> Self {
        Self { low_hz, high_hz }
    }

    pub fn validate(&self) -> Result<(), SigprocError> {
        if !(self.low_hz <= self.high_hz) || !self.low_hz.is_finite() || !self.high_hz.is_finite() {
            return Err(SigprocError::InvalidBand { low_hz: self.low_hz, high_hz: self.high_hz });
        }
        Ok(())
    }

    pub fn contains(&self, f_hz: f64) -> bool {
        self.low_hz <= f_hz && f_hz <= self.high_hz
    }
}

impl Default for Band {
    fn default() -> Self {
        AOM_BAND
    }
}

/// Frequency at which a real tone at `f_sig_hz` appears after sampling at
/// `f_s_hz`, in `[0, f_s/2]`.
pub fn fold_frequency(f_sig_hz: f64, f_s_hz: f64) -> f64 {
    let k = libm::round(f_sig_hz.abs() / f_s_hz);
    (f_sig_hz.abs() - k * f_s_hz).abs()
}

/// All distinct `|k f_s ± f_alias|` for `k = 0..=k_max` inside `band`,
/// ascending.
pub fn dealias_candidates(f_alias_hz: f64, f_s_hz: f64, k_max: u32, band: Band) -> Result<Vec<f64>, SigprocError> {
    band.validate()?;
    if !(f_s_hz > 0.0) || !(0.0..=f_s_hz / 2.0).contains(&f_alias_hz) {
        return Err(SigprocError::InvalidAlias(f_alias_hz));
    }
    let mut out = Vec::new();
    for k in 0..=k_max {
        let base = k as f64 * f_s_hz;
        for f in [(base - f_alias_hz).abs(), base + f_alias_hz] {
            if band.contains(f) {
                out.push(f);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}
