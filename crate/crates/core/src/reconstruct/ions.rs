use alloc::vec::Vec;

use super::ReconstructError;
use crate::sigproc::Pulse;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IonAddress {
    /// Observed (aliased) addressing frequency.
    pub center_freq_hz: f64,
    pub tolerance_hz: f64,
}

/// Expected addressing frequency per ion, indexed by ion.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AddressingTable {
    pub ions: Vec<IonAddress>,
}

/// Measured addressing frequencies of the three-ion register: mean and
/// spread in Hz for ions 0, 1, 2.
pub const MEASURED_ADDRESSING_HZ: [(f64, f64); 3] = [(6.7745e6, 0.0006e6), (8.112e6, 0.045e6), (9.57e6, 0.16e6)];

impl AddressingTable {
    pub fn new(ions: Vec<IonAddress>) -> Result<Self, ReconstructError> {
        let table = Self { ions };
        table.validate()?;
        Ok(table)
    }

    /// Builds a table from `(mean, sigma)` pairs with tolerance
    /// `max(sigma_mult · sigma, floor_hz)`.
    pub fn from_measurements(entries: &[(f64, f64)], sigma_mult: f64, floor_hz: f64) -> Result<Self, ReconstructError> {
        Self::new(
            entries
                .iter()
                .map(|&(f, s)| IonAddress { center_freq_hz: f, tolerance_hz: (sigma_mult * s).max(floor_hz) })
                .collect(),
        )
    }

    /// The three-ion table with `max(3σ, bin_hz)` tolerances.
    pub fn measured(bin_hz: f64) -> Self {
        Self::from_measurements(&MEASURED_ADDRESSING_HZ, 3.0, bin_hz).expect("measured table is well separated")
    }

    pub fn len(&self) -> usize {
        self.ions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ions.is_empty()
    }

    /// Entries must be separated by more than twice the larger tolerance.
    pub fn validate(&self) -> Result<(), ReconstructError> {
        for (i, a) in self.ions.iter().enumerate() {
            if !(a.tolerance_hz >= 0.0) || !a.center_freq_hz.is_finite() {
                return Err(ReconstructError::InvalidTable("tolerances must be non-negative"));
            }
            for b in &self.ions[i + 1..] {
                let sep = (a.center_freq_hz - b.center_freq_hz).abs();
                if sep <= 2.0 * a.tolerance_hz.max(b.tolerance_hz) {
                    return Err(ReconstructError::InvalidTable("entries closer than twice their tolerance"));
                }
            }
        }
        Ok(())
    }

    /// Nearest entry within its tolerance, with its distance in Hz.
    pub fn lookup(&self, freq_hz: f64) -> Option<(usize, f64)> {
        self.ions
            .iter()
            .enumerate()
            .map(|(i, a)| (i, (freq_hz - a.center_freq_hz).abs(), a.tolerance_hz))
            .filter(|(_, d, tol)| d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, d, _)| (i, d))
    }

    /// `1 - distance / tolerance`, clamped to `[0, 1]`.
    pub fn closeness(&self, ion: usize, freq_hz: f64) -> f64 {
        let a = &self.ions[ion];
        if a.tolerance_hz <= 0.0 {
            return if freq_hz == a.center_freq_hz { 1.0 } else { 0.0 };
        }
        (1.0 - (freq_hz - a.center_freq_hz).abs() / a.tolerance_hz).clamp(0.0, 1.0)
    }
}

/// Ion addressed by each pulse, if any.
pub fn assign_ions(pulses: &[Pulse], table: &AddressingTable) -> Vec<Option<usize>> {
    pulses.iter().map(|p| table.lookup(p.center_freq_hz).map(|(ion, _)| ion)).collect()
}
