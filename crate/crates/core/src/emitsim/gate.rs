use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use super::EmitError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GateKind {
    Rx,
    Ry,
    #[cfg_attr(feature = "serde", serde(rename = "MS"))]
    Ms,
}

impl GateKind {
    /// Rotation axis azimuth: 0 for Rx and MS, π/2 for Ry.
    pub fn phi(self) -> f64 {
        match self {
            GateKind::Ry => FRAC_PI_2,
            GateKind::Rx | GateKind::Ms => 0.0,
        }
    }
}

/// One gate of the native set: Rx(θ), Ry(θ) on one ion or MS on two.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NativeGate {
    pub kind: GateKind,
    pub ions: Vec<usize>,
    pub theta_rad: f64,
    pub level_i: usize,
    pub level_j: usize,
    /// Inserted by [`apply_decoys`](super::apply_decoys); never part of the
    /// computation.
    #[cfg_attr(feature = "serde", serde(default))]
    pub decoy: bool,
}

impl NativeGate {
    pub fn rx(ion: usize, theta_rad: f64) -> Self {
        Self::single(GateKind::Rx, ion, theta_rad)
    }

    pub fn ry(ion: usize, theta_rad: f64) -> Self {
        Self::single(GateKind::Ry, ion, theta_rad)
    }

    /// `X = Rx(π)` on levels 0,1.
    pub fn x(ion: usize) -> Self {
        Self::rx(ion, PI)
    }

    pub fn ms(a: usize, b: usize) -> Self {
        Self { kind: GateKind::Ms, ions: vec![a, b], theta_rad: FRAC_PI_2, level_i: 0, level_j: 1, decoy: false }
    }

    fn single(kind: GateKind, ion: usize, theta_rad: f64) -> Self {
        Self { kind, ions: vec![ion], theta_rad, level_i: 0, level_j: 1, decoy: false }
    }

    pub fn with_levels(mut self, i: usize, j: usize) -> Self {
        self.level_i = i;
        self.level_j = j;
        self
    }

    pub fn phi(&self) -> f64 {
        self.kind.phi()
    }

    /// Ions sorted ascending.
    pub fn ion_set(&self) -> Vec<usize> {
        let mut ions = self.ions.clone();
        ions.sort_unstable();
        ions
    }

    pub fn validate(&self, n_ions: usize) -> Result<(), EmitError> {
        let invalid = |why| Err(EmitError::InvalidGate(why));
        match self.kind {
            GateKind::Ms => {
                if self.ions.len() != 2 || self.ions[0] == self.ions[1] {
                    return invalid("MS acts on exactly two distinct ions");
                }
                if (self.theta_rad - FRAC_PI_2).abs() > 1e-12 {
                    return invalid("MS has fixed theta = pi/2");
                }
            }
            GateKind::Rx | GateKind::Ry => {
                if self.ions.len() != 1 {
                    return invalid("single-qudit rotations act on exactly one ion");
                }
                if !(self.theta_rad > 0.0 && self.theta_rad <= 2.0 * PI) {
                    return invalid("theta must lie in (0, 2pi]");
                }
            }
        }
        if self.level_i >= self.level_j {
            return invalid("levels must satisfy i < j");
        }
        if self.ions.iter().any(|&ion| ion >= n_ions) {
            return invalid("ion index out of range");
        }
        Ok(())
    }
}

/// A circuit over the native gate set and how often it is repeated.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CircuitSpec {
    pub n_ions: usize,
    pub gates: Vec<NativeGate>,
    pub n_shots: usize,
}

impl CircuitSpec {
    pub fn new(n_ions: usize, gates: Vec<NativeGate>, n_shots: usize) -> Self {
        Self { n_ions, gates, n_shots }
    }

    pub fn empty(n_ions: usize, n_shots: usize) -> Self {
        Self::new(n_ions, Vec::new(), n_shots)
    }

    /// X on ions 0, 1, 2 in turn, ten times.
    pub fn x_sweep(n_shots: usize) -> Self {
        let gates = (0..10).flat_map(|_| (0..3).map(NativeGate::x)).collect();
        Self::new(3, gates, n_shots)
    }

    /// MS on (0,1), (0,2), (1,2) in turn, ten times.
    pub fn ms_sweep(n_shots: usize) -> Self {
        let gates =
            (0..10).flat_map(|_| [(0, 1), (0, 2), (1, 2)].into_iter().map(|(a, b)| NativeGate::ms(a, b))).collect();
        Self::new(3, gates, n_shots)
    }

    pub fn validate(&self) -> Result<(), EmitError> {
        if self.n_ions == 0 {
            return Err(EmitError::InvalidCircuit("n_ions must be positive"));
        }
        if self.n_shots == 0 {
            return Err(EmitError::InvalidCircuit("n_shots must be positive"));
        }
        self.gates.iter().try_for_each(|g| g.validate(self.n_ions))
    }
}
