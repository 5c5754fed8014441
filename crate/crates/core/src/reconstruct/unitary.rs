use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ReconstructError;
use crate::emitsim::{GateKind, NativeGate};

/// `σ_φ = cos φ σ_x + sin φ σ_y` on levels `i`, `j` of a `d`-level system.
pub fn sigma_phi(i: usize, j: usize, phi: f64, d: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(d, d);
    let (c, s) = (libm::cos(phi), libm::sin(phi));
    // σ_x = |i⟩⟨j| + |j⟩⟨i|, σ_y = −i|i⟩⟨j| + i|j⟩⟨i|
    m[(i, j)] = Complex64::new(c, -s);
    m[(j, i)] = Complex64::new(c, s);
    m
}

/// Unitary implemented by `gate` on qudits of dimension `d`.
///
/// Rotations give a `d × d` matrix `exp(−iθ/2 · σ_φ)`; MS gives a `d² × d²`
/// matrix `exp(−iθ/4 · (σ_φ ⊗ 1 + 1 ⊗ σ_φ)²)`.
pub fn gate_unitary(gate: &NativeGate, d: usize) -> Result<DMatrix<Complex64>, ReconstructError> {
    let (i, j) = (gate.level_i, gate.level_j);
    if !(i < j && j < d) {
        return Err(ReconstructError::InvalidLevels { i, j, dim: d });
    }
    let sigma = sigma_phi(i, j, gate.phi(), d);
    let h = match gate.kind {
        GateKind::Rx | GateKind::Ry => sigma * Complex64::new(gate.theta_rad / 2.0, 0.0),
        GateKind::Ms => {
            let id = DMatrix::<Complex64>::identity(d, d);
            let g = sigma.kronecker(&id) + id.kronecker(&sigma);
            &g * &g * Complex64::new(gate.theta_rad / 4.0, 0.0)
        }
    };
    Ok(exp_minus_i(h))
}

/// `exp(−iH)` for Hermitian `H`, through its eigendecomposition.
fn exp_minus_i(h: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = h.symmetric_eigen();
    let phases = eig.eigenvalues.map(|l| Complex64::new(libm::cos(l), -libm::sin(l)));
    let v = eig.eigenvectors;
    let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |r, c| v[(r, c)] * phases[c]);
    scaled * v.adjoint()
}
