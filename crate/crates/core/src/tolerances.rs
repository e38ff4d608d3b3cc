//! Numerical tolerances shared by every module.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Hermiticity check on density matrices and observables.
    pub hermitian: f64,
    /// `|Tr ρ - 1|` bound.
    pub trace: f64,
    /// Minimal eigenvalue accepted as positive semidefinite is `-psd`.
    pub psd: f64,
    /// Unit norm check on pure state amplitudes.
    pub norm: f64,
    /// Largest imaginary part tolerated in `Tr(ρ O)` for Hermitian `O`.
    pub expectation_imag: f64,
    /// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
    pub jacobi_off_diag: f64,
    pub jacobi_max_sweeps: usize,
    /// `F` above this is reported as a violation.
    pub violation: f64,
    /// Eigenvalues closer than this to `λ_min` count as degenerate.
    pub degeneracy: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-10,
        trace: 1e-10,
        psd: 1e-10,
        norm: 1e-12,
        expectation_imag: 1e-9,
        jacobi_off_diag: 1e-12,
        jacobi_max_sweeps: 100,
        violation: 1e-7,
        degeneracy: 1e-10,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub const TOL: Tolerances = Tolerances::DEFAULT;
