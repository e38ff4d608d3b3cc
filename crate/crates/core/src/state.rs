//! Bipartite density matrices and pure states on `H_A ⊗ H_B`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{complete_basis, hermitian_eigs, norm, ComplexMatrix, C64, ZERO};
use crate::tolerances::{Tolerances, TOL};

/// Tensor factor selector for partial operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsystem {
    First,
    Second,
}

/// A validated mixed state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim_a: usize,
    dim_b: usize,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(dim_a: usize, dim_b: usize, mat: ComplexMatrix) -> Result<Self> {
        Self::new_with(dim_a, dim_b, mat, &TOL)
    }

    pub fn new_with(dim_a: usize, dim_b: usize, mat: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let n = dim_a * dim_b;
        if dim_a < 1 || dim_b < 1 {
            return Err(Error::DimensionMismatch(format!("invalid dims [{dim_a}, {dim_b}]")));
        }
        if !mat.is_square() {
            return Err(Error::NotSquare(mat.rows(), mat.cols()));
        }
        if mat.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "dims [{dim_a}, {dim_b}] need a {n}x{n} matrix, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let dev = mat.hermitian_deviation();
        if dev > tol.hermitian {
            return Err(Error::NotHermitian(dev));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = hermitian_eigs(&mat)?.min();
        if min < -tol.psd {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { dim_a, dim_b, mat })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self { dim_a: psi.dim_a, dim_b: psi.dim_b, mat: ComplexMatrix::projector(&psi.amplitudes) }
    }

    pub fn maximally_mixed(dim_a: usize, dim_b: usize) -> Self {
        let n = dim_a * dim_b;
        Self { dim_a, dim_b, mat: ComplexMatrix::identity(n).scale_real(1.0 / n as f64) }
    }

    /// Convex combination `Σ w_k ρ_k`; weights must be nonnegative and sum to 1.
    pub fn mixture(terms: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or_else(|| Error::Invalid("empty mixture".into()))?;
        let (dim_a, dim_b) = (first.dim_a, first.dim_b);
        let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
        let mut total = 0.0;
        for &(w, rho) in terms {
            if (rho.dim_a, rho.dim_b) != (dim_a, dim_b) {
                return Err(Error::DimensionMismatch("mixture of states with different dims".into()));
            }
            if w < 0.0 {
                return Err(Error::ParameterOutOfRange(format!("negative weight {w}")));
            }
            acc = &acc + &rho.mat.scale_real(w);
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProbabilities(total));
        }
        Self::new(dim_a, dim_b, acc)
    }

    #[cfg(test)]
    pub(crate) fn from_parts_unchecked(dim_a: usize, dim_b: usize, mat: ComplexMatrix) -> Self {
        Self { dim_a, dim_b, mat }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Entry `⟨i j| ρ |k l⟩` in local labels.
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        self.mat[(i * self.dim_b + j, k * self.dim_b + l)]
    }

    /// `(U ⊗ V) ρ (U ⊗ V)†`.
    pub fn local_unitary(&self, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.dim_a || v.rows() != self.dim_b {
            return Err(Error::DimensionMismatch("local unitary dims".into()));
        }
        let m = self.mat.conjugate_by(&u.kron(v));
        Ok(Self { dim_a: self.dim_a, dim_b: self.dim_b, mat: (&m + &m.dagger()).scale_real(0.5) })
    }

    pub fn partial_transpose(&self, subsystem: Subsystem) -> ComplexMatrix {
        let db = self.dim_b;
        ComplexMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            let (i, k) = (r / db, r % db);
            let (j, l) = (c / db, c % db);
            match subsystem {
                Subsystem::First => self.mat[(j * db + k, i * db + l)],
                Subsystem::Second => self.mat[(i * db + l, j * db + k)],
            }
        })
    }

    /// Reduced state of the subsystem that is kept.
    pub fn partial_trace(&self, traced: Subsystem) -> ComplexMatrix {
        let (da, db) = (self.dim_a, self.dim_b);
        match traced {
            Subsystem::Second => ComplexMatrix::from_fn(da, da, |i, j| {
                (0..db).map(|k| self.mat[(i * db + k, j * db + k)]).sum()
            }),
            Subsystem::First => ComplexMatrix::from_fn(db, db, |k, l| {
                (0..da).map(|i| self.mat[(i * db + k, i * db + l)]).sum()
            }),
        }
    }

    /// `Tr(ρ O)` for Hermitian `O`.
    pub fn expectation(&self, o: &ComplexMatrix) -> Result<f64> {
        if o.rows() != self.dim() || o.cols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "observable is {}x{}, state is {}x{}",
                o.rows(),
                o.cols(),
                self.dim(),
                self.dim()
            )));
        }
        let dev = o.hermitian_deviation();
        if dev > TOL.hermitian {
            return Err(Error::NotHermitian(dev));
        }
        let z = trace_product(&self.mat, o);
        if z.im.abs() >= TOL.expectation_imag {
            return Err(Error::Invalid(format!("expectation has imaginary part {:.3e}", z.im)));
        }
        Ok(z.re)
    }

    /// Ascending eigenvalues of `ρ`.
    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_eigs(&self.mat).expect("density matrix is Hermitian").values
    }

    /// `min eig(ρ^{T_A})`.
    pub fn min_pt_eigenvalue(&self) -> f64 {
        hermitian_eigs(&self.partial_transpose(Subsystem::First)).expect("Hermitian").min()
    }
}

/// `Tr(A B)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.rows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..a.cols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

pub fn expectation(rho: &DensityMatrix, o: &ComplexMatrix) -> Result<f64> {
    rho.expectation(o)
}

pub fn partial_transpose(rho: &DensityMatrix, subsystem: Subsystem) -> ComplexMatrix {
    rho.partial_transpose(subsystem)
}

pub fn partial_trace(rho: &DensityMatrix, traced: Subsystem) -> ComplexMatrix {
    rho.partial_trace(traced)
}

/// Unit vector on `H_A ⊗ H_B`, amplitude of `|i⟩|j⟩` at index `i·dim_b + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(dim_a: usize, dim_b: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != dim_a * dim_b || dim_a == 0 || dim_b == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dims [{dim_a}, {dim_b}]",
                amplitudes.len()
            )));
        }
        let nrm = norm(&amplitudes);
        if (nrm - 1.0).abs() > TOL.norm {
            return Err(Error::NotNormalized(nrm));
        }
        Ok(Self { dim_a, dim_b, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm first.
    pub fn normalized(dim_a: usize, dim_b: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let nrm = norm(&amplitudes);
        if nrm < 1e-300 {
            return Err(Error::NotNormalized(nrm));
        }
        Self::new(dim_a, dim_b, amplitudes.into_iter().map(|z| z / nrm).collect())
    }

    pub fn product(a: &[C64], b: &[C64]) -> Result<Self> {
        let amps = a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect();
        Self::normalized(a.len(), b.len(), amps)
    }

    /// Basis vector `|i⟩|j⟩`.
    pub fn basis(dim_a: usize, dim_b: usize, i: usize, j: usize) -> Self {
        let mut amps = vec![ZERO; dim_a * dim_b];
        amps[i * dim_b + j] = C64::new(1.0, 0.0);
        Self { dim_a, dim_b, amplitudes: amps }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Coefficient matrix `M[i][j] = ⟨ij|ψ⟩` of shape `dim_a × dim_b`.
    pub fn coefficient_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::new(self.dim_a, self.dim_b, self.amplitudes.clone()).expect("consistent dims")
    }
}

/// `|ψ⟩ = (U* ⊗ V)(α|00⟩ + β|11⟩)` with `α ≥ β ≥ 0`.
#[derive(Debug, Clone)]
pub struct Schmidt {
    pub alpha: f64,
    pub beta: f64,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
}

impl Schmidt {
    pub fn reconstruct(&self) -> Vec<C64> {
        let d = self.v.rows();
        let mut core = vec![ZERO; 2 * d];
        core[0] = C64::new(self.alpha, 0.0);
        core[d + 1] = C64::new(self.beta, 0.0);
        self.u.conj().kron(&self.v).mat_vec(&core).expect("dims")
    }
}

pub fn schmidt_decompose(psi: &PureState) -> Result<Schmidt> {
    if psi.dim_a != 2 {
        return Err(Error::DimensionMismatch(format!("Schmidt form needs dim_a = 2, got {}", psi.dim_a)));
    }
    if psi.dim_b < 2 {
        return Err(Error::DimensionMismatch("Schmidt form needs dim_b >= 2".into()));
    }
    let d = psi.dim_b;
    let m = psi.coefficient_matrix();
    let gram = &m * &m.dagger();
    let eig = hermitian_eigs(&gram)?;
    let s = [eig.values[1].max(0.0).sqrt(), eig.values[0].max(0.0).sqrt()];
    let left = [eig.vector(1), eig.vector(0)];

    // w_k = M^T conj(u_k) / s_k
    let mt = m.transpose();
    let w0 = {
        let w = mt.mat_vec(&left[0].iter().map(C64::conj).collect::<Vec<_>>())?;
        let n = norm(&w);
        w.into_iter().map(|z| z / n).collect::<Vec<_>>()
    };
    let v = if s[1] > 1e-10 {
        let mut w1 = mt.mat_vec(&left[1].iter().map(C64::conj).collect::<Vec<_>>())?;
        let c = crate::linalg::inner(&w0, &w1);
        for (x, y) in w1.iter_mut().zip(&w0) {
            *x -= c * y;
        }
        let n = norm(&w1);
        let w1: Vec<C64> = w1.into_iter().map(|z| z / n).collect();
        complete_basis(&[w0, w1], d)
    } else {
        complete_basis(&[w0], d)
    };
    let mut u_conj = ComplexMatrix::zeros(2, 2);
    u_conj.set_column(0, &left[0]);
    u_conj.set_column(1, &left[1]);
    Ok(Schmidt { alpha: s[0], beta: s[1], u: u_conj.conj(), v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::rng;
    use proptest::prelude::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn psi_plus_22() -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(2, 2, vec![c(h), ZERO, ZERO, c(h)]).unwrap().density()
    }

    fn random_density(seed: u64, da: usize, db: usize) -> DensityMatrix {
        let mut r = rng::seeded(seed);
        let n = da * db;
        let g = ComplexMatrix::new(n, n, rng::complex_gaussian(&mut r, n * n)).unwrap();
        let m = &g * &g.dagger();
        let t = m.trace().re;
        DensityMatrix::new(da, db, m.scale_real(1.0 / t)).unwrap()
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        let ok = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(DensityMatrix::new(2, 2, ok.clone()).is_ok());
        assert!(matches!(DensityMatrix::new(2, 3, ok.clone()), Err(Error::DimensionMismatch(_))));
        assert!(matches!(DensityMatrix::new(2, 2, ok.scale_real(2.0)), Err(Error::InvalidTrace(_))));
        let neg = ComplexMatrix::diagonal(&[c(1.5), c(-0.5), ZERO, ZERO]);
        assert!(matches!(DensityMatrix::new(2, 2, neg), Err(Error::NotPositive(_))));
        let mut nh = ok;
        nh[(0, 1)] = c(0.1);
        assert!(matches!(DensityMatrix::new(2, 2, nh), Err(Error::NotHermitian(_))));
        assert!(PureState::new(2, 2, vec![ONE, ONE, ZERO, ZERO]).is_err());
    }

    #[test]
    fn expectation_examples() {
        let zero = PureState::basis(2, 3, 0, 0).density();
        let s3 = crate::observables::pauli(3).unwrap().kron(&ComplexMatrix::identity(3));
        assert_eq!(zero.expectation(&s3).unwrap(), 1.0);
        let mixed = DensityMatrix::maximally_mixed(2, 3);
        let traceless = crate::observables::pauli(1).unwrap().kron(&crate::observables::lambda_gen(3, 2).unwrap());
        assert!(mixed.expectation(&traceless).unwrap().abs() < 1e-15);
        let s1 = crate::observables::pauli(1).unwrap();
        assert!((psi_plus_22().expectation(&s1.kron(&s1)).unwrap() - 1.0).abs() < 1e-15);
        assert!(psi_plus_22().expectation(&ComplexMatrix::identity(6)).is_err());
        let mut nh = ComplexMatrix::zeros(4, 4);
        nh[(0, 1)] = ONE;
        assert!(matches!(psi_plus_22().expectation(&nh), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn partial_transpose_examples() {
        let diag = DensityMatrix::new(2, 2, ComplexMatrix::diagonal(&[c(0.1), c(0.2), c(0.3), c(0.4)])).unwrap();
        assert_eq!(diag.partial_transpose(Subsystem::First), *diag.matrix());
        let rho = random_density(5, 2, 3);
        let twice = DensityMatrix::from_parts_unchecked(2, 3, rho.partial_transpose(Subsystem::First))
            .partial_transpose(Subsystem::First);
        assert_eq!(twice, *rho.matrix());
        let e = hermitian_eigs(&psi_plus_22().partial_transpose(Subsystem::First)).unwrap();
        let expected = [-0.5, 0.5, 0.5, 0.5];
        for (x, y) in e.values.iter().zip(expected) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_examples() {
        let red = psi_plus_22().partial_trace(Subsystem::Second);
        assert!(red.approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-15));
        let (alpha, beta) = (0.8, 0.6);
        let mut amps = vec![ZERO; 6];
        amps[0] = c(alpha);
        amps[4] = c(beta);
        let red = PureState::new(2, 3, amps).unwrap().density().partial_trace(Subsystem::Second);
        assert!(red.approx_eq(&ComplexMatrix::diagonal(&[c(0.64), c(0.36)]), 1e-15));
    }

    #[test]
    fn schmidt_examples() {
        let s = schmidt_decompose(&PureState::basis(2, 3, 0, 0)).unwrap();
        assert!((s.alpha - 1.0).abs() < 1e-12 && s.beta.abs() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::new(2, 2, vec![ZERO, c(h), c(h), ZERO]).unwrap();
        let s = schmidt_decompose(&psi).unwrap();
        assert!((s.alpha - h).abs() < 1e-12 && (s.beta - h).abs() < 1e-12);
        let rebuilt = s.reconstruct();
        assert!(rebuilt.iter().zip(psi.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-12));
        assert!(schmidt_decompose(&PureState::basis(3, 2, 0, 0)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn schmidt_reconstructs(seed in any::<u64>(), d in 2usize..=6) {
            let psi = PureState::new(2, d, rng::haar_vector(&mut rng::seeded(seed), 2 * d)).unwrap();
            let s = schmidt_decompose(&psi).unwrap();
            prop_assert!(s.alpha >= s.beta && s.beta >= 0.0);
            prop_assert!((s.alpha.powi(2) + s.beta.powi(2) - 1.0).abs() < 1e-10);
            prop_assert!(s.u.unitarity_deviation() < 1e-10 && s.v.unitarity_deviation() < 1e-10);
            let rebuilt = s.reconstruct();
            let err = rebuilt.iter().zip(psi.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            prop_assert!(err < 1e-9);
        }

        #[test]
        fn partial_transpose_spectrum_local_invariance(seed in any::<u64>(), d in 2usize..=4) {
            let rho = random_density(seed, 2, d);
            let mut r = rng::seeded(seed ^ 0xABCD);
            let u = crate::catalog::haar_unitary(&mut r, 2);
            let v = crate::catalog::haar_unitary(&mut r, d);
            let moved = rho.local_unitary(&u, &v).unwrap();
            let pt = rho.partial_transpose(Subsystem::First);
            prop_assert!(pt.is_hermitian(1e-14));
            prop_assert!((pt.trace() - ONE).norm() < 1e-12);
            let e1 = hermitian_eigs(&pt).unwrap().values;
            let e2 = hermitian_eigs(&moved.partial_transpose(Subsystem::First)).unwrap().values;
            prop_assert!(e1.iter().zip(&e2).all(|(a, b)| (a - b).abs() < 1e-9));
        }

        #[test]
        fn partial_trace_of_product(seed in any::<u64>(), d in 2usize..=4) {
            let ra = random_density(seed, 1, 2);
            let rb = random_density(seed ^ 9, 1, d);
            let prod = DensityMatrix::new(2, d, ra.matrix().kron(rb.matrix())).unwrap();
            prop_assert!(prod.partial_trace(Subsystem::Second).max_abs_diff(ra.matrix()) < 1e-12);
            prop_assert!(prod.partial_trace(Subsystem::First).max_abs_diff(rb.matrix()) < 1e-12);
        }
    }
}
