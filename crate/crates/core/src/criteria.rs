//! Reference separability criteria: PPT, realignment (CCNR), reduction and
//! majorization.
//!
//! Each criterion reports a scalar score and a verdict. Scores within the
//! criterion's tolerance of its exact threshold are flagged `boundary` and
//! never reported as detected.

use serde::{Deserialize, Serialize};

use crate::linalg::{hermitian_eigs, ComplexMatrix};
use crate::state::{DensityMatrix, Subsystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Ppt,
    Ccnr,
    Reduction,
    Majorization,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [Criterion::Ppt, Criterion::Ccnr, Criterion::Reduction, Criterion::Majorization];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Ppt => "ppt",
            Criterion::Ccnr => "ccnr",
            Criterion::Reduction => "reduction",
            Criterion::Majorization => "majorization",
        }
    }

    pub fn evaluate(self, rho: &DensityMatrix) -> CriterionResult {
        match self {
            Criterion::Ppt => ppt_min_eig(rho),
            Criterion::Ccnr => ccnr_score(rho),
            Criterion::Reduction => reduction_min_eig(rho),
            Criterion::Majorization => majorization_check(rho),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub criterion: Criterion,
    pub score: f64,
    pub detected: bool,
    pub boundary: bool,
}

const PPT_TOL: f64 = 1e-10;
const CCNR_TOL: f64 = 1e-9;
const REDUCTION_TOL: f64 = 1e-10;
const MAJORIZATION_TOL: f64 = 1e-10;

/// Entangled when the score falls below `threshold − tol`.
fn below(criterion: Criterion, score: f64, threshold: f64, tol: f64) -> CriterionResult {
    CriterionResult { criterion, score, detected: score < threshold - tol, boundary: (score - threshold).abs() <= tol }
}

/// Entangled when the score exceeds `threshold + tol`.
fn above(criterion: Criterion, score: f64, threshold: f64, tol: f64) -> CriterionResult {
    CriterionResult { criterion, score, detected: score > threshold + tol, boundary: (score - threshold).abs() <= tol }
}

fn min_eig(m: &ComplexMatrix) -> f64 {
    hermitian_eigs(m).expect("Hermitian by construction").min()
}

/// Score: minimal eigenvalue of `ρ^{T_1}`.
pub fn ppt_min_eig(rho: &DensityMatrix) -> CriterionResult {
    below(Criterion::Ppt, rho.min_pt_eigenvalue(), 0.0, PPT_TOL)
}

/// `R[(i,j),(k,l)] = ρ[(i,k),(j,l)]`, shape `d_A² × d_B²`.
pub fn realign(rho: &DensityMatrix) -> ComplexMatrix {
    let (da, db) = (rho.dim_a(), rho.dim_b());
    ComplexMatrix::from_fn(da * da, db * db, |r, c| {
        let (i, j) = (r / da, r % da);
        let (k, l) = (c / db, c % db);
        rho.entry(i, k, j, l)
    })
}

/// Singular values in descending order, read off the spectrum of the
/// Hermitian dilation `[[0, M], [M†, 0]]` (eigenvalues `±σ_i` plus zeros).
/// Unlike square roots of Gram eigenvalues this keeps absolute accuracy near
/// zero.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let (r, c) = (m.rows(), m.cols());
    let dil = ComplexMatrix::from_fn(r + c, r + c, |i, j| match (i < r, j < r) {
        (true, false) => m[(i, j - r)],
        (false, true) => m[(j, i - r)].conj(),
        _ => crate::linalg::ZERO,
    });
    let mut s = hermitian_eigs(&dil).expect("Hermitian").values;
    s.reverse();
    s.truncate(r.min(c));
    s.into_iter().map(|x| x.max(0.0)).collect()
}

/// Score: trace norm of the realigned matrix.
pub fn ccnr_score(rho: &DensityMatrix) -> CriterionResult {
    let score = singular_values(&realign(rho)).iter().sum();
    above(Criterion::Ccnr, score, 1.0, CCNR_TOL)
}

/// Score: `min(λ_min(ρ_A ⊗ I − ρ), λ_min(I ⊗ ρ_B − ρ))`.
pub fn reduction_min_eig(rho: &DensityMatrix) -> CriterionResult {
    let ra = rho.partial_trace(Subsystem::Second);
    let rb = rho.partial_trace(Subsystem::First);
    let ia = ComplexMatrix::identity(rho.dim_a());
    let ib = ComplexMatrix::identity(rho.dim_b());
    let first = min_eig(&(&ra.kron(&ib) - rho.matrix()));
    let second = min_eig(&(&ia.kron(&rb) - rho.matrix()));
    below(Criterion::Reduction, first.min(second), 0.0, REDUCTION_TOL)
}

fn descending(mut v: Vec<f64>, len: usize) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v.resize(len, 0.0);
    v
}

/// Largest excess of a leading partial sum of the global spectrum over the
/// matching partial sum of either reduced spectrum.
pub fn majorization_excess(rho: &DensityMatrix) -> f64 {
    let n = rho.dim();
    let global = descending(rho.spectrum(), n);
    let mut worst = f64::NEG_INFINITY;
    for traced in [Subsystem::Second, Subsystem::First] {
        let reduced = descending(hermitian_eigs(&rho.partial_trace(traced)).expect("Hermitian").values, n);
        let (mut sg, mut sr) = (0.0, 0.0);
        for k in 0..n {
            sg += global[k];
            sr += reduced[k];
            worst = worst.max(sg - sr);
        }
    }
    worst
}

pub fn majorization_check(rho: &DensityMatrix) -> CriterionResult {
    above(Criterion::Majorization, majorization_excess(rho), 0.0, MAJORIZATION_TOL)
}

pub fn all_criteria(rho: &DensityMatrix) -> Vec<CriterionResult> {
    Criterion::ALL.iter().map(|c| c.evaluate(rho)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::inequality::npt_seeded_violation;
    use crate::linalg::{C64, ZERO};
    use crate::state::PureState;

    fn bell22() -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(2, 2, vec![C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)]).unwrap().density()
    }

    fn product_pure(seed: u64, d: usize) -> DensityMatrix {
        let mut r = crate::rng::seeded(seed);
        let a = crate::rng::haar_vector(&mut r, 2);
        let b = crate::rng::haar_vector(&mut r, d);
        PureState::product(&a, &b).unwrap().density()
    }

    #[test]
    fn ppt_examples() {
        let r = ppt_min_eig(&product_pure(1, 3));
        assert!(r.score >= -1e-12 && !r.detected);
        let r = ppt_min_eig(&catalog::isotropic23(1.0).unwrap());
        assert!((r.score + 0.5).abs() < 1e-12 && r.detected);
    }

    #[test]
    fn ccnr_examples() {
        let r = ccnr_score(&product_pure(2, 4));
        assert!((r.score - 1.0).abs() < 1e-9 && !r.detected);
        let r = ccnr_score(&bell22());
        assert!((r.score - 2.0).abs() < 1e-12 && r.detected);
    }

    #[test]
    fn reduction_examples() {
        let r = reduction_min_eig(&catalog::random_separable(3, 6, 4).unwrap());
        assert!(r.score >= -1e-10 && !r.detected);
        let r = reduction_min_eig(&bell22());
        assert!((r.score + 0.5).abs() < 1e-12 && r.detected);
    }

    #[test]
    fn majorization_examples() {
        assert!(!majorization_check(&DensityMatrix::maximally_mixed(2, 3)).detected);
        let r = majorization_check(&bell22());
        assert!(r.detected && (r.score - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sigma_b_escapes_all_reference_criteria() {
        for b in [0.1, 0.5, 0.9] {
            let rho = catalog::sigma_b(b).unwrap();
            for res in all_criteria(&rho) {
                assert!(!res.detected, "b = {b}: {res:?}");
            }
            assert!(ppt_min_eig(&rho).score >= -1e-10);
        }
    }

    #[test]
    fn boundary_is_conservative() {
        // product state: PPT score is 0 up to rounding
        let r = ppt_min_eig(&PureState::basis(2, 3, 0, 0).density());
        assert!(r.boundary && !r.detected);
    }

    #[test]
    fn weaker_criteria_imply_npt() {
        for d in [2usize, 3, 4] {
            for seed in 0..200u64 {
                let rho = catalog::random_density(d, 1 + (seed as usize % (2 * d)), seed).unwrap();
                let ppt = ppt_min_eig(&rho);
                if reduction_min_eig(&rho).detected || majorization_check(&rho).detected {
                    assert!(ppt.detected, "d = {d}, seed = {seed}");
                }
                if ppt.score.abs() > 1e-8 {
                    assert_eq!(ppt.detected, npt_seeded_violation(&rho).unwrap().verdict.is_violated());
                }
            }
        }
    }

    #[test]
    fn separable_mixtures_pass_every_criterion() {
        for d in [2usize, 3, 4, 5] {
            for seed in 0..100u64 {
                let rho = catalog::random_separable(d, 1 + (seed as usize % 20), seed).unwrap();
                for res in all_criteria(&rho) {
                    assert!(!res.detected, "d = {d}, seed = {seed}: {res:?}");
                }
            }
        }
    }
}
