//! Exact evaluation of the qubit-qudit separability inequality.
//!
//! For an observable set generated by `(U, V)` write
//!
//! ```text
//! X = 2 I_d + (2 − d) B_1 + 2 Σ_{k=2}^{d−1} B_k,      Y = d B_1,
//! L = I ⊗ X + A_3 ⊗ Y,   M = I ⊗ Y + A_3 ⊗ X,   N = A_1 ⊗ B_d + A_2 ⊗ B_{d+1}.
//! ```
//!
//! Separable states obey `⟨L⟩ ≥ sqrt(⟨M⟩² + d² ⟨N⟩²)`. The violation is
//! `F = sqrt(m² + d² n²) − l`. For `d = 3` this is the qubit-qutrit form with
//! coefficients `(2, −1, 2, 3)` and `(3, 2, −1, 2)`; for `d = 2` it is twice
//! the two-qubit form `⟨I⊗I + A_3⊗B_3⟩ ≥ sqrt(⟨I⊗B_3 + A_3⊗I⟩² + ⟨A_1⊗B_1 + A_2⊗B_2⟩²)`
//! after relabeling the qubit-side `B` family, see [`two_qubit_terms`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigs, ComplexMatrix, C64};
use crate::observables::{build_observables, ObservableSet, Orientation, UnitaryPair};
use crate::state::{schmidt_decompose, DensityMatrix, PureState, Subsystem};
use crate::tolerances::TOL;

/// Expectation values entering the inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityTerms {
    pub d: usize,
    /// `⟨L⟩`
    pub lhs: f64,
    /// `⟨M⟩`
    pub m: f64,
    /// `⟨N⟩`
    pub n: f64,
    /// `sqrt(m² + d² n²)`
    pub rhs: f64,
}

impl InequalityTerms {
    pub fn from_expectations(d: usize, lhs: f64, m: f64, n: f64) -> Self {
        let dn = d as f64 * n;
        Self { d, lhs, m, n, rhs: m.hypot(dn) }
    }

    pub fn violation(&self) -> f64 {
        self.rhs - self.lhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Violated,
    Satisfied,
}

impl Verdict {
    pub fn from_violation(f: f64) -> Self {
        if f > TOL.violation {
            Verdict::Violated
        } else {
            Verdict::Satisfied
        }
    }

    pub fn is_violated(self) -> bool {
        self == Verdict::Violated
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Direct,
    NptSeeded,
    Optimized,
}

#[derive(Debug, Clone)]
pub struct ViolationReport {
    pub d: usize,
    /// `rhs − lhs`; for [`Method::Optimized`] the clamped `max(0, ·)`.
    pub f: f64,
    pub pair: UnitaryPair,
    pub terms: InequalityTerms,
    pub verdict: Verdict,
    pub method: Method,
    /// Index of the optimizer restart that produced `pair`.
    pub restart: Option<usize>,
}

impl ViolationReport {
    fn direct(pair: UnitaryPair, terms: InequalityTerms, method: Method) -> Self {
        let f = terms.violation();
        Self { d: terms.d, f, pair, terms, verdict: Verdict::from_violation(f), method, restart: None }
    }
}

/// Qudit operators `X` and `Y` from the module docs.
fn qudit_parts(obs: &ObservableSet) -> (ComplexMatrix, ComplexMatrix) {
    let d = obs.d;
    let df = d as f64;
    let mut x = &ComplexMatrix::identity(d).scale_real(2.0) + &obs.b(1).scale_real(2.0 - df);
    for k in 2..d {
        x = &x + &obs.b(k).scale_real(2.0);
    }
    let y = obs.b(1).scale_real(df);
    (x, y)
}

/// Explicit `(L, M, N)` on `H_2 ⊗ H_d`.
pub fn inequality_operators(obs: &ObservableSet) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let i2 = ComplexMatrix::identity(2);
    let (x, y) = qudit_parts(obs);
    let l = &i2.kron(&x) + &obs.a(3).kron(&y);
    let m = &i2.kron(&y) + &obs.a(3).kron(&x);
    let n = &obs.a(1).kron(obs.b(obs.d)) + &obs.a(2).kron(obs.b(obs.d + 1));
    (l, m, n)
}

fn check_dims(rho: &DensityMatrix, d: usize) -> Result<()> {
    if rho.dim_a() != 2 {
        return Err(Error::DimensionMismatch(format!("first subsystem must be a qubit, got dim {}", rho.dim_a())));
    }
    if rho.dim_b() != d {
        return Err(Error::DimensionMismatch(format!("state has d = {}, observables have d = {d}", rho.dim_b())));
    }
    Ok(())
}

/// Terms via full operators and checked expectations.
pub fn terms_for(rho: &DensityMatrix, obs: &ObservableSet) -> Result<InequalityTerms> {
    check_dims(rho, obs.d)?;
    let (l, m, n) = inequality_operators(obs);
    Ok(InequalityTerms::from_expectations(obs.d, rho.expectation(&l)?, rho.expectation(&m)?, rho.expectation(&n)?))
}

/// The four qubit blocks `ρ_{ij} = ⟨i|ρ|j⟩` (each `d × d`), used to evaluate
/// `⟨A ⊗ B⟩ = Σ_{ij} A_{ji} Tr(ρ_{ij} B)` without forming Kronecker products.
#[derive(Debug, Clone)]
pub struct QubitBlocks {
    d: usize,
    blocks: [ComplexMatrix; 4],
}

impl QubitBlocks {
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        if rho.dim_a() != 2 {
            return Err(Error::DimensionMismatch("first subsystem must be a qubit".into()));
        }
        let d = rho.dim_b();
        let block = |i: usize, j: usize| ComplexMatrix::from_fn(d, d, |k, l| rho.matrix()[(i * d + k, j * d + l)]);
        Ok(Self { d, blocks: [block(0, 0), block(0, 1), block(1, 0), block(1, 1)] })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `[Tr(ρ_00 B), Tr(ρ_01 B), Tr(ρ_10 B), Tr(ρ_11 B)]`
    fn traces(&self, b: &ComplexMatrix) -> [C64; 4] {
        self.blocks.each_ref().map(|blk| crate::state::trace_product(blk, b))
    }

    fn pair_expectation(a: &ComplexMatrix, t: &[C64; 4]) -> f64 {
        (a[(0, 0)] * t[0] + a[(1, 0)] * t[1] + a[(0, 1)] * t[2] + a[(1, 1)] * t[3]).re
    }

    pub fn terms(&self, obs: &ObservableSet) -> InequalityTerms {
        let (x, y) = qudit_parts(obs);
        let tx = self.traces(&x);
        let ty = self.traces(&y);
        let identity_exp = |t: &[C64; 4]| (t[0] + t[3]).re;
        let a3 = obs.a(3);
        let lhs = identity_exp(&tx) + Self::pair_expectation(a3, &ty);
        let m = identity_exp(&ty) + Self::pair_expectation(a3, &tx);
        let n = Self::pair_expectation(obs.a(1), &self.traces(obs.b(obs.d)))
            + Self::pair_expectation(obs.a(2), &self.traces(obs.b(obs.d + 1)));
        InequalityTerms::from_expectations(obs.d, lhs, m, n)
    }

    pub fn violation(&self, pair: &UnitaryPair) -> f64 {
        self.terms(&pair.observables()).violation()
    }
}

fn check_pair(rho: &DensityMatrix, pair: &UnitaryPair) -> Result<()> {
    check_dims(rho, pair.d())
}

/// `F_{U,V}(ρ)` with every expectation computed explicitly.
pub fn violation_value(rho: &DensityMatrix, pair: &UnitaryPair) -> Result<ViolationReport> {
    check_pair(rho, pair)?;
    let terms = terms_for(rho, &pair.observables())?;
    Ok(ViolationReport::direct(pair.clone(), terms, Method::Direct))
}

pub fn violation_value_oriented(
    rho: &DensityMatrix,
    pair: &UnitaryPair,
    orientation: Orientation,
) -> Result<ViolationReport> {
    check_pair(rho, pair)?;
    let terms = terms_for(rho, &build_observables(pair, orientation))?;
    Ok(ViolationReport::direct(pair.clone(), terms, Method::Direct))
}

/// `⟨W_{U,V}⟩_ρ = lhs − rhs`; negative values certify entanglement.
pub fn witness_value(rho: &DensityMatrix, pair: &UnitaryPair) -> Result<f64> {
    Ok(-violation_value(rho, pair)?.f)
}

/// Two-qubit form: `⟨I⊗I + A_3⊗B'_3⟩` against
/// `sqrt(⟨I⊗B'_3 + A_3⊗I⟩² + ⟨A_1⊗B'_1 + A_2⊗B'_2⟩²)` with
/// `B'_j = V σ_j V†`. In terms of the generic family `B'_3 = B_1`,
/// `B'_1 = B_2`, `B'_2 = B_3`.
pub fn two_qubit_terms(rho: &DensityMatrix, obs: &ObservableSet) -> Result<InequalityTerms> {
    if obs.d != 2 {
        return Err(Error::DimensionMismatch(format!("two-qubit form needs d = 2, got {}", obs.d)));
    }
    check_dims(rho, 2)?;
    let i2 = ComplexMatrix::identity(2);
    let (b3, b1, b2) = (obs.b(1), obs.b(2), obs.b(3));
    let l = &i2.kron(&i2) + &obs.a(3).kron(b3);
    let m = &i2.kron(b3) + &obs.a(3).kron(&i2);
    let n = &obs.a(1).kron(b1) + &obs.a(2).kron(b2);
    let (l, m, n) = (rho.expectation(&l)?, rho.expectation(&m)?, rho.expectation(&n)?);
    Ok(InequalityTerms { d: 2, lhs: l, m, n, rhs: m.hypot(n) })
}

/// Unitary pair whose inequality is seeded by `|Φ⟩ = (U* ⊗ V)(α|00⟩ + β|11⟩)`.
pub fn seed_pair(phi: &[C64], d: usize) -> Result<UnitaryPair> {
    let psi = PureState::normalized(2, d, phi.to_vec())?;
    let s = schmidt_decompose(&psi)?;
    UnitaryPair::from_unitaries(&s.u, &s.v)
}

/// Seeds the inequality with each minimal eigenvector of `ρ^{T_1}` and
/// returns the best violation. The result satisfies `F ≥ −4d·λ_min` up to
/// rounding, so every NPT state is reported as violated.
pub fn npt_seeded_violation(rho: &DensityMatrix) -> Result<ViolationReport> {
    if rho.dim_a() != 2 {
        return Err(Error::DimensionMismatch("first subsystem must be a qubit".into()));
    }
    let d = rho.dim_b();
    let eig = hermitian_eigs(&rho.partial_transpose(Subsystem::First))?;
    let lmin = eig.min();
    let mut best: Option<ViolationReport> = None;
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam - lmin > TOL.degeneracy {
            break;
        }
        let pair = seed_pair(&eig.vector(k), d)?;
        let mut report = violation_value(rho, &pair)?;
        report.method = Method::NptSeeded;
        if best.as_ref().is_none_or(|b| report.f > b.f + 1e-12) {
            best = Some(report);
        }
    }
    Ok(best.expect("at least one eigenvector"))
}

/// Pure-state concurrence `2αβ` from the Schmidt coefficients.
pub fn concurrence_pure(psi: &PureState) -> Result<f64> {
    let s = schmidt_decompose(psi)?;
    Ok((2.0 * s.alpha * s.beta).clamp(0.0, 1.0))
}

/// `sqrt(2 (1 − Tr ρ_A²))`.
pub fn concurrence_from_purity(psi: &PureState) -> f64 {
    let red = psi.density().partial_trace(Subsystem::Second);
    let purity = crate::state::trace_product(&red, &red).re;
    (2.0 * (1.0 - purity)).max(0.0).sqrt()
}

/// Expansion of `(|ψ⟩⟨ψ|)^{T_1}` for `|ψ⟩ = α|00⟩ + β|11⟩` on `H_2 ⊗ H_3`
/// in the `σ ⊗ λ` basis, with `C = 2αβ` and `s = sqrt(1 − C²)`.
pub fn pt_expansion_oracle(alpha: f64) -> Result<ComplexMatrix> {
    let beta2 = 1.0 - alpha * alpha;
    if !(0.0..=1.0).contains(&alpha) || beta2 < 0.0 || beta2.sqrt() > alpha + 1e-15 {
        return Err(Error::ParameterOutOfRange(format!("alpha = {alpha} outside [1/sqrt(2), 1]")));
    }
    let beta = beta2.sqrt();
    let c = 2.0 * alpha * beta;
    let s = (1.0 - c * c).max(0.0).sqrt();
    let p = |i| crate::observables::pauli(i).expect("valid");
    let l = |j| crate::observables::lambda_gen(3, j).expect("valid");
    let (i2, i3) = (ComplexMatrix::identity(2), ComplexMatrix::identity(3));
    let terms: [(f64, ComplexMatrix); 6] = [
        (1.0, i2.kron(&i3)),
        (-0.5 + 1.5 * s, i2.kron(&l(1))),
        (1.0, i2.kron(&l(2))),
        (s, p(3).kron(&i3)),
        (1.5 - 0.5 * s, p(3).kron(&l(1))),
        (s, p(3).kron(&l(2))),
    ];
    let mut acc = ComplexMatrix::zeros(6, 6);
    for (w, m) in &terms {
        acc = &acc + &m.scale_real(w / 6.0);
    }
    let off = &p(1).kron(&l(3)) + &p(2).kron(&l(4));
    Ok(&acc + &off.scale_real(c / 4.0))
}
