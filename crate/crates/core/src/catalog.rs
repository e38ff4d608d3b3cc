//! State families and fixed unitary pairs used by the examples, tests, CLI
//! and demo.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{complete_basis, inner, ComplexMatrix, C64, ONE, ZERO};
use crate::observables::UnitaryPair;
use crate::rng::{self, dirichlet_uniform, haar_vector};
use crate::state::{DensityMatrix, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    SchmidtPure,
    Isotropic23,
    SigmaB,
    RandomSeparable,
    RandomDensity,
    NqubitPure,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::SchmidtPure => "schmidt-pure",
            Family::Isotropic23 => "isotropic23",
            Family::SigmaB => "sigma-b",
            Family::RandomSeparable => "random-separable",
            Family::RandomDensity => "random-density",
            Family::NqubitPure => "nqubit-pure",
        }
    }
}

/// Reproducible description of a catalog state.
///
/// | family | params |
/// |---|---|
/// | `schmidt-pure` | `alpha`, `d` |
/// | `isotropic23` | `p` |
/// | `sigma-b` | `b` |
/// | `random-separable` | `d`, `terms` (+ `seed`) |
/// | `random-density` | `d`, `rank` (+ `seed`) |
/// | `nqubit-pure` | `n`, `qubit`, optional `ghz = 1` (+ `seed`) |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub family: Family,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl StateSpec {
    pub fn new(family: Family, params: &[(&str, f64)], seed: Option<u64>) -> Self {
        Self { family, params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(), seed }
    }

    fn param(&self, key: &str) -> Result<f64> {
        self.params
            .get(key)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("{} needs parameter `{key}`", self.family.name())))
    }

    fn count(&self, key: &str) -> Result<usize> {
        let x = self.param(key)?;
        if x < 0.0 || x.fract() != 0.0 {
            return Err(Error::ParameterOutOfRange(format!("`{key}` must be a nonnegative integer, got {x}")));
        }
        Ok(x as usize)
    }

    fn seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| Error::Invalid(format!("{} needs a seed", self.family.name())))
    }

    pub fn build(&self) -> Result<DensityMatrix> {
        match self.family {
            Family::SchmidtPure => schmidt_pure(self.param("alpha")?, self.count("d")?),
            Family::Isotropic23 => isotropic23(self.param("p")?),
            Family::SigmaB => sigma_b(self.param("b")?),
            Family::RandomSeparable => random_separable(self.count("d")?, self.count("terms")?, self.seed()?),
            Family::RandomDensity => random_density(self.count("d")?, self.count("rank")?, self.seed()?),
            Family::NqubitPure => {
                let n = self.count("n")?;
                if !(2..=12).contains(&n) {
                    return Err(Error::ParameterOutOfRange(format!("n = {n} outside 2..=12")));
                }
                let amps = if self.params.get("ghz").copied() == Some(1.0) {
                    ghz(n)
                } else {
                    haar_vector(&mut rng::seeded(self.seed()?), 1 << n)
                };
                Ok(nqubit_bipartition(&amps, self.count("qubit")?)?.density())
            }
        }
    }
}

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Haar-random unitary: Gram-Schmidt on a complex Gaussian matrix.
pub fn haar_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    loop {
        let cols: Vec<Vec<C64>> = (0..n).map(|_| rng::complex_gaussian(rng, n)).collect();
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(n);
        let mut ok = true;
        for mut v in cols {
            for _ in 0..2 {
                for b in &basis {
                    let c = inner(b, &v);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x -= c * y;
                    }
                }
            }
            let nv = crate::linalg::norm(&v);
            if nv < 1e-8 {
                ok = false;
                break;
            }
            basis.push(v.into_iter().map(|z| z / nv).collect());
        }
        if ok {
            return complete_basis(&basis, n);
        }
    }
}

/// `α|00⟩ + β|11⟩` on `H_2 ⊗ H_d` with `β = sqrt(1 − α²)`.
pub fn schmidt_pure(alpha: f64, d: usize) -> Result<DensityMatrix> {
    if !(std::f64::consts::FRAC_1_SQRT_2 - 1e-15..=1.0).contains(&alpha) {
        return Err(Error::ParameterOutOfRange(format!("alpha = {alpha} outside [1/sqrt(2), 1]")));
    }
    if d < 2 {
        return Err(Error::ParameterOutOfRange(format!("d = {d} < 2")));
    }
    let mut amps = vec![ZERO; 2 * d];
    amps[0] = r(alpha);
    amps[d + 1] = r((1.0 - alpha * alpha).max(0.0).sqrt());
    Ok(PureState::normalized(2, d, amps)?.density())
}

/// `p |ψ+⟩⟨ψ+| + (1 − p) I_6 / 6` with `|ψ+⟩ = (|00⟩ + |11⟩)/√2` on `H_2 ⊗ H_3`.
pub fn isotropic23(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParameterOutOfRange(format!("p = {p} outside [0, 1]")));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![ZERO; 6];
    amps[0] = r(h);
    amps[4] = r(h);
    let pure = ComplexMatrix::projector(&amps).scale_real(p);
    let noise = ComplexMatrix::identity(6).scale_real((1.0 - p) / 6.0);
    DensityMatrix::new(2, 3, &pure + &noise)
}

/// Horodecki's PPT entangled family on `H_2 ⊗ H_4`, 0-based labels:
///
/// ```text
/// σ_b = 7b/(7b+1) σ_insep + 1/(7b+1) |φ_b⟩⟨φ_b|
/// σ_insep = 2/7 Σ_k |ψ_k⟩⟨ψ_k| + 1/7 |03⟩⟨03|,   |ψ_k⟩ = (|0,k−1⟩ + |1,k⟩)/√2, k = 1..3
/// |φ_b⟩ = |1⟩ ⊗ (sqrt((1+b)/2) |0⟩ + sqrt((1−b)/2) |3⟩)
/// ```
pub fn sigma_b(b: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&b) {
        return Err(Error::ParameterOutOfRange(format!("b = {b} outside [0, 1]")));
    }
    let ket = |a: usize, k: usize| {
        let mut v = vec![ZERO; 8];
        v[a * 4 + k] = ONE;
        v
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut insep = ComplexMatrix::projector(&ket(0, 3)).scale_real(1.0 / 7.0);
    for k in 0..3 {
        let psi: Vec<C64> = ket(0, k).iter().zip(ket(1, k + 1)).map(|(x, y)| (x + y) * h).collect();
        insep = &insep + &ComplexMatrix::projector(&psi).scale_real(2.0 / 7.0);
    }
    let (c0, c3) = (((1.0 + b) / 2.0).sqrt(), ((1.0 - b) / 2.0).sqrt());
    let phi: Vec<C64> = ket(1, 0).iter().zip(ket(1, 3)).map(|(x, y)| x * c0 + y * c3).collect();
    let w = 7.0 * b + 1.0;
    let m = &insep.scale_real(7.0 * b / w) + &ComplexMatrix::projector(&phi).scale_real(1.0 / w);
    DensityMatrix::new(2, 4, m)
}

/// `Σ_k w_k |a_k⟩⟨a_k| ⊗ |b_k⟩⟨b_k|` with Haar-random factors and flat
/// Dirichlet weights.
pub fn random_separable(d: usize, terms: usize, seed: u64) -> Result<DensityMatrix> {
    if terms == 0 {
        return Err(Error::ParameterOutOfRange("terms must be >= 1".into()));
    }
    if d < 2 {
        return Err(Error::ParameterOutOfRange(format!("d = {d} < 2")));
    }
    let mut rng = rng::seeded(seed);
    let weights = if terms == 1 { vec![1.0] } else { dirichlet_uniform(&mut rng, terms) };
    let mut acc = ComplexMatrix::zeros(2 * d, 2 * d);
    for w in weights {
        let a = haar_vector(&mut rng, 2);
        let b = haar_vector(&mut rng, d);
        let prod = ComplexMatrix::projector(&a).kron(&ComplexMatrix::projector(&b));
        acc = &acc + &prod.scale_real(w);
    }
    DensityMatrix::new(2, d, hermitize(acc))
}

/// Mixture of `rank` Haar-random pure states with flat Dirichlet weights.
pub fn random_density(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::ParameterOutOfRange(format!("d = {d} < 2")));
    }
    if rank == 0 || rank > 2 * d {
        return Err(Error::ParameterOutOfRange(format!("rank {rank} outside 1..={}", 2 * d)));
    }
    let mut rng = rng::seeded(seed);
    let weights = if rank == 1 { vec![1.0] } else { dirichlet_uniform(&mut rng, rank) };
    let mut acc = ComplexMatrix::zeros(2 * d, 2 * d);
    for w in weights {
        acc = &acc + &ComplexMatrix::projector(&haar_vector(&mut rng, 2 * d)).scale_real(w);
    }
    DensityMatrix::new(2, d, hermitize(acc))
}

fn hermitize(m: ComplexMatrix) -> ComplexMatrix {
    let m = (&m + &m.dagger()).scale_real(0.5);
    let t = m.trace().re;
    m.scale_real(1.0 / t)
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz(n: usize) -> Vec<C64> {
    let mut v = vec![ZERO; 1 << n];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    v[0] = r(h);
    v[(1 << n) - 1] = r(h);
    v
}

/// Views an `n`-qubit state as `2 ⊗ 2^{n−1}` with `qubit` (0 = most
/// significant) as the first factor; the remaining qubits keep their order.
pub fn nqubit_bipartition(amplitudes: &[C64], qubit: usize) -> Result<PureState> {
    let len = amplitudes.len();
    if len < 4 || !len.is_power_of_two() {
        return Err(Error::DimensionMismatch(format!("{len} amplitudes is not 2^n with n >= 2")));
    }
    let n = len.trailing_zeros() as usize;
    if qubit >= n {
        return Err(Error::IndexOutOfRange { index: qubit, range: format!("0..{n}") });
    }
    let shift = n - 1 - qubit;
    let low_mask = (1usize << shift) - 1;
    let rest = len / 2;
    let mut out = vec![ZERO; len];
    for (idx, &amp) in amplitudes.iter().enumerate() {
        let bit = (idx >> shift) & 1;
        let others = ((idx >> (shift + 1)) << shift) | (idx & low_mask);
        out[bit * rest + others] = amp;
    }
    PureState::new(2, rest, out)
}

/// `U = I_2`, `V = |0⟩⟨1| + |1⟩⟨0| + |2⟩⟨2|`: `F = 8p − 2` on [`isotropic23`].
pub fn isotropic_pair() -> UnitaryPair {
    let v = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]);
    UnitaryPair::from_unitaries(&ComplexMatrix::identity(2), &v).expect("unitary")
}

/// `U = cos t (|0⟩⟨0| + |1⟩⟨1|) + sin t (|0⟩⟨1| − |1⟩⟨0|)`, `V = I_4`.
pub fn rotation_pair(t: f64) -> UnitaryPair {
    let (s, c) = t.sin_cos();
    let u = ComplexMatrix::from_real_rows(&[&[c, s], &[-s, c]]);
    UnitaryPair::from_unitaries(&u, &ComplexMatrix::identity(4)).expect("unitary")
}

/// `U = |0⟩⟨1| − |1⟩⟨0|`, `V = I_4`, the pair suggested for [`sigma_b`].
pub fn sigma_b_pair() -> UnitaryPair {
    rotation_pair(std::f64::consts::FRAC_PI_2)
}

/// `−8b − 4(1+b) + sqrt(4096 b² + (−8b + 4(1+b))²)`, the closed form quoted
/// for [`sigma_b`] under [`sigma_b_pair`]. Direct evaluation disagrees; this
/// is kept only to compare against.
pub fn sigma_b_quoted_curve(b: f64) -> f64 {
    let m = -8.0 * b + 4.0 * (1.0 + b);
    -8.0 * b - 4.0 * (1.0 + b) + (4096.0 * b * b + m * m).sqrt()
}
