//! Shot-noise simulation of the inequality with three local settings.
//!
//! - `S0`: `A_3` on the qubit and a projective measurement in the `V` basis
//!   on the qudit. `B_1, …, B_{d−1}` are diagonal in that basis, so `⟨L⟩`
//!   and `⟨M⟩` come out of the same counts.
//! - `S1`: `A_1 ⊗ B_d`.
//! - `S2`: `A_2 ⊗ B_{d+1}`.
//!
//! `⟨N⟩` is the sum of the two correlators from `S1` and `S2`. The estimate
//! of `F` is the plug-in value; its standard error comes from first-order
//! propagation through `sqrt(m² + d² n²)`.

use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigs, ComplexMatrix};
use crate::observables::{lambda_gen, UnitaryPair};
use crate::rng;
use crate::state::{trace_product, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SettingLabel {
    S0,
    S1,
    S2,
}

/// One outcome projector and its eigenvalue label(s). For `S0` on the qudit
/// side the labels are the values of `B_1, …, B_{d−1}`; elsewhere there is a
/// single label.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub labels: Vec<f64>,
    pub projector: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct MeasurementSetting {
    pub label: SettingLabel,
    pub d: usize,
    pub a_outcomes: Vec<Outcome>,
    pub b_outcomes: Vec<Outcome>,
}

impl MeasurementSetting {
    pub fn outcome_count(&self) -> usize {
        self.a_outcomes.len() * self.b_outcomes.len()
    }

    /// Outcome `(a, b)` is flattened to `a · |b outcomes| + b`.
    pub fn split(&self, idx: usize) -> (&Outcome, &Outcome) {
        let nb = self.b_outcomes.len();
        (&self.a_outcomes[idx / nb], &self.b_outcomes[idx % nb])
    }

    pub fn joint_projector(&self, idx: usize) -> ComplexMatrix {
        let (a, b) = self.split(idx);
        a.projector.kron(&b.projector)
    }

    /// Born-rule probabilities `Tr(ρ Π_a ⊗ Π_b)`, checked to sum to 1.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        if rho.dim_a() != 2 || rho.dim_b() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "setting is for 2x{}, state is {}x{}",
                self.d,
                rho.dim_a(),
                rho.dim_b()
            )));
        }
        let probs: Vec<f64> = (0..self.outcome_count())
            .map(|k| trace_product(rho.matrix(), &self.joint_projector(k)).re.max(0.0))
            .collect();
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidProbabilities(total));
        }
        Ok(probs)
    }

    /// `Σ_k w_k g(labels_a, labels_b)` for an outcome distribution `w`.
    pub fn mean(&self, weights: &[f64], g: impl Fn(&[f64], &[f64]) -> f64) -> f64 {
        weights
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let (a, b) = self.split(k);
                w * g(&a.labels, &b.labels)
            })
            .sum()
    }
}

fn basis_projector(u: &ComplexMatrix, k: usize) -> ComplexMatrix {
    ComplexMatrix::projector(&u.column(k))
}

/// Spectral projectors of a Hermitian matrix, degenerate eigenvalues
/// grouped, in ascending eigenvalue order.
fn spectral_outcomes(h: &ComplexMatrix) -> Vec<Outcome> {
    let eig = hermitian_eigs(h).expect("Hermitian observable");
    let mut out: Vec<Outcome> = Vec::new();
    for (k, &lam) in eig.values.iter().enumerate() {
        let p = ComplexMatrix::projector(&eig.vector(k));
        match out.last_mut() {
            Some(o) if (o.labels[0] - lam).abs() < 1e-9 => o.projector = &o.projector + &p,
            _ => out.push(Outcome { labels: vec![lam.round()], projector: p }),
        }
    }
    out
}

/// The three settings for `(U, V)`.
pub fn settings_for(pair: &UnitaryPair) -> [MeasurementSetting; 3] {
    let d = pair.d();
    let obs = pair.observables();
    let a0 = vec![
        Outcome { labels: vec![1.0], projector: basis_projector(pair.u(), 0) },
        Outcome { labels: vec![-1.0], projector: basis_projector(pair.u(), 1) },
    ];
    let lambdas: Vec<ComplexMatrix> = (1..d).map(|j| lambda_gen(d, j).expect("j < d")).collect();
    let b0 = (0..d)
        .map(|k| Outcome {
            labels: lambdas.iter().map(|l| l[(k, k)].re).collect(),
            projector: basis_projector(pair.v(), k),
        })
        .collect();
    let s0 = MeasurementSetting { label: SettingLabel::S0, d, a_outcomes: a0, b_outcomes: b0 };
    let s1 = MeasurementSetting {
        label: SettingLabel::S1,
        d,
        a_outcomes: spectral_outcomes(obs.a(1)),
        b_outcomes: spectral_outcomes(obs.b(d)),
    };
    let s2 = MeasurementSetting {
        label: SettingLabel::S2,
        d,
        a_outcomes: spectral_outcomes(obs.a(2)),
        b_outcomes: spectral_outcomes(obs.b(d + 1)),
    };
    [s0, s1, s2]
}

/// Multinomial counts drawn as a chain of binomials, deterministic in `seed`.
pub fn sample_setting(rho: &DensityMatrix, setting: &MeasurementSetting, shots: u64, seed: u64) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::ParameterOutOfRange("shots must be >= 1".into()));
    }
    let probs = setting.probabilities(rho)?;
    Ok(sample_multinomial(&probs, shots, seed))
}

fn sample_multinomial(probs: &[f64], shots: u64, seed: u64) -> Vec<u64> {
    let mut r = rng::seeded(seed);
    let mut left = shots;
    let mut mass: f64 = probs.iter().sum();
    let mut counts = vec![0; probs.len()];
    for (k, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        if k + 1 == probs.len() {
            counts[k] = left;
            break;
        }
        let q = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let c = Binomial::new(left, q).expect("q in [0, 1]").sample(&mut r);
        counts[k] = c;
        left -= c;
        mass -= p;
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingCounts {
    pub label: SettingLabel,
    pub counts: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub d: usize,
    /// `⟨L⟩`
    pub lhs: Estimate,
    /// `⟨M⟩`
    pub m: Estimate,
    /// `⟨A_1 ⊗ B_d⟩`
    pub n1: Estimate,
    /// `⟨A_2 ⊗ B_{d+1}⟩`
    pub n2: Estimate,
    /// `⟨N⟩ = n1 + n2`
    pub n: Estimate,
    /// `sqrt(m² + d² n²)`
    pub rhs: Estimate,
    pub f: Estimate,
    /// `true` when `m = n = 0` forced the conservative bound.
    pub degenerate_rhs: bool,
    pub shots_per_setting: u64,
    pub seed: u64,
    pub settings: Vec<SettingCounts>,
}

/// Mean of `g` under `w` and the standard error of a sample mean of
/// `shots` draws (unbiased variance). `shots = None` means exact.
fn moment(w: &[f64], g: &[f64], shots: Option<u64>) -> (f64, f64) {
    let mean: f64 = w.iter().zip(g).map(|(p, x)| p * x).sum();
    let se = match shots {
        Some(n) if n > 1 => {
            let var: f64 = w.iter().zip(g).map(|(p, x)| p * (x - mean) * (x - mean)).sum();
            (var * n as f64 / (n - 1) as f64 / n as f64).max(0.0).sqrt()
        }
        _ => 0.0,
    };
    (mean, se)
}

fn qudit_weights(d: usize, b_labels: &[f64]) -> (f64, f64) {
    // X = 2I + (2−d) B_1 + 2 Σ_{k≥2} B_k,  Y = d B_1, evaluated on one basis outcome
    let df = d as f64;
    let x = 2.0 + (2.0 - df) * b_labels[0] + 2.0 * b_labels[1..].iter().sum::<f64>();
    (x, df * b_labels[0])
}

/// Builds the report from outcome frequencies for `S0, S1, S2`.
/// `shots = None` treats the frequencies as exact probabilities.
pub fn estimate_from_frequencies(
    settings: &[MeasurementSetting; 3],
    freqs: &[Vec<f64>; 3],
    shots: Option<u64>,
) -> EstimateReport {
    let d = settings[0].d;
    let df = d as f64;
    let s0 = &settings[0];
    let per_outcome = |f: &dyn Fn(f64, f64, f64) -> f64| -> Vec<f64> {
        (0..s0.outcome_count())
            .map(|k| {
                let (a, b) = s0.split(k);
                let (x, y) = qudit_weights(d, &b.labels);
                f(a.labels[0], x, y)
            })
            .collect()
    };
    let l_vals = per_outcome(&|a, x, y| x + a * y);
    let m_vals = per_outcome(&|a, x, y| y + a * x);
    let (l, l_se) = moment(&freqs[0], &l_vals, shots);
    let (m, m_se) = moment(&freqs[0], &m_vals, shots);

    let corr = |s: &MeasurementSetting| -> Vec<f64> {
        (0..s.outcome_count())
            .map(|k| {
                let (a, b) = s.split(k);
                a.labels[0] * b.labels[0]
            })
            .collect()
    };
    let (n1, n1_se) = moment(&freqs[1], &corr(&settings[1]), shots);
    let (n2, n2_se) = moment(&freqs[2], &corr(&settings[2]), shots);
    let n = n1 + n2;
    let n_se = n1_se.hypot(n2_se);
    let rhs = m.hypot(df * n);
    let f = rhs - l;

    let degenerate = rhs < 1e-12;
    let (rhs_se, f_se) = if degenerate {
        let rhs_se = m_se + df * n_se;
        (rhs_se, l_se + rhs_se)
    } else {
        let (gm, gn) = (m / rhs, df * df * n / rhs);
        // S0 shares its samples between l and m: propagate the combined influence
        let infl: Vec<f64> = l_vals.iter().zip(&m_vals).map(|(lv, mv)| gm * mv - lv).collect();
        let (_, s0_se) = moment(&freqs[0], &infl, shots);
        let rhs_se = ((gm * m_se).powi(2) + (gn * n_se).powi(2)).sqrt();
        (rhs_se, (s0_se.powi(2) + (gn * n_se).powi(2)).sqrt())
    };

    EstimateReport {
        d,
        lhs: Estimate { value: l, stderr: l_se },
        m: Estimate { value: m, stderr: m_se },
        n1: Estimate { value: n1, stderr: n1_se },
        n2: Estimate { value: n2, stderr: n2_se },
        n: Estimate { value: n, stderr: n_se },
        rhs: Estimate { value: rhs, stderr: rhs_se },
        f: Estimate { value: f, stderr: f_se },
        degenerate_rhs: degenerate,
        shots_per_setting: shots.unwrap_or(0),
        seed: 0,
        settings: Vec::new(),
    }
}

/// Exact-probability version of [`estimate_violation`]; its `f` equals
/// [`crate::inequality::violation_value`] up to rounding.
pub fn exact_estimate(rho: &DensityMatrix, pair: &UnitaryPair) -> Result<EstimateReport> {
    let settings = settings_for(pair);
    let freqs = [settings[0].probabilities(rho)?, settings[1].probabilities(rho)?, settings[2].probabilities(rho)?];
    Ok(estimate_from_frequencies(&settings, &freqs, None))
}

/// Samples `shots_per_setting` outcomes in each setting (setting `k` uses
/// substream `(seed, k)`) and estimates `F`.
pub fn estimate_violation(
    rho: &DensityMatrix,
    pair: &UnitaryPair,
    shots_per_setting: u64,
    seed: u64,
) -> Result<EstimateReport> {
    if shots_per_setting == 0 {
        return Err(Error::ParameterOutOfRange("shots must be >= 1".into()));
    }
    if rho.dim_a() != 2 || rho.dim_b() != pair.d() {
        return Err(Error::DimensionMismatch(format!("state is {}x{}, pair has d = {}", rho.dim_a(), rho.dim_b(), pair.d())));
    }
    let settings = settings_for(pair);
    let mut counts: Vec<Vec<u64>> = Vec::with_capacity(3);
    for (k, s) in settings.iter().enumerate() {
        counts.push(sample_setting(rho, s, shots_per_setting, rng::substream_seed(seed, k as u64))?);
    }
    let total = shots_per_setting as f64;
    let freqs: [Vec<f64>; 3] = std::array::from_fn(|k| counts[k].iter().map(|&c| c as f64 / total).collect());
    let mut report = estimate_from_frequencies(&settings, &freqs, Some(shots_per_setting));
    report.seed = seed;
    report.settings = settings
        .iter()
        .zip(counts)
        .map(|(s, counts)| SettingCounts { label: s.label, counts })
        .collect();
    Ok(report)
}
