//! Multi-start Nelder–Mead search for `max_{U,V} F_{U,V}(ρ)`.
//!
//! Restart 0 starts from the partial-transpose seed, restart 1 from `U = V = I`
//! and restart `i ≥ 2` from parameters drawn uniformly in `[−π, π]` out of
//! the substream `(seed, i)`, so adding restarts never changes earlier ones.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequality::{npt_seeded_violation, terms_for, Method, QubitBlocks, Verdict, ViolationReport};
use crate::observables::UnitaryPair;
use crate::rng;
use crate::state::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Simplex iterations per restart.
    pub max_iters: usize,
    /// Stop once the simplex values spread by less than this.
    pub tol: f64,
    pub seed: u64,
    pub include_npt_seed: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 32, max_iters: 2000, tol: 1e-9, seed: 0, include_npt_seed: true }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::ParameterOutOfRange("restarts must be >= 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 || self.max_iters == 0 {
            return Err(Error::ParameterOutOfRange("tolerance and iteration budget must be positive".into()));
        }
        Ok(())
    }
}

const TIE: f64 = 1e-12;
const INITIAL_STEP: f64 = 0.6;

struct Objective<'a> {
    blocks: &'a QubitBlocks,
    d: usize,
}

impl Objective<'_> {
    fn eval(&self, x: &[f64]) -> f64 {
        match UnitaryPair::from_params(x, self.d) {
            Ok(pair) => {
                let f = self.blocks.violation(&pair);
                if f.is_finite() {
                    f
                } else {
                    f64::NEG_INFINITY
                }
            }
            Err(_) => f64::NEG_INFINITY,
        }
    }
}

/// Nelder–Mead maximization with standard coefficients. The simplex is
/// rebuilt around the incumbent after each convergence until a rebuild stops
/// paying off or the iteration budget runs out.
fn nelder_mead(obj: &Objective, start: &[f64], max_iters: usize, tol: f64) -> (Vec<f64>, f64) {
    let n = start.len();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut best_x = start.to_vec();
    let mut best_f = obj.eval(start);
    let mut iters = 0;
    let mut step = INITIAL_STEP;

    while iters < max_iters {
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((best_x.clone(), best_f));
        for i in 0..n {
            let mut x = best_x.clone();
            x[i] += step;
            let f = obj.eval(&x);
            simplex.push((x, f));
        }
        let round_start = best_f;

        while iters < max_iters {
            iters += 1;
            simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
            if simplex[0].1 - simplex[n].1 <= tol {
                break;
            }
            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, v) in centroid.iter_mut().zip(x) {
                    *c += v / n as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (c - w)).collect()
            };
            let xr = along(alpha);
            let fr = obj.eval(&xr);
            if fr > simplex[0].1 {
                let xe = along(gamma);
                let fe = obj.eval(&xe);
                simplex[n] = if fe > fr { (xe, fe) } else { (xr, fr) };
            } else if fr > simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                let (xc, fc) = if fr > simplex[n].1 {
                    let xc = along(rho);
                    let fc = obj.eval(&xc);
                    (xc, fc)
                } else {
                    let xc = along(-rho);
                    let fc = obj.eval(&xc);
                    (xc, fc)
                };
                if fc > simplex[n].1.max(fr) {
                    simplex[n] = (xc, fc);
                } else {
                    let top = simplex[0].0.clone();
                    for (x, f) in simplex.iter_mut().skip(1) {
                        for (xi, ti) in x.iter_mut().zip(&top) {
                            *xi = ti + sigma * (*xi - ti);
                        }
                        *f = obj.eval(x);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        if simplex[0].1 > best_f {
            best_f = simplex[0].1;
            best_x = simplex[0].0.clone();
        }
        if best_f - round_start <= tol {
            break;
        }
        step = (step * 0.5).max(1e-3);
    }
    (best_x, best_f)
}

/// One simplex run from `start_params` (length `4 + d²`). The reported `f` is
/// the raw best value, not clamped.
pub fn local_search(rho: &DensityMatrix, start_params: &[f64], config: &OptimizerConfig) -> Result<ViolationReport> {
    config.validate()?;
    let blocks = QubitBlocks::new(rho)?;
    let d = blocks.d();
    let expected = UnitaryPair::param_len(d);
    if start_params.len() != expected {
        return Err(Error::WrongParameterCount { expected, got: start_params.len() });
    }
    let obj = Objective { blocks: &blocks, d };
    let (x, _) = nelder_mead(&obj, start_params, config.max_iters, config.tol);
    let pair = UnitaryPair::from_params(&x, d)?;
    let terms = terms_for(rho, &pair.observables())?;
    let f = terms.violation();
    Ok(ViolationReport { d, f, pair, terms, verdict: Verdict::from_violation(f), method: Method::Optimized, restart: None })
}

/// Starting parameters for restart `index`.
pub fn restart_start(rho: &DensityMatrix, index: usize, config: &OptimizerConfig) -> Result<Vec<f64>> {
    let d = rho.dim_b();
    let len = UnitaryPair::param_len(d);
    let offset = usize::from(!config.include_npt_seed);
    match index + offset {
        0 => Ok(npt_seeded_violation(rho)?.pair.params().to_vec()),
        1 => Ok(vec![0.0; len]),
        _ => {
            let mut r = rng::substream(config.seed, index as u64);
            let pi = std::f64::consts::PI;
            Ok((0..len).map(|_| rand::Rng::random_range(&mut r, -pi..=pi)).collect())
        }
    }
}

fn run_restart(rho: &DensityMatrix, index: usize, config: &OptimizerConfig) -> Result<ViolationReport> {
    let start = restart_start(rho, index, config)?;
    let mut report = local_search(rho, &start, config)?;
    report.restart = Some(index);
    Ok(report)
}

/// `F̂(ρ) = max(0, best F over all restarts)`. Ties within `1e-12` go to
/// the lowest restart index, independent of scheduling.
pub fn maximize_violation(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<ViolationReport> {
    config.validate()?;
    QubitBlocks::new(rho)?;

    #[cfg(feature = "parallel")]
    let runs: Vec<Result<ViolationReport>> = {
        use rayon::prelude::*;
        (0..config.restarts).into_par_iter().map(|i| run_restart(rho, i, config)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<Result<ViolationReport>> = (0..config.restarts).map(|i| run_restart(rho, i, config)).collect();

    let mut best: Option<ViolationReport> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.f > b.f + TIE) {
            best = Some(run);
        }
    }
    let mut best = best.expect("restarts >= 1");
    best.f = best.f.max(0.0);
    best.verdict = Verdict::from_violation(best.f);
    best.method = Method::Optimized;
    Ok(best)
}
