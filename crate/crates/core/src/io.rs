//! File formats: the JSON state and pair files and the scan grid rows.
//!
//! State file:
//!
//! ```json
//! {
//!   "dims": [2, 3],
//!   "matrix": [[[0.5, 0.0], [0.0, 0.0], ...], ...],
//!   "family": "isotropic23",
//!   "params": {"p": 1.0},
//!   "seed": null
//! }
//! ```
//!
//! `matrix` holds `2d` rows of `2d` `[re, im]` pairs. `family`, `params`
//! and `seed` are optional and only echoed.
//!
//! Pair file, either form:
//!
//! ```json
//! {"u": [[[1,0],[0,0]],[[0,0],[1,0]]], "v": [[...]]}
//! {"d": 3, "params": [0.0, ...]}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::{self, Family, StateSpec};
use crate::criteria::{ccnr_score, majorization_check, ppt_min_eig, reduction_min_eig};
use crate::error::{Error, Result};
use crate::inequality::{npt_seeded_violation, violation_value};
use crate::linalg::{ComplexMatrix, C64};
use crate::observables::UnitaryPair;
use crate::optimizer::{maximize_violation, OptimizerConfig};
use crate::state::DensityMatrix;

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<ComplexMatrix> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!("row {i} has {} entries, row 0 has {cols}", r.len())));
    }
    let data = rows.iter().flatten().map(|[re, im]| C64::new(*re, *im)).collect();
    ComplexMatrix::new(n, cols, data)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub matrix: JsonMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        Self { dims: [rho.dim_a(), rho.dim_b()], matrix: matrix_to_json(rho.matrix()), family: None, params: None, seed: None }
    }

    pub fn from_spec(spec: &StateSpec) -> Result<Self> {
        let rho = spec.build()?;
        Ok(Self { family: Some(spec.family), params: Some(spec.params.clone()), seed: spec.seed, ..Self::from_density(&rho) })
    }

    /// Validates shape and every density-matrix invariant.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let [da, db] = self.dims;
        if da != 2 {
            return Err(Error::DimensionMismatch(format!("dims[0] must be 2, got {da}")));
        }
        if db < 2 {
            return Err(Error::DimensionMismatch(format!("dims[1] must be >= 2, got {db}")));
        }
        let m = matrix_from_json(&self.matrix)?;
        if m.rows() != 2 * db || m.cols() != 2 * db {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, dims [2, {db}] need {}x{}",
                m.rows(),
                m.cols(),
                2 * db,
                2 * db
            )));
        }
        DensityMatrix::new(da, db, m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("state file: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PairFile {
    Matrices { u: JsonMatrix, v: JsonMatrix },
    Params { d: usize, params: Vec<f64> },
}

impl PairFile {
    pub fn from_pair(pair: &UnitaryPair) -> Self {
        PairFile::Matrices { u: matrix_to_json(pair.u()), v: matrix_to_json(pair.v()) }
    }

    pub fn to_pair(&self) -> Result<UnitaryPair> {
        match self {
            PairFile::Matrices { u, v } => {
                let (u, v) = (matrix_from_json(u)?, matrix_from_json(v)?);
                for (name, m) in [("U", &u), ("V", &v)] {
                    let dev = m.unitarity_deviation();
                    if dev > 1e-9 {
                        return Err(Error::Invalid(format!("{name} is not unitary (deviation {dev:.3e})")));
                    }
                }
                UnitaryPair::from_unitaries(&u, &v)
            }
            PairFile::Params { d, params } => UnitaryPair::from_params(params, *d),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("pair file: {e}")))
    }
}

/// Inclusive grid `start, start + step, …` up to `stop` (with a `1e-9`
/// relative allowance so `0:1:0.05` ends at 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Invalid(format!("range `{text}` is not start:stop:step")));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Invalid(format!("range `{text}`: `{s}` is not a number")));
        let r = Range { start: num(parts[0])?, stop: num(parts[1])?, step: num(parts[2])? };
        r.points()?;
        Ok(r)
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        let Range { start, stop, step } = *self;
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::Invalid("range bounds must be finite".into()));
        }
        if step <= 0.0 {
            return Err(Error::Invalid(format!("range step must be positive, got {step}")));
        }
        if stop < start {
            return Err(Error::Invalid(format!("empty range: stop {stop} < start {start}")));
        }
        let count = ((stop - start) / step * (1.0 + 1e-9) + 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(Error::Invalid(format!("range has {count} points")));
        }
        Ok((0..count).map(|i| (start + i as f64 * step).min(stop)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanFamily {
    Isotropic23,
    SigmaB,
}

impl ScanFamily {
    pub fn build(self, param: f64) -> Result<DensityMatrix> {
        match self {
            ScanFamily::Isotropic23 => catalog::isotropic23(param),
            ScanFamily::SigmaB => catalog::sigma_b(param),
        }
    }

    pub fn default_pair(self) -> UnitaryPair {
        match self {
            ScanFamily::Isotropic23 => catalog::isotropic_pair(),
            ScanFamily::SigmaB => catalog::sigma_b_pair(),
        }
    }

    pub fn family(self) -> Family {
        match self {
            ScanFamily::Isotropic23 => Family::Isotropic23,
            ScanFamily::SigmaB => Family::SigmaB,
        }
    }
}

/// Which pair the `f` column uses.
#[derive(Debug, Clone)]
pub enum PairChoice {
    /// Family default, or `rotation_pair(t)` when a rotation grid is given.
    Default,
    Fixed(UnitaryPair),
    NptSeed,
}

/// CSV header of the scan output, in column order.
pub const SCAN_HEADER: [&str; 13] = [
    "param",
    "rotation",
    "f",
    "f_opt",
    "lambda_min",
    "ccnr",
    "reduction",
    "majorization",
    "inequality_violated",
    "ppt_detected",
    "ccnr_detected",
    "reduction_detected",
    "majorization_detected",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub param: f64,
    pub rotation: Option<f64>,
    pub f: f64,
    pub f_opt: Option<f64>,
    pub lambda_min: f64,
    pub ccnr: f64,
    pub reduction: f64,
    pub majorization: f64,
    pub inequality_violated: bool,
    pub ppt_detected: bool,
    pub ccnr_detected: bool,
    pub reduction_detected: bool,
    pub majorization_detected: bool,
}

#[derive(Debug, Clone)]
pub struct ScanRequest {
    pub family: ScanFamily,
    pub range: Range,
    /// Optional grid over `t` in `rotation_pair(t)`; rows are emitted
    /// rotation-major.
    pub rotation: Option<Range>,
    pub pair: PairChoice,
    pub optimize: Option<OptimizerConfig>,
}

pub fn scan_row(rho: &DensityMatrix, param: f64, rotation: Option<f64>, pair: &PairChoice, optimize: Option<&OptimizerConfig>) -> Result<ScanRow> {
    let report = match (pair, rotation) {
        (PairChoice::NptSeed, _) => npt_seeded_violation(rho)?,
        (PairChoice::Fixed(p), _) => violation_value(rho, p)?,
        (PairChoice::Default, Some(t)) => violation_value(rho, &catalog::rotation_pair(t))?,
        (PairChoice::Default, None) => return Err(Error::Invalid("default pair must be resolved by the caller".into())),
    };
    let f_opt = optimize.map(|cfg| maximize_violation(rho, cfg)).transpose()?.map(|r| r.f);
    let ppt = ppt_min_eig(rho);
    let ccnr = ccnr_score(rho);
    let red = reduction_min_eig(rho);
    let maj = majorization_check(rho);
    Ok(ScanRow {
        param,
        rotation,
        f: report.f,
        f_opt,
        lambda_min: ppt.score,
        ccnr: ccnr.score,
        reduction: red.score,
        majorization: maj.score,
        inequality_violated: report.verdict.is_violated() || f_opt.is_some_and(|f| f > crate::tolerances::TOL.violation),
        ppt_detected: ppt.detected,
        ccnr_detected: ccnr.detected,
        reduction_detected: red.detected,
        majorization_detected: maj.detected,
    })
}

pub fn run_scan(req: &ScanRequest) -> Result<Vec<ScanRow>> {
    let params = req.range.points()?;
    let rotations: Vec<Option<f64>> = match &req.rotation {
        Some(r) => r.points()?.into_iter().map(Some).collect(),
        None => vec![None],
    };
    let pair = match (&req.pair, &req.rotation) {
        (PairChoice::Default, None) => PairChoice::Fixed(req.family.default_pair()),
        (p, _) => p.clone(),
    };
    let mut rows = Vec::with_capacity(params.len() * rotations.len());
    for t in &rotations {
        for &x in &params {
            let rho = req.family.build(x)?;
            rows.push(scan_row(&rho, x, *t, &pair, req.optimize.as_ref())?);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog_specs() -> Vec<StateSpec> {
        vec![
            StateSpec::new(Family::SchmidtPure, &[("alpha", 0.8), ("d", 4.0)], None),
            StateSpec::new(Family::Isotropic23, &[("p", 0.35)], None),
            StateSpec::new(Family::SigmaB, &[("b", 0.4)], None),
            StateSpec::new(Family::RandomSeparable, &[("d", 3.0), ("terms", 7.0)], Some(5)),
            StateSpec::new(Family::RandomDensity, &[("d", 5.0), ("rank", 3.0)], Some(8)),
            StateSpec::new(Family::NqubitPure, &[("n", 4.0), ("qubit", 2.0)], Some(1)),
        ]
    }

    #[test]
    fn state_file_round_trip_is_exact() {
        for spec in catalog_specs() {
            let file = StateFile::from_spec(&spec).unwrap();
            let back = StateFile::from_json(&file.to_json()).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.to_density().unwrap(), spec.build().unwrap(), "{:?}", spec.family);
        }
    }

    #[test]
    fn state_file_diagnostics() {
        let mut file = StateFile::from_density(&catalog::isotropic23(0.5).unwrap());
        file.dims = [3, 2];
        assert!(file.to_density().unwrap_err().to_string().contains("dims[0]"));
        file.dims = [2, 4];
        assert!(file.to_density().unwrap_err().to_string().contains("need 8x8"));
        file.dims = [2, 3];
        file.matrix[0][1] = [0.3, 0.0];
        assert!(matches!(file.to_density(), Err(Error::NotHermitian(_))));
        file.matrix[0][1] = [0.0, 0.0];
        file.matrix[0][0] = [0.9, 0.0];
        assert!(matches!(file.to_density(), Err(Error::InvalidTrace(_))));
        file.matrix[0].pop();
        assert!(file.to_density().is_err());
        assert!(StateFile::from_json("{\"dims\": [2]}").is_err());
    }

    #[test]
    fn pair_file_forms() {
        let pair = catalog::isotropic_pair();
        let text = serde_json::to_string(&PairFile::from_pair(&pair)).unwrap();
        let back = PairFile::from_json(&text).unwrap().to_pair().unwrap();
        assert!(back.v().approx_eq(pair.v(), 1e-12));
        let p = PairFile::from_json("{\"d\": 2, \"params\": [0,0,0,0,0,0,0,0]}").unwrap().to_pair().unwrap();
        assert_eq!(p, UnitaryPair::identity(2));
        let bad = PairFile::Matrices { u: matrix_to_json(&ComplexMatrix::identity(2).scale_real(2.0)), v: matrix_to_json(&ComplexMatrix::identity(3)) };
        assert!(bad.to_pair().is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(Range::parse("0:1:0.05").unwrap().points().unwrap().len(), 21);
        assert_eq!(Range::parse("0:1:0.01").unwrap().points().unwrap().len(), 101);
        assert_eq!(Range::parse("0.5:0.5:0.1").unwrap().points().unwrap(), vec![0.5]);
        let pts = Range::parse("0:1:0.05").unwrap().points().unwrap();
        assert_eq!(*pts.last().unwrap(), 1.0);
        for bad in ["1:0:0.1", "0:1:0", "0:1", "a:1:0.1", "0:1:-1"] {
            assert!(Range::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn isotropic_scan_matches_line() {
        let req = ScanRequest {
            family: ScanFamily::Isotropic23,
            range: Range::parse("0:1:0.05").unwrap(),
            rotation: None,
            pair: PairChoice::Default,
            optimize: None,
        };
        let rows = run_scan(&req).unwrap();
        assert_eq!(rows.len(), 21);
        for r in &rows {
            assert!((r.f - (8.0 * r.param - 2.0)).abs() < 1e-9);
            assert_eq!(r.ppt_detected, r.param > 0.25 + 1e-9);
        }
    }

    #[test]
    fn rotation_grid() {
        let req = ScanRequest {
            family: ScanFamily::SigmaB,
            range: Range::parse("0:1:0.5").unwrap(),
            rotation: Some(Range::parse("0:1.5:0.5").unwrap()),
            pair: PairChoice::Default,
            optimize: None,
        };
        let rows = run_scan(&req).unwrap();
        assert_eq!(rows.len(), 12);
        assert_eq!(rows[3].rotation, Some(0.5));
        assert!(rows.iter().all(|r| !r.ppt_detected));
    }
}
