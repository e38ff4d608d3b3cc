//! JSON report shapes. Field order is fixed so identical runs produce
//! byte-identical output.

use serde::Serialize;

use sepineq::criteria::CriterionResult;
use sepineq::inequality::{InequalityTerms, Method, Verdict, ViolationReport};
use sepineq::io::{matrix_to_json, JsonMatrix};
use sepineq::measurement::EstimateReport;
use sepineq::UnitaryPair;

pub const TOOL: &str = "sepineq";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct PairJson {
    pub u: JsonMatrix,
    pub v: JsonMatrix,
    pub params: Vec<f64>,
}

impl From<&UnitaryPair> for PairJson {
    fn from(p: &UnitaryPair) -> Self {
        Self { u: matrix_to_json(p.u()), v: matrix_to_json(p.v()), params: p.params().to_vec() }
    }
}

#[derive(Debug, Serialize)]
pub struct InequalityJson {
    pub d: usize,
    pub f: f64,
    pub verdict: Verdict,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restart: Option<usize>,
    pub terms: InequalityTerms,
    pub pair: PairJson,
}

impl From<&ViolationReport> for InequalityJson {
    fn from(r: &ViolationReport) -> Self {
        Self { d: r.d, f: r.f, verdict: r.verdict, method: r.method, restart: r.restart, terms: r.terms, pair: (&r.pair).into() }
    }
}

#[derive(Debug, Serialize)]
pub struct DetectReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub dims: [usize; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inequality: Option<InequalityJson>,
    pub criteria: Vec<CriterionResult>,
}

#[derive(Debug, Serialize)]
pub struct OptimizeReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub restarts: usize,
    pub report: InequalityJson,
    /// `max(0, −4d λ_min)`
    pub seeded_bound: f64,
}

#[derive(Debug, Serialize)]
pub struct MeasureReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub pair: PairJson,
    #[serde(flatten)]
    pub estimate: EstimateReport,
}
