//! Browser bindings for the static demo in `www/`.
//!
//! Every function returns JSON text (or a flat `Float64Array` for the
//! heatmap) so the page needs no glue beyond `JSON.parse`.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use sepineq::catalog;
use sepineq::criteria::all_criteria;
use sepineq::inequality::{npt_seeded_violation, violation_value};
use sepineq::io::{run_scan, PairChoice, Range, ScanFamily, ScanRequest};
use sepineq::measurement::{estimate_violation, EstimateReport};
use sepineq::{DensityMatrix, UnitaryPair};

fn err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn family(name: &str) -> Result<ScanFamily, JsValue> {
    match name {
        "isotropic23" => Ok(ScanFamily::Isotropic23),
        "sigma-b" => Ok(ScanFamily::SigmaB),
        other => Err(err(format!("unknown family `{other}`"))),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Scan rows for `isotropic23` or `sigma-b` under the family's reference
/// pair, as a JSON array.
#[wasm_bindgen]
pub fn scan_curve(family_name: &str, start: f64, stop: f64, step: f64) -> Result<String, JsValue> {
    let req = ScanRequest {
        family: family(family_name)?,
        range: Range { start, stop, step },
        rotation: None,
        pair: PairChoice::Default,
        optimize: None,
    };
    Ok(to_json(&run_scan(&req).map_err(err)?))
}

/// `F` for `σ_b` under `U = cos t I + sin t (|0⟩⟨1| − |1⟩⟨0|)`, `V = I_4`,
/// on a `t_steps × b_steps` grid over `t ∈ [0, π]`, `b ∈ [0, 1]`, row-major
/// in `t`.
#[wasm_bindgen]
pub fn rotation_heatmap(b_steps: usize, t_steps: usize) -> Result<Vec<f64>, JsValue> {
    if b_steps < 2 || t_steps < 2 || b_steps * t_steps > 40_000 {
        return Err(err("grid must be at least 2 x 2 and at most 40000 points"));
    }
    let states: Vec<DensityMatrix> = (0..b_steps)
        .map(|j| catalog::sigma_b(j as f64 / (b_steps - 1) as f64))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let mut out = Vec::with_capacity(b_steps * t_steps);
    for i in 0..t_steps {
        let pair = catalog::rotation_pair(std::f64::consts::PI * i as f64 / (t_steps - 1) as f64);
        for rho in &states {
            out.push(violation_value(rho, &pair).map_err(err)?.f);
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct Detection {
    param: f64,
    lambda_min: f64,
    f_reference: f64,
    f_seeded: f64,
    violated: bool,
    criteria: Vec<sepineq::criteria::CriterionResult>,
}

/// Reference-pair value, seeded detector and the four reference criteria
/// for one family member.
#[wasm_bindgen]
pub fn detect(family_name: &str, param: f64) -> Result<String, JsValue> {
    let fam = family(family_name)?;
    let rho = fam.build(param).map_err(err)?;
    let reference = violation_value(&rho, &fam.default_pair()).map_err(err)?;
    let seeded = npt_seeded_violation(&rho).map_err(err)?;
    Ok(to_json(&Detection {
        param,
        lambda_min: rho.min_pt_eigenvalue(),
        f_reference: reference.f,
        f_seeded: seeded.f,
        violated: reference.verdict.is_violated() || seeded.verdict.is_violated(),
        criteria: all_criteria(&rho),
    }))
}

/// Finite-shot estimate under the family's reference pair, or the seeded
/// pair when `seeded` is true.
#[wasm_bindgen]
pub fn measure(family_name: &str, param: f64, shots: u32, seed: u32, seeded: bool) -> Result<String, JsValue> {
    let fam = family(family_name)?;
    let rho = fam.build(param).map_err(err)?;
    let pair: UnitaryPair = if seeded { npt_seeded_violation(&rho).map_err(err)?.pair } else { fam.default_pair() };
    let report: EstimateReport = estimate_violation(&rho, &pair, u64::from(shots), u64::from(seed)).map_err(err)?;
    Ok(to_json(&report))
}
