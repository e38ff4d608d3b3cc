use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use sepineq::catalog::{self, Family, StateSpec};
use sepineq::criteria::Criterion;
use sepineq::inequality::{npt_seeded_violation, violation_value};
use sepineq::io::{PairChoice, PairFile, Range, ScanFamily, ScanRequest, StateFile, SCAN_HEADER};
use sepineq::measurement::estimate_violation;
use sepineq::optimizer::{maximize_violation, OptimizerConfig};
use sepineq::{DensityMatrix, UnitaryPair};

use crate::report::{DetectReport, MeasureReport, OptimizeReport, TOOL, VERSION};

/// `--pair` value: a pair file, `npt-seed`, or one of the named catalog pairs.
#[derive(Debug, Clone)]
pub enum PairArg {
    NptSeed,
    Isotropic,
    SigmaB,
    File(PathBuf),
}

impl std::str::FromStr for PairArg {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "npt-seed" => PairArg::NptSeed,
            "isotropic" => PairArg::Isotropic,
            "sigma-b" => PairArg::SigmaB,
            path => PairArg::File(PathBuf::from(path)),
        })
    }
}

impl PairArg {
    fn fixed(&self) -> Result<Option<UnitaryPair>> {
        Ok(match self {
            PairArg::NptSeed => None,
            PairArg::Isotropic => Some(catalog::isotropic_pair()),
            PairArg::SigmaB => Some(catalog::sigma_b_pair()),
            PairArg::File(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading pair file {}", path.display()))?;
                let pair = PairFile::from_json(&text)?.to_pair().with_context(|| format!("pair file {}", path.display()))?;
                Some(pair)
            }
        })
    }

    fn resolve(&self, rho: &DensityMatrix) -> Result<UnitaryPair> {
        match self.fixed()? {
            Some(p) => Ok(p),
            None => Ok(npt_seeded_violation(rho)?.pair),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DetectMethod {
    Inequality,
    Ppt,
    Ccnr,
    Reduction,
    Majorization,
    All,
}

pub fn read_state(path: &Path) -> Result<DensityMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading state file {}", path.display()))?;
    let file = StateFile::from_json(&text).with_context(|| format!("state file {}", path.display()))?;
    file.to_density().with_context(|| format!("state file {} is not a valid 2 x d density matrix", path.display()))
}

/// Writes next to the target and renames, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().with_context(|| format!("{} has no file name", path.display()))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn cmd_detect(state: &Path, method: DetectMethod, pair: &PairArg) -> Result<String> {
    let rho = read_state(state)?;
    let inequality = match method {
        DetectMethod::Inequality | DetectMethod::All => {
            let report = match pair.fixed()? {
                Some(p) => violation_value(&rho, &p)?,
                None => npt_seeded_violation(&rho)?,
            };
            Some((&report).into())
        }
        _ => None,
    };
    let wanted: Vec<Criterion> = match method {
        DetectMethod::Inequality => vec![],
        DetectMethod::Ppt => vec![Criterion::Ppt],
        DetectMethod::Ccnr => vec![Criterion::Ccnr],
        DetectMethod::Reduction => vec![Criterion::Reduction],
        DetectMethod::Majorization => vec![Criterion::Majorization],
        DetectMethod::All => Criterion::ALL.to_vec(),
    };
    let criteria = wanted.iter().map(|c| c.evaluate(&rho)).collect();
    Ok(json(&DetectReport { tool: TOOL, version: VERSION, dims: [rho.dim_a(), rho.dim_b()], inequality, criteria }))
}

pub struct ScanArgs {
    pub family: ScanFamily,
    pub range: String,
    pub rotation: Option<String>,
    pub pair: Option<PairArg>,
    pub optimize: bool,
    pub restarts: usize,
    pub seed: u64,
}

pub fn cmd_scan(args: &ScanArgs) -> Result<String> {
    let range = Range::parse(&args.range)?;
    let rotation = args.rotation.as_deref().map(Range::parse).transpose()?;
    let pair = match &args.pair {
        None => PairChoice::Default,
        Some(PairArg::NptSeed) => PairChoice::NptSeed,
        Some(p) => PairChoice::Fixed(p.fixed()?.expect("fixed pair")),
    };
    if rotation.is_some() && !matches!(pair, PairChoice::Default) {
        bail!("--rotation sets the pair itself and cannot be combined with --pair");
    }
    let optimize = args.optimize.then(|| OptimizerConfig { restarts: args.restarts, ..OptimizerConfig::with_seed(args.seed) });
    let rows = sepineq::io::run_scan(&ScanRequest { family: args.family, range, rotation, pair, optimize })?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(SCAN_HEADER)?;
    for row in &rows {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn cmd_measure(state: &Path, pair: &PairArg, shots: u64, seed: u64) -> Result<String> {
    if shots == 0 {
        bail!("--shots must be at least 1");
    }
    let rho = read_state(state)?;
    let pair = pair.resolve(&rho)?;
    let estimate = estimate_violation(&rho, &pair, shots, seed)?;
    Ok(json(&MeasureReport { tool: TOOL, version: VERSION, pair: (&pair).into(), estimate }))
}

pub fn cmd_optimize(state: &Path, restarts: usize, seed: u64) -> Result<String> {
    let rho = read_state(state)?;
    let cfg = OptimizerConfig { restarts, ..OptimizerConfig::with_seed(seed) };
    let report = maximize_violation(&rho, &cfg)?;
    let seeded_bound = (-4.0 * rho.dim_b() as f64 * rho.min_pt_eigenvalue()).max(0.0);
    Ok(json(&OptimizeReport { tool: TOOL, version: VERSION, seed, restarts, report: (&report).into(), seeded_bound }))
}

/// Parses `key=value` pairs for `state --param`.
pub fn parse_param(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("`{s}` is not key=value"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

pub fn cmd_state(family: Family, params: &[(String, f64)], seed: Option<u64>) -> Result<String> {
    let spec = StateSpec { family, params: params.iter().cloned().collect(), seed };
    Ok(StateFile::from_spec(&spec)?.to_json() + "\n")
}
