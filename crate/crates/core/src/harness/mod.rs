//! Declarative Monte Carlo experiments.
//!
//! Trial `i` of an experiment draws from `SeededStream::new(master_seed, i)`
//! and trials are reduced in index order, so results do not depend on the
//! number of worker threads.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Orientation};
use crate::parallel::map_trials;
use crate::spectrum::{
    count_short_cycles, has_cycle_of_length, interval_verdict_counted, IntervalVerdict, LengthVerdict,
};
use crate::stream::SeededStream;
use crate::switching::{staged_exposure_binomial, staged_exposure_regular};
use crate::theory;

mod config;
pub mod verify;

pub use config::{parse_config, EllSpec, ExperimentConfig, ExperimentKind, ModelSpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Check {
    /// `|estimate − reference| ≤ tol`.
    TwoSided { tol: f64 },
    /// `estimate ≥ threshold`.
    AtLeast { threshold: f64 },
    /// `|estimate − reference| ≤ rel · |reference|`.
    Relative { rel: f64 },
    /// Reported, not judged.
    Info,
}

impl Check {
    pub fn evaluate(&self, estimate: f64, reference: f64) -> Option<bool> {
        match *self {
            Check::TwoSided { tol } => Some((estimate - reference).abs() <= tol),
            Check::AtLeast { threshold } => Some(estimate >= threshold),
            Check::Relative { rel } => Some((estimate - reference).abs() <= rel * reference.abs()),
            Check::Info => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Pass,
    Fail,
    Info,
    /// Some trial could not be decided; no estimate is reported.
    Unusable,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::Pass => "true",
            CellStatus::Fail => "false",
            CellStatus::Info => "info",
            CellStatus::Unusable => "unusable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub kind: ExperimentKind,
    pub model: String,
    pub n: usize,
    pub param: String,
    pub k_or_ell: String,
    pub trials: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub reference: f64,
    pub check: Check,
    pub status: CellStatus,
}

impl Cell {
    fn judge(mut self) -> Self {
        if self.status != CellStatus::Unusable {
            self.status = match self.check.evaluate(self.estimate, self.reference) {
                Some(true) => CellStatus::Pass,
                Some(false) => CellStatus::Fail,
                None => CellStatus::Info,
            };
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub cells: Vec<Cell>,
    /// Trials whose sampler failed (e.g. rejection budget exhausted).
    pub failed_trials: u64,
    /// Staged procedures that aborted or ran out of candidates.
    pub aborted_trials: u64,
    /// Trials whose spectrum question could not be decided within budget.
    pub undecided_trials: u64,
    pub cycles_enumerated: u64,
}

impl ExperimentResult {
    fn new(config: &ExperimentConfig) -> Self {
        ExperimentResult {
            config: config.clone(),
            cells: Vec::new(),
            failed_trials: 0,
            aborted_trials: 0,
            undecided_trials: 0,
            cycles_enumerated: 0,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.cells
            .iter()
            .all(|c| matches!(c.status, CellStatus::Pass | CellStatus::Info))
    }
}

/// Binomial standard error `√(p̂(1 − p̂)/trials)`.
pub fn proportion_stderr(p: f64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / trials as f64).sqrt()
}

fn stream(cfg: &ExperimentConfig, i: u64) -> SeededStream {
    SeededStream::new(cfg.master_seed, i)
}

fn sample_simple(cfg: &ExperimentConfig, i: u64) -> Result<Graph> {
    let g = cfg.model().sample(&stream(cfg, i))?;
    Ok(if g.is_multigraph() { g.simplify().0 } else { g })
}

fn cell(cfg: &ExperimentConfig, k_or_ell: String, trials: u64) -> Cell {
    let model = cfg.model.as_ref();
    Cell {
        kind: cfg.kind,
        model: model.map_or("", |m| m.name()).to_string(),
        n: model.map_or(0, |m| m.n()),
        param: model.map(|m| m.param()).unwrap_or_default(),
        k_or_ell,
        trials,
        estimate: 0.0,
        stderr: 0.0,
        reference: 0.0,
        check: Check::Info,
        status: CellStatus::Info,
    }
}

fn with_label(mut c: Cell, label: &str) -> Cell {
    if c.param.is_empty() {
        c.param = label.to_string();
    } else {
        c.param = format!("{},{label}", c.param);
    }
    c
}

/// Configured tolerance, or three standard errors of a proportion equal to
/// the reference (well defined even when the estimate is 0 or 1).
fn two_sided(cfg: &ExperimentConfig, reference: f64, trials: u64) -> Check {
    Check::TwoSided {
        tol: cfg
            .tolerance
            .unwrap_or_else(|| 3.0 * proportion_stderr(reference.clamp(0.0, 1.0), trials)),
    }
}

/// Run all trials of `cfg` and reduce them into cells.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let mut res = ExperimentResult::new(cfg);
    match cfg.kind {
        ExperimentKind::PoissonFit => poisson_fit(cfg, &mut res)?,
        ExperimentKind::PerLengthProbability => per_length(cfg, &mut res)?,
        ExperimentKind::IntervalProbability => interval(cfg, &mut res)?,
        ExperimentKind::LemmaCheck => lemma(cfg, &mut res)?,
        ExperimentKind::StagedSuccess => staged(cfg, &mut res)?,
        ExperimentKind::SwitchingSuite => {
            let report = verify::switching_suite(cfg.n_max.unwrap_or(20));
            for line in &report.lines {
                let mut c = cell(cfg, line.name.clone(), line.checked);
                c.estimate = line.violations as f64;
                c.check = if line.informational {
                    Check::Info
                } else {
                    Check::TwoSided { tol: 0.0 }
                };
                res.cells.push(c.judge());
            }
        }
    }
    Ok(res)
}

fn poisson_fit(cfg: &ExperimentConfig, res: &mut ExperimentResult) -> Result<()> {
    let ells = cfg.lengths();
    let kmax = *ells.iter().max().expect("nonempty");
    let outcomes = map_trials(cfg.trials, cfg.threads, |i| {
        sample_simple(cfg, i).and_then(|g| count_short_cycles(&g, kmax))
    })?;
    let counts: Vec<Vec<u64>> = outcomes.into_iter().filter_map(|o| o.ok()).collect();
    res.failed_trials = cfg.trials - counts.len() as u64;
    let t = counts.len() as u64;
    let (base, directed) = cfg.model().lambda_base().expect("validated");
    for &k in &ells {
        let xs: Vec<f64> = counts.iter().map(|c| c[k] as f64).collect();
        let mean = xs.iter().sum::<f64>() / t.max(1) as f64;
        let var = if t > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1) as f64
        } else {
            0.0
        };
        let lambda = theory::lambda_k(k, base, directed);
        let se = (var / t.max(1) as f64).sqrt();
        let mut c = with_label(cell(cfg, k.to_string(), t), "stat=mean");
        c.estimate = mean;
        c.stderr = se;
        c.reference = lambda;
        c.check = Check::TwoSided {
            tol: cfg.tolerance.unwrap_or(3.0 * (lambda / t.max(1) as f64).sqrt()),
        };
        res.cells.push(c.judge());
        let mut c = with_label(cell(cfg, k.to_string(), t), "stat=variance");
        c.estimate = var;
        c.reference = mean;
        c.check = Check::Relative { rel: 0.25 };
        res.cells.push(c.judge());
    }
    Ok(())
}

fn per_length(cfg: &ExperimentConfig, res: &mut ExperimentResult) -> Result<()> {
    let ells = cfg.lengths();
    let budget = cfg.spectrum_budget;
    let outcomes = map_trials(cfg.trials, cfg.threads, |i| {
        sample_simple(cfg, i).map(|g| {
            ells.iter()
                .map(|&k| match has_cycle_of_length(&g, k, budget) {
                    LengthVerdict::Present(_) => Some(true),
                    LengthVerdict::Absent => Some(false),
                    LengthVerdict::Unknown => None,
                })
                .collect::<Vec<_>>()
        })
    })?;
    let ok: Vec<Vec<Option<bool>>> = outcomes.into_iter().filter_map(|o| o.ok()).collect();
    res.failed_trials = cfg.trials - ok.len() as u64;
    res.undecided_trials = ok.iter().filter(|v| v.iter().any(Option::is_none)).count() as u64;
    let (base, directed) = cfg.model().lambda_base().expect("validated");
    for (j, &k) in ells.iter().enumerate() {
        let t = ok.len() as u64;
        let mut c = cell(cfg, k.to_string(), t);
        c.reference = theory::per_length_probability(k, base, directed);
        if ok.iter().any(|v| v[j].is_none()) {
            c.status = CellStatus::Unusable;
            res.cells.push(c);
            continue;
        }
        let hits = ok.iter().filter(|v| v[j] == Some(true)).count();
        c.estimate = hits as f64 / t.max(1) as f64;
        c.stderr = proportion_stderr(c.estimate, t);
        c.check = two_sided(cfg, c.reference, t);
        res.cells.push(c.judge());
    }
    Ok(())
}

fn interval(cfg: &ExperimentConfig, res: &mut ExperimentResult) -> Result<()> {
    let model = cfg.model();
    let (lo, hi) = cfg.ell_range.as_ref().expect("validated").bounds(model.n());
    let budget = cfg.spectrum_budget;
    let outcomes = map_trials(cfg.trials, cfg.threads, |i| {
        sample_simple(cfg, i).map(|g| interval_verdict_counted(&g, lo, hi, budget))
    })?;
    let ok: Vec<IntervalVerdict> = outcomes
        .into_iter()
        .filter_map(|o| o.ok())
        .map(|(v, enumerated)| {
            res.cycles_enumerated += enumerated;
            v
        })
        .collect();
    res.failed_trials = cfg.trials - ok.len() as u64;
    res.undecided_trials = ok
        .iter()
        .filter(|v| matches!(v, IntervalVerdict::Unknown { .. }))
        .count() as u64;
    let t = ok.len() as u64;
    let hits = ok.iter().filter(|v| **v == IntervalVerdict::Contained).count();
    let estimate = hits as f64 / t.max(1) as f64;
    let se = proportion_stderr(estimate, t);
    let range = format!("{lo}..{hi}");
    let usable = res.undecided_trials == 0;

    let reference = match model.lambda_base() {
        Some((base, directed)) if base > 1.0 => theory::theta(base, lo.max(3), directed, 1e-12).map(|r| r.value)?,
        Some(_) => 0.0,
        None => 1.0,
    };
    let mut c = with_label(cell(cfg, range.clone(), t), "ref=theta");
    c.estimate = estimate;
    c.stderr = se;
    c.reference = reference;
    c.check = two_sided(cfg, reference, t);
    if !usable {
        c.status = CellStatus::Unusable;
    }
    res.cells.push(c.judge());

    if let ModelSpec::Regular { d, .. } | ModelSpec::Configuration { d, .. } = *model {
        let bound = theory::regular_lower_bound(d, lo.max(3));
        let mut c = with_label(cell(cfg, range, t), "ref=lower_bound");
        c.estimate = estimate;
        c.stderr = se;
        c.reference = bound;
        c.check = Check::AtLeast {
            threshold: bound - 3.0 * se,
        };
        if !usable {
            c.status = CellStatus::Unusable;
        }
        res.cells.push(c.judge());
    }
    Ok(())
}

fn lemma(cfg: &ExperimentConfig, res: &mut ExperimentResult) -> Result<()> {
    let n = cfg.model().n();
    let ells = cfg.lengths();
    let outcomes = map_trials(cfg.trials, cfg.threads, |i| {
        let s = stream(cfg, i);
        ells.iter()
            .enumerate()
            .map(|(j, &ell)| {
                staged_exposure_regular(n, ell, &s.child(j as u64))
                    .map(|o| (o.aux_edge_count, o.unmatched_aux_edge_count.unwrap_or(0)))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let ok: Vec<Vec<(usize, usize)>> = outcomes.into_iter().collect::<Result<_>>()?;
    let t = ok.len() as u64;
    for (j, &ell) in ells.iter().enumerate() {
        let nl = (n * ell) as f64;
        let stats = [
            ("stat=aux_edges", nl / 128.0, 0usize),
            ("stat=unmatched_aux_edges", nl / 200.0, 1),
        ];
        for (label, need, which) in stats {
            let hits = ok
                .iter()
                .filter(|v| {
                    let x = if which == 0 { v[j].0 } else { v[j].1 };
                    x as f64 >= need
                })
                .count();
            let mut c = with_label(cell(cfg, ell.to_string(), t), label);
            c.estimate = hits as f64 / t as f64;
            c.stderr = proportion_stderr(c.estimate, t);
            c.reference = 0.99;
            c.check = Check::AtLeast { threshold: 0.99 };
            res.cells.push(c.judge());
        }
    }
    Ok(())
}

/// Explicit lower bound on the probability that the staged binomial
/// procedure finds a witness.
pub fn staged_success_bound(n: usize, ell: usize, delta: f64, orientation: Orientation) -> f64 {
    let exponent = match orientation {
        Orientation::Undirected => (delta / 8.0).powi(2) * ell as f64,
        Orientation::Directed => (delta / 4.0).powi(2) * ((ell - 1).min(n - ell - 1)) as f64,
    };
    1.0 - 3.0 * (-exponent).exp()
}

fn staged(cfg: &ExperimentConfig, res: &mut ExperimentResult) -> Result<()> {
    let ModelSpec::HamPlusBinomial { n, delta, directed } = *cfg.model() else {
        unreachable!("validated");
    };
    let orientation = Orientation::from_directed(directed);
    let ells = cfg.lengths();
    let outcomes = map_trials(cfg.trials, cfg.threads, |i| {
        let s = stream(cfg, i);
        ells.iter()
            .enumerate()
            .map(|(j, &ell)| {
                staged_exposure_binomial(n, ell, delta, orientation, &s.child(j as u64))
                    .map(|o| (o.success, o.aborted || o.exhausted))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let ok: Vec<Vec<(bool, bool)>> = outcomes.into_iter().collect::<Result<_>>()?;
    let t = ok.len() as u64;
    res.aborted_trials = ok.iter().filter(|v| v.iter().any(|x| x.1)).count() as u64;
    for (j, &ell) in ells.iter().enumerate() {
        let hits = ok.iter().filter(|v| v[j].0).count();
        let mut c = cell(cfg, ell.to_string(), t);
        c.estimate = hits as f64 / t as f64;
        c.stderr = proportion_stderr(c.estimate, t);
        c.reference = staged_success_bound(n, ell, delta, orientation);
        c.check = Check::AtLeast {
            threshold: c.reference - 3.0 * c.stderr,
        };
        res.cells.push(c.judge());
    }
    Ok(())
}

/// Plain-text table of the cells.
pub fn summarize(res: &ExperimentResult) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:<18} {:>6} {:<22} {:>10} {:>7} {:>24} {:>12} {:>8}",
        "kind", "model", "n", "param", "k_or_ell", "trials", "estimate ± se", "reference", "pass"
    );
    for c in &res.cells {
        let est = format!("{:.4} ± {:.4}", c.estimate, c.stderr);
        let _ = writeln!(
            out,
            "{:<24} {:<18} {:>6} {:<22} {:>10} {:>7} {:>24} {:>12.6} {:>8}",
            c.kind.name(),
            c.model,
            c.n,
            c.param,
            c.k_or_ell,
            c.trials,
            est,
            c.reference,
            c.status.as_str()
        );
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (csv or json)")),
        }
    }
}

pub const CSV_HEADER: &str = "kind,model,n,param,k_or_ell,trials,estimate,stderr,reference,pass";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_csv(res: &ExperimentResult) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in &res.cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            c.kind.name(),
            c.model,
            c.n,
            csv_field(&c.param),
            c.k_or_ell,
            c.trials,
            c.estimate,
            c.stderr,
            c.reference,
            c.status.as_str()
        );
    }
    out
}

pub fn to_json(res: &ExperimentResult) -> String {
    let mut s = serde_json::to_string_pretty(res).expect("result serializes");
    s.push('\n');
    s
}

pub fn write_output(res: &ExperimentResult, format: OutputFormat, path: &Path) -> Result<()> {
    let text = match format {
        OutputFormat::Csv => to_csv(res),
        OutputFormat::Json => to_json(res),
    };
    std::fs::write(path, text).map_err(Error::from)
}
