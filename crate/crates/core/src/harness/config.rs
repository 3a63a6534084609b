use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::graph::{Graph, Orientation};
use crate::samplers;
use crate::spectrum::DEFAULT_BUDGET;
use crate::stream::SeededStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    PoissonFit,
    IntervalProbability,
    PerLengthProbability,
    SwitchingSuite,
    LemmaCheck,
    StagedSuccess,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::PoissonFit => "poisson_fit",
            ExperimentKind::IntervalProbability => "interval_probability",
            ExperimentKind::PerLengthProbability => "per_length_probability",
            ExperimentKind::SwitchingSuite => "switching_suite",
            ExperimentKind::LemmaCheck => "lemma_check",
            ExperimentKind::StagedSuccess => "staged_success",
        }
    }
}

/// Random graph model of an experiment, tagged by `"sampler"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "sampler", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    /// Configuration-model `d`-regular multigraph.
    Configuration {
        n: usize,
        d: usize,
    },
    /// Uniform simple `d`-regular graph by rejection.
    Regular {
        n: usize,
        d: usize,
        #[serde(default = "default_attempts")]
        max_attempts: u32,
    },
    HamPlusMatching {
        n: usize,
    },
    HamPlusHam {
        n: usize,
    },
    /// Hamilton cycle plus binomial edges with `p = δ/n`.
    HamPlusBinomial {
        n: usize,
        delta: f64,
        #[serde(default)]
        directed: bool,
    },
    /// Binomial graph with `p = c/n`.
    Binomial {
        n: usize,
        c: f64,
        #[serde(default)]
        directed: bool,
    },
    /// The fixed `n`-cycle.
    Cycle {
        n: usize,
        #[serde(default)]
        directed: bool,
    },
}

fn default_attempts() -> u32 {
    samplers::DEFAULT_MAX_ATTEMPTS
}

impl ModelSpec {
    pub fn n(&self) -> usize {
        match *self {
            ModelSpec::Configuration { n, .. }
            | ModelSpec::Regular { n, .. }
            | ModelSpec::HamPlusMatching { n }
            | ModelSpec::HamPlusHam { n }
            | ModelSpec::HamPlusBinomial { n, .. }
            | ModelSpec::Binomial { n, .. }
            | ModelSpec::Cycle { n, .. } => n,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Configuration { .. } => "configuration",
            ModelSpec::Regular { .. } => "regular",
            ModelSpec::HamPlusMatching { .. } => "ham_plus_matching",
            ModelSpec::HamPlusHam { .. } => "ham_plus_ham",
            ModelSpec::HamPlusBinomial { .. } => "ham_plus_binomial",
            ModelSpec::Binomial { .. } => "binomial",
            ModelSpec::Cycle { .. } => "cycle",
        }
    }

    pub fn orientation(&self) -> Orientation {
        match *self {
            ModelSpec::HamPlusBinomial { directed, .. }
            | ModelSpec::Binomial { directed, .. }
            | ModelSpec::Cycle { directed, .. } => Orientation::from_directed(directed),
            _ => Orientation::Undirected,
        }
    }

    /// Short parameter label for tables.
    pub fn param(&self) -> String {
        match *self {
            ModelSpec::Configuration { d, .. } | ModelSpec::Regular { d, .. } => format!("d={d}"),
            ModelSpec::HamPlusMatching { .. } | ModelSpec::HamPlusHam { .. } => String::new(),
            ModelSpec::HamPlusBinomial { delta, directed, .. } => format!("delta={delta}{}", dir_tag(directed)),
            ModelSpec::Binomial { c, directed, .. } => format!("c={c}{}", dir_tag(directed)),
            ModelSpec::Cycle { directed, .. } => dir_tag(directed).trim_start_matches(',').to_string(),
        }
    }

    /// `(base, directed)` of the Poisson means `λ_k`, for models that have them.
    pub fn lambda_base(&self) -> Option<(f64, bool)> {
        match *self {
            ModelSpec::Configuration { d, .. } | ModelSpec::Regular { d, .. } => Some((d as f64 - 1.0, false)),
            ModelSpec::Binomial { c, directed, .. } => Some((c, directed)),
            _ => None,
        }
    }

    pub fn sample(&self, stream: &SeededStream) -> Result<Graph> {
        match *self {
            ModelSpec::Configuration { n, d } => samplers::sample_configuration_model(n, d, stream),
            ModelSpec::Regular { n, d, max_attempts } => {
                samplers::sample_regular_simple(n, d, stream, max_attempts).map(|s| s.graph)
            }
            ModelSpec::HamPlusMatching { n } => samplers::sample_ham_plus_matching(n, stream),
            ModelSpec::HamPlusHam { n } => samplers::sample_ham_plus_ham(n, stream),
            ModelSpec::HamPlusBinomial { n, delta, directed } => {
                samplers::sample_ham_plus_binomial(n, delta / n as f64, Orientation::from_directed(directed), stream)
            }
            ModelSpec::Binomial { n, c, directed } => {
                samplers::sample_binomial(n, (c / n as f64).min(1.0), Orientation::from_directed(directed), stream)
            }
            ModelSpec::Cycle { n, directed } => Graph::cycle(n, Orientation::from_directed(directed)),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::config("model", reason));
        let n = self.n();
        match *self {
            ModelSpec::Configuration { d, .. } | ModelSpec::Regular { d, .. } => {
                if d == 0 || (n * d) % 2 == 1 || n <= d {
                    return bad(format!("need d ≥ 1, n > d and n·d even (n = {n}, d = {d})"));
                }
            }
            ModelSpec::HamPlusMatching { .. } => {
                if n < 4 || n % 2 == 1 {
                    return bad(format!("ham_plus_matching needs even n ≥ 4, got {n}"));
                }
            }
            ModelSpec::HamPlusHam { .. } | ModelSpec::Cycle { .. } => {
                if n < 3 {
                    return bad(format!("n = {n} < 3"));
                }
            }
            ModelSpec::HamPlusBinomial { delta, .. } => {
                if n < 3 || !(0.0..=n as f64).contains(&delta) {
                    return bad(format!("need n ≥ 3 and 0 ≤ δ ≤ n (n = {n}, δ = {delta})"));
                }
            }
            ModelSpec::Binomial { c, .. } => {
                if n < 2 || !(c >= 0.0 && c.is_finite()) {
                    return bad(format!("need n ≥ 2 and finite c ≥ 0 (n = {n}, c = {c})"));
                }
            }
        }
        Ok(())
    }
}

fn dir_tag(directed: bool) -> &'static str {
    if directed {
        ",directed"
    } else {
        ""
    }
}

/// Lengths of interest: an inclusive range (upper end defaulting to `n`) or
/// an explicit list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EllSpec {
    Range {
        lo: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hi: Option<usize>,
    },
    List(Vec<usize>),
}

impl EllSpec {
    pub fn lengths(&self, n: usize) -> Vec<usize> {
        match self {
            EllSpec::Range { lo, hi } => (*lo..=hi.unwrap_or(n)).collect(),
            EllSpec::List(v) => v.clone(),
        }
    }

    pub fn bounds(&self, n: usize) -> (usize, usize) {
        let v = self.lengths(n);
        (
            v.iter().copied().min().unwrap_or(0),
            v.iter().copied().max().unwrap_or(0),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell_range: Option<EllSpec>,
    #[serde(default)]
    pub trials: u64,
    #[serde(default)]
    pub master_seed: u64,
    /// Worker threads; 0 picks the runtime default.
    #[serde(default)]
    pub threads: usize,
    #[serde(default = "default_budget")]
    pub spectrum_budget: u64,
    /// Two-sided tolerance overriding the default of three standard errors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Largest cycle length for `switching_suite`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

const FIELDS: &[&str] = &[
    "kind",
    "model",
    "ell_range",
    "trials",
    "master_seed",
    "threads",
    "spectrum_budget",
    "tolerance",
    "n_max",
];

fn field<T: serde::de::DeserializeOwned>(obj: &Map<String, Value>, name: &str) -> Result<Option<T>> {
    match obj.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|e| Error::config(name, e.to_string())),
    }
}

/// Parse and validate a JSON experiment description. Errors name the
/// offending field.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::config("<document>", e.to_string()))?;
    let Value::Object(obj) = value else {
        return Err(Error::config("<document>", "expected a JSON object"));
    };
    if let Some(extra) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
        return Err(Error::config(extra.clone(), "unknown field"));
    }
    let kind = field(&obj, "kind")?.ok_or_else(|| Error::config("kind", "missing field"))?;
    let cfg = ExperimentConfig {
        kind,
        model: field(&obj, "model")?,
        ell_range: field(&obj, "ell_range")?,
        trials: field(&obj, "trials")?.unwrap_or(0),
        master_seed: field(&obj, "master_seed")?.unwrap_or(0),
        threads: field(&obj, "threads")?.unwrap_or(0),
        spectrum_budget: field(&obj, "spectrum_budget")?.unwrap_or(DEFAULT_BUDGET),
        tolerance: field(&obj, "tolerance")?,
        n_max: field(&obj, "n_max")?,
    };
    cfg.validate()?;
    Ok(cfg)
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, model: ModelSpec, ell_range: EllSpec, trials: u64, master_seed: u64) -> Self {
        ExperimentConfig {
            kind,
            model: Some(model),
            ell_range: Some(ell_range),
            trials,
            master_seed,
            threads: 0,
            spectrum_budget: DEFAULT_BUDGET,
            tolerance: None,
            n_max: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub(crate) fn model(&self) -> &ModelSpec {
        self.model.as_ref().expect("validated config has a model")
    }

    pub(crate) fn lengths(&self) -> Vec<usize> {
        self.ell_range
            .as_ref()
            .expect("validated config has lengths")
            .lengths(self.model().n())
    }

    pub fn validate(&self) -> Result<()> {
        use ExperimentKind::*;
        if let Some(tol) = self.tolerance {
            if tol.is_nan() || tol < 0.0 {
                return Err(Error::config("tolerance", format!("{tol} is not ≥ 0")));
            }
        }
        if self.kind == SwitchingSuite {
            let n_max = self.n_max.unwrap_or(20);
            if !(8..=64).contains(&n_max) {
                return Err(Error::config("n_max", format!("{n_max} outside [8, 64]")));
            }
            return Ok(());
        }
        if self.trials == 0 {
            return Err(Error::config("trials", "must be ≥ 1"));
        }
        let model = self
            .model
            .as_ref()
            .ok_or_else(|| Error::config("model", format!("required for {}", self.kind.name())))?;
        model.validate()?;
        let spec = self
            .ell_range
            .as_ref()
            .ok_or_else(|| Error::config("ell_range", format!("required for {}", self.kind.name())))?;
        let n = model.n();
        let ells = spec.lengths(n);
        if ells.is_empty() {
            return Err(Error::config("ell_range", "selects no lengths"));
        }
        let (lo, hi) = spec.bounds(n);
        let need = |ok: bool, why: String| {
            if ok {
                Ok(())
            } else {
                Err(Error::config("ell_range", why))
            }
        };
        match self.kind {
            PoissonFit | PerLengthProbability | IntervalProbability => {
                need(lo >= 3 && hi <= n, format!("lengths must lie in [3, n = {n}]"))?;
                if self.kind != IntervalProbability && model.lambda_base().is_none() {
                    return Err(Error::config(
                        "model",
                        format!(
                            "{} has no Poisson reference; use configuration, regular or binomial",
                            model.name()
                        ),
                    ));
                }
                if self.kind == PoissonFit && hi > 12 {
                    return Err(Error::config("ell_range", "short-cycle counts are limited to k ≤ 12"));
                }
            }
            LemmaCheck => {
                let ModelSpec::HamPlusMatching { .. } = model else {
                    return Err(Error::config("model", "lemma_check requires ham_plus_matching"));
                };
                if n < 500 {
                    return Err(Error::config(
                        "model",
                        format!("n = {n} gives an empty stage II (need n ≥ 500)"),
                    ));
                }
                need(
                    lo >= 4 && hi <= n / 2 + 2,
                    format!("requires 4 ≤ ℓ ≤ n/2 + 2 = {}", n / 2 + 2),
                )?;
            }
            StagedSuccess => {
                let ModelSpec::HamPlusBinomial { delta, directed, .. } = *model else {
                    return Err(Error::config("model", "staged_success requires ham_plus_binomial"));
                };
                if !(delta > 0.0 && delta < 1.0 / 3.0) {
                    return Err(Error::config("model", format!("δ = {delta} outside (0, 1/3)")));
                }
                if directed {
                    need(
                        lo >= 4 && hi <= n.saturating_sub(4),
                        format!("directed lengths require 4 ≤ ℓ ≤ n − 4 = {}", n.saturating_sub(4)),
                    )?;
                } else {
                    need(
                        lo >= 4 && hi <= n / 2 + 2,
                        format!("requires 4 ≤ ℓ ≤ n/2 + 2 = {}", n / 2 + 2),
                    )?;
                }
            }
            SwitchingSuite => unreachable!(),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_of(e: Error) -> String {
        match e {
            Error::Config { field, .. } => field,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn minimal_poisson_config() {
        let text = r#"{"kind":"poisson_fit","model":{"sampler":"configuration","n":2000,"d":3},
                       "ell_range":[3,4],"trials":10,"master_seed":1}"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.kind, ExperimentKind::PoissonFit);
        assert_eq!(cfg.lengths(), vec![3, 4]);
        assert_eq!(cfg.spectrum_budget, DEFAULT_BUDGET);
        assert_eq!(parse_config(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn range_defaults_to_n() {
        let text = r#"{"kind":"interval_probability","model":{"sampler":"cycle","n":12},
                       "ell_range":{"lo":12},"trials":1}"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.lengths(), vec![12]);
    }

    #[test]
    fn errors_name_fields() {
        assert_eq!(field_of(parse_config(r#"{"kind":"bogus"}"#).unwrap_err()), "kind");
        assert_eq!(field_of(parse_config(r#"{"trials":3}"#).unwrap_err()), "kind");
        assert_eq!(
            field_of(parse_config(r#"{"kind":"poisson_fit","colour":1}"#).unwrap_err()),
            "colour"
        );
        let no_trials = r#"{"kind":"poisson_fit","model":{"sampler":"regular","n":20,"d":3},"ell_range":[3]}"#;
        assert_eq!(field_of(parse_config(no_trials).unwrap_err()), "trials");
        let odd = r#"{"kind":"poisson_fit","model":{"sampler":"regular","n":21,"d":3},"ell_range":[3],"trials":1}"#;
        assert_eq!(field_of(parse_config(odd).unwrap_err()), "model");
        let bad_sampler = r#"{"kind":"poisson_fit","model":{"sampler":"nope","n":20},"ell_range":[3],"trials":1}"#;
        assert_eq!(field_of(parse_config(bad_sampler).unwrap_err()), "model");
    }

    #[test]
    fn directed_bound_is_cited() {
        let text = r#"{"kind":"staged_success","model":{"sampler":"ham_plus_binomial","n":100,"delta":0.3,"directed":true},
                       "ell_range":[50,97],"trials":5}"#;
        let err = parse_config(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("ell_range") && msg.contains("n − 4"), "{msg}");
    }

    #[test]
    fn switching_suite_needs_no_model() {
        let cfg = parse_config(r#"{"kind":"switching_suite","n_max":12}"#).unwrap();
        assert_eq!(cfg.n_max, Some(12));
    }
}
