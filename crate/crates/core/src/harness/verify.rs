//! Built-in invariant suites behind `cyclespan verify`.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{run_experiment, CellStatus, EllSpec, ExperimentConfig, ExperimentKind, ModelSpec};
use crate::error::Result;
use crate::graph::{Edge, Graph, Orientation, VertexCycle};
use crate::samplers::uniform_perfect_matching;
use crate::spectrum::{self, brute};
use crate::stream::SeededStream;
use crate::switching::{
    aux_graph, count_e_ell, count_e_ell_closed_form, dir_shortcut_cycle, e_ell, f_set, in_e_ell, intersecting_edges,
    switch_cycles, SwitchingContext,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Switching,
    Poisson,
    Lemma,
    SpectrumOracle,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Switching, Suite::Poisson, Suite::Lemma, Suite::SpectrumOracle];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Switching => "switching",
            Suite::Poisson => "poisson",
            Suite::Lemma => "lemma",
            Suite::SpectrumOracle => "spectrum-oracle",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteLine {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
    /// Reported but not counted as a failure.
    pub informational: bool,
}

impl SuiteLine {
    fn new(name: &str) -> Self {
        SuiteLine {
            name: name.to_string(),
            checked: 0,
            violations: 0,
            informational: false,
        }
    }

    fn record(&mut self, ok: bool) {
        self.checked += 1;
        self.violations += u64::from(!ok);
    }

    fn passed(&self) -> bool {
        self.informational || self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub lines: Vec<SuiteLine>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(SuiteLine::passed)
    }

    pub fn line(&self, name: &str) -> Option<&SuiteLine> {
        self.lines.iter().find(|l| l.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let status = match (l.violations, l.informational) {
                (0, _) => "ok",
                (_, true) => "info",
                _ => "FAIL",
            };
            let _ = writeln!(
                out,
                "[{status:>4}] {}/{}: {} violations in {} checks",
                self.suite, l.name, l.violations, l.checked
            );
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub n_max: usize,
    /// Overrides each suite's default trial count.
    pub trials: Option<u64>,
    pub master_seed: u64,
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n_max: 20,
            trials: None,
            master_seed: 0x5eed,
            threads: 0,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    match suite {
        Suite::Switching => {
            let mut r = switching_suite(opts.n_max);
            r.lines
                .push(aux_degree_check(opts.trials.unwrap_or(1000), opts.master_seed));
            Ok(r)
        }
        Suite::Poisson => poisson_suite(opts),
        Suite::Lemma => lemma_suite(opts),
        Suite::SpectrumOracle => Ok(spectrum_oracle_suite(opts.trials.unwrap_or(100), opts.master_seed)),
    }
}

fn contexts(n_max: usize) -> Vec<SwitchingContext> {
    let mut v = Vec::new();
    for n in 4..=n_max {
        for ell in 4..=n / 2 + 2 {
            v.extend(SwitchingContext::undirected(n, ell));
        }
        for ell in 4..=n.saturating_sub(4) {
            v.extend(SwitchingContext::directed(n, ell));
        }
    }
    v
}

fn host(ctx: &SwitchingContext, e: Edge, f: Edge) -> Graph {
    let n = ctx.n();
    let edges = (0..n).map(|i| (i, (i + 1) % n)).chain([e, f]);
    Graph::new(n, ctx.orientation(), true, edges).expect("valid host")
}

/// Exhaustive checks of the chord constructions for every `n ≤ n_max` and
/// every valid `ℓ`, both orientations.
pub fn switching_suite(n_max: usize) -> SuiteReport {
    let mut count = SuiteLine::new("e_ell_count_matches_closed_form");
    let mut fsize = SuiteLine::new("f_set_size");
    let mut fsub = SuiteLine::new("directed_f_set_within_e_ell");
    let mut und = SuiteLine::new("switch_cycles_valid");
    let mut dir = SuiteLine::new("dir_shortcut_cycle_valid");
    let mut scan = SuiteLine::new("intersections_match_scan");
    let mut und_bound = SuiteLine::new("intersections_undirected_le_2l_minus_8");
    let mut dir_sharp = SuiteLine::new("intersections_directed_le_2l_minus_4");
    let mut dir_stated = SuiteLine::new("intersections_directed_le_2l_minus_6");
    dir_stated.informational = true;

    for ctx in contexts(n_max) {
        let ell = ctx.ell();
        count.record(count_e_ell(&ctx) == count_e_ell_closed_form(&ctx));
        let chords: Vec<Edge> = e_ell(&ctx).collect();
        let fsets: Vec<Vec<Edge>> = chords.iter().map(|&e| f_set(e, &ctx).expect("e ∈ E_ℓ")).collect();
        for (&e, fs) in chords.iter().zip(&fsets) {
            fsize.record(fs.len() == ctx.f_size());
            for &f in fs {
                let g = host(&ctx, e, f);
                if ctx.is_directed() {
                    fsub.record(in_e_ell(f, &ctx));
                    let ok = dir_shortcut_cycle(&ctx, e, f)
                        .map(|c| c.len() == ell && g.validate_cycle(&c))
                        .unwrap_or(false);
                    dir.record(ok);
                } else {
                    let ok = switch_cycles(&ctx, e, f)
                        .map(|(a, b)| {
                            a.len() == ell
                                && b.len() == ctx.n() - ell + 4
                                && g.validate_cycle(&a)
                                && g.validate_cycle(&b)
                        })
                        .unwrap_or(false);
                    und.record(ok);
                }
            }
        }
        for (idx, &e0) in chords.iter().enumerate() {
            let fast = intersecting_edges(e0, &ctx).expect("e0 ∈ E_ℓ");
            let slow: Vec<Edge> = chords
                .iter()
                .zip(&fsets)
                .filter(|&(&e, fs)| e != e0 && fs.iter().any(|f| fsets[idx].contains(f)))
                .map(|(&e, _)| e)
                .collect();
            scan.record(fast == slow);
            let k = slow.len();
            if ctx.is_directed() {
                dir_sharp.record(k <= 2 * ell - 4);
                dir_stated.record(k + 6 <= 2 * ell);
            } else {
                und_bound.record(k + 8 <= 2 * ell);
            }
        }
    }
    SuiteReport {
        suite: "switching".into(),
        lines: vec![count, fsize, fsub, und, dir, scan, und_bound, dir_sharp, dir_stated],
    }
}

/// Maximum degree of the auxiliary graph of random perfect matchings at
/// `n = 40` never exceeds `ℓ − 3`, for `ℓ ∈ {6, 10, 14}`.
pub fn aux_degree_check(trials: u64, master_seed: u64) -> SuiteLine {
    let mut line = SuiteLine::new("aux_graph_max_degree_le_l_minus_3");
    for ell in [6usize, 10, 14] {
        let ctx = SwitchingContext::undirected(40, ell).expect("valid");
        for i in 0..trials {
            let mut rng = SeededStream::new(master_seed, i).child(ell as u64).rng();
            let m = uniform_perfect_matching(40, &mut rng);
            let x = aux_graph(&m, &ctx).expect("a perfect matching");
            line.record(x.max_degree() + 3 <= ell);
        }
    }
    line
}

fn experiment_lines(cfg: &ExperimentConfig, label: impl Fn(&super::Cell) -> String) -> Result<Vec<SuiteLine>> {
    let res = run_experiment(cfg)?;
    Ok(res
        .cells
        .iter()
        .map(|c| {
            let mut l = SuiteLine::new(&label(c));
            l.record(c.status == CellStatus::Pass);
            l.checked = c.trials;
            l
        })
        .collect())
}

fn poisson_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut cfg = ExperimentConfig::new(
        ExperimentKind::PoissonFit,
        ModelSpec::Configuration { n: 2000, d: 3 },
        EllSpec::List(vec![3, 4]),
        opts.trials.unwrap_or(1000),
        opts.master_seed,
    );
    cfg.threads = opts.threads;
    let lines = experiment_lines(&cfg, |c| {
        format!("z{}_{}", c.k_or_ell, c.param.replace("d=3,stat=", ""))
    })?;
    Ok(SuiteReport {
        suite: "poisson".into(),
        lines,
    })
}

fn lemma_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut cfg = ExperimentConfig::new(
        ExperimentKind::LemmaCheck,
        ModelSpec::HamPlusMatching { n: 2000 },
        EllSpec::List(vec![16, 64]),
        opts.trials.unwrap_or(200),
        opts.master_seed,
    );
    cfg.threads = opts.threads;
    let lines = experiment_lines(&cfg, |c| format!("ell{}_{}", c.k_or_ell, c.param.replace("stat=", "")))?;
    Ok(SuiteReport {
        suite: "lemma".into(),
        lines,
    })
}

/// A random simple graph on at most `n_max` vertices with random density.
pub fn random_small_graph(rng: &mut impl Rng, n_max: usize, orientation: Orientation) -> Graph {
    let n = rng.random_range(3..=n_max);
    let p: f64 = rng.random_range(0.15..0.75);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let candidate = u != v && (orientation.is_directed() || u < v);
            if candidate && rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, orientation, false, edges).expect("simple by construction")
}

/// Cross-check of the spectrum routines against subset enumeration on
/// `trials` random graphs of each orientation with `n ≤ 10`.
pub fn spectrum_oracle_suite(trials: u64, master_seed: u64) -> SuiteReport {
    let mut lengths = SuiteLine::new("cycle_length_set");
    let mut counts = SuiteLine::new("count_short_cycles");
    let mut enumerated = SuiteLine::new("enumerated_counts");
    let mut circ = SuiteLine::new("circumference");
    let mut per_len = SuiteLine::new("has_cycle_of_length");
    let mut witness = SuiteLine::new("witnesses_validate");
    for (o, orientation) in [Orientation::Undirected, Orientation::Directed].into_iter().enumerate() {
        for i in 0..trials {
            let mut rng = SeededStream::new(master_seed, i).child(o as u64).rng();
            let g = random_small_graph(&mut rng, 10, orientation);
            let n = g.n();
            let truth = brute::cycle_counts(&g).expect("n ≤ 10, simple");
            let spec = spectrum::cycle_length_set(&g, spectrum::DEFAULT_BUDGET);
            lengths.record(spec.exhaustive && spec.lengths_present.iter().eq(truth.keys()));
            enumerated.record(spec.counts == truth);
            let z = spectrum::count_short_cycles(&g, n.max(3)).expect("simple");
            counts.record((3..=n).all(|k| z[k] == truth.get(&k).copied().unwrap_or(0)));
            let c = spectrum::circumference(&g).expect("small");
            circ.record(c.length == truth.keys().last().copied().unwrap_or(0));
            if let Some(w) = &c.witness {
                witness.record(g.validate_cycle(w) && w.len() == c.length);
            }
            for k in 3..=n {
                let v = spectrum::has_cycle_of_length(&g, k, spectrum::DEFAULT_BUDGET);
                per_len.record(v.is_present() == truth.contains_key(&k));
                if let spectrum::LengthVerdict::Present(w) = v {
                    witness.record(g.validate_cycle(&VertexCycle::new(w.into_vec())));
                }
            }
        }
    }
    SuiteReport {
        suite: "spectrum-oracle".into(),
        lines: vec![lengths, counts, enumerated, circ, per_len, witness],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_switching_suite() {
        let r = switching_suite(12);
        for l in &r.lines {
            assert!(l.checked > 0, "{}", l.name);
        }
        assert!(r.passed(), "{}", r.render());
        // the stated directed bound is exceeded, but only informationally
        assert!(r.line("intersections_directed_le_2l_minus_6").unwrap().violations > 0);
    }

    #[test]
    fn small_oracle_suite() {
        let r = spectrum_oracle_suite(15, 3);
        assert!(r.passed(), "{}", r.render());
    }

    #[test]
    fn aux_degree_small() {
        let l = aux_degree_check(30, 1);
        assert_eq!(l.checked, 90);
        assert_eq!(l.violations, 0);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
