//! Acceptance checks. Each criterion prints one `PASS` or `FAIL` line with
//! its measurements; the process exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use cyclespan::harness::verify::{aux_degree_check, spectrum_oracle_suite, switching_suite};
use cyclespan::harness::{run_experiment, to_csv, CellStatus, EllSpec, ExperimentConfig, ExperimentKind, ModelSpec};
use cyclespan::samplers::{sample_binomial, sprinkle};
use cyclespan::{theory, Orientation, SeededStream};

/// θ(2, 3) to 50 digits from an independent arbitrary-precision evaluation of
/// the product.
const THETA_2_3: f64 = 0.607_772_639_454_503_885_398_706_872_734_151_077_488_451_458_796_54;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn config(kind: ExperimentKind, model: ModelSpec, ells: EllSpec, trials: u64, seed: u64) -> ExperimentConfig {
    ExperimentConfig::new(kind, model, ells, trials, seed)
}

fn switching_exhaustive() -> Verdict {
    let start = Instant::now();
    let report = switching_suite(20);
    let elapsed = start.elapsed();
    let mut failing = Vec::new();
    let mut checked = 0;
    for l in &report.lines {
        checked += l.checked;
        if l.violations > 0 {
            failing.push(format!("{} {}/{}", l.name, l.violations, l.checked));
        }
    }
    let fast = elapsed < Duration::from_secs(60);
    let detail = if failing.is_empty() {
        format!("{checked} checks, 0 violations, {elapsed:.1?}")
    } else {
        format!("{checked} checks, {elapsed:.1?}; violations: {}", failing.join(", "))
    };
    verdict(failing.is_empty() && fast, detail)
}

fn aux_degree() -> Verdict {
    let l = aux_degree_check(1000, 2);
    verdict(
        l.violations == 0,
        format!("{} matchings checked, {} violations", l.checked, l.violations),
    )
}

fn spectrum_oracle() -> Verdict {
    let r = spectrum_oracle_suite(100, 3);
    let bad: u64 = r.lines.iter().map(|l| l.violations).sum();
    let checked: u64 = r.lines.iter().map(|l| l.checked).sum();
    verdict(bad == 0, format!("{checked} comparisons, {bad} mismatches"))
}

fn poisson_means() -> Verdict {
    let cfg = config(
        ExperimentKind::PoissonFit,
        ModelSpec::Configuration { n: 2000, d: 3 },
        EllSpec::List(vec![3, 4]),
        1000,
        4,
    );
    let start = Instant::now();
    let res = run_experiment(&cfg).expect("poisson_fit runs");
    let elapsed = start.elapsed();
    let stat = |k: &str, label: &str| {
        res.cells
            .iter()
            .find(|c| c.k_or_ell == k && c.param.ends_with(label))
            .expect("cell present")
    };
    let (m3, m4) = (stat("3", "stat=mean"), stat("4", "stat=mean"));
    let (v3, v4) = (stat("3", "stat=variance"), stat("4", "stat=variance"));
    let means_ok = (m3.estimate - 4.0 / 3.0).abs() <= 0.12 && (m4.estimate - 2.0).abs() <= 0.14;
    let var_ok = [v3, v4]
        .iter()
        .all(|v| (v.estimate - v.reference).abs() <= 0.25 * v.reference);
    verdict(
        means_ok && var_ok && elapsed < Duration::from_secs(60),
        format!(
            "Z3 mean {:.4} (4/3 ± 0.12) var {:.4}; Z4 mean {:.4} (2 ± 0.14) var {:.4}; {elapsed:.1?}",
            m3.estimate, v3.estimate, m4.estimate, v4.estimate
        ),
    )
}

fn per_length() -> Verdict {
    let models = [
        ModelSpec::Regular {
            n: 60,
            d: 3,
            max_attempts: 1000,
        },
        ModelSpec::Binomial {
            n: 60,
            c: 2.0,
            directed: true,
        },
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, model) in models.into_iter().enumerate() {
        let mut cfg = config(
            ExperimentKind::PerLengthProbability,
            model,
            EllSpec::List(vec![3, 4, 5]),
            500,
            5 + i as u64,
        );
        cfg.tolerance = Some(0.07);
        let res = run_experiment(&cfg).expect("per_length runs");
        for c in &res.cells {
            pass &= c.status == CellStatus::Pass;
            parts.push(format!(
                "{}{} k={}: {:.3} vs {:.3}",
                c.model,
                if c.param.contains("directed") { "(dir)" } else { "" },
                c.k_or_ell,
                c.estimate,
                c.reference
            ));
        }
    }
    verdict(pass, format!("{} (tol 0.07)", parts.join("; ")))
}

fn interval_trend() -> Verdict {
    let theta = theory::theta(2.0, 3, false, 1e-12).expect("theta").value;
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, n) in [20usize, 40, 60].into_iter().enumerate() {
        let cfg = config(
            ExperimentKind::IntervalProbability,
            ModelSpec::Regular {
                n,
                d: 3,
                max_attempts: 1000,
            },
            EllSpec::Range { lo: 3, hi: None },
            500,
            8 + i as u64,
        );
        let res = run_experiment(&cfg).expect("interval runs");
        let est = res.cells[0].estimate;
        let bound = res
            .cells
            .iter()
            .find(|c| c.param.ends_with("ref=lower_bound"))
            .expect("bound cell");
        let usable = res.undecided_trials == 0 && res.failed_trials == 0;
        pass &= usable && bound.status == CellStatus::Pass;
        if n == 60 {
            pass &= (est - theta).abs() <= 0.15;
        }
        parts.push(format!("n={n}: {est:.3} ± {:.3}", res.cells[0].stderr));
    }
    verdict(
        pass,
        format!(
            "{}; θ = {theta:.4}, lower bound {:.4}",
            parts.join(", "),
            theory::regular_lower_bound(3, 3)
        ),
    )
}

fn lemma_conclusions() -> Verdict {
    let cfg = config(
        ExperimentKind::LemmaCheck,
        ModelSpec::HamPlusMatching { n: 2000 },
        EllSpec::List(vec![16, 64]),
        200,
        11,
    );
    let res = run_experiment(&cfg).expect("lemma runs");
    let pass = res.cells.iter().all(|c| c.status == CellStatus::Pass);
    let parts: Vec<String> = res
        .cells
        .iter()
        .map(|c| {
            format!(
                "ℓ={} {}: {:.3}",
                c.k_or_ell,
                c.param.trim_start_matches("stat="),
                c.estimate
            )
        })
        .collect();
    verdict(pass, format!("{} (need ≥ 0.99)", parts.join(", ")))
}

fn staged_binomial() -> Verdict {
    let cfg = config(
        ExperimentKind::StagedSuccess,
        ModelSpec::HamPlusBinomial {
            n: 3000,
            delta: 0.3,
            directed: false,
        },
        EllSpec::List(vec![1500]),
        400,
        12,
    );
    let start = Instant::now();
    let res = run_experiment(&cfg).expect("staged runs");
    let elapsed = start.elapsed();
    let c = &res.cells[0];
    verdict(
        c.status == CellStatus::Pass && elapsed < Duration::from_secs(300),
        format!(
            "witness rate {:.4} ± {:.4}, bound {:.4}, {} aborted, {elapsed:.1?}",
            c.estimate, c.stderr, c.reference, res.aborted_trials
        ),
    )
}

fn sprinkle_marginal() -> Verdict {
    let n = 300;
    let (p, p_prime) = (3.0 / n as f64, 2.0 / n as f64);
    let trials = 5000u64;
    let probes: Vec<(usize, usize)> = (0..20).map(|i| (i * 7, i * 7 + 1 + i * 5)).collect();
    let mut hits = vec![0u64; probes.len()];
    for t in 0..trials {
        let s = SeededStream::new(13, t);
        let base = sample_binomial(n, p_prime, Orientation::Undirected, &s).expect("binomial");
        let g = sprinkle(&base, p, p_prime, &s.child(1)).expect("sprinkle");
        for (h, &(u, v)) in hits.iter_mut().zip(&probes) {
            *h += u64::from(g.has_edge(u, v));
        }
    }
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    let z: Vec<f64> = hits
        .iter()
        .map(|&h| (h as f64 / trials as f64 - p).abs() / sigma)
        .collect();
    let worst = z.iter().copied().fold(0.0, f64::max);
    let outside = z.iter().filter(|&&x| x > 3.0).count();
    verdict(
        outside == 0,
        format!("{outside} of 20 probe edges outside p ± 3σ, max deviation {worst:.2}σ (p = {p:.5})"),
    )
}

fn theta_engine() -> Verdict {
    let r = theory::theta(2.0, 3, false, 1e-12).expect("theta");
    let err = (r.value - THETA_2_3).abs();
    let cs = [1.2, 2.0, 5.0, 10.0];
    let mut monotone_bad = 0;
    let mut sandwich_bad = 0;
    let mut points = 0;
    for (ci, &c) in cs.iter().enumerate() {
        for ell in 3..=10 {
            points += 1;
            let t = theory::theta(c, ell, false, 1e-12).expect("theta");
            if ell < 10 && theory::theta(c, ell + 1, false, 1e-12).unwrap().value < t.value {
                monotone_bad += 1;
            }
            if ci + 1 < cs.len() && theory::theta(cs[ci + 1], ell, false, 1e-12).unwrap().value < t.value {
                monotone_bad += 1;
            }
            let sum: f64 = (ell..=t.truncation_k)
                .map(|k| (-theory::lambda_k(k, c, false)).exp())
                .sum();
            let lower = 1.0 - sum - t.tail_bound;
            let upper = theory::per_length_probability(ell, c, false);
            if !(lower <= t.value && t.value <= upper) {
                sandwich_bad += 1;
            }
        }
    }
    verdict(
        err <= 1e-10 && monotone_bad == 0 && sandwich_bad == 0,
        format!(
            "θ(2,3) = {:.15} (|error| {err:.1e}), {points} grid points, {monotone_bad} monotonicity and {sandwich_bad} sandwich violations",
            r.value
        ),
    )
}

fn determinism() -> Verdict {
    let cfgs = [
        config(
            ExperimentKind::PerLengthProbability,
            ModelSpec::Binomial {
                n: 60,
                c: 2.0,
                directed: true,
            },
            EllSpec::List(vec![3, 4, 5, 8]),
            200,
            14,
        ),
        config(
            ExperimentKind::IntervalProbability,
            ModelSpec::Regular {
                n: 20,
                d: 3,
                max_attempts: 1000,
            },
            EllSpec::Range { lo: 3, hi: None },
            200,
            15,
        ),
        config(
            ExperimentKind::PoissonFit,
            ModelSpec::Configuration { n: 500, d: 3 },
            EllSpec::List(vec![3, 4, 5]),
            200,
            16,
        ),
    ];
    let mut same = true;
    let mut bytes = 0;
    for cfg in &cfgs {
        let mut outputs = Vec::new();
        for threads in [1, 8, 1, 8] {
            let mut c = cfg.clone();
            c.threads = threads;
            outputs.push(to_csv(&run_experiment(&c).expect("runs")));
        }
        same &= outputs.windows(2).all(|w| w[0] == w[1]);
        bytes += outputs[0].len();
    }
    verdict(
        same,
        format!("3 experiments × 4 runs at 1/8 threads, {bytes} CSV bytes each pass"),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("switching exhaustive suite", switching_exhaustive),
        ("auxiliary-graph degree bound", aux_degree),
        ("spectrum oracle equivalence", spectrum_oracle),
        ("Poisson means", poisson_means),
        ("per-length probabilities", per_length),
        ("interval probability trend", interval_trend),
        ("stage I edge counts", lemma_conclusions),
        ("staged binomial success", staged_binomial),
        ("sprinkling marginal", sprinkle_marginal),
        ("θ engine", theta_engine),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {}", i + 1, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
