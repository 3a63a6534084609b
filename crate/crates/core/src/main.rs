use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cyclespan::graph::edgelist;
use cyclespan::harness::verify::{run_suite, Suite, VerifyOptions};
use cyclespan::harness::{self, OutputFormat};
use cyclespan::spectrum::{self, SpectrumOptions};
use cyclespan::switching::{self, SwitchingContext};
use cyclespan::{theory, Error, Orientation, SeededStream};

#[derive(Parser)]
#[command(name = "cyclespan", version, about = "Cycle-length spectra of sparse random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one graph and print it as an edge list.
    Sample(SampleArgs),
    /// Cycle-length set of a graph file, as JSON.
    Spectrum(SpectrumArgs),
    /// Partner set and switching cycles of a chord on the n-cycle, as JSON.
    Switch(SwitchArgs),
    /// The product θ(c, ℓ) (or θ′ with --directed) with its certified tail.
    Theta(ThetaArgs),
    /// Run an experiment described by a JSON config.
    Experiment(ExperimentArgs),
    /// Run built-in invariant suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelName {
    Configuration,
    Regular,
    HamPlusMatching,
    HamPlusHam,
    HamPlusBinomial,
    Binomial,
    Cycle,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    model: ModelName,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Edge probability (binomial models).
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    directed: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    index: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Graph in edge-list format.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = spectrum::DEFAULT_BUDGET)]
    budget: u64,
    /// Report length-2 cycles.
    #[arg(long)]
    allow_short: bool,
}

#[derive(Args)]
struct SwitchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    directed: bool,
    /// Chord as `u,v`.
    #[arg(long, value_parser = parse_pair)]
    e: (usize, usize),
    /// Partner edge as `u,v`; prints the resulting cycles.
    #[arg(long, value_parser = parse_pair)]
    f: Option<(usize, usize)>,
}

#[derive(Args)]
struct ThetaArgs {
    #[arg(long)]
    c: f64,
    #[arg(long)]
    ell: usize,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long)]
    directed: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's thread count.
    #[arg(long, env = "CYCLESPAN_THREADS")]
    threads: Option<usize>,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the summary table to stderr.
    #[arg(long)]
    summary: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// switching, poisson, lemma, spectrum-oracle or all.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 20)]
    n_max: usize,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, env = "CYCLESPAN_THREADS", default_value_t = 0)]
    threads: usize,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected `u,v`")?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((parse(a)?, parse(b)?))
}

enum Failure {
    /// Bad input or a failed check: exit 1.
    Invalid(String),
    /// Anything else: exit 2.
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Internal(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn pretty(v: &serde_json::Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("json"))
}

fn sample(a: SampleArgs) -> Result<(), Failure> {
    use cyclespan::samplers::*;
    let stream = SeededStream::new(a.seed, a.index);
    let o = Orientation::from_directed(a.directed);
    let need_p = || {
        a.p.ok_or_else(|| Failure::Invalid("--p is required for this model".into()))
    };
    let g = match a.model {
        ModelName::Configuration => sample_configuration_model(a.n, a.d, &stream)?,
        ModelName::Regular => sample_regular_simple(a.n, a.d, &stream, DEFAULT_MAX_ATTEMPTS)?.graph,
        ModelName::HamPlusMatching => sample_ham_plus_matching(a.n, &stream)?,
        ModelName::HamPlusHam => sample_ham_plus_ham(a.n, &stream)?,
        ModelName::HamPlusBinomial => sample_ham_plus_binomial(a.n, need_p()?, o, &stream)?,
        ModelName::Binomial => sample_binomial(a.n, need_p()?, o, &stream)?,
        ModelName::Cycle => cyclespan::Graph::cycle(a.n, o)?,
    };
    emit(&edgelist::write(&g), a.out.as_ref())
}

fn spectrum_cmd(a: SpectrumArgs) -> Result<(), Failure> {
    let g = edgelist::parse(&read_input(&a.graph)?)?;
    let opts = SpectrumOptions {
        budget: a.budget,
        allow_length_two: a.allow_short,
    };
    let spec = spectrum::cycle_length_set_with(&g, &opts);
    let mut v = serde_json::to_value(&spec).expect("json");
    if let Ok(c) = spectrum::circumference(&g) {
        v["circumference"] = json!(c.length);
    }
    emit(&pretty(&v), None)
}

fn switch_cmd(a: SwitchArgs) -> Result<(), Failure> {
    let ctx = SwitchingContext::new(a.n, a.ell, Orientation::from_directed(a.directed))?;
    let fs = switching::f_set(a.e, &ctx)?;
    let mut v = json!({
        "n": a.n,
        "ell": a.ell,
        "directed": a.directed,
        "e": a.e,
        "e_ell_size": switching::count_e_ell_closed_form(&ctx),
        "f_set": fs,
        "intersecting": switching::intersecting_edges(a.e, &ctx)?,
    });
    if let Some(f) = a.f {
        if a.directed {
            v["cycle"] = json!(switching::dir_shortcut_cycle(&ctx, a.e, f)?);
        } else {
            let (short, long) = switching::switch_cycles(&ctx, a.e, f)?;
            v["cycles"] = json!([short, long]);
        }
    }
    emit(&pretty(&v), None)
}

fn theta_cmd(a: ThetaArgs) -> Result<(), Failure> {
    let r = theory::theta(a.c, a.ell, a.directed, a.tol)?;
    emit(
        &pretty(&json!({ "value": r.value, "K": r.truncation_k, "tail": r.tail_bound })),
        None,
    )
}

fn experiment(a: ExperimentArgs) -> Result<(), Failure> {
    let mut cfg = harness::parse_config(&read_input(&a.config)?)?;
    if let Some(t) = a.threads {
        cfg.threads = t;
    }
    let res = harness::run_experiment(&cfg)?;
    if a.summary {
        eprint!("{}", harness::summarize(&res));
    }
    let text = match a.format {
        OutputFormat::Csv => harness::to_csv(&res),
        OutputFormat::Json => harness::to_json(&res),
    };
    emit(&text, a.out.as_ref())
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse().map_err(Failure::Invalid)?]
    };
    let opts = VerifyOptions {
        n_max: a.n_max,
        trials: a.trials,
        master_seed: a.seed,
        threads: a.threads,
    };
    let mut ok = true;
    for s in suites {
        let report = run_suite(s, &opts)?;
        print!("{}", report.render());
        ok &= report.passed();
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Invalid("verification failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample(a) => sample(a),
        Command::Spectrum(a) => spectrum_cmd(a),
        Command::Switch(a) => switch_cmd(a),
        Command::Theta(a) => theta_cmd(a),
        Command::Experiment(a) => experiment(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
