use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use liarsel::flow::completion;
use liarsel::harness::experiment::write_csv;
use liarsel::harness::{
    calibrate, flow_selftest, measure_thickness, run_experiments, verify_exhaustive, CalibrateConfig,
    ExperimentConfig, OracleSpec, SelftestConfig, SelftestOutcome, Verdict,
};
use liarsel::{Algorithm, Calibration, MinMaxOptions, OrderedMultigraph, Sorter};

#[derive(Parser)]
#[command(name = "liarsel", version, about = "Min/max selection against a comparison oracle that lies at most k times")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Seeded trials, one CSV row each.
    Run(RunArgs),
    /// Walk the full adversary game tree for a small instance.
    Verify(VerifyArgs),
    /// Thickness of sort graphs over random permutations, as CSV.
    Thickness(ThicknessArgs),
    /// Check the graph completion against a brute-force minimum cut.
    FlowSelftest(SelftestArgs),
    /// Measure balanced quicksort and write its constants as key=value.
    Calibrate(CalibrateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Truthful,
    RandomLiar,
    TriggeredLiar,
}

#[derive(Args)]
struct Common {
    /// Calibration file (key=value) overriding the built-in constants.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn calibration(&self) -> liarsel::Result<Calibration> {
        match &self.config {
            Some(path) => std::fs::read_to_string(path)?.parse(),
            None => Ok(Calibration::default()),
        }
    }

    fn writer(&self) -> liarsel::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(File::create(path)?),
            None => Box::new(io::stdout().lock()),
        })
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    algorithm: Algorithm,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long, value_enum, default_value = "truthful")]
    oracle: OracleKind,
    /// Lie probability for the random liar.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Global query indices the triggered liar lies at (repeatable or comma-separated).
    #[arg(long, value_delimiter = ',')]
    trigger: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    s_override: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    algorithm: Algorithm,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long)]
    s_override: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ThicknessArgs {
    #[arg(long, default_value = "balanced-quicksort")]
    sorter: Sorter,
    /// Sizes to measure (comma-separated).
    #[arg(long, value_delimiter = ',', default_value = "64,256,1024,4096")]
    s: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 8)]
    max_s: usize,
    #[arg(long, default_value_t = 3)]
    max_k: usize,
    #[arg(long, default_value_t = 10_000)]
    random: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instead of the self-test, complete the graph in this edge-list file
    /// and print H and its completion.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Lie budget used with --graph.
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CalibrateArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest size sorted in every permutation.
    #[arg(long, default_value_t = 8)]
    exhaustive_max_s: usize,
    #[command(flatten)]
    common: Common,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn options(s_override: Option<usize>, common: &Common) -> liarsel::Result<MinMaxOptions> {
    Ok(MinMaxOptions {
        s_override,
        calibration: common.calibration()?,
    })
}

fn run(cli: Cli) -> liarsel::Result<bool> {
    match cli.command {
        Command::Run(a) => {
            let oracle = match a.oracle {
                OracleKind::Truthful => OracleSpec::Truthful,
                OracleKind::RandomLiar => OracleSpec::RandomLiar { p: a.p },
                OracleKind::TriggeredLiar => OracleSpec::TriggeredLiar { indices: a.trigger.clone() },
            };
            let mut cfg = ExperimentConfig::new(a.algorithm, a.n, a.k, oracle);
            cfg.trials = a.trials;
            cfg.seed = a.seed;
            cfg.options = options(a.s_override, &a.common)?;
            let rows = run_experiments(&cfg)?;
            write_csv(&rows, a.common.writer()?)?;
            Ok(rows.iter().all(|r| r.within_bound))
        }
        Command::Verify(a) => {
            let verdict = verify_exhaustive(a.n, a.k, a.algorithm, &options(a.s_override, &a.common)?)?;
            let mut out = a.common.writer()?;
            match verdict {
                Verdict::Pass { leaves } => {
                    writeln!(out, "pass: {} n={} k={} leaves={leaves}", a.algorithm, a.n, a.k)?;
                    Ok(true)
                }
                Verdict::Counterexample(c) => {
                    writeln!(out, "counterexample: {} n={} k={}", a.algorithm, a.n, a.k)?;
                    writeln!(out, "reported min={:?} max={:?}", c.reported_min, c.reported_max)?;
                    if let Some(order) = &c.order {
                        writeln!(out, "consistent order (ascending): {:?}", order.ascending())?;
                    }
                    if let Some(e) = &c.error {
                        writeln!(out, "error: {e}")?;
                    }
                    for r in c.transcript.records() {
                        writeln!(out, "{} {} {} {:?}", r.index, r.a, r.b, r.answer)?;
                    }
                    Ok(false)
                }
            }
        }
        Command::Thickness(a) => {
            let rows = measure_thickness(a.sorter, &a.s, a.trials, a.seed)?;
            write_csv(&rows, a.common.writer()?)?;
            Ok(true)
        }
        Command::FlowSelftest(a) => {
            let mut out = a.common.writer()?;
            if let Some(path) = &a.graph {
                let h: OrderedMultigraph = std::fs::read_to_string(path)?.parse()?;
                let c = completion(&h, a.k)?;
                writeln!(out, "# H")?;
                write!(out, "{h}")?;
                writeln!(out, "# completed, {} edges added", c.added.len())?;
                write!(out, "{}", c.completed)?;
                return Ok(true);
            }
            let cfg = SelftestConfig {
                max_s: a.max_s,
                max_k: a.max_k,
                random_instances: a.random,
                seed: a.seed,
            };
            match flow_selftest(&cfg)? {
                SelftestOutcome::Pass { exhaustive, random } => {
                    writeln!(out, "pass: {exhaustive} enumerated graphs, {random} random graphs")?;
                    Ok(true)
                }
                SelftestOutcome::Failure(f) => {
                    writeln!(out, "failure: {f}")?;
                    Ok(false)
                }
            }
        }
        Command::Calibrate(a) => {
            let cfg = CalibrateConfig {
                exhaustive_max_s: a.exhaustive_max_s,
                random_trials: a.trials,
                seed: a.seed,
                ..CalibrateConfig::default()
            };
            let report = calibrate(&cfg, a.common.calibration()?)?;
            a.common.writer()?.write_all(report.to_config().as_bytes())?;
            if !report.current_is_valid() {
                eprintln!("current constants do not cover the measurements; wrote fitted values");
            }
            Ok(true)
        }
    }
}
