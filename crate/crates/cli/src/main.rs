use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ziptree::experiments::{run_experiment, ExperimentConfig, ExperimentKind};
use ziptree::{RankPolicy, Strategy};
use ziptree_cli::exit;
use ziptree_cli::report::{self, Format};
use ziptree_cli::script::{run_trace, OpScript};
use ziptree_cli::verify::{run_verify, VerifyConfig};

#[derive(Parser)]
#[command(name = "ziptree", version, about = "Zip-tree verification, experiments and traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run randomized invariant suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated tree sizes.
        #[arg(long, value_delimiter = ',', default_values_t = [16, 64, 256, 1024])]
        sizes: Vec<usize>,
        /// Random operations in total, shared by the sizes.
        #[arg(long, default_value_t = 100_000)]
        iterations: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Run an experiment and write its records.
    Bench(BenchArgs),
    /// Apply an operation script and print results and dumps.
    Trace {
        /// Script file, or `-` for standard input.
        script: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Iter)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct BenchArgs {
    /// One of: depth, root-rank, update-cost, descendants, ties, treap-depth.
    experiment: ExperimentKindArg,
    #[arg(long, default_value_t = 1 << 14)]
    n: usize,
    #[arg(long, default_value_t = 30)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Probability that a rank grows by one more level.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    frac_bits: u8,
    /// Derive ranks from key hashes instead of storing drawn ranks.
    #[arg(long)]
    key_ranks: bool,
    #[arg(long, value_enum, default_value_t = StrategyArg::Iter)]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Rec,
    Iter,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Rec => Strategy::Recursive,
            StrategyArg::Iter => Strategy::Iterative,
        }
    }
}

#[derive(Clone)]
struct ExperimentKindArg(ExperimentKind);

impl std::str::FromStr for ExperimentKindArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.parse()
            .map(ExperimentKindArg)
            .map_err(|e: ziptree::experiments::ExperimentError| e.to_string())
    }
}

fn usage(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(exit::USAGE as u8)
}

fn bench(args: BenchArgs) -> ExitCode {
    let base = if args.key_ranks {
        RankPolicy::key_function(0)
    } else {
        RankPolicy::stored(0)
    };
    let policy = match base.with_p(args.p).and_then(|p| p.with_fractional_bits(args.frac_bits)) {
        Ok(p) => p,
        Err(e) => return usage(e),
    };
    let cfg = match ExperimentConfig::new(args.n, args.trials, args.seed) {
        Ok(c) => c.with_policy(policy).with_strategy(args.strategy.into()),
        Err(e) => return usage(e),
    };
    let records = match run_experiment(args.experiment.0, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit::INVARIANT_FAILURE as u8);
        }
    };
    let text = report::render(&records, args.format);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return usage(format!("cannot write {}: {e}", path.display()));
            }
        }
        None => print!("{text}"),
    }
    if records.iter().any(|r| r.pass == Some(false)) {
        ExitCode::from(exit::INVARIANT_FAILURE as u8)
    } else {
        ExitCode::SUCCESS
    }
}

fn trace(path: PathBuf, strategy: StrategyArg, seed: u64) -> ExitCode {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(&path)
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => return usage(format!("cannot read {}: {e}", path.display())),
    };
    let script = match OpScript::parse(&text) {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    match run_trace(&script, strategy.into(), seed) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::INVARIANT_FAILURE as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            seed,
            sizes,
            iterations,
            inject_fault,
        } => {
            let report = run_verify(&VerifyConfig {
                seed,
                sizes,
                iterations,
                inject_fault,
            });
            print!("{}", report.render());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(exit::INVARIANT_FAILURE as u8)
            }
        }
        Command::Bench(args) => bench(args),
        Command::Trace { script, strategy, seed } => trace(script, strategy, seed),
    }
}
