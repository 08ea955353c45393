use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use streamdiv::data::{self, Dataset};
use streamdiv::harness::{self, OutputFormat, Settings};
use streamdiv::oracle;
use streamdiv::strategies::{StrategyKind, StrategyParams};

#[derive(Parser)]
#[command(name = "streamdiv", version, about = "Online Max-Min diversification experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded paired trials and write results.csv / summary.json.
    Run(RunArgs),
    /// Wall-time scaling of one strategy over increasing stream sizes.
    Bench(BenchArgs),
    /// Offline optimum (exact) or farthest-point greedy on a dataset.
    Oracle(OracleArgs),
    /// Sweep exponential δ schedules against the constant one (FRM only).
    TuneDelta(TuneArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    /// `synthetic` or `csv:PATH`.
    #[arg(long, default_value = "synthetic")]
    dataset: String,
    #[arg(long, default_value_t = 5000)]
    n: usize,
    #[arg(long, default_value_t = 256)]
    d: usize,
    #[arg(long, default_value_t = 10)]
    b: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Flat key=value file; its keys override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    exp: ExperimentArgs,
    /// Comma list, e.g. FRM,KLEINBERG,MEAN.
    #[arg(long, value_delimiter = ',')]
    strategies: Option<Vec<StrategyKind>>,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "csv,json")]
    format: Vec<OutputFormat>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "FRM")]
    strategy: StrategyKind,
    #[arg(long, value_delimiter = ',', default_value = "2000,4000,8000")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 64)]
    d: usize,
    #[arg(long, default_value_t = 10)]
    b: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Greedy,
}

#[derive(Args)]
struct OracleArgs {
    /// CSV file; omitted means a synthetic dataset from --n/--d/--seed.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 12)]
    n: usize,
    #[arg(long, default_value_t = 8)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    b: usize,
    #[arg(long, value_enum, default_value = "exact")]
    method: Method,
    /// Maximum number of subsets the exact search may enumerate.
    #[arg(long, default_value_t = oracle::DEFAULT_ENUMERATION_CAP)]
    cap: u128,
}

#[derive(Args)]
struct TuneArgs {
    #[command(flatten)]
    exp: ExperimentArgs,
    #[arg(long, value_delimiter = ',', default_value = "200,300,412,500")]
    v1: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "36,72,144")]
    v2: Vec<f64>,
    /// Largest acceptable failure rate, percent.
    #[arg(long, default_value_t = 2.0)]
    max_failure: f64,
}

type AnyResult<T> = Result<T, Box<dyn std::error::Error>>;

/// Flags first, then `flags_only` for command-specific fields, then the
/// config file on top.
fn settings(exp: &ExperimentArgs, flags_only: impl FnOnce(&mut Settings)) -> AnyResult<Settings> {
    let mut s = Settings {
        dataset: exp.dataset.clone(),
        n: exp.n,
        d: exp.d,
        b: exp.b,
        trials: exp.trials,
        seed: exp.seed,
        ..Settings::default()
    };
    flags_only(&mut s);
    if let Some(path) = &exp.config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        s.apply(&harness::parse_config(&text)?)?;
    }
    Ok(s)
}

fn run(args: RunArgs) -> AnyResult<()> {
    let s = settings(&args.exp, |s| {
        if let Some(list) = args.strategies {
            s.strategies = list;
        }
        s.out = args.out;
        s.formats = args.format;
    })?;
    let config = s.experiment()?;
    let result = harness::run_experiment(&config)?;
    let written = harness::emit_results(&result, &s.out, &s.formats)?;
    print!("{}", harness::render_table(&[(&result.stats.dataset, &result.stats)]));
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn bench(args: BenchArgs) -> AnyResult<()> {
    let params = StrategyParams::defaults(args.strategy, args.b)?;
    let table = harness::scaling_benchmark(params, &args.sizes, args.reps, args.d, args.b, args.seed)?;
    println!("{} d={} b={}", table.strategy, table.d, table.b);
    for (i, row) in table.rows.iter().enumerate() {
        let ratio = i
            .checked_sub(1)
            .map_or_else(String::new, |p| format!("  x{:.2}", table.ratios[p]));
        println!("N={:<8} {:.6}s{ratio}", row.n, row.median_time);
    }
    Ok(())
}

fn oracle_cmd(args: OracleArgs) -> AnyResult<()> {
    let dataset: Dataset = match &args.input {
        Some(path) => data::load_csv(path)?,
        None => data::generate_random_walks(args.n, args.d, args.seed)?,
    };
    let stream = dataset.as_stream();
    let result = match args.method {
        Method::Exact => oracle::brute_force_capped(&stream, args.b, args.cap)?,
        Method::Greedy => oracle::greedy_maxmin(&stream, args.b)?,
    };
    println!("{}", serde_json::to_string_pretty(&result)?);
    Ok(())
}

fn tune(args: TuneArgs) -> AnyResult<()> {
    let s = settings(&args.exp, |_| {})?;
    let config = Settings {
        strategies: vec![StrategyKind::Frm],
        ..s.clone()
    }
    .experiment()?;
    let report = harness::tune_delta(&config, &args.v1, &args.v2, s.frm_cutoff, args.max_failure)?;
    println!(
        "constant       median {:.4}  failure {:.1}%",
        report.constant_median, report.constant_failure_rate
    );
    for p in &report.grid {
        println!(
            "v1={:<6} v2={:<6} median {:.4}  failure {:.1}%",
            p.shift, p.scale, p.median, p.failure_rate
        );
    }
    match &report.best {
        Some(b) => println!("best: v1={} v2={} (median {:.4})", b.shift, b.scale, b.median),
        None => println!("best: none within {:.1}% failure", args.max_failure),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => run(a),
        Command::Bench(a) => bench(a),
        Command::Oracle(a) => oracle_cmd(a),
        Command::TuneDelta(a) => tune(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
