//! Compare two classifiers from cross-validation results with a Bayesian
//! hierarchical model, classical baselines, and a synthetic-experiment
//! harness.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hiertest_cli::commands::{
    cmd_compare, cmd_simulate, cmd_ttest, CliError, CompareOpts, SamplerOpts, SimulateOpts,
    TtestOpts,
};
use hiertest_cli::report::Report;

#[derive(Parser)]
#[command(
    name = "hiertest",
    version,
    about = "Bayesian hierarchical comparison of two classifiers from cross-validation results"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SamplerArgs {
    /// Number of MCMC chains.
    #[arg(long, default_value_t = 4)]
    chains: usize,
    /// Warmup (adaptation) sweeps per chain, discarded.
    #[arg(long, default_value_t = 2000)]
    warmup: usize,
    /// Retained draws per chain.
    #[arg(long, default_value_t = 1000)]
    draws: usize,
    /// Keep every n-th post-warmup sweep.
    #[arg(long, default_value_t = 1)]
    thin: usize,
    /// Posterior draws consumed by the next-data-set counting step.
    #[arg(long, default_value_t = 4000)]
    ns: usize,
}

impl SamplerArgs {
    fn to_opts(&self) -> SamplerOpts {
        SamplerOpts {
            chains: self.chains,
            warmup: self.warmup,
            draws: self.draws,
            thin: self.thin,
            n_s: self.ns,
        }
    }
}

#[derive(Args)]
struct CompareArgs {
    /// Results CSV: header `dataset,d1..dn`, one row of fold accuracy
    /// differences per data set.
    results: Option<PathBuf>,
    /// Per-classifier fold scores (first classifier); requires --scores-b.
    #[arg(long, requires = "scores_b", conflicts_with = "results")]
    scores_a: Option<PathBuf>,
    /// Per-classifier fold scores (second classifier).
    #[arg(long, requires = "scores_a", conflicts_with = "results")]
    scores_b: Option<PathBuf>,
    /// Cross-validation runs m (n = m*k columns).
    #[arg(long, default_value_t = 10)]
    runs: usize,
    /// Cross-validation folds k.
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Rope radius r; practical equivalence is (-r, r).
    #[arg(long, default_value_t = 0.01)]
    rope: f64,
    /// Fold correlation; defaults to 1/folds.
    #[arg(long)]
    rho: Option<f64>,
    /// Decision level: declare an outcome when P > 1 - alpha.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Upper-bound factor of the uniform prior on each sigma_i.
    #[arg(long, default_value_t = 1000.0)]
    sigma_factor: f64,
    /// Upper-bound factor of the uniform prior on sigma0.
    #[arg(long, default_value_t = 1000.0)]
    sigma0_factor: f64,
    #[command(flatten)]
    sampler: SamplerArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exit nonzero when any split R-hat exceeds 1.1.
    #[arg(long)]
    strict_convergence: bool,
    /// Directory for density CSV exports.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Include wall-clock runtime in the JSON (off by default so reports are
    /// byte-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct TtestArgs {
    /// Results CSV with exactly one data set row.
    results: PathBuf,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_value_t = 0.01)]
    rope: f64,
    /// Fold correlation; defaults to 1/folds.
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// mse-bimodal | null-cauchy | equivalent-cauchy | different-cauchy | friedman
    #[arg(long)]
    scenario: String,
    #[arg(long, default_value_t = 50)]
    replicates: usize,
    /// Data sets per replicate.
    #[arg(long, default_value_t = 10)]
    q: usize,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Instances per generated data set.
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 0.01)]
    rope: f64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Population center for the different-cauchy scenario.
    #[arg(long, default_value_t = 0.02)]
    delta0: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generators and signed-rank only, no hierarchical fits.
    #[arg(long)]
    skip_mcmc: bool,
    #[command(flatten)]
    sampler: SamplerArgs,
    /// Repetitions per setting for ground-truth differences (friedman).
    #[arg(long, default_value_t = 50)]
    truth_reps: usize,
    /// Settings per function in each friedman replicate.
    #[arg(long, default_value_t = 12)]
    settings_per_fn: usize,
    /// Directory for per-replicate records and generated matrices.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze cross-validation results from q >= 2 data sets.
    Compare(CompareArgs),
    /// Correlated t-test and Bayesian correlated t-test on one data set.
    Ttest(TtestArgs),
    /// Run a synthetic experiment scenario.
    Simulate(SimulateArgs),
}

fn print_report(report: &Report) {
    println!("{}", report.to_json());
}

fn run() -> Result<i32, CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Compare(args) => {
            let opts = CompareOpts {
                results: args.results,
                scores_a: args.scores_a,
                scores_b: args.scores_b,
                runs: args.runs,
                folds: args.folds,
                rope: args.rope,
                rho: args.rho,
                alpha: args.alpha,
                sigma_factor: args.sigma_factor,
                sigma0_factor: args.sigma0_factor,
                sampler: args.sampler.to_opts(),
                seed: args.seed,
                out_dir: args.out_dir,
                timing: args.timing,
            };
            let report = cmd_compare(&opts)?;
            let converged = report.diagnostics.as_ref().is_none_or(|d| d.converged);
            print_report(&report);
            if !converged {
                eprintln!("warning: split R-hat above 1.1 on at least one parameter");
                if args.strict_convergence {
                    return Ok(1);
                }
            }
            Ok(0)
        }
        Command::Ttest(args) => {
            let opts = TtestOpts {
                results: args.results,
                runs: args.runs,
                folds: args.folds,
                rope: args.rope,
                rho: args.rho,
                seed: args.seed,
                timing: args.timing,
            };
            print_report(&cmd_ttest(&opts)?);
            Ok(0)
        }
        Command::Simulate(args) => {
            let scenario = args.scenario.parse().map_err(CliError::Usage)?;
            let opts = SimulateOpts {
                scenario,
                replicates: args.replicates,
                q: args.q,
                runs: args.runs,
                folds: args.folds,
                instances: args.instances,
                rope: args.rope,
                alpha: args.alpha,
                delta0: args.delta0,
                seed: args.seed,
                skip_mcmc: args.skip_mcmc,
                sampler: args.sampler.to_opts(),
                truth_reps: args.truth_reps,
                settings_per_fn: args.settings_per_fn,
                out_dir: args.out_dir,
            };
            let output = cmd_simulate(&opts)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&output.summary).expect("summary json")
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
