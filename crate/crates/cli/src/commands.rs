//! Command implementations behind the thin clap front end.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use hiertest::baselines::{
    bayes_correlated_t_test, correlated_t_test, signed_rank_test, TestError,
};
use hiertest::data::{sufficient_stats, CrossValMatrix, DataError, HierConfig};
use hiertest::inference::{
    map_fixed_point, next_delta_simplex, shrinkage_estimates, InferenceError, ShrinkageResult,
};
use hiertest::kde;
use hiertest::sampler::{fit_hierarchical, ChainConfig, PosteriorDraws, SamplerError};
use hiertest::scenarios::{run_simulation, Scenario, ScenarioError, SimOpts, SimOutput};

use crate::io::{self, IoError};
use crate::report::{
    Baselines, ConfigEcho, DatasetRow, DatasetTest, Diagnostics, Report, SCHEMA_VERSION,
};

#[derive(Debug, Error)]
pub enum CliError {
    /// Misuse of the command line; exits with status 2.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error("degenerate input: {0}")]
    Test(#[from] TestError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Kde(#[from] kde::KdeError),
    #[error("i/o error: {0}")]
    File(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Shared sampler flags.
#[derive(Debug, Clone)]
pub struct SamplerOpts {
    pub chains: usize,
    pub warmup: usize,
    pub draws: usize,
    pub thin: usize,
    pub n_s: usize,
}

impl Default for SamplerOpts {
    fn default() -> Self {
        let c = ChainConfig::default();
        Self {
            chains: c.chains,
            warmup: c.warmup,
            draws: c.keep,
            thin: c.thin,
            n_s: 4000,
        }
    }
}

impl SamplerOpts {
    fn chain_config(&self, seed: u64) -> ChainConfig {
        ChainConfig {
            chains: self.chains,
            warmup: self.warmup,
            keep: self.draws,
            thin: self.thin,
            seed,
            ..ChainConfig::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompareOpts {
    pub results: Option<PathBuf>,
    pub scores_a: Option<PathBuf>,
    pub scores_b: Option<PathBuf>,
    pub runs: usize,
    pub folds: usize,
    pub rope: f64,
    pub rho: Option<f64>,
    pub alpha: f64,
    pub sigma_factor: f64,
    pub sigma0_factor: f64,
    pub sampler: SamplerOpts,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
    pub timing: bool,
}

fn load_matrix(opts: &CompareOpts) -> Result<CrossValMatrix, CliError> {
    match (&opts.results, &opts.scores_a, &opts.scores_b) {
        (Some(path), None, None) => Ok(io::parse_results(path, opts.runs, opts.folds)?),
        (None, Some(a), Some(b)) => Ok(io::parse_score_pair(a, b, opts.runs, opts.folds)?),
        _ => Err(CliError::Usage(
            "provide either a results file or both --scores-a and --scores-b".into(),
        )),
    }
}

fn baseline_tests(matrix: &CrossValMatrix, means: &[f64], rho: f64) -> Baselines {
    let (signed_rank, signed_rank_error) = match signed_rank_test(means) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let correlated_t = matrix
        .names()
        .iter()
        .zip(matrix.rows())
        .map(|(name, row)| match correlated_t_test(row, rho) {
            Ok(r) => DatasetTest {
                name: name.clone(),
                result: Some(r),
                error: None,
            },
            Err(e) => DatasetTest {
                name: name.clone(),
                result: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    Baselines {
        signed_rank,
        signed_rank_error,
        correlated_t,
    }
}

/// Draw next-data-set differences from the fitted population distribution,
/// cycling through the retained (delta0, sigma0, nu) draws.
fn posterior_predictive_deltas(
    draws: &PosteriorDraws,
    count: usize,
    rng: &mut impl Rng,
) -> Vec<f64> {
    (0..count)
        .map(|i| {
            let row = draws.row(i % draws.total_draws());
            let (delta0, sigma0, nu) = (row[0], row[1], row[2]);
            let t: f64 = rng.sample(rand_distr::StudentT::new(nu).expect("positive nu"));
            delta0 + sigma0 * t
        })
        .collect()
}

fn write_density_exports(
    dir: &PathBuf,
    draws: &PosteriorDraws,
    shrinkage: &ShrinkageResult,
    seed: u64,
) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let shrink_means: Vec<f64> = shrinkage.per_dataset.iter().map(|d| d.mean).collect();
    let curve = kde::kde_export(&shrink_means, None)?;
    io::write_density_file(&dir.join("shrinkage_density.csv"), &curve.points)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x5EED));
    let predictive = posterior_predictive_deltas(draws, 8000, &mut rng);
    let curve = kde::kde_export(&predictive, None)?;
    io::write_density_file(&dir.join("predictive_density.csv"), &curve.points)?;
    Ok(())
}

/// Full multi-data-set analysis: sufficient statistics, hierarchical fit,
/// rope probabilities, shrinkage and baselines.
pub fn cmd_compare(opts: &CompareOpts) -> Result<Report, CliError> {
    let start = Instant::now();
    let matrix = load_matrix(opts)?;
    if matrix.q() < 2 {
        return Err(CliError::Usage(
            "only one data set found; use the `ttest` subcommand for a single data set".into(),
        ));
    }
    let rho = opts.rho.unwrap_or_else(|| matrix.default_rho());

    let mut cfg = HierConfig::for_folds(opts.folds);
    cfg.rope = opts.rope;
    cfg.rho = rho;
    cfg.alpha_level = opts.alpha;
    cfg.sigma_upper_factor = opts.sigma_factor;
    cfg.sigma0_upper_factor = opts.sigma0_factor;
    cfg.n_s = opts.sampler.n_s;
    cfg.chain = opts.sampler.chain_config(opts.seed);
    cfg.validate()?;

    let stats = sufficient_stats(&matrix)?;
    let draws = fit_hierarchical(&stats, &cfg)?;
    let mut simplex_rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(0xD1CE));
    let rope = next_delta_simplex(&draws, cfg.rope, cfg.n_s, cfg.alpha_level, &mut simplex_rng)?;
    let shrinkage = ShrinkageResult {
        per_dataset: shrinkage_estimates(&draws, stats.q())?,
        map: map_fixed_point(&stats, rho)?,
    };
    let baselines = baseline_tests(&matrix, &stats.means, rho);

    if let Some(dir) = &opts.out_dir {
        write_density_exports(dir, &draws, &shrinkage, opts.seed)?;
    }

    let datasets = matrix
        .names()
        .iter()
        .zip(stats.means.iter().zip(&stats.sds))
        .map(|(name, (&mean, &sd))| DatasetRow {
            name: name.clone(),
            mean,
            sd,
        })
        .collect();
    let diagnostics = Diagnostics {
        params: draws.names().to_vec(),
        r_hat: draws.r_hat.clone(),
        ess: draws.ess.clone(),
        accept_rates: draws.accept_rates.clone(),
        converged: draws.converged,
    };
    let runtime = start.elapsed().as_secs_f64();
    eprintln!("compare finished in {runtime:.2}s");

    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: "compare".into(),
        seed: opts.seed,
        config: ConfigEcho {
            rope: cfg.rope,
            rho,
            runs: opts.runs,
            folds: opts.folds,
            alpha: cfg.alpha_level,
            chains: Some(cfg.chain.chains),
            warmup: Some(cfg.chain.warmup),
            draws_per_chain: Some(cfg.chain.keep),
            n_s: Some(cfg.n_s),
            sigma_upper_factor: Some(cfg.sigma_upper_factor),
            sigma0_upper_factor: Some(cfg.sigma0_upper_factor),
        },
        datasets,
        rope: Some(rope),
        shrinkage: Some(shrinkage),
        baselines: Some(baselines),
        diagnostics: Some(diagnostics),
        correlated_t: None,
        bayes_t: None,
        runtime_seconds: opts.timing.then_some(runtime),
    })
}

#[derive(Debug, Clone)]
pub struct TtestOpts {
    pub results: PathBuf,
    pub runs: usize,
    pub folds: usize,
    pub rope: f64,
    pub rho: Option<f64>,
    pub seed: u64,
    pub timing: bool,
}

/// Single-data-set analysis: the correlated t-test and its Bayesian
/// counterpart on one row of fold differences.
pub fn cmd_ttest(opts: &TtestOpts) -> Result<Report, CliError> {
    let start = Instant::now();
    let matrix = io::parse_results(&opts.results, opts.runs, opts.folds)?;
    if matrix.q() != 1 {
        return Err(CliError::Usage(format!(
            "ttest expects exactly one data set row, found {}; use `compare` for several",
            matrix.q()
        )));
    }
    let rho = opts.rho.unwrap_or_else(|| matrix.default_rho());
    let row = matrix.row(0);
    let t = correlated_t_test(row, rho)?;
    let bayes = bayes_correlated_t_test(row, rho, opts.rope)?;

    let mean = row.iter().sum::<f64>() / row.len() as f64;
    let sd = {
        let ss: f64 = row.iter().map(|x| (x - mean) * (x - mean)).sum();
        (ss / (row.len() - 1) as f64).sqrt()
    };
    let runtime = start.elapsed().as_secs_f64();

    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: "ttest".into(),
        seed: opts.seed,
        config: ConfigEcho {
            rope: opts.rope,
            rho,
            runs: opts.runs,
            folds: opts.folds,
            alpha: 0.05,
            chains: None,
            warmup: None,
            draws_per_chain: None,
            n_s: None,
            sigma_upper_factor: None,
            sigma0_upper_factor: None,
        },
        datasets: vec![DatasetRow {
            name: matrix.names()[0].clone(),
            mean,
            sd,
        }],
        rope: None,
        shrinkage: None,
        baselines: None,
        diagnostics: None,
        correlated_t: Some(t),
        bayes_t: Some(bayes),
        runtime_seconds: opts.timing.then_some(runtime),
    })
}

#[derive(Debug, Clone)]
pub struct SimulateOpts {
    pub scenario: Scenario,
    pub replicates: usize,
    pub q: usize,
    pub runs: usize,
    pub folds: usize,
    pub instances: usize,
    pub rope: f64,
    pub alpha: f64,
    pub delta0: f64,
    pub seed: u64,
    pub skip_mcmc: bool,
    pub sampler: SamplerOpts,
    pub truth_reps: usize,
    pub settings_per_fn: usize,
    pub out_dir: Option<PathBuf>,
}

/// Run a synthetic scenario; returns the summary plus per-replicate records,
/// and writes them (with the generated matrices) to `--out-dir` if given.
pub fn cmd_simulate(opts: &SimulateOpts) -> Result<SimOutput, CliError> {
    let mut sim = SimOpts::new(opts.scenario);
    sim.replicates = opts.replicates;
    sim.q = opts.q;
    sim.runs = opts.runs;
    sim.folds = opts.folds;
    sim.n_instances = opts.instances;
    sim.rope = opts.rope;
    sim.alpha_level = opts.alpha;
    sim.delta0 = opts.delta0;
    sim.seed = opts.seed;
    sim.skip_fits = opts.skip_mcmc;
    sim.chain = opts.sampler.chain_config(opts.seed);
    sim.n_s = opts.sampler.n_s;
    sim.friedman_truth_reps = opts.truth_reps;
    sim.friedman_settings_per_fn = opts.settings_per_fn;
    sim.keep_matrices = opts.out_dir.is_some();

    let output = run_simulation(&sim)?;

    if let Some(dir) = &opts.out_dir {
        fs::create_dir_all(dir)?;
        let mut records = String::from(
            "replicate,signed_rank_p,p_left,p_rope,p_right,decision,mse_mle,mse_shr\n",
        );
        let fmt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        for r in &output.records {
            let decision = r
                .decision
                .map_or(String::new(), |d| format!("{:?}", d).to_lowercase());
            records.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.replicate,
                fmt(r.signed_rank_p),
                fmt(r.p_left),
                fmt(r.p_rope),
                fmt(r.p_right),
                decision,
                fmt(r.mse_mle),
                fmt(r.mse_shr),
            ));
        }
        fs::write(dir.join("replicates.csv"), records)?;
        for (i, matrix) in output.matrices.iter().enumerate() {
            io::write_matrix_file(&dir.join(format!("replicate_{i:03}.csv")), matrix)?;
        }
    }
    Ok(output)
}
