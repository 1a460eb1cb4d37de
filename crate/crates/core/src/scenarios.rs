//! Simulation harness: generate synthetic cross-validation studies, analyze
//! them with the signed-rank test and the hierarchical model, and aggregate
//! the outcomes.

use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::{signed_rank_test, TestError};
use crate::data::{sufficient_stats, CrossValMatrix, DataError, HierConfig, SufficientStats};
use crate::inference::{
    mse_empirical, next_delta_simplex, shrinkage_estimates, Decision, InferenceError, RopeReport,
};
use crate::sampler::{fit_hierarchical, ChainConfig, SamplerError};
use crate::synth::{
    cross_validate_pair, nb_pair_cv, sample_deltas_within, true_delta, CartTree, DeltaPopulation,
    FriedmanSetting, Lda, SynthError,
};
use crate::util;

/// Range of planted differences the classifier-pair generator accepts:
/// theta_g = 0.9 + delta must stay in (0.5, 1) with a safety margin so the
/// expected fold difference remains delta itself.
const NB_DELTA_RANGE: (f64, f64) = (-0.395, 0.095);

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error(transparent)]
    Test(#[from] TestError),
    #[error("invalid options: {0}")]
    BadOptions(String),
}

/// The shipped experiment designs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    /// Bimodal-mixture differences; compares shrinkage and MLE errors.
    MseBimodal,
    /// Cauchy differences centered at zero (the signed-rank null).
    NullCauchy,
    /// Cauchy differences centered at 0.005, inside the rope.
    EquivalentCauchy,
    /// Cauchy differences centered outside the rope; measures power.
    DifferentCauchy,
    /// Benchmark-function data sets with lda versus cart.
    Friedman,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Self::MseBimodal => "mse-bimodal",
            Self::NullCauchy => "null-cauchy",
            Self::EquivalentCauchy => "equivalent-cauchy",
            Self::DifferentCauchy => "different-cauchy",
            Self::Friedman => "friedman",
        }
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mse-bimodal" => Ok(Self::MseBimodal),
            "null-cauchy" => Ok(Self::NullCauchy),
            "equivalent-cauchy" => Ok(Self::EquivalentCauchy),
            "different-cauchy" => Ok(Self::DifferentCauchy),
            "friedman" => Ok(Self::Friedman),
            other => Err(format!(
                "unknown scenario `{other}` (expected mse-bimodal, null-cauchy, \
                 equivalent-cauchy, different-cauchy or friedman)"
            )),
        }
    }
}

/// Simulation options; defaults are scaled down from full-study sizes to
/// desk-scale runtimes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimOpts {
    pub scenario: Scenario,
    pub replicates: usize,
    /// Data sets per replicate (ignored by the friedman scenario, which uses
    /// its setting selection instead).
    pub q: usize,
    pub runs: usize,
    pub folds: usize,
    /// Instances per generated data set in the classifier-pair scenarios.
    pub n_instances: usize,
    pub rope: f64,
    pub alpha_level: f64,
    /// Population center for the different-cauchy scenario.
    pub delta0: f64,
    pub seed: u64,
    /// Run only the generators and the signed-rank test, no MCMC.
    pub skip_fits: bool,
    pub chain: ChainConfig,
    pub n_s: usize,
    /// Repetitions per setting when measuring ground-truth differences.
    pub friedman_truth_reps: usize,
    /// Settings drawn per function (out of 18) in each friedman replicate.
    pub friedman_settings_per_fn: usize,
    /// Retain the generated matrices (for export).
    pub keep_matrices: bool,
}

impl SimOpts {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            replicates: 50,
            q: 10,
            runs: 10,
            folds: 10,
            n_instances: 100,
            rope: 0.01,
            alpha_level: 0.05,
            delta0: 0.02,
            seed: 0,
            skip_fits: false,
            chain: ChainConfig::default(),
            n_s: 4000,
            friedman_truth_reps: 50,
            friedman_settings_per_fn: 12,
            keep_matrices: false,
        }
    }
}

/// Per-replicate outcomes; fields stay `None` when the corresponding
/// analysis did not run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub signed_rank_p: Option<f64>,
    pub p_left: Option<f64>,
    pub p_rope: Option<f64>,
    pub p_right: Option<f64>,
    pub decision: Option<Decision>,
    pub mse_mle: Option<f64>,
    pub mse_shr: Option<f64>,
}

/// Aggregates over all replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub scenario: String,
    pub replicates: usize,
    pub q: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signed_rank_rejection_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_p_left: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_p_rope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_p_right: Option<f64>,
    /// Fraction of replicates with P(rope) above 1 - alpha.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equivalence_recognition_rate: Option<f64>,
    /// Fraction of replicates with P(right) above 1 - alpha.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hier_power: Option<f64>,
    /// Fraction of replicates declaring left or right above 1 - alpha.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hier_directional_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mse_mle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mse_shr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mse_ratio: Option<f64>,
    /// Fraction of replicates with odds(right, rope) and odds(right, left)
    /// both above 20.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strong_right_evidence_rate: Option<f64>,
    /// Both odds above 3.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positive_right_evidence_rate: Option<f64>,
    /// Odds favoring rope over both directions above 3.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rope_evidence_rate: Option<f64>,
}

impl SimSummary {
    fn empty(opts: &SimOpts, q: usize) -> Self {
        Self {
            scenario: opts.scenario.name().to_string(),
            replicates: opts.replicates,
            q,
            seed: opts.seed,
            signed_rank_rejection_rate: None,
            mean_p_left: None,
            mean_p_rope: None,
            mean_p_right: None,
            equivalence_recognition_rate: None,
            hier_power: None,
            hier_directional_rate: None,
            mse_mle: None,
            mse_shr: None,
            mse_ratio: None,
            strong_right_evidence_rate: None,
            positive_right_evidence_rate: None,
            rope_evidence_rate: None,
        }
    }
}

/// Everything a simulation run produces.
#[derive(Debug, Clone)]
pub struct SimOutput {
    pub summary: SimSummary,
    pub records: Vec<ReplicateRecord>,
    /// Generated matrices, one per replicate; empty unless requested.
    pub matrices: Vec<CrossValMatrix>,
}

fn replicate_seed(seed: u64, replicate: usize) -> u64 {
    seed ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(replicate as u64 + 1)
}

fn hier_config(opts: &SimOpts, seed: u64) -> HierConfig {
    let mut cfg = HierConfig::for_folds(opts.folds);
    cfg.rope = opts.rope;
    cfg.alpha_level = opts.alpha_level;
    cfg.n_s = opts.n_s;
    cfg.chain = ChainConfig {
        seed,
        ..opts.chain.clone()
    };
    cfg
}

struct FitOutcome {
    report: RopeReport,
    shrinkage_means: Vec<f64>,
}

fn fit_and_summarize(
    stats: &SufficientStats,
    cfg: &HierConfig,
    simplex_seed: u64,
) -> Result<FitOutcome, ScenarioError> {
    let draws = fit_hierarchical(stats, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(simplex_seed);
    let report = next_delta_simplex(&draws, cfg.rope, cfg.n_s, cfg.alpha_level, &mut rng)?;
    let shrinkage_means = shrinkage_estimates(&draws, stats.q())?
        .into_iter()
        .map(|s| s.mean)
        .collect();
    Ok(FitOutcome {
        report,
        shrinkage_means,
    })
}

/// Generate one replicate of the classifier-pair design: draw q true
/// differences from the population, build a data set for each, run paired
/// cross-validation and return the per-fold difference matrix.
fn nb_replicate(
    pop: &DeltaPopulation,
    opts: &SimOpts,
    rep_seed: u64,
) -> Result<(Vec<f64>, CrossValMatrix), ScenarioError> {
    let mut rng = ChaCha8Rng::seed_from_u64(rep_seed);
    let deltas = sample_deltas_within(pop, opts.q, NB_DELTA_RANGE.0, NB_DELTA_RANGE.1, &mut rng)?;
    let mut rows = Vec::with_capacity(opts.q);
    for &d in &deltas {
        rows.push(nb_pair_cv(
            d,
            opts.n_instances,
            opts.runs,
            opts.folds,
            &mut rng,
        )?);
    }
    Ok((
        deltas,
        CrossValMatrix::from_rows(rows, opts.runs, opts.folds)?,
    ))
}

fn run_nb_scenario(pop: &DeltaPopulation, opts: &SimOpts) -> Result<SimOutput, ScenarioError> {
    if opts.skip_fits && opts.scenario == Scenario::MseBimodal {
        return Err(ScenarioError::BadOptions(
            "the mse-bimodal scenario needs the hierarchical fits".into(),
        ));
    }
    let results: Vec<(ReplicateRecord, CrossValMatrix)> = (0..opts.replicates)
        .into_par_iter()
        .map(|rep| -> Result<_, ScenarioError> {
            let rep_seed = replicate_seed(opts.seed, rep);
            let (deltas, matrix) = nb_replicate(pop, opts, rep_seed)?;
            let stats = sufficient_stats(&matrix)?;
            let mut record = ReplicateRecord {
                replicate: rep,
                ..Default::default()
            };
            record.signed_rank_p = Some(signed_rank_test(&stats.means)?.p_value);
            if !opts.skip_fits {
                let cfg = hier_config(opts, rep_seed.wrapping_add(1));
                let fit = fit_and_summarize(&stats, &cfg, rep_seed.wrapping_add(2))?;
                record.p_left = Some(fit.report.p_left);
                record.p_rope = Some(fit.report.p_rope);
                record.p_right = Some(fit.report.p_right);
                record.decision = Some(fit.report.decision);
                record.mse_mle = Some(mse_empirical(&stats.means, &deltas)?);
                record.mse_shr = Some(mse_empirical(&fit.shrinkage_means, &deltas)?);
            }
            Ok((record, matrix))
        })
        .collect::<Result<_, _>>()?;

    let mut records = Vec::with_capacity(results.len());
    let mut matrices = Vec::new();
    for (record, matrix) in results {
        records.push(record);
        if opts.keep_matrices {
            matrices.push(matrix);
        }
    }
    let summary = summarize(opts, opts.q, &records);
    Ok(SimOutput {
        summary,
        records,
        matrices,
    })
}

fn rate(values: impl Iterator<Item = bool>, total: usize) -> Option<f64> {
    if total == 0 {
        return None;
    }
    Some(values.filter(|&b| b).count() as f64 / total as f64)
}

fn mean_of(values: Vec<f64>) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(util::mean(&values))
    }
}

fn summarize(opts: &SimOpts, q: usize, records: &[ReplicateRecord]) -> SimSummary {
    let mut summary = SimSummary::empty(opts, q);
    let total = records.len();
    let threshold = 1.0 - opts.alpha_level;

    let p_values: Vec<f64> = records.iter().filter_map(|r| r.signed_rank_p).collect();
    if !p_values.is_empty() {
        summary.signed_rank_rejection_rate =
            rate(p_values.iter().map(|&p| p < opts.alpha_level), total);
    }

    let fitted: Vec<&ReplicateRecord> = records.iter().filter(|r| r.p_rope.is_some()).collect();
    if !fitted.is_empty() {
        let n = fitted.len();
        summary.mean_p_left = mean_of(fitted.iter().filter_map(|r| r.p_left).collect());
        summary.mean_p_rope = mean_of(fitted.iter().filter_map(|r| r.p_rope).collect());
        summary.mean_p_right = mean_of(fitted.iter().filter_map(|r| r.p_right).collect());
        summary.equivalence_recognition_rate = rate(
            fitted.iter().map(|r| r.p_rope.unwrap_or(0.0) > threshold),
            n,
        );
        summary.hier_power = rate(
            fitted.iter().map(|r| r.p_right.unwrap_or(0.0) > threshold),
            n,
        );
        summary.hier_directional_rate = rate(
            fitted.iter().map(|r| {
                r.p_right.unwrap_or(0.0) > threshold || r.p_left.unwrap_or(0.0) > threshold
            }),
            n,
        );
        let mse_mle = mean_of(fitted.iter().filter_map(|r| r.mse_mle).collect());
        let mse_shr = mean_of(fitted.iter().filter_map(|r| r.mse_shr).collect());
        summary.mse_mle = mse_mle;
        summary.mse_shr = mse_shr;
        summary.mse_ratio = match (mse_mle, mse_shr) {
            (Some(a), Some(b)) if a > 0.0 => Some(b / a),
            _ => None,
        };
    }
    summary
}

fn run_friedman_scenario(opts: &SimOpts) -> Result<SimOutput, ScenarioError> {
    if opts.skip_fits {
        return Err(ScenarioError::BadOptions(
            "the friedman scenario needs the hierarchical fits".into(),
        ));
    }
    if !(1..=18).contains(&opts.friedman_settings_per_fn) {
        return Err(ScenarioError::BadOptions(
            "friedman settings per function must lie in 1..=18".into(),
        ));
    }
    let lda = Lda;
    let cart = CartTree::default();

    // Grid and ground truth are shared by all replicates.
    let mut grid_rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xF0F0_A5A5_1234_5678);
    let grid = FriedmanSetting::grid(&mut grid_rng);
    let truths: Vec<f64> = grid
        .par_iter()
        .enumerate()
        .map(|(i, setting)| -> Result<f64, ScenarioError> {
            let mut rng = ChaCha8Rng::seed_from_u64(replicate_seed(opts.seed ^ 0xAAAA, i));
            let (delta, _) = true_delta(
                setting,
                &lda,
                &cart,
                opts.friedman_truth_reps,
                5000,
                &mut rng,
            )?;
            Ok(delta)
        })
        .collect::<Result<_, _>>()?;

    let per_fn = 18usize;
    let q = 3 * opts.friedman_settings_per_fn;
    let results: Vec<(ReplicateRecord, CrossValMatrix)> = (0..opts.replicates)
        .into_par_iter()
        .map(|rep| -> Result<_, ScenarioError> {
            let rep_seed = replicate_seed(opts.seed, rep);
            let mut rng = ChaCha8Rng::seed_from_u64(rep_seed);

            // pick settings_per_fn cells out of each function's 18
            let mut selected = Vec::with_capacity(q);
            for f in 0..3 {
                let mut idx: Vec<usize> = (f * per_fn..(f + 1) * per_fn).collect();
                use rand::seq::SliceRandom;
                idx.shuffle(&mut rng);
                let mut chosen = idx[..opts.friedman_settings_per_fn].to_vec();
                chosen.sort_unstable();
                selected.extend(chosen);
            }

            let mut rows = Vec::with_capacity(q);
            let mut rep_truths = Vec::with_capacity(q);
            for &s in &selected {
                let data = grid[s].generate_n(grid[s].n, &mut rng);
                rows.push(cross_validate_pair(
                    &data, &lda, &cart, opts.runs, opts.folds, &mut rng,
                )?);
                rep_truths.push(truths[s]);
            }
            let matrix = CrossValMatrix::from_rows(rows, opts.runs, opts.folds)?;
            let stats = sufficient_stats(&matrix)?;

            let mut record = ReplicateRecord {
                replicate: rep,
                ..Default::default()
            };
            record.signed_rank_p = Some(signed_rank_test(&stats.means)?.p_value);
            let cfg = hier_config(opts, rep_seed.wrapping_add(1));
            let fit = fit_and_summarize(&stats, &cfg, rep_seed.wrapping_add(2))?;
            record.p_left = Some(fit.report.p_left);
            record.p_rope = Some(fit.report.p_rope);
            record.p_right = Some(fit.report.p_right);
            record.decision = Some(fit.report.decision);
            record.mse_mle = Some(mse_empirical(&stats.means, &rep_truths)?);
            record.mse_shr = Some(mse_empirical(&fit.shrinkage_means, &rep_truths)?);
            Ok((record, matrix))
        })
        .collect::<Result<_, _>>()?;

    let mut records = Vec::with_capacity(results.len());
    let mut matrices = Vec::new();
    for (record, matrix) in results {
        records.push(record);
        if opts.keep_matrices {
            matrices.push(matrix);
        }
    }

    let mut summary = summarize(opts, q, &records);
    let total = records.len();
    let both_over = |r: &ReplicateRecord, cut: f64| {
        let (pl, pr, pro) = (
            r.p_left.unwrap_or(0.0),
            r.p_right.unwrap_or(0.0),
            r.p_rope.unwrap_or(0.0),
        );
        pr > cut * pro && pr > cut * pl
    };
    summary.strong_right_evidence_rate = rate(records.iter().map(|r| both_over(r, 20.0)), total);
    summary.positive_right_evidence_rate = rate(records.iter().map(|r| both_over(r, 3.0)), total);
    summary.rope_evidence_rate = rate(
        records.iter().map(|r| {
            let (pl, pr, pro) = (
                r.p_left.unwrap_or(0.0),
                r.p_right.unwrap_or(0.0),
                r.p_rope.unwrap_or(0.0),
            );
            pro > 3.0 * pl && pro > 3.0 * pr
        }),
        total,
    );
    Ok(SimOutput {
        summary,
        records,
        matrices,
    })
}

/// Run a simulation scenario end to end.
pub fn run_simulation(opts: &SimOpts) -> Result<SimOutput, ScenarioError> {
    if opts.replicates == 0 {
        return Err(ScenarioError::BadOptions(
            "need at least one replicate".into(),
        ));
    }
    if opts.q < 2 {
        return Err(ScenarioError::BadOptions(
            "need at least two data sets per replicate".into(),
        ));
    }
    match opts.scenario {
        Scenario::MseBimodal => {
            let pop = DeltaPopulation::BimodalGaussian {
                mu1: 0.005,
                mu2: 0.02,
                sigma: 0.001,
                pi1: 0.5,
            };
            run_nb_scenario(&pop, opts)
        }
        Scenario::NullCauchy => run_nb_scenario(&DeltaPopulation::null_cauchy(opts.rope), opts),
        Scenario::EquivalentCauchy => {
            let pop = DeltaPopulation::Cauchy {
                location: 0.005,
                scale: 2.0 * opts.rope / 6.0,
            };
            run_nb_scenario(&pop, opts)
        }
        Scenario::DifferentCauchy => {
            let pop = DeltaPopulation::Cauchy {
                location: opts.delta0,
                scale: 0.01,
            };
            run_nb_scenario(&pop, opts)
        }
        Scenario::Friedman => run_friedman_scenario(opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn light_chain(seed: u64) -> ChainConfig {
        ChainConfig {
            chains: 2,
            warmup: 300,
            keep: 300,
            seed,
            ..ChainConfig::default()
        }
    }

    #[test]
    fn scenario_names_round_trip() {
        for s in [
            Scenario::MseBimodal,
            Scenario::NullCauchy,
            Scenario::EquivalentCauchy,
            Scenario::DifferentCauchy,
            Scenario::Friedman,
        ] {
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
        }
        assert!("bogus".parse::<Scenario>().is_err());
    }

    #[test]
    fn null_cauchy_without_fits_is_calibrated_roughly() {
        let mut opts = SimOpts::new(Scenario::NullCauchy);
        opts.replicates = 40;
        opts.q = 20;
        opts.skip_fits = true;
        opts.keep_matrices = true;
        opts.seed = 11;
        let out = run_simulation(&opts).unwrap();
        assert_eq!(out.records.len(), 40);
        assert_eq!(out.matrices.len(), 40);
        assert_eq!(out.matrices[0].q(), 20);
        let rate = out.summary.signed_rank_rejection_rate.unwrap();
        assert!((0.0..=0.2).contains(&rate), "rejection rate {rate}");
        assert!(out.summary.mean_p_rope.is_none());
    }

    #[test]
    fn mse_bimodal_shows_shrinkage_gain() {
        let mut opts = SimOpts::new(Scenario::MseBimodal);
        opts.replicates = 5;
        opts.q = 10;
        opts.chain = light_chain(0);
        opts.n_s = 500;
        opts.seed = 7;
        let out = run_simulation(&opts).unwrap();
        let ratio = out.summary.mse_ratio.unwrap();
        assert!(ratio < 0.9, "mse ratio {ratio}");
        assert!(out.summary.mse_shr.unwrap() < out.summary.mse_mle.unwrap());
    }

    #[test]
    fn different_cauchy_finds_the_direction() {
        let mut opts = SimOpts::new(Scenario::DifferentCauchy);
        opts.replicates = 4;
        opts.q = 20;
        opts.delta0 = 0.03;
        opts.chain = light_chain(1);
        opts.n_s = 500;
        opts.seed = 3;
        let out = run_simulation(&opts).unwrap();
        let p_right = out.summary.mean_p_right.unwrap();
        assert!(p_right > 0.6, "mean P(right) {p_right}");
        assert!(out.summary.signed_rank_rejection_rate.unwrap() > 0.5);
    }

    #[test]
    fn identical_options_reproduce_identical_outputs() {
        let mut opts = SimOpts::new(Scenario::NullCauchy);
        opts.replicates = 6;
        opts.q = 5;
        opts.chain = light_chain(2);
        opts.n_s = 200;
        opts.seed = 42;
        let a = run_simulation(&opts).unwrap();
        let b = run_simulation(&opts).unwrap();
        assert_eq!(
            serde_json::to_string(&a.summary).unwrap(),
            serde_json::to_string(&b.summary).unwrap()
        );
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn friedman_smoke() {
        let mut opts = SimOpts::new(Scenario::Friedman);
        opts.replicates = 2;
        opts.friedman_truth_reps = 4;
        opts.friedman_settings_per_fn = 2;
        opts.runs = 2;
        opts.folds = 5;
        opts.chain = light_chain(4);
        opts.n_s = 200;
        opts.seed = 9;
        let out = run_simulation(&opts).unwrap();
        assert_eq!(out.summary.q, 6);
        assert_eq!(out.records.len(), 2);
        assert!(out.summary.mse_mle.is_some());
        assert!(out.summary.strong_right_evidence_rate.is_some());
        for r in &out.records {
            let total = r.p_left.unwrap() + r.p_rope.unwrap() + r.p_right.unwrap();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn bad_options_are_rejected() {
        let mut opts = SimOpts::new(Scenario::MseBimodal);
        opts.skip_fits = true;
        assert!(matches!(
            run_simulation(&opts),
            Err(ScenarioError::BadOptions(_))
        ));
        let mut opts = SimOpts::new(Scenario::NullCauchy);
        opts.replicates = 0;
        assert!(matches!(
            run_simulation(&opts),
            Err(ScenarioError::BadOptions(_))
        ));
    }
}
