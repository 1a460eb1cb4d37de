//! Input matrices, sufficient statistics and model configuration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sampler::ChainConfig;
use crate::util;

/// Smallest standard deviation the model will work with. Zero-variance rows
/// would make the likelihood unbounded as `sigma_i -> 0`, so observed
/// standard deviations are clamped to this floor and the sampler keeps every
/// `sigma` above it.
pub const SIGMA_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DataError {
    #[error("results matrix is empty")]
    Empty,
    #[error("row {row} has {got} columns, expected {expected}")]
    RaggedRow {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("value {value} at row {row}, column {col} is not a finite number in [-1, 1]")]
    OutOfRange { row: usize, col: usize, value: f64 },
    #[error("{n} fold columns do not match runs*folds = {m}*{k}")]
    FoldShape { n: usize, m: usize, k: usize },
    #[error("duplicate data set id `{0}`")]
    DuplicateName(String),
    #[error("{got} row names for {rows} rows")]
    NameCount { got: usize, rows: usize },
    #[error("need at least {need} data sets, got {got}")]
    TooFewDataSets { got: usize, need: usize },
    #[error("invalid configuration: {0}")]
    BadConfig(String),
}

/// Per-fold accuracy differences for `q` data sets: a q-by-n matrix where
/// n = runs * folds and every entry lies in [-1, 1]. Row order is the
/// canonical data-set index used everywhere downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossValMatrix {
    diffs: Vec<Vec<f64>>,
    runs: usize,
    folds: usize,
    names: Vec<String>,
}

impl CrossValMatrix {
    pub fn new(
        diffs: Vec<Vec<f64>>,
        runs: usize,
        folds: usize,
        names: Vec<String>,
    ) -> Result<Self, DataError> {
        if diffs.is_empty() {
            return Err(DataError::Empty);
        }
        if runs == 0 || folds == 0 {
            return Err(DataError::BadConfig(
                "runs and folds must be positive".into(),
            ));
        }
        let n = diffs[0].len();
        if n != runs * folds {
            return Err(DataError::FoldShape {
                n,
                m: runs,
                k: folds,
            });
        }
        if names.len() != diffs.len() {
            return Err(DataError::NameCount {
                got: names.len(),
                rows: diffs.len(),
            });
        }
        for (i, row) in diffs.iter().enumerate() {
            if row.len() != n {
                return Err(DataError::RaggedRow {
                    row: i,
                    got: row.len(),
                    expected: n,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || !(-1.0..=1.0).contains(&v) {
                    return Err(DataError::OutOfRange {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
        }
        let mut seen = names.clone();
        seen.sort();
        for pair in seen.windows(2) {
            if pair[0] == pair[1] {
                return Err(DataError::DuplicateName(pair[0].clone()));
            }
        }
        Ok(Self {
            diffs,
            runs,
            folds,
            names,
        })
    }

    /// Rows with synthesized names `d1..dq`.
    pub fn from_rows(diffs: Vec<Vec<f64>>, runs: usize, folds: usize) -> Result<Self, DataError> {
        let names = (1..=diffs.len()).map(|i| format!("d{i}")).collect();
        Self::new(diffs, runs, folds, names)
    }

    pub fn q(&self) -> usize {
        self.diffs.len()
    }

    pub fn n(&self) -> usize {
        self.runs * self.folds
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    pub fn folds(&self) -> usize {
        self.folds
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.diffs[i]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.diffs
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Fold-correlation heuristic 1/k.
    pub fn default_rho(&self) -> f64 {
        1.0 / self.folds as f64
    }
}

/// Per-data-set sufficient statistics of the equicorrelated likelihood, plus
/// the pooled scales used by the priors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SufficientStats {
    /// Fold-result means, one per data set.
    pub means: Vec<f64>,
    /// Centered sums of squares `sum_j (x_ij - mean_i)^2`.
    pub ss: Vec<f64>,
    /// Sample standard deviations `sqrt(ss_i / (n-1))`, unclamped.
    pub sds: Vec<f64>,
    /// Folds per data set (runs * folds).
    pub n: usize,
    /// Mean of the per-data-set standard deviations, after clamping each to
    /// [`SIGMA_FLOOR`].
    pub s_bar: f64,
    /// Standard deviation of the per-data-set means.
    pub s_xbar: f64,
}

impl SufficientStats {
    pub fn q(&self) -> usize {
        self.means.len()
    }

    /// `s_xbar` clamped away from zero, for use as a prior scale.
    pub fn s_xbar_clamped(&self) -> f64 {
        self.s_xbar.max(SIGMA_FLOOR)
    }

    /// Mean of the clamped per-data-set variances; the known `sigma^2` of the
    /// simplified shrinkage model.
    pub fn mean_variance(&self) -> f64 {
        let sum: f64 = self
            .sds
            .iter()
            .map(|&s| {
                let c = s.max(SIGMA_FLOOR);
                c * c
            })
            .sum();
        sum / self.sds.len() as f64
    }
}

/// Compute per-row means and centered sums of squares, plus the pooled
/// scales. Requires at least two data sets.
pub fn sufficient_stats(data: &CrossValMatrix) -> Result<SufficientStats, DataError> {
    if data.q() < 2 {
        return Err(DataError::TooFewDataSets {
            got: data.q(),
            need: 2,
        });
    }
    let n = data.n();
    let mut means = Vec::with_capacity(data.q());
    let mut ss = Vec::with_capacity(data.q());
    let mut sds = Vec::with_capacity(data.q());
    for row in data.rows() {
        let m = util::mean(row);
        let s: f64 = row.iter().map(|x| (x - m) * (x - m)).sum();
        means.push(m);
        ss.push(s);
        sds.push((s / (n - 1) as f64).sqrt());
    }
    let s_bar = sds.iter().map(|&s| s.max(SIGMA_FLOOR)).sum::<f64>() / sds.len() as f64;
    let s_xbar = util::sample_sd(&means);
    Ok(SufficientStats {
        means,
        ss,
        sds,
        n,
        s_bar,
        s_xbar,
    })
}

/// Rope radius, fold correlation, prior hyperparameters and sampler settings
/// of the hierarchical model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierConfig {
    /// Rope radius r; the region of practical equivalence is (-r, r).
    pub rope: f64,
    /// Fold correlation; the 1/k heuristic unless overridden.
    pub rho: f64,
    /// Support of the uniform prior on delta0.
    pub delta0_bounds: (f64, f64),
    /// sigma_i ~ Uniform(0, factor * s_bar).
    pub sigma_upper_factor: f64,
    /// sigma0 ~ Uniform(0, factor * s_xbar).
    pub sigma0_upper_factor: f64,
    /// Support of the uniform prior on the Gamma shape alpha.
    pub alpha_bounds: (f64, f64),
    /// Support of the uniform prior on the Gamma rate beta.
    pub beta_bounds: (f64, f64),
    /// Posterior draws consumed by the next-data-set simplex counting.
    pub n_s: usize,
    /// Decision threshold: declare an outcome when its probability exceeds
    /// 1 - alpha_level.
    pub alpha_level: f64,
    pub chain: ChainConfig,
}

impl Default for HierConfig {
    fn default() -> Self {
        Self {
            rope: 0.01,
            rho: 0.1,
            delta0_bounds: (-1.0, 1.0),
            sigma_upper_factor: 1000.0,
            sigma0_upper_factor: 1000.0,
            alpha_bounds: (0.5, 5.0),
            beta_bounds: (0.05, 0.15),
            n_s: 4000,
            alpha_level: 0.05,
            chain: ChainConfig::default(),
        }
    }
}

impl HierConfig {
    /// Default configuration with the correlation heuristic rho = 1/k.
    pub fn for_folds(folds: usize) -> Self {
        Self {
            rho: 1.0 / folds as f64,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), DataError> {
        if self.rope.is_nan() || self.rope <= 0.0 {
            return Err(DataError::BadConfig(format!(
                "rope radius must be positive, got {}",
                self.rope
            )));
        }
        if !(0.0..1.0).contains(&self.rho) {
            return Err(DataError::BadConfig(format!(
                "rho must lie in [0, 1), got {}",
                self.rho
            )));
        }
        for (name, (lo, hi)) in [
            ("delta0", self.delta0_bounds),
            ("alpha", self.alpha_bounds),
            ("beta", self.beta_bounds),
        ] {
            let ordered = lo.is_finite() && hi.is_finite() && lo < hi;
            if !ordered {
                return Err(DataError::BadConfig(format!(
                    "{name} bounds must satisfy lower < upper, got ({lo}, {hi})"
                )));
            }
        }
        let factors_ok = self.sigma_upper_factor > 0.0 && self.sigma0_upper_factor > 0.0;
        if !factors_ok {
            return Err(DataError::BadConfig(
                "prior upper-bound factors must be positive".into(),
            ));
        }
        if self.n_s == 0 {
            return Err(DataError::BadConfig("n_s must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.alpha_level) {
            return Err(DataError::BadConfig(format!(
                "alpha level must lie in (0, 1), got {}",
                self.alpha_level
            )));
        }
        self.chain
            .validate()
            .map_err(|e| DataError::BadConfig(e.to_string()))
    }

    /// Upper bound of the uniform prior on the per-data-set sigma_i.
    pub fn sigma_upper(&self, stats: &SufficientStats) -> f64 {
        self.sigma_upper_factor * stats.s_bar
    }

    /// Upper bound of the uniform prior on sigma0.
    pub fn sigma0_upper(&self, stats: &SufficientStats) -> f64 {
        self.sigma0_upper_factor * stats.s_xbar_clamped()
    }
}

/// One point in the hierarchical model's parameter space.
#[derive(Debug, Clone, PartialEq)]
pub struct HierParams {
    pub delta0: f64,
    pub sigma0: f64,
    pub nu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub deltas: Vec<f64>,
    pub sigmas: Vec<f64>,
}

impl HierParams {
    pub fn q(&self) -> usize {
        self.deltas.len()
    }

    pub fn dim(q: usize) -> usize {
        5 + 2 * q
    }

    /// Flatten in the canonical order (delta0, sigma0, nu, alpha, beta,
    /// delta_1..delta_q, sigma_1..sigma_q).
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(Self::dim(self.q()));
        v.extend([self.delta0, self.sigma0, self.nu, self.alpha, self.beta]);
        v.extend(&self.deltas);
        v.extend(&self.sigmas);
        v
    }

    pub fn from_slice(theta: &[f64], q: usize) -> Self {
        assert_eq!(theta.len(), Self::dim(q), "parameter vector length");
        Self {
            delta0: theta[0],
            sigma0: theta[1],
            nu: theta[2],
            alpha: theta[3],
            beta: theta[4],
            deltas: theta[5..5 + q].to_vec(),
            sigmas: theta[5 + q..].to_vec(),
        }
    }
}
