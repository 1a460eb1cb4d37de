//! Bayesian comparison of two classifiers from cross-validated results on
//! multiple data sets.
//!
//! The centrepiece is a hierarchical model of per-fold accuracy differences:
//! each data set i has a true mean difference `delta_i` and standard deviation
//! `sigma_i`; the fold results are equicorrelated Gaussian around `delta_i`,
//! and the `delta_i` themselves follow a Student distribution whose location,
//! scale and degrees of freedom are estimated jointly. Posterior draws are
//! turned into the probability that the difference on the *next* data set
//! falls left of, inside, or right of a region of practical equivalence
//! (rope), plus shrinkage estimates of the per-data-set differences.
//!
//! The crate also ships the classical baselines (correlated t-test, Bayesian
//! correlated t-test, Wilcoxon signed-rank), closed-form mean-squared-error
//! results for the shrinkage estimator, and the synthetic-experiment
//! machinery used to validate all of the above.

pub mod baselines;
pub mod data;
pub mod diagnostics;
pub mod dist;
pub mod inference;
pub mod kde;
pub mod model;
pub mod sampler;
pub mod scenarios;
pub mod synth;

mod util;

pub use data::{
    sufficient_stats, CrossValMatrix, DataError, HierConfig, HierParams, SufficientStats,
};
pub use sampler::{fit_hierarchical, ChainConfig, PosteriorDraws};
