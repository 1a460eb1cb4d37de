//! Log-density of the hierarchical model.
//!
//! The per-data-set likelihood is an equicorrelated multivariate normal
//! (all variances sigma_i^2, all pairwise correlations rho) evaluated in
//! O(1) from the sufficient statistics (mean, centered sum of squares):
//!
//! ```text
//! log|Sigma| = n log sigma^2 + (n-1) log(1-rho) + log(1+(n-1)rho)
//! Q = [SS + n e^2 - rho n^2 e^2 / (1+(n-1)rho)] / (sigma^2 (1-rho))
//! ```
//!
//! with `e = mean - delta`. The priors are Student on the delta_i, uniforms
//! on delta0, the sigmas, alpha and beta, and a rate-parameterized Gamma on
//! the Student degrees of freedom nu. Uniform log-densities are kept as
//! explicit constants so values stay comparable across configurations.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::data::{HierConfig, HierParams, SufficientStats, SIGMA_FLOOR};

const LN_2PI: f64 = 1.8378770664093453;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ModelError {
    #[error("sigma must be positive, got {0}")]
    InvalidSigma(f64),
    #[error("rho must lie in [0, 1), got {0}")]
    InvalidRho(f64),
    #[error("need at least two folds, got {0}")]
    InvalidFoldCount(usize),
    #[error("centered sum of squares must be finite and non-negative, got {0}")]
    InvalidSumSquares(f64),
    #[error("parameter vector has {got} entries, expected {expected}")]
    DimMismatch { expected: usize, got: usize },
}

#[inline]
fn lik_rho_constant(n: usize, rho: f64) -> f64 {
    (n as f64 - 1.0) * (1.0 - rho).ln() + (1.0 + (n as f64 - 1.0) * rho).ln()
}

/// Core of the equicorrelated log-likelihood; assumes validated arguments.
#[inline]
fn log_lik_raw(
    mean: f64,
    ss: f64,
    n: usize,
    delta: f64,
    sigma: f64,
    rho: f64,
    rho_const: f64,
) -> f64 {
    let nf = n as f64;
    let e = mean - delta;
    let denom = 1.0 + (nf - 1.0) * rho;
    let sigma2 = sigma * sigma;
    let quad = (ss + nf * e * e - rho * nf * nf * e * e / denom) / (sigma2 * (1.0 - rho));
    -0.5 * (nf * LN_2PI + nf * sigma2.ln() + rho_const + quad)
}

/// Exact log-density of the equicorrelated multivariate normal with mean
/// `1 * delta`, variance `sigma^2` and correlation `rho`, computed from the
/// per-data-set sufficient statistics.
pub fn log_lik_equicorr(
    mean: f64,
    ss: f64,
    n: usize,
    delta: f64,
    sigma: f64,
    rho: f64,
) -> Result<f64, ModelError> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(ModelError::InvalidSigma(sigma));
    }
    if !(0.0..1.0).contains(&rho) {
        return Err(ModelError::InvalidRho(rho));
    }
    if n < 2 {
        return Err(ModelError::InvalidFoldCount(n));
    }
    if !(ss.is_finite() && ss >= 0.0) {
        return Err(ModelError::InvalidSumSquares(ss));
    }
    Ok(log_lik_raw(
        mean,
        ss,
        n,
        delta,
        sigma,
        rho,
        lik_rho_constant(n, rho),
    ))
}

struct FlatView<'a> {
    delta0: f64,
    sigma0: f64,
    nu: f64,
    alpha: f64,
    beta: f64,
    deltas: &'a [f64],
    sigmas: &'a [f64],
}

impl<'a> FlatView<'a> {
    fn new(theta: &'a [f64], q: usize) -> Self {
        debug_assert_eq!(theta.len(), 5 + 2 * q);
        Self {
            delta0: theta[0],
            sigma0: theta[1],
            nu: theta[2],
            alpha: theta[3],
            beta: theta[4],
            deltas: &theta[5..5 + q],
            sigmas: &theta[5 + q..],
        }
    }
}

/// Joint log-prior over all parameters; `-inf` outside the support.
fn prior_flat(v: &FlatView, cfg: &HierConfig, stats: &SufficientStats) -> f64 {
    let (d0_lo, d0_hi) = cfg.delta0_bounds;
    let (a_lo, a_hi) = cfg.alpha_bounds;
    let (b_lo, b_hi) = cfg.beta_bounds;
    let sigma_hi = cfg.sigma_upper(stats);
    let sigma0_hi = cfg.sigma0_upper(stats);

    let in_support = v.delta0 > d0_lo
        && v.delta0 < d0_hi
        && v.sigma0 > 0.0
        && v.sigma0 < sigma0_hi
        && v.nu > 0.0
        && v.nu.is_finite()
        && v.alpha > a_lo
        && v.alpha < a_hi
        && v.beta > b_lo
        && v.beta < b_hi
        && v.sigmas.iter().all(|&s| s >= SIGMA_FLOOR && s < sigma_hi)
        && v.deltas.iter().all(|&d| d.is_finite());
    if !in_support {
        return f64::NEG_INFINITY;
    }

    // Uniform constants.
    let mut lp = -(d0_hi - d0_lo).ln()
        - (a_hi - a_lo).ln()
        - (b_hi - b_lo).ln()
        - sigma0_hi.ln()
        - v.sigmas.len() as f64 * sigma_hi.ln();

    // delta_i ~ Student(delta0, sigma0, nu); the nu-dependent normalizer is
    // shared by all q terms.
    let half_nup1 = 0.5 * (v.nu + 1.0);
    let t_const =
        ln_gamma(half_nup1) - ln_gamma(0.5 * v.nu) - 0.5 * (v.nu * PI).ln() - v.sigma0.ln();
    for &d in v.deltas {
        let z = (d - v.delta0) / v.sigma0;
        lp += t_const - half_nup1 * (z * z / v.nu).ln_1p();
    }

    // nu ~ Gamma(alpha, beta), rate parameterization.
    lp += v.alpha * v.beta.ln() - ln_gamma(v.alpha) + (v.alpha - 1.0) * v.nu.ln() - v.beta * v.nu;
    lp
}

fn lik_flat(v: &FlatView, stats: &SufficientStats, rho: f64) -> f64 {
    let rho_const = lik_rho_constant(stats.n, rho);
    let mut ll = 0.0;
    for i in 0..stats.means.len() {
        ll += log_lik_raw(
            stats.means[i],
            stats.ss[i],
            stats.n,
            v.deltas[i],
            v.sigmas[i],
            rho,
            rho_const,
        );
    }
    ll
}

/// Log-prior of a parameter point; `-inf` encodes support violations.
pub fn log_prior(p: &HierParams, cfg: &HierConfig, stats: &SufficientStats) -> f64 {
    let theta = p.to_vec();
    prior_flat(&FlatView::new(&theta, p.q()), cfg, stats)
}

/// Log-posterior on a flat parameter vector in the canonical order
/// (delta0, sigma0, nu, alpha, beta, delta_1..q, sigma_1..q). This is the
/// sampler's hot path: no allocation, `-inf` outside the prior support.
pub fn log_posterior_flat(theta: &[f64], stats: &SufficientStats, cfg: &HierConfig) -> f64 {
    let v = FlatView::new(theta, stats.q());
    let lp = prior_flat(&v, cfg, stats);
    if lp == f64::NEG_INFINITY {
        return lp;
    }
    lp + lik_flat(&v, stats, cfg.rho)
}

/// Log-posterior of a typed parameter point.
pub fn log_posterior(
    p: &HierParams,
    stats: &SufficientStats,
    cfg: &HierConfig,
) -> Result<f64, ModelError> {
    if p.q() != stats.q() || p.sigmas.len() != p.deltas.len() {
        return Err(ModelError::DimMismatch {
            expected: HierParams::dim(stats.q()),
            got: HierParams::dim(p.q()),
        });
    }
    if !(0.0..1.0).contains(&cfg.rho) {
        return Err(ModelError::InvalidRho(cfg.rho));
    }
    let theta = p.to_vec();
    Ok(log_posterior_flat(&theta, stats, cfg))
}
