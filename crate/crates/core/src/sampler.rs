//! Component-wise adaptive random-walk Metropolis over an arbitrary
//! log-density, plus the wiring that fits the hierarchical model.
//!
//! Positive parameters are sampled on the log scale with the Jacobian folded
//! into the target; per-coordinate step sizes adapt toward a target
//! acceptance rate during warmup only, so the post-warmup kernel is a fixed
//! Metropolis kernel. Chains run independently (in parallel) with RNG
//! streams derived as seed + chain index, and results merge by chain index,
//! so a given (data, config, seed) triple always produces bit-identical
//! draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{DataError, HierConfig, HierParams, SufficientStats, SIGMA_FLOOR};
use crate::diagnostics;
use crate::model::log_posterior_flat;

/// Step-size adaptation happens once per this many sweeps during warmup.
const ADAPT_BATCH: usize = 50;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplerError {
    #[error("invalid sampler configuration: {0}")]
    Config(String),
    #[error("log-posterior is not finite at the initial point of chain {chain}")]
    NonFiniteInit { chain: usize },
    #[error(transparent)]
    Data(#[from] DataError),
}

/// MCMC run settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub chains: usize,
    /// Adaptation sweeps, discarded entirely.
    pub warmup: usize,
    /// Retained draws per chain.
    pub keep: usize,
    /// Keep every `thin`-th post-warmup sweep.
    pub thin: usize,
    /// Per-coordinate acceptance rate the warmup adaptation aims for.
    pub target_accept: f64,
    pub seed: u64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            chains: 4,
            warmup: 2000,
            keep: 1000,
            thin: 1,
            target_accept: 0.44,
            seed: 0,
        }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<(), SamplerError> {
        if self.chains < 2 {
            return Err(SamplerError::Config(format!(
                "need at least 2 chains, got {}",
                self.chains
            )));
        }
        if self.warmup < 100 {
            return Err(SamplerError::Config(format!(
                "warmup must be at least 100, got {}",
                self.warmup
            )));
        }
        if self.keep < 100 {
            return Err(SamplerError::Config(format!(
                "kept draws must be at least 100, got {}",
                self.keep
            )));
        }
        if self.thin == 0 {
            return Err(SamplerError::Config("thinning must be at least 1".into()));
        }
        let accept_ok = self.target_accept > 0.0 && self.target_accept < 1.0;
        if !accept_ok {
            return Err(SamplerError::Config(format!(
                "target acceptance must lie in (0, 1), got {}",
                self.target_accept
            )));
        }
        Ok(())
    }
}

/// Proposal space of one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Identity,
    /// Sample ln(x); the Jacobian correction is applied internally.
    Log,
}

/// One sampled coordinate: display name, proposal space and initial step
/// size (in the transformed space).
#[derive(Debug, Clone)]
pub struct Coord {
    pub name: String,
    pub transform: Transform,
    pub init_step: f64,
}

impl Coord {
    pub fn new(name: impl Into<String>, transform: Transform, init_step: f64) -> Self {
        Self {
            name: name.into(),
            transform,
            init_step,
        }
    }
}

/// Retained posterior draws from all chains plus per-parameter diagnostics.
#[derive(Debug, Clone)]
pub struct PosteriorDraws {
    names: Vec<String>,
    n_chains: usize,
    kept_per_chain: usize,
    n_params: usize,
    /// Row-major (chain-major) draw matrix: row d is one parameter vector.
    data: Vec<f64>,
    pub r_hat: Vec<f64>,
    pub ess: Vec<f64>,
    /// Post-warmup acceptance rate per coordinate, averaged over chains.
    pub accept_rates: Vec<f64>,
    /// True when every split R-hat is at most 1.1.
    pub converged: bool,
}

impl PosteriorDraws {
    /// Assemble draws given per-chain draw lists (`chains[c][draw][param]`)
    /// and compute diagnostics. Acceptance rates are left as NaN; the
    /// sampler fills them in.
    pub fn from_chains(names: Vec<String>, chains: Vec<Vec<Vec<f64>>>) -> Self {
        let n_chains = chains.len();
        assert!(n_chains >= 2, "need at least two chains");
        let kept = chains[0].len();
        assert!(
            chains.iter().all(|c| c.len() == kept),
            "chains must have equal length"
        );
        let n_params = names.len();
        let mut data = Vec::with_capacity(n_chains * kept * n_params);
        for chain in &chains {
            for draw in chain {
                assert_eq!(draw.len(), n_params, "draw length must match names");
                data.extend_from_slice(draw);
            }
        }
        let mut out = Self {
            names,
            n_chains,
            kept_per_chain: kept,
            n_params,
            data,
            r_hat: Vec::new(),
            ess: Vec::new(),
            accept_rates: vec![f64::NAN; n_params],
            converged: false,
        };
        out.compute_diagnostics();
        out
    }

    fn compute_diagnostics(&mut self) {
        let mut r_hat = Vec::with_capacity(self.n_params);
        let mut ess = Vec::with_capacity(self.n_params);
        for j in 0..self.n_params {
            let traces: Vec<Vec<f64>> =
                (0..self.n_chains).map(|c| self.chain_param(c, j)).collect();
            r_hat.push(diagnostics::split_r_hat(&traces));
            ess.push(diagnostics::ess(&traces));
        }
        self.converged = r_hat.iter().all(|&r| r <= 1.1);
        self.r_hat = r_hat;
        self.ess = ess;
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn n_chains(&self) -> usize {
        self.n_chains
    }

    pub fn kept_per_chain(&self) -> usize {
        self.kept_per_chain
    }

    pub fn total_draws(&self) -> usize {
        self.n_chains * self.kept_per_chain
    }

    /// One retained parameter vector (draws are ordered chain-major).
    pub fn row(&self, draw: usize) -> &[f64] {
        let start = draw * self.n_params;
        &self.data[start..start + self.n_params]
    }

    /// All draws of parameter `j` across chains, chain-major.
    pub fn param_draws(&self, j: usize) -> Vec<f64> {
        (0..self.total_draws())
            .map(|d| self.data[d * self.n_params + j])
            .collect()
    }

    /// Draws of parameter `j` within chain `c`.
    pub fn chain_param(&self, c: usize, j: usize) -> Vec<f64> {
        let base = c * self.kept_per_chain;
        (0..self.kept_per_chain)
            .map(|t| self.data[(base + t) * self.n_params + j])
            .collect()
    }
}

struct ChainOut {
    draws: Vec<Vec<f64>>,
    accept_rates: Vec<f64>,
}

fn run_single_chain<F>(
    log_density: &F,
    coords: &[Coord],
    init: &[f64],
    cfg: &ChainConfig,
    chain_idx: usize,
) -> Result<ChainOut, SamplerError>
where
    F: Fn(&[f64]) -> f64,
{
    let dim = coords.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(chain_idx as u64));

    let mut x = init.to_vec();
    let mut z = vec![0.0; dim];
    let mut jac = 0.0;
    for (j, coord) in coords.iter().enumerate() {
        match coord.transform {
            Transform::Identity => z[j] = x[j],
            Transform::Log => {
                if x[j].is_nan() || x[j] <= 0.0 {
                    return Err(SamplerError::NonFiniteInit { chain: chain_idx });
                }
                z[j] = x[j].ln();
                jac += z[j];
            }
        }
    }
    let lp0 = log_density(&x);
    if !lp0.is_finite() {
        return Err(SamplerError::NonFiniteInit { chain: chain_idx });
    }
    let mut lp = lp0 + jac;

    let mut steps: Vec<f64> = coords.iter().map(|c| c.init_step.max(1e-8)).collect();
    let mut batch_accepts = vec![0u32; dim];
    let mut post_accepts = vec![0u64; dim];
    let mut batch_num = 0usize;

    let total_sweeps = cfg.warmup + cfg.keep * cfg.thin;
    let mut draws = Vec::with_capacity(cfg.keep);

    for sweep in 0..total_sweeps {
        for j in 0..dim {
            let eps: f64 = rng.sample(StandardNormal);
            let zj_new = z[j] + steps[j] * eps;
            let (xj_new, djac) = match coords[j].transform {
                Transform::Identity => (zj_new, 0.0),
                Transform::Log => (zj_new.exp(), zj_new - z[j]),
            };
            let xj_old = x[j];
            x[j] = xj_new;
            let lp_new = log_density(&x) + jac + djac;
            let u: f64 = rng.random();
            if u.ln() < lp_new - lp {
                z[j] = zj_new;
                jac += djac;
                lp = lp_new;
                if sweep < cfg.warmup {
                    batch_accepts[j] += 1;
                } else {
                    post_accepts[j] += 1;
                }
            } else {
                x[j] = xj_old;
            }
        }

        if sweep < cfg.warmup && (sweep + 1) % ADAPT_BATCH == 0 {
            batch_num += 1;
            let delta = (1.0 / (batch_num as f64).sqrt()).min(0.1);
            for j in 0..dim {
                let rate = f64::from(batch_accepts[j]) / ADAPT_BATCH as f64;
                let factor = if rate > cfg.target_accept {
                    delta
                } else {
                    -delta
                };
                steps[j] *= factor.exp();
                batch_accepts[j] = 0;
            }
        }

        if sweep >= cfg.warmup && (sweep - cfg.warmup).is_multiple_of(cfg.thin) {
            draws.push(x.clone());
        }
    }
    debug_assert_eq!(draws.len(), cfg.keep);

    let denom = (cfg.keep * cfg.thin) as f64;
    let accept_rates = post_accepts.iter().map(|&a| a as f64 / denom).collect();
    Ok(ChainOut {
        draws,
        accept_rates,
    })
}

/// Run `cfg.chains` independent adaptive Metropolis chains over
/// `log_density` (natural parameter space) and merge the retained draws.
///
/// `inits` supplies one natural-space starting point per chain; the
/// log-density must be finite at each of them.
pub fn run_chains<F>(
    log_density: F,
    coords: &[Coord],
    inits: &[Vec<f64>],
    cfg: &ChainConfig,
) -> Result<PosteriorDraws, SamplerError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    cfg.validate()?;
    if inits.len() != cfg.chains {
        return Err(SamplerError::Config(format!(
            "{} initial points for {} chains",
            inits.len(),
            cfg.chains
        )));
    }
    if coords.is_empty() {
        return Err(SamplerError::Config("no coordinates to sample".into()));
    }
    for init in inits {
        if init.len() != coords.len() {
            return Err(SamplerError::Config(format!(
                "initial point has {} entries for {} coordinates",
                init.len(),
                coords.len()
            )));
        }
    }

    let outs: Vec<ChainOut> = (0..cfg.chains)
        .into_par_iter()
        .map(|c| run_single_chain(&log_density, coords, &inits[c], cfg, c))
        .collect::<Result<_, _>>()?;

    let names = coords.iter().map(|c| c.name.clone()).collect();
    let mut draws =
        PosteriorDraws::from_chains(names, outs.iter().map(|o| o.draws.clone()).collect());
    let dim = coords.len();
    let mut acc = vec![0.0; dim];
    for out in &outs {
        for (total, rate) in acc.iter_mut().zip(&out.accept_rates) {
            *total += rate / cfg.chains as f64;
        }
    }
    draws.accept_rates = acc;
    Ok(draws)
}

/// Deterministic center of the initialization: per-data-set MLEs for the
/// deltas, clamped sample scales for the sigmas, pooled values for the
/// hyperparameters.
pub fn init_params(stats: &SufficientStats, cfg: &HierConfig) -> HierParams {
    let grand = stats.means.iter().sum::<f64>() / stats.q() as f64;
    let (lo, hi) = cfg.delta0_bounds;
    let margin = (hi - lo) * 1e-9;
    HierParams {
        delta0: grand.clamp(lo + margin, hi - margin),
        sigma0: stats.s_xbar_clamped(),
        nu: 5.0,
        alpha: 0.5 * (cfg.alpha_bounds.0 + cfg.alpha_bounds.1),
        beta: 0.5 * (cfg.beta_bounds.0 + cfg.beta_bounds.1),
        deltas: stats.means.clone(),
        sigmas: stats.sds.iter().map(|&s| s.max(SIGMA_FLOOR)).collect(),
    }
}

fn clamp_open(x: f64, lo: f64, hi: f64) -> f64 {
    let margin = (hi - lo) * 1e-6;
    x.clamp(lo + margin, hi - margin)
}

/// Initialization center plus a small random perturbation, kept inside the
/// prior support so the sampler starts from a finite log-posterior.
pub fn jittered_init<R: Rng + ?Sized>(
    stats: &SufficientStats,
    cfg: &HierConfig,
    rng: &mut R,
) -> HierParams {
    let mut p = init_params(stats, cfg);
    let nf = stats.n as f64;
    let corr = ((1.0 + (nf - 1.0) * cfg.rho) / nf).sqrt();

    for i in 0..p.deltas.len() {
        let z: f64 = rng.sample(StandardNormal);
        p.deltas[i] += 0.5 * p.sigmas[i] * corr * z;
    }
    let sigma_hi = cfg.sigma_upper(stats);
    for s in &mut p.sigmas {
        let z: f64 = rng.sample(StandardNormal);
        *s = (*s * (0.05 * z).exp()).clamp(SIGMA_FLOOR * (1.0 + 1e-6), sigma_hi * (1.0 - 1e-6));
    }
    let z: f64 = rng.sample(StandardNormal);
    p.delta0 = clamp_open(
        p.delta0 + 0.2 * stats.s_xbar_clamped() * z,
        cfg.delta0_bounds.0,
        cfg.delta0_bounds.1,
    );
    let z: f64 = rng.sample(StandardNormal);
    let sigma0_hi = cfg.sigma0_upper(stats);
    p.sigma0 = (p.sigma0 * (0.1 * z).exp()).clamp(sigma0_hi * 1e-12, sigma0_hi * (1.0 - 1e-6));
    let z: f64 = rng.sample(StandardNormal);
    p.nu = (p.nu * (0.2 * z).exp()).clamp(0.1, 1e4);
    let z: f64 = rng.sample(StandardNormal);
    p.alpha = clamp_open(
        p.alpha + 0.1 * (cfg.alpha_bounds.1 - cfg.alpha_bounds.0) * z,
        cfg.alpha_bounds.0,
        cfg.alpha_bounds.1,
    );
    let z: f64 = rng.sample(StandardNormal);
    p.beta = clamp_open(
        p.beta + 0.1 * (cfg.beta_bounds.1 - cfg.beta_bounds.0) * z,
        cfg.beta_bounds.0,
        cfg.beta_bounds.1,
    );
    p
}

/// Coordinate layout of the hierarchical model in the canonical order.
fn hier_coords(stats: &SufficientStats, cfg: &HierConfig) -> Vec<Coord> {
    let q = stats.q();
    let nf = stats.n as f64;
    let corr = ((1.0 + (nf - 1.0) * cfg.rho) / nf).sqrt();
    let mut coords = Vec::with_capacity(HierParams::dim(q));
    coords.push(Coord::new(
        "delta0",
        Transform::Identity,
        2.4 * stats.s_xbar_clamped() / (q as f64).sqrt(),
    ));
    coords.push(Coord::new("sigma0", Transform::Log, 0.5));
    coords.push(Coord::new("nu", Transform::Log, 0.5));
    coords.push(Coord::new("alpha", Transform::Identity, 0.5));
    coords.push(Coord::new("beta", Transform::Identity, 0.015));
    for i in 0..q {
        coords.push(Coord::new(
            format!("delta[{}]", i + 1),
            Transform::Identity,
            2.4 * stats.sds[i].max(SIGMA_FLOOR) * corr,
        ));
    }
    for i in 0..q {
        coords.push(Coord::new(format!("sigma[{}]", i + 1), Transform::Log, 0.3));
    }
    coords
}

/// Fit the hierarchical model: build the coordinate layout, draw jittered
/// per-chain starting points, and run the adaptive sampler on the
/// log-posterior.
pub fn fit_hierarchical(
    stats: &SufficientStats,
    cfg: &HierConfig,
) -> Result<PosteriorDraws, SamplerError> {
    cfg.validate()?;
    if stats.q() < 2 {
        return Err(SamplerError::Config(format!(
            "hierarchical model needs at least two data sets, got {}",
            stats.q()
        )));
    }
    let coords = hier_coords(stats, cfg);
    let inits: Vec<Vec<f64>> = (0..cfg.chain.chains)
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(
                cfg.chain
                    .seed
                    .wrapping_add(0x9E37_79B9_7F4A_7C15)
                    .wrapping_add(c as u64),
            );
            jittered_init(stats, cfg, &mut rng).to_vec()
        })
        .collect();
    run_chains(
        |theta| log_posterior_flat(theta, stats, cfg),
        &coords,
        &inits,
        &cfg.chain,
    )
}
