//! Classical comparison tests: the correlated t-test for one data set, its
//! Bayesian counterpart with a rope, and the Wilcoxon signed-rank test over
//! per-data-set means.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist;
use crate::util;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TestError {
    #[error("need at least {need} values, got {got}")]
    TooFewSamples { got: usize, need: usize },
    #[error("sample variance is zero; the test statistic is undefined")]
    ZeroVariance,
    #[error("all values are zero; the signed-rank statistic is undefined")]
    AllZeros,
    #[error("rho must lie in [0, 1), got {0}")]
    InvalidRho(f64),
    #[error("rope radius must be positive, got {0}")]
    InvalidRope(f64),
}

/// Outcome of a frequentist test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    /// Test identifier, e.g. "correlated-t" or "signed-rank-exact".
    pub test: String,
    pub statistic: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dof: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    pub p_value: f64,
}

/// Posterior mass split of the Bayesian correlated t-test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosteriorTriple {
    pub p_left: f64,
    pub p_rope: f64,
    pub p_right: f64,
}

fn correlated_scale(x: &[f64], rho: f64) -> Result<(f64, f64, f64), TestError> {
    if x.len() < 2 {
        return Err(TestError::TooFewSamples {
            got: x.len(),
            need: 2,
        });
    }
    if !(0.0..1.0).contains(&rho) {
        return Err(TestError::InvalidRho(rho));
    }
    let mean = util::mean(x);
    let sd = util::sample_sd(x);
    if sd == 0.0 {
        return Err(TestError::ZeroVariance);
    }
    let n = x.len() as f64;
    let se = sd * (1.0 / n + rho / (1.0 - rho)).sqrt();
    Ok((mean, sd, se))
}

/// Correlated t-test on one data set's fold differences: the standard error
/// inflates for the correlation among overlapping training sets,
/// `t = mean / sqrt(s^2 (1/n + rho/(1-rho)))` with n-1 degrees of freedom.
pub fn correlated_t_test(x: &[f64], rho: f64) -> Result<TestResult, TestError> {
    let (mean, _, se) = correlated_scale(x, rho)?;
    let t = mean / se;
    let dof = (x.len() - 1) as f64;
    let tail = dist::student_t_cdf(-t.abs(), 0.0, 1.0, dof).expect("valid Student arguments");
    Ok(TestResult {
        test: "correlated-t".into(),
        statistic: t,
        dof: Some(dof),
        z: None,
        p_value: (2.0 * tail).min(1.0),
    })
}

/// Bayesian correlated t-test: the posterior of the data set's delta is
/// Student with n-1 degrees of freedom, location at the sample mean and the
/// correlated-t standard error as scale. Returns its mass left of, inside
/// and right of the rope.
pub fn bayes_correlated_t_test(
    x: &[f64],
    rho: f64,
    rope: f64,
) -> Result<PosteriorTriple, TestError> {
    if rope.is_nan() || rope <= 0.0 {
        return Err(TestError::InvalidRope(rope));
    }
    let (mean, _, se) = correlated_scale(x, rho)?;
    let dof = (x.len() - 1) as f64;
    let left = dist::student_t_cdf(-rope, mean, se, dof).expect("valid Student arguments");
    let right = dist::student_t_sf(rope, mean, se, dof).expect("valid Student arguments");
    Ok(PosteriorTriple {
        p_left: left,
        p_rope: 1.0 - left - right,
        p_right: right,
    })
}

/// Ranks of absolute values with average ranks for ties.
fn tied_ranks(abs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..abs.len()).collect();
    order.sort_by(|&a, &b| abs[a].partial_cmp(&abs[b]).expect("finite values"));
    let mut ranks = vec![0.0; abs.len()];
    let mut i = 0;
    while i < abs.len() {
        let mut j = i;
        while j < abs.len() && abs[order[j]] == abs[order[i]] {
            j += 1;
        }
        // average of ranks i+1 ..= j
        let avg = (i + j + 1) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = avg;
        }
        i = j;
    }
    ranks
}

/// Two-sided p-value by full enumeration of the 2^q sign assignments, using
/// the observed (possibly tied) ranks.
fn exact_signed_rank_p(ranks: &[f64], t_obs: f64) -> f64 {
    let q = ranks.len();
    let total = 1u64 << q;
    let mut le = 0u64;
    let mut ge = 0u64;
    for mask in 0..total {
        let mut t = 0.0;
        for (i, &r) in ranks.iter().enumerate() {
            if mask >> i & 1 == 1 {
                t += r;
            }
        }
        if t <= t_obs + 1e-12 {
            le += 1;
        }
        if t >= t_obs - 1e-12 {
            ge += 1;
        }
    }
    let p = 2.0 * (le.min(ge) as f64) / total as f64;
    p.min(1.0)
}

/// Wilcoxon signed-rank test on the per-data-set mean differences. Zeros are
/// dropped (reducing q), tied magnitudes share average ranks, and the
/// statistic is the positive-rank sum. The null distribution is enumerated
/// exactly up to q = 12; beyond that a tie-corrected normal approximation
/// with continuity correction is used.
pub fn signed_rank_test(means: &[f64]) -> Result<TestResult, TestError> {
    let nonzero: Vec<f64> = means.iter().copied().filter(|&v| v != 0.0).collect();
    if nonzero.is_empty() {
        return Err(TestError::AllZeros);
    }
    let abs: Vec<f64> = nonzero.iter().map(|v| v.abs()).collect();
    let ranks = tied_ranks(&abs);
    let t_plus: f64 = nonzero
        .iter()
        .zip(&ranks)
        .filter(|(&v, _)| v > 0.0)
        .map(|(_, &r)| r)
        .sum();
    let q = nonzero.len();

    if q <= 12 {
        let p = exact_signed_rank_p(&ranks, t_plus);
        return Ok(TestResult {
            test: "signed-rank-exact".into(),
            statistic: t_plus,
            dof: None,
            z: None,
            p_value: p,
        });
    }

    let qf = q as f64;
    let mu = qf * (qf + 1.0) / 4.0;
    // tie correction: subtract sum(t^3 - t)/48 over tie groups
    let mut var = qf * (qf + 1.0) * (2.0 * qf + 1.0) / 24.0;
    {
        let mut sorted = abs.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        let mut i = 0;
        while i < sorted.len() {
            let mut j = i;
            while j < sorted.len() && sorted[j] == sorted[i] {
                j += 1;
            }
            let t = (j - i) as f64;
            var -= (t * t * t - t) / 48.0;
            i = j;
        }
    }
    if var <= 0.0 {
        return Err(TestError::ZeroVariance);
    }
    let z = ((t_plus - mu).abs() - 0.5).max(0.0) / var.sqrt();
    let p = 2.0 * dist::normal_cdf(-z, 0.0, 1.0).expect("valid Normal arguments");
    Ok(TestResult {
        test: "signed-rank-normal".into(),
        statistic: t_plus,
        dof: None,
        z: Some(if t_plus >= mu { z } else { -z }),
        p_value: p.min(1.0),
    })
}
