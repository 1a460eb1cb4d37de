//! Posterior summaries: next-data-set rope probabilities and decision,
//! posterior-odds grading, shrinkage estimates, and the closed-form
//! mean-squared-error results for the simplified shrinkage model.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::SufficientStats;
use crate::dist;
use crate::sampler::PosteriorDraws;
use crate::util;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InferenceError {
    #[error("no posterior draws available")]
    EmptyDraws,
    #[error("rope radius must be positive, got {0}")]
    InvalidRope(f64),
    #[error("rho must lie in [0, 1), got {0}")]
    InvalidRho(f64),
    #[error("posterior odds are undefined when both probabilities are zero")]
    UndefinedOdds,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("draw matrix has {got} parameters, expected {expected}")]
    ParamCount { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    BadArgument(String),
}

/// The three regions a next-data-set difference can fall into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    Left,
    Rope,
    Right,
}

/// Decision of the test at level 1 - alpha; `None` when no region reaches
/// the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Left,
    Rope,
    Right,
    None,
}

/// Evidence grade for a posterior-odds ratio: (1, 3] weak, (3, 20] positive,
/// above 20 strong.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grade {
    Weak,
    Positive,
    Strong,
}

fn grade_of(odds_at_least_one: f64) -> Grade {
    if odds_at_least_one <= 3.0 {
        Grade::Weak
    } else if odds_at_least_one <= 20.0 {
        Grade::Positive
    } else {
        Grade::Strong
    }
}

/// Odds ratio `p(a)/p(b)`; infinite when `p(b)` is zero and `p(a)` is not.
/// The grade always describes the favored side, so odds below one are graded
/// against the other hypothesis.
pub fn posterior_odds(p_a: f64, p_b: f64) -> Result<(f64, Grade), InferenceError> {
    if p_a < 0.0 || p_b < 0.0 {
        return Err(InferenceError::BadArgument(
            "probabilities must be non-negative".into(),
        ));
    }
    if p_a == 0.0 && p_b == 0.0 {
        return Err(InferenceError::UndefinedOdds);
    }
    let odds = p_a / p_b;
    let magnitude = if odds >= 1.0 { odds } else { 1.0 / odds };
    Ok((odds, grade_of(magnitude)))
}

/// One oriented row of the odds table: evidence for `favored` over `against`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OddsEntry {
    pub favored: Hypothesis,
    pub against: Hypothesis,
    /// `p(favored)/p(against)`, at least 1; `None` encodes infinity.
    pub odds: Option<f64>,
    pub grade: Grade,
}

fn oriented_odds(a: Hypothesis, p_a: f64, b: Hypothesis, p_b: f64) -> Option<OddsEntry> {
    let (favored, against, num, den) = if p_a >= p_b {
        (a, b, p_a, p_b)
    } else {
        (b, a, p_b, p_a)
    };
    match posterior_odds(num, den) {
        Ok((odds, grade)) => Some(OddsEntry {
            favored,
            against,
            odds: odds.is_finite().then_some(odds),
            grade,
        }),
        Err(_) => None,
    }
}

/// Probabilities that the next data set's difference is most likely left of,
/// inside, or right of the rope, with the decision and the odds table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RopeReport {
    pub p_left: f64,
    pub p_rope: f64,
    pub p_right: f64,
    pub n_left: usize,
    pub n_rope: usize,
    pub n_right: usize,
    pub n_s: usize,
    pub rope: f64,
    pub alpha: f64,
    pub decision: Decision,
    pub odds: Vec<OddsEntry>,
}

/// Pick the region with the largest probability; ties resolve to the first
/// of (left, rope, right) so the counting is deterministic.
pub fn largest_outcome(p_left: f64, p_rope: f64, p_right: f64) -> Hypothesis {
    let mut best = Hypothesis::Left;
    let mut best_p = p_left;
    if p_rope > best_p {
        best = Hypothesis::Rope;
        best_p = p_rope;
    }
    if p_right > best_p {
        best = Hypothesis::Right;
    }
    best
}

/// Count, over `n_s` posterior draws of (delta0, sigma0, nu), which region
/// the next data set's Student density favors, and turn the counts into the
/// rope report. Draws are consumed in order; when `n_s` exceeds the retained
/// draw count the indices are resampled with replacement.
pub fn next_delta_simplex<R: Rng + ?Sized>(
    draws: &PosteriorDraws,
    rope: f64,
    n_s: usize,
    alpha: f64,
    rng: &mut R,
) -> Result<RopeReport, InferenceError> {
    if rope.is_nan() || rope <= 0.0 {
        return Err(InferenceError::InvalidRope(rope));
    }
    if n_s == 0 {
        return Err(InferenceError::BadArgument("n_s must be positive".into()));
    }
    let total = draws.total_draws();
    if total == 0 {
        return Err(InferenceError::EmptyDraws);
    }
    if draws.n_params() < 3 {
        return Err(InferenceError::ParamCount {
            expected: 3,
            got: draws.n_params(),
        });
    }

    let (mut n_left, mut n_rope, mut n_right) = (0usize, 0usize, 0usize);
    for s in 0..n_s {
        let idx = if n_s <= total {
            s
        } else {
            rng.random_range(0..total)
        };
        let row = draws.row(idx);
        let (delta0, sigma0, nu) = (row[0], row[1], row[2]);
        let left = dist::student_t_cdf(-rope, delta0, sigma0, nu)
            .map_err(|e| InferenceError::BadArgument(e.to_string()))?;
        let right = dist::student_t_sf(rope, delta0, sigma0, nu)
            .map_err(|e| InferenceError::BadArgument(e.to_string()))?;
        match largest_outcome(left, 1.0 - left - right, right) {
            Hypothesis::Left => n_left += 1,
            Hypothesis::Rope => n_rope += 1,
            Hypothesis::Right => n_right += 1,
        }
    }

    let p_left = n_left as f64 / n_s as f64;
    let p_rope = n_rope as f64 / n_s as f64;
    let p_right = n_right as f64 / n_s as f64;
    let threshold = 1.0 - alpha;
    let decision = if p_left > threshold {
        Decision::Left
    } else if p_rope > threshold {
        Decision::Rope
    } else if p_right > threshold {
        Decision::Right
    } else {
        Decision::None
    };
    let odds = [
        oriented_odds(Hypothesis::Left, p_left, Hypothesis::Rope, p_rope),
        oriented_odds(Hypothesis::Left, p_left, Hypothesis::Right, p_right),
        oriented_odds(Hypothesis::Rope, p_rope, Hypothesis::Right, p_right),
    ]
    .into_iter()
    .flatten()
    .collect();

    Ok(RopeReport {
        p_left,
        p_rope,
        p_right,
        n_left,
        n_rope,
        n_right,
        n_s,
        rope,
        alpha,
        decision,
        odds,
    })
}

/// Posterior summary of one data set's delta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaSummary {
    pub mean: f64,
    pub sd: f64,
    /// Central 95% interval.
    pub lo: f64,
    pub hi: f64,
}

/// Per-data-set posterior mean, standard deviation and central 95% interval
/// of the delta draws.
pub fn shrinkage_estimates(
    draws: &PosteriorDraws,
    q: usize,
) -> Result<Vec<DeltaSummary>, InferenceError> {
    let expected = 5 + 2 * q;
    if draws.n_params() != expected {
        return Err(InferenceError::ParamCount {
            expected,
            got: draws.n_params(),
        });
    }
    if draws.total_draws() == 0 {
        return Err(InferenceError::EmptyDraws);
    }
    let mut out = Vec::with_capacity(q);
    for i in 0..q {
        let mut xs = draws.param_draws(5 + i);
        let mean = util::mean(&xs);
        let sd = util::sample_sd(&xs);
        xs.sort_by(|a, b| a.partial_cmp(b).expect("finite draws"));
        out.push(DeltaSummary {
            mean,
            sd,
            lo: util::quantile_sorted(&xs, 0.025),
            hi: util::quantile_sorted(&xs, 0.975),
        });
    }
    Ok(out)
}

/// Joint MAP estimate of the simplified shrinkage model (Gaussian population,
/// known common sigma^2), found by the coordinate fixed-point iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapFixedPoint {
    pub deltas: Vec<f64>,
    pub delta0: f64,
    pub sigma0_sq: f64,
    /// Shrinkage weight sigma0^2 / (sigma0^2 + sigma_n^2).
    pub w: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Combined shrinkage output: the posterior summaries from the full
/// hierarchical fit plus the closed-form MAP fixed point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShrinkageResult {
    pub per_dataset: Vec<DeltaSummary>,
    pub map: MapFixedPoint,
}

/// Iterate the stationarity conditions of the simplified model:
/// `delta0 = mean(delta_i)`, `sigma0^2 = mean((delta_i - delta0)^2)`,
/// `delta_i = w x_i + (1-w) delta0` with `w = sigma0^2/(sigma0^2+sigma_n^2)`,
/// where sigma_n^2 uses the mean of the per-data-set variances as the known
/// sigma^2. Stops at a max-change below 1e-10 or 10^4 iterations.
pub fn map_fixed_point(stats: &SufficientStats, rho: f64) -> Result<MapFixedPoint, InferenceError> {
    if stats.q() < 2 {
        return Err(InferenceError::LengthMismatch {
            expected: 2,
            got: stats.q(),
        });
    }
    if !(0.0..1.0).contains(&rho) {
        return Err(InferenceError::InvalidRho(rho));
    }
    let q = stats.q() as f64;
    let nf = stats.n as f64;
    let sigma_sq = stats.mean_variance();
    let sigma_n_sq = sigma_sq * (1.0 + (nf - 1.0) * rho) / nf;

    let mut deltas = stats.means.clone();
    let mut delta0 = util::mean(&deltas);
    let mut sigma0_sq = deltas
        .iter()
        .map(|d| (d - delta0) * (d - delta0))
        .sum::<f64>()
        / q;
    let mut w = sigma0_sq / (sigma0_sq + sigma_n_sq);

    const TOL: f64 = 1e-10;
    const MAX_ITER: usize = 10_000;
    let mut converged = false;
    let mut iterations = MAX_ITER;
    for it in 0..MAX_ITER {
        let mut max_change: f64 = 0.0;
        for (i, d) in deltas.iter_mut().enumerate() {
            let new = w * stats.means[i] + (1.0 - w) * delta0;
            max_change = max_change.max((new - *d).abs());
            *d = new;
        }
        let new_delta0 = util::mean(&deltas);
        max_change = max_change.max((new_delta0 - delta0).abs());
        delta0 = new_delta0;
        let new_sigma0_sq = deltas
            .iter()
            .map(|d| (d - delta0) * (d - delta0))
            .sum::<f64>()
            / q;
        max_change = max_change.max((new_sigma0_sq - sigma0_sq).abs());
        sigma0_sq = new_sigma0_sq;
        w = sigma0_sq / (sigma0_sq + sigma_n_sq);
        if max_change < TOL {
            converged = true;
            iterations = it + 1;
            break;
        }
    }
    Ok(MapFixedPoint {
        deltas,
        delta0,
        sigma0_sq,
        w,
        converged,
        iterations,
    })
}

/// Closed-form mean squared errors of the simplified model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MseClosedForms {
    /// MSE of the plain mean: sigma_n^2 = sigma^2 (1+(n-1) rho) / n.
    pub mse_mle: f64,
    /// MSE of the w-shrinkage estimator: w^2 sigma_n^2 + (1-w)^2 sigma0^2.
    pub mse_shr: f64,
    /// MSE at the optimal weight: sigma0^2 sigma_n^2 / (sigma0^2 + sigma_n^2).
    pub mse_shr_opt: f64,
}

pub fn mse_closed_forms(
    sigma: f64,
    n: usize,
    rho: f64,
    sigma0: f64,
    w: f64,
) -> Result<MseClosedForms, InferenceError> {
    if !(sigma > 0.0 && sigma.is_finite()) || !(sigma0 > 0.0 && sigma0.is_finite()) {
        return Err(InferenceError::BadArgument(
            "sigma and sigma0 must be positive".into(),
        ));
    }
    if !(0.0..1.0).contains(&rho) {
        return Err(InferenceError::InvalidRho(rho));
    }
    if n < 2 {
        return Err(InferenceError::BadArgument("n must be at least 2".into()));
    }
    let nf = n as f64;
    let sigma_n_sq = sigma * sigma * (1.0 + (nf - 1.0) * rho) / nf;
    let sigma0_sq = sigma0 * sigma0;
    Ok(MseClosedForms {
        mse_mle: sigma_n_sq,
        mse_shr: w * w * sigma_n_sq + (1.0 - w) * (1.0 - w) * sigma0_sq,
        mse_shr_opt: sigma0_sq * sigma_n_sq / (sigma0_sq + sigma_n_sq),
    })
}

/// Mean squared error between estimates and ground truth.
pub fn mse_empirical(estimates: &[f64], truths: &[f64]) -> Result<f64, InferenceError> {
    if estimates.len() != truths.len() || estimates.is_empty() {
        return Err(InferenceError::LengthMismatch {
            expected: truths.len(),
            got: estimates.len(),
        });
    }
    let sum: f64 = estimates
        .iter()
        .zip(truths)
        .map(|(e, t)| (e - t) * (e - t))
        .sum();
    Ok(sum / estimates.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::sufficient_stats;
    use crate::data::CrossValMatrix;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Draw matrix with constant hyperparameter rows, two chains.
    fn hyper_draws(rows: Vec<[f64; 3]>) -> PosteriorDraws {
        let names = vec!["delta0".into(), "sigma0".into(), "nu".into()];
        let full: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        PosteriorDraws::from_chains(names, vec![full.clone(), full])
    }

    #[test]
    fn counting_rule_on_worked_triples() {
        let triples = [(0.08, 0.90, 0.02), (0.05, 0.67, 0.28), (1.0, 0.0, 0.0)];
        let (mut l, mut r, mut ri) = (0, 0, 0);
        for (a, b, c) in triples {
            match largest_outcome(a, b, c) {
                Hypothesis::Left => l += 1,
                Hypothesis::Rope => r += 1,
                Hypothesis::Right => ri += 1,
            }
        }
        assert_eq!((l, r, ri), (1, 2, 0));
    }

    #[test]
    fn tie_breaks_in_left_rope_right_order() {
        assert_eq!(largest_outcome(0.4, 0.4, 0.2), Hypothesis::Left);
        assert_eq!(largest_outcome(0.2, 0.4, 0.4), Hypothesis::Rope);
        assert_eq!(
            largest_outcome(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0),
            Hypothesis::Left
        );
    }

    #[test]
    fn all_mass_in_rope() {
        // sigma0 far below the rope radius: every draw favors rope
        let draws = hyper_draws(vec![[0.0, 1e-4, 30.0]; 8]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let rep = next_delta_simplex(&draws, 0.01, 16, 0.05, &mut rng).unwrap();
        assert_eq!(rep.p_rope, 1.0);
        assert_eq!(rep.decision, Decision::Rope);
        assert_eq!(rep.n_left + rep.n_rope + rep.n_right, rep.n_s);
    }

    #[test]
    fn symmetric_draw_has_equal_tails() {
        let (delta0, sigma0, nu) = (0.0, 5.0, 4.0);
        let left = dist::student_t_cdf(-0.01, delta0, sigma0, nu).unwrap();
        let right = dist::student_t_sf(0.01, delta0, sigma0, nu).unwrap();
        // exact equality: both tails evaluate the same incomplete beta
        assert_eq!(left, right);
    }

    #[test]
    fn simplex_probabilities_and_reproducibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rows: Vec<[f64; 3]> = (0..50)
            .map(|_| {
                [
                    rng.random_range(-0.02..0.02),
                    rng.random_range(0.001..0.05),
                    rng.random_range(1.0..40.0),
                ]
            })
            .collect();
        let draws = hyper_draws(rows);
        // n_s larger than the retained count exercises the resampling path
        let mut r1 = ChaCha8Rng::seed_from_u64(9);
        let mut r2 = ChaCha8Rng::seed_from_u64(9);
        let a = next_delta_simplex(&draws, 0.01, 400, 0.05, &mut r1).unwrap();
        let b = next_delta_simplex(&draws, 0.01, 400, 0.05, &mut r2).unwrap();
        assert_eq!(a, b);
        assert_abs_diff_eq!(a.p_left + a.p_rope + a.p_right, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rope_count_monotone_in_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rows: Vec<[f64; 3]> = (0..80)
            .map(|_| {
                [
                    rng.random_range(-0.05..0.05),
                    rng.random_range(0.001..0.1),
                    rng.random_range(1.0..40.0),
                ]
            })
            .collect();
        let draws = hyper_draws(rows);
        let mut prev = 0usize;
        for rope in [0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.5] {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let rep = next_delta_simplex(&draws, rope, 160, 0.05, &mut rng).unwrap();
            assert!(rep.n_rope >= prev, "rope count dropped at radius {rope}");
            prev = rep.n_rope;
        }
    }

    #[test]
    fn odds_grades() {
        let (odds, grade) = posterior_odds(0.87, 0.10).unwrap();
        assert_abs_diff_eq!(odds, 8.7, epsilon = 1e-12);
        assert_eq!(grade, Grade::Positive);

        let (odds, grade) = posterior_odds(0.5, 0.5).unwrap();
        assert_eq!(odds, 1.0);
        assert_eq!(grade, Grade::Weak);

        let (odds, grade) = posterior_odds(0.90, 0.03).unwrap();
        assert_abs_diff_eq!(odds, 30.0, epsilon = 1e-12);
        assert_eq!(grade, Grade::Strong);

        // odds below one are graded against the other hypothesis
        let (odds, grade) = posterior_odds(0.03, 0.90).unwrap();
        assert!(odds < 1.0);
        assert_eq!(grade, Grade::Strong);

        let (odds, grade) = posterior_odds(0.2, 0.0).unwrap();
        assert!(odds.is_infinite());
        assert_eq!(grade, Grade::Strong);

        assert_eq!(
            posterior_odds(0.0, 0.0).unwrap_err(),
            InferenceError::UndefinedOdds
        );
    }

    #[test]
    fn shrinkage_summaries_on_degenerate_draws() {
        // q = 1: constant delta draws
        let names: Vec<String> = vec![
            "delta0".into(),
            "sigma0".into(),
            "nu".into(),
            "alpha".into(),
            "beta".into(),
            "delta[1]".into(),
            "sigma[1]".into(),
        ];
        let row = vec![0.0, 1.0, 5.0, 2.0, 0.1, 0.42, 0.2];
        let chain: Vec<Vec<f64>> = vec![row.clone(); 6];
        let draws = PosteriorDraws::from_chains(names.clone(), vec![chain.clone(), chain]);
        let s = shrinkage_estimates(&draws, 1).unwrap();
        assert_eq!(s[0].mean, 0.42);
        assert_eq!(s[0].sd, 0.0);
        assert_eq!((s[0].lo, s[0].hi), (0.42, 0.42));

        // symmetric two-point draws average to the midpoint
        let mut rows = Vec::new();
        for t in 0..8 {
            let mut r = row.clone();
            r[5] = if t % 2 == 0 { 0.1 } else { 0.3 };
            rows.push(r);
        }
        let draws = PosteriorDraws::from_chains(names, vec![rows.clone(), rows]);
        let s = shrinkage_estimates(&draws, 1).unwrap();
        assert_abs_diff_eq!(s[0].mean, 0.2, epsilon = 1e-15);
    }

    fn stats_from(rows: Vec<Vec<f64>>, m: usize, k: usize) -> SufficientStats {
        sufficient_stats(&CrossValMatrix::from_rows(rows, m, k).unwrap()).unwrap()
    }

    #[test]
    fn map_fixed_point_degenerate_cases() {
        // all means equal: zero spread, full shrinkage
        let stats = stats_from(
            vec![
                vec![0.1, 0.2, 0.0, 0.1],
                vec![0.2, 0.0, 0.1, 0.1],
                vec![0.0, 0.1, 0.2, 0.1],
            ],
            2,
            2,
        );
        let fp = map_fixed_point(&stats, 0.25).unwrap();
        assert!(fp.converged);
        assert!(fp.sigma0_sq < 1e-12);
        assert!(fp.w < 1e-6);
        for d in &fp.deltas {
            assert_abs_diff_eq!(*d, 0.1, epsilon = 1e-6);
        }
    }

    #[test]
    fn map_fixed_point_noiseless_limit() {
        // nearly zero within-data-set noise: w -> 1, deltas -> means
        let rows = vec![
            vec![0.10, 0.10 + 1e-9, 0.10, 0.10],
            vec![-0.05, -0.05, -0.05 + 1e-9, -0.05],
            vec![0.20, 0.20, 0.20, 0.20 - 1e-9],
        ];
        let stats = stats_from(rows, 2, 2);
        let fp = map_fixed_point(&stats, 0.0).unwrap();
        assert!(fp.w > 0.999, "w = {}", fp.w);
        for (d, m) in fp.deltas.iter().zip(&stats.means) {
            assert_abs_diff_eq!(d, m, epsilon = 1e-6);
        }
    }

    #[test]
    fn map_fixed_point_zeroes_stationarity_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rows: Vec<Vec<f64>> = (0..5)
            .map(|_| (0..8).map(|_| rng.random_range(-0.3..0.3)).collect())
            .collect();
        let stats = stats_from(rows, 2, 4);
        let rho = 0.25;
        let fp = map_fixed_point(&stats, rho).unwrap();
        assert!(fp.converged);

        let nf = stats.n as f64;
        let sigma_n_sq = stats.mean_variance() * (1.0 + (nf - 1.0) * rho) / nf;
        let q = stats.q() as f64;
        // d/d delta_i: (delta0 - delta_i)/sigma0^2 + (mean_i - delta_i)/sigma_n^2
        if fp.sigma0_sq > 1e-12 {
            for i in 0..stats.q() {
                let g = (fp.delta0 - fp.deltas[i]) / fp.sigma0_sq
                    + (stats.means[i] - fp.deltas[i]) / sigma_n_sq;
                assert!(g.abs() < 1e-6, "delta_{i} gradient {g}");
            }
        }
        // d/d delta0: sum(delta_i) - q delta0
        let g0: f64 = fp.deltas.iter().sum::<f64>() - q * fp.delta0;
        assert!(g0.abs() < 1e-8);
        // d/d sigma0: sum((delta_i - delta0)^2) - q sigma0^2
        let gs: f64 = fp
            .deltas
            .iter()
            .map(|d| (d - fp.delta0) * (d - fp.delta0))
            .sum::<f64>()
            - q * fp.sigma0_sq;
        assert!(gs.abs() < 1e-8, "sigma0 stationarity {gs}");
        // the MAP estimates sit between the raw means and the grand mean
        for i in 0..stats.q() {
            let (lo, hi) = if stats.means[i] <= fp.delta0 {
                (stats.means[i], fp.delta0)
            } else {
                (fp.delta0, stats.means[i])
            };
            assert!(fp.deltas[i] >= lo - 1e-12 && fp.deltas[i] <= hi + 1e-12);
        }
    }

    #[test]
    fn closed_form_mse_cases() {
        // w = 1 reduces the shrinkage MSE to the MLE one
        let m = mse_closed_forms(0.2, 10, 0.1, 0.05, 1.0).unwrap();
        assert_abs_diff_eq!(m.mse_shr, m.mse_mle, epsilon = 1e-15);

        // sigma0^2 == sigma_n^2 halves the error at the optimal weight
        let sigma: f64 = 0.1;
        let (n, rho) = (100usize, 0.1f64);
        let sigma_n_sq = sigma * sigma * (1.0 + 99.0 * rho) / 100.0;
        let m = mse_closed_forms(sigma, n, rho, sigma_n_sq.sqrt(), 0.5).unwrap();
        assert_abs_diff_eq!(m.mse_shr_opt, sigma_n_sq / 2.0, epsilon = 1e-15);
        assert!(m.mse_shr_opt < m.mse_mle);

        // sigma_n^2 against the dense 1' Sigma 1 / n^2 oracle
        let dense: f64 = {
            let n = 100usize;
            let sigma2 = 0.01f64;
            let mut total = 0.0;
            for i in 0..n {
                for j in 0..n {
                    total += if i == j { sigma2 } else { sigma2 * rho };
                }
            }
            total / (n * n) as f64
        };
        assert_abs_diff_eq!(m.mse_mle, dense, epsilon = 1e-15);
    }

    #[test]
    fn optimal_shrinkage_strictly_beats_mle() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..500 {
            let sigma = rng.random_range(1e-3..2.0);
            let n = rng.random_range(2..500);
            let rho = rng.random_range(0.0..0.999);
            let sigma0 = rng.random_range(1e-4..1.0);
            let m = mse_closed_forms(sigma, n, rho, sigma0, 0.5).unwrap();
            assert!(m.mse_shr_opt < m.mse_mle);
        }
    }

    #[test]
    fn empirical_mse() {
        assert_eq!(mse_empirical(&[0.1, 0.2], &[0.1, 0.2]).unwrap(), 0.0);
        let est = [0.12, 0.22, 0.32];
        let tru = [0.10, 0.20, 0.30];
        assert_abs_diff_eq!(mse_empirical(&est, &tru).unwrap(), 0.0004, epsilon = 1e-15);
        assert!(mse_empirical(&[0.1], &[0.1, 0.2]).is_err());
    }

    #[test]
    fn rejects_bad_arguments() {
        let draws = hyper_draws(vec![[0.0, 1.0, 5.0]; 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            next_delta_simplex(&draws, 0.0, 8, 0.05, &mut rng).unwrap_err(),
            InferenceError::InvalidRope(0.0)
        );
        assert!(matches!(
            shrinkage_estimates(&draws, 4).unwrap_err(),
            InferenceError::ParamCount { .. }
        ));
        assert!(mse_closed_forms(0.0, 10, 0.1, 0.1, 0.5).is_err());
        assert!(mse_closed_forms(0.1, 10, 1.0, 0.1, 0.5).is_err());
    }
}
