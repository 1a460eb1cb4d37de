//! Convergence diagnostics: split R-hat and autocorrelation-based effective
//! sample size, both over per-chain traces of a single parameter.

use crate::util;

/// Split each chain in half (dropping a middle element when odd).
fn split_halves(chains: &[Vec<f64>]) -> Vec<&[f64]> {
    let mut out = Vec::with_capacity(chains.len() * 2);
    for c in chains {
        let half = c.len() / 2;
        out.push(&c[..half]);
        out.push(&c[c.len() - half..]);
    }
    out
}

fn within_between(split: &[&[f64]]) -> (f64, f64, f64) {
    let m = split.len() as f64;
    let len = split[0].len() as f64;
    let chain_means: Vec<f64> = split.iter().map(|c| util::mean(c)).collect();
    let grand = util::mean(&chain_means);
    let b = len / (m - 1.0)
        * chain_means
            .iter()
            .map(|&cm| (cm - grand) * (cm - grand))
            .sum::<f64>();
    let w = split
        .iter()
        .map(|c| {
            let cm = util::mean(c);
            c.iter().map(|&x| (x - cm) * (x - cm)).sum::<f64>() / (len - 1.0)
        })
        .sum::<f64>()
        / m;
    (w, b, len)
}

/// Gelman-Rubin potential scale reduction factor on split chains.
///
/// A constant parameter (zero variance everywhere) reports 1 by convention;
/// constant-within but divergent-across chains reports infinity.
pub fn split_r_hat(chains: &[Vec<f64>]) -> f64 {
    assert!(chains.len() >= 2, "r-hat needs at least two chains");
    assert!(
        chains.iter().all(|c| c.len() >= 4),
        "r-hat needs at least four draws per chain"
    );
    let split = split_halves(chains);
    let (w, b, len) = within_between(&split);
    if w == 0.0 {
        return if b == 0.0 { 1.0 } else { f64::INFINITY };
    }
    let var_plus = (len - 1.0) / len * w + b / len;
    (var_plus / w).sqrt()
}

/// Effective sample size from combined-chain autocorrelations with Geyer's
/// initial-positive-sequence truncation. Clamped to [1, total draws];
/// constant parameters report the total draw count.
pub fn ess(chains: &[Vec<f64>]) -> f64 {
    assert!(chains.len() >= 2, "ess needs at least two chains");
    assert!(
        chains.iter().all(|c| c.len() >= 4),
        "ess needs at least four draws per chain"
    );
    let split = split_halves(chains);
    let (w, b, len_f) = within_between(&split);
    let total = chains.iter().map(|c| c.len()).sum::<usize>() as f64;
    let var_plus = (len_f - 1.0) / len_f * w + b / len_f;
    if var_plus == 0.0 || w == 0.0 {
        return total;
    }

    let len = split[0].len();
    let means: Vec<f64> = split.iter().map(|c| util::mean(c)).collect();
    // Lag-t autocovariance averaged over split chains (biased, /len).
    let gamma_hat = |t: usize| -> f64 {
        let mut acc = 0.0;
        for (c, chain) in split.iter().enumerate() {
            let cm = means[c];
            let mut g = 0.0;
            for i in 0..len - t {
                g += (chain[i] - cm) * (chain[i + t] - cm);
            }
            acc += g / len as f64;
        }
        acc / split.len() as f64
    };
    let rho = |t: usize| 1.0 - (w - gamma_hat(t)) / var_plus;

    let mut tau = 1.0;
    let mut t = 1;
    while t + 1 < len {
        let pair = rho(t) + rho(t + 1);
        if pair < 0.0 {
            break;
        }
        tau += 2.0 * pair;
        t += 2;
    }
    (total / tau).clamp(1.0, total)
}
