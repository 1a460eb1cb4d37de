//! Gaussian kernel density estimation with the nrd0 bandwidth rule
//! (0.9 min(sd, IQR/1.34) n^(-1/5)), for the density exports that back the
//! model-fit overlays.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::util;

const SQRT_2PI: f64 = 2.5066282746310002;
/// Applied when the samples carry no spread at all.
const BANDWIDTH_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KdeError {
    #[error("need at least two samples, got {0}")]
    TooFewSamples(usize),
    #[error("bandwidth must be positive, got {0}")]
    InvalidBandwidth(f64),
    #[error("samples must be finite")]
    NonFiniteSample,
}

/// Density curve evaluated on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdeCurve {
    pub points: Vec<(f64, f64)>,
    pub bandwidth: f64,
    /// Set when the samples were all identical and the bandwidth was floored.
    pub degenerate: bool,
}

/// nrd0 bandwidth; the boolean reports whether the floor kicked in.
pub fn nrd0_bandwidth(samples: &[f64]) -> Result<(f64, bool), KdeError> {
    if samples.len() < 2 {
        return Err(KdeError::TooFewSamples(samples.len()));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(KdeError::NonFiniteSample);
    }
    let sd = util::sample_sd(samples);
    let iqr = util::quantile(samples, 0.75) - util::quantile(samples, 0.25);
    let mut lo = sd.min(iqr / 1.34);
    if lo == 0.0 {
        // R's nrd0 fallback chain before giving up entirely
        lo = sd;
    }
    if lo == 0.0 {
        return Ok((BANDWIDTH_FLOOR, true));
    }
    Ok((0.9 * lo * (samples.len() as f64).powf(-0.2), false))
}

/// Gaussian-kernel density estimate at a single point.
pub fn kde_density(samples: &[f64], bandwidth: f64, x: f64) -> f64 {
    let mut acc = 0.0;
    for &s in samples {
        let z = (x - s) / bandwidth;
        acc += (-0.5 * z * z).exp();
    }
    acc / (samples.len() as f64 * bandwidth * SQRT_2PI)
}

/// Evenly spaced grid covering the sample range plus `cut` bandwidths on
/// each side.
pub fn default_grid(samples: &[f64], bandwidth: f64, points: usize, cut: f64) -> Vec<f64> {
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min) - cut * bandwidth;
    let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max) + cut * bandwidth;
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| lo + step * i as f64).collect()
}

/// Evaluate the density curve on `grid`, defaulting the bandwidth to nrd0.
pub fn kde_curve(
    samples: &[f64],
    grid: &[f64],
    bandwidth: Option<f64>,
) -> Result<KdeCurve, KdeError> {
    let (bw, degenerate) = match bandwidth {
        Some(b) if b > 0.0 && b.is_finite() => {
            if samples.len() < 2 {
                return Err(KdeError::TooFewSamples(samples.len()));
            }
            (b, false)
        }
        Some(b) => return Err(KdeError::InvalidBandwidth(b)),
        None => nrd0_bandwidth(samples)?,
    };
    let points = grid
        .iter()
        .map(|&x| (x, kde_density(samples, bw, x)))
        .collect();
    Ok(KdeCurve {
        points,
        bandwidth: bw,
        degenerate,
    })
}

/// Curve on the default 512-point grid spanning the samples plus four
/// bandwidths each side.
pub fn kde_export(samples: &[f64], bandwidth: Option<f64>) -> Result<KdeCurve, KdeError> {
    let (bw, degenerate) = match bandwidth {
        Some(b) if b > 0.0 && b.is_finite() => (b, false),
        Some(b) => return Err(KdeError::InvalidBandwidth(b)),
        None => nrd0_bandwidth(samples)?,
    };
    let grid = default_grid(samples, bw, 512, 4.0);
    let mut curve = kde_curve(samples, &grid, Some(bw))?;
    curve.degenerate = degenerate;
    Ok(curve)
}
