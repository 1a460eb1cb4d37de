//! Synthetic-experiment machinery: populations of true differences, a
//! classifier pair with a known accuracy gap, benchmark-function data sets,
//! minimal classifiers, and the paired cross-validation harness.

mod classifiers;
mod friedman;
mod harness;
mod nb;

pub use classifiers::{CartTree, Classifier, Lda, Predictor, SingleFeatureBayes};
pub use friedman::{
    friedman_generate, friedman_threshold, raw_response, sample_features, FriedmanFunction,
    FriedmanSetting,
};
pub use harness::{accuracy, cross_validate_pair, kfold_indices, standard_error, true_delta};
pub use nb::{nb_pair_cv, nb_pair_dataset, NB_THETA_F};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("invalid population: {0}")]
    InvalidPopulation(String),
    #[error("delta {0} puts theta_g = {NB_THETA_F} + delta outside (0, 1)")]
    InvalidDelta(f64),
    #[error("explicit population holds {got} values but {want} were requested")]
    ExplicitLength { got: usize, want: usize },
    #[error("need at least {need} instances for {folds} folds, got {got}")]
    TooFewInstances {
        got: usize,
        need: usize,
        folds: usize,
    },
    #[error("invalid argument: {0}")]
    BadArgument(String),
}

/// A labelled binary-classification sample: one feature row per instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Population from which the per-data-set true differences are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DeltaPopulation {
    Cauchy {
        location: f64,
        scale: f64,
    },
    BimodalGaussian {
        mu1: f64,
        mu2: f64,
        sigma: f64,
        pi1: f64,
    },
    Explicit(Vec<f64>),
}

impl DeltaPopulation {
    /// Null population of the rope simulations: median zero, scale one sixth
    /// of the rope length (so about 80% of the mass sits inside the rope).
    pub fn null_cauchy(rope: f64) -> Self {
        Self::Cauchy {
            location: 0.0,
            scale: 2.0 * rope / 6.0,
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        match self {
            Self::Cauchy { scale, .. } => {
                if !(*scale > 0.0 && scale.is_finite()) {
                    return Err(SynthError::InvalidPopulation(format!(
                        "Cauchy scale must be positive, got {scale}"
                    )));
                }
            }
            Self::BimodalGaussian { sigma, pi1, .. } => {
                if !(*sigma > 0.0 && sigma.is_finite()) {
                    return Err(SynthError::InvalidPopulation(format!(
                        "mixture sigma must be positive, got {sigma}"
                    )));
                }
                if !(0.0..=1.0).contains(pi1) {
                    return Err(SynthError::InvalidPopulation(format!(
                        "mixture weight must lie in [0, 1], got {pi1}"
                    )));
                }
            }
            Self::Explicit(values) => {
                if values.is_empty() {
                    return Err(SynthError::InvalidPopulation(
                        "explicit list is empty".into(),
                    ));
                }
                if values.iter().any(|v| !v.is_finite() || v.abs() > 1.0) {
                    return Err(SynthError::InvalidPopulation(
                        "explicit values must be finite and lie in [-1, 1]".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Cauchy { location, scale } => {
                dist::cauchy_sample(*location, *scale, rng).expect("validated Cauchy")
            }
            Self::BimodalGaussian {
                mu1,
                mu2,
                sigma,
                pi1,
            } => {
                let mu = if rng.random::<f64>() < *pi1 {
                    *mu1
                } else {
                    *mu2
                };
                let z: f64 = rng.sample(rand_distr::StandardNormal);
                mu + sigma * z
            }
            Self::Explicit(_) => unreachable!("explicit populations are returned verbatim"),
        }
    }
}

/// Draw `q` true differences. Random populations are resampled until the
/// draw lands inside `(-1, 1)` (accuracy differences cannot leave it);
/// an explicit list is returned verbatim and must have length `q`.
pub fn sample_deltas<R: Rng + ?Sized>(
    pop: &DeltaPopulation,
    q: usize,
    rng: &mut R,
) -> Result<Vec<f64>, SynthError> {
    sample_deltas_within(pop, q, -1.0, 1.0, rng)
}

/// Like [`sample_deltas`] but with a caller-chosen truncation interval; the
/// classifier-pair generator needs draws that keep theta_g inside (0, 1).
pub fn sample_deltas_within<R: Rng + ?Sized>(
    pop: &DeltaPopulation,
    q: usize,
    lo: f64,
    hi: f64,
    rng: &mut R,
) -> Result<Vec<f64>, SynthError> {
    pop.validate()?;
    if let DeltaPopulation::Explicit(values) = pop {
        if values.len() != q {
            return Err(SynthError::ExplicitLength {
                got: values.len(),
                want: q,
            });
        }
        return Ok(values.clone());
    }
    let mut out = Vec::with_capacity(q);
    while out.len() < q {
        let d = pop.sample_one(rng);
        if d > lo && d < hi {
            out.push(d);
        }
    }
    Ok(out)
}
