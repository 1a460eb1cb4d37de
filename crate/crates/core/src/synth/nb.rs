//! Classifier pair with a known accuracy difference. Instances come from a
//! two-feature naive Bayes net G <- C -> F with P(c0) = 0.5,
//! P(f0|c0) = theta_f = 0.9 and P(g0|c0) = theta_g = theta_f + delta; the
//! competing classifiers each look at one feature, so their expected
//! accuracies are theta_f and theta_g and the expected accuracy difference
//! is delta.

use rand::Rng;

use super::classifiers::SingleFeatureBayes;
use super::harness::cross_validate_pair;
use super::{Dataset, SynthError};

/// Feature-given-class probability of the reference classifier.
pub const NB_THETA_F: f64 = 0.9;

/// Sample one data set from the naive Bayes net. Feature column 0 is F,
/// column 1 is G (values 0.0/1.0, 0.0 being the state aligned with class 0).
pub fn nb_pair_dataset<R: Rng + ?Sized>(
    delta: f64,
    n_instances: usize,
    rng: &mut R,
) -> Result<Dataset, SynthError> {
    let theta_g = NB_THETA_F + delta;
    if !(theta_g > 0.0 && theta_g < 1.0) {
        return Err(SynthError::InvalidDelta(delta));
    }
    if n_instances == 0 {
        return Err(SynthError::BadArgument("need at least one instance".into()));
    }
    let mut features = Vec::with_capacity(n_instances);
    let mut labels = Vec::with_capacity(n_instances);
    for _ in 0..n_instances {
        let c: u8 = u8::from(rng.random::<f64>() < 0.5);
        // state 0 has probability theta under class 0 and 1-theta under class 1
        let mut draw = |theta: f64| -> f64 {
            let p_state0 = if c == 0 { theta } else { 1.0 - theta };
            if rng.random::<f64>() < p_state0 {
                0.0
            } else {
                1.0
            }
        };
        let f = draw(NB_THETA_F);
        let g = draw(theta_g);
        features.push(vec![f, g]);
        labels.push(c);
    }
    Ok(Dataset { features, labels })
}

/// Sample a data set with true difference `delta` and run `m` runs of
/// paired `k`-fold cross-validation of the two single-feature classifiers.
/// Returns the per-fold differences `acc(C -> G) - acc(C -> F)`, whose
/// expectation is `delta`.
pub fn nb_pair_cv<R: Rng + ?Sized>(
    delta: f64,
    n_instances: usize,
    m: usize,
    k: usize,
    rng: &mut R,
) -> Result<Vec<f64>, SynthError> {
    let data = nb_pair_dataset(delta, n_instances, rng)?;
    cross_validate_pair(
        &data,
        &SingleFeatureBayes { feature: 1 },
        &SingleFeatureBayes { feature: 0 },
        m,
        k,
        rng,
    )
}
