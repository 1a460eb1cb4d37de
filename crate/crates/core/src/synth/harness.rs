//! Paired cross-validation of two classifiers and the ground-truth
//! difference estimator for synthetic settings.

use rand::seq::SliceRandom;
use rand::Rng;

use super::classifiers::Classifier;
use super::friedman::FriedmanSetting;
use super::{Dataset, SynthError};
use crate::util;

/// One run's fold partition: shuffled indices split into `k` folds, with the
/// remainder instances going to the first folds. Every index lands in
/// exactly one fold.
pub fn kfold_indices<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let size = base + usize::from(f < extra);
        folds.push(idx[start..start + size].to_vec());
        start += size;
    }
    folds
}

/// Fraction of correct predictions.
pub fn accuracy(predictions: &[u8], labels: &[u8]) -> f64 {
    let correct = predictions
        .iter()
        .zip(labels)
        .filter(|(p, l)| p == l)
        .count();
    correct as f64 / labels.len() as f64
}

/// `runs` independent shuffles of `folds`-fold cross-validation with both
/// classifiers trained and tested on identical folds; returns the per-fold
/// accuracy differences `acc(a) - acc(b)` in run-major order.
pub fn cross_validate_pair<R: Rng + ?Sized>(
    data: &Dataset,
    a: &dyn Classifier,
    b: &dyn Classifier,
    runs: usize,
    folds: usize,
    rng: &mut R,
) -> Result<Vec<f64>, SynthError> {
    if runs == 0 || folds < 2 {
        return Err(SynthError::BadArgument(
            "need at least one run and two folds".into(),
        ));
    }
    if data.len() < 2 * folds {
        return Err(SynthError::TooFewInstances {
            got: data.len(),
            need: 2 * folds,
            folds,
        });
    }
    let n = data.len();
    let mut diffs = Vec::with_capacity(runs * folds);
    for _ in 0..runs {
        let partition = kfold_indices(n, folds, rng);
        for test_idx in &partition {
            let in_test = {
                let mut mask = vec![false; n];
                for &i in test_idx {
                    mask[i] = true;
                }
                mask
            };
            let mut train_x = Vec::with_capacity(n - test_idx.len());
            let mut train_y = Vec::with_capacity(n - test_idx.len());
            for (i, &held_out) in in_test.iter().enumerate() {
                if !held_out {
                    train_x.push(data.features[i].clone());
                    train_y.push(data.labels[i]);
                }
            }
            let model_a = a.fit(&train_x, &train_y);
            let model_b = b.fit(&train_x, &train_y);
            let mut pred_a = Vec::with_capacity(test_idx.len());
            let mut pred_b = Vec::with_capacity(test_idx.len());
            let mut truth = Vec::with_capacity(test_idx.len());
            for &i in test_idx {
                pred_a.push(model_a.predict(&data.features[i]));
                pred_b.push(model_b.predict(&data.features[i]));
                truth.push(data.labels[i]);
            }
            diffs.push(accuracy(&pred_a, &truth) - accuracy(&pred_b, &truth));
        }
    }
    Ok(diffs)
}

/// Standard error of a mean: `s / sqrt(reps)`.
pub fn standard_error(s: f64, reps: usize) -> f64 {
    s / (reps as f64).sqrt()
}

/// Ground-truth accuracy difference of two classifiers in a synthetic
/// setting: `reps` times, train both on a fresh training set and score them
/// on a fresh large test set. Returns the mean difference `acc(a) - acc(b)`
/// and its standard error.
pub fn true_delta<R: Rng + ?Sized>(
    setting: &FriedmanSetting,
    a: &dyn Classifier,
    b: &dyn Classifier,
    reps: usize,
    test_size: usize,
    rng: &mut R,
) -> Result<(f64, f64), SynthError> {
    if reps < 2 {
        return Err(SynthError::BadArgument(
            "need at least two repetitions".into(),
        ));
    }
    let mut diffs = Vec::with_capacity(reps);
    for _ in 0..reps {
        let train = setting.generate_n(setting.n, rng);
        let test = setting.generate_n(test_size, rng);
        let model_a = a.fit(&train.features, &train.labels);
        let model_b = b.fit(&train.features, &train.labels);
        let pred_a: Vec<u8> = test.features.iter().map(|r| model_a.predict(r)).collect();
        let pred_b: Vec<u8> = test.features.iter().map(|r| model_b.predict(r)).collect();
        diffs.push(accuracy(&pred_a, &test.labels) - accuracy(&pred_b, &test.labels));
    }
    let mean = util::mean(&diffs);
    let sem = standard_error(util::sample_sd(&diffs), reps);
    Ok((mean, sem))
}
