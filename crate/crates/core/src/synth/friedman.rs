//! Benchmark regression functions turned into binary classification
//! problems: features are uniform on fixed ranges, the noisy response is
//! thresholded at its empirical median.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FriedmanFunction {
    F1,
    F2,
    F3,
}

impl FriedmanFunction {
    /// Number of informative base features (before any noise features).
    pub fn base_features(self) -> usize {
        match self {
            Self::F1 => 10,
            Self::F2 | Self::F3 => 4,
        }
    }

    /// Noise standard deviation used by the original benchmark.
    pub fn original_noise_sd(self) -> f64 {
        match self {
            Self::F1 => 1.0,
            Self::F2 => 125.0,
            Self::F3 => 0.1,
        }
    }
}

/// Noise-free response at a feature point.
pub fn raw_response(function: FriedmanFunction, x: &[f64]) -> f64 {
    match function {
        FriedmanFunction::F1 => {
            10.0 * (std::f64::consts::PI * x[0] * x[1]).sin()
                + 20.0 * (x[2] - 0.5) * (x[2] - 0.5)
                + 10.0 * x[3]
                + 5.0 * x[4]
        }
        FriedmanFunction::F2 => {
            let cross = x[1] * x[2] - 1.0 / (x[1] * x[3]);
            (x[0] * x[0] + cross * cross).sqrt()
        }
        FriedmanFunction::F3 => {
            let cross = x[1] * x[2] - 1.0 / (x[1] * x[3]);
            (cross / x[0]).atan()
        }
    }
}

/// Draw the base features, uniform on the function's stated ranges.
pub fn sample_features<R: Rng + ?Sized>(function: FriedmanFunction, rng: &mut R) -> Vec<f64> {
    match function {
        FriedmanFunction::F1 => (0..10).map(|_| rng.random_range(0.0..1.0)).collect(),
        FriedmanFunction::F2 | FriedmanFunction::F3 => vec![
            rng.random_range(0.0..100.0),
            rng.random_range(40.0 * std::f64::consts::PI..560.0 * std::f64::consts::PI),
            rng.random_range(0.0..1.0),
            rng.random_range(1.0..11.0),
        ],
    }
}

/// Empirical median of the noisy response over 10,000 fresh draws; the
/// label threshold that balances the two classes.
pub fn friedman_threshold<R: Rng + ?Sized>(
    function: FriedmanFunction,
    noise_sd: f64,
    rng: &mut R,
) -> f64 {
    const SAMPLES: usize = 10_000;
    let mut ys: Vec<f64> = (0..SAMPLES)
        .map(|_| {
            let x = sample_features(function, rng);
            let eps: f64 = rng.sample(StandardNormal);
            raw_response(function, &x) + noise_sd * eps
        })
        .collect();
    ys.sort_by(|a, b| a.partial_cmp(b).expect("finite responses"));
    0.5 * (ys[SAMPLES / 2 - 1] + ys[SAMPLES / 2])
}

/// One cell of the simulation grid: function, sample size, noise level,
/// number of appended standard-normal noise features, and the label
/// threshold for this (function, noise) combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriedmanSetting {
    pub function: FriedmanFunction,
    pub n: usize,
    pub noise_sd: f64,
    pub random_features: usize,
    pub threshold: f64,
}

impl FriedmanSetting {
    /// Build a setting, estimating the threshold from fresh draws.
    pub fn new<R: Rng + ?Sized>(
        function: FriedmanFunction,
        n: usize,
        noise_sd: f64,
        random_features: usize,
        rng: &mut R,
    ) -> Self {
        let threshold = friedman_threshold(function, noise_sd, rng);
        Self {
            function,
            n,
            noise_sd,
            random_features,
            threshold,
        }
    }

    /// The full 54-cell grid: three functions x three noise levels (half,
    /// original, double) x three sample sizes x {0, 20} noise features.
    /// Thresholds are estimated once per (function, noise) pair.
    pub fn grid<R: Rng + ?Sized>(rng: &mut R) -> Vec<FriedmanSetting> {
        let mut settings = Vec::with_capacity(54);
        for function in [
            FriedmanFunction::F1,
            FriedmanFunction::F2,
            FriedmanFunction::F3,
        ] {
            let base = function.original_noise_sd();
            for factor in [0.5, 1.0, 2.0] {
                let noise_sd = base * factor;
                let threshold = friedman_threshold(function, noise_sd, rng);
                for n in [30usize, 100, 1000] {
                    for random_features in [0usize, 20] {
                        settings.push(FriedmanSetting {
                            function,
                            n,
                            noise_sd,
                            random_features,
                            threshold,
                        });
                    }
                }
            }
        }
        settings
    }

    /// Generate `n` labelled instances from this setting.
    pub fn generate_n<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Dataset {
        let mut features = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let mut x = sample_features(self.function, rng);
            let eps: f64 = rng.sample(StandardNormal);
            let y = raw_response(self.function, &x) + self.noise_sd * eps;
            for _ in 0..self.random_features {
                x.push(rng.sample(StandardNormal));
            }
            labels.push(u8::from(y > self.threshold));
            features.push(x);
        }
        Dataset { features, labels }
    }
}

/// Generate a data set with the setting's own sample size.
pub fn friedman_generate<R: Rng + ?Sized>(setting: &FriedmanSetting, rng: &mut R) -> Dataset {
    setting.generate_n(setting.n, rng)
}
