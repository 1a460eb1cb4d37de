//! Minimal deterministic classifiers for the synthetic benchmarks: a
//! single-binary-feature Bayes classifier, pooled-covariance linear
//! discriminant analysis, and a greedy Gini decision tree.

use nalgebra::{Cholesky, DMatrix, DVector};

/// A trained model.
pub trait Predictor: Send + Sync {
    fn predict(&self, row: &[f64]) -> u8;
}

/// A training recipe; `fit` never fails, degenerate inputs fall back to
/// majority-class prediction.
pub trait Classifier: Send + Sync {
    fn fit(&self, features: &[Vec<f64>], labels: &[u8]) -> Box<dyn Predictor>;
}

struct ConstantPredictor(u8);

impl Predictor for ConstantPredictor {
    fn predict(&self, _row: &[f64]) -> u8 {
        self.0
    }
}

fn majority(labels: &[u8]) -> u8 {
    let ones = labels.iter().filter(|&&l| l == 1).count();
    // ties resolve to class 0
    u8::from(2 * ones > labels.len())
}

/// Bayes classifier over one binary feature (values 0/1): predicts the class
/// maximizing `prior(c) * P(feature | c)` with add-one smoothing on the
/// conditional.
#[derive(Debug, Clone, Copy)]
pub struct SingleFeatureBayes {
    pub feature: usize,
}

struct LookupPredictor {
    feature: usize,
    pred: [u8; 2],
}

impl Predictor for LookupPredictor {
    fn predict(&self, row: &[f64]) -> u8 {
        let v = usize::from(row[self.feature] > 0.5);
        self.pred[v]
    }
}

impl Classifier for SingleFeatureBayes {
    fn fit(&self, features: &[Vec<f64>], labels: &[u8]) -> Box<dyn Predictor> {
        let n = labels.len();
        let mut class_count = [0usize; 2];
        let mut value_count = [[0usize; 2]; 2]; // [class][feature value]
        for (row, &label) in features.iter().zip(labels) {
            let v = usize::from(row[self.feature] > 0.5);
            class_count[label as usize] += 1;
            value_count[label as usize][v] += 1;
        }
        let mut pred = [0u8; 2];
        for v in 0..2 {
            let score = |c: usize| {
                let prior = class_count[c] as f64 / n as f64;
                let cond = (value_count[c][v] + 1) as f64 / (class_count[c] + 2) as f64;
                prior * cond
            };
            pred[v] = u8::from(score(1) > score(0));
        }
        Box::new(LookupPredictor {
            feature: self.feature,
            pred,
        })
    }
}

/// Two-class linear discriminant with pooled covariance and a small ridge on
/// the diagonal.
#[derive(Debug, Clone, Copy, Default)]
pub struct Lda;

struct LdaPredictor {
    coef: [DVector<f64>; 2],
    intercept: [f64; 2],
}

impl Predictor for LdaPredictor {
    fn predict(&self, row: &[f64]) -> u8 {
        let x = DVector::from_row_slice(row);
        let s0 = self.coef[0].dot(&x) + self.intercept[0];
        let s1 = self.coef[1].dot(&x) + self.intercept[1];
        u8::from(s1 > s0)
    }
}

impl Classifier for Lda {
    fn fit(&self, features: &[Vec<f64>], labels: &[u8]) -> Box<dyn Predictor> {
        let n = labels.len();
        let n1 = labels.iter().filter(|&&l| l == 1).count();
        let n0 = n - n1;
        if n0 == 0 || n1 == 0 || n < 3 {
            return Box::new(ConstantPredictor(majority(labels)));
        }
        let d = features[0].len();

        let mut means = [DVector::zeros(d), DVector::zeros(d)];
        for (row, &label) in features.iter().zip(labels) {
            means[label as usize] += DVector::from_row_slice(row);
        }
        means[0] /= n0 as f64;
        means[1] /= n1 as f64;

        let mut pooled = DMatrix::zeros(d, d);
        for (row, &label) in features.iter().zip(labels) {
            let diff = DVector::from_row_slice(row) - &means[label as usize];
            pooled += &diff * diff.transpose();
        }
        pooled /= (n - 2) as f64;
        let trace: f64 = pooled.diagonal().iter().sum();
        let mut ridge = 1e-6 * trace / d as f64;
        if ridge == 0.0 {
            ridge = 1e-6;
        }

        // escalate the ridge until the pooled covariance factorizes
        let mut chol: Option<Cholesky<f64, nalgebra::Dyn>> = None;
        for _ in 0..8 {
            let mut c = pooled.clone();
            for i in 0..d {
                c[(i, i)] += ridge;
            }
            if let Some(f) = Cholesky::new(c) {
                chol = Some(f);
                break;
            }
            ridge *= 10.0;
        }
        let Some(chol) = chol else {
            return Box::new(ConstantPredictor(majority(labels)));
        };

        let priors = [n0 as f64 / n as f64, n1 as f64 / n as f64];
        let coef = [chol.solve(&means[0]), chol.solve(&means[1])];
        let intercept = [
            -0.5 * means[0].dot(&coef[0]) + priors[0].ln(),
            -0.5 * means[1].dot(&coef[1]) + priors[1].ln(),
        ];
        Box::new(LdaPredictor { coef, intercept })
    }
}

/// Greedy binary classification tree: axis-aligned splits chosen by Gini
/// impurity, with a minimum leaf size and a depth cap.
#[derive(Debug, Clone, Copy)]
pub struct CartTree {
    pub min_leaf: usize,
    pub max_depth: usize,
}

impl Default for CartTree {
    fn default() -> Self {
        Self {
            min_leaf: 5,
            max_depth: 10,
        }
    }
}

enum Node {
    Leaf(u8),
    Split {
        feature: usize,
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
}

struct TreePredictor {
    root: Node,
}

impl Predictor for TreePredictor {
    fn predict(&self, row: &[f64]) -> u8 {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf(label) => return *label,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }
}

fn gini_sum(pos: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = pos as f64 / total as f64;
    total as f64 * 2.0 * p * (1.0 - p)
}

fn build_node(
    features: &[Vec<f64>],
    labels: &[u8],
    idx: &[usize],
    depth: usize,
    params: &CartTree,
) -> Node {
    let pos = idx.iter().filter(|&&i| labels[i] == 1).count();
    let majority_label = u8::from(2 * pos > idx.len());
    if pos == 0 || pos == idx.len() || depth >= params.max_depth || idx.len() < 2 * params.min_leaf
    {
        return Node::Leaf(majority_label);
    }

    let d = features[0].len();
    let mut best: Option<(f64, usize, f64)> = None; // (impurity, feature, threshold)
    let mut sortable: Vec<usize> = idx.to_vec();
    #[allow(clippy::needless_range_loop)] // f is a column index into row-major features
    for f in 0..d {
        sortable.sort_by(|&a, &b| {
            features[a][f]
                .partial_cmp(&features[b][f])
                .expect("finite features")
        });
        let mut left_pos = 0usize;
        for s in 1..sortable.len() {
            if labels[sortable[s - 1]] == 1 {
                left_pos += 1;
            }
            if s < params.min_leaf || sortable.len() - s < params.min_leaf {
                continue;
            }
            let (lo, hi) = (features[sortable[s - 1]][f], features[sortable[s]][f]);
            if lo == hi {
                continue;
            }
            let impurity = gini_sum(left_pos, s) + gini_sum(pos - left_pos, sortable.len() - s);
            if best.is_none_or(|(b, _, _)| impurity < b) {
                best = Some((impurity, f, 0.5 * (lo + hi)));
            }
        }
    }

    let Some((_, feature, threshold)) = best else {
        return Node::Leaf(majority_label);
    };
    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = idx
        .iter()
        .partition(|&&i| features[i][feature] <= threshold);
    let left = build_node(features, labels, &left_idx, depth + 1, params);
    let right = build_node(features, labels, &right_idx, depth + 1, params);
    Node::Split {
        feature,
        threshold,
        left: Box::new(left),
        right: Box::new(right),
    }
}

impl Classifier for CartTree {
    fn fit(&self, features: &[Vec<f64>], labels: &[u8]) -> Box<dyn Predictor> {
        if labels.is_empty() {
            return Box::new(ConstantPredictor(0));
        }
        let idx: Vec<usize> = (0..labels.len()).collect();
        let root = build_node(features, labels, &idx, 0, self);
        Box::new(TreePredictor { root })
    }
}
