//! The machine-readable JSON report emitted on stdout.

use hiertest::baselines::{PosteriorTriple, TestResult};
use hiertest::inference::{RopeReport, ShrinkageResult};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Configuration echo so a report is self-describing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub rope: f64,
    pub rho: f64,
    pub runs: usize,
    pub folds: usize,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chains: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warmup: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub draws_per_chain: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_upper_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma0_upper_factor: Option<f64>,
}

/// Observed per-data-set summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRow {
    pub name: String,
    pub mean: f64,
    pub sd: f64,
}

/// Per-data-set correlated t-test; degenerate rows carry the error text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetTest {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<TestResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baselines {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signed_rank: Option<TestResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signed_rank_error: Option<String>,
    pub correlated_t: Vec<DatasetTest>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub params: Vec<String>,
    pub r_hat: Vec<f64>,
    pub ess: Vec<f64>,
    pub accept_rates: Vec<f64>,
    pub converged: bool,
}

/// Top-level report. All probability triples sum to one; every field is
/// reproducible given (input, config, seed). Wall-clock time goes to stderr
/// by default and into `runtime_seconds` only on request, keeping the JSON
/// byte-stable across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub config: ConfigEcho,
    pub datasets: Vec<DatasetRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rope: Option<RopeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shrinkage: Option<ShrinkageResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baselines: Option<Baselines>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlated_t: Option<TestResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bayes_t: Option<PosteriorTriple>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
