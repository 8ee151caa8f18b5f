//! Step 4: simulation envelopes for sample quantiles under the fitted model.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{MixtureSpec, WeibullParams};
use crate::error::{invalid, Error, Result};
use crate::gof::{ks_test, quantile_sorted, KsResult};
use crate::mc::replicate_rng;

/// Quantile levels 10%, 20%, ..., 90%.
pub fn decile_levels() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum FittedModel {
    Weibull(WeibullParams),
    Mixture(MixtureSpec),
}

impl FittedModel {
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            FittedModel::Weibull(w) => 1.0 - w.survival(x),
            FittedModel::Mixture(s) => s.cdf(x),
        }
    }

    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            FittedModel::Weibull(w) => w.sample(rng),
            FittedModel::Mixture(s) => s.sample_one(rng),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileCi {
    pub level: f64,
    pub lower: f64,
    pub estimate: f64,
    pub upper: f64,
}

impl QuantileCi {
    pub fn covers(&self) -> bool {
        self.lower <= self.estimate && self.estimate <= self.upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Validation {
    pub quantile_cis: Vec<QuantileCi>,
    pub mixture_ks: KsResult,
    /// A single simulation gives `lower == upper`.
    pub degenerate_ci: bool,
}

/// Simulate `n_sims` samples of the data's size from `model`; per level
/// report the smallest and largest simulated quantile around the data
/// quantile. Also KS-test the data against the model CDF.
pub fn validate_model(
    model: &FittedModel,
    data: &[f64],
    n_sims: usize,
    levels: &[f64],
    seed: u64,
) -> Result<Validation> {
    if data.is_empty() {
        return Err(Error::InsufficientData("validation needs data".into()));
    }
    if n_sims == 0 {
        return Err(invalid("validation needs at least one simulation"));
    }
    if levels.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(invalid("quantile levels must lie in [0, 1]"));
    }
    let n = data.len();
    let sims: Vec<Vec<f64>> = (0..n_sims as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = replicate_rng(seed, j);
            let mut xs: Vec<f64> = (0..n).map(|_| model.sample_one(&mut rng)).collect();
            xs.sort_by(f64::total_cmp);
            levels.iter().map(|&p| quantile_sorted(&xs, p)).collect()
        })
        .collect();
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let quantile_cis = levels
        .iter()
        .enumerate()
        .map(|(i, &p)| QuantileCi {
            level: p,
            lower: sims.iter().map(|q| q[i]).fold(f64::INFINITY, f64::min),
            estimate: quantile_sorted(&sorted, p),
            upper: sims.iter().map(|q| q[i]).fold(f64::NEG_INFINITY, f64::max),
        })
        .collect();
    Ok(Validation {
        quantile_cis,
        mixture_ks: ks_test(data, &|x: f64| model.cdf(x))?,
        degenerate_ci: n_sims == 1,
    })
}
