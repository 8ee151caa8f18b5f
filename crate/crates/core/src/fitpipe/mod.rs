//! Empirical pipeline for return series: component separation, truncation
//! test, maximum likelihood, and simulation-based validation.

mod aban;
mod mle;
mod separation;
mod validate;

pub use aban::{aban_pvalue, aban_truncation_test, max_share_cdf, AbanResult, MIN_EXCEEDANCES};
pub use mle::{
    fit_pareto_mle, fit_truncated_pareto_mle, fit_weibull_mle, fit_weibull_mle_from,
    weibull_loglik, weibull_loglik_grad, TruncatedParetoFit, WeibullFit, TAU_BRACKET,
};
pub use separation::{
    beta_diagnostic, eps_path, separate_components, EpsGrid, EpsPathMode, SeparationResult,
    BASELINE_LEVEL, MIN_SAMPLE, PEAK_PROMINENCE,
};
pub use validate::{decile_levels, validate_model, FittedModel, QuantileCi, Validation};

use serde::{Deserialize, Serialize};

use crate::distributions::{MixtureSpec, SlowVaryForm, TailParams, TruncationSpec};
use crate::error::{domain, Error, Result};
use crate::gof::chi2_independence;
use crate::sequences::LogPolySeq;

/// Positive log returns and absolute values of negative ones; zero returns
/// are dropped.
pub fn log_returns(prices: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if prices.len() < 2 {
        return Err(Error::InsufficientData("need at least two prices".into()));
    }
    if let Some((i, p)) = prices.iter().enumerate().find(|(_, p)| !(p.is_finite() && **p > 0.0)) {
        return Err(domain(format!("price {p} at index {i} is not positive")));
    }
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for w in prices.windows(2) {
        let r = (w[1] / w[0]).ln();
        if r > 0.0 {
            pos.push(r);
        } else if r < 0.0 {
            neg.push(-r);
        }
    }
    Ok((pos, neg))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub grid: EpsGrid,
    pub n_sims: usize,
    pub levels: Vec<f64>,
    pub seed: u64,
    pub beta: f64,
    pub eps_path_mode: EpsPathMode,
    /// Truncation is adopted when the truncation test p-value falls below this.
    pub truncation_level: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            grid: EpsGrid::default(),
            n_sims: 100,
            levels: decile_levels(),
            seed: 0,
            beta: 0.45,
            eps_path_mode: EpsPathMode::Labeled,
            truncation_level: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub n: usize,
    pub eps_hat: f64,
    pub split_index: usize,
    pub impurity_detected: bool,
    pub lambda_hat: f64,
    pub tau_hat: f64,
    pub alpha_hat: Option<f64>,
    pub m_hat: Option<f64>,
    pub tau_over_alpha: Option<f64>,
    pub truncated: bool,
    pub truncation_level: Option<f64>,
    pub aban: Option<AbanResult>,
    pub aban_pvalue: Option<f64>,
    pub mixture_ks_pvalue: f64,
    pub chi2_pvalue: Option<f64>,
    pub quantile_cis: Vec<QuantileCi>,
    pub degenerate_ci: bool,
    pub beta: f64,
    pub beta_diagnostic: Vec<(u64, f64)>,
    pub pvalue_curve: Vec<(f64, f64)>,
    pub notes: Vec<String>,
}

const KS_CAVEAT: &str = "KS p-values use parameters estimated from the same data and are optimistic";

/// Runs all four steps on one sign of a return series, given in time order.
pub fn run_pipeline(series: &[f64], opts: &PipelineOptions) -> Result<FitReport> {
    let mut notes = vec![KS_CAVEAT.to_string()];
    let sep = separate_components(series, &opts.grid)?;
    let mut sorted = series.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let split = sep.split_index;
    if !sep.impurity_detected {
        notes.push("no impurity detected".into());
    }

    let aban = if split >= MIN_EXCEEDANCES && split < n {
        match aban_truncation_test(&sorted[n - split - 1..]) {
            Ok(a) => Some(a),
            Err(e) => {
                notes.push(format!("truncation test skipped: {e}"));
                None
            }
        }
    } else {
        notes.push(format!("truncation test skipped: {split} exceedances"));
        None
    };
    let truncated = aban.is_some_and(|a| a.pvalue < opts.truncation_level);

    let weibull = fit_weibull_mle(&sorted[..n - split])?;
    let tail = &sorted[n - split..];
    let (alpha_hat, m_hat, level) = if split >= 2 {
        if truncated {
            match fit_truncated_pareto_mle(tail) {
                Ok(f) => (Some(f.alpha), Some(f.m), Some(f.upper)),
                Err(e) => {
                    notes.push(format!("truncated tail fit failed: {e}"));
                    (None, None, None)
                }
            }
        } else {
            match fit_pareto_mle(tail, None) {
                Ok(a) => (Some(a), Some(tail[0]), None),
                Err(e) => {
                    notes.push(format!("tail fit failed: {e}"));
                    (None, None, None)
                }
            }
        }
    } else {
        (None, None, None)
    };

    let model = match (alpha_hat, m_hat) {
        (Some(a), Some(m)) if sep.eps_hat > 0.0 => {
            let tp = TailParams::with_left_endpoint(a, m, SlowVaryForm::Const)?;
            let trunc = match level {
                Some(l) if l > m => TruncationSpec::at(l),
                _ => TruncationSpec::disabled(),
            };
            FittedModel::Mixture(MixtureSpec::new(sep.eps_hat, weibull, tp, trunc)?)
        }
        _ => FittedModel::Weibull(weibull),
    };
    let validation = validate_model(&model, series, opts.n_sims, &opts.levels, opts.seed)?;
    if validation.degenerate_ci {
        notes.push("a single simulation gives degenerate intervals".into());
    }

    let chi2_pvalue = match chi2_independence(series, 1, 4) {
        Ok(p) => Some(p),
        Err(e) => {
            notes.push(format!("independence test skipped: {e}"));
            None
        }
    };

    let path = eps_path(series, &sep, &opts.grid, opts.eps_path_mode)?;
    let beta_diag = beta_diagnostic(&LogPolySeq::identity(), &path, opts.beta);

    Ok(FitReport {
        n,
        eps_hat: sep.eps_hat,
        split_index: split,
        impurity_detected: sep.impurity_detected,
        lambda_hat: weibull.lambda(),
        tau_hat: weibull.tau(),
        alpha_hat,
        m_hat,
        tau_over_alpha: alpha_hat.map(|a| weibull.tau() / a),
        truncated,
        truncation_level: level,
        aban_pvalue: aban.map(|a| a.pvalue),
        aban,
        mixture_ks_pvalue: validation.mixture_ks.pvalue,
        chi2_pvalue,
        quantile_cis: validation.quantile_cis,
        degenerate_ci: validation.degenerate_ci,
        beta: opts.beta,
        beta_diagnostic: beta_diag,
        pvalue_curve: sep.pvalue_curve,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_return_examples() {
        let e = std::f64::consts::E;
        assert_eq!(log_returns(&[1.0, e]).unwrap(), (vec![1.0], vec![]));
        assert_eq!(log_returns(&[e, 1.0]).unwrap(), (vec![], vec![1.0]));
        let (p, n) = log_returns(&[1.0, 2.0, 1.0]).unwrap();
        assert_eq!((p, n), (vec![2f64.ln()], vec![2f64.ln()]));
        assert_eq!(log_returns(&[1.0, 1.0, 1.0]).unwrap(), (vec![], vec![]));
        assert!(log_returns(&[1.0, 0.0]).is_err());
        assert!(log_returns(&[1.0]).is_err());
    }
}
