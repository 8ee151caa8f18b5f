//! Maximum-likelihood fits for the two components.

use crate::distributions::WeibullParams;
use crate::error::{Error, Result};

pub const TAU_BRACKET: (f64, f64) = (0.05, 50.0);
const NEWTON_TOL: f64 = 1e-10;
const NEWTON_MAX_ITER: usize = 200;

/// Log-data summary reused across the profile iterations.
struct LogSample {
    logs: Vec<f64>,
    mean: f64,
    max: f64,
}

impl LogSample {
    fn new(sample: &[f64]) -> Result<Self> {
        if sample.len() < 10 {
            return Err(Error::InsufficientData(format!(
                "Weibull fit needs at least 10 observations, got {}",
                sample.len()
            )));
        }
        if let Some(bad) = sample.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::Fit(format!("Weibull fit needs positive data, got {bad}")));
        }
        let logs: Vec<f64> = sample.iter().map(|x| x.ln()).collect();
        let mean = logs.iter().sum::<f64>() / logs.len() as f64;
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self { logs, mean, max })
    }

    /// Profile score `g(tau)` and its derivative. Weights are scaled by the
    /// largest observation so that `x^tau` never overflows.
    fn profile(&self, tau: f64) -> (f64, f64, f64) {
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for &l in &self.logs {
            let w = (tau * (l - self.max)).exp();
            s0 += w;
            s1 += w * l;
            s2 += w * l * l;
        }
        let m1 = s1 / s0;
        let var = (s2 / s0 - m1 * m1).max(0.0);
        let g = m1 - 1.0 / tau - self.mean;
        (g, var + 1.0 / (tau * tau), s0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeibullFit {
    pub params: WeibullParams,
    pub iterations: usize,
}

pub fn fit_weibull_mle(sample: &[f64]) -> Result<WeibullParams> {
    fit_weibull_mle_from(sample, 1.0).map(|f| f.params)
}

/// Profile-likelihood fit by safeguarded Newton on the bracket
/// `[0.05, 50]`, started at `tau0`.
pub fn fit_weibull_mle_from(sample: &[f64], tau0: f64) -> Result<WeibullFit> {
    let ls = LogSample::new(sample)?;
    let (mut lo, mut hi) = TAU_BRACKET;
    let g_lo = ls.profile(lo).0;
    let g_hi = ls.profile(hi).0;
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::Fit(format!(
            "Weibull shape equation has no sign change on [{lo}, {hi}] (g = {g_lo:.3e}, {g_hi:.3e})"
        )));
    }
    let mut tau = if tau0 > lo && tau0 < hi { tau0 } else { 1.0 };
    let mut iterations = 0;
    while iterations < NEWTON_MAX_ITER {
        iterations += 1;
        let (g, dg, _) = ls.profile(tau);
        if g == 0.0 {
            break;
        }
        if g < 0.0 {
            lo = tau;
        } else {
            hi = tau;
        }
        let mut next = tau - g / dg;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - tau).abs();
        tau = next;
        if step <= NEWTON_TOL * tau.max(1.0) || hi - lo <= NEWTON_TOL * tau.max(1.0) {
            break;
        }
    }
    let s0 = ls.profile(tau).2;
    let n = ls.logs.len() as f64;
    // lambda = n / sum x^tau, with sum x^tau = exp(tau * max) * s0
    let lambda = (n.ln() - tau * ls.max - s0.ln()).exp();
    Ok(WeibullFit {
        params: WeibullParams::new(lambda, tau)?,
        iterations,
    })
}

/// Weibull log-likelihood in the rate parameterization.
pub fn weibull_loglik(sample: &[f64], lambda: f64, tau: f64) -> f64 {
    let n = sample.len() as f64;
    let (mut sl, mut sp) = (0.0, 0.0);
    for &x in sample {
        sl += x.ln();
        sp += x.powf(tau);
    }
    n * lambda.ln() + n * tau.ln() + (tau - 1.0) * sl - lambda * sp
}

/// `(d/d lambda, d/d tau)` of `weibull_loglik`.
pub fn weibull_loglik_grad(sample: &[f64], lambda: f64, tau: f64) -> (f64, f64) {
    let n = sample.len() as f64;
    let (mut sl, mut sp, mut spl) = (0.0, 0.0, 0.0);
    for &x in sample {
        let l = x.ln();
        let p = x.powf(tau);
        sl += l;
        sp += p;
        spl += p * l;
    }
    (n / lambda - sp, n / tau + sl - lambda * spl)
}

/// Pareto tail index `n / sum log(x / m)`; `m` defaults to the sample minimum.
pub fn fit_pareto_mle(tail: &[f64], m: Option<f64>) -> Result<f64> {
    if tail.is_empty() {
        return Err(Error::InsufficientData("Pareto fit needs data".into()));
    }
    let m = m.unwrap_or_else(|| tail.iter().copied().fold(f64::INFINITY, f64::min));
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Fit(format!("Pareto threshold must be positive, got {m}")));
    }
    if let Some(bad) = tail.iter().find(|&&x| x < m) {
        return Err(Error::Fit(format!("value {bad} lies below the threshold {m}")));
    }
    let s: f64 = tail.iter().map(|x| (x / m).ln()).sum();
    if s <= 0.0 {
        return Err(Error::Fit("all tail values equal the threshold; the index is infinite".into()));
    }
    Ok(tail.len() as f64 / s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedParetoFit {
    pub alpha: f64,
    pub m: f64,
    pub upper: f64,
}

/// Pareto on `[m, M]` with `m = min`, `M = max`, and `alpha` solving
/// `n/alpha - sum log(x/m) + n r^alpha log r / (1 - r^alpha) = 0`, `r = m/M`.
pub fn fit_truncated_pareto_mle(tail: &[f64]) -> Result<TruncatedParetoFit> {
    if tail.len() < 2 {
        return Err(Error::InsufficientData("truncated Pareto fit needs at least 2 values".into()));
    }
    let m = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let upper = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(m > 0.0) || m == upper {
        return Err(Error::Fit("truncated Pareto fit needs distinct positive values".into()));
    }
    let n = tail.len() as f64;
    let s: f64 = tail.iter().map(|x| (x / m).ln()).sum();
    let lr = (m / upper).ln();
    let score = |a: f64| {
        let ra = (a * lr).exp();
        n / a - s - n * ra * lr / (a * lr).exp_m1()
    };
    // The score falls from n log(M/m)/2 - s at 0+ to -s at infinity.
    let (mut lo, mut hi) = (1e-6, 1.0);
    if score(lo) <= 0.0 {
        return Err(Error::Fit(
            "truncated Pareto score has no positive root; data look uniform on the log scale".into(),
        ));
    }
    while score(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Fit("truncated Pareto index diverges".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if score(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    Ok(TruncatedParetoFit {
        alpha: 0.5 * (lo + hi),
        m,
        upper,
    })
}
