//! Step 1: split a sample into a Weibull bulk and an impurity made of the
//! largest order statistics.

use serde::{Deserialize, Serialize};

use super::mle::fit_weibull_mle_from;
use crate::error::{invalid, Error, Result};
use crate::gof::ks_test;
use crate::sequences::{seq_eval, LogPolySeq};

pub const MIN_SAMPLE: usize = 100;
/// An interior peak must beat both edge p-values by this much.
pub const PEAK_PROMINENCE: f64 = 0.1;
/// The untrimmed fit must be rejected at this level before an impurity is declared.
pub const BASELINE_LEVEL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsGrid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Default for EpsGrid {
    fn default() -> Self {
        Self {
            lo: 0.0,
            hi: 0.5,
            step: 0.001,
        }
    }
}

impl EpsGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !(self.lo >= 0.0) || self.hi < self.lo || self.hi >= 1.0 {
            return Err(invalid(format!("invalid eps grid {self:?}")));
        }
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| self.lo + i as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationResult {
    pub eps_hat: f64,
    pub pvalue_curve: Vec<(f64, f64)>,
    /// Number of upper order statistics assigned to the impurity.
    pub split_index: usize,
    pub impurity_detected: bool,
    /// Smallest observation assigned to the impurity, if any.
    pub threshold: Option<f64>,
}

/// For each grid value `eps`, fit a Weibull law to the lower `n - floor(n eps)`
/// order statistics and record the KS p-value of that fit. The estimate is the
/// first maximizer of the curve.
///
/// An impurity is declared when the untrimmed fit is rejected at the 5% level
/// and the peak exceeds both edge values by at least 0.1.
pub fn separate_components(sample: &[f64], grid: &EpsGrid) -> Result<SeparationResult> {
    if sample.len() < MIN_SAMPLE {
        return Err(Error::InsufficientData(format!(
            "separation needs at least {MIN_SAMPLE} observations, got {}",
            sample.len()
        )));
    }
    let eps = grid.points()?;
    if eps.is_empty() {
        return Err(invalid("eps grid is empty"));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut tau = 1.0;
    let mut curve = Vec::with_capacity(eps.len());
    for &e in &eps {
        let keep = n - (n as f64 * e).floor() as usize;
        let lower = &sorted[..keep];
        let p = match fit_weibull_mle_from(lower, tau) {
            Ok(fit) => {
                tau = fit.params.tau();
                let w = fit.params;
                ks_test(lower, &|x: f64| 1.0 - w.survival(x))?.pvalue
            }
            Err(_) => 0.0,
        };
        curve.push((e, p));
    }
    let (best, &(eps_hat, peak)) = curve
        .iter()
        .enumerate()
        .fold(None, |acc: Option<(usize, &(f64, f64))>, (i, c)| match acc {
            Some((_, b)) if b.1 >= c.1 => acc,
            _ => Some((i, c)),
        })
        .expect("grid is nonempty");
    let edge = curve[0].1.max(curve[curve.len() - 1].1);
    let interior = best != 0 && best != curve.len() - 1;
    let impurity_detected =
        interior && curve[0].1 < BASELINE_LEVEL && peak - edge >= PEAK_PROMINENCE;
    let split_index = (n as f64 * eps_hat).floor() as usize;
    Ok(SeparationResult {
        eps_hat,
        pvalue_curve: curve,
        split_index,
        impurity_detected,
        threshold: (split_index > 0).then(|| sorted[n - split_index]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum EpsPathMode {
    /// Share of the first `n` observations that the full-sample separation
    /// assigned to the impurity.
    #[default]
    Labeled,
    /// Separate every `ceil(N/50)`-th prefix again and interpolate linearly.
    Reseparate,
}

/// `(n, eps_hat_n)` for the prefixes of a series in time order.
pub fn eps_path(
    series: &[f64],
    full: &SeparationResult,
    grid: &EpsGrid,
    mode: EpsPathMode,
) -> Result<Vec<(u64, f64)>> {
    let big_n = series.len();
    match mode {
        EpsPathMode::Labeled => {
            let mut out = Vec::with_capacity(big_n);
            let mut count = 0usize;
            for (i, &x) in series.iter().enumerate() {
                if full.threshold.is_some_and(|t| x >= t) {
                    count += 1;
                }
                out.push(((i + 1) as u64, count as f64 / (i + 1) as f64));
            }
            Ok(out)
        }
        EpsPathMode::Reseparate => {
            let stride = big_n.div_ceil(50).max(1);
            let mut knots: Vec<(usize, f64)> = Vec::new();
            let mut len = MIN_SAMPLE.max(stride);
            while len <= big_n {
                knots.push((len, separate_components(&series[..len], grid)?.eps_hat));
                len += stride;
            }
            if knots.last().map(|k| k.0) != Some(big_n) && big_n >= MIN_SAMPLE {
                knots.push((big_n, full.eps_hat));
            }
            if knots.is_empty() {
                return Err(Error::InsufficientData("series too short for prefix separation".into()));
            }
            let mut out = Vec::with_capacity(big_n);
            for n in knots[0].0..=big_n {
                let j = knots.partition_point(|k| k.0 < n);
                let v = if j == 0 || knots[j].0 == n {
                    knots[j.min(knots.len() - 1)].1
                } else {
                    let (a, b) = (knots[j - 1], knots[j]);
                    a.1 + (b.1 - a.1) * (n - a.0) as f64 / (b.0 - a.0) as f64
                };
                out.push((n as u64, v));
            }
            Ok(out)
        }
    }
}

/// `log k_n / (k_n eps_n)^beta` wherever `eps_n > 0` and `n >= 2`.
pub fn beta_diagnostic(k: &LogPolySeq, path: &[(u64, f64)], beta: f64) -> Vec<(u64, f64)> {
    path.iter()
        .filter(|&&(n, e)| n >= 2 && e > 0.0)
        .filter_map(|&(n, e)| {
            let kn = seq_eval(k, n).ok()?;
            Some((n, kn.ln() / (kn * e).powf(beta)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = EpsGrid::default().points().unwrap();
        assert_eq!(g.len(), 501);
        assert!((g[500] - 0.5).abs() < 1e-12);
        assert!(EpsGrid { lo: 0.0, hi: 0.5, step: 0.0 }.points().is_err());
    }

    #[test]
    fn too_small_sample() {
        assert!(separate_components(&[1.0; 50], &EpsGrid::default()).is_err());
    }

    #[test]
    fn beta_ratio_closed_forms() {
        let k: LogPolySeq = "n".parse().unwrap();
        let path: Vec<(u64, f64)> = [100u64, 1000, 10000].iter().map(|&n| (n, 0.05)).collect();
        let r = beta_diagnostic(&k, &path, 1.0);
        assert!(r.windows(2).all(|w| w[1].1 < w[0].1));
        assert!((r[0].1 - 100f64.ln() / 5.0).abs() < 1e-12);
        let path: Vec<(u64, f64)> = [100u64, 10_000, 1_000_000]
            .iter()
            .map(|&n| (n, (n as f64).ln().powi(2) / n as f64))
            .collect();
        let r = beta_diagnostic(&k, &path, 0.45);
        for &(n, v) in &r {
            assert!((v - (n as f64).ln().powf(0.1)).abs() < 1e-10);
        }
        assert!(r.windows(2).all(|w| w[1].1 > w[0].1));
    }
}
