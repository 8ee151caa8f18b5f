//! One-sample Kolmogorov-Smirnov test and a chi-squared serial independence test.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, Error, Result};

/// A distribution function, possibly with jumps.
pub trait Cdf {
    fn cdf(&self, x: f64) -> f64;

    /// Left limit at `x`; equal to `cdf` for continuous laws.
    fn cdf_left(&self, x: f64) -> f64 {
        self.cdf(x)
    }

    /// Jump points.
    fn atoms(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl<F: Fn(f64) -> f64> Cdf for F {
    fn cdf(&self, x: f64) -> f64 {
        self(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub pvalue: f64,
    pub n: usize,
    /// Set when the reference has atoms; the asymptotic p-value is then
    /// conservative.
    pub conservative: bool,
}

const SERIES_TOL: f64 = 1e-12;

/// Kolmogorov distribution `K(x) = P(sup |B(t)| <= x)`.
pub fn kolmogorov_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        let mut sum = 0.0;
        let mut k = 1.0;
        loop {
            let term = (-2.0 * k * k * x * x).exp();
            sum += if (k as u64) % 2 == 1 { term } else { -term };
            if term < SERIES_TOL {
                break;
            }
            k += 1.0;
        }
        (1.0 - 2.0 * sum).clamp(0.0, 1.0)
    } else {
        // Jacobi theta form; converges fast for small x.
        let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * x * x);
        let mut sum = 0.0;
        let mut k = 1.0;
        loop {
            let j = 2.0 * k - 1.0;
            let term = (-j * j * c).exp();
            sum += term;
            if term < SERIES_TOL {
                break;
            }
            k += 1.0;
        }
        ((2.0 * std::f64::consts::PI).sqrt() / x * sum).clamp(0.0, 1.0)
    }
}

/// `sup_x |ECDF(x) - F(x)|` and the asymptotic p-value `1 - K(sqrt(n) D)`.
pub fn ks_test<C: Cdf + ?Sized>(sample: &[f64], cdf: &C) -> Result<KsResult> {
    if sample.is_empty() {
        return Err(Error::InsufficientData("KS test needs a nonempty sample".into()));
    }
    if sample.iter().any(|x| x.is_nan()) {
        return Err(invalid("KS sample contains NaN"));
    }
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    let nf = n as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < n {
        let x = xs[i];
        let mut j = i;
        while j < n && xs[j] == x {
            j += 1;
        }
        let below = i as f64 / nf;
        let upto = j as f64 / nf;
        d = d.max((upto - cdf.cdf(x)).abs());
        d = d.max((below - cdf.cdf_left(x)).abs());
        i = j;
    }
    let atoms = cdf.atoms();
    for &a in &atoms {
        let below = xs.partition_point(|&v| v < a) as f64 / nf;
        let upto = xs.partition_point(|&v| v <= a) as f64 / nf;
        d = d.max((upto - cdf.cdf(a)).abs());
        d = d.max((below - cdf.cdf_left(a)).abs());
    }
    let d = d.min(1.0);
    Ok(KsResult {
        statistic: d,
        pvalue: (1.0 - kolmogorov_cdf(nf.sqrt() * d)).clamp(0.0, 1.0),
        n,
        conservative: !atoms.is_empty(),
    })
}

/// Type-7 sample quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Pearson test of independence between `x_t` and `x_{t+lag}`, with both
/// coordinates binned at the empirical quantiles of the series.
pub fn chi2_independence(series: &[f64], lag: usize, bins: usize) -> Result<f64> {
    if bins < 2 {
        return Err(invalid("chi-squared test needs at least 2 bins"));
    }
    if lag == 0 {
        return Err(invalid("lag must be positive"));
    }
    let need = bins * bins * 5;
    if series.len() <= need || series.len() <= lag {
        return Err(Error::InsufficientData(format!(
            "series of length {} is too short for {bins} bins (need more than {need})",
            series.len()
        )));
    }
    let mut sorted = series.to_vec();
    sorted.sort_by(f64::total_cmp);
    let cuts: Vec<f64> = (1..bins)
        .map(|i| quantile_sorted(&sorted, i as f64 / bins as f64))
        .collect();
    if sorted[0] == sorted[sorted.len() - 1] || cuts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Fit("degenerate binning: quantile cut points coincide".into()));
    }
    let bin = |x: f64| cuts.partition_point(|&c| c < x);
    let mut table = vec![vec![0.0f64; bins]; bins];
    for t in 0..series.len() - lag {
        table[bin(series[t])][bin(series[t + lag])] += 1.0;
    }
    let total: f64 = table.iter().flatten().sum();
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<f64> = (0..bins).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    if rows.iter().chain(cols.iter()).any(|&v| v == 0.0) {
        return Err(Error::Fit("degenerate binning: an empty margin".into()));
    }
    let mut stat = 0.0;
    for i in 0..bins {
        for j in 0..bins {
            let e = rows[i] * cols[j] / total;
            stat += (table[i][j] - e).powi(2) / e;
        }
    }
    let df = ((bins - 1) * (bins - 1)) as f64;
    let dist = ChiSquared::new(df).map_err(|e| invalid(e.to_string()))?;
    Ok(dist.sf(stat).clamp(0.0, 1.0))
}
