//! Row maxima of the triangular array by simulation, and their exact law.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::MixtureSpec;
use crate::error::{invalid, Result};
use crate::gof::Cdf;
use crate::regimes::{ArrayModel, Normalization};

/// Independent stream for replicate `j`: ChaCha8 keyed by the master seed,
/// with `j` as the stream id. Results therefore do not depend on scheduling.
pub fn replicate_rng(seed: u64, j: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(j);
    rng
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub model: ArrayModel,
    pub n: u64,
    pub replicates: usize,
    pub seed: u64,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximaBatch {
    pub raw: Vec<f64>,
    pub normalized: Vec<f64>,
    pub n: u64,
    pub k_n: u64,
    pub seed: u64,
    pub s_n: f64,
    pub c_n: f64,
    pub warnings: Vec<String>,
}

/// Maximum of `k` draws from `spec`.
///
/// Each draw consumes two uniforms, one for the component and one for the
/// inverse transform, exactly as `MixtureSpec::sample_one`. Both quantile
/// functions are nondecreasing, so only the largest uniform per component is
/// kept and inverted once at the end.
pub fn stream_max<R: Rng + ?Sized>(spec: &MixtureSpec, k: u64, rng: &mut R) -> f64 {
    let eps = spec.eps();
    let mut top_bulk = -1.0f64;
    let mut top_imp = -1.0f64;
    for _ in 0..k {
        let from_impurity = rng.random::<f64>() < eps;
        let u = rng.random::<f64>();
        if from_impurity {
            top_imp = top_imp.max(u);
        } else {
            top_bulk = top_bulk.max(u);
        }
    }
    let a = if top_bulk >= 0.0 {
        spec.weibull().quantile(top_bulk)
    } else {
        f64::NEG_INFINITY
    };
    let b = if top_imp >= 0.0 {
        spec.impurity_quantile(top_imp)
    } else {
        f64::NEG_INFINITY
    };
    a.max(b)
}

/// Maxima of `replicates` independent rows of `k` draws from `spec`.
pub fn simulate_row_maxima(spec: &MixtureSpec, k: u64, replicates: usize, seed: u64) -> Vec<f64> {
    (0..replicates as u64)
        .into_par_iter()
        .map(|j| stream_max(spec, k, &mut replicate_rng(seed, j)))
        .collect()
}

pub fn simulate_maxima(cfg: &ExperimentConfig) -> Result<MaximaBatch> {
    if cfg.replicates == 0 {
        return Err(invalid("at least one replicate is required"));
    }
    let row = cfg.model.row(cfg.n)?;
    let (s, c) = cfg.normalization.at(cfg.n)?;
    let raw = simulate_row_maxima(&row.spec, row.k_n, cfg.replicates, cfg.seed);
    let normalized = raw.iter().map(|&v| (v - c) / s).collect();
    Ok(MaximaBatch {
        raw,
        normalized,
        n: cfg.n,
        k_n: row.k_n,
        seed: cfg.seed,
        s_n: s,
        c_n: c,
        warnings: row.warnings,
    })
}

/// `F(v)^k` for the unnormalized level `v`.
pub fn exact_max_cdf_raw(spec: &MixtureSpec, k_n: u64, v: f64) -> f64 {
    let sf = spec.survival(v);
    if sf >= 1.0 {
        return 0.0;
    }
    (k_n as f64 * (-sf).ln_1p()).exp()
}

/// `F(s_n x + c_n)^{k_n}`, the exact law of the normalized row maximum.
pub fn exact_max_cdf(
    spec: &MixtureSpec,
    k_n: u64,
    x: f64,
    norm: &Normalization,
    n: u64,
) -> Result<f64> {
    let (s, c) = norm.at(n)?;
    Ok(exact_max_cdf_raw(spec, k_n, s * x + c))
}

/// The exact normalized-maximum law as a `Cdf`.
#[derive(Debug, Clone, Copy)]
pub struct ExactMaxCdf<'a> {
    pub spec: &'a MixtureSpec,
    pub k_n: u64,
    pub s: f64,
    pub c: f64,
}

impl Cdf for ExactMaxCdf<'_> {
    fn cdf(&self, x: f64) -> f64 {
        exact_max_cdf_raw(self.spec, self.k_n, self.s * x + self.c)
    }
}

impl ExactMaxCdf<'_> {
    /// Generalized inverse by bisection.
    pub fn quantile(&self, p: f64) -> f64 {
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        while self.cdf(lo) >= p && lo > -1e300 {
            lo *= 2.0;
        }
        while self.cdf(hi) < p && hi < 1e300 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if self.cdf(mid) >= p {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// Right-continuous empirical CDF.
pub fn empirical_cdf(sample: &[f64], x: f64) -> f64 {
    if sample.is_empty() {
        return 0.0;
    }
    sample.iter().filter(|&&v| v <= x).count() as f64 / sample.len() as f64
}

impl MaximaBatch {
    pub fn empirical_cdf(&self, x: f64) -> f64 {
        empirical_cdf(&self.normalized, x)
    }

    /// CSV with header `replicate,raw_max,normalized_max`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| invalid(format!("csv write failed: {e}"));
        w.write_record(["replicate", "raw_max", "normalized_max"]).map_err(io)?;
        for (j, (r, z)) in self.raw.iter().zip(&self.normalized).enumerate() {
            w.write_record([j.to_string(), r.to_string(), z.to_string()])
                .map_err(io)?;
        }
        w.flush().map_err(|e| invalid(format!("csv write failed: {e}")))?;
        Ok(())
    }
}

/// DKW half-width `sqrt(ln(2/delta) / (2n))`.
pub fn dkw_bound(n: usize, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * n as f64)).sqrt()
}

/// `points` values evenly spaced between the extreme order statistics.
pub fn sample_grid(sample: &[f64], points: usize) -> Vec<f64> {
    let lo = sample.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if points < 2 || lo == hi {
        return vec![lo];
    }
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

/// `max_x |ECDF(x) - F(x)|` over the given grid.
pub fn sup_grid_distance<C: Cdf + ?Sized>(sample: &[f64], cdf: &C, grid: &[f64]) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    grid.iter()
        .map(|&x| (sorted.partition_point(|&v| v <= x) as f64 / n - cdf.cdf(x)).abs())
        .fold(0.0, f64::max)
}

/// `sup_x |F(x) - G(x)|` between two laws, evaluated at both sides of every
/// point of a grid built from the quantiles of each.
pub fn cdf_distance(
    f: &ExactMaxCdf<'_>,
    g: &crate::limits::LimitCdf,
    levels: usize,
) -> f64 {
    let mut grid = Vec::with_capacity(2 * levels + 2);
    for i in 1..levels {
        let p = i as f64 / levels as f64;
        grid.push(f.quantile(p));
        if let Ok(q) = g.quantile(p) {
            grid.push(q);
        }
    }
    grid.extend(g.atom());
    let mut d: f64 = 0.0;
    for &x in &grid {
        let fx = f.cdf(x);
        d = d.max((fx - g.cdf(x)).abs());
        d = d.max((f.cdf(x.next_down()) - g.cdf_left(x)).abs());
    }
    d
}
