//! Max-based test of an untruncated Pareto tail against upper truncation.
//!
//! With `E_i = log(X_(i) / X_(r+1))` for the top `r` exceedances, the Hill
//! estimate is `r / sum E_i` and the statistic
//! `T = r (X_(r+1) / X_(1))^alpha_hat = r exp(-r W)` depends on the data only
//! through `W = max E_i / sum E_i`. Under an untruncated Pareto tail the `E_i`
//! are i.i.d. exponential, so `W` is pivotal with
//!
//! `P(W <= w) = sum_{k=0}^{floor(1/w)} (-1)^k C(r,k) (1 - k w)^(r-1)`.
//!
//! Truncation pulls the maximum toward the bulk and makes `W` small, so the
//! p-value is `P(W <= w_obs)`. The alternating sum cancels catastrophically in
//! floating point; it is evaluated exactly on the dyadic rational `w`.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_EXCEEDANCES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbanResult {
    pub r: usize,
    pub alpha_hill: f64,
    /// `r (X_(r+1) / X_(1))^alpha_hat`.
    pub statistic: f64,
    pub pvalue: f64,
}

/// `top` holds the `r + 1` largest observations in any order.
pub fn aban_truncation_test(top: &[f64]) -> Result<AbanResult> {
    if top.len() < MIN_EXCEEDANCES + 1 {
        return Err(Error::InsufficientData(format!(
            "truncation test needs at least {} exceedances, got {}",
            MIN_EXCEEDANCES,
            top.len().saturating_sub(1)
        )));
    }
    if top.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::Fit("truncation test needs positive finite values".into()));
    }
    let mut xs = top.to_vec();
    xs.sort_by(|a, b| b.total_cmp(a));
    let r = xs.len() - 1;
    let thr = xs[r];
    let sum: f64 = xs[..r].iter().map(|x| (x / thr).ln()).sum();
    if sum <= 0.0 {
        return Err(Error::Fit("tied exceedances make the Hill estimate infinite".into()));
    }
    let alpha = r as f64 / sum;
    let statistic = r as f64 * (thr / xs[0]).powf(alpha);
    Ok(AbanResult {
        r,
        alpha_hill: alpha,
        statistic,
        pvalue: aban_pvalue(r, alpha, xs[0], thr),
    })
}

/// p-value for given Hill index, sample maximum and threshold.
pub fn aban_pvalue(r: usize, alpha: f64, x_max: f64, threshold: f64) -> f64 {
    let w = alpha * (x_max / threshold).ln() / r as f64;
    max_share_cdf(r, w)
}

/// `P(max E_i / sum E_i <= w)` for `r` i.i.d. exponentials.
pub fn max_share_cdf(r: usize, w: f64) -> f64 {
    if r == 0 || w.is_nan() {
        return f64::NAN;
    }
    if w >= 1.0 {
        return 1.0;
    }
    if r == 1 {
        return 1.0;
    }
    if w * r as f64 <= 1.0 {
        // the maximum is never below the mean
        return 0.0;
    }
    // w = mant / 2^e exactly
    let (mant, e) = dyadic(w);
    let denom_shift = e * (r as u64 - 1);
    let one = BigInt::one() << e;
    let mant = BigInt::from(mant);
    let mut total = BigInt::zero();
    let mut binom = BigUint::one();
    let kmax = ((1.0 / w).floor() as usize).min(r);
    for k in 0..=kmax {
        if k > 0 {
            binom = binom * BigUint::from(r - k + 1) / BigUint::from(k);
        }
        let base = &one - &mant * BigInt::from(k);
        if base.sign() != Sign::Plus {
            break;
        }
        let term = BigInt::from_biguint(Sign::Plus, binom.clone()) * base.pow(r as u32 - 1);
        if k % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    ratio_to_f64(&total, denom_shift).clamp(0.0, 1.0)
}

/// `(m, e)` with `w = m / 2^e`, for `0 < w < 1`.
fn dyadic(w: f64) -> (u64, u64) {
    let bits = w.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut m, mut e) = if exp == 0 {
        (frac, 1074u64)
    } else {
        (frac | (1u64 << 52), (1075 - exp) as u64)
    };
    while m % 2 == 0 && e > 0 {
        m /= 2;
        e -= 1;
    }
    (m, e)
}

/// `num / 2^shift` as `f64`.
fn ratio_to_f64(num: &BigInt, shift: u64) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let (sign, mag) = (num.sign(), num.magnitude());
    let bits = mag.bits();
    let drop = bits.saturating_sub(64);
    let top = (mag >> drop).to_u64().unwrap_or(u64::MAX) as f64;
    let v = scale_pow2(top, drop as i64 - shift as i64);
    if sign == Sign::Minus {
        -v
    } else {
        v
    }
}

fn scale_pow2(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return 0.0;
        }
    }
    x * 2f64.powi(e as i32)
}
