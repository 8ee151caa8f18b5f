//! Component laws of the mixture and their truncation.
//!
//! The Weibull bulk uses the rate parameterization `F1(x) = 1 - exp(-lambda x^tau)`.
//! The impurity is regularly varying, `F2(x) = 1 - x^(-alpha) l(x)` on `[m, inf)`,
//! with `l` drawn from a two-member parametric family of slowly varying functions.
//! All types are immutable after construction; samplers take the random stream
//! as an argument.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};

/// Weibull law with rate `lambda` and shape `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullParams {
    lambda: f64,
    tau: f64,
}

impl WeibullParams {
    pub fn new(lambda: f64, tau: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(invalid(format!("weibull rate must be positive, got {lambda}")));
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(invalid(format!("weibull shape must be positive, got {tau}")));
        }
        Ok(Self { lambda, tau })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `exp(-lambda x^tau)`, with value 1 for `x <= 0`.
    pub fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            (-self.lambda * x.powf(self.tau)).exp()
        }
    }

    /// Inverse CDF on `[0, 1)`.
    pub fn quantile(&self, p: f64) -> f64 {
        let h = -(-p).ln_1p() / self.lambda;
        if self.tau == 1.0 {
            h
        } else {
            h.powf(1.0 / self.tau)
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

/// `1 - exp(-lambda x^tau)` for `x >= 0`.
pub fn weibull_cdf(x: f64, p: &WeibullParams) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(domain(format!("weibull cdf needs x >= 0, got {x}")));
    }
    Ok(-(-p.lambda * x.powf(p.tau)).exp_m1())
}

/// Limit behaviour of the slowly varying function at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum TailClass {
    Zero,
    Const { value: f64 },
    Infinite,
}

/// Shape of the slowly varying function without its scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum SlowVaryForm {
    /// `l(x) = ctilde`
    Const,
    /// `l(x) = ctilde * log(1 + x)^power`
    LogPow { power: f64 },
}

/// A slowly varying function `l(x) = ctilde` or `l(x) = ctilde * log(1 + x)^power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum SlowVarySpec {
    Const { ctilde: f64 },
    LogPow { ctilde: f64, power: f64 },
}

impl SlowVarySpec {
    pub fn constant(ctilde: f64) -> Result<Self> {
        Self::from_form(SlowVaryForm::Const, ctilde)
    }

    pub fn log_pow(ctilde: f64, power: f64) -> Result<Self> {
        Self::from_form(SlowVaryForm::LogPow { power }, ctilde)
    }

    pub fn from_form(form: SlowVaryForm, ctilde: f64) -> Result<Self> {
        if !(ctilde.is_finite() && ctilde > 0.0) {
            return Err(invalid(format!("slowly varying scale must be positive, got {ctilde}")));
        }
        match form {
            SlowVaryForm::Const => Ok(SlowVarySpec::Const { ctilde }),
            SlowVaryForm::LogPow { power } => {
                if !power.is_finite() || power == 0.0 {
                    return Err(invalid(format!(
                        "log-power exponent must be finite and nonzero, got {power}"
                    )));
                }
                Ok(SlowVarySpec::LogPow { ctilde, power })
            }
        }
    }

    pub fn ctilde(&self) -> f64 {
        match *self {
            SlowVarySpec::Const { ctilde } | SlowVarySpec::LogPow { ctilde, .. } => ctilde,
        }
    }

    pub fn form(&self) -> SlowVaryForm {
        match *self {
            SlowVarySpec::Const { .. } => SlowVaryForm::Const,
            SlowVarySpec::LogPow { power, .. } => SlowVaryForm::LogPow { power },
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            SlowVarySpec::Const { ctilde } => ctilde,
            SlowVarySpec::LogPow { ctilde, power } => ctilde * x.ln_1p().powf(power),
        }
    }

    fn ln_eval(&self, x: f64) -> f64 {
        match *self {
            SlowVarySpec::Const { ctilde } => ctilde.ln(),
            SlowVarySpec::LogPow { ctilde, power } => ctilde.ln() + power * x.ln_1p().ln(),
        }
    }

    /// d/dx log l(x).
    fn ln_derivative(&self, x: f64) -> f64 {
        match *self {
            SlowVarySpec::Const { .. } => 0.0,
            SlowVarySpec::LogPow { power, .. } => power / ((1.0 + x) * x.ln_1p()),
        }
    }

    pub fn tail_class(&self) -> TailClass {
        match *self {
            SlowVarySpec::Const { ctilde } => TailClass::Const { value: ctilde },
            SlowVarySpec::LogPow { power, .. } if power < 0.0 => TailClass::Zero,
            SlowVarySpec::LogPow { .. } => TailClass::Infinite,
        }
    }
}

/// Regularly varying law `F2(x) = 1 - x^(-alpha) l(x)` on `[m, inf)`.
///
/// Construction enforces `F2(m) = 0` and checks that `F2` is nondecreasing
/// on `[m, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailParams {
    alpha: f64,
    m: f64,
    sv: SlowVarySpec,
}

const MONOTONE_GRID_POINTS: usize = 2000;
const MONOTONE_GRID_DECADES: f64 = 12.0;
const QUANTILE_MAX_ITER: usize = 200;
const QUANTILE_REL_TOL: f64 = 1e-12;

impl TailParams {
    /// Fix the left endpoint `m` and solve the scale of `l` from `m^(-alpha) l(m) = 1`.
    pub fn with_left_endpoint(alpha: f64, m: f64, form: SlowVaryForm) -> Result<Self> {
        check_alpha(alpha)?;
        if !(m.is_finite() && m > 0.0) {
            return Err(invalid(format!("left endpoint must be positive, got {m}")));
        }
        let unit = SlowVarySpec::from_form(form, 1.0)?;
        let ctilde = (alpha * m.ln() - unit.ln_eval(m)).exp();
        let sv = SlowVarySpec::from_form(form, ctilde)?;
        let t = Self { alpha, m, sv };
        t.check_monotone()?;
        Ok(t)
    }

    /// Fix `l` including its scale and solve the left endpoint `m`.
    pub fn with_slowly_varying(alpha: f64, sv: SlowVarySpec) -> Result<Self> {
        check_alpha(alpha)?;
        let m = match sv {
            SlowVarySpec::Const { ctilde } => ctilde.powf(1.0 / alpha),
            SlowVarySpec::LogPow { .. } => solve_left_endpoint(alpha, &sv)?,
        };
        let t = Self { alpha, m, sv };
        t.check_monotone()?;
        Ok(t)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn slowly_varying(&self) -> &SlowVarySpec {
        &self.sv
    }

    fn check_monotone(&self) -> Result<()> {
        let step = MONOTONE_GRID_DECADES * std::f64::consts::LN_10 / (MONOTONE_GRID_POINTS - 1) as f64;
        for i in 0..MONOTONE_GRID_POINTS {
            let x = self.m * (step * i as f64).exp();
            let slope = -self.alpha / x + self.sv.ln_derivative(x);
            if slope > 0.0 {
                return Err(invalid(format!(
                    "tail cdf decreases near x = {x:.6e} (alpha = {}, l = {:?})",
                    self.alpha, self.sv
                )));
            }
        }
        Ok(())
    }

    fn ln_survival(&self, x: f64) -> f64 {
        -self.alpha * x.ln() + self.sv.ln_eval(x)
    }

    /// `x^(-alpha) l(x)` for `x >= m`, 1 below.
    pub fn survival(&self, x: f64) -> f64 {
        if x.is_nan() || x <= self.m {
            1.0
        } else {
            self.ln_survival(x).exp().min(1.0)
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - self.survival(x)
    }

    /// Generalized inverse `inf { x : F2(x) >= p }` for `p` in `[0, 1)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 0.0 {
            return Err(domain(format!("quantile level must be in [0, 1), got {p}")));
        }
        if p >= 1.0 {
            return Err(domain("quantile at level 1 is unbounded"));
        }
        Ok(self.quantile_survival(1.0 - p))
    }

    /// Inverse of the survival function for a target in `(0, 1]`. Accurate
    /// far into the tail, where `1 - p` has already lost its precision.
    pub fn quantile_survival(&self, target: f64) -> f64 {
        if target >= 1.0 {
            return self.m;
        }
        match self.sv {
            SlowVarySpec::Const { .. } => self.m * target.powf(-1.0 / self.alpha),
            SlowVarySpec::LogPow { .. } => {
                let ln_target = target.ln();
                let mut lo = self.m.ln();
                let mut hi = lo + 1.0;
                while self.ln_survival(hi.exp()) > ln_target {
                    lo = hi;
                    hi += (hi - self.m.ln()).max(1.0);
                }
                for _ in 0..QUANTILE_MAX_ITER {
                    if hi - lo <= QUANTILE_REL_TOL {
                        break;
                    }
                    let mid = 0.5 * (lo + hi);
                    if self.ln_survival(mid.exp()) > ln_target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi.exp()
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile_survival(1.0 - rng.random::<f64>())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("tail index must be positive, got {alpha}")))
    }
}

/// Largest root of `-alpha log x + log l(x) = 0`.
fn solve_left_endpoint(alpha: f64, sv: &SlowVarySpec) -> Result<f64> {
    let g = |lx: f64| -alpha * lx + sv.ln_eval(lx.exp());
    let mut hi = 0.0_f64;
    let mut guard = 0;
    while g(hi) >= 0.0 {
        hi += 1.0;
        guard += 1;
        if guard > 2000 {
            return Err(invalid("no left endpoint: survival never drops below one"));
        }
    }
    let mut lo = hi - 1.0;
    guard = 0;
    while g(lo) < 0.0 {
        lo -= 1.0;
        guard += 1;
        if guard > 2000 {
            return Err(invalid("no left endpoint: survival stays below one"));
        }
    }
    for _ in 0..QUANTILE_MAX_ITER {
        if hi - lo <= QUANTILE_REL_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi.exp())
}

pub fn rv_cdf(x: f64, t: &TailParams) -> f64 {
    t.cdf(x)
}

pub fn rv_quantile(p: f64, t: &TailParams) -> Result<f64> {
    t.quantile(p)
}

/// Upper truncation level `M` of the impurity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub level: f64,
    pub enabled: bool,
}

impl TruncationSpec {
    pub fn disabled() -> Self {
        Self {
            level: f64::INFINITY,
            enabled: false,
        }
    }

    pub fn at(level: f64) -> Self {
        Self {
            level,
            enabled: true,
        }
    }
}

fn check_truncation(t: &TailParams, level: f64) -> Result<()> {
    if level.is_nan() || level <= t.m {
        return Err(domain(format!(
            "truncation level {level} must exceed the left endpoint {}",
            t.m
        )));
    }
    Ok(())
}

/// Survival of the truncated law, `(S(x) - S(M)) / (1 - S(M))` on `[m, M]`.
fn trunc_survival(x: f64, t: &TailParams, level: f64) -> f64 {
    if x >= level {
        return 0.0;
    }
    if x <= t.m {
        return 1.0;
    }
    let s_m = t.survival(level);
    ((t.survival(x) - s_m) / (1.0 - s_m)).clamp(0.0, 1.0)
}

/// `F2(x) / F2(M)` on `[m, M]`, 0 below `m` and 1 above `M`.
pub fn trunc_rv_cdf(x: f64, t: &TailParams, level: f64) -> Result<f64> {
    check_truncation(t, level)?;
    if x >= level {
        return Ok(1.0);
    }
    if x <= t.m {
        return Ok(0.0);
    }
    Ok((t.cdf(x) / t.cdf(level)).clamp(0.0, 1.0))
}

pub fn trunc_rv_quantile(p: f64, t: &TailParams, level: f64) -> Result<f64> {
    check_truncation(t, level)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(format!("quantile level must be in [0, 1], got {p}")));
    }
    if p >= 1.0 {
        return Ok(level);
    }
    Ok(t.quantile_survival(1.0 - p * t.cdf(level)).min(level))
}

/// `(1 - eps) F1 + eps G`, where `G` is `F2` or its truncation at `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    eps: f64,
    weibull: WeibullParams,
    tail: TailParams,
    trunc: TruncationSpec,
}

impl MixtureSpec {
    pub fn new(
        eps: f64,
        weibull: WeibullParams,
        tail: TailParams,
        trunc: TruncationSpec,
    ) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(invalid(format!("mixing weight must lie in (0, 1), got {eps}")));
        }
        if trunc.enabled {
            check_truncation(&tail, trunc.level)?;
        }
        Ok(Self {
            eps,
            weibull,
            tail,
            trunc,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn weibull(&self) -> &WeibullParams {
        &self.weibull
    }

    pub fn tail(&self) -> &TailParams {
        &self.tail
    }

    pub fn truncation(&self) -> &TruncationSpec {
        &self.trunc
    }

    /// Survival of the impurity component (truncated when enabled).
    pub fn impurity_survival(&self, x: f64) -> f64 {
        if self.trunc.enabled {
            trunc_survival(x, &self.tail, self.trunc.level)
        } else {
            self.tail.survival(x)
        }
    }

    /// Quantile of the impurity component at `p` in `[0, 1)`.
    pub fn impurity_quantile(&self, p: f64) -> f64 {
        if self.trunc.enabled {
            let level = self.trunc.level;
            self.tail
                .quantile_survival(1.0 - p * self.tail.cdf(level))
                .min(level)
        } else {
            self.tail.quantile_survival(1.0 - p)
        }
    }

    /// `1 - F(x)`, computed without cancellation in the upper tail.
    pub fn survival(&self, x: f64) -> f64 {
        (1.0 - self.eps) * self.weibull.survival(x) + self.eps * self.impurity_survival(x)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let f1 = if x <= 0.0 {
            0.0
        } else {
            -(-self.weibull.lambda * x.powf(self.weibull.tau)).exp_m1()
        };
        (1.0 - self.eps) * f1 + self.eps * (1.0 - self.impurity_survival(x))
    }

    /// Bernoulli(`eps`) component choice followed by an inverse-CDF draw.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let from_impurity = rng.random::<f64>() < self.eps;
        let u = rng.random::<f64>();
        if from_impurity {
            self.impurity_quantile(u)
        } else {
            self.weibull.quantile(u)
        }
    }
}

pub fn mixture_cdf(x: f64, s: &MixtureSpec) -> f64 {
    s.cdf(x)
}

pub fn mixture_sample<R: Rng + ?Sized>(s: &MixtureSpec, rng: &mut R, count: usize) -> Vec<f64> {
    (0..count).map(|_| s.sample_one(rng)).collect()
}
