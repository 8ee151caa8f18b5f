//! Regime classification for the triangular array and the resulting limit laws.
//!
//! Conditions on `(k_n, eps_n)` and on the truncation level `M_n` are decided
//! exactly by comparing exponent vectors of log-polynomial sequences. The
//! limit law then follows from a fixed decision tree (no truncation) or table
//! (truncation), and each non-degenerate law comes with a normalization.

use serde::{Deserialize, Serialize};

use crate::distributions::{
    MixtureSpec, SlowVarySpec, TailClass, TailParams, TruncationSpec, WeibullParams,
};
use crate::error::{invalid, Error, Result};
use crate::sequences::{
    growth_class, log_expansion, ratio_limit, seq_eval, seq_log, seq_mul, seq_pow, GrowthClass,
    LogPolySeq,
};

/// Tolerance for deciding that two exponents, or a threshold and 1, coincide.
pub const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "label")]
pub enum ALabel {
    A1,
    A2,
    A3 { c: f64 },
    EpsToZeroOrConst,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ACondition {
    #[serde(flatten)]
    pub label: ALabel,
    pub witness_beta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "label")]
pub enum MLabel {
    M1,
    M2,
    M3 { cbreve: f64 },
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCondition {
    #[serde(flatten)]
    pub label: MLabel,
    pub witness_gamma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law")]
pub enum LawKind {
    Gumbel,
    /// `exp(-weight * x^-alpha)`; `weight = 1` except for the fixed-mixture law.
    Frechet { alpha: f64, weight: f64 },
    DistI { atom: f64, alpha: f64 },
    DistII { ctilde: f64, cbreve: f64, alpha: f64 },
    DistIII { lambda: f64, tau: f64, c: f64, ctilde: f64, cbreve: f64, alpha: f64 },
    DistIV { atom: f64 },
    /// `exp(-(-x)^shape)` for `x < 0`, 1 above; maxima of a bounded tail.
    ReversedWeibull { shape: f64 },
    Degenerate { reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormScheme {
    Const1,
    Const2,
    /// `s_n = F2^{<-}(1 - 1/n)`, `c_n = 0`.
    Classical,
    /// `s_n = M - G^{<-}(1 - 1/n)`, `c_n = M` for a tail `G` truncated at `M`.
    UpperEndpoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitLaw {
    pub kind: LawKind,
    pub norm: Option<NormScheme>,
}

impl LimitLaw {
    fn gumbel() -> Self {
        Self {
            kind: LawKind::Gumbel,
            norm: Some(NormScheme::Const1),
        }
    }

    fn frechet(alpha: f64) -> Self {
        Self {
            kind: LawKind::Frechet { alpha, weight: 1.0 },
            norm: Some(NormScheme::Const2),
        }
    }

    fn const2(kind: LawKind) -> Self {
        Self {
            kind,
            norm: Some(NormScheme::Const2),
        }
    }

    fn degenerate(reason: &str) -> Self {
        Self {
            kind: LawKind::Degenerate {
                reason: reason.to_string(),
            },
            norm: None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            LawKind::Gumbel => "Gumbel",
            LawKind::Frechet { .. } => "Fréchet",
            LawKind::DistI { .. } => "Distribution I",
            LawKind::DistII { .. } => "Distribution II",
            LawKind::DistIII { .. } => "Distribution III",
            LawKind::DistIV { .. } => "Distribution IV",
            LawKind::ReversedWeibull { .. } => "reversed Weibull",
            LawKind::Degenerate { .. } => "Degenerate",
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.kind, LawKind::Degenerate { .. })
    }
}

/// Fixed parameters of the Weibull part and the tail index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LawParams {
    pub lambda: f64,
    pub tau: f64,
    pub alpha: f64,
}

/// Where `num / base^beta` switches from diverging to vanishing.
///
/// `base` must diverge. Returns `+inf` if the ratio diverges for every
/// `beta > 0`, `-inf` if it vanishes for every `beta > 0`.
fn power_threshold(num: &LogPolySeq, base: &LogPolySeq) -> f64 {
    let (en, eb) = (num.exponents(), base.exponents());
    for i in 0..3 {
        if eb[i] != 0.0 {
            return en[i] / eb[i];
        }
        if en[i] > 0.0 {
            return f64::INFINITY;
        }
        if en[i] < 0.0 {
            return f64::NEG_INFINITY;
        }
    }
    unreachable!("base sequence diverges, so one of its exponents is nonzero")
}

fn same(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= EXACT_TOL * a.abs().max(b.abs()).max(1.0)
}

fn upper_witness(crit: f64, threshold: f64) -> f64 {
    if threshold.is_infinite() {
        crit + 1.0
    } else {
        0.5 * (crit + threshold)
    }
}

fn lower_witness(crit: f64, threshold: f64) -> f64 {
    0.5 * (threshold.max(0.0) + crit)
}

fn diverging_product(k: &LogPolySeq, eps: &LogPolySeq) -> Result<Option<LogPolySeq>> {
    if growth_class(k) != GrowthClass::ToInfinity {
        return Err(Error::Undecidable(format!("k_n = {k} does not diverge")));
    }
    let keps = seq_mul(k, eps)?;
    Ok(match growth_class(&keps) {
        GrowthClass::ToInfinity => Some(keps),
        _ => None,
    })
}

/// Decide which of the three rate conditions relates `log k_n` and `k_n eps_n`.
pub fn classify_a(k: &LogPolySeq, eps: &LogPolySeq, tau: f64, alpha: f64) -> Result<ACondition> {
    let Some(keps) = diverging_product(k, eps)? else {
        return Ok(ACondition {
            label: ALabel::EpsToZeroOrConst,
            witness_beta: None,
        });
    };
    let logk = seq_log(k).map_err(|e| Error::Undecidable(e.to_string()))?;
    let crit = tau / alpha;
    let t = power_threshold(&logk, &keps);
    if !same(t, crit) && t > crit {
        return Ok(ACondition {
            label: ALabel::A1,
            witness_beta: Some(upper_witness(crit, t)),
        });
    }
    if !same(t, crit) && t < crit {
        return Ok(ACondition {
            label: ALabel::A2,
            witness_beta: Some(lower_witness(crit, t)),
        });
    }
    let target = seq_pow(&logk, alpha / tau)?;
    match ratio_limit(&keps, &target) {
        GrowthClass::ToConst(c) => Ok(ACondition {
            label: ALabel::A3 { c },
            witness_beta: None,
        }),
        _ => Err(Error::Undecidable(format!(
            "k_n eps_n = {keps} matches (log k_n)^(alpha/tau) in its leading power only"
        ))),
    }
}

/// Decide how the truncation level `M_n` compares with `(k_n eps_n)^(1/alpha)`.
pub fn classify_m(
    k: &LogPolySeq,
    eps: &LogPolySeq,
    level: Option<&LogPolySeq>,
    alpha: f64,
) -> Result<MCondition> {
    let na = MCondition {
        label: MLabel::NotApplicable,
        witness_gamma: None,
    };
    let Some(level) = level else {
        return Ok(na);
    };
    if growth_class(level) != GrowthClass::ToInfinity {
        return Err(Error::Undecidable(format!("M_n = {level} does not diverge")));
    }
    let Some(keps) = diverging_product(k, eps)? else {
        return Ok(na);
    };
    let crit = 1.0 / alpha;
    let t = power_threshold(level, &keps);
    if !same(t, crit) && t > crit {
        return Ok(MCondition {
            label: MLabel::M1,
            witness_gamma: Some(upper_witness(crit, t)),
        });
    }
    if !same(t, crit) && t < crit {
        return Ok(MCondition {
            label: MLabel::M2,
            witness_gamma: Some(lower_witness(crit, t)),
        });
    }
    match ratio_limit(level, &seq_pow(&keps, crit)?) {
        GrowthClass::ToConst(cbreve) => Ok(MCondition {
            label: MLabel::M3 { cbreve },
            witness_gamma: None,
        }),
        _ => Err(Error::Undecidable(format!(
            "M_n = {level} matches (k_n eps_n)^(1/alpha) in its leading power only"
        ))),
    }
}

/// Whether `k_n / exp(lambda M_n^tau) -> infinity`.
pub fn k_exceeds_exp(k: &LogPolySeq, level: &LogPolySeq, lambda: f64, tau: f64) -> Result<bool> {
    let logk = seq_log(k).map_err(|e| Error::Undecidable(e.to_string()))?;
    let rhs = seq_mul(&LogPolySeq::constant(lambda)?, &seq_pow(level, tau)?)?;
    Ok(match ratio_limit(&logk, &rhs) {
        GrowthClass::ToInfinity => true,
        GrowthClass::ToZero => false,
        GrowthClass::ToConst(r) if !same(r, 1.0) => r > 1.0,
        GrowthClass::ToConst(_) => {
            // log k_n and lambda M_n^tau share their leading term; the sign of
            // the next term of log k_n decides.
            let exp = log_expansion(k);
            let lead = exp.terms.iter().position(|&e| e != 0.0).unwrap_or(3);
            exp.terms
                .iter()
                .skip(lead + 1)
                .find(|&&e| e != 0.0)
                .is_some_and(|&e| e > 0.0)
        }
    })
}

fn untruncated_tree(a: &ACondition, sv: &SlowVarySpec, p: &LawParams) -> (LimitLaw, Vec<String>) {
    let mut path = vec!["no truncation".to_string()];
    let law = match a.label {
        ALabel::EpsToZeroOrConst => {
            path.push("k_n eps_n -> 0 or const".into());
            LimitLaw::gumbel()
        }
        ALabel::A1 => {
            path.push("A1".into());
            LimitLaw::gumbel()
        }
        ALabel::A2 => {
            path.push("A2".into());
            LimitLaw::frechet(p.alpha)
        }
        ALabel::A3 { c } => {
            path.push("A3".into());
            a3_unbounded_tail(c, sv, p, &mut path)
        }
    };
    (law, path)
}

fn a3_unbounded_tail(c: f64, sv: &SlowVarySpec, p: &LawParams, path: &mut Vec<String>) -> LimitLaw {
    match sv.tail_class() {
        TailClass::Zero => {
            path.push("l -> 0".into());
            LimitLaw::gumbel()
        }
        TailClass::Infinite => {
            path.push("l -> infinity".into());
            LimitLaw::frechet(p.alpha)
        }
        TailClass::Const { value } => {
            path.push("l -> ctilde".into());
            LimitLaw::const2(LawKind::DistI {
                atom: p.lambda.powf(-1.0 / p.tau) * (c * value).powf(-1.0 / p.alpha),
                alpha: p.alpha,
            })
        }
    }
}

/// Limit law without truncation.
pub fn limit_law_thm1(a: &ACondition, sv: &SlowVarySpec, p: &LawParams) -> LimitLaw {
    untruncated_tree(a, sv, p).0
}

/// `lambda^(1/tau) * cbreve * c^(1/alpha)`, the quantity that splits the
/// doubly intermediate cell.
pub fn threshold_theta(p: &LawParams, c: f64, cbreve: f64) -> f64 {
    p.lambda.powf(1.0 / p.tau) * cbreve * c.powf(1.0 / p.alpha)
}

const DEGENERATE_REASON: &str = "no limit under any normalisation";

fn truncated_table(
    a: &ACondition,
    m: &MCondition,
    sv: &SlowVarySpec,
    p: &LawParams,
    k_exceeds: impl FnOnce() -> Result<bool>,
) -> Result<(LimitLaw, Vec<String>)> {
    let mut path = vec!["truncation".to_string()];
    if a.label == ALabel::EpsToZeroOrConst || m.label == MLabel::NotApplicable {
        path.push("k_n eps_n -> 0 or const".into());
        return Ok((LimitLaw::gumbel(), path));
    }
    path.push("k_n eps_n -> infinity".into());
    let law = match m.label {
        MLabel::M1 => {
            path.push("M1".into());
            let (law, sub) = untruncated_tree(a, sv, p);
            path.extend(sub.into_iter().skip(1));
            law
        }
        MLabel::M2 => {
            path.push("M2".into());
            match a.label {
                ALabel::A1 => {
                    path.push("A1".into());
                    LimitLaw::gumbel()
                }
                ALabel::A3 { .. } => {
                    path.push("A3".into());
                    LimitLaw::gumbel()
                }
                ALabel::A2 => {
                    path.push("A2".into());
                    if k_exceeds()? {
                        path.push("k_n >> exp(lambda M_n^tau)".into());
                        LimitLaw::gumbel()
                    } else {
                        path.push("k_n >> exp(lambda M_n^tau) fails".into());
                        LimitLaw::degenerate(DEGENERATE_REASON)
                    }
                }
                ALabel::EpsToZeroOrConst => unreachable!(),
            }
        }
        MLabel::M3 { cbreve } => {
            path.push("M3".into());
            let tc = sv.tail_class();
            match a.label {
                ALabel::A1 => {
                    path.push("A1".into());
                    LimitLaw::gumbel()
                }
                ALabel::A2 => {
                    path.push("A2".into());
                    match tc {
                        TailClass::Zero => {
                            path.push("l -> 0".into());
                            LimitLaw::frechet(p.alpha)
                        }
                        TailClass::Const { value } => {
                            path.push("l -> ctilde".into());
                            LimitLaw::const2(LawKind::DistII {
                                ctilde: value,
                                cbreve,
                                alpha: p.alpha,
                            })
                        }
                        TailClass::Infinite => {
                            path.push("l -> infinity".into());
                            LimitLaw::degenerate(DEGENERATE_REASON)
                        }
                    }
                }
                ALabel::A3 { c } => {
                    path.push("A3".into());
                    let theta = threshold_theta(p, c, cbreve);
                    let at_one = same(theta, 1.0);
                    match tc {
                        TailClass::Zero => {
                            path.push("l -> 0".into());
                            LimitLaw::gumbel()
                        }
                        TailClass::Const { value } => {
                            path.push("l -> ctilde".into());
                            if at_one {
                                path.push("theta = 1".into());
                                LimitLaw::const2(LawKind::DistIV {
                                    atom: cbreve * value.powf(-1.0 / p.alpha),
                                })
                            } else if theta < 1.0 {
                                path.push("theta < 1".into());
                                LimitLaw::gumbel()
                            } else {
                                path.push("theta > 1".into());
                                LimitLaw::const2(LawKind::DistIII {
                                    lambda: p.lambda,
                                    tau: p.tau,
                                    c,
                                    ctilde: value,
                                    cbreve,
                                    alpha: p.alpha,
                                })
                            }
                        }
                        TailClass::Infinite => {
                            path.push("l -> infinity".into());
                            if theta < 1.0 && !at_one {
                                path.push("theta < 1".into());
                                LimitLaw::gumbel()
                            } else {
                                path.push("theta >= 1".into());
                                LimitLaw::degenerate(DEGENERATE_REASON)
                            }
                        }
                    }
                }
                ALabel::EpsToZeroOrConst => unreachable!(),
            }
        }
        MLabel::NotApplicable => unreachable!(),
    };
    Ok((law, path))
}

/// Limit law with truncation. `k` and `level` are needed only for the
/// hard-truncation cell where `k_n` competes with `exp(lambda M_n^tau)`.
pub fn limit_law_thm2(
    a: &ACondition,
    m: &MCondition,
    sv: &SlowVarySpec,
    p: &LawParams,
    k: &LogPolySeq,
    level: &LogPolySeq,
) -> Result<LimitLaw> {
    truncated_table(a, m, sv, p, || k_exceeds_exp(k, level, p.lambda, p.tau)).map(|r| r.0)
}

/// Law of maxima when `eps` is held fixed and there is no truncation.
pub fn classical_limit(spec: &MixtureSpec) -> Result<LimitLaw> {
    if spec.truncation().enabled {
        return Err(invalid("the fixed-mixture limit requires an untruncated tail"));
    }
    Ok(LimitLaw {
        kind: LawKind::Frechet {
            alpha: spec.tail().alpha(),
            weight: spec.eps(),
        },
        norm: Some(NormScheme::Classical),
    })
}

/// The triangular array: sequences `k_n`, `eps_n`, optional `M_n`, and the
/// fixed component parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayModel {
    pub k: LogPolySeq,
    pub eps: LogPolySeq,
    pub level: Option<LogPolySeq>,
    pub weibull: WeibullParams,
    pub tail: TailParams,
}

/// Row `n` of the array.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayRow {
    pub n: u64,
    pub k_n: u64,
    pub spec: MixtureSpec,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeDecision {
    pub a: ACondition,
    pub m: MCondition,
    pub law: LimitLaw,
    pub path: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_exceeds_exp: Option<bool>,
}

/// Smallest `eps` kept after clipping into `(0, 1)`.
const EPS_CLIP: f64 = 1e-12;

impl ArrayModel {
    pub fn params(&self) -> LawParams {
        LawParams {
            lambda: self.weibull.lambda(),
            tau: self.weibull.tau(),
            alpha: self.tail.alpha(),
        }
    }

    pub fn k_at(&self, n: u64) -> Result<u64> {
        Ok(seq_eval(&self.k, n)?.round().max(1.0) as u64)
    }

    pub fn row(&self, n: u64) -> Result<ArrayRow> {
        let k_n = self.k_at(n)?;
        let mut warnings = Vec::new();
        let raw = seq_eval(&self.eps, n)?;
        let eps = if raw >= 1.0 {
            warnings.push(format!("eps_n = {raw} at n = {n} clipped below 1"));
            1.0 - EPS_CLIP
        } else if raw <= 0.0 {
            warnings.push(format!("eps_n = {raw} at n = {n} clipped above 0"));
            EPS_CLIP
        } else {
            raw
        };
        let trunc = match &self.level {
            Some(level) => {
                let m_n = seq_eval(level, n)?;
                if m_n <= self.tail.m() {
                    return Err(invalid(format!(
                        "truncation level M_n = {m_n} at n = {n} does not exceed m = {}",
                        self.tail.m()
                    )));
                }
                TruncationSpec::at(m_n)
            }
            None => TruncationSpec::disabled(),
        };
        let spec = MixtureSpec::new(eps, self.weibull, self.tail, trunc)?;
        Ok(ArrayRow {
            n,
            k_n,
            spec,
            warnings,
        })
    }

    pub fn classify(&self) -> Result<RegimeDecision> {
        let p = self.params();
        let a = classify_a(&self.k, &self.eps, p.tau, p.alpha)?;
        let sv = self.tail.slowly_varying();
        match &self.level {
            None => {
                let (law, path) = untruncated_tree(&a, sv, &p);
                Ok(RegimeDecision {
                    a,
                    m: MCondition {
                        label: MLabel::NotApplicable,
                        witness_gamma: None,
                    },
                    law,
                    path,
                    theta: None,
                    k_exceeds_exp: None,
                })
            }
            Some(level) => {
                let m = classify_m(&self.k, &self.eps, Some(level), p.alpha)?;
                let mut exceeds = None;
                let (law, path) = truncated_table(&a, &m, sv, &p, || {
                    let v = k_exceeds_exp(&self.k, level, p.lambda, p.tau)?;
                    exceeds = Some(v);
                    Ok(v)
                })?;
                let theta = match (a.label, m.label) {
                    (ALabel::A3 { c }, MLabel::M3 { cbreve }) => Some(threshold_theta(&p, c, cbreve)),
                    _ => None,
                };
                Ok(RegimeDecision {
                    a,
                    m,
                    law,
                    path,
                    theta,
                    k_exceeds_exp: exceeds,
                })
            }
        }
    }

    pub fn normalization(&self, law: &LimitLaw) -> Result<Normalization> {
        let scheme = law.norm.ok_or(Error::NoNormalization)?;
        let inner = match scheme {
            NormScheme::Const1 => NormInner::Const1 {
                lambda: self.weibull.lambda(),
                tau: self.weibull.tau(),
                k: self.k,
            },
            NormScheme::Const2 => NormInner::Const2 {
                tail: self.tail,
                k: self.k,
                eps: self.eps,
            },
            NormScheme::Classical | NormScheme::UpperEndpoint => {
                return Err(invalid(format!(
                    "{scheme:?} normalization is not defined by the array sequences"
                )))
            }
        };
        Ok(Normalization { scheme, inner })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum NormInner {
    Const1 { lambda: f64, tau: f64, k: LogPolySeq },
    Const2 { tail: TailParams, k: LogPolySeq, eps: LogPolySeq },
    Classical { tail: TailParams },
    UpperEndpoint { tail: TailParams, level: f64 },
    Fixed { s: f64, c: f64 },
}

/// Affine map `v_n(x) = s_n x + c_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    scheme: NormScheme,
    inner: NormInner,
}

fn rounded_k(k: &LogPolySeq, n: u64) -> Result<f64> {
    Ok(seq_eval(k, n)?.round().max(1.0))
}

impl Normalization {
    /// Gumbel scaling `s = (lambda tau)^-1 (log k / lambda)^(1/tau - 1)`,
    /// `c = (log k / lambda)^(1/tau)`.
    pub fn const1(lambda: f64, tau: f64, k: LogPolySeq) -> Self {
        Self {
            scheme: NormScheme::Const1,
            inner: NormInner::Const1 { lambda, tau, k },
        }
    }

    /// `s = F2^{<-}(1 - 1/(k eps))`, `c = 0`.
    pub fn const2(tail: TailParams, k: LogPolySeq, eps: LogPolySeq) -> Self {
        Self {
            scheme: NormScheme::Const2,
            inner: NormInner::Const2 { tail, k, eps },
        }
    }

    pub fn classical(tail: TailParams) -> Self {
        Self {
            scheme: NormScheme::Classical,
            inner: NormInner::Classical { tail },
        }
    }

    pub fn upper_endpoint(tail: TailParams, level: f64) -> Self {
        Self {
            scheme: NormScheme::UpperEndpoint,
            inner: NormInner::UpperEndpoint { tail, level },
        }
    }

    /// A constant map, e.g. the identity `s = 1, c = 0`. Reported as `Const1`
    /// only for bookkeeping; `scheme()` is not meaningful for it.
    pub fn fixed(s: f64, c: f64) -> Self {
        Self {
            scheme: NormScheme::Const1,
            inner: NormInner::Fixed { s, c },
        }
    }

    pub fn scheme(&self) -> NormScheme {
        self.scheme
    }

    /// `(s_n, c_n)` at row `n`.
    pub fn at(&self, n: u64) -> Result<(f64, f64)> {
        match &self.inner {
            NormInner::Const1 { lambda, tau, k } => {
                let logk = rounded_k(k, n)?.ln();
                Ok(const1_values(*lambda, *tau, logk))
            }
            NormInner::Const2 { tail, k, eps } => {
                let keps = rounded_k(k, n)? * seq_eval(eps, n)?;
                if keps <= 1.0 {
                    return Err(crate::error::domain(format!(
                        "k_n eps_n = {keps} at n = {n} must exceed 1 for this normalization"
                    )));
                }
                Ok((tail.quantile(1.0 - 1.0 / keps)?, 0.0))
            }
            NormInner::Classical { tail } => {
                if n < 2 {
                    return Err(crate::error::domain("classical scaling needs n >= 2"));
                }
                Ok((tail.quantile(1.0 - 1.0 / n as f64)?, 0.0))
            }
            NormInner::UpperEndpoint { tail, level } => {
                let q = crate::distributions::trunc_rv_quantile(1.0 - 1.0 / n as f64, tail, *level)?;
                Ok((level - q, *level))
            }
            NormInner::Fixed { s, c } => Ok((*s, *c)),
        }
    }
}

/// Gumbel scaling for a given `log k`.
pub fn const1_values(lambda: f64, tau: f64, logk: f64) -> (f64, f64) {
    let base = logk / lambda;
    let s = (lambda * tau).recip() * base.powf(1.0 / tau - 1.0);
    (s, base.powf(1.0 / tau))
}
