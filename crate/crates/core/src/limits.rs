//! Evaluation, inversion and sampling of the limit laws.
//!
//! Laws with an atom have two readings. `Pointwise` returns the limit of
//! `P(max <= v_n(x))` at each fixed `x`, which at the atom is strictly smaller
//! than the right limit. `RightContinuous` is the weak limit, a proper CDF.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};
use crate::gof::Cdf;
use crate::regimes::{LawKind, LimitLaw};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitMode {
    Pointwise,
    RightContinuous,
}

/// Precomputed shape of a non-degenerate law.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Gumbel,
    Frechet {
        alpha: f64,
        weight: f64,
    },
    /// `exp(k - x^-alpha)` on `[atom, end]`, 0 below the atom, 1 above `end`.
    /// The continuous part starts at `lo` (the atom, or 0 when there is none).
    Bounded {
        alpha: f64,
        k: f64,
        atom: Option<f64>,
        atom_value: f64,
        end: f64,
    },
    PointMass {
        atom: f64,
        atom_value: f64,
    },
    ReversedWeibull {
        shape: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitCdf {
    law: LimitLaw,
    mode: LimitMode,
    shape: Shape,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(format!("{name} must be positive, got {v}")))
    }
}

impl LimitCdf {
    pub fn new(law: &LimitLaw, mode: LimitMode) -> Result<Self> {
        let shape = match law.kind {
            LawKind::Gumbel => Shape::Gumbel,
            LawKind::Frechet { alpha, weight } => Shape::Frechet {
                alpha: positive("alpha", alpha)?,
                weight: positive("weight", weight)?,
            },
            LawKind::DistI { atom, alpha } => {
                positive("atom", atom)?;
                positive("alpha", alpha)?;
                Shape::Bounded {
                    alpha,
                    k: 0.0,
                    atom: Some(atom),
                    atom_value: (-(1.0 + atom.powf(-alpha))).exp(),
                    end: f64::INFINITY,
                }
            }
            LawKind::DistII {
                ctilde,
                cbreve,
                alpha,
            } => {
                positive("ctilde", ctilde)?;
                positive("cbreve", cbreve)?;
                positive("alpha", alpha)?;
                Shape::Bounded {
                    alpha,
                    k: ctilde * cbreve.powf(-alpha),
                    atom: None,
                    atom_value: 0.0,
                    end: cbreve * ctilde.powf(-1.0 / alpha),
                }
            }
            LawKind::DistIII {
                lambda,
                tau,
                c,
                ctilde,
                cbreve,
                alpha,
            } => {
                for (name, v) in [
                    ("lambda", lambda),
                    ("tau", tau),
                    ("c", c),
                    ("ctilde", ctilde),
                    ("cbreve", cbreve),
                    ("alpha", alpha),
                ] {
                    positive(name, v)?;
                }
                let atom = lambda.powf(-1.0 / tau) * (c * ctilde).powf(-1.0 / alpha);
                let end = cbreve * ctilde.powf(-1.0 / alpha);
                if atom >= end {
                    return Err(invalid(format!(
                        "atom {atom} must lie below the upper endpoint {end}"
                    )));
                }
                let k = ctilde * cbreve.powf(-alpha);
                Shape::Bounded {
                    alpha,
                    k,
                    atom: Some(atom),
                    atom_value: (-1.0 + k - lambda.powf(alpha / tau) * c * ctilde).exp(),
                    end,
                }
            }
            LawKind::DistIV { atom } => Shape::PointMass {
                atom: positive("atom", atom)?,
                atom_value: (-1.0f64).exp(),
            },
            LawKind::ReversedWeibull { shape } => Shape::ReversedWeibull {
                shape: positive("shape", shape)?,
            },
            LawKind::Degenerate { .. } => {
                return Err(invalid("a degenerate limit has no distribution function"))
            }
        };
        Ok(Self {
            law: law.clone(),
            mode,
            shape,
        })
    }

    pub fn law(&self) -> &LimitLaw {
        &self.law
    }

    pub fn mode(&self) -> LimitMode {
        self.mode
    }

    pub fn with_mode(&self, mode: LimitMode) -> Self {
        Self {
            mode,
            ..self.clone()
        }
    }

    /// The atom, if the law has one.
    pub fn atom(&self) -> Option<f64> {
        match self.shape {
            Shape::Bounded { atom, .. } => atom,
            Shape::PointMass { atom, .. } => Some(atom),
            _ => None,
        }
    }

    /// Right-continuous value at `x`.
    fn right_value(&self, x: f64) -> f64 {
        match self.shape {
            Shape::Gumbel => (-(-x).exp()).exp(),
            Shape::Frechet { alpha, weight } => {
                if x <= 0.0 {
                    0.0
                } else {
                    (-weight * x.powf(-alpha)).exp()
                }
            }
            Shape::Bounded {
                alpha, k, atom, end, ..
            } => {
                let lo = atom.unwrap_or(0.0);
                if x < lo || x <= 0.0 {
                    0.0
                } else if x > end {
                    1.0
                } else {
                    (k - x.powf(-alpha)).exp().min(1.0)
                }
            }
            Shape::PointMass { atom, .. } => {
                if x < atom {
                    0.0
                } else {
                    1.0
                }
            }
            Shape::ReversedWeibull { shape } => {
                if x >= 0.0 {
                    1.0
                } else {
                    (-(-x).powf(shape)).exp()
                }
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if self.mode == LimitMode::Pointwise {
            match self.shape {
                Shape::Bounded {
                    atom: Some(a),
                    atom_value,
                    ..
                }
                | Shape::PointMass { atom: a, atom_value } if x == a => return atom_value,
                _ => {}
            }
        }
        self.right_value(x)
    }

    /// `lim_{y -> x-} H(y)`.
    pub fn cdf_left(&self, x: f64) -> f64 {
        match self.atom() {
            Some(a) if x == a => 0.0,
            _ => self.right_value(x),
        }
    }

    /// Generalized inverse of the right-continuous CDF.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(domain(format!("limit quantile needs p in (0, 1), got {p}")));
        }
        Ok(self.quantile_unchecked(p))
    }

    fn quantile_unchecked(&self, p: f64) -> f64 {
        match self.shape {
            Shape::Gumbel => -(-p.ln()).ln(),
            Shape::Frechet { alpha, weight } => (-p.ln() / weight).powf(-1.0 / alpha),
            Shape::Bounded { alpha, k, atom, .. } => {
                if let Some(a) = atom {
                    if p <= self.right_value(a) {
                        return a;
                    }
                }
                (k - p.ln()).powf(-1.0 / alpha)
            }
            Shape::PointMass { atom, .. } => atom,
            Shape::ReversedWeibull { shape } => -(-p.ln()).powf(1.0 / shape),
        }
    }

    /// Inverse-transform draw. In `Pointwise` mode the jump at the atom is
    /// split: mass equal to the pointwise value sits on the atom and the rest
    /// just above it.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let p = loop {
            let u = rng.random::<f64>();
            if u > 0.0 {
                break u;
            }
        };
        if self.mode == LimitMode::Pointwise {
            if let (Some(a), Shape::Bounded { atom_value, .. } | Shape::PointMass { atom_value, .. }) =
                (self.atom(), self.shape)
            {
                if p <= atom_value {
                    return a;
                }
                if p <= self.right_value(a) {
                    return a.next_up();
                }
            }
        }
        self.quantile_unchecked(p)
    }
}

pub fn limit_cdf(c: &LimitCdf, x: f64) -> f64 {
    c.cdf(x)
}

pub fn limit_quantile(c: &LimitCdf, p: f64) -> Result<f64> {
    c.quantile(p)
}

pub fn limit_sample<R: Rng + ?Sized>(c: &LimitCdf, rng: &mut R, count: usize) -> Vec<f64> {
    (0..count).map(|_| c.sample_one(rng)).collect()
}

impl Cdf for LimitCdf {
    fn cdf(&self, x: f64) -> f64 {
        LimitCdf::cdf(self, x)
    }

    fn cdf_left(&self, x: f64) -> f64 {
        LimitCdf::cdf_left(self, x)
    }

    fn atoms(&self) -> Vec<f64> {
        self.atom().into_iter().collect()
    }
}
