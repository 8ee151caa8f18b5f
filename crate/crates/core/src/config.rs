//! JSON model configuration. Sequences are written in the text grammar of
//! [`crate::sequences`], e.g. `"n^-1 * log(n)^2"`.

use serde::{Deserialize, Serialize};

use crate::distributions::{SlowVaryForm, SlowVarySpec, TailParams, WeibullParams};
use crate::error::{invalid, Error, Result};
use crate::regimes::ArrayModel;
use crate::sequences::LogPolySeq;

fn default_k() -> String {
    "n".into()
}

fn default_form() -> SlowVaryForm {
    SlowVaryForm::Const
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default = "default_k")]
    pub k: String,
    pub eps: String,
    /// Truncation level `M_n`; absent for an untruncated tail.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<String>,
    pub lambda: f64,
    pub tau: f64,
    pub alpha: f64,
    /// Left endpoint of the tail. Exactly one of `m` and `ctilde` is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ctilde: Option<f64>,
    #[serde(default = "default_form")]
    pub slowly_varying: SlowVaryForm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn seq(field: &str, src: &str) -> Result<LogPolySeq> {
    src.parse().map_err(|e: Error| match e {
        Error::Parse { position, message } => Error::Parse {
            position,
            message: format!("in `{field}`: {message}"),
        },
        other => other,
    })
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn tail(&self) -> Result<TailParams> {
        match (self.m, self.ctilde) {
            (Some(m), None) => TailParams::with_left_endpoint(self.alpha, m, self.slowly_varying),
            (None, Some(c)) => TailParams::with_slowly_varying(
                self.alpha,
                SlowVarySpec::from_form(self.slowly_varying, c)?,
            ),
            _ => Err(invalid("config needs exactly one of `m` and `ctilde`")),
        }
    }

    pub fn model(&self) -> Result<ArrayModel> {
        Ok(ArrayModel {
            k: seq("k", &self.k)?,
            eps: seq("eps", &self.eps)?,
            level: self.truncation.as_deref().map(|s| seq("truncation", s)).transpose()?,
            weibull: WeibullParams::new(self.lambda, self.tau)?,
            tail: self.tail()?,
        })
    }
}
