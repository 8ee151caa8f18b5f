//! Extreme-value analysis for triangular arrays drawn from Weibull mixtures
//! with a (possibly truncated) regularly varying heavy-tailed impurity.
//!
//! The crate is organised bottom-up:
//!
//! - [`distributions`]: CDFs, quantiles and samplers of the Weibull bulk, the
//!   regularly varying tail, its upper truncation and the mixture.
//! - [`sequences`]: the log-polynomial sequence family used for `k_n`, `eps_n`
//!   and `M_n`, with exact asymptotic comparison.
//! - [`regimes`]: decides the rate conditions and selects the limit law and
//!   its normalizing sequences.
//! - [`limits`]: evaluation, inversion and sampling of the limit laws.
//! - [`mc`]: Monte Carlo row maxima and the exact finite-`n` law of the maximum.
//! - [`gof`]: Kolmogorov-Smirnov and chi-squared independence tests.
//! - [`fitpipe`]: the empirical fitting pipeline for return series.
//! - [`config`]: the JSON model description shared by the CLI and batch sidecars.

pub mod config;
pub mod distributions;
pub mod error;
pub mod fitpipe;
pub mod gof;
pub mod limits;
pub mod mc;
pub mod regimes;
pub mod sequences;

pub use error::{Error, Result};
