//! Default probabilities and credit default swap spreads under the
//! mixed-fractional constant-elasticity-of-variance (mfCEV) model.
//!
//! * [`specfun`]: log-gamma, regularized incomplete gamma, ₁F₁, Whittaker M.
//! * [`model`]: parameters, transformed coefficients, the time change φ,
//!   first-passage density and default probability.
//! * [`cds`]: protection leg, premium annuity, par spread, batch tables and
//!   default curves.
//! * [`mc`]: Monte-Carlo simulation of the equivalent square-root diffusion
//!   with absorption at zero, used to validate the closed forms.
//!
//! Batch work (spread tables, Monte-Carlo paths) runs on rayon when the
//! `parallel` feature is enabled (the default) and sequentially otherwise.
//! Results do not depend on the execution mode.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cds;
pub mod exec;
pub mod mc;
pub mod model;
pub mod quad;
pub mod specfun;

pub use cds::{CdsContract, CdsError, CurvePoint, SpreadCell, TableCellError};
pub use exec::Execution;
pub use mc::{McConfig, McError, McResult};
pub use model::{EffectiveCoefficients, EvalError, MfCev, ModelParams, ParamError};
