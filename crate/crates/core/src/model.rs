//! The mixed-fractional CEV model and its first-passage-time analytics.
//!
//! Under dS = rS dt + δ S^(α/2) dM with M = B + βB^H, the power transform
//! x = S^(2-α) turns the forward equation into that of a time-inhomogeneous
//! square-root process
//!
//! ```text
//! ∂P/∂t = -∂/∂x [(A x + B(t)) P] + C(t) ∂²/∂x² [x P]
//! ```
//!
//! whose drift/diffusion ratio θ = B/C = (1-α)/(2-α) does not depend on t.
//! With the time change φ(t) = ∫₀ᵗ C(s) e^(-(2-α) r s) ds the probability of
//! hitting zero by t is the regularized upper incomplete gamma function
//! Γ(1-ξ, x₀/φ(t)) / Γ(1-ξ), ξ = θ.
//!
//! δ is parametrized as δ² = σ₀² S₀^(2-α), which makes x₀/φ(t), and with it
//! every default probability, independent of S₀.

use thiserror::Error;

use crate::quad::{self, Tolerance};
use crate::specfun::{self, SpecFunError};

/// Below this rate the closed form of φ switches to its r → 0 limit.
pub const ZERO_RATE_CUTOFF: f64 = 1e-12;

/// Log-densities below this floor are reported as exactly zero.
pub const LOG_UNDERFLOW: f64 = -700.0;

const PHI_QUAD_TOL: Tolerance = Tolerance::new(0.0, 1e-13);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("alpha = {0} must be < 2 so that zero is attainable")]
    Alpha(f64),
    #[error("hurst = {0} must lie strictly inside (3/4, 1)")]
    Hurst(f64),
    #[error("beta = {0} must be >= 0")]
    Beta(f64),
    #[error("sigma0 = {0} must be > 0")]
    Sigma0(f64),
    #[error("rate = {0} must be >= 0")]
    Rate(f64),
    #[error("s0 = {0} must be > 0")]
    InitialPrice(f64),
    #[error("{0} must be finite")]
    NonFinite(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("time t = {0} is outside the domain of this function")]
    Time(f64),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Quadrature(#[from] quad::QuadError),
}

/// Parameters of the mixed-fractional CEV model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Risk-free rate per year.
    pub r: f64,
    /// Local volatility at inception, per √year.
    pub sigma0: f64,
    /// Elasticity exponent; the diffusion coefficient is δ S^(α/2).
    pub alpha: f64,
    /// Weight of the fractional component of the driving noise.
    pub beta: f64,
    pub hurst: f64,
    /// Initial asset price.
    pub s0: f64,
}

impl ModelParams {
    /// σ₀ = 20%, r = 5%, S₀ = 50, with the given elasticity and noise mix.
    pub fn desk(alpha: f64, beta: f64, hurst: f64) -> Self {
        Self {
            r: 0.05,
            sigma0: 0.2,
            alpha,
            beta,
            hurst,
            s0: 50.0,
        }
    }

    pub fn validate(self) -> Result<Self, ParamError> {
        let fields = [
            ("r", self.r),
            ("sigma0", self.sigma0),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("hurst", self.hurst),
            ("s0", self.s0),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(ParamError::NonFinite(name));
        }
        if self.alpha >= 2.0 {
            return Err(ParamError::Alpha(self.alpha));
        }
        if !(self.hurst > 0.75 && self.hurst < 1.0) {
            return Err(ParamError::Hurst(self.hurst));
        }
        if self.beta < 0.0 {
            return Err(ParamError::Beta(self.beta));
        }
        if self.sigma0 <= 0.0 {
            return Err(ParamError::Sigma0(self.sigma0));
        }
        if self.r < 0.0 {
            return Err(ParamError::Rate(self.r));
        }
        if self.s0 <= 0.0 {
            return Err(ParamError::InitialPrice(self.s0));
        }
        Ok(self)
    }

    /// δ² = σ₀² S₀^(2-α).
    pub fn delta_sq(&self) -> f64 {
        self.sigma0 * self.sigma0 * self.s0.powf(2.0 - self.alpha)
    }
}

/// Coefficients of the forward equation for x = S^(2-α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoefficients {
    /// A = (2-α) r.
    pub a_drift: f64,
    /// θ = B(t)/C(t) = (1-α)/(2-α).
    pub theta: f64,
    /// Exponent shift of the first-passage law; equal to θ.
    pub xi: f64,
    /// x₀ = S₀^(2-α).
    pub x0: f64,
    /// σ² = δ².
    pub sigma_sq: f64,
    two_minus_alpha: f64,
    one_minus_alpha: f64,
    beta: f64,
    hurst: f64,
}

impl EffectiveCoefficients {
    pub fn new(p: &ModelParams) -> Self {
        let two_minus_alpha = 2.0 - p.alpha;
        let one_minus_alpha = 1.0 - p.alpha;
        let theta = one_minus_alpha / two_minus_alpha;
        Self {
            a_drift: two_minus_alpha * p.r,
            theta,
            xi: theta,
            x0: p.s0.powf(two_minus_alpha),
            sigma_sq: p.delta_sq(),
            two_minus_alpha,
            one_minus_alpha,
            beta: p.beta,
            hurst: p.hurst,
        }
    }

    /// 1/2 + β² H t^(2H-1), half the rate of the variance clock.
    fn clock_half_rate(&self, t: f64) -> f64 {
        0.5 + self.beta * self.beta * self.hurst * t.powf(2.0 * self.hurst - 1.0)
    }

    /// B(t) = σ² (1-α)(2-α) (1/2 + β² H t^(2H-1)).
    pub fn b_drift(&self, t: f64) -> f64 {
        self.sigma_sq * self.one_minus_alpha * self.two_minus_alpha * self.clock_half_rate(t)
    }

    /// C(t) = σ² (2-α)² (1/2 + β² H t^(2H-1)).
    pub fn c_diff(&self, t: f64) -> f64 {
        self.sigma_sq * self.two_minus_alpha * self.two_minus_alpha * self.clock_half_rate(t)
    }

    /// v(t) = t + β² t^(2H), the second moment of the mixed noise.
    pub fn variance_clock(&self, t: f64) -> f64 {
        t + self.beta * self.beta * t.powf(2.0 * self.hurst)
    }

    /// Shape parameter 1 - ξ = 1/(2-α) of the first-passage law.
    pub fn gamma_shape(&self) -> f64 {
        1.0 - self.xi
    }

    pub fn two_minus_alpha(&self) -> f64 {
        self.two_minus_alpha
    }
}

/// A validated model together with its derived coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MfCev {
    params: ModelParams,
    coef: EffectiveCoefficients,
}

impl MfCev {
    pub fn new(params: ModelParams) -> Result<Self, ParamError> {
        let params = params.validate()?;
        Ok(Self {
            params,
            coef: EffectiveCoefficients::new(&params),
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn coefficients(&self) -> &EffectiveCoefficients {
        &self.coef
    }

    /// φ(t)/σ², the time change with unit volatility scale.
    fn phi_unit(&self, t: f64) -> Result<f64, EvalError> {
        if !(t >= 0.0) {
            return Err(EvalError::Time(t));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let p = &self.params;
        let m = self.coef.two_minus_alpha;
        let beta_sq = p.beta * p.beta;
        let h = p.hurst;
        if p.r < ZERO_RATE_CUTOFF {
            return Ok(0.5 * m * m * (t + beta_sq * t.powf(2.0 * h)));
        }
        let z = m * p.r * t;
        let brownian = m / (2.0 * p.r) * -(-z).exp_m1();
        if beta_sq == 0.0 {
            return Ok(brownian);
        }
        let whittaker = specfun::whittaker_m(h, h + 0.5, z)?.into_value()?;
        let bracket = 2.0 * h + 1.0 + (0.5 * z).exp() * z.powf(-h) * whittaker;
        let fractional = beta_sq * m * m / (2.0 * (2.0 * h + 1.0)) * (-z).exp() * t.powf(2.0 * h) * bracket;
        Ok(brownian + fractional)
    }

    /// φ(t) from its closed form (elementary term plus Whittaker-M term).
    pub fn phi_closed(&self, t: f64) -> Result<f64, EvalError> {
        Ok(self.coef.sigma_sq * self.phi_unit(t)?)
    }

    /// φ(t) = ∫₀ᵗ C(s) e^(-(2-α) r s) ds by adaptive quadrature.
    pub fn phi_quadrature(&self, t: f64) -> Result<f64, EvalError> {
        if !(t >= 0.0) {
            return Err(EvalError::Time(t));
        }
        let k = self.coef.a_drift;
        let coef = self.coef;
        let r = quad::integrate(|s| coef.c_diff(s) * (-k * s).exp(), 0.0, t, PHI_QUAD_TOL);
        Ok(r.check()?)
    }

    /// x₀/φ(t); S₀ cancels exactly because x₀/σ² = 1/σ₀².
    fn barrier_ratio(&self, phi_unit: f64) -> f64 {
        1.0 / (self.params.sigma0 * self.params.sigma0 * phi_unit)
    }

    /// Density of the first-passage time through zero,
    /// g(t) = -∂/∂t γ(1-ξ, x₀/φ(t)) / Γ(1-ξ)
    ///      = C(t) e^(-(2-α) r t) / φ(t) · (x₀/φ)^(1-ξ) e^(-x₀/φ) / Γ(1-ξ).
    pub fn fpt_density(&self, t: f64) -> Result<f64, EvalError> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(EvalError::Time(t));
        }
        let phi_unit = self.phi_unit(t)?;
        if phi_unit <= 0.0 {
            return Ok(0.0);
        }
        let shape = self.coef.gamma_shape();
        let u = self.barrier_ratio(phi_unit);
        let c_unit = self.coef.c_diff(t) / self.coef.sigma_sq;
        let log_g =
            -specfun::log_gamma(shape)? + c_unit.ln() - self.coef.a_drift * t - phi_unit.ln() + shape * u.ln() - u;
        if log_g < LOG_UNDERFLOW || log_g.is_nan() {
            return Ok(0.0);
        }
        Ok(log_g.exp())
    }

    /// Risk-neutral probability that the price has hit zero by time t.
    pub fn default_probability(&self, t: f64) -> Result<f64, EvalError> {
        if !(t >= 0.0) {
            return Err(EvalError::Time(t));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let phi_unit = self.phi_unit(t)?;
        if phi_unit <= 0.0 {
            return Ok(0.0);
        }
        let u = self.barrier_ratio(phi_unit);
        Ok(specfun::reg_gamma_upper(self.coef.gamma_shape(), u)?.into_value()?)
    }
}
