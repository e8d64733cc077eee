//! Credit default swap legs and par spreads on the zero-price default event.
//!
//! The protection seller pays 1 - R at the default time τ if τ ≤ T. The
//! buyer pays a running coupon at the dates i/f, i = 1..⌈fT⌉, for as long as
//! no default has happened; accrued premium at default is ignored. Each
//! coupon accrues over Δ = 1/f years, so the par spread is an annualized
//! rate quoted in basis points.

use thiserror::Error;

use crate::exec::{compensated_sum, Execution};
use crate::model::{EvalError, MfCev, ModelParams, ParamError};
use crate::quad::{self, Tolerance};

/// Tolerance used for both integral forms of the protection leg.
pub const LEG_QUAD_TOL: Tolerance = Tolerance::new(0.0, 1e-12);

/// Maximum relative disagreement between the density and
/// integration-by-parts forms of the protection leg.
pub const LEG_AGREEMENT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CdsError {
    #[error("maturity = {0} must be positive and finite")]
    Maturity(f64),
    #[error("recovery = {0} must lie in [0, 1]")]
    Recovery(f64),
    #[error("notional = {0} must be positive and finite")]
    Notional(f64),
    #[error("payments per year must be at least 1")]
    Frequency,
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("protection leg forms disagree: density {density:e} vs parts {parts:e}")]
    LegMismatch { density: f64, parts: f64 },
    #[error("premium annuity underflows ({0:e}); default is certain before the first payment")]
    AnnuityUnderflow(f64),
}

impl From<quad::QuadError> for CdsError {
    fn from(e: quad::QuadError) -> Self {
        CdsError::Eval(EvalError::Quadrature(e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdsContract {
    /// Years to expiry.
    pub maturity: f64,
    /// Fraction of notional recovered at default.
    pub recovery: f64,
    pub notional: f64,
    pub payments_per_year: u32,
}

impl CdsContract {
    /// Unit notional with semiannual premium payments.
    pub fn new(maturity: f64, recovery: f64) -> Self {
        Self {
            maturity,
            recovery,
            notional: 1.0,
            payments_per_year: 2,
        }
    }

    pub fn validate(self) -> Result<Self, CdsError> {
        if !(self.maturity > 0.0) || !self.maturity.is_finite() {
            return Err(CdsError::Maturity(self.maturity));
        }
        if !(0.0..=1.0).contains(&self.recovery) {
            return Err(CdsError::Recovery(self.recovery));
        }
        if !(self.notional > 0.0) || !self.notional.is_finite() {
            return Err(CdsError::Notional(self.notional));
        }
        if self.payments_per_year == 0 {
            return Err(CdsError::Frequency);
        }
        Ok(self)
    }

    /// Accrual fraction of one premium period.
    pub fn accrual(&self) -> f64 {
        1.0 / f64::from(self.payments_per_year)
    }

    /// Premium dates i/f for i = 1..⌈f T⌉.
    pub fn payment_times(&self) -> Vec<f64> {
        let f = f64::from(self.payments_per_year);
        // guard against f·T landing a hair above an integer
        let n = (self.maturity * f - 1e-9).ceil().max(1.0) as usize;
        (1..=n).map(|i| i as f64 / f).collect()
    }
}

/// Both evaluations of the protection leg present value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtectionLeg {
    /// (1-R) ∫₀ᵀ e^(-rt) g(t) dt.
    pub density_form: f64,
    /// (1-R) [e^(-rT) Q(T) + r ∫₀ᵀ e^(-rt) Q(t) dt].
    pub parts_form: f64,
}

/// Computes the protection leg both ways without checking their agreement.
pub fn protection_leg_forms(contract: &CdsContract, model: &MfCev) -> Result<ProtectionLeg, CdsError> {
    let contract = contract.validate()?;
    let loss = (1.0 - contract.recovery) * contract.notional;
    if loss == 0.0 {
        return Ok(ProtectionLeg {
            density_form: 0.0,
            parts_form: 0.0,
        });
    }
    let r = model.params().r;
    let t_end = contract.maturity;

    let density = quad::try_integrate(
        |t| Ok::<_, EvalError>((-r * t).exp() * model.fpt_density(t)?),
        0.0,
        t_end,
        LEG_QUAD_TOL,
    )?
    .check()?;

    let discounted_q = if r == 0.0 {
        0.0
    } else {
        quad::try_integrate(
            |t| Ok::<_, EvalError>((-r * t).exp() * model.default_probability(t)?),
            0.0,
            t_end,
            LEG_QUAD_TOL,
        )?
        .check()?
    };
    let parts = (-r * t_end).exp() * model.default_probability(t_end)? + r * discounted_q;

    Ok(ProtectionLeg {
        density_form: loss * density,
        parts_form: loss * parts,
    })
}

/// Present value of the protection payment. Returns the
/// integration-by-parts value after checking it against the density form.
pub fn protection_leg(contract: &CdsContract, model: &MfCev) -> Result<f64, CdsError> {
    let leg = protection_leg_forms(contract, model)?;
    let scale = leg.parts_form.abs().max(leg.density_form.abs());
    if (leg.density_form - leg.parts_form).abs() > LEG_AGREEMENT_TOL * scale {
        return Err(CdsError::LegMismatch {
            density: leg.density_form,
            parts: leg.parts_form,
        });
    }
    Ok(leg.parts_form)
}

/// Σ Δ e^(-r tᵢ) [1 - Q(tᵢ)] times notional.
pub fn premium_annuity(contract: &CdsContract, model: &MfCev) -> Result<f64, CdsError> {
    let contract = contract.validate()?;
    let r = model.params().r;
    let delta = contract.accrual();
    let terms = contract
        .payment_times()
        .into_iter()
        .map(|t| Ok(delta * (-r * t).exp() * (1.0 - model.default_probability(t)?)))
        .collect::<Result<Vec<f64>, CdsError>>()?;
    Ok(contract.notional * compensated_sum(terms))
}

/// Par spread in basis points per year.
pub fn cds_spread(contract: &CdsContract, model: &MfCev) -> Result<f64, CdsError> {
    let protection = protection_leg(contract, model)?;
    let annuity = premium_annuity(contract, model)?;
    if !(annuity > f64::MIN_POSITIVE * contract.notional) {
        return Err(CdsError::AnnuityUnderflow(annuity));
    }
    Ok(1e4 * protection / annuity)
}

/// One (β, H) row selector. `hurst = None` marks rows where H is
/// irrelevant (β = 0); those cells use the base model's H.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaHurst {
    pub beta: f64,
    pub hurst: Option<f64>,
}

impl BetaHurst {
    pub const fn new(beta: f64, hurst: Option<f64>) -> Self {
        Self { beta, hurst }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpreadGrid {
    pub betas_hursts: Vec<BetaHurst>,
    pub maturities: Vec<f64>,
    pub alphas: Vec<f64>,
}

impl SpreadGrid {
    /// β ∈ {0, 0.5, 1}, H ∈ {0.8, 0.9}, T ∈ {1, 2, 5, 10}, α ∈ {0, -2}.
    pub fn standard() -> Self {
        Self {
            betas_hursts: vec![
                BetaHurst::new(0.0, None),
                BetaHurst::new(0.5, Some(0.8)),
                BetaHurst::new(0.5, Some(0.9)),
                BetaHurst::new(1.0, Some(0.8)),
                BetaHurst::new(1.0, Some(0.9)),
            ],
            maturities: vec![1.0, 2.0, 5.0, 10.0],
            alphas: vec![0.0, -2.0],
        }
    }

    pub fn len(&self) -> usize {
        self.betas_hursts.len() * self.maturities.len() * self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cell coordinates in row order (β/H, then maturity, then α).
    fn coordinates(&self) -> Vec<(BetaHurst, f64, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for &bh in &self.betas_hursts {
            for &maturity in &self.maturities {
                for &alpha in &self.alphas {
                    out.push((bh, maturity, alpha));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadCell {
    pub alpha: f64,
    pub beta: f64,
    pub hurst: Option<f64>,
    pub maturity: f64,
    pub spread_bps: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("cell (beta={beta}, hurst={hurst:?}, alpha={alpha}, maturity={maturity}): {source}")]
pub struct TableCellError {
    pub alpha: f64,
    pub beta: f64,
    pub hurst: Option<f64>,
    pub maturity: f64,
    pub source: CdsError,
}

/// Evaluates the full Cartesian grid. Failures are captured per cell and
/// do not abort the batch; output order follows [`SpreadGrid`] row order
/// regardless of `exec`.
pub fn spread_table(
    base: &ModelParams,
    contract: &CdsContract,
    grid: &SpreadGrid,
    exec: Execution,
) -> Vec<Result<SpreadCell, TableCellError>> {
    let coords = grid.coordinates();
    exec.map_indexed(coords.len(), |i| {
        let (bh, maturity, alpha) = coords[i];
        let params = ModelParams {
            alpha,
            beta: bh.beta,
            hurst: bh.hurst.unwrap_or(base.hurst),
            ..*base
        };
        let cell_contract = CdsContract { maturity, ..*contract };
        let spread = MfCev::new(params)
            .map_err(CdsError::from)
            .and_then(|m| cds_spread(&cell_contract, &m));
        match spread {
            Ok(spread_bps) => Ok(SpreadCell {
                alpha,
                beta: bh.beta,
                hurst: bh.hurst,
                maturity,
                spread_bps,
            }),
            Err(source) => Err(TableCellError {
                alpha,
                beta: bh.beta,
                hurst: bh.hurst,
                maturity,
                source,
            }),
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub t: f64,
    pub q: f64,
}

/// Default probability on a uniform grid over [0, t_max], endpoints included.
pub fn default_curve(model: &MfCev, t_max: f64, n_points: usize) -> Result<Vec<CurvePoint>, CdsError> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(CdsError::Grid(format!("t_max = {t_max} must be positive and finite")));
    }
    if n_points < 2 {
        return Err(CdsError::Grid(format!("n_points = {n_points} must be at least 2")));
    }
    let last = (n_points - 1) as f64;
    (0..n_points)
        .map(|i| {
            let t = if i == n_points - 1 {
                t_max
            } else {
                t_max * i as f64 / last
            };
            Ok(CurvePoint {
                t,
                q: model.default_probability(t)?,
            })
        })
        .collect()
}
