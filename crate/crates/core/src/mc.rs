//! Monte-Carlo oracle for the first-passage analytics.
//!
//! Simulates the transformed state x = S^(2-α) as the Itô diffusion whose
//! forward equation is the model's effective Fokker–Planck equation,
//!
//! ```text
//! dx = [A x + B(t)] dt + √(2 C(t) x) dW,
//! ```
//!
//! on a uniform grid. Time enters the noise only through the variance clock
//! v(t) = t + β² t^(2H): over a step, 2C(t) dt is replaced by σ²(2-α)² Δv
//! and B(t) dt by θ σ²(2-α)² Δv / 2. The state is carried in units of x₀,
//! so paths do not depend on S₀.
//!
//! Two discretizations are available (see [`Scheme`]). Either way a path is
//! absorbed at the first grid time where the updated state is ≤ 0 (or a
//! crossing is detected inside the step), and its default time is that
//! grid time, the right end of the crossing step.
//!
//! Every path draws from its own ChaCha8 stream (master seed, stream =
//! path index), so results depend only on (seed, n_paths, n_steps, scheme)
//! and not on how paths are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::cds::{CdsContract, CdsError};
use crate::exec::{compensated_sum, Execution};
use crate::model::{EffectiveCoefficients, ModelParams, ParamError};

/// Upper bound on n_paths · n_steps unless configured otherwise.
pub const DEFAULT_STEP_BUDGET: u64 = 100_000_000_000;

/// Number of batches used for the spread standard error.
pub const SPREAD_BATCHES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Euler–Maruyama on x with √max(x, 0) in the diffusion term. Weak
    /// error near the boundary decays only like dt^(1/(2-α)), which is
    /// slow for negative α.
    EulerFullTruncation,
    /// Euler–Maruyama on the Lamperti coordinate √x, where the noise is
    /// additive, plus a Brownian-bridge test for crossings of zero between
    /// grid points.
    #[default]
    LampertiBridge,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n_paths: usize,
    pub n_steps: usize,
    /// Simulated time span in years.
    pub horizon: f64,
    pub seed: u64,
    pub scheme: Scheme,
    pub execution: Execution,
    /// Largest accepted n_paths · n_steps.
    pub step_budget: u64,
}

impl McConfig {
    pub fn new(n_paths: usize, n_steps: usize, horizon: f64, seed: u64) -> Self {
        Self {
            n_paths,
            n_steps,
            horizon,
            seed,
            scheme: Scheme::default(),
            execution: Execution::default(),
            step_budget: DEFAULT_STEP_BUDGET,
        }
    }

    pub fn with_execution(self, execution: Execution) -> Self {
        Self { execution, ..self }
    }

    pub fn with_scheme(self, scheme: Scheme) -> Self {
        Self { scheme, ..self }
    }

    pub fn validate(self) -> Result<Self, McError> {
        if self.n_paths == 0 {
            return Err(McError::Paths);
        }
        if self.n_steps == 0 {
            return Err(McError::Steps);
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(McError::Horizon(self.horizon));
        }
        let work = (self.n_paths as u128) * (self.n_steps as u128);
        if work > u128::from(self.step_budget) {
            return Err(McError::Budget {
                work,
                budget: self.step_budget,
            });
        }
        Ok(self)
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.n_steps as f64
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error("n_paths must be at least 1")]
    Paths,
    #[error("n_steps must be at least 1")]
    Steps,
    #[error("horizon = {0} must be positive and finite")]
    Horizon(f64),
    #[error("n_paths * n_steps = {work} exceeds the step budget {budget}")]
    Budget { work: u128, budget: u64 },
    #[error("horizon {horizon} does not cover the contract's last date {needed}")]
    HorizonTooShort { horizon: f64, needed: f64 },
    #[error("every path defaults before the first premium date")]
    NoPremium,
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Contract(#[from] CdsError),
}

/// An estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResult {
    pub estimate: f64,
    pub std_error: f64,
    pub n_defaulted: usize,
    pub n_paths: usize,
}

impl McResult {
    /// (estimate - target) / std_error; zero when both coincide.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = self.estimate - target;
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }
}

/// Per-step constants shared by all paths, in units of x₀.
struct Stepper {
    scheme: Scheme,
    /// 1 + A dt for x, 1 + A dt / 2 for √x.
    growth: f64,
    /// Additive drift per step: θ c Δv / 2 for x, (2θ-1) c Δv / 8 (to be
    /// divided by the current state) for √x.
    drift: Vec<f64>,
    /// Noise scale per step: √(c Δv) for x, √(c Δv) / 2 for √x.
    diffusion: Vec<f64>,
    times: Vec<f64>,
    seed: u64,
}

/// Bridge crossing probabilities below e^(-40) are not sampled.
const BRIDGE_CUTOFF: f64 = 40.0;

impl Stepper {
    fn new(params: &ModelParams, cfg: &McConfig) -> Self {
        let coef = EffectiveCoefficients::new(params);
        let m = coef.two_minus_alpha();
        // c = σ²(2-α)²/x₀ with σ² = σ₀² x₀
        let c = params.sigma0 * params.sigma0 * m * m;
        let dt = cfg.dt();
        let times: Vec<f64> = (0..=cfg.n_steps)
            .map(|k| if k == cfg.n_steps { cfg.horizon } else { k as f64 * dt })
            .collect();
        let clock_steps = times
            .windows(2)
            .map(|w| coef.variance_clock(w[1]) - coef.variance_clock(w[0]));
        let (growth, (drift, diffusion)) = match cfg.scheme {
            Scheme::EulerFullTruncation => (
                1.0 + coef.a_drift * dt,
                clock_steps
                    .map(|dv| (0.5 * coef.theta * c * dv, (c * dv).sqrt()))
                    .unzip(),
            ),
            Scheme::LampertiBridge => (
                1.0 + 0.5 * coef.a_drift * dt,
                clock_steps
                    .map(|dv| ((2.0 * coef.theta - 1.0) * c * dv / 8.0, 0.5 * (c * dv).sqrt()))
                    .unzip(),
            ),
        };
        Self {
            scheme: cfg.scheme,
            growth,
            drift,
            diffusion,
            times,
            seed: cfg.seed,
        }
    }

    fn rng(&self, path: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(path as u64);
        rng
    }

    /// Advances the state by step `k`; `None` means absorbed.
    #[inline(always)]
    fn step(&self, k: usize, state: f64, rng: &mut ChaCha8Rng) -> Option<f64> {
        let z: f64 = rng.sample(StandardNormal);
        match self.scheme {
            Scheme::EulerFullTruncation => {
                let next = state * self.growth + self.drift[k] + self.diffusion[k] * state.max(0.0).sqrt() * z;
                (next > 0.0).then_some(next)
            }
            Scheme::LampertiBridge => {
                let sd = self.diffusion[k];
                let next = state * self.growth + self.drift[k] / state + sd * z;
                if next <= 0.0 {
                    return None;
                }
                // P(a Brownian bridge from state to next touches 0)
                let exponent = 2.0 * state * next / (sd * sd);
                if exponent < BRIDGE_CUTOFF && rng.random::<f64>() < (-exponent).exp() {
                    return None;
                }
                Some(next)
            }
        }
    }

    /// Converts the simulated state back to x / x₀.
    fn normalized_x(&self, state: f64) -> f64 {
        match self.scheme {
            Scheme::EulerFullTruncation => state,
            Scheme::LampertiBridge => state * state,
        }
    }

    /// Runs one path; returns its default time, if any.
    fn run(&self, path: usize) -> Option<f64> {
        let mut rng = self.rng(path);
        let mut state = 1.0f64;
        for k in 0..self.drift.len() {
            match self.step(k, state, &mut rng) {
                Some(next) => state = next,
                None => return Some(self.times[k + 1]),
            }
        }
        None
    }

    /// Runs one path and records x / x₀ at every grid time; absorbed paths
    /// stay at zero.
    fn trace(&self, path: usize) -> Vec<f64> {
        let mut rng = self.rng(path);
        let mut out = Vec::with_capacity(self.times.len());
        let mut state = Some(1.0f64);
        out.push(1.0);
        for k in 0..self.drift.len() {
            state = state.and_then(|s| self.step(k, s, &mut rng));
            out.push(state.map_or(0.0, |s| self.normalized_x(s)));
        }
        out
    }
}

/// Simulated default times, one entry per path in path order.
#[derive(Debug, Clone, PartialEq)]
pub struct DefaultTimes {
    times: Vec<Option<f64>>,
    horizon: f64,
}

impl DefaultTimes {
    pub fn as_slice(&self) -> &[Option<f64>] {
        &self.times
    }

    pub fn into_vec(self) -> Vec<Option<f64>> {
        self.times
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn n_paths(&self) -> usize {
        self.times.len()
    }

    /// Fraction of paths absorbed by time t, with binomial standard error.
    pub fn default_probability(&self, t: f64) -> McResult {
        let n = self.times.len();
        let defaulted = self
            .times
            .iter()
            .filter(|tau| matches!(tau, Some(s) if *s <= t))
            .count();
        let p = defaulted as f64 / n as f64;
        McResult {
            estimate: p,
            std_error: (p * (1.0 - p) / n as f64).sqrt(),
            n_defaulted: defaulted,
            n_paths: n,
        }
    }

    /// Par spread in bps from per-path discounted legs; the standard error
    /// comes from [`SPREAD_BATCHES`] contiguous batches of paths.
    pub fn cds_spread(&self, rate: f64, contract: &CdsContract) -> Result<McResult, McError> {
        let contract = contract.validate()?;
        let dates = contract.payment_times();
        let needed = dates.last().copied().unwrap_or(0.0).max(contract.maturity);
        if self.horizon < needed - 1e-12 {
            return Err(McError::HorizonTooShort {
                horizon: self.horizon,
                needed,
            });
        }
        let loss = (1.0 - contract.recovery) * contract.notional;
        let coupon = contract.accrual() * contract.notional;
        let discount: Vec<f64> = dates.iter().map(|t| coupon * (-rate * t).exp()).collect();

        let legs: Vec<(f64, f64)> = self
            .times
            .iter()
            .map(|tau| {
                let protection = match tau {
                    Some(s) if *s <= contract.maturity => loss * (-rate * s).exp(),
                    _ => 0.0,
                };
                let alive_until = tau.unwrap_or(f64::INFINITY);
                let annuity = compensated_sum(
                    dates
                        .iter()
                        .zip(&discount)
                        .take_while(|(t, _)| alive_until > **t)
                        .map(|(_, d)| *d),
                );
                (protection, annuity)
            })
            .collect();

        let ratio = |chunk: &[(f64, f64)]| {
            let p = compensated_sum(chunk.iter().map(|l| l.0));
            let a = compensated_sum(chunk.iter().map(|l| l.1));
            (p, a)
        };
        let (p_all, a_all) = ratio(&legs);
        if a_all <= 0.0 {
            return Err(McError::NoPremium);
        }
        let estimate = 1e4 * p_all / a_all;

        let n = legs.len();
        let batches = SPREAD_BATCHES.min(n);
        let std_error = if batches < 2 {
            0.0
        } else {
            let spreads: Vec<f64> = (0..batches)
                .map(|b| {
                    let (p, a) = ratio(&legs[b * n / batches..(b + 1) * n / batches]);
                    if a > 0.0 {
                        1e4 * p / a
                    } else {
                        f64::INFINITY
                    }
                })
                .collect();
            if spreads.iter().any(|s| s.is_infinite()) {
                f64::INFINITY
            } else {
                let mean = compensated_sum(spreads.iter().copied()) / batches as f64;
                let var = compensated_sum(spreads.iter().map(|s| (s - mean).powi(2))) / (batches - 1) as f64;
                (var / batches as f64).sqrt()
            }
        };
        let n_defaulted = self
            .times
            .iter()
            .filter(|tau| matches!(tau, Some(s) if *s <= contract.maturity))
            .count();
        Ok(McResult {
            estimate,
            std_error,
            n_defaulted,
            n_paths: n,
        })
    }
}

/// Simulates `cfg.n_paths` independent paths and returns their default times.
pub fn simulate_fpt(params: &ModelParams, cfg: &McConfig) -> Result<DefaultTimes, McError> {
    let params = params.validate()?;
    let cfg = cfg.validate()?;
    let stepper = Stepper::new(&params, &cfg);
    let times = cfg.execution.map_indexed(cfg.n_paths, |i| stepper.run(i));
    Ok(DefaultTimes {
        times,
        horizon: cfg.horizon,
    })
}

/// Full trajectory of path `path` in the x = S^(2-α) coordinate, on the grid
/// 0, dt, …, horizon. Uses the same random stream as [`simulate_fpt`].
pub fn sample_path(params: &ModelParams, cfg: &McConfig, path: usize) -> Result<Vec<f64>, McError> {
    let params = params.validate()?;
    let cfg = cfg.validate()?;
    let x0 = EffectiveCoefficients::new(&params).x0;
    let stepper = Stepper::new(&params, &cfg);
    Ok(stepper.trace(path).into_iter().map(|y| y * x0).collect())
}

/// Monte-Carlo estimate of the probability of default by `cfg.horizon`.
pub fn mc_default_probability(params: &ModelParams, cfg: &McConfig) -> Result<McResult, McError> {
    Ok(simulate_fpt(params, cfg)?.default_probability(cfg.horizon))
}

/// Monte-Carlo par spread (bps) of `contract`; `cfg.horizon` must reach the
/// last premium date.
pub fn mc_cds_spread(params: &ModelParams, contract: &CdsContract, cfg: &McConfig) -> Result<McResult, McError> {
    simulate_fpt(params, cfg)?.cds_spread(params.r, contract)
}
