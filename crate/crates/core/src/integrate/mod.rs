//! Adaptive integration of profile states, principled starting data at the
//! regular center and at the singular solution, and the integral identities
//! (energy ledger, weighted-slope balance) evaluated on trajectories.

mod dopri;
mod ledger;
mod starts;

pub use ledger::{energy_ledger, pohozaev_check, EnergyLedger, PohozaevReport};
pub use starts::{series_start, series_start_auto, singular_start, spiral_start, IndicialMode};

use crate::error::{Error, Result};
use crate::ode::{Frame, ProfileState, Trajectory};

/// Controls for one adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationOptions {
    /// Starting coordinate; must match the initial state's coordinate.
    pub r_start: f64,
    /// Target coordinate; may be smaller than `r_start` for inward runs.
    pub r_end: f64,
    /// Relative error tolerance per step, in `(1e-14, 1e-2)`.
    pub rel_tol: f64,
    /// Absolute error tolerance per step, in `(1e-14, 1e-2)`.
    pub abs_tol: f64,
    /// Budget of accepted steps before giving up.
    pub max_steps: usize,
    /// Downward-crossing event threshold on the value (profile hits zero).
    pub value_floor: Option<f64>,
    /// Upward-crossing event threshold on the value (escape). The event is
    /// armed only once the value has been observed below the threshold, so
    /// large starting values do not trigger it on the way down.
    pub value_ceiling: Option<f64>,
    /// Number of output samples on the span (log-spaced on radial frames,
    /// uniform in the log-radius frame).
    pub n_output: usize,
}

impl IntegrationOptions {
    /// Options with the library defaults: tolerances `1e-10`/`1e-12`, floor
    /// at half the absolute tolerance, ceiling at `1e8`, a 200 000-step
    /// budget, and 1000 output samples.
    pub fn new(r_start: f64, r_end: f64) -> Self {
        IntegrationOptions {
            r_start,
            r_end,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 200_000,
            value_floor: Some(0.5e-12),
            value_ceiling: Some(1e8),
            n_output: 1000,
        }
    }

    /// Checks the option invariants shared by every integration.
    pub fn validate(&self) -> Result<()> {
        for (name, tol) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(1e-15..1e-2).contains(&tol) {
                return Err(Error::InvalidOptions(format!(
                    "{name} = {tol} outside the supported interval [1e-15, 1e-2)"
                )));
            }
        }
        if !self.r_start.is_finite() || !self.r_end.is_finite() || self.r_start == self.r_end {
            return Err(Error::InvalidOptions(format!(
                "degenerate span [{}, {}]",
                self.r_start, self.r_end
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidOptions("max_steps must be positive".into()));
        }
        if self.n_output < 2 {
            return Err(Error::InvalidOptions(format!(
                "n_output = {} too small (need at least 2)",
                self.n_output
            )));
        }
        if let (Some(f), Some(c)) = (self.value_floor, self.value_ceiling) {
            if !(f < c) {
                return Err(Error::InvalidOptions(format!(
                    "value_floor {f} must lie below value_ceiling {c}"
                )));
            }
        }
        for (name, v) in [
            ("value_floor", self.value_floor),
            ("value_ceiling", self.value_ceiling),
        ] {
            if let Some(x) = v {
                if !x.is_finite() {
                    return Err(Error::InvalidOptions(format!(
                        "{name} must be finite, got {x}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Integrates an initial state across the option span with the embedded
/// 5(4) Runge–Kutta pair, honoring floor/ceiling events, and returns the
/// sampled trajectory. Numerical outcomes (events, budget exhaustion, step
/// underflow) are reported through the trajectory's termination reason, not
/// as errors.
pub fn integrate(initial: &ProfileState, options: &IntegrationOptions) -> Result<Trajectory> {
    options.validate()?;
    let scale = options.r_start.abs().max(1.0);
    if (initial.coord - options.r_start).abs() > 1e-12 * scale {
        return Err(Error::InvalidOptions(format!(
            "initial coordinate {} does not match r_start {}",
            initial.coord, options.r_start
        )));
    }
    if initial.frame != Frame::LogPhase && (options.r_start <= 0.0 || options.r_end <= 0.0) {
        return Err(Error::InvalidOptions(format!(
            "radial frames need a positive span, got [{}, {}]",
            options.r_start, options.r_end
        )));
    }
    dopri::run(initial, options)
}
