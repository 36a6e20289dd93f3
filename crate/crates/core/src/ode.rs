//! Right-hand sides, coordinate frames, exact special solutions, scalar
//! potentials, and residual evaluation for the three profile equations.
//!
//! With `σ = +1` (forward), `σ = −1` (backward), `σ = 0` (steady), the
//! physical-frame profile equation reads
//!
//! `w'' + ((n−1)/r + σ r/2) w' + σ w/(p−1) + w^p = 0`.
//!
//! The scaled variable `v(r) = r^α w(r)` satisfies
//!
//! `v'' + ((1+β)/r + σ r/2) v' + (v^p − γ v)/r² = 0`,
//!
//! where the whole drift dependence on the kind sits in the single `σ r/2`
//! term. Dividing by `L` gives the normalized equation for `h = v/L`
//! (coefficient `γ(h^p − h)/r²`), and in log radius `s = log r` the steady
//! equation becomes the autonomous system `v̈ + β v̇ + v^p − γ v = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::Params;
use crate::numerics::quadrature_weights;

/// Which of the three profile equations a state or trajectory belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    /// Expanding self-similar profiles (`σ = +1`).
    Forward,
    /// Shrinking (blow-up) self-similar profiles (`σ = −1`).
    Backward,
    /// Steady radial states (`σ = 0`).
    Steady,
}

impl ProfileKind {
    /// The drift sign `σ` in the unified equation.
    pub fn sigma(self) -> f64 {
        match self {
            ProfileKind::Forward => 1.0,
            ProfileKind::Backward => -1.0,
            ProfileKind::Steady => 0.0,
        }
    }
}

/// Coordinate/value frame a state is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// The profile itself: `(r, w, w')`.
    PhysicalW,
    /// Scaled by the singular power: `(r, v, v')` with `v = r^α w`.
    ScaledV,
    /// Normalized by the singular amplitude: `(r, h, h')` with `h = v/L`.
    NormalizedH,
    /// Log-radius phase variables: `(s, v, dv/ds)` with `s = log r`.
    LogPhase,
}

/// One point of a profile in a declared frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileState {
    /// Radius `r > 0`, or log radius `s ∈ ℝ` in the log-phase frame.
    pub coord: f64,
    /// Profile value in the frame's variable.
    pub value: f64,
    /// First derivative of the value with respect to `coord`.
    pub slope: f64,
    /// Frame the values live in.
    pub frame: Frame,
    /// Equation the state belongs to.
    pub kind: ProfileKind,
    /// Parameters the equation was built with.
    pub params: Params,
}

impl ProfileState {
    /// Builds a state after checking the frame's coordinate and finiteness
    /// invariants.
    pub fn new(
        coord: f64,
        value: f64,
        slope: f64,
        frame: Frame,
        kind: ProfileKind,
        params: Params,
    ) -> Result<Self> {
        if !coord.is_finite() || (frame != Frame::LogPhase && coord <= 0.0) {
            return Err(Error::InvalidState(format!(
                "coordinate {coord} invalid for frame {frame:?} (radial frames need r > 0)"
            )));
        }
        if !value.is_finite() || !slope.is_finite() {
            return Err(Error::InvalidState(format!(
                "non-finite state (value = {value}, slope = {slope})"
            )));
        }
        if frame == Frame::NormalizedH {
            params.singular_amplitude_checked()?;
        }
        Ok(ProfileState {
            coord,
            value,
            slope,
            frame,
            kind,
            params,
        })
    }
}

/// Raises `base` to the power `p`, with the sign conventions the profiles
/// need: nonnegative bases use `powf`; negative bases are allowed only for
/// integer `p` (odd/even sign rule) and are a hard error otherwise —
/// positivity is structural, and NaN must never propagate silently.
pub(crate) fn signed_power(base: f64, p: f64) -> Result<f64> {
    if base >= 0.0 {
        Ok(base.powf(p))
    } else if p.fract() == 0.0 && p.abs() < 9.0e15 {
        let mag = (-base).powf(p);
        Ok(if (p as i64).rem_euclid(2) == 0 {
            mag
        } else {
            -mag
        })
    } else {
        Err(Error::NegativePower { base, exponent: p })
    }
}

/// First-order system derivative `(d value, d slope)` for a state.
///
/// Every frame/kind pair maps to its exact equation; the log-phase frame is
/// autonomous only for the steady equation and signals
/// [`Error::UnsupportedFrameKind`] for the other kinds rather than silently
/// approximating.
pub fn rhs(state: &ProfileState) -> Result<(f64, f64)> {
    let p = &state.params;
    let sigma = state.kind.sigma();
    let (r, y, yp) = (state.coord, state.value, state.slope);
    let dslope = match state.frame {
        Frame::PhysicalW => {
            -(((p.n - 1.0) / r + sigma * r / 2.0) * yp)
                - sigma * y / (p.p - 1.0)
                - signed_power(y, p.p)?
        }
        Frame::ScaledV => {
            -(((1.0 + p.beta) / r + sigma * r / 2.0) * yp)
                - (signed_power(y, p.p)? - p.gamma * y) / (r * r)
        }
        Frame::NormalizedH => {
            p.singular_amplitude_checked()?;
            -(((1.0 + p.beta) / r + sigma * r / 2.0) * yp)
                - p.gamma * (signed_power(y, p.p)? - y) / (r * r)
        }
        Frame::LogPhase => {
            if state.kind != ProfileKind::Steady {
                return Err(Error::UnsupportedFrameKind {
                    frame: state.frame,
                    kind: state.kind,
                });
            }
            -p.beta * yp - (signed_power(y, p.p)? - p.gamma * y)
        }
    };
    Ok((yp, dslope))
}

fn to_scaled(state: &ProfileState) -> Result<ProfileState> {
    let p = &state.params;
    let out = match state.frame {
        Frame::ScaledV => *state,
        Frame::PhysicalW => {
            let r = state.coord;
            let ra = r.powf(p.alpha);
            ProfileState {
                coord: r,
                value: ra * state.value,
                slope: p.alpha * ra / r * state.value + ra * state.slope,
                frame: Frame::ScaledV,
                ..*state
            }
        }
        Frame::NormalizedH => {
            let l = p.singular_amplitude_checked()?;
            ProfileState {
                value: l * state.value,
                slope: l * state.slope,
                frame: Frame::ScaledV,
                ..*state
            }
        }
        Frame::LogPhase => {
            let r = state.coord.exp();
            ProfileState {
                coord: r,
                value: state.value,
                slope: state.slope / r,
                frame: Frame::ScaledV,
                ..*state
            }
        }
    };
    Ok(out)
}

fn from_scaled(state: &ProfileState, target: Frame) -> Result<ProfileState> {
    debug_assert_eq!(state.frame, Frame::ScaledV);
    let p = &state.params;
    let out = match target {
        Frame::ScaledV => *state,
        Frame::PhysicalW => {
            let r = state.coord;
            let ra = r.powf(p.alpha);
            ProfileState {
                coord: r,
                value: state.value / ra,
                slope: state.slope / ra - p.alpha * state.value / (ra * r),
                frame: Frame::PhysicalW,
                ..*state
            }
        }
        Frame::NormalizedH => {
            let l = p.singular_amplitude_checked()?;
            ProfileState {
                value: state.value / l,
                slope: state.slope / l,
                frame: Frame::NormalizedH,
                ..*state
            }
        }
        Frame::LogPhase => ProfileState {
            coord: state.coord.ln(),
            value: state.value,
            slope: state.slope * state.coord,
            frame: Frame::LogPhase,
            ..*state
        },
    };
    Ok(out)
}

/// Converts a state to another frame by the exact chain rule through
/// `v = r^α w`, `h = v/L`, `s = log r`. Round trips are identities to
/// rounding error.
pub fn transform_state(state: &ProfileState, target: Frame) -> Result<ProfileState> {
    if state.frame == target {
        return Ok(*state);
    }
    from_scaled(&to_scaled(state)?, target)
}

/// The explicit singular solution `U_*(r) = L r^{−α}` and its derivative at
/// one radius. Requires `p > p_sg` (so `L` exists) and `r > 0`.
pub fn u_star(params: &Params, r: f64) -> Result<(f64, f64)> {
    let l = params.singular_amplitude_checked()?;
    if !(r > 0.0) {
        return Err(Error::InvalidState(format!("u_star needs r > 0, got {r}")));
    }
    let value = l * r.powf(-params.alpha);
    Ok((value, -params.alpha * value / r))
}

/// Scalar potentials of the energy/contraction analysis around the singular
/// amplitude, all closed-form:
///
/// * `d(ξ) = α²(ξ^p − ξ)` — derivative of `b`;
/// * `b(ξ) = α²(ξ^{p+1}/(p+1) − ξ²/2)` — normalized energy potential;
/// * `a(ξ) = ξ^{p+1}/(p+1) − L^{p−1} ξ²/2` — scaled energy potential;
/// * `f(u) = (L+u)^p − L^p − p L^{p−1} u` — quadratic remainder of the
///   nonlinearity linearized at `L`.
///
/// `f` takes the *perturbation* `u = v − L` as its argument: the remainder
/// display is sometimes written with the solution value in place of the
/// perturbation, but only the `u`-reading makes `f(0) = f'(0) = 0` and
/// `f = O(u²)`; a test pins this down by showing the value-reading is not
/// small at `u = 0`.
#[derive(Clone, Copy, Debug)]
pub struct ScalarKit {
    params: Params,
    singular_amplitude: f64,
}

impl ScalarKit {
    /// Builds the kit; requires `p > p_sg` so `L` exists.
    pub fn new(params: &Params) -> Result<Self> {
        let singular_amplitude = params.singular_amplitude_checked()?;
        Ok(ScalarKit {
            params: *params,
            singular_amplitude,
        })
    }

    /// `d(ξ) = α²(ξ^p − ξ)`.
    pub fn d(&self, xi: f64) -> Result<f64> {
        let p = &self.params;
        Ok(p.alpha * p.alpha * (signed_power(xi, p.p)? - xi))
    }

    /// `b(ξ) = α²(ξ^{p+1}/(p+1) − ξ²/2)`; `b' = d`, with the global minimum
    /// at `ξ = 1` on `(0, ∞)`.
    pub fn b(&self, xi: f64) -> Result<f64> {
        let p = &self.params;
        Ok(p.alpha * p.alpha * (signed_power(xi, p.p + 1.0)? / (p.p + 1.0) - xi * xi / 2.0))
    }

    /// `a(ξ) = ξ^{p+1}/(p+1) − L^{p−1} ξ²/2`; `a' (ξ) = ξ^p − L^{p−1} ξ`.
    pub fn a(&self, xi: f64) -> Result<f64> {
        let p = &self.params;
        Ok(signed_power(xi, p.p + 1.0)? / (p.p + 1.0) - p.gamma * xi * xi / 2.0)
    }

    /// `f(u) = (L+u)^p − L^p − p L^{p−1} u` with `L + u > 0` required.
    pub fn f_remainder(&self, u: f64) -> Result<f64> {
        let p = &self.params;
        let l = self.singular_amplitude;
        if l + u <= 0.0 {
            return Err(Error::InvalidState(format!(
                "remainder argument u = {u} leaves the positivity region (L = {l})"
            )));
        }
        Ok((l + u).powf(p.p) - l.powf(p.p) - p.p * p.gamma * u)
    }
}

/// Why an integration (or sampling) ended.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum TerminationReason {
    /// Reached the far end of the requested span.
    SpanEnd,
    /// The value crossed the floor threshold going down (profile hit zero).
    HitFloor {
        /// Localized crossing radius.
        radius: f64,
    },
    /// The value crossed the ceiling threshold going up (escape/blow-up).
    HitCeiling {
        /// Localized crossing radius.
        radius: f64,
    },
    /// The step budget ran out before the span was covered.
    Budget,
    /// The adaptive step shrank below the resolvable width; the trajectory
    /// holds the last good state.
    StepUnderflow,
    /// Not an integration: the trajectory holds analytic samples.
    Sampled,
}

impl TerminationReason {
    /// Whether this termination leaves the outcome undecided (the span was
    /// not covered and no event fired).
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            TerminationReason::Budget | TerminationReason::StepUnderflow
        )
    }
}

/// Metadata shared by every sample of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    /// Equation kind.
    pub kind: ProfileKind,
    /// Frame of the samples.
    pub frame: Frame,
    /// Parameters of the equation.
    pub params: Params,
    /// Relative tolerance the integrator ran at (0 for analytic samples).
    pub rel_tol: f64,
    /// Absolute tolerance the integrator ran at (0 for analytic samples).
    pub abs_tol: f64,
    /// Why the trajectory ended.
    pub termination: TerminationReason,
    /// Accepted adaptive steps (0 for analytic samples).
    pub steps: usize,
}

/// An ordered, immutable sampled solution.
///
/// Coordinates are strictly monotone — increasing for outward runs,
/// decreasing for inward runs — and all samples share the metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Sample coordinates (radius, or log radius in the log-phase frame).
    pub coords: Vec<f64>,
    /// Profile values per coordinate.
    pub values: Vec<f64>,
    /// Profile slopes per coordinate.
    pub slopes: Vec<f64>,
    /// Shared metadata.
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    /// Builds a trajectory from parallel sample arrays, enforcing equal
    /// lengths and strictly monotone coordinates.
    pub fn from_samples(
        coords: Vec<f64>,
        values: Vec<f64>,
        slopes: Vec<f64>,
        meta: TrajectoryMeta,
    ) -> Result<Self> {
        if coords.len() != values.len() || coords.len() != slopes.len() {
            return Err(Error::InvalidOptions(
                "trajectory sample arrays must have equal lengths".into(),
            ));
        }
        if coords.len() < 2 {
            return Err(Error::InsufficientSamples {
                got: coords.len(),
                need: 2,
            });
        }
        let ascending = coords[1] > coords[0];
        for w in coords.windows(2) {
            let ok = if ascending { w[1] > w[0] } else { w[1] < w[0] };
            if !ok {
                return Err(Error::InvalidOptions(format!(
                    "coordinates not strictly monotone near {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Trajectory {
            coords,
            values,
            slopes,
            meta,
        })
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    /// Whether the trajectory is empty (never true for constructed ones).
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Whether coordinates increase along the sample order.
    pub fn is_ascending(&self) -> bool {
        self.coords[self.coords.len() - 1] > self.coords[0]
    }

    /// Smallest coordinate covered.
    pub fn coord_min(&self) -> f64 {
        self.coords[0].min(self.coords[self.coords.len() - 1])
    }

    /// Largest coordinate covered.
    pub fn coord_max(&self) -> f64 {
        self.coords[0].max(self.coords[self.coords.len() - 1])
    }

    /// The `i`-th sample as a full state.
    pub fn state(&self, i: usize) -> ProfileState {
        ProfileState {
            coord: self.coords[i],
            value: self.values[i],
            slope: self.slopes[i],
            frame: self.meta.frame,
            kind: self.meta.kind,
            params: self.meta.params,
        }
    }

    /// The first sample.
    pub fn first_state(&self) -> ProfileState {
        self.state(0)
    }

    /// The last sample (the terminal state of an integration).
    pub fn last_state(&self) -> ProfileState {
        self.state(self.coords.len() - 1)
    }

    /// Converts every sample to another frame (see [`transform_state`]).
    pub fn transform(&self, target: Frame) -> Result<Trajectory> {
        if target == self.meta.frame {
            return Ok(self.clone());
        }
        let mut coords = Vec::with_capacity(self.len());
        let mut values = Vec::with_capacity(self.len());
        let mut slopes = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let s = transform_state(&self.state(i), target)?;
            coords.push(s.coord);
            values.push(s.value);
            slopes.push(s.slope);
        }
        let meta = TrajectoryMeta {
            frame: target,
            ..self.meta
        };
        Trajectory::from_samples(coords, values, slopes, meta)
    }
}

/// Samples the singular solution `U_*` analytically on a log-spaced grid,
/// in any frame and under any kind (it solves all three equations when
/// `p > p_sg`).
pub fn sample_u_star(
    params: &Params,
    kind: ProfileKind,
    frame: Frame,
    r_lo: f64,
    r_hi: f64,
    n: usize,
) -> Result<Trajectory> {
    params.singular_amplitude_checked()?;
    if !(r_lo > 0.0 && r_hi > r_lo) {
        return Err(Error::InvalidOptions(format!(
            "need 0 < r_lo < r_hi, got [{r_lo}, {r_hi}]"
        )));
    }
    if n < 2 {
        return Err(Error::InsufficientSamples { got: n, need: 2 });
    }
    let mut coords = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    let mut slopes = Vec::with_capacity(n);
    let ratio = (r_hi / r_lo).ln();
    for i in 0..n {
        let r = r_lo * (ratio * i as f64 / (n - 1) as f64).exp();
        let (w, wp) = u_star(params, r)?;
        let physical = ProfileState {
            coord: r,
            value: w,
            slope: wp,
            frame: Frame::PhysicalW,
            kind,
            params: *params,
        };
        let s = transform_state(&physical, frame)?;
        coords.push(s.coord);
        values.push(s.value);
        slopes.push(s.slope);
    }
    let meta = TrajectoryMeta {
        kind,
        frame,
        params: *params,
        rel_tol: 0.0,
        abs_tol: 0.0,
        termination: TerminationReason::Sampled,
        steps: 0,
    };
    Trajectory::from_samples(coords, values, slopes, meta)
}

/// Samples the constant backward profile `w ≡ κ` on a log-spaced grid.
pub fn sample_constant_kappa(
    params: &Params,
    r_lo: f64,
    r_hi: f64,
    n: usize,
) -> Result<Trajectory> {
    if !(r_lo > 0.0 && r_hi > r_lo) {
        return Err(Error::InvalidOptions(format!(
            "need 0 < r_lo < r_hi, got [{r_lo}, {r_hi}]"
        )));
    }
    if n < 2 {
        return Err(Error::InsufficientSamples { got: n, need: 2 });
    }
    let ratio = (r_hi / r_lo).ln();
    let coords: Vec<f64> = (0..n)
        .map(|i| r_lo * (ratio * i as f64 / (n - 1) as f64).exp())
        .collect();
    let meta = TrajectoryMeta {
        kind: ProfileKind::Backward,
        frame: Frame::PhysicalW,
        params: *params,
        rel_tol: 0.0,
        abs_tol: 0.0,
        termination: TerminationReason::Sampled,
        steps: 0,
    };
    Trajectory::from_samples(coords, vec![params.kappa; n], vec![0.0; n], meta)
}

/// Maximum pointwise residual of the trajectory in its own equation,
/// normalized by `max(1, |value|)` per sample.
///
/// Both equations of the first-order system — `d(value) = slope` and
/// `d(slope) = rhs(value, slope)` — are checked in conservative form on a
/// sliding seven-node window around each sample (one-sided at the edges):
/// the jump of the left-hand state across the window is compared with the
/// interpolatory-quadrature integral of the right-hand side, and the gap is
/// divided by the window width to restore the units of a pointwise defect.
/// For an exact solution both gaps vanish identically; for a near-solution
/// they agree with the plugged-in derivative defect to leading order.
///
/// The integral form exists because differentiating steep sampled data is
/// badly conditioned: near a singular origin the slopes grow like a power
/// of `1/coord` and sliding-stencil differentiation amplifies their
/// representation rounding by the inverse spacing, drowning residuals of
/// exact solutions. Differencing a window jump against a quadrature keeps
/// the rounding at the scale of the samples themselves.
pub fn residual_of(traj: &Trajectory) -> Result<f64> {
    if traj.len() < 3 {
        return Err(Error::InsufficientSamples {
            got: traj.len(),
            need: 3,
        });
    }
    // Windows need ascending coordinates; reverse a copy if needed.
    let (coords, values, slopes): (Vec<f64>, Vec<f64>, Vec<f64>) = if traj.is_ascending() {
        (
            traj.coords.clone(),
            traj.values.clone(),
            traj.slopes.clone(),
        )
    } else {
        (
            traj.coords.iter().rev().copied().collect(),
            traj.values.iter().rev().copied().collect(),
            traj.slopes.iter().rev().copied().collect(),
        )
    };
    let n = coords.len();
    let mut d_slopes = vec![0.0f64; n];
    for i in 0..n {
        let state = ProfileState {
            coord: coords[i],
            value: values[i],
            slope: slopes[i],
            frame: traj.meta.frame,
            kind: traj.meta.kind,
            params: traj.meta.params,
        };
        let (_, ds) = rhs(&state)?;
        d_slopes[i] = ds;
    }
    let width = 7usize.min(n);
    let mut worst = 0.0f64;
    for i in 0..n {
        let lo = i.saturating_sub(width / 2).min(n - width);
        let nodes = &coords[lo..lo + width];
        let w = quadrature_weights(nodes)?;
        let span = nodes[width - 1] - nodes[0];
        let q_value: f64 = w
            .iter()
            .zip(&slopes[lo..lo + width])
            .map(|(wi, s)| wi * s)
            .sum();
        let q_slope: f64 = w
            .iter()
            .zip(&d_slopes[lo..lo + width])
            .map(|(wi, d)| wi * d)
            .sum();
        let gap_value = values[lo + width - 1] - values[lo] - q_value;
        let gap_slope = slopes[lo + width - 1] - slopes[lo] - q_slope;
        let scale = values[i].abs().max(1.0);
        let defect = gap_value.abs().max(gap_slope.abs()) / (span * scale);
        worst = worst.max(defect);
    }
    Ok(worst)
}
