//! Principled initial data: interior series expansions at the regular
//! center, and indicial-mode perturbations of the singular solution.

use crate::error::{Error, Result};
use crate::exponents::{indicial_roots, IndicialRoots, Params};
use crate::ode::{Frame, ProfileKind, ProfileState};

/// Interior series coefficients `w(r) ≈ a + c r² + d r⁴` for a profile that
/// is regular at the center with `w(0) = a`, `w'(0) = 0`.
///
/// Matching powers of `r` in the profile equation gives
/// `c = −(σ a/(p−1) + a^p) / (2n)` and
/// `d = −c (σ p/(p−1) + p a^{p−1}) / (4(n+2))`.
pub fn series_coefficients(kind: ProfileKind, params: &Params, a: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::NonPositiveStart(a));
    }
    let sigma = kind.sigma();
    let p = params.p;
    let c = -(sigma * a / (p - 1.0) + a.powf(p)) / (2.0 * params.n);
    let d = -c * (sigma * p / (p - 1.0) + p * a.powf(p - 1.0)) / (4.0 * (params.n + 2.0));
    Ok((c, d))
}

/// Starting state at a small explicit radius `eps` from the interior series.
pub fn series_start(kind: ProfileKind, params: &Params, a: f64, eps: f64) -> Result<ProfileState> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidOptions(format!(
            "start radius must be positive, got {eps}"
        )));
    }
    let (c, d) = series_coefficients(kind, params, a)?;
    let r2 = eps * eps;
    ProfileState::new(
        eps,
        a + c * r2 + d * r2 * r2,
        2.0 * c * eps + 4.0 * d * r2 * eps,
        Frame::PhysicalW,
        kind,
        *params,
    )
}

/// Starting state with an automatically chosen radius: begins at `1e-4` and
/// halves until the quartic term `|d| eps⁴` is below `rel_tol · a`, so the
/// truncated series is accurate to the integration tolerance.
///
/// Returns the state together with the radius actually used.
pub fn series_start_auto(
    kind: ProfileKind,
    params: &Params,
    a: f64,
    rel_tol: f64,
) -> Result<(ProfileState, f64)> {
    if !(rel_tol > 0.0) || !rel_tol.is_finite() {
        return Err(Error::InvalidOptions(format!(
            "rel_tol must be positive, got {rel_tol}"
        )));
    }
    let (_, d) = series_coefficients(kind, params, a)?;
    let mut eps = 1e-4_f64;
    let eps_min = 1e-9;
    let budget = rel_tol * a.abs().max(1e-300);
    while d.abs() * eps.powi(4) > budget {
        eps *= 0.5;
        if eps < eps_min {
            return Err(Error::StartRadiusUnderflow {
                eps_max: eps_min,
                tol: rel_tol,
            });
        }
    }
    Ok((series_start(kind, params, a, eps)?, eps))
}

/// Which real indicial mode perturbs the singular solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndicialMode {
    /// The root of larger (less negative) real part — the slowly decaying
    /// mode that dominates generic perturbations.
    Slow,
    /// The root of smaller real part.
    Fast,
}

/// Starting state on (or near) the singular solution in the scaled frame:
/// `v(eps) = L + delta`, `v'(eps) = μ delta / eps`, where `μ` is the chosen
/// real indicial root of the linearization `r² φ'' + (1+β) r φ' + (p−1)γ φ = 0`.
///
/// `delta = 0` places the state exactly on the singular equilibrium and
/// needs no indicial structure; a nonzero `delta` requires the roots to be
/// real (above the upper critical exponent), otherwise the spiral start is
/// the correct tool and the error says so.
pub fn singular_start(
    kind: ProfileKind,
    params: &Params,
    delta: f64,
    mode: IndicialMode,
    eps: f64,
) -> Result<ProfileState> {
    let l = params.singular_amplitude_checked()?;
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidOptions(format!(
            "start radius must be positive, got {eps}"
        )));
    }
    if delta == 0.0 {
        return ProfileState::new(eps, l, 0.0, Frame::ScaledV, kind, *params);
    }
    if l + delta <= 0.0 {
        return Err(Error::InvalidState(format!(
            "perturbation delta = {delta} leaves the positive range (L = {l})"
        )));
    }
    let mu = match indicial_roots(params.n, params.p)? {
        IndicialRoots::Real { slow, fast } => match mode {
            IndicialMode::Slow => slow,
            IndicialMode::Fast => fast,
        },
        IndicialRoots::Complex { .. } => {
            return Err(Error::ComplexIndicialRoots {
                n: params.n,
                p: params.p,
            })
        }
    };
    ProfileState::new(
        eps,
        l + delta,
        mu * delta / eps,
        Frame::ScaledV,
        kind,
        *params,
    )
}

/// Starting state on an oscillatory (complex-root) perturbation of the
/// singular solution:
///
/// `v(r) = L + A (r/eps)^a cos(b log(r/eps) + phase)`
///
/// evaluated at `r = eps`, where `a ± i b` are the complex indicial roots.
/// With `phase = 0` the state starts at distance exactly `A` above the
/// singular amplitude. Real-root parameters must use [`singular_start`].
pub fn spiral_start(
    kind: ProfileKind,
    params: &Params,
    amplitude: f64,
    phase: f64,
    eps: f64,
) -> Result<ProfileState> {
    let l = params.singular_amplitude_checked()?;
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidOptions(format!(
            "start radius must be positive, got {eps}"
        )));
    }
    let (re, im) = match indicial_roots(params.n, params.p)? {
        IndicialRoots::Complex { real, imag } => (real, imag),
        IndicialRoots::Real { .. } => {
            return Err(Error::RealIndicialRoots {
                n: params.n,
                p: params.p,
            })
        }
    };
    let value = l + amplitude * phase.cos();
    if value <= 0.0 {
        return Err(Error::InvalidState(format!(
            "spiral amplitude {amplitude} at phase {phase} leaves the positive range (L = {l})"
        )));
    }
    let slope = amplitude * (re * phase.cos() - im * phase.sin()) / eps;
    ProfileState::new(eps, value, slope, Frame::ScaledV, kind, *params)
}
