//! Integral identities evaluated on trajectories.
//!
//! **Energy ledger** (normalized frame `h = r^α w / L`): with
//! `c(r) = r² h'²/2 + γ(h^{p+1}/(p+1) − h²/2)`, every solution satisfies the
//! exact three-term identity
//!
//! `c(R) − c(ρ) = −σ/2 ∫ h'² r³ dr − β ∫ h'² r dr`.
//!
//! The ledger reports the defect of this identity (`residual_exact`)
//! alongside the defect of the shorter two-term claim that drops the `β`
//! integral (`residual_stated`); the two agree exactly when `β = 0`, i.e. at
//! the Sobolev-critical exponent.
//!
//! **Weighted-slope balance** (scaled frame `v = r^α w`): with
//! `E(r) = r² v'²/2 + v^{p+1}/(p+1) − γ v²/2`, multiplying the scaled
//! equation by `r² v'` and integrating gives the exact balance
//!
//! `E(R) − E(ρ) + β ∫ v'² r dr + σ/2 ∫ v'² r³ dr = 0`,
//!
//! whose defect is a strong integrated test of a computed trajectory.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{cumulative_corrected_trapezoid, integral_with_refinement};
use crate::ode::{rhs, signed_power, Frame, ProfileKind, Trajectory};

/// Ascending `(coords, values, slopes, curvatures)` columns.
type CurvatureColumns = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);

/// Ascending copies of a trajectory's samples plus second derivatives from
/// the equation (legitimate here: quadrature corrections are allowed to use
/// the model, unlike residual evaluation, which must not).
fn ascending_with_curvature(traj: &Trajectory) -> Result<CurvatureColumns> {
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
    let mut curvatures = Vec::with_capacity(coords.len());
    for i in 0..coords.len() {
        let mut st = traj.state(0);
        st.coord = coords[i];
        st.value = values[i];
        st.slope = slopes[i];
        let (_, dd) = rhs(&st)?;
        curvatures.push(dd);
    }
    Ok((coords, values, slopes, curvatures))
}

/// Pointwise energy `c(r)` with its drift integrals and identity defects.
#[derive(Clone, Debug, Serialize)]
pub struct EnergyLedger {
    /// Equation kind the ledger was computed for.
    pub kind: ProfileKind,
    /// Ascending sample radii.
    pub r: Vec<f64>,
    /// Energy `c(r) = r² h'²/2 + γ(h^{p+1}/(p+1) − h²/2)` per radius.
    pub c: Vec<f64>,
    /// Cumulative `∫ h'² r³ dr` from the first radius.
    pub i_cubic: Vec<f64>,
    /// Cumulative `∫ h'² r dr` from the first radius.
    pub j_linear: Vec<f64>,
    /// Largest defect of the exact three-term identity, relative to the
    /// energy scale.
    pub residual_exact: f64,
    /// Largest defect of the two-term claim that drops the β integral,
    /// relative to the energy scale. Coincides with `residual_exact` only
    /// when β = 0.
    pub residual_stated: f64,
    /// Largest decrease of `c` between consecutive samples (0 when the
    /// energy is nondecreasing along the samples).
    pub largest_decrease: f64,
    /// Largest increase of `c` between consecutive samples (0 when the
    /// energy is nonincreasing along the samples).
    pub largest_increase: f64,
}

/// Evaluates the energy ledger. The trajectory must already be in the
/// normalized frame (`h = r^α w / L`), and the signed identity is only
/// meaningful for the time-dependent kinds, so steady input is rejected.
pub fn energy_ledger(traj: &Trajectory) -> Result<EnergyLedger> {
    if traj.meta.frame != Frame::NormalizedH {
        return Err(Error::FrameMismatch {
            expected: Frame::NormalizedH,
            got: traj.meta.frame,
        });
    }
    if traj.meta.kind == ProfileKind::Steady {
        return Err(Error::KindMismatch {
            expected: "forward or backward".into(),
            got: traj.meta.kind,
        });
    }
    if traj.len() < 3 {
        return Err(Error::InsufficientSamples {
            got: traj.len(),
            need: 3,
        });
    }
    let params = traj.meta.params;
    params.singular_amplitude_checked()?;
    let (r, h, hp, hpp) = ascending_with_curvature(traj)?;
    let n = r.len();
    let gamma = params.gamma;
    let p = params.p;

    let mut c = Vec::with_capacity(n);
    for i in 0..n {
        let kinetic = r[i] * r[i] * hp[i] * hp[i] / 2.0;
        let potential = gamma * (signed_power(h[i], p + 1.0)? / (p + 1.0) - h[i] * h[i] / 2.0);
        c.push(kinetic + potential);
    }

    // ∫ h'² r³ dr and ∫ h'² r dr with derivative-corrected panels.
    let gi: Vec<f64> = (0..n).map(|i| hp[i] * hp[i] * r[i].powi(3)).collect();
    let dgi: Vec<f64> = (0..n)
        .map(|i| 2.0 * hp[i] * hpp[i] * r[i].powi(3) + 3.0 * hp[i] * hp[i] * r[i] * r[i])
        .collect();
    let gj: Vec<f64> = (0..n).map(|i| hp[i] * hp[i] * r[i]).collect();
    let dgj: Vec<f64> = (0..n)
        .map(|i| 2.0 * hp[i] * hpp[i] * r[i] + hp[i] * hp[i])
        .collect();
    let i_cubic = cumulative_corrected_trapezoid(&r, &gi, &dgi)?;
    let j_linear = cumulative_corrected_trapezoid(&r, &gj, &dgj)?;

    let sigma = traj.meta.kind.sigma();
    let beta = params.beta;
    let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    let mut residual_exact = 0.0f64;
    let mut residual_stated = 0.0f64;
    let mut largest_decrease = 0.0f64;
    let mut largest_increase = 0.0f64;
    for i in 0..n {
        let dc = c[i] - c[0];
        residual_exact =
            residual_exact.max((dc + sigma / 2.0 * i_cubic[i] + beta * j_linear[i]).abs());
        residual_stated = residual_stated.max((dc + sigma / 2.0 * i_cubic[i]).abs());
        if i + 1 < n {
            largest_decrease = largest_decrease.max(c[i] - c[i + 1]);
            largest_increase = largest_increase.max(c[i + 1] - c[i]);
        }
    }

    Ok(EnergyLedger {
        kind: traj.meta.kind,
        r,
        c,
        i_cubic,
        j_linear,
        residual_exact: residual_exact / scale,
        residual_stated: residual_stated / scale,
        largest_decrease,
        largest_increase,
    })
}

/// Terms and defect of the weighted-slope balance over a window.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PohozaevReport {
    /// Equation kind.
    pub kind: ProfileKind,
    /// Inner window radius actually used (clamped to the nearest sample).
    pub r_inner: f64,
    /// Outer window radius actually used (clamped to the nearest sample).
    pub r_outer: f64,
    /// `E(r_outer) − E(r_inner)`.
    pub boundary_change: f64,
    /// `β ∫ v'² r dr` over the window.
    pub linear_drift_term: f64,
    /// `σ/2 ∫ v'² r³ dr` over the window.
    pub cubic_drift_term: f64,
    /// Sum of the three terms (0 for an exact solution).
    pub residual: f64,
    /// `|residual|` relative to the largest magnitude among the boundary
    /// energies and drift terms.
    pub relative_residual: f64,
    /// `∫ v'² r dr` over the window (the quantity the drift terms weight).
    pub weighted_slope_integral: f64,
    /// The same integral on the coarsened (every other sample) grid; the
    /// gap against the fine value estimates the quadrature error.
    pub weighted_slope_integral_coarse: f64,
}

/// Evaluates the weighted-slope balance on `[r_inner, r_outer]`, clamping
/// both radii to the nearest stored samples. The trajectory must already be
/// in the scaled frame; the window must lie inside the trajectory span and
/// leave at least three samples between the clamps.
pub fn pohozaev_check(traj: &Trajectory, r_inner: f64, r_outer: f64) -> Result<PohozaevReport> {
    if traj.meta.frame != Frame::ScaledV {
        return Err(Error::FrameMismatch {
            expected: Frame::ScaledV,
            got: traj.meta.frame,
        });
    }
    if !(r_inner < r_outer) {
        return Err(Error::InvalidOptions(format!(
            "window must satisfy r_inner < r_outer, got [{r_inner}, {r_outer}]"
        )));
    }
    let (lo, hi) = (traj.coord_min(), traj.coord_max());
    if r_inner < lo || r_outer > hi {
        return Err(Error::SpanOutOfRange {
            lo: r_inner,
            hi: r_outer,
            traj_lo: lo,
            traj_hi: hi,
        });
    }
    let (r, v, vp, vpp) = ascending_with_curvature(traj)?;

    let nearest = |target: f64| -> usize {
        let mut best = 0usize;
        let mut dist = f64::INFINITY;
        for (i, &ri) in r.iter().enumerate() {
            let d = (ri - target).abs();
            if d < dist {
                dist = d;
                best = i;
            }
        }
        best
    };
    let i_lo = nearest(r_inner);
    let i_hi = nearest(r_outer);
    if i_hi < i_lo + 2 {
        return Err(Error::InsufficientSamples {
            got: i_hi.saturating_sub(i_lo) + 1,
            need: 3,
        });
    }

    let params = traj.meta.params;
    let energy = |i: usize| -> Result<f64> {
        Ok(r[i] * r[i] * vp[i] * vp[i] / 2.0
            + signed_power(v[i], params.p + 1.0)? / (params.p + 1.0)
            - params.gamma * v[i] * v[i] / 2.0)
    };
    let e_inner = energy(i_lo)?;
    let e_outer = energy(i_hi)?;

    let rr = &r[i_lo..=i_hi];
    let gj: Vec<f64> = (i_lo..=i_hi).map(|i| vp[i] * vp[i] * r[i]).collect();
    let dgj: Vec<f64> = (i_lo..=i_hi)
        .map(|i| 2.0 * vp[i] * vpp[i] * r[i] + vp[i] * vp[i])
        .collect();
    let gi: Vec<f64> = (i_lo..=i_hi)
        .map(|i| vp[i] * vp[i] * r[i].powi(3))
        .collect();
    let dgi: Vec<f64> = (i_lo..=i_hi)
        .map(|i| 2.0 * vp[i] * vpp[i] * r[i].powi(3) + 3.0 * vp[i] * vp[i] * r[i] * r[i])
        .collect();
    let (j_fine, j_coarse) = integral_with_refinement(rr, &gj, &dgj)?;
    let i_fine = *cumulative_corrected_trapezoid(rr, &gi, &dgi)?
        .last()
        .expect("window has at least three samples");

    let sigma = traj.meta.kind.sigma();
    let boundary_change = e_outer - e_inner;
    let linear_drift_term = params.beta * j_fine;
    let cubic_drift_term = sigma / 2.0 * i_fine;
    let residual = boundary_change + linear_drift_term + cubic_drift_term;
    let scale = e_inner
        .abs()
        .max(e_outer.abs())
        .max(linear_drift_term.abs())
        .max(cubic_drift_term.abs());
    let relative_residual = if scale > 0.0 {
        residual.abs() / scale
    } else {
        0.0
    };

    Ok(PohozaevReport {
        kind: traj.meta.kind,
        r_inner: r[i_lo],
        r_outer: r[i_hi],
        boundary_change,
        linear_drift_term,
        cubic_drift_term,
        residual,
        relative_residual,
        weighted_slope_integral: j_fine,
        weighted_slope_integral_coarse: j_coarse,
    })
}
