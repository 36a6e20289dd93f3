//! Trajectory-level diagnostics: sign-change counting, intersection counts
//! between profiles, interior monotonicity, weighted growth bounds, and the
//! origin-limit dichotomy in the scaled frame.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::interp_hermite;
use crate::ode::{rhs, Frame, ProfileKind, TerminationReason, Trajectory};

/// Sign-change count of a sampled scalar function after dead-band filtering.
#[derive(Clone, Debug, Serialize)]
pub struct SignChangeReport {
    /// Number of strict sign alternations.
    pub count: usize,
    /// Interpolated crossing coordinates, strictly increasing.
    pub locations: Vec<f64>,
    /// Whether the dead band merged a near-tangency (a dip to zero that
    /// returned on the same side) instead of counting it as two crossings.
    pub clustered: bool,
    /// Whether every sample fell inside the dead band.
    pub degenerate: bool,
}

/// Counts strict sign alternations of sampled values, treating samples
/// within `1e-10 · max|v|` of zero as zero so tangential touches are merged
/// rather than double-counted. All-zero input is reported as degenerate
/// with count 0.
pub fn sign_changes(coords: &[f64], values: &[f64]) -> Result<SignChangeReport> {
    if coords.len() != values.len() {
        return Err(Error::InvalidState(format!(
            "coordinate/value length mismatch: {} vs {}",
            coords.len(),
            values.len()
        )));
    }
    if coords.len() < 2 {
        return Err(Error::InsufficientSamples {
            got: coords.len(),
            need: 2,
        });
    }
    for w in coords.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidGrid(format!(
                "coordinates not strictly increasing near {} -> {}",
                w[0], w[1]
            )));
        }
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    sign_walk(coords, values, &|_| 1e-10 * scale)
}

/// The shared dead-banded walk: sample `i` counts as zero when
/// `|values[i]| <= band(i)`. Zero-runs between same-sign neighbors are
/// merged tangencies, zero-runs between opposite signs are ordinary
/// crossings localized between the flanking nonzero samples.
fn sign_walk(
    coords: &[f64],
    values: &[f64],
    band: &dyn Fn(usize) -> f64,
) -> Result<SignChangeReport> {
    if values.iter().enumerate().all(|(i, v)| v.abs() <= band(i)) {
        return Ok(SignChangeReport {
            count: 0,
            locations: Vec::new(),
            clustered: false,
            degenerate: true,
        });
    }
    let mut locations = Vec::new();
    let mut clustered = false;
    let mut last_sign = 0i8;
    let mut last_idx = 0usize;
    let mut saw_zero_gap = false;
    for (i, &v) in values.iter().enumerate() {
        let s: i8 = if v.abs() <= band(i) {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        };
        if s == 0 {
            if last_sign != 0 {
                saw_zero_gap = true;
            }
            continue;
        }
        if last_sign == 0 {
            last_sign = s;
            last_idx = i;
            saw_zero_gap = false;
            continue;
        }
        if s == last_sign {
            if saw_zero_gap {
                clustered = true;
            }
        } else {
            let (x0, v0) = (coords[last_idx], values[last_idx]);
            let (x1, v1) = (coords[i], values[i]);
            locations.push(x0 - v0 * (x1 - x0) / (v1 - v0));
        }
        last_sign = s;
        last_idx = i;
        saw_zero_gap = false;
    }
    Ok(SignChangeReport {
        count: locations.len(),
        locations,
        clustered,
        degenerate: false,
    })
}

/// Counts intersections of two trajectories in the same frame by resampling
/// both onto a common grid over the overlap of their spans (with cubic
/// Hermite interpolation through the stored slopes) and counting sign
/// changes of the difference. Symmetric in its arguments.
///
/// The dead band is relative and local — `1e-7` of the larger interpolated
/// magnitude at each grid point — so curves spanning many orders of
/// magnitude are compared at each radius on its own scale, and resampling
/// error (well below the band with the cubic rule) cannot masquerade as a
/// crossing. Genuinely transversal crossings move the difference far above
/// the band on either side and are unaffected.
pub fn intersection_count(traj1: &Trajectory, traj2: &Trajectory) -> Result<SignChangeReport> {
    if traj1.meta.frame != traj2.meta.frame {
        return Err(Error::FrameMismatch {
            expected: traj1.meta.frame,
            got: traj2.meta.frame,
        });
    }
    let (lo1, hi1) = (traj1.coord_min(), traj1.coord_max());
    let (lo2, hi2) = (traj2.coord_min(), traj2.coord_max());
    let lo = lo1.max(lo2);
    let hi = hi1.min(hi2);
    if !(lo < hi) {
        return Err(Error::DisjointSpans { lo1, hi1, lo2, hi2 });
    }
    let n = traj1.len().max(traj2.len()).max(16);
    // Log-spaced where the coordinate is a radius; linear otherwise.
    let grid: Vec<f64> = if lo > 0.0 {
        let ratio = (hi / lo).ln();
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo * (ratio * i as f64 / (n - 1) as f64).exp()
                }
            })
            .collect()
    } else {
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    };

    let ascending = |t: &Trajectory| -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        if t.is_ascending() {
            (t.coords.clone(), t.values.clone(), t.slopes.clone())
        } else {
            (
                t.coords.iter().rev().copied().collect(),
                t.values.iter().rev().copied().collect(),
                t.slopes.iter().rev().copied().collect(),
            )
        }
    };
    let (x1, v1, s1) = ascending(traj1);
    let (x2, v2, s2) = ascending(traj2);
    let y1 = interp_hermite(&x1, &v1, &s1, &grid)?;
    let y2 = interp_hermite(&x2, &v2, &s2, &grid)?;
    let diff: Vec<f64> = y1.iter().zip(&y2).map(|(a, b)| a - b).collect();
    let band = |i: usize| 1e-7 * (y1[i].abs() + y2[i].abs());
    sign_walk(&grid, &diff, &band)
}

/// Interior monotonicity of a forward profile.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MonotonicityReport {
    /// Largest slope over the samples (negative for a strictly decreasing
    /// profile).
    pub max_slope: f64,
    /// Sup norm of the values, the scale for the pass threshold.
    pub scale: f64,
    /// Whether `max_slope ≤ 1e-12 · scale`.
    pub pass: bool,
}

/// Checks that a forward profile in the physical frame never increases:
/// reports the largest stored slope against the profile's sup norm.
pub fn monotonicity_report(traj: &Trajectory) -> Result<MonotonicityReport> {
    if traj.meta.frame != Frame::PhysicalW {
        return Err(Error::FrameMismatch {
            expected: Frame::PhysicalW,
            got: traj.meta.frame,
        });
    }
    if traj.meta.kind != ProfileKind::Forward {
        return Err(Error::KindMismatch {
            expected: "forward".into(),
            got: traj.meta.kind,
        });
    }
    let max_slope = traj.slopes.iter().fold(f64::NEG_INFINITY, |m, s| m.max(*s));
    let scale = traj.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(MonotonicityReport {
        max_slope,
        scale,
        pass: max_slope <= 1e-12 * scale,
    })
}

/// Weighted interior growth bounds of a profile in the physical frame.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GrowthBoundReport {
    /// `sup_{r<1} r^{α+i} |w^{(i)}(r)|` for i = 0, 1, 2. The curvature is
    /// evaluated through the equation itself, which is exact on solutions,
    /// rather than by differencing.
    pub suprema: [f64; 3],
    /// The weight exponent α used.
    pub alpha: f64,
    /// Innermost radius the samples reach.
    pub r_min: f64,
}

/// Computes `sup_{r<1} r^{α+i}|w^{(i)}|` for i = 0, 1, 2 on a physical-frame
/// trajectory whose samples reach both below `1e-3` and up to `1`.
pub fn growth_bound_report(traj: &Trajectory) -> Result<GrowthBoundReport> {
    if traj.meta.frame != Frame::PhysicalW {
        return Err(Error::FrameMismatch {
            expected: Frame::PhysicalW,
            got: traj.meta.frame,
        });
    }
    let r_min = traj.coord_min();
    if r_min > 1e-3 {
        return Err(Error::InsufficientDepth {
            reached: r_min,
            need: 1e-3,
        });
    }
    if traj.coord_max() < 1.0 {
        return Err(Error::InsufficientSpan {
            reached: traj.coord_max(),
            need: 1.0,
        });
    }
    let alpha = traj.meta.params.alpha;
    let mut sup = [0.0f64; 3];
    for i in 0..traj.len() {
        let state = traj.state(i);
        let r = state.coord;
        if r >= 1.0 {
            continue;
        }
        let (_, curvature) = rhs(&state)?;
        sup[0] = sup[0].max(r.powf(alpha) * state.value.abs());
        sup[1] = sup[1].max(r.powf(alpha + 1.0) * state.slope.abs());
        sup[2] = sup[2].max(r.powf(alpha + 2.0) * curvature.abs());
    }
    Ok(GrowthBoundReport {
        suprema: sup,
        alpha,
        r_min,
    })
}

/// The origin-limit dichotomy for the scaled variable `v = r^α w`: as
/// `r → 0` a profile's scaled value tends either to 0 or to the singular
/// amplitude — no third limit occurs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OriginLimit {
    /// `v → 0`: the profile is bounded at the origin.
    TendsToZero,
    /// `v → L`: the profile blows up exactly like the singular solution.
    TendsToAmplitude,
    /// The deepest decade of samples settles on neither band, or the scaled
    /// slope diagnostic `|r v′|` has not yet decayed.
    Undetermined,
}

/// Classifies the origin limit of a scaled-frame trajectory from its
/// deepest decade of samples: inside the `0.05·L` band around 0 or around
/// `L`, with `|r v′| < 0.01·L` required as a corroborating slope decay.
/// Needs samples reaching `r ≤ 1e-6`.
pub fn origin_limit_classify(traj: &Trajectory) -> Result<OriginLimit> {
    if traj.meta.frame != Frame::ScaledV {
        return Err(Error::FrameMismatch {
            expected: Frame::ScaledV,
            got: traj.meta.frame,
        });
    }
    let l = traj.meta.params.singular_amplitude_checked()?;
    let r_min = traj.coord_min();
    if r_min > 1e-6 {
        return Err(Error::InsufficientDepth {
            reached: r_min,
            need: 1e-6,
        });
    }
    let mut near_zero = true;
    let mut near_amplitude = true;
    let mut max_scaled_slope = 0.0f64;
    let mut samples = 0usize;
    for i in 0..traj.len() {
        let r = traj.coords[i];
        if r > 10.0 * r_min {
            continue;
        }
        samples += 1;
        let v = traj.values[i];
        near_zero &= v.abs() <= 0.05 * l;
        near_amplitude &= (v - l).abs() <= 0.05 * l;
        max_scaled_slope = max_scaled_slope.max((r * traj.slopes[i]).abs());
    }
    if samples == 0 {
        return Err(Error::InsufficientSamples { got: 0, need: 1 });
    }
    if max_scaled_slope >= 0.01 * l {
        return Ok(OriginLimit::Undetermined);
    }
    Ok(if near_amplitude {
        OriginLimit::TendsToAmplitude
    } else if near_zero {
        OriginLimit::TendsToZero
    } else {
        OriginLimit::Undetermined
    })
}

/// Generates a member of the steady scaling family
/// `U_a(r) = a · U_1(a^{(p−1)/2} r)` from one computed steady profile in
/// the physical frame. The sample at radius `r_i` maps to radius
/// `r_i / μ` with value `a·w_i` and slope `a·μ·w′_i`, where
/// `μ = a^{(p−1)/2}`.
pub fn scale_steady(traj: &Trajectory, a: f64) -> Result<Trajectory> {
    if traj.meta.kind != ProfileKind::Steady {
        return Err(Error::KindMismatch {
            expected: "steady".into(),
            got: traj.meta.kind,
        });
    }
    if traj.meta.frame != Frame::PhysicalW {
        return Err(Error::FrameMismatch {
            expected: Frame::PhysicalW,
            got: traj.meta.frame,
        });
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidOptions(format!(
            "scaling factor must be positive, got {a}"
        )));
    }
    let mu = a.powf((traj.meta.params.p - 1.0) / 2.0);
    let coords: Vec<f64> = traj.coords.iter().map(|r| r / mu).collect();
    let values: Vec<f64> = traj.values.iter().map(|w| a * w).collect();
    let slopes: Vec<f64> = traj.slopes.iter().map(|s| a * mu * s).collect();
    let mut meta = traj.meta;
    meta.termination = TerminationReason::Sampled;
    Trajectory::from_samples(coords, values, slopes, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Params;
    use crate::integrate::{integrate, series_start_auto, IntegrationOptions};
    use crate::ode::{sample_u_star, TrajectoryMeta};
    use approx::assert_abs_diff_eq;

    fn params(n: f64, p: f64) -> Params {
        Params::new(n, p).unwrap()
    }

    fn synthetic(
        n: f64,
        p: f64,
        kind: ProfileKind,
        frame: Frame,
        coords: Vec<f64>,
        values: Vec<f64>,
        slopes: Vec<f64>,
    ) -> Trajectory {
        let meta = TrajectoryMeta {
            kind,
            frame,
            params: params(n, p),
            rel_tol: 0.0,
            abs_tol: 0.0,
            termination: TerminationReason::Sampled,
            steps: 0,
        };
        Trajectory::from_samples(coords, values, slopes, meta).unwrap()
    }

    #[test]
    fn sine_has_three_crossings_on_ten_units() {
        let coords: Vec<f64> = (0..=1000).map(|i| i as f64 * 0.01).collect();
        let values: Vec<f64> = coords.iter().map(|x| x.sin()).collect();
        let rep = sign_changes(&coords, &values).unwrap();
        assert_eq!(rep.count, 3);
        assert!(!rep.degenerate);
        let zeros = [
            std::f64::consts::PI,
            2.0 * std::f64::consts::PI,
            3.0 * std::f64::consts::PI,
        ];
        for (loc, z) in rep.locations.iter().zip(zeros) {
            assert!((loc - z).abs() < 0.01, "crossing {loc} vs {z}");
        }
    }

    #[test]
    fn appending_a_reflected_copy_doubles_the_count() {
        let mut coords: Vec<f64> = (0..=1000).map(|i| i as f64 * 0.01).collect();
        let mut values: Vec<f64> = coords.iter().map(|x| x.sin()).collect();
        // Continue with the mirror image sin(20 − x) on (10, 20]; the
        // junction value sin(10) is far from zero.
        for i in 1..=1000 {
            let x = 10.0 + i as f64 * 0.01;
            coords.push(x);
            values.push((20.0 - x).sin());
        }
        let rep = sign_changes(&coords, &values).unwrap();
        assert_eq!(rep.count, 6);
    }

    #[test]
    fn constants_and_zeros_classify_cleanly() {
        let coords = vec![0.0, 1.0, 2.0, 3.0];
        let pos = sign_changes(&coords, &[2.0, 2.0, 2.0, 2.0]).unwrap();
        assert_eq!(pos.count, 0);
        assert!(!pos.degenerate);
        let zero = sign_changes(&coords, &[0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(zero.count, 0);
        assert!(zero.degenerate);
    }

    #[test]
    fn dead_band_merges_tangencies() {
        let coords = vec![0.0, 1.0, 2.0, 3.0, 4.0];
        // Dips to 1e-14 (inside the 1e-10-relative band) and comes back up:
        // a touch, not two crossings.
        let rep = sign_changes(&coords, &[1.0, 0.5, 1e-14, 0.6, 1.0]).unwrap();
        assert_eq!(rep.count, 0);
        assert!(rep.clustered);
        // A genuine crossing through the band still counts once.
        let rep = sign_changes(&coords, &[1.0, 0.5, 1e-14, -0.6, -1.0]).unwrap();
        assert_eq!(rep.count, 1);
    }

    #[test]
    fn self_intersection_is_degenerate_and_symmetric() {
        let pr = params(3.0, 5.0);
        let traj =
            sample_u_star(&pr, ProfileKind::Steady, Frame::PhysicalW, 0.1, 10.0, 200).unwrap();
        let rep = intersection_count(&traj, &traj).unwrap();
        assert_eq!(rep.count, 0);
        assert!(rep.degenerate);

        let other = scale_steady(&traj, 2.0).unwrap();
        let ab = intersection_count(&traj, &other).unwrap();
        let ba = intersection_count(&other, &traj).unwrap();
        assert_eq!(ab.count, ba.count);
    }

    #[test]
    fn disjoint_spans_are_rejected() {
        let pr = params(3.0, 5.0);
        let a = sample_u_star(&pr, ProfileKind::Steady, Frame::PhysicalW, 0.1, 1.0, 50).unwrap();
        let b = sample_u_star(&pr, ProfileKind::Steady, Frame::PhysicalW, 2.0, 9.0, 50).unwrap();
        assert!(matches!(
            intersection_count(&a, &b),
            Err(Error::DisjointSpans { .. })
        ));
    }

    /// In the oscillatory range (complex indicial roots) a steady profile
    /// crosses its own scalings; the singular solution, which is its own
    /// scaling, never does.
    #[test]
    fn steady_scaling_family_intersects_in_the_oscillatory_range() {
        let pr = params(11.0, 3.0);
        let (state, eps) = series_start_auto(ProfileKind::Steady, &pr, 1.0, 1e-10).unwrap();
        let mut o = IntegrationOptions::new(eps, 100.0);
        o.rel_tol = 1e-10;
        o.abs_tol = 1e-12;
        o.n_output = 2000;
        let base = integrate(&state, &o).unwrap();
        let scaled = scale_steady(&base, 2.0).unwrap();
        let rep = intersection_count(&base, &scaled).unwrap();
        assert!(
            rep.count >= 1,
            "expected at least one intersection, got {}",
            rep.count
        );

        let u =
            sample_u_star(&pr, ProfileKind::Steady, Frame::PhysicalW, 1e-3, 100.0, 500).unwrap();
        let u_scaled = scale_steady(&u, 2.0).unwrap();
        let rep = intersection_count(&u, &u_scaled).unwrap();
        assert_eq!(rep.count, 0, "the singular solution is scaling-invariant");
        assert!(rep.degenerate);
    }

    #[test]
    fn computed_forward_profiles_never_increase() {
        let pr = params(3.0, 5.0);
        for a in [0.5, 1.0, 2.0] {
            let (state, eps) = series_start_auto(ProfileKind::Forward, &pr, a, 1e-10).unwrap();
            let mut o = IntegrationOptions::new(eps, 30.0);
            o.rel_tol = 1e-10;
            o.abs_tol = 1e-12;
            let traj = integrate(&state, &o).unwrap();
            let rep = monotonicity_report(&traj).unwrap();
            assert!(rep.pass, "a = {a}: max slope {}", rep.max_slope);
            assert!(rep.max_slope < 0.0);
        }
    }

    #[test]
    fn monotonicity_flags_synthetic_increase_and_wrong_inputs() {
        let incr = synthetic(
            3.0,
            5.0,
            ProfileKind::Forward,
            Frame::PhysicalW,
            vec![0.1, 0.2, 0.3],
            vec![1.0, 1.1, 1.2],
            vec![1.0, 1.0, 1.0],
        );
        assert!(!monotonicity_report(&incr).unwrap().pass);

        let pr = params(3.0, 5.0);
        let steady =
            sample_u_star(&pr, ProfileKind::Steady, Frame::PhysicalW, 0.1, 2.0, 50).unwrap();
        assert!(matches!(
            monotonicity_report(&steady),
            Err(Error::KindMismatch { .. })
        ));
        let scaled = steady.transform(Frame::ScaledV).unwrap();
        assert!(matches!(
            monotonicity_report(&scaled),
            Err(Error::FrameMismatch { .. })
        ));
    }

    #[test]
    fn growth_bounds_on_the_singular_solution_are_closed_form() {
        for (n, p) in [(3.0, 5.0), (11.0, 7.0)] {
            let pr = params(n, p);
            let l = pr.singular_amplitude.unwrap();
            let a = pr.alpha;
            let traj =
                sample_u_star(&pr, ProfileKind::Steady, Frame::PhysicalW, 1e-4, 1.5, 800).unwrap();
            let rep = growth_bound_report(&traj).unwrap();
            assert_abs_diff_eq!(rep.suprema[0], l, epsilon = 1e-8 * l);
            assert_abs_diff_eq!(rep.suprema[1], a * l, epsilon = 1e-8 * a * l);
            assert_abs_diff_eq!(
                rep.suprema[2],
                a * (a + 1.0) * l,
                epsilon = 1e-8 * a * (a + 1.0) * l
            );
        }
    }

    #[test]
    fn growth_bounds_demand_coverage() {
        let pr = params(3.0, 5.0);
        let shallow =
            sample_u_star(&pr, ProfileKind::Steady, Frame::PhysicalW, 0.01, 1.5, 100).unwrap();
        assert!(matches!(
            growth_bound_report(&shallow),
            Err(Error::InsufficientDepth { .. })
        ));
        let narrow =
            sample_u_star(&pr, ProfileKind::Steady, Frame::PhysicalW, 1e-4, 0.5, 100).unwrap();
        assert!(matches!(
            growth_bound_report(&narrow),
            Err(Error::InsufficientSpan { .. })
        ));
    }

    #[test]
    fn bounded_profile_growth_bound_respects_the_center_value() {
        let pr = params(3.0, 5.0);
        let (state, eps) = series_start_auto(ProfileKind::Forward, &pr, 1.0, 1e-10).unwrap();
        assert!(eps <= 1e-3);
        let mut o = IntegrationOptions::new(eps, 2.0);
        o.rel_tol = 1e-10;
        o.abs_tol = 1e-12;
        let traj = integrate(&state, &o).unwrap();
        let rep = growth_bound_report(&traj).unwrap();
        // w ≤ a and r^α ≤ 1 on r < 1, so the weighted sup is at most a.
        assert!(rep.suprema[0] <= 1.0 + 1e-9);
        assert!(rep.suprema.iter().all(|s| s.is_finite()));
    }

    #[test]
    fn origin_limits_separate_the_singular_and_bounded_cases() {
        let pr = params(11.0, 7.0);
        let l = pr.singular_amplitude.unwrap();
        let sing =
            sample_u_star(&pr, ProfileKind::Forward, Frame::ScaledV, 1e-8, 1e-2, 400).unwrap();
        assert_eq!(
            origin_limit_classify(&sing).unwrap(),
            OriginLimit::TendsToAmplitude
        );

        // Bounded profile: w ≡ 1 near the origin gives v = r^α → 0.
        let alpha = pr.alpha;
        let coords: Vec<f64> = (0..200)
            .map(|i| 1e-8 * (1e5f64.powf(i as f64 / 199.0)))
            .collect();
        let values: Vec<f64> = coords.iter().map(|r| r.powf(alpha)).collect();
        let slopes: Vec<f64> = coords.iter().map(|r| alpha * r.powf(alpha - 1.0)).collect();
        let bounded = synthetic(
            11.0,
            7.0,
            ProfileKind::Forward,
            Frame::ScaledV,
            coords.clone(),
            values,
            slopes,
        );
        assert_eq!(
            origin_limit_classify(&bounded).unwrap(),
            OriginLimit::TendsToZero
        );

        // Neither band: v ≡ L/2.
        let values = vec![0.5 * l; 200];
        let slopes = vec![0.0; 200];
        let neither = synthetic(
            11.0,
            7.0,
            ProfileKind::Forward,
            Frame::ScaledV,
            coords,
            values,
            slopes,
        );
        assert_eq!(
            origin_limit_classify(&neither).unwrap(),
            OriginLimit::Undetermined
        );
    }

    #[test]
    fn origin_limit_requires_depth_and_frame() {
        let pr = params(11.0, 7.0);
        let shallow =
            sample_u_star(&pr, ProfileKind::Forward, Frame::ScaledV, 1e-5, 1e-2, 100).unwrap();
        assert!(matches!(
            origin_limit_classify(&shallow),
            Err(Error::InsufficientDepth { .. })
        ));
        let physical =
            sample_u_star(&pr, ProfileKind::Forward, Frame::PhysicalW, 1e-8, 1e-2, 100).unwrap();
        assert!(matches!(
            origin_limit_classify(&physical),
            Err(Error::FrameMismatch { .. })
        ));
    }

    #[test]
    fn scaling_the_singular_solution_is_the_identity() {
        let pr = params(11.0, 3.0);
        // Dense samples: the residual check below differences the scaled
        // grid with high-order stencils, and the inner radius after the
        // map is a third of the base inner radius.
        let u = sample_u_star(
            &pr,
            ProfileKind::Steady,
            Frame::PhysicalW,
            0.03,
            100.0,
            3000,
        )
        .unwrap();
        let scaled = scale_steady(&u, 3.0).unwrap();
        // U_* is invariant under the scaling family: compare the scaled
        // samples against the closed form at their new radii.
        let l = pr.singular_amplitude.unwrap();
        for (r, w) in scaled.coords.iter().zip(&scaled.values) {
            let exact = l * r.powf(-pr.alpha);
            assert_abs_diff_eq!(*w, exact, epsilon = 1e-12 * exact);
        }
        let res = crate::ode::residual_of(&scaled).unwrap();
        assert!(res < 1e-9, "scaled-profile residual {res}");
    }

    #[test]
    fn scale_steady_guards_inputs() {
        let pr = params(11.0, 3.0);
        let u = sample_u_star(&pr, ProfileKind::Steady, Frame::PhysicalW, 0.01, 10.0, 50).unwrap();
        assert!(scale_steady(&u, 0.0).is_err());
        let fwd =
            sample_u_star(&pr, ProfileKind::Forward, Frame::PhysicalW, 0.01, 10.0, 50).unwrap();
        assert!(matches!(
            scale_steady(&fwd, 2.0),
            Err(Error::KindMismatch { .. })
        ));
    }
}
