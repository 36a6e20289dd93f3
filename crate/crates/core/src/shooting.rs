//! Parameter searches over center values and singular perturbations:
//! classify shots, locate classification boundaries, estimate the scaled
//! tail limit ℓ and its supremum, and probe uniqueness of the singular
//! profile by searching for counterexamples.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{indicial_roots, IndicialRoots, Params};
use crate::integrate::{
    integrate, series_start_auto, singular_start, spiral_start, IndicialMode, IntegrationOptions,
};
use crate::numerics::{aitken, linear_fit};
use crate::ode::{Frame, ProfileKind, ProfileState, TerminationReason, Trajectory};

/// Outcome of one shot, with the event radius where applicable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ShotTag {
    /// Survived positive to the far end of the span.
    PositiveDecaying,
    /// Crossed the floor threshold going down.
    HitsZero {
        /// Localized crossing radius.
        radius: f64,
    },
    /// Escaped upward through the ceiling threshold (armed after first
    /// passing below it).
    Blowup {
        /// Localized escape radius.
        radius: f64,
    },
    /// Budget exhaustion or step underflow; never silently reinterpreted.
    Undetermined,
}

/// Payload-free classification class, used for bracket matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TagClass {
    PositiveDecaying,
    HitsZero,
    Blowup,
    Undetermined,
}

impl ShotTag {
    /// The payload-free class of this tag.
    pub fn class(&self) -> TagClass {
        match self {
            ShotTag::PositiveDecaying => TagClass::PositiveDecaying,
            ShotTag::HitsZero { .. } => TagClass::HitsZero,
            ShotTag::Blowup { .. } => TagClass::Blowup,
            ShotTag::Undetermined => TagClass::Undetermined,
        }
    }
}

impl std::fmt::Display for TagClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TagClass::PositiveDecaying => "positive_decaying",
            TagClass::HitsZero => "hits_zero",
            TagClass::Blowup => "blowup",
            TagClass::Undetermined => "undetermined",
        };
        f.write_str(s)
    }
}

/// Full classification of one shot.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ShotClassification {
    /// Outcome tag.
    pub tag: ShotTag,
    /// Final state of the integration (event point, span end, or last good
    /// state).
    pub terminal: ProfileState,
    /// Tail estimate of `lim r^α w(r)`, present only for positive-decaying
    /// forward shots that reach deep enough to measure it.
    pub ell: Option<f64>,
    /// Whether the raw tail samples behind `ell` agreed to 1e-4 relative.
    pub ell_converged: bool,
    /// Whether the profile is (numerically) the constant `w ≡ κ` — the one
    /// positive-decaying case whose tail limit is genuinely undefined.
    pub constant_profile: bool,
}

/// Classifies an already-integrated trajectory by its termination record.
pub fn classify_trajectory(traj: &Trajectory) -> Result<ShotClassification> {
    let terminal = traj.last_state();
    let tag = match traj.meta.termination {
        TerminationReason::HitFloor { radius } => ShotTag::HitsZero { radius },
        TerminationReason::HitCeiling { radius } => ShotTag::Blowup { radius },
        TerminationReason::Budget | TerminationReason::StepUnderflow => ShotTag::Undetermined,
        TerminationReason::SpanEnd | TerminationReason::Sampled => {
            if terminal.value > 0.0 {
                ShotTag::PositiveDecaying
            } else {
                ShotTag::Undetermined
            }
        }
    };
    let constant_profile = traj.meta.kind == ProfileKind::Backward
        && traj.meta.frame == Frame::PhysicalW
        && traj
            .values
            .iter()
            .all(|&w| (w - traj.meta.params.kappa).abs() <= 1e-9 * traj.meta.params.kappa);
    let mut ell = None;
    let mut ell_converged = false;
    if tag == ShotTag::PositiveDecaying
        && traj.meta.kind == ProfileKind::Forward
        && traj.coord_max() >= 50.0
    {
        if let Ok(est) = estimate_ell(traj) {
            ell = Some(est.ell);
            ell_converged = est.converged;
        }
    }
    Ok(ShotClassification {
        tag,
        terminal,
        ell,
        ell_converged,
        constant_profile,
    })
}

/// Integrates a profile from its interior series start and returns the
/// trajectory with its classification.
///
/// The start radius is chosen automatically from the series remainder (the
/// `r_start` field of the options is superseded by that choice); all other
/// options apply as given.
pub fn shoot_profile(
    kind: ProfileKind,
    params: &Params,
    a: f64,
    options: &IntegrationOptions,
) -> Result<(Trajectory, ShotClassification)> {
    let (state, eps) = series_start_auto(kind, params, a, options.rel_tol)?;
    let opts = IntegrationOptions {
        r_start: eps,
        ..*options
    };
    let traj = integrate(&state, &opts)?;
    let class = classify_trajectory(&traj)?;
    Ok((traj, class))
}

/// Integrates a singular-solution perturbation outward in the scaled frame
/// and returns the trajectory with its classification.
///
/// Starts at `options.r_start`. Real indicial roots perturb along the slow
/// mode; complex roots use the spiral start at phase 0 (`delta > 0`) or π
/// (`delta < 0`).
pub fn shoot_singular(
    kind: ProfileKind,
    params: &Params,
    delta: f64,
    options: &IntegrationOptions,
) -> Result<(Trajectory, ShotClassification)> {
    let eps = options.r_start;
    let state = if delta == 0.0 {
        singular_start(kind, params, 0.0, IndicialMode::Slow, eps)?
    } else {
        match indicial_roots(params.n, params.p)? {
            IndicialRoots::Real { .. } => {
                singular_start(kind, params, delta, IndicialMode::Slow, eps)?
            }
            IndicialRoots::Complex { .. } => {
                let phase = if delta >= 0.0 {
                    0.0
                } else {
                    std::f64::consts::PI
                };
                spiral_start(kind, params, delta.abs(), phase, eps)?
            }
        }
    };
    let traj = integrate(&state, options)?;
    let class = classify_trajectory(&traj)?;
    Ok((traj, class))
}

/// Classifies a center-value shot (see [`shoot_profile`]).
pub fn classify_shot(
    kind: ProfileKind,
    params: &Params,
    a: f64,
    options: &IntegrationOptions,
) -> Result<ShotClassification> {
    shoot_profile(kind, params, a, options).map(|(_, c)| c)
}

/// Tail estimate of `ℓ = lim_{r→∞} r^α w(r)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EllEstimate {
    /// Extrapolated limit.
    pub ell: f64,
    /// Whether the three raw tail samples already agree to 1e-4 relative.
    pub converged: bool,
    /// The raw scaled values at the three largest stored radii.
    pub tail: [f64; 3],
}

/// Estimates the scaled tail limit from the three largest-radius samples of
/// a forward trajectory, extrapolated by Aitken's Δ² (exact on the
/// geometric `r^{-2}` tail the far-field expansion predicts).
///
/// Requires a forward-kind trajectory reaching at least `r = 50`. The
/// convergence flag is honest: an estimate with `converged = false` is a
/// reading, not a measurement.
pub fn estimate_ell(traj: &Trajectory) -> Result<EllEstimate> {
    if traj.meta.kind != ProfileKind::Forward {
        return Err(Error::KindMismatch {
            expected: "forward".into(),
            got: traj.meta.kind,
        });
    }
    if traj.coord_max() < 50.0 {
        return Err(Error::InsufficientSpan {
            reached: traj.coord_max(),
            need: 50.0,
        });
    }
    if traj.len() < 3 {
        return Err(Error::InsufficientSamples {
            got: traj.len(),
            need: 3,
        });
    }
    let scaled = traj.transform(Frame::ScaledV)?;
    // Ascending view of the last three samples.
    let n = scaled.len();
    let tail: [f64; 3] = if scaled.is_ascending() {
        [
            scaled.values[n - 3],
            scaled.values[n - 2],
            scaled.values[n - 1],
        ]
    } else {
        [scaled.values[2], scaled.values[1], scaled.values[0]]
    };
    let ell = aitken(tail[0], tail[1], tail[2]);
    let scale = tail.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    let spread = (tail[0] - tail[1])
        .abs()
        .max((tail[1] - tail[2]).abs())
        .max((tail[0] - tail[2]).abs());
    Ok(EllEstimate {
        ell,
        converged: spread <= 1e-4 * scale,
        tail,
    })
}

/// One grid point of a sweep.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepEntry {
    /// Center value (or perturbation size) of this shot.
    pub a: f64,
    /// Its classification.
    pub classification: ShotClassification,
}

/// Result of sweeping a strictly increasing grid of center values.
#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    /// One entry per grid point, in grid order.
    pub entries: Vec<SweepEntry>,
    /// Adjacent grid pairs whose classification classes differ — candidate
    /// brackets for [`bisect_boundary`].
    pub brackets: Vec<(f64, f64)>,
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidGrid(format!(
                "grid not strictly increasing near {} -> {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Sweeps center values over a strictly increasing grid, optionally in
/// parallel. Entry order always follows the grid, so parallel and
/// sequential runs produce identical results.
pub fn run_sweep(
    kind: ProfileKind,
    params: &Params,
    a_grid: &[f64],
    options: &IntegrationOptions,
    parallel: bool,
) -> Result<SweepResult> {
    validate_grid(a_grid)?;
    let shots: Vec<Result<ShotClassification>> = if parallel {
        a_grid
            .par_iter()
            .map(|&a| classify_shot(kind, params, a, options))
            .collect()
    } else {
        a_grid
            .iter()
            .map(|&a| classify_shot(kind, params, a, options))
            .collect()
    };
    let mut entries = Vec::with_capacity(a_grid.len());
    for (a, shot) in a_grid.iter().zip(shots) {
        entries.push(SweepEntry {
            a: *a,
            classification: shot?,
        });
    }
    let mut brackets = Vec::new();
    for w in entries.windows(2) {
        if w[0].classification.tag.class() != w[1].classification.tag.class() {
            brackets.push((w[0].a, w[1].a));
        }
    }
    Ok(SweepResult { entries, brackets })
}

/// Located classification boundary.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundaryResult {
    /// Boundary estimate (bracket midpoint at termination).
    pub a_star: f64,
    /// Final bracket, width below `1e-10 · max(1, a_star)`.
    pub bracket: (f64, f64),
    /// Number of classifications performed.
    pub evaluations: usize,
    /// Number of off-midpoint probes forced by undetermined classifications.
    pub nudges: usize,
}

/// Deterministic midpoint bisection of a classification boundary, generic
/// over the classifier so the search logic is testable against synthetic
/// classifiers.
///
/// `target` gives the classes required at the low and high ends. When a
/// probe point classifies as neither (undetermined or a third class), the
/// probe is nudged through a fixed offset ladder before giving up.
pub fn bisect_boundary_with<F>(
    mut classify: F,
    a_lo: f64,
    a_hi: f64,
    target: (TagClass, TagClass),
) -> Result<BoundaryResult>
where
    F: FnMut(f64) -> Result<TagClass>,
{
    if !(a_lo < a_hi) {
        return Err(Error::InvalidOptions(format!(
            "bracket must satisfy a_lo < a_hi, got [{a_lo}, {a_hi}]"
        )));
    }
    let (want_lo, want_hi) = target;
    if want_lo == want_hi {
        return Err(Error::InvalidOptions(format!(
            "target classes must differ, got ({want_lo}, {want_hi})"
        )));
    }
    let mut evaluations = 0usize;
    let mut run = |a: f64, evals: &mut usize| -> Result<TagClass> {
        *evals += 1;
        classify(a)
    };
    let lo_class = run(a_lo, &mut evaluations)?;
    let hi_class = run(a_hi, &mut evaluations)?;
    if lo_class == hi_class {
        return Err(Error::SameTagBracket {
            a_lo,
            a_hi,
            tag: lo_class.to_string(),
        });
    }
    if lo_class != want_lo || hi_class != want_hi {
        return Err(Error::BracketTagMismatch {
            lo_tag: lo_class.to_string(),
            hi_tag: hi_class.to_string(),
            want_lo: want_lo.to_string(),
            want_hi: want_hi.to_string(),
        });
    }

    const OFFSETS: [f64; 8] = [0.5, 0.45, 0.55, 0.40, 0.60, 0.35, 0.65, 0.30];
    let mut lo = a_lo;
    let mut hi = a_hi;
    let mut nudges = 0usize;
    loop {
        let width = hi - lo;
        let mid = lo + 0.5 * width;
        if width < 1e-10 * mid.abs().max(1.0) {
            return Ok(BoundaryResult {
                a_star: mid,
                bracket: (lo, hi),
                evaluations,
                nudges,
            });
        }
        let mut advanced = false;
        for (i, offset) in OFFSETS.iter().enumerate() {
            let probe = lo + offset * width;
            if probe <= lo || probe >= hi {
                continue;
            }
            let class = run(probe, &mut evaluations)?;
            if i > 0 {
                nudges += 1;
            }
            if class == want_lo {
                lo = probe;
                advanced = true;
                break;
            }
            if class == want_hi {
                hi = probe;
                advanced = true;
                break;
            }
        }
        if !advanced {
            return Err(Error::UndeterminedBracket {
                a_lo: lo,
                a_hi: hi,
                attempts: OFFSETS.len(),
            });
        }
    }
}

/// Bisects the center-value boundary between two classification classes for
/// real shots (see [`bisect_boundary_with`] for the search semantics).
pub fn bisect_boundary(
    kind: ProfileKind,
    params: &Params,
    a_lo: f64,
    a_hi: f64,
    target: (TagClass, TagClass),
    options: &IntegrationOptions,
) -> Result<BoundaryResult> {
    bisect_boundary_with(
        |a| classify_shot(kind, params, a, options).map(|c| c.tag.class()),
        a_lo,
        a_hi,
        target,
    )
}

/// Lower bound for the supremum of tail limits over bounded profiles.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LStarEstimate {
    /// Largest converged tail limit found on the grid — a lower bound for
    /// the true supremum, never an estimate of the supremum itself.
    pub lower_bound: f64,
    /// Center value attaining the bound.
    pub attained_at: f64,
    /// How many grid points produced converged tail limits.
    pub converged_count: usize,
    /// Grid size swept.
    pub grid_size: usize,
}

/// Sweeps forward shots over a center-value grid and returns the largest
/// converged tail limit as a documented **lower bound** for the supremum
/// (a finite sweep cannot attain a supremum over all solutions).
/// Non-converged tail estimates are excluded, never silently included.
#[allow(non_snake_case)] // named for the supremum L* it bounds
pub fn estimate_L_star(
    params: &Params,
    a_grid: &[f64],
    options: &IntegrationOptions,
) -> Result<LStarEstimate> {
    let sweep = run_sweep(ProfileKind::Forward, params, a_grid, options, false)?;
    let mut best: Option<(f64, f64)> = None;
    let mut converged_count = 0usize;
    for e in &sweep.entries {
        if let (Some(ell), true) = (e.classification.ell, e.classification.ell_converged) {
            converged_count += 1;
            if best.is_none_or(|(b, _)| ell > b) {
                best = Some((ell, e.a));
            }
        }
    }
    match best {
        Some((lower_bound, attained_at)) => Ok(LStarEstimate {
            lower_bound,
            attained_at,
            converged_count,
            grid_size: a_grid.len(),
        }),
        None => Err(Error::InsufficientSamples { got: 0, need: 1 }),
    }
}

/// How one directional leg of a perturbation probe left (or kept) the band
/// around the singular amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BandExit {
    /// Crossed below `L/2`.
    ExitedBelow,
    /// Crossed above `3L/2`.
    ExitedAbove,
    /// Stayed inside `[L/2, 3L/2]` over the whole leg.
    StayedInBand,
    /// Budget exhaustion or step underflow before a decision.
    Inconclusive,
}

/// Fate of one perturbation in the uniqueness probe.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProbeEntry {
    /// Signed perturbation at the start radius.
    pub delta: f64,
    /// Inward leg outcome.
    pub inward: BandExit,
    /// Log of the radius where the inward leg left the band, when it did.
    pub inward_exit_log_radius: Option<f64>,
    /// Outward leg outcome.
    pub outward: BandExit,
    /// Whether the perturbed trajectory stayed in the band on **both**
    /// sides — a would-be second singular profile.
    pub survivor: bool,
    /// Whether either leg was inconclusive (excluded from the survivor
    /// assertion, counted separately).
    pub inconclusive: bool,
}

/// Outcome of the uniqueness probe: a counterexample search that is
/// expected to come back empty.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    /// Per-perturbation fates, in grid order.
    pub entries: Vec<ProbeEntry>,
    /// Number of two-sided survivors (0 is consistent with uniqueness).
    pub survivors: usize,
    /// Number of entries with an inconclusive leg.
    pub inconclusive: usize,
    /// Fitted slope of inward exit log-radius against log |delta|; linear
    /// theory predicts `1/|μ₁|` for the slow indicial root μ₁.
    pub inward_slope: Option<f64>,
    /// Standing caveat on what this experiment can and cannot show.
    pub note: String,
}

/// Probes uniqueness of the singular profile: perturbs it by each `delta`,
/// follows the forward flow inward (to `r = 1e-7`) and outward (to
/// `options.r_end`), and reports whether any perturbation stays within
/// `[L/2, 3L/2]` on both sides.
///
/// Finding no such survivor **fails to refute** uniqueness — a finite sweep
/// cannot prove it — and the report says so in its note.
///
/// Requires the supercritical range (β > 0) so both indicial modes decay
/// outward; perturbations must be nonzero and smaller than `L/2` in
/// magnitude so the start state lies inside the band.
pub fn uniqueness_probe(
    params: &Params,
    delta_grid: &[f64],
    eps: f64,
    options: &IntegrationOptions,
) -> Result<ProbeReport> {
    let l = params.singular_amplitude_checked()?;
    if !(params.beta > 0.0) {
        return Err(Error::InvalidOptions(format!(
            "uniqueness probe needs the supercritical range (beta > 0), got beta = {}",
            params.beta
        )));
    }
    if delta_grid.is_empty() {
        return Err(Error::InvalidGrid("perturbation grid is empty".into()));
    }
    for &d in delta_grid {
        if d == 0.0 || !(d.abs() < l / 2.0) {
            return Err(Error::InvalidGrid(format!(
                "perturbations must be nonzero and smaller than L/2 = {} in magnitude, got {d}",
                l / 2.0
            )));
        }
    }
    if !(eps > 0.0 && eps < options.r_end) {
        return Err(Error::InvalidOptions(format!(
            "start radius {eps} must sit inside (0, r_end = {})",
            options.r_end
        )));
    }

    const INWARD_DEPTH: f64 = 1e-7;
    let band = (Some(l / 2.0), Some(1.5 * l));

    let leg = |delta: f64, r_end: f64| -> Result<(BandExit, Option<f64>)> {
        let opts = IntegrationOptions {
            r_start: eps,
            r_end,
            value_floor: band.0,
            value_ceiling: band.1,
            ..*options
        };
        let (traj, _) = shoot_singular(ProfileKind::Forward, params, delta, &opts)?;
        Ok(match traj.meta.termination {
            TerminationReason::HitFloor { radius } => (BandExit::ExitedBelow, Some(radius.ln())),
            TerminationReason::HitCeiling { radius } => (BandExit::ExitedAbove, Some(radius.ln())),
            TerminationReason::SpanEnd => (BandExit::StayedInBand, None),
            TerminationReason::Budget
            | TerminationReason::StepUnderflow
            | TerminationReason::Sampled => (BandExit::Inconclusive, None),
        })
    };

    let mut entries = Vec::with_capacity(delta_grid.len());
    for &delta in delta_grid {
        let (inward, inward_exit_log_radius) = leg(delta, INWARD_DEPTH)?;
        let (outward, _) = leg(delta, options.r_end)?;
        let inconclusive = inward == BandExit::Inconclusive || outward == BandExit::Inconclusive;
        let survivor =
            !inconclusive && inward == BandExit::StayedInBand && outward == BandExit::StayedInBand;
        entries.push(ProbeEntry {
            delta,
            inward,
            inward_exit_log_radius,
            outward,
            survivor,
            inconclusive,
        });
    }

    let survivors = entries.iter().filter(|e| e.survivor).count();
    let inconclusive = entries.iter().filter(|e| e.inconclusive).count();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for e in &entries {
        if let Some(s) = e.inward_exit_log_radius {
            xs.push(e.delta.abs().ln());
            ys.push(s);
        }
    }
    let inward_slope = if xs.len() >= 2 {
        linear_fit(&xs, &ys).ok().map(|(m, _)| m)
    } else {
        None
    };

    Ok(ProbeReport {
        entries,
        survivors,
        inconclusive,
        inward_slope,
        note: "an empty counterexample search fails to refute uniqueness of the singular \
               profile; it does not prove it"
            .into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::sample_u_star;
    use approx::assert_abs_diff_eq;

    fn params(n: f64, p: f64) -> Params {
        Params::new(n, p).unwrap()
    }

    fn far_options(r_end: f64) -> IntegrationOptions {
        let mut o = IntegrationOptions::new(1e-4, r_end);
        o.rel_tol = 1e-10;
        o.abs_tol = 1e-12;
        o.value_floor = Some(1e-10);
        o
    }

    #[test]
    fn forward_ground_state_is_positive_decaying_with_tail() {
        let shot = classify_shot(
            ProfileKind::Forward,
            &params(3.0, 5.0),
            1.0,
            &far_options(60.0),
        )
        .unwrap();
        assert_eq!(shot.tag.class(), TagClass::PositiveDecaying);
        let ell = shot.ell.expect("tail limit should be measured");
        assert!(shot.ell_converged, "tail should converge at r = 60");
        // The tail limit is positive and finite; it may legitimately exceed
        // the singular amplitude L (only the supremum over all bounded
        // solutions bounds it).
        assert!(
            ell > 0.0 && ell < 10.0,
            "ell = {ell} not a plausible tail limit"
        );
        assert!(!shot.constant_profile);
    }

    #[test]
    fn backward_constant_profile_special_case() {
        // The constant profile is an unstable equilibrium: rounding seeds
        // the e^{r²/4} mode, so constancy is only trackable to moderate
        // radii (the seed reaches ~1e-12 by r = 6 and order one by r ≈ 12).
        let pr = params(3.0, 5.0);
        let shot = classify_shot(ProfileKind::Backward, &pr, pr.kappa, &far_options(6.0)).unwrap();
        assert_eq!(shot.tag.class(), TagClass::PositiveDecaying);
        assert!(
            shot.constant_profile,
            "w ≡ κ must be flagged as the constant profile"
        );
        assert!(
            shot.ell.is_none(),
            "the constant profile has no decaying tail"
        );
    }

    #[test]
    fn large_backward_shot_leaves_the_positive_class() {
        let pr = params(3.0, 5.0);
        let shot = classify_shot(
            ProfileKind::Backward,
            &pr,
            10.0 * pr.kappa,
            &far_options(20.0),
        )
        .unwrap();
        assert!(
            matches!(shot.tag.class(), TagClass::HitsZero | TagClass::Blowup),
            "expected a non-profile tag, got {:?}",
            shot.tag
        );
    }

    #[test]
    fn tail_estimate_on_singular_samples_is_exact() {
        for (n, p) in [(3.0, 5.0), (11.0, 7.0), (11.0, 3.0)] {
            let pr = params(n, p);
            let traj =
                sample_u_star(&pr, ProfileKind::Forward, Frame::PhysicalW, 0.1, 80.0, 500).unwrap();
            let est = estimate_ell(&traj).unwrap();
            let l = pr.singular_amplitude.unwrap();
            assert!(
                (est.ell - l).abs() <= 1e-8 * l,
                "ell {} vs L {l} at ({n}, {p})",
                est.ell
            );
            assert!(est.converged);
        }
    }

    #[test]
    fn tail_estimate_on_synthetic_slow_decay() {
        // w(r) = r^{−α}(L + 1/r): v = L + 1/r, a geometric tail on a
        // log grid, so the extrapolation lands on L far better than the
        // raw samples do.
        let pr = params(3.0, 5.0);
        let l = pr.singular_amplitude.unwrap();
        let n = 400;
        let (r_lo, r_hi) = (1.0f64, 100.0f64);
        let ratio = (r_hi / r_lo).ln();
        let coords: Vec<f64> = (0..n)
            .map(|i| r_lo * (ratio * i as f64 / (n - 1) as f64).exp())
            .collect();
        let values: Vec<f64> = coords
            .iter()
            .map(|r| r.powf(-pr.alpha) * (l + 1.0 / r))
            .collect();
        let slopes: Vec<f64> = coords
            .iter()
            .map(|r| {
                -pr.alpha * r.powf(-pr.alpha - 1.0) * (l + 1.0 / r) - r.powf(-pr.alpha) / (r * r)
            })
            .collect();
        let meta = crate::ode::TrajectoryMeta {
            kind: ProfileKind::Forward,
            frame: Frame::PhysicalW,
            params: pr,
            rel_tol: 0.0,
            abs_tol: 0.0,
            termination: TerminationReason::Sampled,
            steps: 0,
        };
        let traj = Trajectory::from_samples(coords, values, slopes, meta).unwrap();
        let est = estimate_ell(&traj).unwrap();
        assert!((est.ell - l).abs() < 1e-3, "ell {} vs L {l}", est.ell);
    }

    #[test]
    fn tail_estimate_requires_span_and_kind() {
        let pr = params(3.0, 5.0);
        let short =
            sample_u_star(&pr, ProfileKind::Forward, Frame::PhysicalW, 0.1, 10.0, 100).unwrap();
        assert!(matches!(
            estimate_ell(&short),
            Err(Error::InsufficientSpan { .. })
        ));
        let steady =
            sample_u_star(&pr, ProfileKind::Steady, Frame::PhysicalW, 0.1, 80.0, 100).unwrap();
        assert!(matches!(
            estimate_ell(&steady),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn synthetic_bisection_converges_to_planted_boundary() {
        let planted = 1.2345678901234;
        let classify = |a: f64| -> Result<TagClass> {
            Ok(if a < planted {
                TagClass::HitsZero
            } else {
                TagClass::Blowup
            })
        };
        let res = bisect_boundary_with(classify, 0.5, 2.0, (TagClass::HitsZero, TagClass::Blowup))
            .unwrap();
        assert!(
            (res.a_star - planted).abs() < 1e-9,
            "a* = {} vs {planted}",
            res.a_star
        );
        assert!(res.bracket.1 - res.bracket.0 < 1e-10 * planted.max(1.0));
        assert_eq!(res.nudges, 0);
    }

    #[test]
    fn synthetic_bisection_nudges_through_undetermined_gaps() {
        // A thin undetermined strip around the midpoint of the first probe
        // forces the offset ladder to step around it.
        let planted = 1.0;
        let classify = |a: f64| -> Result<TagClass> {
            Ok(if (a - 1.25).abs() < 0.01 {
                TagClass::Undetermined
            } else if a < planted {
                TagClass::HitsZero
            } else {
                TagClass::Blowup
            })
        };
        let res = bisect_boundary_with(classify, 0.5, 2.0, (TagClass::HitsZero, TagClass::Blowup))
            .unwrap();
        assert!((res.a_star - planted).abs() < 1e-9);
        assert!(
            res.nudges > 0,
            "the undetermined strip must have forced nudges"
        );
    }

    #[test]
    fn bisection_bracket_errors() {
        let all_same = |_: f64| -> Result<TagClass> { Ok(TagClass::PositiveDecaying) };
        assert!(matches!(
            bisect_boundary_with(all_same, 0.1, 1.0, (TagClass::HitsZero, TagClass::Blowup)),
            Err(Error::SameTagBracket { .. })
        ));
        let swapped = |a: f64| -> Result<TagClass> {
            Ok(if a < 0.5 {
                TagClass::Blowup
            } else {
                TagClass::HitsZero
            })
        };
        assert!(matches!(
            bisect_boundary_with(swapped, 0.1, 1.0, (TagClass::HitsZero, TagClass::Blowup)),
            Err(Error::BracketTagMismatch { .. })
        ));
        let undecidable = |a: f64| -> Result<TagClass> {
            Ok(if a <= 0.1 {
                TagClass::HitsZero
            } else if a >= 1.0 {
                TagClass::Blowup
            } else {
                TagClass::Undetermined
            })
        };
        assert!(matches!(
            bisect_boundary_with(
                undecidable,
                0.1,
                1.0,
                (TagClass::HitsZero, TagClass::Blowup)
            ),
            Err(Error::UndeterminedBracket { .. })
        ));
    }

    #[test]
    fn sweep_orders_entries_and_finds_brackets() {
        let pr = params(3.0, 5.0);
        let grid = [0.5, 1.0, 2.0];
        let seq = run_sweep(ProfileKind::Forward, &pr, &grid, &far_options(60.0), false).unwrap();
        let par = run_sweep(ProfileKind::Forward, &pr, &grid, &far_options(60.0), true).unwrap();
        assert_eq!(seq.entries.len(), 3);
        for (s, p) in seq.entries.iter().zip(&par.entries) {
            assert_eq!(s.a, p.a);
            assert_eq!(s.classification.tag, p.classification.tag);
            assert_eq!(s.classification.ell, p.classification.ell);
        }
        // All three forward shots are positive decaying here, so no brackets.
        assert!(seq.brackets.is_empty());
        assert!(matches!(
            run_sweep(
                ProfileKind::Forward,
                &pr,
                &[1.0, 1.0],
                &far_options(60.0),
                false
            ),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn supremum_lower_bound_is_monotone_in_the_grid() {
        let pr = params(3.0, 5.0);
        let small = estimate_L_star(&pr, &[0.5, 1.0], &far_options(60.0)).unwrap();
        let large = estimate_L_star(&pr, &[0.25, 0.5, 1.0, 2.0], &far_options(60.0)).unwrap();
        assert!(large.lower_bound >= small.lower_bound - 1e-12);
        assert!(small.lower_bound > 0.0);
        assert_eq!(large.grid_size, 4);
        assert!(large.converged_count >= small.converged_count);
    }

    #[test]
    fn probe_rejects_bad_inputs() {
        // Subcritical beta.
        assert!(uniqueness_probe(
            &params(3.0, 4.0),
            &[1e-3],
            1e-2,
            &IntegrationOptions::new(1e-2, 50.0)
        )
        .is_err());
        // Zero perturbation in the grid.
        assert!(matches!(
            uniqueness_probe(
                &params(11.0, 7.0),
                &[0.0],
                1e-2,
                &IntegrationOptions::new(1e-2, 50.0)
            ),
            Err(Error::InvalidGrid(_))
        ));
    }

    /// The probe at (11, 7): every perturbation exits the band inward, no
    /// two-sided survivor exists, and the inward exit radii scale with the
    /// slow indicial root.
    #[test]
    fn probe_finds_no_survivors_and_matches_linear_theory() {
        let pr = params(11.0, 7.0);
        let mut o = IntegrationOptions::new(1e-2, 50.0);
        o.rel_tol = 1e-10;
        o.abs_tol = 1e-12;
        let deltas = [-1e-5, -1e-4, -1e-3, 1e-3, 1e-4, 1e-5];
        let report = uniqueness_probe(&pr, &deltas, 1e-2, &o).unwrap();
        assert_eq!(report.survivors, 0);
        assert_eq!(report.inconclusive, 0);
        for e in &report.entries {
            assert_ne!(
                e.inward,
                BandExit::StayedInBand,
                "delta {} survived inward",
                e.delta
            );
        }
        let slope = report.inward_slope.expect("inward exits present");
        assert_abs_diff_eq!(slope, 0.25, epsilon = 0.25 * 0.15);
    }
}
