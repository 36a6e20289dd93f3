//! Embedded Dormand–Prince 5(4) stepper with dense output, directed value
//! events, and log-spaced output sampling.
//!
//! The stepper is deterministic: no randomness, no wall-clock input, and a
//! fixed controller, so identical inputs produce bit-identical trajectories.

use crate::error::{Error, Result};
use crate::ode::{rhs, Frame, ProfileState, TerminationReason, Trajectory, TrajectoryMeta};

use super::IntegrationOptions;

// Butcher tableau of the Dormand–Prince 5(4) pair.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// Difference between the fifth- and fourth-order weights (error estimator).
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Dense-output weights.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

type Y = [f64; 2];

/// Fourth-degree interpolant of one accepted step, per component.
struct DenseSegment {
    t0: f64,
    /// Signed step (negative for inward runs).
    h: f64,
    rcont: [[f64; 5]; 2],
}

impl DenseSegment {
    fn new(t0: f64, h: f64, y0: Y, y1: Y, k: &[Y; 7]) -> Self {
        let mut rcont = [[0.0; 5]; 2];
        for c in 0..2 {
            let ydiff = y1[c] - y0[c];
            let bspl = h * k[0][c] - ydiff;
            rcont[c] = [
                y0[c],
                ydiff,
                bspl,
                ydiff - h * k[6][c] - bspl,
                h * (D1 * k[0][c]
                    + D3 * k[2][c]
                    + D4 * k[3][c]
                    + D5 * k[4][c]
                    + D6 * k[5][c]
                    + D7 * k[6][c]),
            ];
        }
        DenseSegment { t0, h, rcont }
    }

    fn eval(&self, component: usize, theta: f64) -> f64 {
        let r = &self.rcont[component];
        let th1 = 1.0 - theta;
        r[0] + theta * (r[1] + th1 * (r[2] + theta * (r[3] + th1 * r[4])))
    }

    fn coord(&self, theta: f64) -> f64 {
        self.t0 + theta * self.h
    }
}

fn eval_rhs(template: &ProfileState, t: f64, y: Y) -> Result<Y> {
    let state = ProfileState {
        coord: t,
        value: y[0],
        slope: y[1],
        ..*template
    };
    let (dv, ds) = rhs(&state)?;
    Ok([dv, ds])
}

/// Weighted RMS error norm of the 5(4) difference.
fn error_norm(err: Y, y0: Y, y1: Y, rel: f64, abs: f64) -> f64 {
    let mut acc = 0.0;
    for c in 0..2 {
        let sc = abs + rel * y0[c].abs().max(y1[c].abs());
        let e = err[c] / sc;
        acc += e * e;
    }
    (acc / 2.0).sqrt()
}

/// Conservative initial step size from the local derivative scale
/// (the standard two-evaluation heuristic).
#[allow(clippy::too_many_arguments)]
fn initial_step(
    template: &ProfileState,
    t0: f64,
    y0: Y,
    f0: Y,
    dir: f64,
    span: f64,
    rel: f64,
    abs: f64,
) -> f64 {
    let sc = |c: usize, y: Y| abs + rel * y[c].abs();
    let d0 = ((y0[0] / sc(0, y0)).powi(2) + (y0[1] / sc(1, y0)).powi(2)).sqrt();
    let d1 = ((f0[0] / sc(0, y0)).powi(2) + (f0[1] / sc(1, y0)).powi(2)).sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6 * span
    } else {
        0.01 * (d0 / d1)
    };
    let h0 = h0.min(span);
    let y1 = [y0[0] + dir * h0 * f0[0], y0[1] + dir * h0 * f0[1]];
    let f1 = match eval_rhs(template, t0 + dir * h0, y1) {
        Ok(f) => f,
        Err(_) => return (1e-6 * span).min(h0),
    };
    let d2 =
        (((f1[0] - f0[0]) / sc(0, y0)).powi(2) + ((f1[1] - f0[1]) / sc(1, y0)).powi(2)).sqrt() / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (1e-6f64 * span).max(h0 * 1e-3)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    h1.min(100.0 * h0).min(span)
}

/// Collects output samples in strictly monotone coordinate order.
struct Sampler {
    grid: Vec<f64>,
    next: usize,
    dir: f64,
    coords: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl Sampler {
    fn new(opt: &IntegrationOptions, frame: Frame, initial: &ProfileState) -> Self {
        let n = opt.n_output;
        let grid: Vec<f64> = if frame == Frame::LogPhase {
            (0..n)
                .map(|i| opt.r_start + (opt.r_end - opt.r_start) * i as f64 / (n - 1) as f64)
                .collect()
        } else {
            let ratio = (opt.r_end / opt.r_start).ln();
            (0..n)
                .map(|i| opt.r_start * (ratio * i as f64 / (n - 1) as f64).exp())
                .collect()
        };
        let dir = (opt.r_end - opt.r_start).signum();
        let mut s = Sampler {
            grid,
            next: 1, // grid[0] is the start point, emitted directly
            dir,
            coords: Vec::with_capacity(n + 2),
            values: Vec::with_capacity(n + 2),
            slopes: Vec::with_capacity(n + 2),
        };
        s.push(initial.coord, initial.value, initial.slope);
        s
    }

    fn push(&mut self, t: f64, v: f64, sl: f64) {
        if let Some(&last) = self.coords.last() {
            if (t - last) * self.dir <= 0.0 {
                return;
            }
        }
        self.coords.push(t);
        self.values.push(v);
        self.slopes.push(sl);
    }

    /// Emits grid points strictly before `bound` using the dense segment.
    fn emit_until(&mut self, seg: &DenseSegment, bound: f64) {
        while self.next + 1 < self.grid.len() {
            let g = self.grid[self.next];
            if (g - bound) * self.dir >= 0.0 {
                break;
            }
            let theta = (g - seg.t0) / seg.h;
            if theta > 1.0 + 1e-12 {
                break;
            }
            let theta = theta.clamp(0.0, 1.0);
            self.push(g, seg.eval(0, theta), seg.eval(1, theta));
            self.next += 1;
        }
    }
}

pub(super) fn run(initial: &ProfileState, opt: &IntegrationOptions) -> Result<Trajectory> {
    let template = *initial;
    let dir = (opt.r_end - opt.r_start).signum();
    let span = (opt.r_end - opt.r_start).abs();
    let h_min = 1e-14 * span.max(opt.r_start.abs()).max(opt.r_end.abs());

    let t_end = opt.r_end;
    let mut t = initial.coord;
    let mut y: Y = [initial.value, initial.slope];
    let mut f = eval_rhs(&template, t, y)?; // FSAL carrier

    let mut sampler = Sampler::new(opt, initial.frame, initial);
    let mut ceiling_armed = match opt.value_ceiling {
        Some(c) => y[0] < c,
        None => false,
    };

    let mut h = initial_step(&template, t, y, f, dir, span, opt.rel_tol, opt.abs_tol);
    let mut steps = 0usize;
    let mut allow_growth = true;
    let termination;

    loop {
        if steps >= opt.max_steps {
            termination = TerminationReason::Budget;
            break;
        }
        // Clamp the final step to land exactly on the endpoint.
        let mut last_step = false;
        if (t + dir * h - t_end) * dir >= 0.0 {
            h = (t_end - t).abs();
            last_step = true;
        }
        if h < h_min || t + dir * h == t {
            termination = TerminationReason::StepUnderflow;
            break;
        }
        let hs = dir * h; // signed step

        // Stage evaluations; any domain error (negative base under a
        // fractional power) rejects the step and halves it.
        let stages = (|| -> Result<(Y, [Y; 7])> {
            let k1 = f;
            let k2 = eval_rhs(&template, t + C2 * hs, add(y, hs, &[(A21, k1)]))?;
            let k3 = eval_rhs(&template, t + C3 * hs, add(y, hs, &[(A31, k1), (A32, k2)]))?;
            let k4 = eval_rhs(
                &template,
                t + C4 * hs,
                add(y, hs, &[(A41, k1), (A42, k2), (A43, k3)]),
            )?;
            let k5 = eval_rhs(
                &template,
                t + C5 * hs,
                add(y, hs, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]),
            )?;
            let k6 = eval_rhs(
                &template,
                t + hs,
                add(
                    y,
                    hs,
                    &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)],
                ),
            )?;
            let y1 = add(y, hs, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]);
            let k7 = eval_rhs(&template, t + hs, y1)?;
            Ok((y1, [k1, k2, k3, k4, k5, k6, k7]))
        })();

        let (y1, k) = match stages {
            Ok(ok) => ok,
            Err(Error::NegativePower { .. }) | Err(Error::InvalidState(_)) => {
                h *= 0.5;
                allow_growth = false;
                continue;
            }
            Err(e) => return Err(e),
        };

        let err_vec = [
            hs * (E1 * k[0][0]
                + E3 * k[2][0]
                + E4 * k[3][0]
                + E5 * k[4][0]
                + E6 * k[5][0]
                + E7 * k[6][0]),
            hs * (E1 * k[0][1]
                + E3 * k[2][1]
                + E4 * k[3][1]
                + E5 * k[4][1]
                + E6 * k[5][1]
                + E7 * k[6][1]),
        ];
        let err = error_norm(err_vec, y, y1, opt.rel_tol, opt.abs_tol);
        if !err.is_finite() {
            h *= 0.5;
            allow_growth = false;
            continue;
        }
        if err > 1.0 {
            h *= (0.9 * err.powf(-0.2)).max(0.2);
            allow_growth = false;
            continue;
        }

        // Accepted.
        steps += 1;
        let t1 = if last_step { t_end } else { t + hs };
        let seg = DenseSegment::new(t, hs, y, y1, &k);

        // Directed events on the value component.
        let mut event: Option<(TerminationReason, f64)> = None;
        if let Some(floor) = opt.value_floor {
            if y[0] >= floor && y1[0] < floor {
                let theta = locate(&seg, 0, floor);
                event = Some((
                    TerminationReason::HitFloor {
                        radius: seg.coord(theta),
                    },
                    theta,
                ));
            }
        }
        if event.is_none() {
            if let Some(ceiling) = opt.value_ceiling {
                if ceiling_armed && y[0] < ceiling && y1[0] >= ceiling {
                    let theta = locate(&seg, 0, ceiling);
                    event = Some((
                        TerminationReason::HitCeiling {
                            radius: seg.coord(theta),
                        },
                        theta,
                    ));
                }
                if y1[0] < ceiling {
                    ceiling_armed = true;
                }
            }
        }

        if let Some((reason, theta)) = event {
            let tc = seg.coord(theta);
            sampler.emit_until(&seg, tc);
            sampler.push(tc, seg.eval(0, theta), seg.eval(1, theta));
            termination = reason;
            break;
        }

        sampler.emit_until(&seg, t1);
        t = t1;
        y = y1;
        f = k[6]; // FSAL

        if last_step {
            sampler.push(t_end, y[0], y[1]);
            termination = TerminationReason::SpanEnd;
            break;
        }

        let factor_cap = if allow_growth { 10.0 } else { 1.0 };
        let factor = if err == 0.0 {
            factor_cap
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, factor_cap)
        };
        h *= factor;
        allow_growth = true;
    }

    if matches!(
        termination,
        TerminationReason::Budget | TerminationReason::StepUnderflow
    ) {
        // Keep the last good state so callers can inspect how far we got.
        sampler.push(t, y[0], y[1]);
    }

    if sampler.coords.len() < 2 {
        return Err(Error::InvalidState(
            "integration made no progress from the initial state".into(),
        ));
    }

    let meta = TrajectoryMeta {
        kind: initial.kind,
        frame: initial.frame,
        params: initial.params,
        rel_tol: opt.rel_tol,
        abs_tol: opt.abs_tol,
        termination,
        steps,
    };
    Trajectory::from_samples(sampler.coords, sampler.values, sampler.slopes, meta)
}

fn add(y: Y, hs: f64, terms: &[(f64, Y)]) -> Y {
    let mut out = y;
    for &(a, k) in terms {
        out[0] += hs * a * k[0];
        out[1] += hs * a * k[1];
    }
    out
}

/// Bisects the dense interpolant for the crossing of `threshold` by the
/// given component; the endpoints straddle by construction.
fn locate(seg: &DenseSegment, component: usize, threshold: f64) -> f64 {
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let f_lo = seg.eval(component, lo) - threshold;
    let falling = f_lo > 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fm = seg.eval(component, mid) - threshold;
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == falling {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
