//! Small, load-bearing numerical kernels: finite-difference weights on
//! arbitrary nodes, sequence extrapolation, derivative-corrected quadrature,
//! deterministic bisection, and least-squares line fitting.

use crate::error::{Error, Result};

/// Finite-difference weights on arbitrary nodes (Fornberg's recursion).
///
/// Returns `weights[m][j]` such that the `m`-th derivative of `f` at `z` is
/// approximated by `Σ_j weights[m][j] · f(x[j])`, for every `m ≤ max_order`.
/// The nodes `x` must be pairwise distinct; accuracy order is
/// `x.len() − max_order` on smooth functions.
pub fn fd_weights(z: f64, x: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let nd = x.len();
    assert!(nd > max_order, "need more nodes than the derivative order");
    let mut w = vec![vec![0.0; nd]; max_order + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    w[0][0] = 1.0;
    for i in 1..nd {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    w[k][i] = c1 * (k as f64 * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
                }
                w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                w[k][j] = ((x[i] - z) * w[k][j] - k as f64 * w[k - 1][j]) / c3;
            }
            w[0][j] = (x[i] - z) * w[0][j] / c3;
        }
        c1 = c2;
    }
    w
}

/// Differentiates sampled values once, using sliding `width`-point stencils
/// on the (possibly nonuniform) grid; one-sided stencils at the edges.
///
/// `width = 7` gives sixth-order accuracy on smooth data and is the default
/// used by trajectory residual evaluation.
pub fn derivative_on_grid(coords: &[f64], values: &[f64], width: usize) -> Result<Vec<f64>> {
    let n = coords.len();
    if n != values.len() {
        return Err(Error::InvalidOptions(format!(
            "coordinate/value length mismatch: {n} vs {}",
            values.len()
        )));
    }
    if n < 2 {
        return Err(Error::InsufficientSamples { got: n, need: 2 });
    }
    let width = width.max(2).min(n);
    let half = width / 2;
    let mut out = vec![0.0; n];
    for i in 0..n {
        let lo = i.saturating_sub(half).min(n - width);
        let nodes = &coords[lo..lo + width];
        let w = fd_weights(coords[i], nodes, 1);
        // Apply the weights to differences from the evaluation node: the
        // weights sum to zero analytically but not in floating point, so
        // this keeps constants differentiating to exactly zero and removes
        // the dominant cancellation term.
        let center = i - lo;
        out[i] = w[1]
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != center)
            .map(|(j, wi)| wi * (values[lo + j] - values[i]))
            .sum();
    }
    Ok(out)
}

/// Interpolatory quadrature weights on arbitrary distinct nodes.
///
/// Returns `w` such that `∫_{x[0]}^{x[last]} f ≈ Σ_j w[j] · f(x[j])`, exact
/// for polynomials of degree `< x.len()` (the integral of the Lagrange
/// interpolant). Computed by solving the moment system on the nodes mapped
/// affinely to `[−1, 1]`, which keeps the system well conditioned for the
/// short stencils (≤ 9 nodes) used here.
pub fn quadrature_weights(x: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if n < 2 {
        return Err(Error::InsufficientSamples { got: n, need: 2 });
    }
    let (a, b) = (x[0], x[n - 1]);
    if !(b > a) {
        return Err(Error::InvalidGrid(format!(
            "quadrature nodes must span an increasing interval, got [{a}, {b}]"
        )));
    }
    // Vandermonde-transpose moment system in the mapped variable
    // τ = (2ξ − a − b)/(b − a):  Σ_j w_j τ_j^k = ∫_{−1}^{1} τ^k dτ.
    let tau: Vec<f64> = x.iter().map(|&xi| (2.0 * xi - a - b) / (b - a)).collect();
    let mut mat = vec![vec![0.0f64; n]; n];
    let mut rhs = vec![0.0f64; n];
    for k in 0..n {
        let mut pow_row = Vec::with_capacity(n);
        for &t in &tau {
            pow_row.push(t.powi(k as i32));
        }
        mat[k] = pow_row;
        rhs[k] = if k % 2 == 0 {
            2.0 / (k as f64 + 1.0)
        } else {
            0.0
        };
    }
    let w_tau = solve_dense(&mut mat, &mut rhs)?;
    Ok(w_tau.iter().map(|w| w * (b - a) / 2.0).collect())
}

/// Gaussian elimination with partial pivoting for the small dense systems
/// quadrature-weight construction produces. Consumes its inputs.
fn solve_dense(mat: &mut [Vec<f64>], rhs: &mut [f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| mat[i][col].abs().total_cmp(&mat[j][col].abs()))
            .expect("non-empty pivot range");
        if mat[pivot][col].abs() == 0.0 {
            return Err(Error::InvalidGrid(
                "singular quadrature moment system".into(),
            ));
        }
        mat.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..n {
            let (upper, lower) = mat.split_at_mut(row);
            let pivot_row = &upper[col];
            let target_row = &mut lower[0];
            let f = target_row[col] / pivot_row[col];
            if f == 0.0 {
                continue;
            }
            for (t, &pv) in target_row[col..].iter_mut().zip(&pivot_row[col..]) {
                *t -= f * pv;
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut out = vec![0.0f64; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc -= mat[row][k] * out[k];
        }
        out[row] = acc / mat[row][row];
    }
    Ok(out)
}

/// Aitken Δ² extrapolation of a three-term tail `v1, v2, v3` toward its
/// limit; exact when the correction decays geometrically.
///
/// Falls back to `v3` when the differences are too degenerate to divide
/// (e.g. an exactly constant tail).
pub fn aitken(v1: f64, v2: f64, v3: f64) -> f64 {
    let d1 = v2 - v1;
    let d2 = v3 - v2;
    let denom = d2 - d1;
    let scale = v1.abs().max(v2.abs()).max(v3.abs()).max(1e-300);
    if denom.abs() <= 1e-14 * scale {
        v3
    } else {
        v3 - d2 * d2 / denom
    }
}

/// Cumulative integral of sampled `g` with known derivative samples `dg`,
/// by the derivative-corrected (Euler–Maclaurin) trapezoid rule:
///
/// `∫_{x_i}^{x_{i+1}} g ≈ h/2 (g_i + g_{i+1}) + h²/12 (g'_i − g'_{i+1})`.
///
/// Fourth-order accurate per panel on smooth integrands; returns the running
/// integral from `x[0]`, same length as `x`.
pub fn cumulative_corrected_trapezoid(x: &[f64], g: &[f64], dg: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if g.len() != n || dg.len() != n {
        return Err(Error::InvalidOptions(
            "integrand/derivative sample lengths must match the grid".into(),
        ));
    }
    if n < 2 {
        return Err(Error::InsufficientSamples { got: n, need: 2 });
    }
    let mut out = vec![0.0; n];
    for i in 1..n {
        let h = x[i] - x[i - 1];
        let panel = 0.5 * h * (g[i - 1] + g[i]) + h * h / 12.0 * (dg[i - 1] - dg[i]);
        out[i] = out[i - 1] + panel;
    }
    Ok(out)
}

/// Total integral over the grid by [`cumulative_corrected_trapezoid`],
/// alongside the same integral on the coarsened (every other node) grid.
///
/// The pair quantifies quadrature convergence on a fixed sample set: the
/// fine/coarse gap is a refinement error estimate.
pub fn integral_with_refinement(x: &[f64], g: &[f64], dg: &[f64]) -> Result<(f64, f64)> {
    let fine = *cumulative_corrected_trapezoid(x, g, dg)?
        .last()
        .expect("nonempty by construction");
    let xc: Vec<f64> = x.iter().copied().step_by(2).collect();
    let gc: Vec<f64> = g.iter().copied().step_by(2).collect();
    let dgc: Vec<f64> = dg.iter().copied().step_by(2).collect();
    let coarse = if xc.len() >= 2 {
        let mut xs = xc;
        let mut gs = gc;
        let mut dgs = dgc;
        // Keep the true right endpoint so both rules integrate the same span.
        if *xs.last().unwrap() != *x.last().unwrap() {
            xs.push(*x.last().unwrap());
            gs.push(*g.last().unwrap());
            dgs.push(*dg.last().unwrap());
        }
        *cumulative_corrected_trapezoid(&xs, &gs, &dgs)?
            .last()
            .unwrap()
    } else {
        fine
    };
    Ok((fine, coarse))
}

/// Deterministic bisection for a sign change of `f` on `[lo, hi]`.
///
/// Requires `f(lo)` and `f(hi)` to have opposite signs. Runs until the
/// bracket width is below `xtol` (absolute) or `max_iter` halvings.
pub fn bisect_root<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::InvalidOptions(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}"
        )));
    }
    let falling = flo > 0.0;
    for _ in 0..max_iter {
        if (hi - lo).abs() <= xtol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == falling {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Ordinary least-squares line `y ≈ slope·x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::InvalidOptions("x/y length mismatch".into()));
    }
    if n < 2 {
        return Err(Error::InsufficientSamples { got: n, need: 2 });
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidOptions(
            "degenerate fit: all x identical".into(),
        ));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Piecewise-linear interpolation of `(xs, ys)` at ascending query points.
///
/// `xs` must be strictly increasing and each query must lie inside
/// `[xs[0], xs[last]]`.
pub fn interp_linear(xs: &[f64], ys: &[f64], queries: &[f64]) -> Result<Vec<f64>> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidOptions("xs/ys length mismatch".into()));
    }
    if xs.len() < 2 {
        return Err(Error::InsufficientSamples {
            got: xs.len(),
            need: 2,
        });
    }
    let mut out = Vec::with_capacity(queries.len());
    let mut seg = 0usize;
    for &q in queries {
        if q < xs[0] || q > xs[xs.len() - 1] {
            return Err(Error::SpanOutOfRange {
                lo: q,
                hi: q,
                traj_lo: xs[0],
                traj_hi: xs[xs.len() - 1],
            });
        }
        while seg + 2 < xs.len() && xs[seg + 1] < q {
            seg += 1;
        }
        let (x0, x1) = (xs[seg], xs[seg + 1]);
        let t = if x1 > x0 { (q - x0) / (x1 - x0) } else { 0.0 };
        out.push(ys[seg] + t * (ys[seg + 1] - ys[seg]));
    }
    Ok(out)
}

/// Piecewise-cubic Hermite interpolation of `(xs, ys)` with known slopes
/// `dys`, at ascending query points.
///
/// Fourth-order accurate (`O(h⁴ y⁗)` per panel versus `O(h² y″)` for the
/// linear rule), which matters when resampling steep curves. Same domain
/// contract as [`interp_linear`].
pub fn interp_hermite(xs: &[f64], ys: &[f64], dys: &[f64], queries: &[f64]) -> Result<Vec<f64>> {
    if xs.len() != ys.len() || xs.len() != dys.len() {
        return Err(Error::InvalidOptions("xs/ys/dys length mismatch".into()));
    }
    if xs.len() < 2 {
        return Err(Error::InsufficientSamples {
            got: xs.len(),
            need: 2,
        });
    }
    let mut out = Vec::with_capacity(queries.len());
    let mut seg = 0usize;
    for &q in queries {
        if q < xs[0] || q > xs[xs.len() - 1] {
            return Err(Error::SpanOutOfRange {
                lo: q,
                hi: q,
                traj_lo: xs[0],
                traj_hi: xs[xs.len() - 1],
            });
        }
        while seg + 2 < xs.len() && xs[seg + 1] < q {
            seg += 1;
        }
        let (x0, x1) = (xs[seg], xs[seg + 1]);
        let h = x1 - x0;
        let t = if h > 0.0 { (q - x0) / h } else { 0.0 };
        let t2 = t * t;
        let t3 = t2 * t;
        out.push(
            (2.0 * t3 - 3.0 * t2 + 1.0) * ys[seg]
                + (t3 - 2.0 * t2 + t) * h * dys[seg]
                + (-2.0 * t3 + 3.0 * t2) * ys[seg + 1]
                + (t3 - t2) * h * dys[seg + 1],
        );
    }
    Ok(out)
}
