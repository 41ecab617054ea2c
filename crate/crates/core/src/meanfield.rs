//! Classical part of the effective Hamiltonian.
//!
//! The ground state in the thermodynamic limit is fixed by the energy per
//! atom
//!
//! ```text
//! f(z) = [ z²/y − √(1 + 2xz + z²) − √(1 − 2xz + z²) ] / 2
//! ```
//!
//! in units of `ω₀/2` per atom, where `z = 2g⟨b⟩/(ω₀√N)` is the rescaled
//! photon field. `f` is even in `z`, so everything here works on `z ≥ 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// `x` coordinate of the tricritical point, `1/√5`.
pub const TRICRITICAL_X: f64 = 0.447_213_595_499_957_9;
/// `y` coordinate of the tricritical point.
pub const TRICRITICAL_Y: f64 = 1.25;

/// Minimizers closer to the origin than this are reported as the normal state.
pub const Z_TOLERANCE: f64 = 1e-10;

/// Intervals of the coarse scan that brackets minima.
pub const GRID_INTERVALS: usize = 400;
const MAX_DERIVATIVE_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Normal,
    Superradiant,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Normal => "normal",
            Phase::Superradiant => "superradiant",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldSolution {
    /// Global minimizer, `z ≥ 0`; exactly zero in the normal phase.
    pub z: f64,
    /// `f(z)` at the global minimizer.
    pub energy: f64,
    pub phase: Phase,
    /// Every local minimum found on the search bracket as `(z, f(z))`, in
    /// increasing `z`.
    pub all_minima: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionOrder {
    SecondOrder,
    FirstOrder,
    Tricritical,
}

impl TransitionOrder {
    pub fn as_str(&self) -> &'static str {
        match self {
            TransitionOrder::SecondOrder => "second_order",
            TransitionOrder::FirstOrder => "first_order",
            TransitionOrder::Tricritical => "tricritical",
        }
    }
}

/// A point on the phase boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub x_c: f64,
    pub y_c: f64,
    pub order: TransitionOrder,
    /// Discontinuity of the order parameter across the boundary.
    pub z_jump: f64,
}

fn require_coupling(p: &ModelParams) -> Result<()> {
    if p.y > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(
            "f(z) is undefined at y = 0; the uncoupled system is always normal".into(),
        ))
    }
}

/// Radicands `1 ± 2xz + z²`.
fn radicands(z: f64, x: f64) -> (f64, f64) {
    let base = 1.0 + z * z;
    (base + 2.0 * x * z, base - 2.0 * x * z)
}

/// Mean-field energy per atom `f(z)`.
pub fn energy(z: f64, p: &ModelParams) -> Result<f64> {
    require_coupling(p)?;
    let z = z.abs();
    let (qp, qm) = radicands(z, p.x);
    Ok(0.5 * (z * z / p.y - qp.sqrt() - qm.sqrt()))
}

/// Derivatives `d^k u/dz^k`, `k = 0..=order`, of `u = √(1 + 2sz + z²)`.
///
/// From `u² = q` the Leibniz rule gives
/// `2u u⁽ⁿ⁾ = q⁽ⁿ⁾ − Σ_{k=1}^{n−1} C(n,k) u⁽ᵏ⁾ u⁽ⁿ⁻ᵏ⁾`.
fn sqrt_radicand_derivatives(z: f64, s: f64, order: usize) -> Vec<f64> {
    let q = [1.0 + 2.0 * s * z + z * z, 2.0 * (z + s), 2.0];
    let mut u = Vec::with_capacity(order + 1);
    u.push(q[0].sqrt());
    for n in 1..=order {
        let mut rhs = q.get(n).copied().unwrap_or(0.0);
        let mut binom = 1.0;
        for k in 1..n {
            binom = binom * (n - k + 1) as f64 / k as f64;
            rhs -= binom * u[k] * u[n - k];
        }
        u.push(rhs / (2.0 * u[0]));
    }
    u
}

/// Analytic derivatives `f, f′, …, f^(max_order)` at `z`.
pub fn energy_derivatives(z: f64, p: &ModelParams, max_order: usize) -> Result<Vec<f64>> {
    require_coupling(p)?;
    if max_order > MAX_DERIVATIVE_ORDER {
        return Err(Error::Domain(format!(
            "derivative order {max_order} exceeds the supported maximum {MAX_DERIVATIVE_ORDER}"
        )));
    }
    let up = sqrt_radicand_derivatives(z, p.x, max_order);
    let um = sqrt_radicand_derivatives(z, -p.x, max_order);
    let quad = [z * z, 2.0 * z, 2.0];
    Ok((0..=max_order)
        .map(|k| 0.5 * (quad.get(k).copied().unwrap_or(0.0) / p.y - up[k] - um[k]))
        .collect())
}

/// Taylor coefficients `c_0, c_2, …` with `f = Σ c_{2n} z^{2n}/(2n)!`, so
/// `c_{2n} = f^(2n)(0)`.
pub fn series_coefficients(p: &ModelParams, n_terms: usize) -> Result<Vec<f64>> {
    if n_terms == 0 || n_terms > 4 {
        return Err(Error::Domain(format!("n_terms = {n_terms} must lie in 1..=4")));
    }
    let d = energy_derivatives(0.0, p, 2 * (n_terms - 1))?;
    Ok(d.into_iter().step_by(2).collect())
}

/// `1 − y(1 − x²)` with the products carried exactly, so the result is
/// accurate to a few ulps of itself even on the critical line where it
/// vanishes.
pub fn normal_determinant(x: f64, y: f64) -> f64 {
    let x2 = x * x;
    let x2_err = x.mul_add(x, -x2);
    let yx2 = y * x2;
    let yx2_err = y.mul_add(x2, -yx2) + y * x2_err;
    ((1.0 - y) + yx2) + yx2_err
}

/// `f′(z)/z`, written without the cancellation that plagues `f′` near the
/// origin.
///
/// Split as `c₂ + M/(2 r₊ r₋ (r₊ + r₋))` with `c₂ = (1 − y(1 − x²))/y` and
/// `M = O(z²)` assembled from pieces that each vanish like `z²`, so the
/// result keeps its relative accuracy next to the critical line.
///
/// Its value at `z = 0` is `c₂`, and for `z > 0` it carries the sign of `f′`.
pub fn reduced_slope(z: f64, p: &ModelParams) -> f64 {
    let c2 = normal_determinant(p.x, p.y) / p.y;
    if z == 0.0 {
        return c2;
    }
    let (x2, z2) = (p.x * p.x, z * z);
    let s = (1.0 - p.x) * (1.0 + p.x);
    let (qp, qm) = radicands(z, p.x);
    let (rp, rm) = (qp.sqrt(), qm.sqrt());
    let u = 1.0 + z2;
    let prod = rp * rm;
    let sum = rp + rm;
    // u − r₊r₋ and r₊ + r₋ − 2, both O(z²).
    let delta = 4.0 * x2 * z2 / (u + prod);
    let eps = (4.0 * z2 - 2.0 * delta) / (sum + 2.0);
    let m = -4.0 * x2 * z2 + delta * (2.0 - 4.0 * s) + 2.0 * s * (u - delta) * eps;
    c2 + m / (2.0 * prod * sum)
}

fn search_limit(y: f64) -> f64 {
    f64::max(10.0, 4.0 * y)
}

/// Refine a sign change of `f′` inside `[lo, hi]` to the resolution of doubles.
fn refine_minimum(mut lo: f64, mut hi: f64, p: &ModelParams) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if reduced_slope(mid, p) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Global minimum of `f` over `z ≥ 0`.
///
/// A 401-point scan of `f′/z`, quadratically graded toward the origin,
/// brackets every local minimum; each bracket is then bisected on the sign
/// of `f′`. Competing minima are compared by their energies.
pub fn minimize(p: &ModelParams) -> Result<MeanFieldSolution> {
    if p.y == 0.0 {
        return Ok(MeanFieldSolution {
            z: 0.0,
            energy: -1.0,
            phase: Phase::Normal,
            all_minima: vec![(0.0, -1.0)],
        });
    }
    let z_max = search_limit(p.y);
    let grid: Vec<f64> = (0..=GRID_INTERVALS)
        .map(|k| {
            let t = k as f64 / GRID_INTERVALS as f64;
            z_max * t * t
        })
        .collect();
    let slope: Vec<f64> = grid.iter().map(|&z| reduced_slope(z, p)).collect();

    if slope[GRID_INTERVALS] <= 0.0 {
        return Err(Error::Internal(format!(
            "f is still decreasing at the search limit z = {z_max} for {p:?}"
        )));
    }

    let mut minima = Vec::new();
    // c₂ = 0 with a positive quartic still makes the origin a minimum.
    if slope[0] > 0.0 || (slope[0] == 0.0 && slope[1] > 0.0) {
        minima.push((0.0, -1.0));
    }
    for k in 0..GRID_INTERVALS {
        if slope[k] <= 0.0 && slope[k + 1] > 0.0 && !(k == 0 && slope[0] == 0.0) {
            let z = refine_minimum(grid[k], grid[k + 1], p);
            minima.push((z, energy(z, p)?));
        }
    }

    let &(mut z, mut best) = minima
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Internal(format!("no local minimum bracketed for {p:?}")))?;
    if z < Z_TOLERANCE {
        z = 0.0;
        best = -1.0;
    }
    let phase = if z == 0.0 { Phase::Normal } else { Phase::Superradiant };
    Ok(MeanFieldSolution { z, energy: best, phase, all_minima: minima })
}

pub fn classify_phase(p: &ModelParams) -> Result<Phase> {
    minimize(p).map(|s| s.phase)
}

/// Second-order line `y_c = 1/(1 − x_c²)`, valid up to the tricritical point.
pub fn critical_line(x_c: f64) -> Result<f64> {
    if !(0.0..=TRICRITICAL_X).contains(&x_c) {
        return Err(Error::Domain(format!(
            "x_c = {x_c} is outside [0, 1/√5]; beyond the tricritical point use first_order_boundary"
        )));
    }
    Ok(1.0 / ((1.0 - x_c) * (1.0 + x_c)))
}

/// Locate the tricritical point by solving `c₂ = c₄ = 0` with Newton's
/// method from `(0.4, 1.2)`.
pub fn tricritical_point() -> Result<BoundaryPoint> {
    let residual = |x: f64, y: f64| -> Result<[f64; 2]> {
        let c = series_coefficients(&ModelParams::new(x, y, 1.0)?, 3)?;
        Ok([c[1], c[2]])
    };
    let (mut x, mut y) = (0.4, 1.2);
    for _ in 0..100 {
        let r = residual(x, y)?;
        let h = 1e-7;
        let (rxp, rxm) = (residual(x + h, y)?, residual(x - h, y)?);
        let (ryp, rym) = (residual(x, y + h)?, residual(x, y - h)?);
        let j = [
            [(rxp[0] - rxm[0]) / (2.0 * h), (ryp[0] - rym[0]) / (2.0 * h)],
            [(rxp[1] - rxm[1]) / (2.0 * h), (ryp[1] - rym[1]) / (2.0 * h)],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::Internal("singular Jacobian while locating the tricritical point".into()));
        }
        let dx = (r[0] * j[1][1] - r[1] * j[0][1]) / det;
        let dy = (j[0][0] * r[1] - j[1][0] * r[0]) / det;
        x -= dx;
        y -= dy;
        if dx.abs() < 1e-15 && dy.abs() < 1e-15 {
            return Ok(BoundaryPoint { x_c: x, y_c: y, order: TransitionOrder::Tricritical, z_jump: 0.0 });
        }
    }
    Err(Error::Internal("Newton iteration for the tricritical point did not converge".into()))
}

/// Lowest superradiant local minimum `(z*, f(z*))`, if any.
fn superradiant_minimum(p: &ModelParams) -> Result<Option<(f64, f64)>> {
    let sol = minimize(p)?;
    Ok(sol
        .all_minima
        .into_iter()
        .filter(|&(z, _)| z > 0.0)
        .min_by(|a, b| a.1.total_cmp(&b.1)))
}

/// First-order boundary at `x > 1/√5`: the coupling where the normal and
/// superradiant minima are degenerate.
///
/// Bisects in `y` between 1, where the normal state is the unique global
/// minimum, and the second-order spinodal `1/(1 − x²)`, where the origin
/// has become a maximum.
pub fn first_order_boundary(x: f64) -> Result<BoundaryPoint> {
    if !(x > TRICRITICAL_X && x < 1.0) {
        return Err(Error::Domain(format!(
            "x = {x} is outside (1/√5, 1); the boundary there is second order, use critical_line"
        )));
    }
    // Energy of the superradiant branch relative to the normal state.
    let split = |y: f64| -> Result<Option<(f64, f64)>> {
        let p = ModelParams::new(x, y, 1.0)?;
        Ok(superradiant_minimum(&p)?.map(|(z, f)| (z, f + 1.0)))
    };
    let (mut lo, mut hi) = (1.0, 1.0 / ((1.0 - x) * (1.0 + x)));
    let mut best: Option<(f64, f64, f64)> = None;
    let consider = |y: f64, z: f64, d: f64, best: &mut Option<(f64, f64, f64)>| {
        if best.is_none_or(|(_, _, bd)| d.abs() < bd.abs()) {
            *best = Some((y, z, d));
        }
    };
    // Right at the spinodal the superradiant minimum can be too shallow to
    // resolve; step upward until it is clearly below the normal state.
    let spinodal = hi;
    for k in 0.. {
        match split(hi)? {
            Some((z, d)) if d < 0.0 => {
                consider(hi, z, d, &mut best);
                break;
            }
            _ if k < 60 => hi = spinodal + (spinodal - 1.0) * 1e-12 * 2f64.powi(k),
            _ => return Err(Error::Internal(format!("no superradiant minimum above the spinodal for x = {x}"))),
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match split(mid)? {
            Some((z, d)) => {
                consider(mid, z, d, &mut best);
                if d == 0.0 {
                    break;
                }
                if d < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            None => lo = mid,
        }
    }
    let (y_c, z_jump, _) = best.expect("spinodal point was recorded");
    Ok(BoundaryPoint { x_c: x, y_c, order: TransitionOrder::FirstOrder, z_jump })
}

/// Phase boundary at any `x ∈ [0, 1)`.
pub fn boundary_at(x: f64) -> Result<BoundaryPoint> {
    if x > TRICRITICAL_X {
        first_order_boundary(x)
    } else {
        let order = if x == TRICRITICAL_X { TransitionOrder::Tricritical } else { TransitionOrder::SecondOrder };
        Ok(BoundaryPoint { x_c: x, y_c: critical_line(x)?, order, z_jump: 0.0 })
    }
}
