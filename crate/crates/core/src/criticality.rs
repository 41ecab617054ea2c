//! Scaling near the second-order line and the tricritical point.
//!
//! Approaches leave the critical line along its normal in the `(x, y)`
//! plane, so the distance `n` is Euclidean in those coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fluctuations::{self, build_omega_squared, spectrum};
use crate::meanfield::{self, critical_line, BoundaryPoint, Phase, TransitionOrder, TRICRITICAL_X, TRICRITICAL_Y};
use crate::params::ModelParams;

/// Smallest distance an approach may sample.
pub const MIN_DISTANCE: f64 = 1e-10;
/// Gaps below this leave the universal relation undefined.
pub const RELATION_GAP_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Superradiant,
    Normal,
}

impl Side {
    pub fn phase(&self) -> Phase {
        match self {
            Side::Superradiant => Phase::Superradiant,
            Side::Normal => Phase::Normal,
        }
    }
}

/// Unit normal of `y = 1/(1 − x²)` at `x_c`, pointing toward larger `y`.
pub fn critical_normal(x_c: f64) -> [f64; 2] {
    let s = 1.0 - x_c * x_c;
    let slope = 2.0 * x_c / (s * s);
    let norm = slope.hypot(1.0);
    [-slope / norm, 1.0 / norm]
}

/// `√(y_c⁻² + 4x_c²y_c²)`, the scale relating `n` to the drift of `c₂`.
pub fn normal_scale(x_c: f64, y_c: f64) -> f64 {
    (1.0 / (y_c * y_c) + 4.0 * x_c * x_c * y_c * y_c).sqrt()
}

/// Limit of `z²/n` at a generic second-order point.
pub fn generic_order_prefactor(x_c: f64) -> Result<f64> {
    let y_c = critical_line(x_c)?;
    Ok(2.0 * normal_scale(x_c, y_c) / (1.0 - 5.0 * x_c * x_c))
}

/// Limit of `z⁴/n` at the tricritical point.
pub fn tricritical_order_prefactor() -> f64 {
    5.0 * 21f64.sqrt() / 6.0
}

/// `S ≈ 1 − ½ ln[4(λ² + 1)^{3/2} Δ/λ]`, the asymptotic gap-entropy relation
/// in its published form.
pub fn universal_entropy(gap: f64, lambda: f64) -> f64 {
    1.0 - 0.5 * (4.0 * (lambda * lambda + 1.0).powf(1.5) * gap / lambda).ln()
}

/// `S ≈ 1 − ½ ln[4(λ² + 1)^{3/2} Δ/λ²]`: the relation obtained by eliminating
/// `det Ω` between `Δ ≈ det Ω/√(1 + λ²)` and
/// `S ≈ 1 − ½ ln[4(λ² + 1) det Ω/λ²]`. It differs from
/// [`universal_entropy`] by `½ ln λ` and is the one the Gaussian ground
/// state actually obeys away from `λ = 1`.
pub fn universal_entropy_from_determinant(gap: f64, lambda: f64) -> f64 {
    1.0 - 0.5 * (4.0 * (lambda * lambda + 1.0).powf(1.5) * gap / (lambda * lambda)).ln()
}

/// `n` values spaced evenly in `ln n`.
pub fn log_spaced(min: f64, max: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![min];
    }
    let (a, b) = (min.ln(), max.ln());
    let mut out: Vec<f64> = (0..count).map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp()).collect();
    out[0] = min;
    out[count - 1] = max;
    out
}

/// A ray leaving a point of the second-order line along its normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalApproach {
    pub target: BoundaryPoint,
    pub side: Side,
    /// Unit normal pointing into `side`.
    pub direction: [f64; 2],
    pub distances: Vec<f64>,
}

impl CriticalApproach {
    pub fn new(target: BoundaryPoint, side: Side, distances: Vec<f64>) -> Result<Self> {
        if target.order == TransitionOrder::FirstOrder || !(0.0..=TRICRITICAL_X).contains(&target.x_c) {
            return Err(Error::Domain(format!(
                "approach target must lie on the second-order line or at the tricritical point, got {target:?}"
            )));
        }
        if distances.is_empty() || distances.iter().any(|&n| !(n >= MIN_DISTANCE && n.is_finite())) {
            return Err(Error::Domain(format!("distances must be finite and at least {MIN_DISTANCE:e}")));
        }
        let up = critical_normal(target.x_c);
        let direction = match side {
            Side::Superradiant => up,
            Side::Normal => [-up[0], -up[1]],
        };
        Ok(Self { target, side, direction, distances })
    }

    /// Approach toward the line point at `x_c`.
    pub fn second_order(x_c: f64, side: Side, distances: Vec<f64>) -> Result<Self> {
        let target = BoundaryPoint { x_c, y_c: critical_line(x_c)?, order: TransitionOrder::SecondOrder, z_jump: 0.0 };
        Self::new(target, side, distances)
    }

    /// Approach toward the tricritical point along the one-sided normal of
    /// the second-order line there.
    pub fn tricritical(side: Side, distances: Vec<f64>) -> Result<Self> {
        let target = BoundaryPoint {
            x_c: TRICRITICAL_X,
            y_c: TRICRITICAL_Y,
            order: TransitionOrder::Tricritical,
            z_jump: 0.0,
        };
        Self::new(target, side, distances)
    }

    pub fn is_tricritical(&self) -> bool {
        self.target.order == TransitionOrder::Tricritical
    }

    /// `(x, y)` at distance `n` from the target.
    pub fn point(&self, n: f64) -> (f64, f64) {
        (self.target.x_c + n * self.direction[0], self.target.y_c + n * self.direction[1])
    }

    pub fn params(&self, n: f64, lambda: f64) -> Result<ModelParams> {
        let (x, y) = self.point(n);
        ModelParams::new(x, y, lambda)
    }

    /// Check that every sample lies in the declared phase.
    pub fn validate(&self) -> Result<()> {
        for &n in &self.distances {
            let phase = meanfield::classify_phase(&self.params(n, 1.0)?)?;
            if phase != self.side.phase() {
                return Err(Error::Domain(format!(
                    "approach sample at n = {n:e} is {} but the approach is declared {:?}",
                    phase.as_str(),
                    self.side
                )));
            }
        }
        Ok(())
    }

    fn window(&self) -> (f64, f64) {
        let lo = self.distances.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.distances.iter().copied().fold(0.0, f64::max);
        (lo, hi)
    }
}

/// Power-law fit on log-log data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub exponent: f64,
    /// Leading-order prefactor, read off at the smallest distance.
    pub amplitude: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
}

/// Ordinary least squares of `ln v` on `ln n`: `(slope, intercept, R²)`.
pub fn log_log_fit(ns: &[f64], values: &[f64]) -> Result<(f64, f64, f64)> {
    if ns.len() != values.len() || ns.len() < 2 {
        return Err(Error::Domain("a log-log fit needs at least two paired samples".into()));
    }
    if ns.iter().chain(values).any(|&v| !(v > 0.0)) {
        return Err(Error::Domain("log-log fit requires positive data".into()));
    }
    let lx: Vec<f64> = ns.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / m, ly.iter().sum::<f64>() / m);
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = ly.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok((slope, my - slope * mx, r_squared))
}

/// Closest point of the second-order line to `(x, y)` and the distance to it.
///
/// Solves the stationarity condition `(x_c − x) + (y_c − y) y_c′ = 0` by
/// bisection over `x_c ∈ [0, 1/√5]`, falling back to an endpoint when the
/// condition has no interior root.
pub fn perpendicular_foot(x: f64, y: f64) -> Result<(BoundaryPoint, f64)> {
    if !(x >= 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::Domain(format!("({x}, {y}) is not a valid point with x >= 0")));
    }
    let yc = |t: f64| 1.0 / ((1.0 - t) * (1.0 + t));
    let stationarity = |t: f64| {
        let s = (1.0 - t) * (1.0 + t);
        (t - x) + (yc(t) - y) * 2.0 * t / (s * s)
    };
    let (lo_val, hi_val) = (stationarity(0.0), stationarity(TRICRITICAL_X));
    let x_c = if lo_val >= 0.0 {
        0.0
    } else if hi_val <= 0.0 {
        TRICRITICAL_X
    } else {
        let (mut lo, mut hi) = (0.0, TRICRITICAL_X);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if stationarity(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let (y_c, order) = if x_c == TRICRITICAL_X {
        (TRICRITICAL_Y, TransitionOrder::Tricritical)
    } else {
        (yc(x_c), TransitionOrder::SecondOrder)
    };
    let n = (x - x_c).hypot(y - y_c);
    if n > 0.2 {
        return Err(Error::Domain(format!("({x}, {y}) is {n} away from the critical line; limit is 0.2")));
    }
    Ok((BoundaryPoint { x_c, y_c, order, z_jump: 0.0 }, n))
}

/// Samples `(n, z)` along a superradiant approach.
pub fn order_parameter_samples(app: &CriticalApproach) -> Result<Vec<(f64, f64)>> {
    if app.side != Side::Superradiant {
        return Err(Error::Domain("order-parameter scaling needs a superradiant-side approach".into()));
    }
    app.distances
        .iter()
        .map(|&n| {
            let s = meanfield::minimize(&app.params(n, 1.0)?)?;
            if s.phase == Phase::Normal {
                return Err(Error::Domain(format!("approach sample at n = {n:e} is in the normal phase")));
            }
            Ok((n, s.z))
        })
        .collect()
}

/// Fit `z ∝ n^α`. The amplitude is `z²/n` for a generic target and `z⁴/n`
/// at the tricritical point, evaluated at the smallest `n`.
pub fn order_parameter_scaling(app: &CriticalApproach) -> Result<ScalingFit> {
    let samples = order_parameter_samples(app)?;
    let (ns, zs): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
    let (exponent, _, r_squared) = log_log_fit(&ns, &zs)?;
    let power = if app.is_tricritical() { 4 } else { 2 };
    let &(n0, z0) = samples.iter().min_by(|a, b| a.0.total_cmp(&b.0)).expect("non-empty approach");
    Ok(ScalingFit { exponent, amplitude: z0.powi(power) / n0, r_squared, window: app.window() })
}

/// Expected `z^p/n` limit for the approach's target.
pub fn order_parameter_prefactor(app: &CriticalApproach) -> Result<f64> {
    if app.is_tricritical() {
        Ok(tricritical_order_prefactor())
    } else {
        generic_order_prefactor(app.target.x_c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeterminantFit {
    pub fit: ScalingFit,
    /// Amplitude divided by `√(y_c⁻² + 4x_c²y_c²)`.
    pub beta: f64,
    /// `(n, det(Ω²/ω₀²)/λ²)` along the approach.
    pub samples: Vec<(f64, f64)>,
}

/// Scaling of `det(Ω²/ω₀²)/λ²` with `n`, evaluated at the mean-field
/// minimizer of each sample point.
pub fn determinant_scaling(app: &CriticalApproach, lambda: f64) -> Result<DeterminantFit> {
    let samples = app
        .distances
        .iter()
        .map(|&n| {
            let p = app.params(n, lambda)?;
            let z = meanfield::minimize(&p)?.z;
            let m = build_omega_squared(&p, z);
            spectrum(&m)?;
            Ok((n, m.det_over_lambda_sq))
        })
        .collect::<Result<Vec<_>>>()?;
    let (ns, ds): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
    let (exponent, _, r_squared) = log_log_fit(&ns, &ds)?;
    let &(n0, d0) = samples.iter().min_by(|a, b| a.0.total_cmp(&b.0)).expect("non-empty approach");
    let amplitude = d0 / n0;
    let beta = amplitude / normal_scale(app.target.x_c, app.target.y_c);
    Ok(DeterminantFit { fit: ScalingFit { exponent, amplitude, r_squared, window: app.window() }, beta, samples })
}

/// Fit `Δ ∝ n^κ` along an approach.
pub fn gap_scaling(app: &CriticalApproach, lambda: f64) -> Result<ScalingFit> {
    let mut ns = Vec::with_capacity(app.distances.len());
    let mut gaps = Vec::with_capacity(app.distances.len());
    for &n in &app.distances {
        let p = app.params(n, lambda)?;
        let r = fluctuations::analyze(&p, meanfield::minimize(&p)?.z)?;
        ns.push(n);
        gaps.push(r.gap);
    }
    let (exponent, intercept, r_squared) = log_log_fit(&ns, &gaps)?;
    Ok(ScalingFit { exponent, amplitude: intercept.exp(), r_squared, window: app.window() })
}

/// Comparison of the entropy with the universal gap-entropy relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub gap: f64,
    pub entropy: f64,
    /// `None` when the gap is below [`RELATION_GAP_FLOOR`].
    pub predicted: Option<f64>,
    /// `S` minus [`universal_entropy`].
    pub residual: Option<f64>,
    /// `S` minus [`universal_entropy_from_determinant`].
    pub residual_from_determinant: Option<f64>,
    pub divergent: bool,
}

/// Residual `S − (1 − ½ ln[4(λ² + 1)^{3/2} Δ/λ])` at `(x, y, λ)`.
pub fn gap_entropy_relation(x: f64, y: f64, lambda: f64) -> Result<RelationCheck> {
    let p = ModelParams::new(x, y, lambda)?;
    let r = fluctuations::analyze(&p, meanfield::minimize(&p)?.z)?;
    if r.gap < RELATION_GAP_FLOOR {
        return Ok(RelationCheck {
            gap: r.gap,
            entropy: r.entropy,
            predicted: None,
            residual: None,
            residual_from_determinant: None,
            divergent: true,
        });
    }
    let predicted = universal_entropy(r.gap, lambda);
    Ok(RelationCheck {
        gap: r.gap,
        entropy: r.entropy,
        predicted: Some(predicted),
        residual: Some(r.entropy - predicted),
        residual_from_determinant: Some(r.entropy - universal_entropy_from_determinant(r.gap, lambda)),
        divergent: r.divergent,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub argmax: f64,
    /// `(λ, S)` in the order of the supplied grid.
    pub profile: Vec<(f64, f64)>,
}

/// Entropy as a function of `λ` at the fixed point a distance `n` from
/// `target` on the given side.
pub fn entropy_resonance(target: &BoundaryPoint, side: Side, n: f64, lambdas: &[f64]) -> Result<Resonance> {
    if lambdas.is_empty() {
        return Err(Error::Domain("the lambda grid is empty".into()));
    }
    let app = CriticalApproach::new(*target, side, vec![n])?;
    let (x, y) = app.point(n);
    // The mean-field minimizer does not depend on λ.
    let z = meanfield::minimize(&ModelParams::new(x, y, 1.0)?)?.z;
    let profile = lambdas
        .iter()
        .map(|&lam| Ok((lam, fluctuations::analyze(&ModelParams::new(x, y, lam)?, z)?.entropy)))
        .collect::<Result<Vec<_>>>()?;
    let argmax = profile.iter().max_by(|a, b| a.1.total_cmp(&b.1)).map(|p| p.0).expect("non-empty grid");
    Ok(Resonance { argmax, profile })
}
