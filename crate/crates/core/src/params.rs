use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the dimensionless parameter space.
///
/// `x = ε/ω₀` measures the staggered field, `y = g²/(ωω₀)` the light-matter
/// coupling, and `lambda = ω/ω₀` the cavity frequency, all relative to the
/// composite atomic scale `ω₀ = √(ε² + δ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub x: f64,
    pub y: f64,
    pub lambda: f64,
}

/// Raw Hamiltonian parameters: cavity frequency, atomic splitting, coupling
/// and staggered field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawParams {
    pub omega: f64,
    pub delta: f64,
    pub g: f64,
    pub epsilon: f64,
}

impl ModelParams {
    pub fn new(x: f64, y: f64, lambda: f64) -> Result<Self> {
        if !(x.is_finite() && (0.0..1.0).contains(&x)) {
            return Err(Error::Domain(format!("x = {x} must satisfy 0 <= x < 1")));
        }
        if !(y.is_finite() && y >= 0.0) {
            return Err(Error::Domain(format!("y = {y} must be finite and non-negative")));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Domain(format!("lambda = {lambda} must be finite and positive")));
        }
        Ok(Self { x, y, lambda })
    }

    /// Reduce raw parameters to the dimensionless triple. `δ = 0` is the
    /// singular `x = 1` limit and is rejected.
    pub fn from_raw(raw: RawParams) -> Result<Self> {
        let RawParams { omega, delta, g, epsilon } = raw;
        if !(omega > 0.0 && delta > 0.0 && g >= 0.0 && epsilon >= 0.0) {
            return Err(Error::Domain(format!(
                "raw parameters need omega > 0, delta > 0, g >= 0, epsilon >= 0 (got {raw:?})"
            )));
        }
        let omega0 = epsilon.hypot(delta);
        Self::new(epsilon / omega0, g * g / (omega * omega0), omega / omega0)
    }

    /// Raw parameters at the given energy scale `ω₀`.
    pub fn to_raw(&self, omega0: f64) -> RawParams {
        RawParams {
            omega: self.lambda * omega0,
            delta: omega0 * self.delta(),
            g: omega0 * (self.y * self.lambda).sqrt(),
            epsilon: self.x * omega0,
        }
    }

    /// `δ/ω₀ = √(1 − x²)`.
    pub fn delta(&self) -> f64 {
        ((1.0 - self.x) * (1.0 + self.x)).sqrt()
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        Self::new(self.x, self.y, lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_out_of_domain() {
        assert!(ModelParams::new(1.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(-0.1, 1.0, 1.0).is_err());
        assert!(ModelParams::new(0.2, -1.0, 1.0).is_err());
        assert!(ModelParams::new(0.2, 1.0, 0.0).is_err());
        assert!(ModelParams::new(0.2, f64::NAN, 1.0).is_err());
        let raw = RawParams { omega: 1.0, delta: 0.0, g: 1.0, epsilon: 1.0 };
        assert!(ModelParams::from_raw(raw).is_err());
    }

    proptest! {
        #[test]
        fn raw_round_trip(omega in 0.01f64..100.0, delta in 0.1f64..10.0,
                          g in 0.0f64..10.0, epsilon in 0.0f64..10.0) {
            let raw = RawParams { omega, delta, g, epsilon };
            let p = ModelParams::from_raw(raw).unwrap();
            let omega0 = epsilon.hypot(delta);
            let back = p.to_raw(omega0);
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300);
            prop_assert!(close(back.omega, omega));
            prop_assert!(close(back.delta, delta));
            prop_assert!(close(back.g, g));
            prop_assert!(close(back.epsilon, epsilon));
        }
    }
}
