//! Quantum fluctuations above the mean-field ground state.
//!
//! After displacing the photon by its mean-field value and mapping both
//! atomic groups to bosons, the Hamiltonian is a three-dimensional harmonic
//! oscillator `½ Σ Pᵢ² + ½ Xᵀ Ω² X`. All quantities here are in units of
//! `ω₀`, and modes are ordered (photon, even group, odd group).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{spectral_map, sym_eigen3, Mat3};
use crate::meanfield::{normal_determinant, reduced_slope};
use crate::params::ModelParams;

/// Eigenvalues of `Ω²` down to `−CLAMP` count as zero modes.
pub const EIGENVALUE_CLAMP: f64 = 1e-10;
/// Gaps below this mark a point as critical for the entropy.
pub const GAP_TOLERANCE: f64 = 1e-12;

/// Dressed atomic frequencies and quantization-axis rotation angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DressedAngles {
    pub omega2: f64,
    pub omega3: f64,
    pub theta2: f64,
    pub theta3: f64,
    delta: f64,
    field2: f64,
    field3: f64,
}

impl DressedAngles {
    pub fn cos2(&self) -> f64 {
        self.delta / self.omega2
    }
    pub fn cos3(&self) -> f64 {
        self.delta / self.omega3
    }
    pub fn sin2(&self) -> f64 {
        self.field2 / self.omega2
    }
    pub fn sin3(&self) -> f64 {
        self.field3 / self.omega3
    }
}

/// Each group sees a field `(δ, zω₀ ± ε)`; its magnitude and tilt set the
/// dressed frequency and angle.
pub fn dressed_frequencies(x: f64, z: f64) -> DressedAngles {
    let delta = ((1.0 - x) * (1.0 + x)).sqrt();
    let (field2, field3) = (z + x, z - x);
    DressedAngles {
        omega2: field2.hypot(delta),
        omega3: field3.hypot(delta),
        theta2: field2.atan2(delta),
        theta3: field3.atan2(delta),
        delta,
        field2,
        field3,
    }
}

/// The matrix `Ω²/ω₀²` with its determinant kept in factored form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluctuationMatrix {
    pub matrix: Mat3,
    pub lambda: f64,
    /// `det(Ω²/ω₀²)/λ²`, evaluated from the arrow structure so that it stays
    /// accurate when it approaches zero at the critical line.
    pub det_over_lambda_sq: f64,
}

impl FluctuationMatrix {
    pub fn det(&self) -> f64 {
        self.lambda * self.lambda * self.det_over_lambda_sq
    }

    /// Off-diagonal couplings `(λ₁₂, λ₁₃)`.
    pub fn couplings(&self) -> (f64, f64) {
        (self.matrix[0][1], self.matrix[0][2])
    }
}

/// Build `Ω²` at the expansion point `z`.
///
/// Entries: `ω₁² = λ²`, `ω₂²`, `ω₃²` on the diagonal and photon-atom
/// couplings `λ₁ⱼ = √(λ ωⱼ yλ/2) cos θⱼ`. The two atomic groups do not
/// couple directly.
pub fn build_omega_squared(p: &ModelParams, z: f64) -> FluctuationMatrix {
    let d = dressed_frequencies(p.x, z);
    let lam = p.lambda;
    let l12 = (lam * d.omega2 * p.y * lam / 2.0).sqrt() * d.cos2();
    let l13 = (lam * d.omega3 * p.y * lam / 2.0).sqrt() * d.cos3();
    let matrix = [
        [lam * lam, l12, l13],
        [l12, d.omega2 * d.omega2, 0.0],
        [l13, 0.0, d.omega3 * d.omega3],
    ];
    // λ₁ⱼ²/λ² = y(1 − x²)/(2ωⱼ), and the radicand product is (1+z²)² − 4x²z².
    let s = (1.0 - p.x) * (1.0 + p.x);
    let det_over_lambda_sq = if z == 0.0 {
        normal_determinant(p.x, p.y)
    } else if p.y == 0.0 {
        (1.0 + z * z).powi(2) - 4.0 * p.x * p.x * z * z
    } else {
        ordered_determinant(p.x, p.y, z, s, d.omega2, d.omega3, reduced_slope(z, p))
    };
    FluctuationMatrix { matrix, lambda: lam, det_over_lambda_sq }
}

/// `det Ω²/λ²` away from the origin, `q₊q₋ − (y s/2)(ω₃²/ω₂ + ω₂²/ω₃)`,
/// regrouped as an `O(z²)` part plus a multiple of the reduced slope so
/// that it stays accurate for small ordered amplitudes.
fn ordered_determinant(x: f64, y: f64, z: f64, s: f64, a: f64, b: f64, slope: f64) -> f64 {
    let (x2, z2) = (x * x, z * z);
    let u = 1.0 + z2;
    let prod = a * b;
    let sum = a + b;
    let delta = 4.0 * x2 * z2 / (u + prod);
    let numer = 2.0 * u * u * z2 - u * delta * (6.0 + 5.0 * z2 - 5.0 * x2)
        + delta * delta * (5.0 + 4.0 * z2 - 3.0 * x2)
        - delta * delta * delta;
    let base = numer / (u + prod - 2.0 * x2);
    let weight = (0.5 * sum * sum - 2.0 * x2) / (prod * sum);
    let cubes = (a * a * a + b * b * b) / prod;
    base + 0.5 * s * cubes * y * slope / weight
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    /// Ascending eigenvalues of `Ω²`.
    pub eigenvalues_sq: [f64; 3],
    /// Matching orthonormal eigenvectors as columns.
    pub eigenvectors: Mat3,
    /// `Δ/ω₀`, the square root of the smallest eigenvalue (clamped at zero).
    pub gap: f64,
}

/// Excitation spectrum of `Ω²`.
///
/// The smallest eigenvalue is recomputed as `det/(e₂e₃)` from the factored
/// determinant; near criticality this is far more accurate than the value
/// from the rotations, whose absolute error scales with the largest entry.
pub fn spectrum(m: &FluctuationMatrix) -> Result<Spectrum> {
    let eig = sym_eigen3(&m.matrix);
    let mut values = eig.values;
    if values[1] > 0.0 {
        let refined = m.det() / (values[1] * values[2]);
        if refined.is_finite() && (refined - values[0]).abs() <= 1e-8 * values[2].max(1.0) {
            values[0] = refined;
        }
    }
    if values[0] < -EIGENVALUE_CLAMP {
        return Err(Error::Instability { eigenvalue: values[0] });
    }
    Ok(Spectrum { eigenvalues_sq: values, eigenvectors: eig.vectors, gap: values[0].max(0.0).sqrt() })
}

/// Principal square root `Ω/ω₀`, with eigenvalues in `[−clamp, 0]` set to zero.
pub fn matrix_sqrt(spec: &Spectrum) -> Result<Mat3> {
    if spec.eigenvalues_sq[0] < -EIGENVALUE_CLAMP {
        return Err(Error::Instability { eigenvalue: spec.eigenvalues_sq[0] });
    }
    let eig = crate::linalg::SymEigen3 { values: spec.eigenvalues_sq, vectors: spec.eigenvectors };
    Ok(spectral_map(&eig, |v| v.max(0.0).sqrt()))
}

/// Photon-mode reduced state of the Gaussian ground state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entanglement {
    pub a_plus: f64,
    pub a_minus: f64,
    /// `arccosh(A₊/A₋)`; infinite for a product state.
    pub gamma: f64,
    /// Von Neumann entropy in nats.
    pub entropy: f64,
    /// Set when the gap is below [`GAP_TOLERANCE`]; `entropy` is then
    /// evaluated with the gap clamped to that tolerance.
    pub divergent: bool,
}

/// Entropy of a thermal-like Gaussian mode, `γ/(e^γ − 1) − ln(1 − e^{−γ})`.
pub fn entropy_from_gamma(gamma: f64) -> f64 {
    if gamma.is_infinite() {
        return 0.0;
    }
    gamma / gamma.exp_m1() - (-(-gamma).exp_m1()).ln()
}

/// Light-atom entanglement entropy of the Gaussian ground state
/// `Ψ ∝ exp(−XᵀΩX/2)`.
///
/// Integrating out the atomic coordinates leaves
/// `ρ(X₁, X₁′) ∝ exp(−A₊(X₁² + X₁′²)/2 + A₋X₁X₁′)` with
/// `A± = ½(Ω₁₁ ± det Ω / det B)`, `B` the atomic block of `Ω`. `A₋` is
/// evaluated as `½ bᵀB⁻¹b` and `A₊ − A₋` as `det Ω/det B`, which avoids
/// cancellation in both the weak-coupling and the critical limits.
pub fn entanglement_entropy(spec: &Spectrum, omega: &Mat3) -> Result<Entanglement> {
    let divergent = spec.gap < GAP_TOLERANCE;
    let roots = spec.eigenvalues_sq.map(|v| v.max(0.0).sqrt());
    let det_omega = roots[0].max(if divergent { GAP_TOLERANCE } else { 0.0 }) * roots[1] * roots[2];

    let det_b = omega[1][1] * omega[2][2] - omega[1][2] * omega[2][1];
    if !(det_b > 0.0) {
        return Err(Error::Internal(format!("atomic block of Ω is not positive definite (det = {det_b:e})")));
    }
    let (b1, b2) = (omega[0][1], omega[0][2]);
    let a_minus = 0.5 * (omega[2][2] * b1 * b1 - 2.0 * omega[1][2] * b1 * b2 + omega[1][1] * b2 * b2) / det_b;
    let split = det_omega / det_b;
    let a_plus = a_minus + split;

    if a_minus == 0.0 && b1 == 0.0 && b2 == 0.0 {
        return Ok(Entanglement { a_plus, a_minus, gamma: f64::INFINITY, entropy: 0.0, divergent });
    }
    if !(a_minus > 0.0) {
        return Err(Error::Internal(format!("non-positive A₋ = {a_minus:e} for a coupled photon mode")));
    }
    // arccosh(1 + t) = ln(1 + t + √(t(2 + t))), with t = (A₊ − A₋)/A₋.
    let t = split / a_minus;
    let gamma = (t + (t * (2.0 + t)).sqrt()).ln_1p();
    Ok(Entanglement { a_plus, a_minus, gamma, entropy: entropy_from_gamma(gamma), divergent })
}

/// Everything the fluctuation analysis produces at one expansion point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationResult {
    pub omega_sq: FluctuationMatrix,
    pub eigenvalues_sq: [f64; 3],
    pub gap: f64,
    pub omega_sqrt: Mat3,
    pub a_plus: f64,
    pub a_minus: f64,
    pub gamma: f64,
    pub entropy: f64,
    pub divergent: bool,
}

impl FluctuationResult {
    /// `det(Ω/ω₀)`.
    pub fn det_omega(&self) -> f64 {
        self.omega_sq.det().max(0.0).sqrt()
    }
}

/// Full fluctuation analysis at `z`, normally the mean-field minimizer.
pub fn analyze(p: &ModelParams, z: f64) -> Result<FluctuationResult> {
    let omega_sq = build_omega_squared(p, z);
    let spec = spectrum(&omega_sq)?;
    let omega = matrix_sqrt(&spec)?;
    let ent = entanglement_entropy(&spec, &omega)?;
    Ok(FluctuationResult {
        omega_sq,
        eigenvalues_sq: spec.eigenvalues_sq,
        gap: spec.gap,
        omega_sqrt: omega,
        a_plus: ent.a_plus,
        a_minus: ent.a_minus,
        gamma: ent.gamma,
        entropy: ent.entropy,
        divergent: ent.divergent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{det3, mat_mul};
    use crate::meanfield::{self, critical_line, minimize};
    use proptest::prelude::*;

    fn params(x: f64, y: f64, lambda: f64) -> ModelParams {
        ModelParams::new(x, y, lambda).unwrap()
    }

    /// Veltkamp split and Dekker product: `a·b = hi + lo` without fma.
    fn two_product(a: f64, b: f64) -> (f64, f64) {
        let split = |v: f64| {
            let c = 134_217_729.0 * v;
            let hi = c - (c - v);
            (hi, v - hi)
        };
        let p = a * b;
        let ((ah, al), (bh, bl)) = (split(a), split(b));
        (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
    }

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    proptest! {
        #[test]
        fn normal_determinant_is_exact_on_the_line(x in 0.0..0.447f64, bump in -4i64..=4) {
            let y = f64::from_bits((critical_line(x).unwrap().to_bits() as i64 + bump) as u64);
            // 1 - y + y x^2 in double-double.
            let (x2, x2e) = two_product(x, x);
            let (p, pe) = two_product(y, x2);
            let (s, se) = two_sum(1.0 - y, p);
            let oracle = s + (se + pe + y * x2e);
            let got = normal_determinant(x, y);
            prop_assert!((got - oracle).abs() <= 1e-31 + 1e-15 * oracle.abs(), "{got:e} vs {oracle:e}");
        }
    }

    #[test]
    fn dressed_examples() {
        let d = dressed_frequencies(0.0, 0.0);
        assert_eq!((d.omega2, d.omega3, d.theta2, d.theta3), (1.0, 1.0, 0.0, 0.0));

        let d = dressed_frequencies(0.3, 0.0);
        assert!((d.omega2 - 1.0).abs() < 1e-15 && (d.omega3 - 1.0).abs() < 1e-15);
        let want = (0.3 / 0.91f64.sqrt()).atan();
        assert!((d.theta2 - want).abs() < 1e-15 && (d.theta3 + want).abs() < 1e-15);

        let d = dressed_frequencies(0.0, 3f64.sqrt());
        assert!((d.omega2 - 2.0).abs() < 1e-15 && (d.omega3 - 2.0).abs() < 1e-15);
        assert!((d.cos2() - 0.5).abs() < 1e-15 && (d.theta2.cos() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn omega_squared_examples() {
        let m = build_omega_squared(&params(0.0, 2.0, 1.0), 3f64.sqrt());
        let (l12, l13) = m.couplings();
        assert!((l12 - 0.5f64.sqrt()).abs() < 1e-15 && (l13 - 0.5f64.sqrt()).abs() < 1e-15);

        let m = build_omega_squared(&params(0.3, 0.8, 1.0), 0.0);
        assert!((det3(&m.matrix) - (1.0 - 0.8 * 0.91)).abs() < 1e-14);
        assert!((m.det_over_lambda_sq - (1.0 - 0.8 * 0.91)).abs() < 1e-15);

        let m = build_omega_squared(&params(0.4, 0.0, 0.7), 0.0);
        let spec = spectrum(&m).unwrap();
        assert_eq!(m.couplings(), (0.0, 0.0));
        let mut want = [0.49, 1.0, 1.0];
        want.sort_by(f64::total_cmp);
        for (g, w) in spec.eigenvalues_sq.iter().zip(want) {
            assert!((g - w).abs() < 1e-15);
        }
        assert!((spec.gap - 0.7).abs() < 1e-15);
    }

    #[test]
    fn factored_determinant_matches_direct() {
        for &(x, y, lam, z) in &[(0.2, 1.7, 0.3, 0.8), (0.6, 2.5, 4.0, 1.1), (0.0, 2.0, 1.0, 1.7)] {
            let m = build_omega_squared(&params(x, y, lam), z);
            assert!((m.det() - det3(&m.matrix)).abs() < 1e-12 * det3(&m.matrix).abs().max(1.0));
        }
    }

    proptest! {
        #[test]
        fn ordered_determinant_matches_direct_form(
            x in 0.0..0.95f64, y in 0.1..5.0f64, z in 0.01..4.0f64,
        ) {
            let p = params(x, y, 1.0);
            let d = dressed_frequencies(x, z);
            let (a, b) = (d.omega2, d.omega3);
            let s = 1.0 - x * x;
            let tail = 0.5 * y * s * (b * b / a + a * a / b);
            let direct = (a * b).powi(2) - tail;
            let got = build_omega_squared(&p, z).det_over_lambda_sq;
            let scale = (a * b).powi(2) + tail;
            prop_assert!((got - direct).abs() <= 1e-13 * scale, "{got:e} vs {direct:e}");
        }
    }

    #[test]
    fn ordered_determinant_near_the_line() {
        // Just inside the ordered phase det/λ² ≈ z²(1 − 5x²) at the minimum.
        for &(x, rel) in &[(0.1, 1e-8), (0.3, 1e-10), (0.4, 1e-12)] {
            let y = critical_line(x).unwrap() * (1.0 + rel);
            let sol = minimize(&params(x, y, 1.0)).unwrap();
            let z = sol.z;
            assert!(z > 0.0 && z < 1e-3, "z = {z:e}");
            let det = build_omega_squared(&params(x, y, 1.0), z).det_over_lambda_sq;
            let ratio = det / (z * z * (1.0 - 5.0 * x * x));
            assert!((ratio - 1.0).abs() < 1e-4, "x = {x}: ratio {ratio}");
        }
    }

    #[test]
    fn critical_spectrum() {
        let yc = critical_line(0.3).unwrap();
        let spec = spectrum(&build_omega_squared(&params(0.3, yc, 1.0), 0.0)).unwrap();
        let roots = spec.eigenvalues_sq.map(|v| v.max(0.0).sqrt());
        assert!(roots[0] < 1e-8);
        assert!((roots[1] - 1.0).abs() < 1e-12);
        assert!((roots[2] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn normal_phase_dicke_gap() {
        // Photon and symmetric atomic mode form a 2×2 block with coupling² yλ².
        for &(y, lam) in &[(0.3, 1.0), (0.8, 0.4), (0.95, 3.0)] {
            let spec = spectrum(&build_omega_squared(&params(0.0, y, lam), 0.0)).unwrap();
            let l2 = lam * lam;
            let want = 0.5 * (l2 + 1.0) - 0.5 * ((l2 - 1.0).powi(2) + 4.0 * y * l2).sqrt();
            assert!((spec.gap * spec.gap - want).abs() < 1e-13);
        }
    }

    #[test]
    fn metastable_point_is_unstable() {
        // Above the critical line the origin is a maximum of f.
        let m = build_omega_squared(&params(0.1, 2.0, 1.0), 0.0);
        assert!(matches!(spectrum(&m), Err(Error::Instability { .. })));
    }

    #[test]
    fn matrix_sqrt_examples() {
        let spec = spectrum(&build_omega_squared(&params(0.3, 0.0, 2.5), 0.0)).unwrap();
        let om = matrix_sqrt(&spec).unwrap();
        let want = [[2.5, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((om[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
        let m = build_omega_squared(&params(0.3, 0.8, 1.0), 0.0);
        let om = matrix_sqrt(&spectrum(&m).unwrap()).unwrap();
        let sq = mat_mul(&om, &om);
        for i in 0..3 {
            for j in 0..3 {
                assert!((sq[i][j] - m.matrix[i][j]).abs() < 1e-10);
                assert_eq!(om[i][j], om[i][j]);
            }
        }
        let yc = critical_line(0.3).unwrap();
        let r = analyze(&params(0.3, yc, 1.0), 0.0).unwrap();
        assert!(det3(&r.omega_sqrt).abs() < 1e-8);
    }

    #[test]
    fn decoupled_state_has_no_entanglement() {
        let r = analyze(&params(0.3, 0.0, 1.3), 0.0).unwrap();
        assert_eq!(r.entropy, 0.0);
        assert!(r.gamma.is_infinite());
        assert!(!r.divergent);
    }

    #[test]
    fn small_gamma_limit() {
        for &g in &[1e-2, 1e-3, 1e-5] {
            let s = entropy_from_gamma(g);
            assert!((s - (1.0 - g.ln())).abs() < g);
        }
    }

    #[test]
    fn near_critical_entropy_matches_determinant_form() {
        let yc = critical_line(0.3).unwrap();
        let r = analyze(&params(0.3, yc * (1.0 - 1e-8), 1.0), 0.0).unwrap();
        let lam: f64 = 1.0;
        let approx = 1.0 - 0.5 * (4.0 * (lam * lam + 1.0) * r.det_omega() / (lam * lam)).ln();
        assert!((r.entropy - approx).abs() < 0.01, "{} vs {approx}", r.entropy);
    }

    #[test]
    fn divergent_point_is_flagged_with_finite_entropy() {
        let r = analyze(&params(0.0, 1.0, 1.0), 0.0).unwrap();
        assert!(r.divergent);
        assert!(r.entropy.is_finite() && r.entropy > 5.0);
    }

    #[test]
    fn entropy_decreases_with_gamma() {
        let mut prev = f64::INFINITY;
        for k in 1..400 {
            let s = entropy_from_gamma(k as f64 * 0.05);
            assert!(s < prev);
            prev = s;
        }
    }

    #[test]
    fn stationarity_identity() {
        // f′(z) = 0 ⟺ z/y = (sin θ₂ + sin θ₃)/2.
        let mut checked = 0;
        for i in 0..10 {
            for j in 0..10 {
                let p = params(0.09 * i as f64, 1.3 + 0.25 * j as f64, 1.0);
                let s = minimize(&p).unwrap();
                if s.z == 0.0 {
                    continue;
                }
                let d = dressed_frequencies(p.x, s.z);
                assert!((s.z / p.y - 0.5 * (d.sin2() + d.sin3())).abs() < 1e-9);
                checked += 1;
            }
        }
        assert!(checked > 50);
    }

    #[test]
    fn first_order_jump_in_gap_and_entropy() {
        let b = meanfield::first_order_boundary(0.6).unwrap();
        let eval = |y: f64| {
            let p = params(0.6, y, 1.0);
            analyze(&p, minimize(&p).unwrap().z).unwrap()
        };
        let (lo, hi) = (eval(b.y_c - 1e-7), eval(b.y_c + 1e-7));
        assert!((lo.gap - hi.gap).abs() > 0.01);
        assert!((lo.entropy - hi.entropy).abs() > 0.01);
        assert!(lo.entropy.is_finite() && hi.entropy.is_finite() && lo.gap > 0.0 && hi.gap > 0.0);
    }

    /// Independent route: the photon's reduced covariance gives the
    /// symplectic eigenvalue `ν = √(⟨X₁²⟩⟨P₁²⟩)` with `⟨XXᵀ⟩ = Ω⁻¹/2`,
    /// `⟨PPᵀ⟩ = Ω/2`, and `S = (ν+½)ln(ν+½) − (ν−½)ln(ν−½)`.
    fn covariance_entropy(omega: &Mat3) -> f64 {
        let inv11 = (omega[1][1] * omega[2][2] - omega[1][2] * omega[2][1]) / det3(omega);
        let nu = (0.25 * inv11 * omega[0][0]).sqrt();
        let (a, b) = (nu + 0.5, nu - 0.5);
        a * a.ln() - if b > 0.0 { b * b.ln() } else { 0.0 }
    }

    #[test]
    fn entropy_matches_covariance_oracle() {
        for &(x, y, lam) in &[(0.0, 0.5, 1.0), (0.3, 0.9, 0.1), (0.3, 2.0, 10.0), (0.6, 3.0, 2.0), (0.2, 1.02, 1.0)] {
            let p = params(x, y, lam);
            let r = analyze(&p, minimize(&p).unwrap().z).unwrap();
            let oracle = covariance_entropy(&r.omega_sqrt);
            assert!((r.entropy - oracle).abs() < 1e-9 * oracle.max(1.0), "{p:?}: {} vs {oracle}", r.entropy);
        }
    }

    proptest! {
        #[test]
        fn structure_and_stability(x in 0.0f64..0.95, y in 0.0f64..3.0, lam in 0.05f64..20.0) {
            let p = params(x, y, lam);
            let z = minimize(&p).unwrap().z;
            let r = analyze(&p, z).unwrap();
            let m = r.omega_sq.matrix;
            prop_assert_eq!(m[1][2], 0.0);
            prop_assert_eq!(m[2][1], 0.0);
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert_eq!(m[i][j], m[j][i]);
                    prop_assert!((r.omega_sqrt[i][j] - r.omega_sqrt[j][i]).abs() < 1e-12);
                }
            }
            prop_assert!(r.eigenvalues_sq[0] >= -EIGENVALUE_CLAMP);
            prop_assert!(r.entropy >= 0.0);
            prop_assert!(r.a_plus >= r.a_minus);
            if !r.divergent && y > 0.0 {
                prop_assert!(r.a_minus > 0.0);
                prop_assert!((r.a_plus + r.a_minus - r.omega_sqrt[0][0]).abs() < 1e-9 * r.omega_sqrt[0][0]);
            }
        }

        #[test]
        fn energy_matches_dressed_frequencies(z in 0.0f64..3.0, x in 0.0f64..0.99, y in 0.05f64..4.0) {
            let p = params(x, y, 1.0);
            let d = dressed_frequencies(x, z);
            let f = meanfield::energy(z, &p).unwrap();
            prop_assert!((f - 0.5 * (z * z / y - d.omega2 - d.omega3)).abs() < 1e-15 * (z * z / y + d.omega2 + d.omega3));
            prop_assert!((d.sin2().powi(2) + d.cos2().powi(2) - 1.0).abs() < 1e-15);
            prop_assert!((d.theta2.tan() - (z + x) / (1.0 - x * x).sqrt()).abs() < 1e-12 * (1.0 + d.theta2.tan().abs()));
        }
    }
}
