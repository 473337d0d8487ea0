//! Resonance function of the Schrödinger–Schrödinger interaction.
//!
//! With `ξ₁ = ξ/2 + η`, `τ − Φ_ε(ξ₁−ξ) + Φ_ε(ξ₁)` reduces to an odd cubic in `η`.
//! The cubic form avoids the cancellation of the direct difference when `|η| ≪ ξ`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::spectral::phi_eps;

/// Coefficients `(a, b)` of `τ + a·η + b·η³`.
pub fn cubic_coefficients(xi: f64, eps: f64) -> (f64, f64) {
    let e2 = eps * eps;
    (2.0 * xi + e2 * xi.powi(3), 4.0 * e2 * xi)
}

pub fn resonance_cubic(tau: f64, xi: f64, eta: f64, eps: f64) -> f64 {
    let (a, b) = cubic_coefficients(xi, eps);
    tau + a * eta + b * eta.powi(3)
}

/// `τ − Φ_ε(η − ξ/2) + Φ_ε(η + ξ/2)` evaluated term by term.
pub fn resonance_direct(tau: f64, xi: f64, eta: f64, eps: f64) -> f64 {
    tau - phi_eps(eta - 0.5 * xi, eps) + phi_eps(eta + 0.5 * xi, eps)
}

/// Size of the terms entering the direct form. Relative errors are measured
/// against this rather than the result, which may be a near-total cancellation.
pub fn resonance_scale(tau: f64, xi: f64, eta: f64, eps: f64) -> f64 {
    tau.abs() + phi_eps(eta - 0.5 * xi, eps) + phi_eps(eta + 0.5 * xi, eps)
}

/// Unique real root of the cubic in `η` (the cubic is strictly increasing for `ξ > 0`).
pub fn resonance_root(tau: f64, xi: f64, eps: f64) -> f64 {
    let (a, b) = cubic_coefficients(xi, eps);
    if b == 0.0 {
        return -tau / a;
    }
    // Cardano with one real root: p = a/b, q = τ/b.
    let p = a / b;
    let q = tau / b;
    let disc = (0.5 * q).powi(2) + (p / 3.0).powi(3);
    let s = disc.sqrt();
    let u = (-0.5 * q + s).cbrt();
    let v = (-0.5 * q - s).cbrt();
    let mut eta = u + v;
    // Two Newton polishes; Cardano loses digits when |q| ≫ p^{3/2}.
    for _ in 0..2 {
        let f = tau + a * eta + b * eta.powi(3);
        let d = a + 3.0 * b * eta * eta;
        eta -= f / d;
    }
    eta
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityCheck {
    pub samples: usize,
    pub max_rel_error: f64,
}

/// Compares the cubic and direct forms on random `(τ, ξ, η, ε)`.
///
/// `τ ∈ ±[0, 10⁴]`, `ξ ∈ [10⁻³, 10³]` and `η ∈ ±[10⁻³, 10³]` log-uniform, `ε ∈ (0, 1]`.
pub fn check_resonance_identity(samples: usize, seed: u64) -> IdentityCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let tau = rng.gen_range(-1e4..1e4);
        let xi = 10f64.powf(rng.gen_range(-3.0..3.0));
        let eta = 10f64.powf(rng.gen_range(-3.0..3.0)) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let eps = rng.gen_range(1e-3..=1.0);
        let c = resonance_cubic(tau, xi, eta, eps);
        let d = resonance_direct(tau, xi, eta, eps);
        let rel = (c - d).abs() / resonance_scale(tau, xi, eta, eps);
        worst = worst.max(rel);
    }
    IdentityCheck {
        samples,
        max_rel_error: worst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_point() {
        assert_eq!(resonance_cubic(1.0, 1.0, 1.0, 1.0), 8.0);
        assert_eq!(resonance_direct(1.0, 1.0, 1.0, 1.0), 8.0);
        assert_eq!(resonance_cubic(3.5, 7.0, 0.0, 0.4), 3.5);
    }

    #[test]
    fn random_identity() {
        let r = check_resonance_identity(10_000, 7);
        assert!(r.max_rel_error < 1e-9, "{r:?}");
    }

    #[test]
    fn root_is_a_root() {
        for &(tau, xi, eps) in &[(0.0, 2.0, 1.0), (-1e4, 3.0, 0.5), (7e7, 1e3, 1.0), (-5.0, 1.0, 0.0)] {
            let eta = resonance_root(tau, xi, eps);
            let scale = resonance_scale(tau, xi, eta, eps);
            assert!(resonance_cubic(tau, xi, eta, eps).abs() <= 1e-12 * scale);
        }
    }
}
