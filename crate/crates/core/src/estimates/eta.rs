//! Modulation integrals over the resonance variable.

use serde::Serialize;

use super::geometry::{piece_minimum, Branch, MixedPhase};
use super::quadrature::{integrate_anchored, Anchor, Tolerance};
use super::resonance::{cubic_coefficients, resonance_root};
use super::tau_integral::{bracket, DELTA};
use crate::error::{QzError, Result};
use crate::spectral::phi_eps;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EtaBound {
    pub lhs: f64,
    /// `⟨Γ⟩^{−(2B−1/4)}`.
    pub rhs: f64,
    pub ratio: f64,
}

/// `∫⟨τ + (2ξ+ε²ξ³)η + 4ε²ξη³⟩^{−2B} dη` against `⟨Γ⟩^{−(2B−1/4)}`.
pub fn eta_integral_bound(tau: f64, xi: f64, eps: f64, big_b: f64) -> Result<EtaBound> {
    if !(xi >= 1.0) {
        return Err(QzError::Hypothesis(format!("eta integral needs xi >= 1, got {xi}")));
    }
    if !(big_b > 1.0 / 6.0 && big_b < 0.5) {
        return Err(QzError::Hypothesis(format!(
            "eta integral needs B in (1/6, 1/2), got {big_b}"
        )));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(QzError::Hypothesis(format!("eps must lie in (0, 1], got {eps}")));
    }
    let (a, b) = cubic_coefficients(xi, eps);
    let root = resonance_root(tau, xi, eps);
    let r0 = tau + a * root + b * root.powi(3);
    let local = |_: usize, u: f64| {
        let d = r0 + u * (a + b * (3.0 * root * root + 3.0 * root * u + u * u));
        bracket(d).powf(-2.0 * big_b)
    };
    let anchor = Anchor {
        at: root,
        width: 1.0 / (a + 3.0 * b * root * root),
    };
    let lambda = (a / b).sqrt();
    let q = integrate_anchored(
        &local,
        &[anchor],
        &[0.0],
        f64::NEG_INFINITY,
        f64::INFINITY,
        lambda,
        Tolerance::rel(1e-10),
    );
    if !q.converged {
        return Err(QzError::Quadrature {
            tau,
            xi,
            detail: format!("eta integral, error estimate {:e}", q.error),
        });
    }
    let gamma = phi_eps(xi, eps);
    let rhs = bracket(gamma).powf(-(2.0 * big_b - 0.25));
    Ok(EtaBound {
        lhs: q.value,
        rhs,
        ratio: q.value / rhs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AroundXi {
    pub value: f64,
    /// `value · ⟨ξ⟩^{2k} · ⟨ξ⟩^{6B−δ}`.
    pub ratio: f64,
}

/// `∫_{ξ/2}^{3ξ/2} ⟨ξ₁−ξ⟩^{2l}⟨ξ₁⟩^{−2k}⟨τ ± √Φ_ε(ξ₁−ξ) + Φ_ε(ξ₁)⟩^{−2B} dξ₁`.
///
/// `sign` selects `±`. The zeros of the phase and its minimum on each side
/// of `ξ₁ = ξ` are located before integrating.
pub fn around_xi_integral(tau: f64, xi: f64, eps: f64, k: f64, l: f64, big_b: f64, sign: f64) -> Result<AroundXi> {
    if !(k < 0.0) {
        return Err(QzError::Hypothesis(format!("around-xi integral needs k < 0, got {k}")));
    }
    if !(l < 0.0) {
        return Err(QzError::Hypothesis(format!("around-xi integral needs l < 0, got {l}")));
    }
    if !(big_b > 0.0 && big_b < 0.5) {
        return Err(QzError::Hypothesis(format!(
            "around-xi integral needs B in (0, 1/2), got {big_b}"
        )));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(QzError::Hypothesis(format!("eps must lie in (0, 1], got {eps}")));
    }
    if !(xi > 32.0 / (eps * eps)) {
        return Err(QzError::Hypothesis(format!(
            "around-xi integral needs xi > 32/eps^2 = {}, got {xi}",
            32.0 / (eps * eps)
        )));
    }
    let branch = if sign >= 0.0 {
        Branch::DiffPlus
    } else {
        Branch::DiffMinus
    };
    let phase = MixedPhase::new(tau, xi, eps, branch);
    let (lo, hi) = (0.5 * xi, 1.5 * xi);
    let pieces = [
        piece_minimum(&phase, lo, xi, None)?,
        piece_minimum(&phase, xi, hi, None)?,
    ];
    let anchors = phase.anchors(&pieces);
    let base: Vec<f64> = anchors.iter().map(|an| phase.f(an.at)).collect();
    let local = |i: usize, u: f64| {
        let at = anchors[i].at;
        let d = base[i] + phase.delta(at, u);
        bracket((at - xi) + u).powf(2.0 * l) * bracket(at + u).powf(-2.0 * k) * bracket(d).powf(-2.0 * big_b)
    };
    let q = integrate_anchored(&local, &anchors, &[xi], lo, hi, xi, Tolerance::rel(1e-10));
    if !q.converged {
        return Err(QzError::Quadrature {
            tau,
            xi,
            detail: format!("around-xi integral, error estimate {:e}", q.error),
        });
    }
    let bx = bracket(xi);
    Ok(AroundXi {
        value: q.value,
        ratio: q.value * bx.powf(2.0 * k) * bx.powf(6.0 * big_b - DELTA),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::fit::loglog_slope;
    use crate::estimates::quadrature::{adaptive, integrate_tail};

    #[test]
    fn eta_ratio_is_finite_at_a_sample_point() {
        let r = eta_integral_bound(0.0, 2.0, 1.0, 0.45).unwrap();
        assert!(r.ratio.is_finite() && r.ratio > 0.0);
    }

    #[test]
    fn eta_hypotheses() {
        assert!(eta_integral_bound(0.0, 0.5, 1.0, 0.45).is_err());
        assert!(eta_integral_bound(0.0, 2.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn eta_matches_rescaled_closed_form_for_large_xi() {
        // With τ = 0 and ξ large, lhs ≈ λ·(aλ)^{−2B}·∫|s+s³|^{−2B} ds − 2/((1−2B)a), λ = √(a/b).
        // The last term is what the 1 inside ⟨·⟩ removes near the root.
        let (xi, eps, bb) = (1e4, 1.0, 0.45);
        let r = eta_integral_bound(0.0, xi, eps, bb).unwrap();
        let (a, b) = cubic_coefficients(xi, eps);
        let lambda = (a / b).sqrt();
        // ∫|s+s³|^{−0.9} = 2(∫_0^1 + ∫_1^∞); s = t^10 removes the singularity at 0.
        let near = adaptive(
            &|t: f64| 10.0 * (1.0 + t.powi(20)).powf(-0.9),
            0.0,
            1.0,
            Tolerance::rel(1e-12),
        );
        let far = integrate_tail(&|s: f64| (s + s.powi(3)).powf(-0.9), 1.0, 1.0, Tolerance::rel(1e-12));
        let total = 2.0 * (near.value + far.value);
        let approx = lambda * (a * lambda).powf(-2.0 * bb) * total - 2.0 / ((1.0 - 2.0 * bb) * a);
        assert!((r.lhs / approx - 1.0).abs() < 1e-4, "{} vs {}", r.lhs, approx);
    }

    #[test]
    fn around_xi_ratio_is_flat() {
        let xs = [64.0, 128.0, 256.0, 512.0];
        let ratios: Vec<f64> = xs
            .iter()
            .map(|&xi| {
                around_xi_integral(-phi_eps(xi, 1.0), xi, 1.0, -0.3, -0.3, 0.45, 1.0)
                    .unwrap()
                    .ratio
            })
            .collect();
        let slope = loglog_slope(&xs, &ratios).unwrap();
        assert!(slope <= 0.05, "slope {slope}, ratios {ratios:?}");
    }

    #[test]
    fn around_xi_hypotheses() {
        assert!(around_xi_integral(0.0, 64.0, 1.0, -0.3, 0.0, 0.45, 1.0).is_err());
        assert!(around_xi_integral(0.0, 10.0, 1.0, -0.3, -0.3, 0.45, 1.0).is_err());
        assert!(around_xi_integral(0.0, 64.0, 1.0, 0.3, -0.3, 0.45, 1.0).is_err());
    }
}
