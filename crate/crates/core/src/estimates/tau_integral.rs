//! The modulation integral `∫⟨x − s₁⟩^{−p}⟨x − s₂⟩^{−q} dx` and its interpolation table.

use super::quadrature::{integrate_points, integrate_tail, peak_breaks, Tolerance};
use rayon::prelude::*;

use crate::error::{QzError, Result};

/// The fixed `δ` standing in for "a small positive number" in exponents.
pub const DELTA: f64 = 0.01;

/// `⟨x⟩ = 1 + |x|`.
#[inline]
pub fn bracket(x: f64) -> f64 {
    1.0 + x.abs()
}

/// `[λ]₊`: `λ` when positive, `δ` at zero, `0` when negative.
pub fn plus_part(lambda: f64) -> f64 {
    if lambda > 0.0 {
        lambda
    } else if lambda == 0.0 {
        DELTA
    } else {
        0.0
    }
}

/// Decay exponent `α = 2a₋ − [1 − 2a₊]₊` of the modulation integral.
pub fn decay_exponent(a_minus: f64, a_plus: f64) -> f64 {
    2.0 * a_minus - plus_part(1.0 - 2.0 * a_plus)
}

fn decades(d: f64) -> usize {
    d.abs().max(1.0).log10().ceil() as usize + 1
}

/// `∫_a^b g` with geometric breakpoints `±10^j` around the origin.
fn span<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64, decades: usize, tol: Tolerance) -> f64 {
    let mut pts: Vec<f64> = peak_breaks(0.0, 1.0, decades)
        .into_iter()
        .filter(|&x| x > a && x < b)
        .collect();
    pts.extend([a, b]);
    let q = integrate_points(g, &pts, tol);
    if q.converged {
        q.value
    } else {
        f64::NAN
    }
}

/// `∫_a^∞ g`, the tail closed from `10^decades` on.
fn above<G: Fn(f64) -> f64>(g: &G, a: f64, decades: usize, tol: Tolerance) -> f64 {
    let hi = a.max(10f64.powi(decades as i32));
    let tail = integrate_tail(g, hi, 1.0, tol);
    if !tail.converged {
        return f64::NAN;
    }
    span(g, a, hi, decades, tol) + tail.value
}

/// `∫⟨x⟩^{−p}⟨x − d⟩^{−q} dx` by quadrature. Requires `p + q > 1`.
///
/// The line is cut at `d/2` and each half is integrated in coordinates
/// centred on its own peak, so `x − d` is never formed near `x ≈ d`.
pub fn pair_integral(p: f64, q: f64, d: f64, tol: Tolerance) -> f64 {
    let d = d.abs();
    let n = decades(d);
    let near_zero = |x: f64| bracket(x).powf(-p) * bracket(d - x).powf(-q);
    let near_d = |u: f64| bracket(d + u).powf(-p) * bracket(u).powf(-q);
    above(&|t: f64| near_zero(-t), -0.5 * d, n, tol) + above(&near_d, -0.5 * d, n, tol)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauIntegral {
    pub value: f64,
    pub alpha: f64,
    /// `value · ⟨s₁ − s₂⟩^α`; bounded in `s₁ − s₂` when the decay estimate holds.
    pub ratio: f64,
}

pub fn weighted_tau_integral(a_minus: f64, a_plus: f64, s1: f64, s2: f64) -> Result<TauIntegral> {
    if !(0.0 <= a_minus && a_minus <= a_plus) {
        return Err(QzError::Hypothesis(format!(
            "need 0 <= a_minus <= a_plus, got ({a_minus}, {a_plus})"
        )));
    }
    if a_minus + a_plus <= 0.5 {
        return Err(QzError::Hypothesis(format!(
            "need a_minus + a_plus > 1/2, got {}",
            a_minus + a_plus
        )));
    }
    let d = s1 - s2;
    let value = pair_integral(2.0 * a_minus, 2.0 * a_plus, d, Tolerance::rel(1e-11));
    if !value.is_finite() {
        return Err(QzError::Quadrature {
            tau: s1,
            xi: s2,
            detail: "modulation integral did not converge".into(),
        });
    }
    let alpha = decay_exponent(a_minus, a_plus);
    Ok(TauIntegral {
        value,
        alpha,
        ratio: value * bracket(d).powf(alpha),
    })
}

/// `I_{p,q}(|d|)` tabulated on a log grid and interpolated by cubic Hermite in `ln`–`ln`.
///
/// Node slopes come from a five-point difference of the tabulated logarithms. Below the first node the value is held
/// constant (the integral is smooth and even in `d`); above the last node it
/// is extended with the end slope.
#[derive(Clone, Debug)]
pub struct PairTable {
    p: f64,
    q: f64,
    ln_d0: f64,
    h: f64,
    ln_i: Vec<f64>,
    slope: Vec<f64>,
}

impl PairTable {
    pub const D_MIN: f64 = 1e-6;
    pub const D_MAX: f64 = 1e40;
    pub const PER_DECADE: usize = 32;

    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p >= 0.0 && q >= 0.0 && p + q > 1.0) {
            return Err(QzError::Hypothesis(format!(
                "modulation integral needs p, q >= 0 and p + q > 1, got ({p}, {q})"
            )));
        }
        let decades = (Self::D_MAX / Self::D_MIN).log10().round() as usize;
        let nodes = decades * Self::PER_DECADE + 1;
        let ln_d0 = Self::D_MIN.ln();
        let h = std::f64::consts::LN_10 / Self::PER_DECADE as f64;
        let tol = Tolerance::rel(1e-12);
        // Two ghost nodes at each end feed the five-point slope stencil.
        let values: Vec<f64> = (0..nodes + 4)
            .into_par_iter()
            .map(|j| pair_integral(p, q, (ln_d0 + h * (j as f64 - 2.0)).exp(), tol).ln())
            .collect();
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(QzError::Quadrature {
                tau: (ln_d0 + h * (j as f64 - 2.0)).exp(),
                xi: f64::NAN,
                detail: format!("building I_({p},{q}) table"),
            });
        }
        let slope = (2..nodes + 2)
            .map(|j| (values[j - 2] - 8.0 * values[j - 1] + 8.0 * values[j + 1] - values[j + 2]) / (12.0 * h))
            .collect();
        Ok(PairTable {
            p,
            q,
            ln_d0,
            h,
            ln_i: values[2..nodes + 2].to_vec(),
            slope,
        })
    }

    pub fn exponents(&self) -> (f64, f64) {
        (self.p, self.q)
    }

    pub fn eval(&self, d: f64) -> f64 {
        let last = self.ln_i.len() - 1;
        let ad = d.abs();
        if ad <= Self::D_MIN {
            return self.ln_i[0].exp();
        }
        let s = (ad.ln() - self.ln_d0) / self.h;
        if s >= last as f64 {
            let dx = ad.ln() - (self.ln_d0 + self.h * last as f64);
            return (self.ln_i[last] + self.slope[last] * dx).exp();
        }
        let j = (s.floor() as usize).min(last - 1);
        let t = s - j as f64;
        let (y0, y1) = (self.ln_i[j], self.ln_i[j + 1]);
        let (m0, m1) = (self.slope[j] * self.h, self.slope[j + 1] * self.h);
        let t2 = t * t;
        let t3 = t2 * t;
        let y =
            (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
        y.exp()
    }
}
