//! Stationary-point geometry of the mixed wave phases
//! `f(ξ₁) = τ ± √Φ_ε(ξ₁ ∓ ξ) + Φ_ε(ξ₁)`.

use serde::{Deserialize, Serialize};

use super::quadrature::Anchor;
use super::resonance::resonance_root;
use crate::error::{QzError, Result};
use crate::spectral::{phi_eps, sqrt_phi_eps};

/// Which of the four sign combinations `τ ± √Φ_ε(ξ₁ ∓ ξ) + Φ_ε(ξ₁)` is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `+√Φ_ε(ξ₁ − ξ)`
    DiffPlus,
    /// `−√Φ_ε(ξ₁ + ξ)`
    SumMinus,
    /// `+√Φ_ε(ξ₁ + ξ)`
    SumPlus,
    /// `−√Φ_ε(ξ₁ − ξ)`
    DiffMinus,
}

impl Branch {
    pub const ALL: [Branch; 4] = [Branch::DiffPlus, Branch::SumMinus, Branch::SumPlus, Branch::DiffMinus];

    fn wave_sign(self) -> f64 {
        match self {
            Branch::DiffPlus | Branch::SumPlus => 1.0,
            Branch::SumMinus | Branch::DiffMinus => -1.0,
        }
    }

    fn shift_sign(self) -> f64 {
        match self {
            Branch::DiffPlus | Branch::DiffMinus => -1.0,
            Branch::SumMinus | Branch::SumPlus => 1.0,
        }
    }
}

/// `(√Φ_ε)′(u)` for `u > 0`.
fn sqrt_phi_d1(u: f64, e2: f64) -> f64 {
    (1.0 + 2.0 * e2 * u * u) / (1.0 + e2 * u * u).sqrt()
}

/// `(√Φ_ε)″(u)` for `u > 0`.
fn sqrt_phi_d2(u: f64, e2: f64) -> f64 {
    e2 * u * (3.0 + 2.0 * e2 * u * u) / (1.0 + e2 * u * u).powf(1.5)
}

/// The phase `f(ξ₁) = τ + s·√Φ_ε(ξ₁ + σξ) + Φ_ε(ξ₁)` with its kink at `ξ₁ = −σξ`.
#[derive(Clone, Copy, Debug)]
pub struct MixedPhase {
    pub tau: f64,
    pub xi: f64,
    pub eps: f64,
    wave: f64,
    shift: f64,
}

impl MixedPhase {
    pub fn new(tau: f64, xi: f64, eps: f64, branch: Branch) -> Self {
        MixedPhase {
            tau,
            xi,
            eps,
            wave: branch.wave_sign(),
            shift: branch.shift_sign(),
        }
    }

    pub fn kink(&self) -> f64 {
        -self.shift * self.xi
    }

    pub fn f(&self, x1: f64) -> f64 {
        self.tau + self.wave * sqrt_phi_eps(x1 + self.shift * self.xi, self.eps) + phi_eps(x1, self.eps)
    }

    /// `f′`, taking the one-sided value on `side` (`±1`) exactly at the kink.
    pub fn fp(&self, x1: f64, side: f64) -> f64 {
        let e2 = self.eps * self.eps;
        let u = x1 + self.shift * self.xi;
        let sgn = if u > 0.0 {
            1.0
        } else if u < 0.0 {
            -1.0
        } else {
            side
        };
        2.0 * x1 + 4.0 * e2 * x1.powi(3) + self.wave * sgn * sqrt_phi_d1(u.abs(), e2)
    }

    /// `f(x + u) − f(x)` without cancellation when `|u| ≪ |x|`.
    pub fn delta(&self, x: f64, u: f64) -> f64 {
        let e2 = self.eps * self.eps;
        let y = x + self.shift * self.xi;
        let wave = if y * (y + u) > 0.0 {
            phi_diff(y, u, e2) / (sqrt_phi_eps(y + u, self.eps) + sqrt_phi_eps(y, self.eps))
        } else {
            sqrt_phi_eps(y + u, self.eps) - sqrt_phi_eps(y, self.eps)
        };
        phi_diff(x, u, e2) + self.wave * wave
    }

    /// Expansion points for integrating a function of this phase: every zero
    /// on scale `1/|f′|` and every piece minimum on scale `1/√f″`.
    pub fn anchors(&self, pieces: &[PieceMin]) -> Vec<Anchor> {
        let mut out = Vec::new();
        for p in pieces {
            for &r in &p.roots {
                let slope = self.fp(r, 1.0).abs().max(self.fp(r, -1.0).abs());
                out.push(Anchor {
                    at: r,
                    width: 1.0 / slope.max(1e-300),
                });
            }
            out.push(Anchor {
                at: p.argmin,
                width: 1.0 / self.fpp(p.argmin).max(1.0).sqrt(),
            });
        }
        out
    }

    /// `f″` away from the kink.
    pub fn fpp(&self, x1: f64) -> f64 {
        let e2 = self.eps * self.eps;
        let u = (x1 + self.shift * self.xi).abs();
        2.0 + 12.0 * e2 * x1 * x1 + self.wave * sqrt_phi_d2(u, e2)
    }
}

/// `Φ_ε(x + u) − Φ_ε(x)`.
fn phi_diff(x: f64, u: f64, e2: f64) -> f64 {
    let x2 = x + u;
    u * (x + x2) * (1.0 + e2 * (x * x + x2 * x2))
}

fn bisect<F: Fn(f64) -> f64>(g: &F, mut lo: f64, mut hi: f64) -> f64 {
    let glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (g(mid) < 0.0) == (glo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Minimiser and zeros of a phase on one convex piece `[lo, hi]` (ends may be infinite).
#[derive(Clone, Debug, PartialEq)]
pub struct PieceMin {
    pub argmin: f64,
    pub min: f64,
    pub roots: Vec<f64>,
}

fn expand<F: Fn(f64) -> f64>(g: &F, from: f64, dir: f64, scale: f64) -> Result<f64> {
    let mut step = scale.max(1.0);
    for _ in 0..400 {
        let x = from + dir * step;
        if g(x) * dir > 0.0 {
            return Ok(x);
        }
        step *= 2.0;
    }
    Err(QzError::Bracket(format!(
        "no sign change from {from} in direction {dir}"
    )))
}

/// Minimum and zeros of `phase` on a piece where it is convex.
/// `bracket` optionally supplies a sign-changing interval for `f′`.
pub fn piece_minimum(phase: &MixedPhase, lo: f64, hi: f64, bracket: Option<(f64, f64)>) -> Result<PieceMin> {
    let scale = 1.0 + phase.xi;
    let fp = |x: f64| phase.fp(x, if x <= phase.kink() { -1.0 } else { 1.0 });
    let fp_lo = if lo.is_finite() {
        phase.fp(lo, 1.0)
    } else {
        f64::NEG_INFINITY
    };
    let fp_hi = if hi.is_finite() {
        phase.fp(hi, -1.0)
    } else {
        f64::INFINITY
    };
    let argmin = if fp_lo >= 0.0 {
        lo
    } else if fp_hi <= 0.0 {
        hi
    } else if let Some((a, b)) = bracket {
        if !(fp(a) < 0.0 && fp(b) > 0.0) {
            return Err(QzError::Bracket(format!(
                "f' does not change sign on [{a}, {b}] (tau = {}, xi = {}, eps = {})",
                phase.tau, phase.xi, phase.eps
            )));
        }
        bisect(&fp, a, b)
    } else {
        let a = if lo.is_finite() {
            lo
        } else {
            expand(&fp, hi.min(0.0), -1.0, scale)?
        };
        let b = if hi.is_finite() {
            hi
        } else {
            expand(&fp, lo.max(0.0), 1.0, scale)?
        };
        bisect(&fp, a, b)
    };
    let f = |x: f64| phase.f(x);
    let min = f(argmin);
    let mut roots = Vec::new();
    if min < 0.0 {
        let left_end = if lo.is_finite() { Some(lo) } else { None };
        match left_end {
            Some(a) if f(a) < 0.0 => {}
            Some(a) => roots.push(bisect(&f, a, argmin)),
            None => {
                let a = expand(&|x| -f(x), argmin, -1.0, scale)?;
                roots.push(bisect(&f, a, argmin));
            }
        }
        match hi.is_finite() {
            true if f(hi) < 0.0 => {}
            true => roots.push(bisect(&f, argmin, hi)),
            false => {
                let b = expand(&f, argmin, 1.0, scale)?;
                roots.push(bisect(&f, argmin, b));
            }
        }
    }
    Ok(PieceMin { argmin, min, roots })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModulationCase {
    /// `τ + m` dominates the well depth; `Λ = τ + m`.
    Far,
    /// The phase is non-positive at `ξ₁ = 0`; `Λ = τ + m` and one zero `A₂`.
    Below,
    /// In between; `⟨Λ⟩ = ⟨1⟩`.
    Near,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceGeometry {
    pub tau: f64,
    pub xi: f64,
    pub eps: f64,
    pub branch: Branch,
    /// `Γ = ξ² + ε²ξ⁴`.
    pub gamma: f64,
    /// `A = ε^{−2/3}|τ/ξ|^{1/3}`.
    pub a_scale: f64,
    pub a_m: f64,
    /// `min f − τ` over `ξ₁ ≥ 0`.
    pub m: f64,
    pub case: ModulationCase,
    pub lambda: f64,
    /// Zero of the Schrödinger resonance cubic, for `τ < 0`.
    pub r: Option<f64>,
    /// Largest zero of `f` on `ξ₁ ≥ 0`, in the cases that have one.
    pub a2: Option<f64>,
    pub roots: Vec<f64>,
    pub min_second_derivative: f64,
    pub convex: bool,
}

/// Bracket for the stationary point of the `+√Φ_ε(ξ₁ − ξ)` phase, valid for `ξ > 32ε⁻²`.
pub fn a_m_bracket(xi: f64, eps: f64) -> (f64, f64) {
    let r2 = std::f64::consts::SQRT_2;
    let lo = ((eps / r2) / (1.0 + eps / r2) * xi).min((xi / (4.0 * r2 * eps)).cbrt());
    let hi = ((1.5 * eps) / (1.0 + 1.5 * eps) * xi).min((3.0 * xi / (4.0 * eps)).cbrt());
    (lo, hi)
}

/// Nodes at which convexity is certified: uniform plus geometric around the kink.
pub fn certificate_nodes(phase: &MixedPhase, extent: f64) -> Vec<f64> {
    let kink = phase.kink();
    let mut nodes: Vec<f64> = (0..=4000).map(|j| extent * j as f64 / 4000.0).collect();
    let mut w = 1e-9 * (1.0 + phase.xi);
    while w < extent {
        for x in [kink - w, kink + w] {
            if x >= 0.0 {
                nodes.push(x);
            }
        }
        w *= 2.0;
    }
    nodes.retain(|&x| (x - kink).abs() > 1e-12 * (1.0 + phase.xi));
    nodes
}

pub fn stationary_points(tau: f64, xi: f64, eps: f64, branch: Branch) -> Result<ResonanceGeometry> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(QzError::Hypothesis(format!("stationary points need xi > 0, got {xi}")));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(QzError::Hypothesis(format!("eps must lie in (0, 1], got {eps}")));
    }
    let phase = MixedPhase::new(tau, xi, eps, branch);
    let kink = phase.kink();
    let pieces: Vec<PieceMin> = if kink > 0.0 {
        let bracket = (branch == Branch::DiffPlus && xi > 32.0 / (eps * eps)).then(|| a_m_bracket(xi, eps));
        vec![
            piece_minimum(&phase, 0.0, kink, bracket)?,
            piece_minimum(&phase, kink, f64::INFINITY, None)?,
        ]
    } else {
        vec![piece_minimum(&phase, 0.0, f64::INFINITY, None)?]
    };
    let best = pieces
        .iter()
        .min_by(|a, b| a.min.total_cmp(&b.min))
        .expect("at least one piece");
    let a_m = best.argmin;
    let m = best.min - tau;
    let mut roots: Vec<f64> = pieces.iter().flat_map(|p| p.roots.iter().copied()).collect();
    roots.sort_by(|a, b| a.total_cmp(b));
    roots.dedup();

    let base = phase.f(0.0) - tau;
    let depth = base - m;
    let (case, lambda) = if tau + m >= depth {
        (ModulationCase::Far, tau + m)
    } else if tau + base <= 0.0 {
        (ModulationCase::Below, tau + m)
    } else {
        (ModulationCase::Near, 1.0)
    };
    let a2 = match case {
        ModulationCase::Far => None,
        _ => roots.last().copied(),
    };

    let extent = 4.0 * xi.max(a_m).max(roots.last().copied().unwrap_or(0.0)) + 10.0;
    let min_fpp = certificate_nodes(&phase, extent)
        .into_iter()
        .map(|x| phase.fpp(x))
        .fold(f64::INFINITY, f64::min);

    Ok(ResonanceGeometry {
        tau,
        xi,
        eps,
        branch,
        gamma: phi_eps(xi, eps),
        a_scale: eps.powf(-2.0 / 3.0) * (tau / xi).abs().cbrt(),
        a_m,
        m,
        case,
        lambda,
        r: (tau < 0.0).then(|| resonance_root(tau, xi, eps)),
        a2,
        roots,
        min_second_derivative: min_fpp,
        convex: min_fpp > 0.0,
    })
}

/// Samples `(ξ₁, f(ξ₁))` on `[0, extent]`.
pub fn phase_profile(tau: f64, xi: f64, eps: f64, branch: Branch, extent: f64, n: usize) -> Vec<(f64, f64)> {
    let phase = MixedPhase::new(tau, xi, eps, branch);
    (0..n)
        .map(|j| {
            let x = extent * j as f64 / (n.max(2) - 1) as f64;
            (x, phase.f(x))
        })
        .collect()
}

/// Three values of `τ` realising the three modulation cases of the
/// `+√Φ_ε(ξ₁ − ξ)` branch at `ξ`.
pub fn case_taus(xi: f64, eps: f64) -> Result<[(ModulationCase, f64); 3]> {
    let g = stationary_points(0.0, xi, eps, Branch::DiffPlus)?;
    let s = sqrt_phi_eps(xi, eps);
    Ok([
        (ModulationCase::Far, s),
        (ModulationCase::Below, -2.0 * s),
        (ModulationCase::Near, -g.m),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn numeric_derivatives(phase: &MixedPhase, x: f64) -> (f64, f64) {
        let h = 1e-4 * (1.0 + x.abs());
        let d1 = (phase.f(x + h) - phase.f(x - h)) / (2.0 * h);
        let d2 = (phase.f(x + h) - 2.0 * phase.f(x) + phase.f(x - h)) / (h * h);
        (d1, d2)
    }

    #[test]
    fn derivatives_match_differences() {
        for branch in Branch::ALL {
            let p = MixedPhase::new(0.3, 5.0, 0.7, branch);
            for &x in &[0.4, 2.0, 4.2, 6.5, 11.0] {
                let (d1, d2) = numeric_derivatives(&p, x);
                assert!((p.fp(x, 1.0) - d1).abs() < 1e-5 * (1.0 + d1.abs()), "{branch:?} {x}");
                assert!((p.fpp(x) - d2).abs() < 1e-3 * (1.0 + d2.abs()), "{branch:?} {x}");
            }
        }
    }

    #[test]
    fn delta_matches_difference() {
        for branch in Branch::ALL {
            let p = MixedPhase::new(-7.0, 3.0, 0.6, branch);
            for &(x, u) in &[(1.0, 0.25), (2.9, 0.2), (3.1, -0.2), (-4.0, 1.5), (0.0, -2.0)] {
                let direct = p.f(x + u) - p.f(x);
                assert!(
                    (p.delta(x, u) - direct).abs() < 1e-12 * (1.0 + direct.abs()),
                    "{branch:?} {x} {u}"
                );
            }
        }
    }

    #[test]
    fn stationary_point_scaling_at_threshold() {
        let g = stationary_points(0.0, 32.0, 1.0, Branch::DiffPlus).unwrap();
        let c = g.a_m / 32f64.cbrt();
        let ratio = g.m / sqrt_phi_eps(32.0, 1.0);
        assert!(c > 0.5 && c < 1.0, "c = {c}");
        assert!((0.75..=1.25).contains(&ratio), "m ratio = {ratio}");
        assert!(g.convex);
        let p = MixedPhase::new(0.0, 32.0, 1.0, Branch::DiffPlus);
        assert!(p.fp(g.a_m, 1.0).abs() < 1e-9 * (1.0 + 32.0));
    }

    #[test]
    fn constant_tends_to_cube_root_of_half() {
        let xi = 1e6;
        let g = stationary_points(0.0, xi, 1.0, Branch::DiffPlus).unwrap();
        assert!((g.a_m / xi.cbrt() - 0.5f64.cbrt()).abs() < 1e-3);
    }

    #[test]
    fn sum_plus_minimum_sits_at_origin() {
        let xi = 40.0;
        let g = stationary_points(-3.0, xi, 1.0, Branch::SumPlus).unwrap();
        assert_eq!(g.a_m, 0.0);
        assert!((g.m - sqrt_phi_eps(xi, 1.0)).abs() < 1e-12 * g.m);
        let d = stationary_points(0.0, xi, 1.0, Branch::DiffMinus).unwrap();
        assert_eq!(d.a_m, 0.0);
        assert!(d.convex);
    }

    #[test]
    fn sum_minus_depth() {
        for &xi in &[32.0, 64.0, 128.0, 256.0] {
            let g = stationary_points(0.0, xi, 1.0, Branch::SumMinus).unwrap();
            let r = -g.m / sqrt_phi_eps(xi, 1.0);
            assert!((1.0..=1.25).contains(&r), "xi = {xi}: {r}");
            assert!(g.convex);
        }
    }

    #[test]
    fn three_cases() {
        let xi = 32.0;
        for (case, tau) in case_taus(xi, 1.0).unwrap() {
            let g = stationary_points(tau, xi, 1.0, Branch::DiffPlus).unwrap();
            assert_eq!(g.case, case, "tau = {tau}");
            for &r in &g.roots {
                let p = MixedPhase::new(tau, xi, 1.0, Branch::DiffPlus);
                assert!(p.f(r).abs() < 1e-9 * (1.0 + tau.abs()));
            }
            if case == ModulationCase::Below {
                assert_eq!(g.roots.len(), 1);
                assert!(g.a2.unwrap() > g.a_m);
            }
        }
        let g = stationary_points(-1.0, xi, 1.0, Branch::DiffPlus).unwrap();
        assert!(g.r.unwrap() > 0.0);
    }

    #[test]
    fn bracket_failure_is_reported() {
        let p = MixedPhase::new(0.0, 64.0, 1.0, Branch::DiffPlus);
        assert!(piece_minimum(&p, 0.0, 64.0, Some((0.0, 0.1))).is_err());
    }

    #[test]
    fn rejects_nonpositive_xi() {
        assert!(stationary_points(0.0, 0.0, 1.0, Branch::DiffPlus).is_err());
    }
}
