//! Suprema of the bilinear kernels `C₁`, `C₂`, `C₃` over `(τ, ξ)`.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{EstimateConfig, Kernel};
use super::fit::loglog_slope;
use super::geometry::{piece_minimum, Branch, MixedPhase};
use super::quadrature::{integrate_anchored, Anchor, Quad, Tolerance};
use super::resonance::{cubic_coefficients, resonance_root};
use super::tau_integral::{bracket, PairTable};
use crate::error::{QzError, Result};
use crate::spectral::{phi_eps, sqrt_phi_eps};

/// Log-spaced `(|τ|, ξ)` grid with both signs of `τ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub tau_min: f64,
    pub tau_max: f64,
    pub n_tau: usize,
    pub xi_min: f64,
    pub xi_max: f64,
    pub n_xi: usize,
    /// Add `0, ±√Φ, ±√Φ/2, ±3√Φ/2, ±Φ, ±2Φ` at every `ξ`, where the
    /// modulation cases change.
    pub specials: bool,
}

impl Default for ScanGrid {
    fn default() -> Self {
        ScanGrid {
            tau_min: 1.0,
            tau_max: 1e4,
            n_tau: 40,
            xi_min: 1.0,
            xi_max: 1e3,
            n_xi: 40,
            specials: true,
        }
    }
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|j| (a + (b - a) * j as f64 / (n - 1) as f64).exp())
        .collect()
}

impl ScanGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_min > 0.0 && self.tau_max >= self.tau_min && self.tau_max.is_finite()) {
            return Err(QzError::config("estimates.tau_min", "need 0 < tau_min <= tau_max"));
        }
        if !(self.xi_min > 0.0 && self.xi_max >= self.xi_min && self.xi_max.is_finite()) {
            return Err(QzError::config("estimates.xi_min", "need 0 < xi_min <= xi_max"));
        }
        if self.n_tau == 0 {
            return Err(QzError::config("estimates.n_tau", "must be positive"));
        }
        if self.n_xi == 0 {
            return Err(QzError::config("estimates.n_xi", "must be positive"));
        }
        Ok(())
    }

    pub fn xis(&self) -> Vec<f64> {
        log_space(self.xi_min, self.xi_max, self.n_xi)
    }

    pub fn taus(&self, xi: f64, eps: f64) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for t in log_space(self.tau_min, self.tau_max, self.n_tau) {
            out.push(-t);
            out.push(t);
        }
        if self.specials {
            let s = sqrt_phi_eps(xi, eps);
            let p = phi_eps(xi, eps);
            out.push(0.0);
            for v in [s, 0.5 * s, 1.5 * s, p, 2.0 * p] {
                out.push(v);
                out.push(-v);
            }
        }
        out.sort_by(|a, b| a.total_cmp(b));
        out.dedup();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSample {
    pub tau: f64,
    pub xi: f64,
    /// Square root of the inner `(τ₁, ξ₁)` integral.
    pub kernel_value: f64,
    pub prefactor: f64,
    pub product: f64,
    pub converged: bool,
}

/// Modulation tables for one kernel.
#[derive(Clone, Debug)]
pub struct KernelTables {
    which: Kernel,
    table: PairTable,
}

impl KernelTables {
    pub fn new(which: Kernel, cfg: &EstimateConfig) -> Result<Self> {
        let (p, q) = match which {
            Kernel::C1 => (2.0 * cfg.c1(), 2.0 * cfg.b1),
            Kernel::C2 => (2.0 * cfg.b1, 2.0 * cfg.b1),
            Kernel::C3 => (2.0 * cfg.c(), 2.0 * cfg.b1),
        };
        Ok(KernelTables {
            which,
            table: PairTable::new(p, q)?,
        })
    }
}

const TOL: Tolerance = Tolerance {
    abs: 1e-300,
    rel: 1e-8,
    max_intervals: 2000,
};

/// Inner integral of `C₁`/`C₂` in `η = ξ₁ − ξ/2`, where the modulation
/// difference is the odd cubic `τ + aη + bη³`. Integrated in the offset
/// from its zero so the peak of the modulation table stays resolved.
fn schrodinger_pair_integral(which: Kernel, cfg: &EstimateConfig, table: &PairTable, tau: f64, xi: f64) -> Quad {
    let (a, b) = cubic_coefficients(xi, cfg.eps);
    let k = cfg.k;
    let h = 0.5 * xi;
    let root = resonance_root(tau, xi, cfg.eps);
    let r0 = tau + a * root + b * root.powi(3);
    let local = |_: usize, u: f64| {
        let eta = root + u;
        let w = match which {
            Kernel::C1 => (bracket(eta + h) / bracket(eta - h)).powf(2.0 * k),
            _ => (bracket(eta + h) * bracket(eta - h)).powf(-2.0 * k),
        };
        let d = r0 + u * (a + b * (3.0 * root * root + 3.0 * root * u + u * u));
        w * table.eval(d)
    };
    let anchor = Anchor {
        at: root,
        width: 1.0 / (a + 3.0 * b * root * root),
    };
    let scale = if b > 0.0 { (a / b).sqrt() } else { 1.0 + xi };
    integrate_anchored(
        &local,
        &[anchor],
        &[-h, 0.0, h],
        f64::NEG_INFINITY,
        f64::INFINITY,
        scale,
        TOL,
    )
}

/// Inner integral of `C₃` for one wave sign.
fn mixed_pair_integral(cfg: &EstimateConfig, table: &PairTable, tau: f64, xi: f64, branch: Branch) -> Result<Quad> {
    let phase = MixedPhase::new(tau, xi, cfg.eps, branch);
    let pieces = [
        piece_minimum(&phase, f64::NEG_INFINITY, xi, None)?,
        piece_minimum(&phase, xi, f64::INFINITY, None)?,
    ];
    let anchors = phase.anchors(&pieces);
    let base: Vec<f64> = anchors.iter().map(|an| phase.f(an.at)).collect();
    let (k, l) = (cfg.k, cfg.l);
    let local = |i: usize, u: f64| {
        let at = anchors[i].at;
        let x1 = at + u;
        let d = base[i] + phase.delta(at, u);
        bracket((at - xi) + u).powf(2.0 * l) * bracket(x1).powf(-2.0 * k) * table.eval(d)
    };
    Ok(integrate_anchored(
        &local,
        &anchors,
        &[0.0, xi],
        f64::NEG_INFINITY,
        f64::INFINITY,
        1.0 + xi,
        TOL,
    ))
}

/// One grid point of the chosen kernel.
pub fn kernel_point(cfg: &EstimateConfig, tables: &KernelTables, tau: f64, xi: f64) -> Result<KernelSample> {
    let eps = cfg.eps;
    let s = sqrt_phi_eps(xi, eps);
    // Larger of the `+` and `−` wave weights: ⟨|τ| − √Φ⟩.
    let wave_mod = bracket(tau.abs() - s);
    let (inner, prefactor) = match tables.which {
        Kernel::C1 => (
            schrodinger_pair_integral(Kernel::C1, cfg, &tables.table, tau, xi),
            bracket(xi).powf(-cfg.l) * wave_mod.powf(-cfg.b),
        ),
        Kernel::C2 => (
            schrodinger_pair_integral(Kernel::C2, cfg, &tables.table, tau, xi),
            bracket(xi).powf(cfg.l) * wave_mod.powf(cfg.b_prime),
        ),
        Kernel::C3 => {
            let plus = mixed_pair_integral(cfg, &tables.table, tau, xi, Branch::DiffPlus)?;
            let minus = mixed_pair_integral(cfg, &tables.table, tau, xi, Branch::DiffMinus)?;
            let inner = if plus.value >= minus.value { plus } else { minus };
            let pre = bracket(tau + phi_eps(xi, eps)).powf(-cfg.b1) * bracket(xi).powf(-cfg.k);
            (
                Quad {
                    converged: plus.converged && minus.converged,
                    ..inner
                },
                pre,
            )
        }
    };
    if !inner.converged {
        log::warn!(
            "{}: inner integral not converged at tau = {tau:e}, xi = {xi:e} (value {:e}, error {:e})",
            tables.which,
            inner.value,
            inner.error
        );
    }
    let kernel_value = inner.value.sqrt();
    Ok(KernelSample {
        tau,
        xi,
        kernel_value,
        prefactor,
        product: prefactor * kernel_value,
        converged: inner.converged,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct XiSupremum {
    pub xi: f64,
    pub supremum: f64,
    pub argmax_tau: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub which: Kernel,
    pub config: EstimateConfig,
    pub grid: ScanGrid,
    #[serde(skip)]
    pub samples: Vec<KernelSample>,
    /// `sup_τ` of the product at each `ξ`, the series the slope is fitted to.
    pub per_xi: Vec<XiSupremum>,
    pub supremum: f64,
    pub argmax: (f64, f64),
    pub slope: Option<f64>,
    pub unconverged: usize,
    #[serde(skip)]
    pub wall_seconds: f64,
}

impl ScanResult {
    /// `true` when the supremum is finite and the `ξ` trend is at most `max_slope`.
    pub fn is_bounded(&self, max_slope: f64) -> bool {
        self.supremum.is_finite() && self.slope.is_some_and(|s| s <= max_slope)
    }
}

pub fn kernel_sup_scan(which: Kernel, cfg: &EstimateConfig, grid: &ScanGrid) -> Result<ScanResult> {
    cfg.check(which)?;
    grid.validate()?;
    let start = Instant::now();
    let tables = KernelTables::new(which, cfg)?;
    let xis = grid.xis();
    let points: Vec<(f64, f64)> = xis
        .iter()
        .flat_map(|&xi| grid.taus(xi, cfg.eps).into_iter().map(move |t| (t, xi)))
        .collect();
    let samples = points
        .par_iter()
        .map(|&(tau, xi)| kernel_point(cfg, &tables, tau, xi))
        .collect::<Result<Vec<_>>>()?;

    let mut per_xi: Vec<XiSupremum> = xis
        .iter()
        .map(|&xi| XiSupremum {
            xi,
            supremum: f64::NEG_INFINITY,
            argmax_tau: f64::NAN,
        })
        .collect();
    let mut supremum = f64::NEG_INFINITY;
    let mut argmax = (f64::NAN, f64::NAN);
    let mut cursor = 0;
    for s in &samples {
        while per_xi[cursor].xi != s.xi {
            cursor += 1;
        }
        let row = &mut per_xi[cursor];
        // NaN products propagate as an unbounded supremum.
        let p = if s.product.is_nan() { f64::INFINITY } else { s.product };
        if p > row.supremum {
            row.supremum = p;
            row.argmax_tau = s.tau;
        }
        if p > supremum {
            supremum = p;
            argmax = (s.tau, s.xi);
        }
    }
    let xs: Vec<f64> = per_xi.iter().map(|r| r.xi).collect();
    let ys: Vec<f64> = per_xi.iter().map(|r| r.supremum).collect();
    let unconverged = samples.iter().filter(|s| !s.converged).count();
    Ok(ScanResult {
        which,
        config: *cfg,
        grid: grid.clone(),
        samples,
        slope: loglog_slope(&xs, &ys),
        per_xi,
        supremum,
        argmax,
        unconverged,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Scan suprema at several `ε` and the fitted `ε` exponent.
#[derive(Clone, Debug, Serialize)]
pub struct EpsilonTrend {
    pub eps: Vec<f64>,
    pub suprema: Vec<f64>,
    pub slope: Option<f64>,
}

pub fn epsilon_trend(which: Kernel, cfg: &EstimateConfig, grid: &ScanGrid, eps: &[f64]) -> Result<EpsilonTrend> {
    let mut suprema = Vec::with_capacity(eps.len());
    for &e in eps {
        let c = EstimateConfig { eps: e, ..*cfg };
        suprema.push(kernel_sup_scan(which, &c, grid)?.supremum);
    }
    Ok(EpsilonTrend {
        eps: eps.to_vec(),
        slope: loglog_slope(eps, &suprema),
        suprema,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::quadrature::{integrate_line, peak_breaks};
    use crate::estimates::tau_integral::pair_integral;

    fn small_grid() -> ScanGrid {
        ScanGrid {
            tau_min: 1.0,
            tau_max: 1e4,
            n_tau: 6,
            xi_min: 1.0,
            xi_max: 1e3,
            n_xi: 8,
            specials: true,
        }
    }

    #[test]
    fn grid_contains_case_boundaries() {
        let g = ScanGrid::default();
        let taus = g.taus(3.0, 1.0);
        let p = phi_eps(3.0, 1.0);
        assert!(taus.contains(&-p) && taus.contains(&(2.0 * p)) && taus.contains(&0.0));
        assert_eq!(g.xis().len(), 40);
    }

    #[test]
    fn c1_point_matches_brute_force_double_integral() {
        // At ξ = 1, τ = 0.5 compare against direct τ₁ quadrature at every ξ₁.
        let cfg = EstimateConfig::new(0.2, 0.1, 0.05, 1.0);
        let tables = KernelTables::new(Kernel::C1, &cfg).unwrap();
        let (tau, xi) = (0.5, 1.0);
        let sample = kernel_point(&cfg, &tables, tau, xi).unwrap();
        let (p, q) = (2.0 * cfg.c1(), 2.0 * cfg.b1);
        let g = |x1: f64| {
            let d = tau - phi_eps(x1 - xi, 1.0) + phi_eps(x1, 1.0);
            let w = (bracket(x1) / bracket(x1 - xi)).powf(2.0 * cfg.k);
            w * pair_integral(p, q, d, Tolerance::rel(1e-10))
        };
        let r = resonance_root(tau, xi, 1.0) + 0.5 * xi;
        let brute = integrate_line(&g, &peak_breaks(r, 0.3, 3), 1.0, Tolerance::rel(1e-7)).value;
        let rel = (sample.kernel_value.powi(2) - brute).abs() / brute;
        assert!(rel < 1e-5, "rel {rel:e}");
    }

    #[test]
    fn supremum_dominates_samples() {
        let cfg = EstimateConfig::new(0.0, 0.0, 0.05, 1.0);
        let r = kernel_sup_scan(Kernel::C1, &cfg, &small_grid()).unwrap();
        assert!(r.samples.iter().all(|s| s.product <= r.supremum));
        assert!(r.supremum.is_finite());
        assert_eq!(r.unconverged, 0);
    }

    #[test]
    fn larger_modulation_exponents_shrink_the_supremum() {
        let base = EstimateConfig::new(0.0, 0.0, 0.05, 1.0);
        let heavier = EstimateConfig {
            b: base.b + 0.05,
            b1: base.b1 + 0.05,
            ..base
        };
        for which in [Kernel::C1, Kernel::C3] {
            let a = kernel_sup_scan(which, &base, &small_grid()).unwrap();
            let b = kernel_sup_scan(which, &heavier, &small_grid()).unwrap();
            assert!(b.supremum <= a.supremum, "{which}: {} > {}", b.supremum, a.supremum);
        }
    }

    #[test]
    fn c2_is_finite_inside() {
        let cfg = EstimateConfig::new(0.0, 0.0, 0.05, 1.0);
        let r = kernel_sup_scan(Kernel::C2, &cfg, &small_grid()).unwrap();
        assert!(r.is_bounded(0.05), "{:?}", r.slope);
    }

    #[test]
    fn hypothesis_violation_is_rejected() {
        let cfg = EstimateConfig::new(0.0, 0.0, 0.7, 1.0);
        assert!(kernel_sup_scan(Kernel::C1, &cfg, &small_grid()).is_err());
    }
}
