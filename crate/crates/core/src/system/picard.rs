use num_complex::Complex64;

use super::linear::LinearPropagator;
use super::nonlinear::nonlinear_rhs;
use super::state::SplitState;
use crate::error::{QzError, Result};
use crate::spectral::{DispersionSymbols, FourierField, SpectralGrid};

/// Consecutive residual increases that flag divergence.
pub const DIVERGENCE_RUN: usize = 3;

/// Outcome of a finite Picard iteration of the Duhamel map.
#[derive(Clone, Debug)]
pub struct PicardReport {
    /// Final iterate at every time node.
    pub nodes: Vec<SplitState>,
    /// `residuals[p-1] = sup_t ‖Ψ^p - Ψ^{p-1}‖_{L²}` for `p = 1, 2, …`.
    pub residuals: Vec<f64>,
    pub ratios: Vec<f64>,
    pub diverged: bool,
    /// First iterate whose residual is zero to rounding.
    pub fixed_point_at: Option<usize>,
}

/// Picard iteration of `X(t) = S(t)X₀ + ∫₀ᵗ S(t-s) N(X(s)) ds` on uniform nodes.
///
/// Iterate 0 is the free evolution. The retarded integral uses the trapezoid rule, propagated
/// node to node so each sweep costs one linear step per node.
pub fn picard_iterate(
    s0: &SplitState,
    t_final: f64,
    n_time_nodes: usize,
    n_iters: usize,
    grid: &SpectralGrid,
    syms: &DispersionSymbols,
) -> Result<PicardReport> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(QzError::config("picard.t_final", "horizon must be positive"));
    }
    if n_time_nodes < 2 {
        return Err(QzError::config("picard.nodes", "need at least 2 time nodes"));
    }
    if n_iters < 2 {
        return Err(QzError::config("picard.iters", "need at least 2 iterations"));
    }
    let h = t_final / (n_time_nodes - 1) as f64;
    let step = LinearPropagator::new(syms, h);
    let mut cur = Vec::with_capacity(n_time_nodes);
    cur.push(s0.clone());
    for i in 1..n_time_nodes {
        let mut next = step.apply(&cur[i - 1]);
        next.t = s0.t + i as f64 * h;
        cur.push(next);
    }
    let free = cur.clone();
    let scale = grid.length().sqrt();
    let mut residuals = Vec::new();
    let mut ratios = Vec::new();
    let mut fixed_point_at = None;
    let mut increases = 0;
    let mut diverged = false;
    for p in 1..=n_iters {
        let forcing: Vec<SplitState> = cur.iter().map(|s| nonlinear_rhs(s, grid, syms)).collect();
        let mut next = Vec::with_capacity(n_time_nodes);
        let mut acc = zero_like(s0);
        next.push(free[0].clone());
        for i in 1..n_time_nodes {
            // acc_i = S(h)[acc_{i-1} + h/2·F_{i-1}] + h/2·F_i
            acc = step.apply(&axpy(&acc, 0.5 * h, &forcing[i - 1]));
            acc = axpy(&acc, 0.5 * h, &forcing[i]);
            let mut x = axpy(&free[i], 1.0, &acc);
            x.t = free[i].t;
            next.push(x);
        }
        let res = next
            .iter()
            .zip(&cur)
            .map(|(a, b)| a.sub(b).l2_coeffs() * scale)
            .fold(0.0, f64::max);
        if !res.is_finite() {
            return Err(QzError::BlowUp {
                t: t_final,
                detail: format!("non-finite Picard residual at iterate {p}"),
            });
        }
        if let Some(&prev) = residuals.last() {
            let r = res / prev;
            ratios.push(r);
            if r > 1.0 {
                increases += 1;
            } else {
                increases = 0;
            }
        }
        let data = next.iter().map(|s| s.l2_coeffs() * scale).fold(0.0, f64::max);
        if fixed_point_at.is_none() && res <= 1e-15 * data.max(f64::MIN_POSITIVE) {
            fixed_point_at = Some(p);
        }
        residuals.push(res);
        cur = next;
        if increases >= DIVERGENCE_RUN {
            diverged = true;
            log::warn!("Picard iteration diverging after {p} iterates (T = {t_final})");
            break;
        }
    }
    Ok(PicardReport {
        nodes: cur,
        residuals,
        ratios,
        diverged,
        fixed_point_at,
    })
}

fn zero_like(s: &SplitState) -> SplitState {
    let n = s.len();
    SplitState {
        e: FourierField::zeros(n),
        n_plus: FourierField::zeros(n),
        n_minus: FourierField::zeros(n),
        t: 0.0,
    }
}

fn axpy(x: &SplitState, a: f64, y: &SplitState) -> SplitState {
    let f = |u: &FourierField, v: &FourierField| u.zip_with(v, |p, q| p + q * Complex64::new(a, 0.0));
    SplitState {
        e: f(&x.e, &y.e),
        n_plus: f(&x.n_plus, &y.n_plus),
        n_minus: f(&x.n_minus, &y.n_minus),
        t: x.t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use crate::system::strang::StrangStepper;

    fn data(g: &SpectralGrid, amp: f64) -> SplitState {
        let c = g.length() / 2.0;
        let e = FourierField::sample(g, |x| Complex64::new(amp * (-(x - c).powi(2) / 4.0).exp(), 0.0));
        SplitState {
            e,
            n_plus: FourierField::zeros(g.n()),
            n_minus: FourierField::zeros(g.n()),
            t: 0.0,
        }
    }

    #[test]
    fn zero_data_is_fixed_immediately() {
        let g = make_grid(32, 20.0).unwrap();
        let syms = DispersionSymbols::new(&g, 1.0).unwrap();
        let r = picard_iterate(&zero_like(&data(&g, 0.0)), 0.1, 11, 3, &g, &syms).unwrap();
        assert_eq!(r.fixed_point_at, Some(1));
        assert!(r.residuals.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn contraction_and_agreement_with_strang() {
        let g = make_grid(64, 20.0).unwrap();
        let syms = DispersionSymbols::new(&g, 1.0).unwrap();
        let s0 = data(&g, 1.0);
        let r = picard_iterate(&s0, 0.2, 201, 8, &g, &syms).unwrap();
        assert!(!r.diverged);
        assert!(r.ratios.iter().all(|&q| q < 1.0), "{:?}", r.ratios);
        let st = StrangStepper::new(&syms, 1e-3).unwrap();
        let mut s = s0.clone();
        for _ in 0..200 {
            s = st.step(&s, &g, &syms).unwrap();
        }
        let last = r.nodes.last().unwrap();
        assert!(last.sub(&s).l2_coeffs() < 1e-5 * s.l2_coeffs());
    }

    #[test]
    fn small_data_cubic_scaling() {
        let g = make_grid(64, 20.0).unwrap();
        let syms = DispersionSymbols::new(&g, 1.0).unwrap();
        let res = |amp| picard_iterate(&data(&g, amp), 0.2, 41, 2, &g, &syms).unwrap().residuals[1];
        let ratio = res(1e-2) / res(2e-2);
        assert!((ratio - 0.125).abs() < 0.01, "{ratio}");
    }

    #[test]
    fn rejects_bad_arguments() {
        let g = make_grid(16, 20.0).unwrap();
        let syms = DispersionSymbols::new(&g, 1.0).unwrap();
        let s = data(&g, 1.0);
        assert!(picard_iterate(&s, 0.0, 10, 3, &g, &syms).is_err());
        assert!(picard_iterate(&s, 1.0, 10, 1, &g, &syms).is_err());
    }
}
