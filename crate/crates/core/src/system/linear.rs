use num_complex::Complex64;

use super::state::SplitState;
use crate::spectral::DispersionSymbols;

/// Exact linear flow: `E ↦ e^{-itΦ}E`, `n₊ ↦ e^{-it√Φ}n₊`, `n₋ ↦ e^{+it√Φ}n₋`.
///
/// With these signs `(n₊ + n₋)/2` solves `n_tt + Λ²n = 0` for `n± = n ± iΛ⁻¹n_t`.
pub fn free_evolve(s: &SplitState, t: f64, syms: &DispersionSymbols) -> SplitState {
    let schro: Vec<Complex64> = syms.phi().iter().map(|&p| Complex64::from_polar(1.0, -t * p)).collect();
    let wave: Vec<Complex64> = syms
        .sqrt_phi()
        .iter()
        .map(|&w| Complex64::from_polar(1.0, -t * w))
        .collect();
    let wave_conj: Vec<Complex64> = wave.iter().map(|w| w.conj()).collect();
    SplitState {
        e: s.e.multiply_complex(&schro),
        n_plus: s.n_plus.multiply_complex(&wave),
        n_minus: s.n_minus.multiply_complex(&wave_conj),
        t: s.t + t,
    }
}

/// Precomputed propagators for repeated steps of one size.
#[derive(Clone, Debug)]
pub struct LinearPropagator {
    schro: Vec<Complex64>,
    wave: Vec<Complex64>,
    wave_conj: Vec<Complex64>,
    dt: f64,
}

impl LinearPropagator {
    pub fn new(syms: &DispersionSymbols, dt: f64) -> Self {
        let schro = syms
            .phi()
            .iter()
            .map(|&p| Complex64::from_polar(1.0, -dt * p))
            .collect();
        let wave: Vec<Complex64> = syms
            .sqrt_phi()
            .iter()
            .map(|&w| Complex64::from_polar(1.0, -dt * w))
            .collect();
        let wave_conj = wave.iter().map(|w| w.conj()).collect();
        LinearPropagator {
            schro,
            wave,
            wave_conj,
            dt,
        }
    }

    pub fn apply(&self, s: &SplitState) -> SplitState {
        SplitState {
            e: s.e.multiply_complex(&self.schro),
            n_plus: s.n_plus.multiply_complex(&self.wave),
            n_minus: s.n_minus.multiply_complex(&self.wave_conj),
            t: s.t + self.dt,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_grid, sobolev_norm, FourierField};
    use crate::system::state::{split_state, unsplit_state, PrimalState};
    use std::f64::consts::PI;

    #[test]
    fn plane_wave_full_revolution() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let syms = DispersionSymbols::new(&g, 1.0).unwrap();
        let e = FourierField::sample(&g, |x| Complex64::from_polar(1.0, x));
        let s = SplitState {
            e: e.clone(),
            n_plus: FourierField::zeros(16),
            n_minus: FourierField::zeros(16),
            t: 0.0,
        };
        let out = free_evolve(&s, PI, &syms);
        assert!(out.e.sub(&e).max_abs() < 1e-14);
        assert_eq!(free_evolve(&s, 0.0, &syms), s);
    }

    /// Fine-step RK4 on the single-mode oscillator `a'' = -2a`.
    fn rk4_oscillator(t: f64, steps: usize) -> (f64, f64) {
        let h = t / steps as f64;
        let f = |a: f64, v: f64| (v, -2.0 * a);
        let (mut a, mut v) = (1.0, 0.0);
        for _ in 0..steps {
            let k1 = f(a, v);
            let k2 = f(a + 0.5 * h * k1.0, v + 0.5 * h * k1.1);
            let k3 = f(a + 0.5 * h * k2.0, v + 0.5 * h * k2.1);
            let k4 = f(a + h * k3.0, v + h * k3.1);
            a += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            v += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        (a, v)
    }

    #[test]
    fn cosine_density_oscillates() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let syms = DispersionSymbols::new(&g, 1.0).unwrap();
        let mut p = PrimalState::zeros(16);
        p.n = FourierField::sample_real(&g, f64::cos);
        let s = split_state(&p, &syms).unwrap();
        for t in [0.3, 1.0, 2.7] {
            let q = unsplit_state(&free_evolve(&s, t, &syms), &syms);
            let (a, v) = rk4_oscillator(t, 20_000);
            let n_exact = FourierField::sample_real(&g, |x| a * x.cos());
            let nt_exact = FourierField::sample_real(&g, |x| v * x.cos());
            assert!(q.n.sub(&n_exact).max_abs() < 1e-12);
            assert!(q.nt.sub(&nt_exact).max_abs() < 1e-12);
        }
    }

    #[test]
    fn group_property_and_norms() {
        use rand::SeedableRng;
        let g = make_grid(64, 10.0).unwrap();
        let syms = DispersionSymbols::new(&g, 0.7).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let f = |rng: &mut rand_chacha::ChaCha8Rng| crate::system::initial::random_real_field(&g, 0.0, true, rng);
        let n = f(&mut rng);
        let s = SplitState {
            e: f(&mut rng).add(&f(&mut rng).scale(Complex64::new(0.0, 1.0))),
            n_plus: n.clone(),
            n_minus: n.conj_field(),
            t: 0.0,
        };
        let once = free_evolve(&s, 0.7, &syms);
        let twice = free_evolve(&free_evolve(&s, 0.3, &syms), 0.4, &syms);
        // Phases reach |tΦ| ~ 5e4 here, so agreement is limited by rounding of the arguments.
        assert!(once.sub(&twice).l2_coeffs() < 1e-10 * s.l2_coeffs());
        assert!(once.is_conjugate_pair(1e-14));
        for sob in [-1.0, 0.0, 2.0] {
            let a = sobolev_norm(&s.e, sob, &g);
            assert!((sobolev_norm(&once.e, sob, &g) - a).abs() < 1e-13 * a);
        }
        let prop = LinearPropagator::new(&syms, 0.7);
        assert!(prop.apply(&s).sub(&once).l2_coeffs() < 1e-15 * s.l2_coeffs());
    }
}
