use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QzError, Result};
use crate::spectral::{apply_symbol, DispersionSymbols, FourierField, SymbolKind};

/// Physical variables `(E, n, ∂ₜn)` at time `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimalState {
    pub e: FourierField,
    pub n: FourierField,
    pub nt: FourierField,
    pub t: f64,
}

/// Frequency-split variables `(E, n₊, n₋)` with `n± = n ± iΛ⁻¹∂ₜn`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitState {
    pub e: FourierField,
    pub n_plus: FourierField,
    pub n_minus: FourierField,
    pub t: f64,
}

impl PrimalState {
    pub fn zeros(n: usize) -> Self {
        PrimalState {
            e: FourierField::zeros(n),
            n: FourierField::zeros(n),
            nt: FourierField::zeros(n),
            t: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.e.is_finite() && self.n.is_finite() && self.nt.is_finite()
    }

    /// Checks reality of `n`, `nt` and the zero mean of `nt`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let scale = self.n.max_abs().max(self.nt.max_abs()).max(1.0);
        if !self.n.is_conjugate_symmetric(tol * scale) {
            return Err(QzError::config("n", "density must be real-valued"));
        }
        if !self.nt.is_conjugate_symmetric(tol * scale) {
            return Err(QzError::config("nt", "density rate must be real-valued"));
        }
        if self.nt.mean().norm() > tol * scale {
            return Err(QzError::config("nt", "density rate must have zero mean"));
        }
        Ok(())
    }
}

impl SplitState {
    pub fn len(&self) -> usize {
        self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.e.is_finite() && self.n_plus.is_finite() && self.n_minus.is_finite()
    }

    /// Combined `sqrt(Σ |c|²)` over all three components.
    pub fn l2_coeffs(&self) -> f64 {
        (self.e.l2_coeffs().powi(2) + self.n_plus.l2_coeffs().powi(2) + self.n_minus.l2_coeffs().powi(2)).sqrt()
    }

    pub fn sub(&self, other: &SplitState) -> SplitState {
        SplitState {
            e: self.e.sub(&other.e),
            n_plus: self.n_plus.sub(&other.n_plus),
            n_minus: self.n_minus.sub(&other.n_minus),
            t: self.t,
        }
    }

    /// True when `n₋(x) = conj(n₊(x))` to the given absolute tolerance.
    pub fn is_conjugate_pair(&self, tol: f64) -> bool {
        self.n_minus.sub(&self.n_plus.conj_field()).max_abs() <= tol
    }
}

const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn split_state(p: &PrimalState, syms: &DispersionSymbols) -> Result<SplitState> {
    let w = apply_symbol(&p.nt, SymbolKind::LambdaInv, syms)?.scale(I);
    Ok(SplitState {
        e: p.e.clone(),
        n_plus: p.n.add(&w),
        n_minus: p.n.sub(&w),
        t: p.t,
    })
}

pub fn unsplit_state(s: &SplitState, syms: &DispersionSymbols) -> PrimalState {
    let n = s.n_plus.add(&s.n_minus).scale(Complex64::new(0.5, 0.0));
    let diff = s.n_plus.sub(&s.n_minus).scale(Complex64::new(0.0, -0.5));
    let nt = diff.multiply(syms.sqrt_phi());
    PrimalState {
        e: s.e.clone(),
        n,
        nt,
        t: s.t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use crate::system::initial::random_real_field;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cosine_density_splits_evenly() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let syms = DispersionSymbols::new(&g, 1.0).unwrap();
        let mut p = PrimalState::zeros(16);
        p.n = FourierField::sample_real(&g, f64::cos);
        let s = split_state(&p, &syms).unwrap();
        assert!(s.n_plus.sub(&p.n).max_abs() < 1e-15);
        assert!(s.n_minus.sub(&p.n).max_abs() < 1e-15);
        assert!(unsplit_state(&s, &syms).nt.max_abs() < 1e-15);
    }

    #[test]
    fn sine_rate_splits_to_imaginary_pair() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let syms = DispersionSymbols::new(&g, 1.0).unwrap();
        let mut p = PrimalState::zeros(16);
        p.nt = FourierField::sample_real(&g, |x| 2f64.sqrt() * x.sin());
        let s = split_state(&p, &syms).unwrap();
        let isin = FourierField::sample(&g, |x| c(0.0, x.sin()));
        assert!(s.n_plus.sub(&isin).max_abs() < 1e-15);
        assert!(s.n_minus.add(&isin).max_abs() < 1e-15);
        let back = unsplit_state(&s, &syms);
        assert!(back.n.max_abs() < 1e-15);
        assert!(back.nt.sub(&p.nt).max_abs() < 1e-15);
    }

    #[test]
    fn nonzero_mean_rate_is_rejected() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let syms = DispersionSymbols::new(&g, 1.0).unwrap();
        let mut p = PrimalState::zeros(16);
        p.nt = FourierField::sample_real(&g, |_| 1.0);
        assert!(matches!(split_state(&p, &syms), Err(QzError::NonZeroMean { .. })));
        assert!(p.validate(1e-12).is_err());
    }

    #[test]
    fn random_round_trip_and_pairing() {
        let g = make_grid(128, 20.0).unwrap();
        for (seed, eps) in [(1u64, 1.0), (2, 0.5), (3, 0.0)] {
            let syms = DispersionSymbols::new(&g, eps).unwrap();
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            let p = PrimalState {
                e: random_real_field(&g, 0.5, false, &mut rng)
                    .add(&random_real_field(&g, 0.5, false, &mut rng).scale(I)),
                n: random_real_field(&g, 0.0, false, &mut rng),
                nt: random_real_field(&g, -1.0, true, &mut rng),
                t: 0.3,
            };
            p.validate(1e-12).unwrap();
            let s = split_state(&p, &syms).unwrap();
            assert!(s.is_conjugate_pair(1e-14));
            let back = unsplit_state(&s, &syms);
            let scale = p.n.max_abs().max(p.nt.max_abs());
            assert!(back.n.sub(&p.n).max_abs() <= 1e-12 * scale);
            assert!(back.nt.sub(&p.nt).max_abs() <= 1e-12 * scale);
            assert_eq!(back.e, p.e);
        }
    }
}
