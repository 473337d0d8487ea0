use num_complex::Complex64;

use super::field::FourierField;
use super::grid::SpectralGrid;
use crate::error::{QzError, Result};

/// Relative tolerance for the zero-mode check of inverse symbols.
pub const ZERO_MEAN_TOL: f64 = 1e-12;

/// Dispersion symbol `Φ_ε(ξ) = ξ² + ε²ξ⁴`.
pub fn phi_eps(xi: f64, eps: f64) -> f64 {
    let x2 = xi * xi;
    x2 + eps * eps * x2 * x2
}

/// `√Φ_ε(ξ) = |ξ|·sqrt(1 + ε²ξ²)`, evaluated without squaring overflow.
pub fn sqrt_phi_eps(xi: f64, eps: f64) -> f64 {
    xi.abs() * (1.0 + eps * eps * xi * xi).sqrt()
}

/// Symbol of `D_ε^α`: `(1 + 6ε²ξ²)^{α/2}`.
pub fn d_eps_symbol(xi: f64, eps: f64, alpha: f64) -> f64 {
    (1.0 + 6.0 * eps * eps * xi * xi).powf(0.5 * alpha)
}

/// Named Fourier multipliers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SymbolKind {
    /// `Δ - ε²Δ²`, symbol `-Φ_ε(ξ)`.
    DeltaEps,
    /// `Λ = (-Δ + ε²Δ²)^{1/2}`, symbol `√Φ_ε(ξ)`.
    Lambda,
    /// `Λ^{-1}`; input must have zero mean.
    LambdaInv,
    /// `D_ε^α`.
    DEps(f64),
    /// `∂_x`, symbol `iξ` with the Nyquist mode zeroed.
    Dx,
    /// `∂_x^{-1}`; input must have zero mean. Nyquist zeroed.
    DxInv,
}

impl SymbolKind {
    fn name(&self) -> &'static str {
        match self {
            SymbolKind::DeltaEps => "delta_eps",
            SymbolKind::Lambda => "lambda",
            SymbolKind::LambdaInv => "lambda_inv",
            SymbolKind::DEps(_) => "d_eps",
            SymbolKind::Dx => "dx",
            SymbolKind::DxInv => "dx_inv",
        }
    }
}

/// Multiplier tables for one grid and one value of ε.
#[derive(Clone, Debug)]
pub struct DispersionSymbols {
    eps: f64,
    xi: Vec<f64>,
    phi: Vec<f64>,
    sqrt_phi: Vec<f64>,
    /// `1/√Φ`, zero at ξ = 0 (that entry is never used on admissible input).
    lambda_inv: Vec<f64>,
    /// `Λ^{-1}Δ`, symbol `-ξ²/√Φ_ε(ξ)`; bounded by `1/ε` and zero at ξ = 0.
    lambda_inv_lap: Vec<f64>,
    deriv: Vec<Complex64>,
    deriv_inv: Vec<Complex64>,
}

impl DispersionSymbols {
    /// Tables for `eps ∈ [0, 1]`. `eps = 0` gives the classical symbols.
    pub fn new(grid: &SpectralGrid, eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(QzError::config("eps", format!("need 0 <= eps <= 1, got {eps}")));
        }
        let xi = grid.xi().to_vec();
        let nyq = grid.nyquist_index();
        let phi: Vec<f64> = xi.iter().map(|&k| phi_eps(k, eps)).collect();
        let sqrt_phi: Vec<f64> = xi.iter().map(|&k| sqrt_phi_eps(k, eps)).collect();
        let lambda_inv = sqrt_phi.iter().map(|&s| if s > 0.0 { 1.0 / s } else { 0.0 }).collect();
        let lambda_inv_lap = xi
            .iter()
            .map(|&k| {
                if k == 0.0 {
                    0.0
                } else {
                    -k.abs() / (1.0 + eps * eps * k * k).sqrt()
                }
            })
            .collect();
        let deriv = xi
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                if j == nyq {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, k)
                }
            })
            .collect();
        let deriv_inv = xi
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                if j == nyq || k == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, -1.0 / k)
                }
            })
            .collect();
        Ok(DispersionSymbols {
            eps,
            xi,
            phi,
            sqrt_phi,
            lambda_inv,
            lambda_inv_lap,
            deriv,
            deriv_inv,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn sqrt_phi(&self) -> &[f64] {
        &self.sqrt_phi
    }

    pub fn lambda_inv(&self) -> &[f64] {
        &self.lambda_inv
    }

    pub fn lambda_inv_lap(&self) -> &[f64] {
        &self.lambda_inv_lap
    }

    pub fn deriv(&self) -> &[Complex64] {
        &self.deriv
    }

    pub fn d_eps_alpha(&self, alpha: f64) -> Vec<f64> {
        self.xi.iter().map(|&k| d_eps_symbol(k, self.eps, alpha)).collect()
    }

    /// `∂_x^p` applied to a field; Nyquist zeroed for every order.
    pub fn derivative(&self, field: &FourierField, order: u32) -> FourierField {
        let mut out = field.clone();
        for _ in 0..order {
            out = out.multiply_complex(&self.deriv);
        }
        out
    }
}

fn check_zero_mean(field: &FourierField, operator: &'static str) -> Result<()> {
    let c0 = field.mean().norm();
    let scale = field.l2_coeffs();
    if c0 > ZERO_MEAN_TOL * scale {
        return Err(QzError::NonZeroMean {
            operator,
            zero_mode: c0,
        });
    }
    Ok(())
}

/// Coefficientwise multiplication by the named symbol.
pub fn apply_symbol(field: &FourierField, kind: SymbolKind, syms: &DispersionSymbols) -> Result<FourierField> {
    let out = match kind {
        SymbolKind::DeltaEps => {
            FourierField::from_coeffs(field.coeffs.iter().zip(&syms.phi).map(|(c, p)| -c * p).collect())
        }
        SymbolKind::Lambda => field.multiply(&syms.sqrt_phi),
        SymbolKind::LambdaInv => {
            check_zero_mean(field, kind.name())?;
            field.multiply(&syms.lambda_inv)
        }
        SymbolKind::DEps(alpha) => field.multiply(&syms.d_eps_alpha(alpha)),
        SymbolKind::Dx => field.multiply_complex(&syms.deriv),
        SymbolKind::DxInv => {
            check_zero_mean(field, kind.name())?;
            field.multiply_complex(&syms.deriv_inv)
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::make_grid;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn random_field(n: usize, seed: u64, zero_mean: bool) -> FourierField {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut c: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if zero_mean {
            c[0] = Complex64::new(0.0, 0.0);
        }
        FourierField::from_coeffs(c)
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi_eps(0.0, 1.0), 0.0);
        assert_eq!(phi_eps(1.0, 1.0), 2.0);
        assert_eq!(phi_eps(2.0, 0.5), 8.0);
    }

    #[test]
    fn symbol_table_invariants() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let s = DispersionSymbols::new(&g, 0.7).unwrap();
        for (j, (&p, &sp)) in s.phi().iter().zip(s.sqrt_phi()).enumerate() {
            assert!(p >= 0.0);
            assert_eq!(p == 0.0, j == 0);
            assert!((sp * sp - p).abs() <= 1e-13 * p.max(1.0));
        }
        let k = s.xi()[g.nyquist_index()];
        let ratio = s.phi()[g.nyquist_index()] / (0.49 * k.powi(4));
        assert!((ratio - 1.0).abs() < 0.01);
    }

    #[test]
    fn lambda_inv_single_mode() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let s = DispersionSymbols::new(&g, 1.0).unwrap();
        let f = FourierField::sample_real(&g, f64::sin);
        let out = apply_symbol(&f, SymbolKind::LambdaInv, &s).unwrap();
        let expected = f.scale(Complex64::new(1.0 / 2f64.sqrt(), 0.0));
        assert!(out.sub(&expected).max_abs() < 1e-15);
    }

    #[test]
    fn inverse_symbols_reject_nonzero_mean() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let s = DispersionSymbols::new(&g, 1.0).unwrap();
        let one = FourierField::sample_real(&g, |_| 1.0);
        match apply_symbol(&one, SymbolKind::LambdaInv, &s) {
            Err(QzError::NonZeroMean { operator, .. }) => assert_eq!(operator, "lambda_inv"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            apply_symbol(&one, SymbolKind::DxInv, &s),
            Err(QzError::NonZeroMean { operator: "dx_inv", .. })
        ));
    }

    #[test]
    fn lambda_pair_is_identity() {
        let g = make_grid(128, 10.0).unwrap();
        let s = DispersionSymbols::new(&g, 0.5).unwrap();
        let f = random_field(128, 3, true);
        let back = apply_symbol(
            &apply_symbol(&f, SymbolKind::Lambda, &s).unwrap(),
            SymbolKind::LambdaInv,
            &s,
        )
        .unwrap();
        assert!(back.sub(&f).max_abs() <= 1e-12 * f.max_abs());
    }

    #[test]
    fn derivative_of_sine() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let s = DispersionSymbols::new(&g, 1.0).unwrap();
        let f = FourierField::sample_real(&g, |x| (3.0 * x).sin());
        let d = apply_symbol(&f, SymbolKind::Dx, &s).unwrap();
        let expected = FourierField::sample_real(&g, |x| 3.0 * (3.0 * x).cos());
        assert!(d.sub(&expected).max_abs() < 1e-13);
        let back = apply_symbol(&d, SymbolKind::DxInv, &s).unwrap();
        assert!(back.sub(&f).max_abs() < 1e-13);
    }

    #[test]
    fn eps_zero_is_classical() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let s = DispersionSymbols::new(&g, 0.0).unwrap();
        for (&k, &p) in s.xi().iter().zip(s.phi()) {
            assert_eq!(p, k * k);
        }
        for (&k, &m) in s.xi().iter().zip(s.lambda_inv_lap()) {
            assert_eq!(m, -k.abs());
        }
        assert!(s.d_eps_alpha(0.5).iter().all(|&v| v == 1.0));
        assert!(DispersionSymbols::new(&g, 1.5).is_err());
    }

    proptest! {
        #[test]
        fn lambda_squared_is_phi(seed in 0u64..1000, eps in 0.0f64..=1.0) {
            let g = make_grid(64, 7.0).unwrap();
            let s = DispersionSymbols::new(&g, eps).unwrap();
            let f = random_field(64, seed, false);
            let twice = apply_symbol(&apply_symbol(&f, SymbolKind::Lambda, &s).unwrap(), SymbolKind::Lambda, &s).unwrap();
            let direct = f.multiply(s.phi());
            prop_assert!(twice.sub(&direct).max_abs() <= 1e-12 * direct.max_abs().max(1.0));
        }

        #[test]
        fn real_symbols_preserve_reality(seed in 0u64..1000, alpha in -2.0f64..2.0) {
            let g = make_grid(32, 5.0).unwrap();
            let s = DispersionSymbols::new(&g, 0.8).unwrap();
            let mut f = random_field(32, seed, true).real_part();
            f.coeffs[16] = Complex64::new(f.coeffs[16].re, 0.0);
            prop_assert!(f.is_conjugate_symmetric(1e-15));
            for kind in [SymbolKind::DeltaEps, SymbolKind::Lambda, SymbolKind::LambdaInv,
                         SymbolKind::DEps(alpha), SymbolKind::Dx, SymbolKind::DxInv] {
                let out = apply_symbol(&f, kind, &s).unwrap();
                prop_assert!(out.is_conjugate_symmetric(1e-12 * out.max_abs().max(1.0)), "{:?}", kind);
            }
        }
    }
}
