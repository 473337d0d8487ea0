use num_complex::Complex64;

use super::state::SplitState;
use crate::spectral::{DispersionSymbols, FourierField, SpectralGrid};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Density `n = (n₊ + n₋)/2` in coefficient space.
pub fn density_of(s: &SplitState) -> FourierField {
    s.n_plus.add(&s.n_minus).scale(Complex64::new(0.5, 0.0))
}

/// Nonlinear tendencies of the first-order system:
/// `dE/dt = -i·nE`, `dn±/dt = ±i·Λ⁻¹Δ|E|²`, with dealiased products.
pub fn nonlinear_rhs(s: &SplitState, grid: &SpectralGrid, syms: &DispersionSymbols) -> SplitState {
    let n = density_of(s);
    let ne = grid.dealiased_product(&n.coeffs, &s.e.coeffs);
    let de = FourierField::from_coeffs(ne).scale(-I);
    let source = FourierField::from_coeffs(grid.dealiased_modulus_squared(&s.e.coeffs)).multiply(syms.lambda_inv_lap());
    SplitState {
        e: de,
        n_plus: source.scale(I),
        n_minus: source.scale(-I),
        t: 0.0,
    }
}

/// Exact flow of the nonlinear subsystem over `dt`.
///
/// `n₊ + n₋` is invariant under this flow and `|E|` is pointwise constant, so `E` picks up the
/// phase `e^{-i n dt}` at the collocation points and `n±` move linearly. The source uses the
/// average of the dealiased `|E|²` before and after the rotation, which keeps the substep symmetric.
pub fn nonlinear_flow(s: &SplitState, dt: f64, grid: &SpectralGrid, syms: &DispersionSymbols) -> SplitState {
    let n_phys = density_of(s).to_physical(grid);
    let e_phys = s.e.to_physical(grid);
    let rotated: Vec<Complex64> = e_phys
        .iter()
        .zip(&n_phys)
        .map(|(e, n)| e * Complex64::from_polar(1.0, -n.re * dt))
        .collect();
    let e_new = FourierField::from_physical(grid, &rotated);
    let before = grid.dealiased_modulus_squared(&s.e.coeffs);
    let after = grid.dealiased_modulus_squared(&e_new.coeffs);
    let avg: Vec<Complex64> = before.iter().zip(&after).map(|(a, b)| 0.5 * (a + b)).collect();
    let incr = FourierField::from_coeffs(avg)
        .multiply(syms.lambda_inv_lap())
        .scale(Complex64::new(0.0, dt));
    SplitState {
        e: e_new,
        n_plus: s.n_plus.add(&incr),
        n_minus: s.n_minus.sub(&incr),
        t: s.t,
    }
}
