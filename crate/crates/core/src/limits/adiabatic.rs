use crate::spectral::{FourierField, SpectralGrid};

/// Solves `-n + ε²n_xx = |E|²`: `n̂(ξ) = -F(|E|²)(ξ)/(1 + ε²ξ²)`, with dealiased `|E|²`.
pub fn adiabatic_density(e: &FourierField, eps: f64, grid: &SpectralGrid) -> FourierField {
    let rho = FourierField::from_coeffs(grid.dealiased_modulus_squared(&e.coeffs));
    let symbol: Vec<f64> = grid.xi().iter().map(|&k| -1.0 / (1.0 + eps * eps * k * k)).collect();
    rho.multiply(&symbol).real_part()
}
