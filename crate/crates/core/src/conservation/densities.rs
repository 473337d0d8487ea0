use num_complex::Complex64;

use crate::spectral::{DispersionSymbols, FourierField, SpectralGrid};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `ρ = |E|²`, `J = i(E E*_x - E* E_x)` and the quantum flux
/// `J_Q = i(E E*_xxx - E_x E*_xx + E_xx E*_x - E_xxx E*)`.
#[derive(Clone, Debug)]
pub struct Densities {
    pub rho: FourierField,
    pub j: FourierField,
    pub jq: FourierField,
    /// Largest imaginary part of `J` in physical space before projecting to real fields.
    pub imag_j: f64,
    /// Same for `ρ`, `J` and `J_Q` together.
    pub imag_residue: f64,
}

/// Derivatives `∂ₓᵏE` for `k = 0..=order`.
pub fn derivatives(e: &FourierField, order: u32, syms: &DispersionSymbols) -> Vec<FourierField> {
    let mut out = vec![e.clone()];
    for _ in 0..order {
        let next = out.last().unwrap().multiply_complex(syms.deriv());
        out.push(next);
    }
    out
}

/// Dealiased `a·conj(b)` in coefficient space.
pub fn product_conj(a: &FourierField, b: &FourierField, grid: &SpectralGrid) -> FourierField {
    FourierField::from_coeffs(grid.dealiased_product(&a.coeffs, &b.conj_field().coeffs))
}

pub(crate) fn imag_sup(f: &FourierField, grid: &SpectralGrid) -> f64 {
    f.to_physical(grid).iter().map(|v| v.im.abs()).fold(0.0, f64::max)
}

pub fn momentum_densities(e: &FourierField, syms: &DispersionSymbols, grid: &SpectralGrid) -> Densities {
    let d = derivatives(e, 3, syms);
    let pc = |a: usize, b: usize| product_conj(&d[a], &d[b], grid);
    let rho = pc(0, 0);
    let j = pc(0, 1).sub(&pc(1, 0)).scale(I);
    let jq = pc(0, 3).sub(&pc(1, 2)).add(&pc(2, 1)).sub(&pc(3, 0)).scale(I);
    let imag_j = imag_sup(&j, grid);
    let imag_residue = [&rho, &jq].iter().map(|f| imag_sup(f, grid)).fold(imag_j, f64::max);
    Densities {
        rho: rho.real_part(),
        j: j.real_part(),
        jq: jq.real_part(),
        imag_j,
        imag_residue,
    }
}
