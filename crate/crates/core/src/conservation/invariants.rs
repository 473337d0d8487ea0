use serde::{Deserialize, Serialize};

use super::densities::product_conj;
use crate::error::{QzError, Result};
use crate::spectral::{DispersionSymbols, FourierField, SpectralGrid};
use crate::system::PrimalState;

/// The six Hamiltonian densities integrated separately.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianTerms {
    /// `∫|E_x|²`
    pub grad: f64,
    /// `ε²∫|E_xx|²`
    pub quantum_grad: f64,
    /// `∫n|E|²`
    pub coupling: f64,
    /// `½∫n²`
    pub density: f64,
    /// `½∫|V|²`, `V = -∂ₓ⁻¹n_t`
    pub velocity: f64,
    /// `½ε²∫|n_x|²`
    pub density_grad: f64,
}

impl HamiltonianTerms {
    pub fn total(&self) -> f64 {
        self.grad + self.quantum_grad + self.coupling + self.density + self.velocity + self.density_grad
    }
}

/// Invariants and balance-law residuals at one time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservationReport {
    pub t: f64,
    pub mass: f64,
    pub hamiltonian: f64,
    pub terms: HamiltonianTerms,
    pub momentum: f64,
    pub mass_residual_l2: f64,
    pub momentum_residual_l2: f64,
}

/// `∫|E|² dx` by Parseval.
pub fn mass(p: &PrimalState, grid: &SpectralGrid) -> f64 {
    p.e.l2_coeffs().powi(2) * grid.length()
}

/// `∫ J dx = 2L Σ ξ|ĉ|²`.
pub fn momentum(p: &PrimalState, grid: &SpectralGrid) -> f64 {
    2.0 * grid.length()
        * p.e
            .coeffs
            .iter()
            .zip(grid.xi())
            .map(|(c, k)| k * c.norm_sqr())
            .sum::<f64>()
}

fn weighted(f: &FourierField, w: impl Fn(f64) -> f64, grid: &SpectralGrid) -> f64 {
    grid.length()
        * f.coeffs
            .iter()
            .zip(grid.xi())
            .map(|(c, &k)| w(k) * c.norm_sqr())
            .sum::<f64>()
}

pub fn hamiltonian(p: &PrimalState, syms: &DispersionSymbols, grid: &SpectralGrid) -> Result<HamiltonianTerms> {
    let scale = p.nt.l2_coeffs();
    if p.nt.mean().norm() > 1e-12 * scale {
        return Err(QzError::NonZeroMean {
            operator: "dx_inv",
            zero_mode: p.nt.mean().norm(),
        });
    }
    let e2 = syms.eps() * syms.eps();
    let rho = product_conj(&p.e, &p.e, grid);
    let coupling = grid.length()
        * p.n
            .coeffs
            .iter()
            .zip(&rho.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum::<f64>();
    Ok(HamiltonianTerms {
        grad: weighted(&p.e, |k| k * k, grid),
        quantum_grad: e2 * weighted(&p.e, |k| k.powi(4), grid),
        coupling,
        density: 0.5 * weighted(&p.n, |_| 1.0, grid),
        velocity: 0.5 * weighted(&p.nt, |k| if k == 0.0 { 0.0 } else { 1.0 / (k * k) }, grid),
        density_grad: 0.5 * e2 * weighted(&p.n, |k| k * k, grid),
    })
}

/// Invariants at one state; residual fields are filled in by the caller when frames allow.
pub fn conservation_report(
    p: &PrimalState,
    syms: &DispersionSymbols,
    grid: &SpectralGrid,
) -> Result<ConservationReport> {
    let terms = hamiltonian(p, syms, grid)?;
    Ok(ConservationReport {
        t: p.t,
        mass: mass(p, grid),
        hamiltonian: terms.total(),
        terms,
        momentum: momentum(p, grid),
        mass_residual_l2: f64::NAN,
        momentum_residual_l2: f64::NAN,
    })
}
