use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::densities::{derivatives, momentum_densities, product_conj};
use crate::error::{QzError, Result};
use crate::spectral::{DispersionSymbols, FourierField, SpectralGrid};
use crate::system::PrimalState;

/// Relative tolerance on the uniformity of frame times.
const SPACING_TOL: f64 = 1e-9;

/// Residual norms of the local mass and momentum laws, per frame.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ResidualReport {
    pub t: Vec<f64>,
    pub mass_l2: Vec<f64>,
    pub mass_sup: Vec<f64>,
    pub momentum_l2: Vec<f64>,
    pub momentum_sup: Vec<f64>,
}

impl ResidualReport {
    pub fn max_mass_l2(&self) -> f64 {
        self.mass_l2.iter().cloned().fold(0.0, f64::max)
    }

    pub fn max_momentum_l2(&self) -> f64 {
        self.momentum_l2.iter().cloned().fold(0.0, f64::max)
    }
}

/// Second-order time derivative at frame `i` from equally spaced samples.
pub fn stencil_derivative(values: &[&FourierField], i: usize, h: f64) -> FourierField {
    let k = values.len();
    let c = |a: f64| Complex64::new(a / (2.0 * h), 0.0);
    if i == 0 {
        values[0]
            .scale(c(-3.0))
            .add(&values[1].scale(c(4.0)))
            .sub(&values[2].scale(c(1.0)))
    } else if i == k - 1 {
        values[k - 1]
            .scale(c(3.0))
            .sub(&values[k - 2].scale(c(4.0)))
            .add(&values[k - 3].scale(c(1.0)))
    } else {
        values[i + 1].sub(values[i - 1]).scale(c(1.0))
    }
}

/// `ρ_t + ∂ₓJ - ε²∂ₓJ_Q` given `ρ_t`.
pub fn mass_law(rho_t: &FourierField, p: &PrimalState, syms: &DispersionSymbols, grid: &SpectralGrid) -> FourierField {
    let d = momentum_densities(&p.e, syms, grid);
    let e2 = syms.eps() * syms.eps();
    let flux = d.j.sub(&d.jq.scale(Complex64::new(e2, 0.0)));
    rho_t.add(&flux.multiply_complex(syms.deriv()))
}

/// Momentum law residual given `J_t`:
/// `J_t - ∂ₓ(E E*_xx - 2E_x E*_x + E* E_xx) + 2n_x|E|²
///  + ε²∂ₓ(E E*_xxxx - 2E_x E*_xxx + 2E_xx E*_xx - 2E_xxx E*_x + E_xxxx E*)`.
pub fn momentum_law(
    j_t: &FourierField,
    p: &PrimalState,
    syms: &DispersionSymbols,
    grid: &SpectralGrid,
) -> FourierField {
    let d = derivatives(&p.e, 4, syms);
    let pc = |a: usize, b: usize| product_conj(&d[a], &d[b], grid);
    let two = Complex64::new(2.0, 0.0);
    let classical = pc(0, 2).sub(&pc(1, 1).scale(two)).add(&pc(2, 0));
    let quantum = pc(0, 4)
        .sub(&pc(1, 3).scale(two))
        .add(&pc(2, 2).scale(two))
        .sub(&pc(3, 1).scale(two))
        .add(&pc(4, 0));
    let e2 = syms.eps() * syms.eps();
    let flux = quantum.scale(Complex64::new(e2, 0.0)).sub(&classical);
    let rho = pc(0, 0);
    let nx = p.n.multiply_complex(syms.deriv());
    let force = FourierField::from_coeffs(grid.dealiased_product(&nx.coeffs, &rho.coeffs)).scale(two);
    j_t.add(&flux.multiply_complex(syms.deriv())).add(&force).real_part()
}

fn l2(f: &FourierField, grid: &SpectralGrid) -> f64 {
    f.l2_coeffs() * grid.length().sqrt()
}

fn sup(f: &FourierField, grid: &SpectralGrid) -> f64 {
    f.to_physical(grid).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub(crate) fn uniform_spacing(frames: &[PrimalState]) -> Result<f64> {
    if frames.len() < 3 {
        return Err(QzError::config(
            "frames",
            format!("need at least 3 frames, got {}", frames.len()),
        ));
    }
    let h = frames[1].t - frames[0].t;
    if !(h > 0.0) {
        return Err(QzError::config("frames", "frame times must increase"));
    }
    for w in frames.windows(2) {
        if ((w[1].t - w[0].t) - h).abs() > SPACING_TOL * h.max(w[1].t.abs()) {
            return Err(QzError::config("frames", "frames must be equally spaced in time"));
        }
    }
    Ok(h)
}

/// Balance-law residuals on stored frames, with centered differences in the interior and
/// one-sided second-order differences at the ends.
pub fn local_conservation_residual(
    frames: &[PrimalState],
    syms: &DispersionSymbols,
    grid: &SpectralGrid,
) -> Result<ResidualReport> {
    let h = uniform_spacing(frames)?;
    let dens: Vec<_> = frames.iter().map(|p| momentum_densities(&p.e, syms, grid)).collect();
    let rhos: Vec<&FourierField> = dens.iter().map(|d| &d.rho).collect();
    let js: Vec<&FourierField> = dens.iter().map(|d| &d.j).collect();
    let mut report = ResidualReport::default();
    for (i, p) in frames.iter().enumerate() {
        let rm = mass_law(&stencil_derivative(&rhos, i, h), p, syms, grid);
        let rj = momentum_law(&stencil_derivative(&js, i, h), p, syms, grid);
        report.t.push(p.t);
        report.mass_l2.push(l2(&rm, grid));
        report.mass_sup.push(sup(&rm, grid));
        report.momentum_l2.push(l2(&rj, grid));
        report.momentum_sup.push(sup(&rj, grid));
    }
    Ok(report)
}

/// Mass and momentum residual `L²` norms at `frames[pos]` from three consecutive frames.
pub fn frame_residuals(
    frames: &[PrimalState],
    pos: usize,
    syms: &DispersionSymbols,
    grid: &SpectralGrid,
) -> Result<(f64, f64)> {
    if frames.len() != 3 || pos > 2 {
        return Err(QzError::config(
            "frames",
            "need exactly 3 frames and a position in 0..3",
        ));
    }
    let h = uniform_spacing(frames)?;
    let dens: Vec<_> = frames.iter().map(|p| momentum_densities(&p.e, syms, grid)).collect();
    let rhos: Vec<&FourierField> = dens.iter().map(|d| &d.rho).collect();
    let js: Vec<&FourierField> = dens.iter().map(|d| &d.j).collect();
    let rm = mass_law(&stencil_derivative(&rhos, pos, h), &frames[pos], syms, grid);
    let rj = momentum_law(&stencil_derivative(&js, pos, h), &frames[pos], syms, grid);
    Ok((l2(&rm, grid), l2(&rj, grid)))
}

/// Residual norms of the ε → 0 hydrodynamic system per frame.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct HydroReport {
    pub t: Vec<f64>,
    pub continuity_l2: Vec<f64>,
    pub momentum_l2: Vec<f64>,
    pub wave_l2: Vec<f64>,
}

/// Evaluates `ρ_t + J_x`, `J_t + (J²/ρ)_x + 2ρn_x - (ρ(log ρ)_xx)_x` and `n_tt - n_xx - ρ_xx`
/// on frames whose density stays bounded away from zero.
pub fn hydrodynamic_residual(
    frames: &[PrimalState],
    syms: &DispersionSymbols,
    grid: &SpectralGrid,
) -> Result<HydroReport> {
    let h = uniform_spacing(frames)?;
    let dens: Vec<_> = frames.iter().map(|p| momentum_densities(&p.e, syms, grid)).collect();
    let rhos: Vec<&FourierField> = dens.iter().map(|d| &d.rho).collect();
    let js: Vec<&FourierField> = dens.iter().map(|d| &d.j).collect();
    let nts: Vec<&FourierField> = frames.iter().map(|p| &p.nt).collect();
    let dx = |f: &FourierField| f.multiply_complex(syms.deriv());
    let mut report = HydroReport::default();
    for (i, p) in frames.iter().enumerate() {
        let rho_phys: Vec<f64> = dens[i].rho.to_physical(grid).iter().map(|v| v.re).collect();
        let floor = rho_phys.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(floor > 1e-8) {
            return Err(QzError::config(
                "init",
                "hydrodynamic residual needs |E|² bounded away from zero",
            ));
        }
        let j_phys: Vec<f64> = dens[i].j.to_physical(grid).iter().map(|v| v.re).collect();
        let log_rho = FourierField::from_real(grid, &rho_phys.iter().map(|r| r.ln()).collect::<Vec<_>>());
        let log_xx: Vec<f64> = dx(&dx(&log_rho)).to_physical(grid).iter().map(|v| v.re).collect();
        let ratio: Vec<f64> = j_phys.iter().zip(&rho_phys).map(|(j, r)| j * j / r).collect();
        let quantum: Vec<f64> = rho_phys.iter().zip(&log_xx).map(|(r, l)| r * l).collect();
        let nx: Vec<f64> = dx(&p.n).to_physical(grid).iter().map(|v| v.re).collect();
        let force: Vec<f64> = rho_phys.iter().zip(&nx).map(|(r, n)| 2.0 * r * n).collect();

        let cont = stencil_derivative(&rhos, i, h).add(&dx(&dens[i].j));
        let mom = stencil_derivative(&js, i, h)
            .add(&dx(&FourierField::from_real(grid, &ratio)))
            .add(&FourierField::from_real(grid, &force))
            .sub(&dx(&FourierField::from_real(grid, &quantum)));
        let lap = |f: &FourierField| dx(&dx(f));
        let wave = stencil_derivative(&nts, i, h).sub(&lap(&p.n)).sub(&lap(&dens[i].rho));
        report.t.push(p.t);
        report.continuity_l2.push(l2(&cont, grid));
        report.momentum_l2.push(l2(&mom, grid));
        report.wave_l2.push(l2(&wave, grid));
    }
    Ok(report)
}
