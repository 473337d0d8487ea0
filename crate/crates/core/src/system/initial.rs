use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::state::PrimalState;
use crate::error::{QzError, Result};
use crate::limits::adiabatic_density;
use crate::spectral::{apply_symbol, sobolev_norm, DispersionSymbols, FourierField, SpectralGrid, SymbolKind};

/// Extra decay on top of `⟨ξ⟩^{-(s+1/2)}` that puts random data in `H^s` but not above.
pub const RANDOM_DECAY_MARGIN: f64 = 0.01;

/// Initial envelope `E₀`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum EnvelopeProfile {
    /// `A·exp(-(x-L/2)²/w²)·e^{iκx}`.
    Gaussian { amplitude: f64, width: f64, carrier: f64 },
    /// `A·e^{iκx}`; κ is rounded to the nearest grid wavenumber.
    PlaneWave { amplitude: f64, kappa: f64 },
    /// `A·sech(x-L/2)`.
    Sech { amplitude: f64 },
    /// Random phases with `|ĉ(ξ)| ∝ ⟨ξ⟩^{-(s+1/2)-0.01}`, scaled to `‖E₀‖_{H^s} = norm`.
    Random { s: f64, norm: f64 },
}

/// Initial density pair `(n₀, n₁)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum DensityProfile {
    Zero,
    /// `n₀` solves `-n + ε²n_xx = |E₀|²`, `n₁ = 0`.
    Adiabatic,
    /// `n₀ ∈ H^l` and `Λ⁻¹n₁ ∈ H^l` with random phases, each scaled to `H^l` norm `norm`.
    Random {
        l: f64,
        norm: f64,
    },
}

/// Real random field with `|ĉ(ξ)| = ⟨ξ⟩^{-(s+1/2)-0.01}` and uniform phases.
pub fn random_real_field<R: Rng>(grid: &SpectralGrid, s: f64, zero_mean: bool, rng: &mut R) -> FourierField {
    let n = grid.n();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..=n / 2 {
        let amp = decay(grid.xi()[j], s);
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        if j == 0 || j == n / 2 {
            c[j] = Complex64::new(amp * theta.cos(), 0.0);
        } else {
            c[j] = Complex64::from_polar(amp, theta);
            c[n - j] = c[j].conj();
        }
    }
    if zero_mean {
        c[0] = Complex64::new(0.0, 0.0);
    }
    FourierField::from_coeffs(c)
}

/// Complex random field with independent phases for every mode.
pub fn random_complex_field<R: Rng>(grid: &SpectralGrid, s: f64, rng: &mut R) -> FourierField {
    let c = grid
        .xi()
        .iter()
        .map(|&k| Complex64::from_polar(decay(k, s), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    FourierField::from_coeffs(c)
}

fn decay(xi: f64, s: f64) -> f64 {
    (1.0 + xi.abs()).powf(-(s + 0.5) - RANDOM_DECAY_MARGIN)
}

fn normalize(f: FourierField, s: f64, norm: f64, grid: &SpectralGrid) -> FourierField {
    let cur = sobolev_norm(&f, s, grid);
    if cur == 0.0 {
        return f;
    }
    f.scale(Complex64::new(norm / cur, 0.0))
}

pub fn envelope<R: Rng>(profile: &EnvelopeProfile, grid: &SpectralGrid, rng: &mut R) -> Result<FourierField> {
    let c = grid.length() / 2.0;
    let out = match *profile {
        EnvelopeProfile::Gaussian {
            amplitude,
            width,
            carrier,
        } => {
            if !(width > 0.0) {
                return Err(QzError::config("init.width", "width must be positive"));
            }
            FourierField::sample(grid, |x| {
                Complex64::from_polar(amplitude * (-((x - c) / width).powi(2)).exp(), carrier * x)
            })
        }
        EnvelopeProfile::PlaneWave { amplitude, kappa } => {
            let dk = 2.0 * std::f64::consts::PI / grid.length();
            let k = (kappa / dk).round() * dk;
            FourierField::sample(grid, |x| Complex64::from_polar(amplitude, k * x))
        }
        EnvelopeProfile::Sech { amplitude } => FourierField::sample_real(grid, |x| amplitude / (x - c).cosh()),
        EnvelopeProfile::Random { s, norm } => normalize(random_complex_field(grid, s, rng), s, norm, grid),
    };
    Ok(out)
}

/// Builds the primal initial state; the envelope is drawn before the density.
pub fn initial_state<R: Rng>(
    env: &EnvelopeProfile,
    dens: &DensityProfile,
    grid: &SpectralGrid,
    syms: &DispersionSymbols,
    rng: &mut R,
) -> Result<PrimalState> {
    let e = envelope(env, grid, rng)?;
    let (n, nt) = match *dens {
        DensityProfile::Zero => (FourierField::zeros(grid.n()), FourierField::zeros(grid.n())),
        DensityProfile::Adiabatic => (adiabatic_density(&e, syms.eps(), grid), FourierField::zeros(grid.n())),
        DensityProfile::Random { l, norm } => {
            let n0 = normalize(random_real_field(grid, l, false, rng), l, norm, grid);
            let w = normalize(random_real_field(grid, l, true, rng), l, norm, grid);
            let nt = apply_symbol(&w, SymbolKind::Lambda, syms)?;
            (n0, nt)
        }
    };
    Ok(PrimalState { e, n, nt, t: 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use rand::SeedableRng;

    #[test]
    fn random_fields_are_real_and_normalized() {
        let g = make_grid(256, 50.0).unwrap();
        let syms = DispersionSymbols::new(&g, 1.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let p = initial_state(
            &EnvelopeProfile::Random { s: 1.0, norm: 1.0 },
            &DensityProfile::Random { l: 0.0, norm: 0.5 },
            &g,
            &syms,
            &mut rng,
        )
        .unwrap();
        p.validate(1e-14).unwrap();
        assert!((sobolev_norm(&p.e, 1.0, &g) - 1.0).abs() < 1e-12);
        assert!((sobolev_norm(&p.n, 0.0, &g) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn same_seed_same_data() {
        let g = make_grid(64, 10.0).unwrap();
        let draw = |seed| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            envelope(&EnvelopeProfile::Random { s: 0.0, norm: 1.0 }, &g, &mut rng).unwrap()
        };
        assert_eq!(draw(4), draw(4));
        assert_ne!(draw(4), draw(5));
    }

    #[test]
    fn plane_wave_snaps_to_grid() {
        let g = make_grid(32, 4.0 * std::f64::consts::PI).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let e = envelope(
            &EnvelopeProfile::PlaneWave {
                amplitude: 2.0,
                kappa: 1.1,
            },
            &g,
            &mut rng,
        )
        .unwrap();
        let peak = e.coeffs.iter().position(|c| c.norm() > 1.0).unwrap();
        assert_eq!(g.xi()[peak], 1.0);
        assert!((e.coeffs[peak].norm() - 2.0).abs() < 1e-14);
    }
}
