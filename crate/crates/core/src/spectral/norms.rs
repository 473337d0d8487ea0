use num_complex::Complex64;
use rustfft::FftPlanner;

use super::field::FourierField;
use super::grid::{signed_index, SpectralGrid};
use super::symbols::DispersionSymbols;
use crate::error::{QzError, Result};

/// Minimum number of time samples accepted by [`bourgain_norm`].
pub const MIN_TIME_SAMPLES: usize = 8;

/// `(Σ_j (1+ξ_j²)^s |c_j|² L)^{1/2}`.
pub fn sobolev_norm(field: &FourierField, s: f64, grid: &SpectralGrid) -> f64 {
    let sum: f64 = field
        .coeffs
        .iter()
        .zip(grid.xi())
        .map(|(c, &k)| (1.0 + k * k).powf(s) * c.norm_sqr())
        .sum();
    (sum * grid.length()).sqrt()
}

/// Modulation variable used in the time weight of [`bourgain_norm`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    /// `τ + Φ_ε(ξ)`.
    Schrodinger,
    /// `τ + √Φ_ε(ξ)`.
    WavePlus,
    /// `τ - √Φ_ε(ξ)`.
    WaveMinus,
}

impl std::str::FromStr for Phase {
    type Err = QzError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "schrodinger" => Ok(Phase::Schrodinger),
            "wave_plus" => Ok(Phase::WavePlus),
            "wave_minus" => Ok(Phase::WaveMinus),
            other => Err(QzError::config("phase", format!("unknown phase `{other}`"))),
        }
    }
}

/// Physical-space samples `u(t_m, x_j)` on `t_m = m·window/M`, `m = 0..M`.
/// The time window is treated as periodic, so samples should already carry a cutoff.
#[derive(Clone, Debug)]
pub struct SpaceTimeSamples {
    pub window: f64,
    pub samples: Vec<Vec<Complex64>>,
}

/// Discrete `X^{s,b}` norm with weight `(1+|ξ|)^s (1+|τ + phase|)^b`.
pub fn bourgain_norm(
    traj: &SpaceTimeSamples,
    s: f64,
    b: f64,
    phase: Phase,
    grid: &SpectralGrid,
    syms: &DispersionSymbols,
) -> Result<f64> {
    let m = traj.samples.len();
    if m < MIN_TIME_SAMPLES {
        return Err(QzError::config(
            "time_samples",
            format!("need at least {MIN_TIME_SAMPLES} time samples, got {m}"),
        ));
    }
    if !(traj.window > 0.0) {
        return Err(QzError::config("window", "time window must be positive"));
    }
    let n = grid.n();
    let rows: Vec<Vec<Complex64>> = traj.samples.iter().map(|row| grid.forward(row)).collect();
    let fft = FftPlanner::new().plan_fft_forward(m);
    let dtau = 2.0 * std::f64::consts::PI / traj.window;
    let mut column = vec![Complex64::new(0.0, 0.0); m];
    let mut sum = 0.0;
    for j in 0..n {
        for (slot, row) in column.iter_mut().zip(&rows) {
            *slot = row[j];
        }
        fft.process(&mut column);
        let xi = grid.xi()[j];
        let shift = match phase {
            Phase::Schrodinger => syms.phi()[j],
            Phase::WavePlus => syms.sqrt_phi()[j],
            Phase::WaveMinus => -syms.sqrt_phi()[j],
        };
        let wx = (1.0 + xi.abs()).powf(2.0 * s);
        for (k, c) in column.iter().enumerate() {
            // Time series convention g(t) = Σ_k g_k e^{iτ_k t}, so g_k = conj-free DFT with e^{-iτt}.
            let tau = dtau * signed_index(k, m) as f64;
            let coeff = c / m as f64;
            sum += wx * (1.0 + (tau + shift).abs()).powf(2.0 * b) * coeff.norm_sqr();
        }
    }
    Ok((sum * grid.length() * traj.window).sqrt())
}
