use super::linear::LinearPropagator;
use super::nonlinear::nonlinear_flow;
use super::state::SplitState;
use crate::error::{QzError, Result};
use crate::spectral::{DispersionSymbols, SpectralGrid};

/// Amplitude above which a run is treated as blown up.
pub const BLOWUP_AMPLITUDE: f64 = 1e8;

/// Strang splitting with cached half-step propagators.
#[derive(Clone, Debug)]
pub struct StrangStepper {
    half: LinearPropagator,
    dt: f64,
}

impl StrangStepper {
    pub fn new(syms: &DispersionSymbols, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(QzError::config("dt", format!("time step must be positive, got {dt}")));
        }
        Ok(StrangStepper {
            half: LinearPropagator::new(syms, 0.5 * dt),
            dt,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&self, s: &SplitState, grid: &SpectralGrid, syms: &DispersionSymbols) -> Result<SplitState> {
        let a = self.half.apply(s);
        let b = nonlinear_flow(&a, self.dt, grid, syms);
        let mut c = self.half.apply(&b);
        c.t = s.t + self.dt;
        check_finite(&c)?;
        Ok(c)
    }
}

/// Half linear step, exact nonlinear step, half linear step.
pub fn step_strang(s: &SplitState, dt: f64, grid: &SpectralGrid, syms: &DispersionSymbols) -> Result<SplitState> {
    StrangStepper::new(syms, dt)?.step(s, grid, syms)
}

pub fn check_finite(s: &SplitState) -> Result<()> {
    if !s.is_finite() {
        return Err(QzError::BlowUp {
            t: s.t,
            detail: "non-finite Fourier coefficients".into(),
        });
    }
    let peak = s.e.max_abs().max(s.n_plus.max_abs());
    if peak > BLOWUP_AMPLITUDE {
        return Err(QzError::BlowUp {
            t: s.t,
            detail: format!("coefficient magnitude {peak:e} exceeds {BLOWUP_AMPLITUDE:e}"),
        });
    }
    Ok(())
}
