use serde::{Deserialize, Serialize};

use super::initial::{DensityProfile, EnvelopeProfile};
use crate::error::{QzError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Integrator {
    Strang,
    /// Picard iteration of the Duhamel map over the whole horizon, one node per `dt`.
    Picard {
        iters: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub length: f64,
    pub eps: f64,
    pub dt: f64,
    pub t_final: f64,
    pub integrator: Integrator,
    pub envelope: EnvelopeProfile,
    pub density: DensityProfile,
    /// Diagnostics every this many steps (the final step is always included).
    pub diag_every: usize,
    /// Keep full states every this many steps; 0 keeps only the final state.
    pub store_every: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n: 256,
            length: 32.0 * std::f64::consts::PI,
            eps: 1.0,
            dt: 1e-3,
            t_final: 1.0,
            integrator: Integrator::Strang,
            envelope: EnvelopeProfile::Gaussian {
                amplitude: 1.0,
                width: 2.0,
                carrier: 0.0,
            },
            density: DensityProfile::Zero,
            diag_every: 10,
            store_every: 0,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 8 || self.n % 2 != 0 {
            return Err(QzError::config(
                "grid.n",
                format!("need an even N >= 8, got {}", self.n),
            ));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(QzError::config("grid.length", "domain length must be positive"));
        }
        if !(0.0..=1.0).contains(&self.eps) {
            return Err(QzError::config(
                "sim.eps",
                format!("need 0 <= eps <= 1, got {}", self.eps),
            ));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(QzError::config(
                "sim.dt",
                format!("time step must be positive, got {}", self.dt),
            ));
        }
        if !(self.t_final >= self.dt) {
            return Err(QzError::config("sim.t_final", "final time must be at least dt"));
        }
        let ratio = self.t_final / self.dt;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio {
            return Err(QzError::config(
                "sim.t_final",
                "final time must be a whole number of steps",
            ));
        }
        if self.diag_every == 0 {
            return Err(QzError::config("sim.diag_every", "cadence must be at least 1"));
        }
        if let Integrator::Picard { iters } = self.integrator {
            if iters < 2 {
                return Err(QzError::config("sim.picard_iters", "need at least 2 iterations"));
            }
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }
}
