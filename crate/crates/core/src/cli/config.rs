//! Mapping from flat config keys to the module configs.

use super::kv::KvConfig;
use crate::error::{QzError, Result};
use crate::estimates::{EstimateConfig, Kernel, ScanGrid};
use crate::limits::LimitExperimentConfig;
use crate::system::{DensityProfile, EnvelopeProfile, Integrator, SimConfig};

pub fn envelope(kv: &mut KvConfig) -> Result<EnvelopeProfile> {
    let kind = kv.take("init.envelope", "gaussian".to_string())?;
    Ok(match kind.as_str() {
        "gaussian" => EnvelopeProfile::Gaussian {
            amplitude: kv.take("init.amplitude", 1.0)?,
            width: kv.take("init.width", 2.0)?,
            carrier: kv.take("init.carrier", 0.0)?,
        },
        "plane_wave" => EnvelopeProfile::PlaneWave {
            amplitude: kv.take("init.amplitude", 1.0)?,
            kappa: kv.take("init.kappa", 1.0)?,
        },
        "sech" => EnvelopeProfile::Sech {
            amplitude: kv.take("init.amplitude", 1.0)?,
        },
        "random" => EnvelopeProfile::Random {
            s: kv.take("init.s", 1.0)?,
            norm: kv.take("init.norm", 1.0)?,
        },
        other => {
            return Err(QzError::config(
                "init.envelope",
                format!("expected gaussian, plane_wave, sech or random, got `{other}`"),
            ))
        }
    })
}

pub fn density(kv: &mut KvConfig) -> Result<DensityProfile> {
    let kind = kv.take("init.density", "zero".to_string())?;
    Ok(match kind.as_str() {
        "zero" => DensityProfile::Zero,
        "adiabatic" => DensityProfile::Adiabatic,
        "random" => DensityProfile::Random {
            l: kv.take("init.density_l", 0.0)?,
            norm: kv.take("init.density_norm", 1.0)?,
        },
        other => {
            return Err(QzError::config(
                "init.density",
                format!("expected zero, adiabatic or random, got `{other}`"),
            ))
        }
    })
}

pub fn sim_config(kv: &mut KvConfig, seed: u64) -> Result<SimConfig> {
    let d = SimConfig::default();
    let integrator = match kv.take("sim.integrator", "strang".to_string())?.as_str() {
        "strang" => Integrator::Strang,
        "picard" => Integrator::Picard {
            iters: kv.take("sim.picard_iters", 8)?,
        },
        other => {
            return Err(QzError::config(
                "sim.integrator",
                format!("expected strang or picard, got `{other}`"),
            ))
        }
    };
    let cfg = SimConfig {
        n: kv.take("grid.n", d.n)?,
        length: kv.take("grid.length", d.length)?,
        eps: kv.take("sim.eps", d.eps)?,
        dt: kv.take("sim.dt", d.dt)?,
        t_final: kv.take("sim.t_final", d.t_final)?,
        integrator,
        envelope: envelope(kv)?,
        density: density(kv)?,
        diag_every: kv.take("sim.diag_every", d.diag_every)?,
        store_every: kv.take("sim.store_every", d.store_every)?,
        seed,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn limits_config(kv: &mut KvConfig, seed: u64) -> Result<LimitExperimentConfig> {
    let d = LimitExperimentConfig::default();
    let cfg = LimitExperimentConfig {
        eps_sequence: kv.take_list("limits.eps_sequence", d.eps_sequence)?,
        n: kv.take("grid.n", d.n)?,
        length: kv.take("grid.length", d.length)?,
        dt: kv.take("sim.dt", d.dt)?,
        t_compare: kv.take("limits.t_compare", d.t_compare)?,
        envelope: envelope(kv)?,
        sobolev: kv.take_list("limits.sobolev", d.sobolev)?,
        seed,
        timing: kv.take("limits.timing", d.timing)?,
    };
    cfg.validate()?;
    if !(cfg.dt > 0.0 && cfg.dt.is_finite()) {
        return Err(QzError::config(
            "sim.dt",
            format!("time step must be positive, got {}", cfg.dt),
        ));
    }
    Ok(cfg)
}

/// Kernel, exponents and scan grid; `which` overrides `estimates.which`.
pub fn estimate_config(kv: &mut KvConfig, which: Option<Kernel>) -> Result<(Kernel, EstimateConfig, ScanGrid)> {
    let from_file = kv.take_raw("estimates.which");
    let which = match (which, from_file) {
        (Some(w), _) => w,
        (None, Some(s)) => s.parse()?,
        (None, None) => Kernel::C1,
    };
    let base = EstimateConfig::new(
        kv.take("estimates.k", 0.0)?,
        kv.take("estimates.l", 0.0)?,
        kv.take("estimates.theta", 0.1)?,
        kv.take("estimates.eps", 1.0)?,
    );
    let cfg = EstimateConfig {
        b: kv.take("estimates.b", base.b)?,
        b1: kv.take("estimates.b1", base.b1)?,
        b_prime: kv.take("estimates.b_prime", base.b_prime)?,
        b1_prime: kv.take("estimates.b1_prime", base.b1_prime)?,
        ..base
    };
    let d = ScanGrid::default();
    let grid = ScanGrid {
        tau_min: kv.take("estimates.tau_min", d.tau_min)?,
        tau_max: kv.take("estimates.tau_max", d.tau_max)?,
        n_tau: kv.take("estimates.n_tau", d.n_tau)?,
        xi_min: kv.take("estimates.xi_min", d.xi_min)?,
        xi_max: kv.take("estimates.xi_max", d.xi_max)?,
        n_xi: kv.take("estimates.n_xi", d.n_xi)?,
        specials: kv.take("estimates.specials", d.specials)?,
    };
    cfg.check(which)?;
    grid.validate()?;
    Ok((which, cfg, grid))
}
