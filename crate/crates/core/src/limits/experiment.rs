use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::adiabatic::adiabatic_density;
use super::nls::{solve_nls_family, NlsVariant};
use crate::error::{QzError, Result};
use crate::spectral::{make_grid, sobolev_norm, FourierField};
use crate::system::initial::{envelope, EnvelopeProfile};
use crate::system::{simulate, DensityProfile, SimConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitExperimentConfig {
    /// Strictly decreasing, all in `(0, 1]`.
    pub eps_sequence: Vec<f64>,
    pub n: usize,
    pub length: f64,
    pub dt: f64,
    pub t_compare: f64,
    pub envelope: EnvelopeProfile,
    /// Sobolev exponents at which differences are recorded besides `L²`.
    pub sobolev: Vec<f64>,
    pub seed: u64,
    /// Record wall-clock per ε; off by default so outputs stay byte-reproducible.
    pub timing: bool,
}

impl Default for LimitExperimentConfig {
    fn default() -> Self {
        LimitExperimentConfig {
            eps_sequence: vec![0.5, 0.25, 0.125],
            n: 256,
            length: 32.0 * std::f64::consts::PI,
            dt: 1e-3,
            t_compare: 0.5,
            envelope: EnvelopeProfile::Gaussian {
                amplitude: 1.0,
                width: 2.0,
                carrier: 0.0,
            },
            sobolev: vec![1.0],
            seed: 0,
            timing: false,
        }
    }
}

impl LimitExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.eps_sequence.is_empty() {
            return Err(QzError::config("limits.eps_sequence", "sequence is empty"));
        }
        if self.eps_sequence.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
            return Err(QzError::config("limits.eps_sequence", "entries must lie in (0, 1]"));
        }
        if self.eps_sequence.windows(2).any(|w| w[1] >= w[0]) {
            return Err(QzError::config(
                "limits.eps_sequence",
                "sequence must be strictly decreasing",
            ));
        }
        if !(self.t_compare > 0.0) {
            return Err(QzError::config("limits.t_compare", "comparison time must be positive"));
        }
        Ok(())
    }

    fn sim(&self, eps: f64, density: DensityProfile) -> SimConfig {
        SimConfig {
            n: self.n,
            length: self.length,
            eps,
            dt: self.dt,
            t_final: self.t_compare,
            envelope: self.envelope.clone(),
            density,
            diag_every: usize::MAX,
            seed: self.seed,
            ..SimConfig::default()
        }
    }
}

/// One CSV row: `eps, norm_name, value, runtime_seconds`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub eps: f64,
    pub norm_name: String,
    pub value: f64,
    pub runtime_seconds: f64,
}

/// Per ε: the quantum run against the classical run (same data, zero initial density), and
/// the quantum run from adiabatic data against its adiabatic density and its NLS reduction.
pub fn limit_experiment(cfg: &LimitExperimentConfig) -> Result<Vec<LimitRow>> {
    cfg.validate()?;
    let grid = make_grid(cfg.n, cfg.length)?;
    let classical = simulate(&cfg.sim(0.0, DensityProfile::Zero))?;
    let e_classical = classical.last().e.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let e0 = envelope(&cfg.envelope, &grid, &mut rng)?;
    let per_eps: Vec<Result<Vec<LimitRow>>> = cfg
        .eps_sequence
        .par_iter()
        .map(|&eps| {
            let start = Instant::now();
            let quantum = simulate(&cfg.sim(eps, DensityProfile::Zero))?;
            let diff = quantum.last().e.sub(&e_classical);
            let adiabatic = simulate(&cfg.sim(eps, DensityProfile::Adiabatic))?;
            let last = adiabatic.last();
            let defect = last.n.sub(&adiabatic_density(&last.e, eps, &grid));
            let rho = FourierField::from_coeffs(grid.dealiased_modulus_squared(&last.e.coeffs));
            let classical_defect = last.n.add(&rho);
            let nls = solve_nls_family(&e0, eps, NlsVariant::QuantumPerturbed, cfg.t_compare, cfg.dt, &grid)?;
            let nls_diff = last.e.sub(&nls.e_final);
            let runtime = if cfg.timing { start.elapsed().as_secs_f64() } else { 0.0 };
            let row = |name: String, value: f64| LimitRow {
                eps,
                norm_name: name,
                value,
                runtime_seconds: runtime,
            };
            let mut rows = vec![row("E_diff_L2".into(), sobolev_norm(&diff, 0.0, &grid))];
            for &s in &cfg.sobolev {
                rows.push(row(format!("E_diff_H{s}"), sobolev_norm(&diff, s, &grid)));
            }
            rows.push(row("adiabatic_defect_L2".into(), sobolev_norm(&defect, 0.0, &grid)));
            rows.push(row(
                "n_plus_modulus_L2".into(),
                sobolev_norm(&classical_defect, 0.0, &grid),
            ));
            rows.push(row("E_minus_nls_L2".into(), sobolev_norm(&nls_diff, 0.0, &grid)));
            Ok(rows)
        })
        .collect();
    let mut out = Vec::new();
    for rows in per_eps {
        out.extend(rows?);
    }
    Ok(out)
}

/// `‖n(t) - adiabatic_density(E(t))‖_{L²}` at every stored frame of a run from adiabatic data.
pub fn adiabatic_tracking(cfg: &SimConfig) -> Result<Vec<(f64, f64)>> {
    let cfg = SimConfig {
        density: DensityProfile::Adiabatic,
        store_every: cfg.store_every.max(1),
        ..cfg.clone()
    };
    let traj = simulate(&cfg)?;
    let grid = make_grid(cfg.n, cfg.length)?;
    Ok(traj
        .frames
        .iter()
        .map(|p| {
            (
                p.t,
                sobolev_norm(&p.n.sub(&adiabatic_density(&p.e, cfg.eps, &grid)), 0.0, &grid),
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> LimitExperimentConfig {
        LimitExperimentConfig {
            n: 128,
            length: 40.0,
            dt: 2e-3,
            t_compare: 0.2,
            ..LimitExperimentConfig::default()
        }
    }

    #[test]
    fn classical_difference_shrinks_with_eps() {
        let rows = limit_experiment(&quick()).unwrap();
        let diffs: Vec<f64> = rows
            .iter()
            .filter(|r| r.norm_name == "E_diff_L2")
            .map(|r| r.value)
            .collect();
        assert_eq!(diffs.len(), 3);
        assert!(diffs.windows(2).all(|w| w[1] < w[0]), "{diffs:?}");
        assert!(rows.iter().all(|r| r.value.is_finite() && r.runtime_seconds == 0.0));
    }

    #[test]
    fn bad_sequences_rejected() {
        for seq in [vec![], vec![0.25, 0.5], vec![1.5], vec![0.5, 0.5]] {
            let cfg = LimitExperimentConfig {
                eps_sequence: seq,
                ..quick()
            };
            let err = limit_experiment(&cfg).unwrap_err().to_string();
            assert!(err.contains("eps_sequence"), "{err}");
        }
    }

    #[test]
    fn adiabatic_data_tracks() {
        let cfg = SimConfig {
            n: 128,
            length: 40.0,
            dt: 2e-3,
            t_final: 0.5,
            store_every: 25,
            ..SimConfig::default()
        };
        let series = adiabatic_tracking(&cfg).unwrap();
        assert!(series[0].1 < 1e-14);
        let grid = make_grid(128, 40.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e0 = envelope(&cfg.envelope, &grid, &mut rng).unwrap();
        let n0 = sobolev_norm(&adiabatic_density(&e0, 1.0, &grid), 0.0, &grid);
        assert!(series.iter().all(|&(_, d)| d <= 10.0 * n0));
    }
}
