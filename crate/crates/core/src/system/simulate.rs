use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{Integrator, SimConfig};
use super::initial::initial_state;
use super::picard::picard_iterate;
use super::state::{split_state, unsplit_state, PrimalState, SplitState};
use super::strang::StrangStepper;
use crate::conservation::residual::frame_residuals;
use crate::conservation::{conservation_report, local_conservation_residual, ConservationReport};
use crate::error::{QzError, Result};
use crate::spectral::{make_grid, DispersionSymbols, SpectralGrid};

/// Picard convergence data attached to a trajectory computed by iteration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PicardSummary {
    pub residuals: Vec<f64>,
    pub ratios: Vec<f64>,
    pub diverged: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory {
    pub config: SimConfig,
    /// Stored states, strictly increasing in `t`; the last valid state is always present.
    pub frames: Vec<PrimalState>,
    pub diagnostics: Vec<ConservationReport>,
    pub picard: Option<PicardSummary>,
}

impl Trajectory {
    pub fn last(&self) -> &PrimalState {
        self.frames.last().expect("trajectory holds at least the initial state")
    }
}

/// Runs the configured integrator; a blow-up is an error.
pub fn simulate(cfg: &SimConfig) -> Result<Trajectory> {
    let (traj, err) = simulate_partial(cfg)?;
    match err {
        Some(e) => Err(e),
        None => Ok(traj),
    }
}

/// Like [`simulate`] but hands back the trajectory up to the last valid state on blow-up.
pub fn simulate_partial(cfg: &SimConfig) -> Result<(Trajectory, Option<QzError>)> {
    cfg.validate()?;
    let grid = make_grid(cfg.n, cfg.length)?;
    let syms = DispersionSymbols::new(&grid, cfg.eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let p0 = initial_state(&cfg.envelope, &cfg.density, &grid, &syms, &mut rng)?;
    p0.validate(1e-12)?;
    let s0 = split_state(&p0, &syms)?;
    match cfg.integrator {
        Integrator::Strang => run_strang(cfg, s0, &grid, &syms),
        Integrator::Picard { iters } => run_picard(cfg, s0, iters, &grid, &syms),
    }
}

fn is_diag(i: usize, steps: usize, cfg: &SimConfig) -> bool {
    i % cfg.diag_every == 0 || i == steps
}

fn is_stored(i: usize, steps: usize, cfg: &SimConfig) -> bool {
    i == steps || (cfg.store_every > 0 && i % cfg.store_every == 0)
}

fn run_strang(
    cfg: &SimConfig,
    s0: SplitState,
    grid: &SpectralGrid,
    syms: &DispersionSymbols,
) -> Result<(Trajectory, Option<QzError>)> {
    let steps = cfg.steps();
    let stepper = StrangStepper::new(syms, cfg.dt)?;
    let mut traj = Trajectory {
        config: cfg.clone(),
        frames: Vec::new(),
        diagnostics: Vec::new(),
        picard: None,
    };
    // Last three primal states, oldest first.
    let mut window: Vec<PrimalState> = Vec::with_capacity(3);
    let mut pending: Vec<(usize, usize)> = Vec::new();
    let mut cur = s0;
    let mut failure = None;
    for i in 0..=steps {
        if i > 0 {
            match stepper.step(&cur, grid, syms) {
                Ok(next) => cur = next,
                Err(e) => {
                    failure = Some(e);
                    break;
                }
            }
            cur.t = i as f64 * cfg.dt;
        }
        let p = unsplit_state(&cur, syms);
        if window.len() == 3 {
            window.remove(0);
        }
        window.push(p.clone());
        if is_diag(i, steps, cfg) {
            pending.push((i, traj.diagnostics.len()));
            traj.diagnostics.push(conservation_report(&p, syms, grid)?);
        }
        if i == 0 || is_stored(i, steps, cfg) {
            traj.frames.push(p);
        }
        if window.len() == 3 {
            let mut keep = Vec::new();
            for (step, row) in pending.drain(..) {
                let pos = if step + 1 == i && step >= 1 {
                    Some(1)
                } else if step == 0 && i == 2 {
                    Some(0)
                } else if step == i && i == steps {
                    Some(2)
                } else {
                    None
                };
                match pos {
                    Some(pos) => {
                        let (m, j) = frame_residuals(&window, pos, syms, grid)?;
                        traj.diagnostics[row].mass_residual_l2 = m;
                        traj.diagnostics[row].momentum_residual_l2 = j;
                    }
                    None => keep.push((step, row)),
                }
            }
            pending = keep;
        }
    }
    if failure.is_some() {
        // `cur` still holds the last state that passed the finiteness check.
        let last = window.pop().unwrap_or_else(|| unsplit_state(&cur, syms));
        if traj.frames.last().map(|f| f.t) != Some(last.t) {
            traj.frames.push(last);
        }
    }
    Ok((traj, failure))
}

fn run_picard(
    cfg: &SimConfig,
    s0: SplitState,
    iters: usize,
    grid: &SpectralGrid,
    syms: &DispersionSymbols,
) -> Result<(Trajectory, Option<QzError>)> {
    let steps = cfg.steps();
    let report = picard_iterate(&s0, cfg.t_final, steps + 1, iters, grid, syms)?;
    let all: Vec<PrimalState> = report.nodes.iter().map(|s| unsplit_state(s, syms)).collect();
    let residuals = if all.len() >= 3 {
        Some(local_conservation_residual(&all, syms, grid)?)
    } else {
        None
    };
    let mut diagnostics = Vec::new();
    let mut frames = Vec::new();
    for (i, p) in all.iter().enumerate() {
        if is_diag(i, steps, cfg) {
            let mut row = conservation_report(p, syms, grid)?;
            if let Some(r) = &residuals {
                row.mass_residual_l2 = r.mass_l2[i];
                row.momentum_residual_l2 = r.momentum_l2[i];
            }
            diagnostics.push(row);
        }
        if i == 0 || is_stored(i, steps, cfg) {
            frames.push(p.clone());
        }
    }
    let failure = if report.diverged {
        Some(QzError::BlowUp {
            t: cfg.t_final,
            detail: "Picard iteration diverged".into(),
        })
    } else {
        None
    };
    Ok((
        Trajectory {
            config: cfg.clone(),
            frames,
            diagnostics,
            picard: Some(PicardSummary {
                residuals: report.residuals,
                ratios: report.ratios,
                diverged: report.diverged,
            }),
        },
        failure,
    ))
}
