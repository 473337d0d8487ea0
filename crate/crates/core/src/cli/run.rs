//! Command dispatch.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{estimate_config, limits_config, sim_config};
use super::kv::KvConfig;
use super::output::{emit_plotdata, num, write_csv, write_diagnostics, write_json, write_limits, write_scan};
use crate::error::{QzError, Result};
use crate::estimates::{kernel_sup_scan, region_membership, Kernel};
use crate::limits::limit_experiment;
use crate::spectral::{
    bourgain_norm, make_grid, sobolev_norm, DispersionSymbols, FourierField, Phase, SpaceTimeSamples,
};
use crate::system::checkpoint::Checkpoint;
use crate::system::{simulate_partial, split_state, SimConfig, SplitState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Simulate,
    Limits,
    Estimates,
    Norms,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: Command,
    pub config: PathBuf,
    pub out: PathBuf,
    pub seed: u64,
    /// Turn failed checks into exit status 3.
    pub verify: bool,
    /// Kernel for `estimates`; overrides `estimates.which`.
    pub which: Option<Kernel>,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    BlowUp,
    VerifyFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub status: Status,
    pub checks: Vec<Check>,
    /// Artifacts written to the output directory.
    pub files: Vec<String>,
    pub detail: Value,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::BlowUp => 2,
            Status::VerifyFailed => 3,
        }
    }
}

/// Exit status for an error that aborted a run.
pub fn error_exit_code(err: &QzError) -> i32 {
    match err {
        QzError::BlowUp { .. } | QzError::Quadrature { .. } | QzError::Bracket(_) => 2,
        _ => 1,
    }
}

/// Reads the config, runs the command, writes artifacts plus `summary.json`.
pub fn run(manifest: &RunManifest) -> Result<Outcome> {
    let text = fs::read_to_string(&manifest.config)
        .map_err(|e| QzError::config("config", format!("{}: {e}", manifest.config.display())))?;
    let mut kv = KvConfig::parse(&text)?;
    let mut outcome = match manifest.command {
        Command::Simulate => {
            let cfg = sim_config(&mut kv, manifest.seed)?;
            let tol = drift_tolerances(&mut kv)?;
            kv.finish()?;
            prepare(&manifest.out)?;
            run_simulate(&cfg, tol, &manifest.out)?
        }
        Command::Limits => {
            let cfg = limits_config(&mut kv, manifest.seed)?;
            kv.finish()?;
            prepare(&manifest.out)?;
            let rows = limit_experiment(&cfg)?;
            write_limits(&manifest.out.join("limits.csv"), &rows)?;
            let diffs: Vec<f64> = rows
                .iter()
                .filter(|r| r.norm_name == "E_diff_L2")
                .map(|r| r.value)
                .collect();
            let worst = diffs.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
            Outcome {
                status: Status::Ok,
                checks: vec![Check {
                    name: "E_diff_L2_strictly_decreasing".into(),
                    value: worst,
                    tolerance: 0.0,
                    pass: diffs.len() < 2 || worst < 0.0,
                }],
                files: vec!["limits.csv".into()],
                detail: json!({ "config": cfg }),
            }
        }
        Command::Estimates => {
            let (which, cfg, grid) = estimate_config(&mut kv, manifest.which)?;
            let max_slope = kv.take("estimates.max_slope", 0.05)?;
            let plot_xi = kv.take("estimates.plot_xi", 32.0)?;
            kv.finish()?;
            prepare(&manifest.out)?;
            let scan = kernel_sup_scan(which, &cfg, &grid)?;
            let csv_name = format!("scan_{which}.csv");
            let json_name = format!("scan_{which}.json");
            write_scan(&manifest.out.join(&csv_name), &scan.samples)?;
            write_json(&manifest.out.join(&json_name), &scan)?;
            let mut files = vec![csv_name, json_name];
            files.extend(emit_plotdata(&manifest.out, plot_xi, cfg.eps)?);
            let region = region_membership(cfg.k, cfg.l);
            let checks = vec![
                Check::at_most(
                    "supremum_finite",
                    if scan.supremum.is_finite() { 0.0 } else { 1.0 },
                    0.0,
                ),
                Check::at_most("xi_slope", scan.slope.unwrap_or(f64::INFINITY), max_slope),
            ];
            let expected_failure = !region.inside && checks.iter().any(|c| !c.pass);
            Outcome {
                status: Status::Ok,
                checks,
                files,
                detail: json!({
                    "kernel": which,
                    "supremum": scan.supremum,
                    "argmax": scan.argmax,
                    "slope": scan.slope,
                    "unconverged": scan.unconverged,
                    "region": region,
                    "expected_boundary_failure": expected_failure,
                }),
            }
        }
        Command::Norms => {
            let samples = kv.take("norms.samples", 16usize)?;
            let sobolev = kv.take_list("norms.sobolev", vec![0.0, 1.0])?;
            let s = kv.take("norms.s", 0.0)?;
            let b = kv.take("norms.b", 0.55)?;
            let cfg = sim_config(&mut kv, manifest.seed)?;
            kv.finish()?;
            prepare(&manifest.out)?;
            run_norms(&cfg, samples, &sobolev, s, b, &manifest.out)?
        }
    };
    if manifest.verify && outcome.status == Status::Ok && outcome.checks.iter().any(|c| !c.pass) {
        outcome.status = Status::VerifyFailed;
    }
    let summary = json!({
        "command": manifest.command,
        "version": manifest.version,
        "seed": manifest.seed,
        "verify": manifest.verify,
        "status": outcome.status,
        "pass": outcome.checks.iter().all(|c| c.pass),
        "checks": outcome.checks,
        "files": outcome.files,
        "detail": outcome.detail,
    });
    write_json(&manifest.out.join("summary.json"), &summary)?;
    Ok(outcome)
}

fn prepare(out: &Path) -> Result<()> {
    fs::create_dir_all(out)?;
    Ok(())
}

#[derive(Clone, Copy, Debug)]
struct DriftTolerances {
    mass: f64,
    hamiltonian: f64,
}

fn drift_tolerances(kv: &mut KvConfig) -> Result<DriftTolerances> {
    Ok(DriftTolerances {
        mass: kv.take("verify.mass_drift", 1e-10)?,
        hamiltonian: kv.take("verify.hamiltonian_drift", 1e-6)?,
    })
}

fn max_relative_drift(values: &[f64]) -> f64 {
    let Some(&v0) = values.first() else { return 0.0 };
    let scale = v0.abs().max(f64::MIN_POSITIVE);
    values.iter().map(|v| (v - v0).abs() / scale).fold(0.0, f64::max)
}

fn run_simulate(cfg: &SimConfig, tol: DriftTolerances, out: &Path) -> Result<Outcome> {
    let (traj, failure) = simulate_partial(cfg)?;
    write_diagnostics(&out.join("diagnostics.csv"), &traj.diagnostics)?;
    let mut files = vec!["diagnostics.csv".to_string()];
    if let Some(p) = &traj.picard {
        write_csv(
            &out.join("picard.csv"),
            &["iteration", "residual", "ratio"],
            p.residuals.iter().enumerate().map(|(i, r)| {
                let ratio = if i == 0 {
                    f64::NAN
                } else {
                    p.ratios.get(i - 1).copied().unwrap_or(f64::NAN)
                };
                vec![(i + 1).to_string(), num(*r), num(ratio)]
            }),
        )?;
        files.push("picard.csv".into());
    }
    let mass: Vec<f64> = traj.diagnostics.iter().map(|r| r.mass).collect();
    let energy: Vec<f64> = traj.diagnostics.iter().map(|r| r.hamiltonian).collect();
    let checks = vec![
        Check::at_most("mass_drift", max_relative_drift(&mass), tol.mass),
        Check::at_most("hamiltonian_drift", max_relative_drift(&energy), tol.hamiltonian),
    ];
    let diverged = traj.picard.as_ref().is_some_and(|p| p.diverged);
    let status = if failure.is_some() || diverged {
        let checkpoint = Checkpoint {
            length: cfg.length,
            eps: cfg.eps,
            state: traj.last().clone(),
        };
        checkpoint.write(&out.join("checkpoint.qzk"))?;
        files.push("checkpoint.qzk".into());
        Status::BlowUp
    } else {
        Status::Ok
    };
    Ok(Outcome {
        status,
        checks,
        files,
        detail: json!({
            "config": cfg,
            "t_reached": traj.last().t,
            "failure": failure.map(|e| e.to_string()),
            "picard_diverged": diverged,
        }),
    })
}

type Pick = fn(&SplitState) -> &FourierField;

/// Sobolev norms of `E` and `n` at every stored frame and `X^{s,b}` norms of
/// `E`, `n₊`, `n₋` over the first `samples` stored frames.
fn run_norms(cfg: &SimConfig, samples: usize, sobolev: &[f64], s: f64, b: f64, out: &Path) -> Result<Outcome> {
    if samples < 8 {
        return Err(QzError::config(
            "norms.samples",
            format!("need at least 8 time samples, got {samples}"),
        ));
    }
    let steps = cfg.steps();
    if steps < samples {
        return Err(QzError::config(
            "norms.samples",
            format!("only {steps} steps for {samples} samples"),
        ));
    }
    let stride = steps / samples;
    let cfg = SimConfig {
        store_every: stride,
        ..cfg.clone()
    };
    let (traj, failure) = simulate_partial(&cfg)?;
    if let Some(e) = failure {
        return Err(e);
    }
    let grid = make_grid(cfg.n, cfg.length)?;
    let syms = DispersionSymbols::new(&grid, cfg.eps)?;
    let mut rows = Vec::new();
    for frame in &traj.frames {
        for (name, field) in [("E", &frame.e), ("n", &frame.n)] {
            for &sv in sobolev {
                rows.push(vec![
                    num(frame.t),
                    name.to_string(),
                    num(sv),
                    num(sobolev_norm(field, sv, &grid)),
                ]);
            }
        }
    }
    write_csv(&out.join("norms.csv"), &["t", "field", "s", "value"], rows)?;

    let window: Vec<_> = traj
        .frames
        .iter()
        .take(samples)
        .map(|p| split_state(p, &syms))
        .collect::<Result<_>>()?;
    let span = samples as f64 * stride as f64 * cfg.dt;
    let mut bourgain = Vec::new();
    let fields: [(&str, Phase, Pick); 3] = [
        ("E", Phase::Schrodinger, |st| &st.e),
        ("n_plus", Phase::WavePlus, |st| &st.n_plus),
        ("n_minus", Phase::WaveMinus, |st| &st.n_minus),
    ];
    for (name, phase, pick) in fields {
        let st = SpaceTimeSamples {
            window: span,
            samples: window.iter().map(|w| pick(w).to_physical(&grid)).collect(),
        };
        let value = bourgain_norm(&st, s, b, phase, &grid, &syms)?;
        bourgain.push(vec![name.to_string(), format!("{phase:?}"), num(s), num(b), num(value)]);
    }
    write_csv(
        &out.join("bourgain.csv"),
        &["field", "phase", "s", "b", "value"],
        bourgain,
    )?;
    Ok(Outcome {
        status: Status::Ok,
        checks: Vec::new(),
        files: vec!["norms.csv".into(), "bourgain.csv".into()],
        detail: json!({ "config": cfg, "window": span, "samples": samples }),
    })
}
