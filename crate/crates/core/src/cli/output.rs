//! CSV and JSON artifacts.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::conservation::ConservationReport;
use crate::error::{QzError, Result};
use crate::estimates::geometry::case_taus;
use crate::estimates::{phase_profile, region_boundary, Branch, KernelSample};
use crate::limits::LimitRow;

pub const DIAGNOSTICS_HEADER: [&str; 11] = [
    "t",
    "mass",
    "hamiltonian",
    "h_grad",
    "h_quantum_grad",
    "h_coupling",
    "h_density",
    "h_velocity",
    "h_density_grad",
    "mass_residual_L2",
    "momentum_residual_L2",
];
pub const SCAN_HEADER: [&str; 5] = ["tau", "xi", "kernel_value", "prefactor", "product"];
pub const LIMITS_HEADER: [&str; 4] = ["eps", "norm_name", "value", "runtime_seconds"];
pub const REGION_HEADER: [&str; 2] = ["k", "l"];
pub const PROFILE_HEADER: [&str; 4] = ["case", "tau", "xi1", "f"];

/// Seventeen significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(e: csv::Error) -> QzError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => QzError::Io(io),
        other => QzError::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Writes `header` then `rows`; an empty `rows` leaves a header-only file.
pub fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn write_diagnostics(path: &Path, reports: &[ConservationReport]) -> Result<()> {
    write_csv(
        path,
        &DIAGNOSTICS_HEADER,
        reports.iter().map(|r| {
            [
                r.t,
                r.mass,
                r.hamiltonian,
                r.terms.grad,
                r.terms.quantum_grad,
                r.terms.coupling,
                r.terms.density,
                r.terms.velocity,
                r.terms.density_grad,
                r.mass_residual_l2,
                r.momentum_residual_l2,
            ]
            .into_iter()
            .map(num)
            .collect()
        }),
    )
}

pub fn write_scan(path: &Path, samples: &[KernelSample]) -> Result<()> {
    write_csv(
        path,
        &SCAN_HEADER,
        samples.iter().map(|s| {
            [s.tau, s.xi, s.kernel_value, s.prefactor, s.product]
                .into_iter()
                .map(num)
                .collect()
        }),
    )
}

pub fn write_limits(path: &Path, rows: &[LimitRow]) -> Result<()> {
    write_csv(
        path,
        &LIMITS_HEADER,
        rows.iter()
            .map(|r| vec![num(r.eps), r.norm_name.clone(), num(r.value), num(r.runtime_seconds)]),
    )
}

/// Boundary of the exponent region and `f_{τ,ξ}` profiles for the three
/// modulation cases at `xi`. Returns the files written.
pub fn emit_plotdata(dir: &Path, xi: f64, eps: f64) -> Result<Vec<String>> {
    let region = dir.join("region_boundary.csv");
    write_csv(
        &region,
        &REGION_HEADER,
        region_boundary(2.0).into_iter().map(|(k, l)| vec![num(k), num(l)]),
    )?;
    let profile = dir.join("f_profile.csv");
    let mut rows = Vec::new();
    for (case, tau) in case_taus(xi, eps)? {
        for (x, f) in phase_profile(tau, xi, eps, Branch::DiffPlus, 2.0 * xi, 401) {
            rows.push(vec![format!("{case:?}"), num(tau), num(x), num(f)]);
        }
    }
    write_csv(&profile, &PROFILE_HEADER, rows)?;
    Ok(vec!["region_boundary.csv".into(), "f_profile.csv".into()])
}
