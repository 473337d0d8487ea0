use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qzak(dir: &Path, args: &[&str], cfg: &str) -> Output {
    let cfg_path = dir.join("run.cfg");
    fs::write(&cfg_path, cfg).unwrap();
    let out = dir.join("out");
    Command::new(env!("CARGO_BIN_EXE_qzak"))
        .args(args)
        .args(["--config", cfg_path.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .output()
        .unwrap()
}

#[test]
fn simulate_default_gaussian() {
    let dir = tempfile::tempdir().unwrap();
    let o = qzak(dir.path(), &["simulate", "--verify"], "# defaults\n");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("out/diagnostics.csv")).unwrap();
    assert!(csv.starts_with(
        "t,mass,hamiltonian,h_grad,h_quantum_grad,h_coupling,h_density,h_velocity,h_density_grad,mass_residual_L2,momentum_residual_L2\n"
    ));
    assert_eq!(csv.lines().count(), 102);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["status"], "ok");
    assert_eq!(summary["pass"], true);
}

#[test]
fn negative_dt_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = qzak(dir.path(), &["simulate"], "sim.dt = -1e-3\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dt"));
}

#[test]
fn unknown_key_and_bad_kernel_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = qzak(dir.path(), &["simulate"], "sim.dtt = 1e-3\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sim.dtt"));
    let o = qzak(dir.path(), &["estimates", "--which", "C9"], "");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn boundary_probe_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "estimates.k = 0\nestimates.l = -2\nestimates.n_tau = 12\nestimates.n_xi = 12\n";
    let o = qzak(dir.path(), &["estimates", "--which", "C1", "--verify"], cfg);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("expected"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["detail"]["expected_boundary_failure"], true);
    assert!(summary["detail"]["slope"].as_f64().unwrap() > 0.05);
    let scan = fs::read_to_string(dir.path().join("out/scan_C1.csv")).unwrap();
    assert!(scan.starts_with("tau,xi,kernel_value,prefactor,product\n"));
    let region = fs::read_to_string(dir.path().join("out/region_boundary.csv")).unwrap();
    assert!(region.contains("-7.5000000000000000e-1,-7.5000000000000000e-1"));
}

#[test]
fn blow_up_exits_2_with_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let o = qzak(dir.path(), &["simulate"], "init.amplitude = 1e6\nsim.t_final = 0.1\n");
    assert_eq!(o.status.code(), Some(2));
    let cp = qzak::system::checkpoint::Checkpoint::read(&dir.path().join("out/checkpoint.qzk")).unwrap();
    assert!(cp.state.e.is_finite());
}

#[test]
fn limits_and_norms_write_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let o = qzak(
        dir.path(),
        &["limits", "--verify"],
        "grid.n = 128\ngrid.length = 40\nsim.dt = 2e-3\nlimits.t_compare = 0.2\n",
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("out/limits.csv")).unwrap();
    assert!(csv.starts_with("eps,norm_name,value,runtime_seconds\n"));

    let o = qzak(
        dir.path(),
        &["norms", "--seed", "3"],
        "sim.t_final = 0.1\ninit.envelope = random\n",
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let bourgain = fs::read_to_string(dir.path().join("out/bourgain.csv")).unwrap();
    assert_eq!(bourgain.lines().count(), 4);
}
