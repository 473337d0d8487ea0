use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qzak::cli::{error_exit_code, run, Command, RunManifest, Status};
use qzak::estimates::Kernel;

#[derive(Parser, Debug)]
#[command(name = "qzak", version, about = "Quantum Zakharov simulator and estimate lab")]
struct Args {
    command: Command,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exit with status 3 when a declared tolerance is missed.
    #[arg(long)]
    verify: bool,
    /// Kernel for `estimates` (C1, C2, C3).
    #[arg(long)]
    which: Option<Kernel>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // Argument errors are config errors (1); clap's own code 2 means blow-up here.
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Ok(v) = std::env::var("QZAK_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    log::warn!("could not size thread pool: {e}");
                }
            }
            _ => {
                eprintln!("error: invalid `QZAK_THREADS`: expected a positive integer, got `{v}`");
                return ExitCode::from(1);
            }
        }
    }
    let manifest = RunManifest {
        command: args.command,
        config: args.config,
        out: args.out,
        seed: args.seed,
        verify: args.verify,
        which: args.which,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    match run(&manifest) {
        Ok(outcome) => {
            for c in outcome.checks.iter().filter(|c| manifest.verify && !c.pass) {
                eprintln!("check {} failed: {:e} > {:e}", c.name, c.value, c.tolerance);
            }
            match outcome.status {
                Status::Ok => {}
                Status::BlowUp => eprintln!("error: run diverged; last valid state in checkpoint.qzk"),
                Status::VerifyFailed => {
                    if outcome.detail.get("expected_boundary_failure") == Some(&serde_json::Value::Bool(true)) {
                        eprintln!("verification failed (expected: exponents lie outside the well-posedness region)");
                    } else {
                        eprintln!("verification failed");
                    }
                }
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
