//! Batch front end: flat config files, command dispatch and artifacts.

pub mod config;
pub mod kv;
pub mod output;
pub mod run;

pub use kv::KvConfig;
pub use output::emit_plotdata;
pub use run::{error_exit_code, run, Check, Command, Outcome, RunManifest, Status};
