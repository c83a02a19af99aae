//! Batch driver for the residual suites, integral checks and convergence
//! studies of `hyperholo-core`.

pub mod commands;
pub mod config;

pub use commands::{
    cmd_convergence, cmd_gauss_selftest, cmd_integral, cmd_list_generators, cmd_verify,
    run_convergence, run_gauss_selftest, run_integral, run_verify, Outcome, EXIT_FAILED, EXIT_OK,
    EXIT_USAGE,
};
pub use config::{ConfigError, GeneratorEntry, RunConfig};
