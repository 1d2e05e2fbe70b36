//! Library side of the `spinor-gordon` command-line tool: configuration
//! resolution, tabulated-field files, and report rendering. The binary in
//! `main.rs` is a thin dispatcher over these.

pub mod config;
pub mod report;
pub mod tabulated;

pub use config::{ConfigError, OutputFormat, Overrides, RunSettings};
pub use tabulated::{TabulatedError, TabulatedField};

/// Environment variable consulted for a config file when `--config` is not
/// given.
pub const CONFIG_ENV_VAR: &str = "SPINOR_GORDON_CONFIG";
