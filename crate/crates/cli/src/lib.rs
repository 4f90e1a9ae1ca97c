//! Command-line frontend for Wehrl-entropy phase-transition sweeps.
//!
//! The binary is a thin layer over [`commands`]; everything here is usable
//! in-process as well.

pub mod commands;
pub mod config;
pub mod line;
pub mod output;

pub use commands::{cmd_classify, cmd_husimi, cmd_surface, cmd_sweep, CliError, SurfaceArgs, SweepArgs};
pub use config::{parse_config, ConfigErrors, RunConfig};
