//! Command-line interface, report rendering and local HTTP service for the
//! ctprof engine.

pub mod api;
pub mod cli;
pub mod render;
pub mod server;

pub use cli::{run_captured, run_cli, run_with_env, CliOutput};
