//! Command-line front end for `wva-core`.
//!
//! Commands: `simulate`, `sweep`, `design`, `geometry`, `classical`.
//! Exit codes: 0 success, 1 i/o, 2 usage, 3 invalid input,
//! 4 fit failure, 5 infeasible design.

pub mod args;
pub mod emit;
pub mod error;
pub mod run;

pub use args::{parse_args, Command, Format, Output, RunConfig};
pub use error::CliError;
pub use run::{execute, render, ClassicalReport, GeometryReport, Rendered};
