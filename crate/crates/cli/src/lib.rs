//! Command-line front end for the cavity-array transport library.
//!
//! Four subcommands cover the common workflows: `spectrum` tabulates the
//! channel modes, `sweep` scans the interface coupling against the
//! perturbative infidelity estimates, `switch` scores a single switch
//! setting, and `network` runs a scheduled multi-register scenario.
//! All tabular output is CSV, written to stdout or to `--out`.
//!
//! Exit codes: 0 on success, 2 when inputs fail validation, 1 on I/O
//! failures.

mod commands;
pub mod error;
pub mod output;
pub mod scenario;

pub fn run() -> i32 {
    commands::run()
}
