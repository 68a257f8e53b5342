//! Command implementations behind the `s4bell` binary.
//!
//! Each command returns a [`report::RunReport`]; the binary renders it and
//! maps it to an exit code (0 success, 1 failed check, 2 usage or I/O).

pub mod commands;
pub mod report;

pub use commands::{
    cmd_bound, cmd_game, cmd_histogram, cmd_orbit, cmd_verify, default_threads, orbit_csv, BoundMode, CliError,
    GameMode, VerifyOptions,
};
pub use report::{Check, RunReport};
