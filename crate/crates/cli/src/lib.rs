//! Command-line front end for `fermient`: measures on state files, model
//! sweeps, maximizations and perturbation checks, emitted as CSV or JSON.
//!
//! Exit codes: 0 ok, 1 parse, 2 validation, 3 numeric inconsistency, 4 I/O.

pub mod args;
pub mod commands;
pub mod failure;
pub mod state_file;

pub use args::{Cli, Command, Common, Format, Ground};
pub use failure::{Failure, FailureKind, Outcome};
pub use state_file::{Amplitude, StateFile};
