//! Design, comparison and sweep drivers behind the `nlfm` binary.
//!
//! Each driver has a pure form ([`design::design`], [`compare::compare`],
//! [`sweep::sweep`]) and a `run_*` form that also writes artifacts.

pub mod artifacts;
pub mod compare;
pub mod config;
pub mod design;
pub mod error;
pub mod sweep;

pub use compare::{run_compare, Comparison};
pub use config::DesignConfig;
pub use design::{run_design, DesignOutcome};
pub use error::{CliError, Result};
pub use sweep::{run_sweep, SweepGrid};
