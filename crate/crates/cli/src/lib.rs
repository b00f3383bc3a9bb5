//! Batch driver for roughlim analyses: JSON configuration in, JSON report
//! and optional CSV plot data out.

pub mod config;
pub mod run;

pub use config::{parse, RunConfig};
pub use run::{execute, scan_csv, Report, Results, RunError};
