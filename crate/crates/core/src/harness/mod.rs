//! Verification harness: randomized exact checks, recovery and demonstrations.

pub mod bp;
pub mod checks;
pub mod config;
pub mod independence;
pub mod montecarlo;
pub mod recover;
pub mod report;
pub mod simplex;

pub use checks::Target;
pub use config::TrialConfig;
pub use report::{CheckReport, TrialOutcome, Verdict, REPORT_SCHEMA};
