//! Simulation experiment: replications, Bayesian bootstrap summaries and
//! report files.

pub mod bootstrap;
pub mod config;
pub mod report;
pub mod run;

pub use bootstrap::{bayesian_bootstrap, BootstrapSummary};
pub use config::{DgpEntry, SimulationConfig};
pub use report::{emit_report, ReportFormat};
pub use run::{run_experiment, DgpReport, ReplicationRecord, SimulationReport};
