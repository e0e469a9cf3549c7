//! Experiment orchestration: topology generation, runs, audits, rate
//! sweeps and CSV output.

pub mod audit;
pub mod config;
pub mod generate;
pub mod output;
pub mod run;

pub use audit::{audit_schedule, AuditRow, AuditSummary};
pub use config::{
    Algorithm, ExperimentConfig, MarginMode, PartitionPlan, PowerKind, Settings, TopologyConfig,
};
pub use generate::generate_network;
pub use output::{
    read_schedule_csv, write_audit_csv, write_run_csv, write_schedule_csv, write_sweep_csv,
};
pub use run::{
    is_stable, run_experiment, stream_rng, sweep_rates, topology_for_seed, MetricsRecord,
    RunOutput, SweepResult, SweepRow,
};
