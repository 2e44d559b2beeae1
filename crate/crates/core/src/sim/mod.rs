//! Discrete-event model of a live transcoder migration across two switches.

mod config;
mod engine;
mod gap;
mod queue;
mod sweep;
mod testbed;
mod trace;

pub use config::{ConfigError, MigrationKind, SimConfig};
pub use engine::{
    client_deltas, run_migration, run_migration_on, run_of_migration, run_standard_migration, run_stream, SimError,
    SimRun,
};
pub use gap::{measure_gap, GapReport, IncompleteMigration};
pub use queue::EventQueue;
pub use sweep::{summarize, sweep, GapStats, SweepCell};
pub use testbed::{
    Addresses, Attachment, FabricChange, Host, OfStep, SwitchSel, Testbed, TestbedError, CLIENT_PORT, CUTOVER_FLOWS,
    DUPLICATION_FLOWS, MIGRATION_FLOWS, MIGRATION_FLOWS_PRINTED, SERVER_PORT, SW1_LINK_PORT, SW2_LINK_PORT, T1_PORT,
    T2_PORT,
};
pub use trace::{
    ClientRecord, IgnoreReason, Site, SwitchOutcome, Trace, TraceEvent, TraceKind, TranscoderState, VideoAudit,
};
