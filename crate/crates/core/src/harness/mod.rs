//! Experiment orchestration: configuration, seeding, parallel sampling and
//! output files.

pub mod config;
pub mod run;
pub mod seed;
pub mod verify;

pub use config::{parse_config, ConfigError, ExperimentConfig, Observable};
pub use run::{
    cells, run_experiment, summary_json, write_outputs, Cell, HarnessError, RunOutput,
    SampleRecord, Summary, SCHEMA_VERSION,
};
pub use seed::sample_seed;
