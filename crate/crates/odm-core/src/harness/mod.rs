//! Experiment orchestration: flat key=value configuration with recorded
//! defaults, seeded reproducible runs, checkpoint persistence, and metrics
//! emission.

pub mod checkpoint;
pub mod config;
pub mod experiments;
pub mod metrics;

pub use checkpoint::{load_checkpoint, save_checkpoint};
pub use config::RunConfig;
pub use experiments::{run_experiment, EXPERIMENTS};
