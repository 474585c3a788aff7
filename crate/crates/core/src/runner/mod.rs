//! Configuration, initial data, the simulation loop, reference presets and
//! file output.

pub mod check;
pub mod config;
pub mod init;
pub mod output;
pub mod presets;
pub mod sim;

pub use check::{check, CheckReport};
pub use config::{
    DampingSpec, ForcingSpec, InitialSpec, NonConvergence, Overrides, SimulationConfig,
};
pub use presets::{preset, PRESET_NAMES};
pub use sim::{run, run_batch, run_batch_sequential, RunMetadata, Snapshot, TimeSeries};
