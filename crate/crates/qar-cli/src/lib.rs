//! Command-line companion to `qar-core`: configuration files, figure-style
//! parameter sweeps, zero-crossing searches, CSV/JSON emission, and a seeded
//! self-test suite over randomized parameter draws.
//!
//! Everything here is deterministic: sweeps evaluate their grids in parallel
//! but emit in grid order, and the self-test draws come from a fixed-seed
//! generator, so identical invocations produce identical bytes.

pub mod config;
pub mod emit;
pub mod error;
pub mod presets;
pub mod selftest;
pub mod sweep;

pub use config::Config;
pub use error::CliError;
pub use presets::{preset, FigureId, FigurePreset};
pub use sweep::{find_zero_crossings, run_sweep, RowData, SweepRow, SweepSpec, SweepTable, Variable};
