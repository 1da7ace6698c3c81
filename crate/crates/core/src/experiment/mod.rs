//! Config-driven Monte-Carlo experiments and inspection helpers.

mod config;
mod inspect;
mod seed;
mod sweep;

pub use config::{ExperimentConfig, NoiseReference, SweepAxis};
pub use inspect::{inspect_codebook, inspect_pattern, CodebookSelector};
pub use seed::{split_seed, splitmix64};
pub use sweep::{run_sweep, write_csv, DerivedConstants, RunManifest, SweepOutput, CSV_HEADER};
