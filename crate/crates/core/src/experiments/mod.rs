//! Loops and surfaces, per-sample observables, batched-means statistics,
//! the experiment runner with CSV output, and SVG renders.

pub mod config;
pub mod loops;
pub mod observables;
pub mod render;
pub mod run;
pub mod stats;

pub use config::{ConfigError, ExperimentConfig, LoopEntry, Resolved};
pub use loops::{Loop, LoopError, LoopSpec};
pub use observables::{ClockSample, GaugeSample, LoopObservables, ObservableError};
pub use render::{count_class, render_pair, render_sigma, RenderError};
pub use run::{
    run_experiment, run_resolved, write_csv, write_csv_file, ExperimentError, ExperimentOutput,
    ResultRow, Series, CSV_COLUMNS,
};
pub use stats::{batched_means, batched_means_real, Estimate};
