//! Experiment runner: TOML configs, network preparation, parallel
//! replications, NRMSE tables and figure-data export.

mod config;
mod figures;
mod network;
mod run;

pub use config::{Budget, ExperimentConfig, NetworkSource, RrziSettings};
pub use figures::{emit_figure_data, figure_rows, read_figure, write_figure, FigureRow};
pub use network::{
    load_hybrid_files, prepare_network, write_hybrid_files, GeoLayer, PreparedNetwork,
};
pub use run::{
    cells, run_experiment, run_prepared, run_replications, summarize, walk_start, Cell, Outcome,
    Reference, ResultRow, ResultTable, RunSettings,
};
