//! Experiment orchestration: seeded replications, summaries with 99%
//! intervals, and the CSV files consumed by plotting scripts.

mod checkpoints;
mod config;
mod io;
mod simulate;
mod summary;

pub use checkpoints::CheckpointSpec;
pub use config::{
    algo_of_run_dir, run_experiment, trace_file_name, ExperimentConfig, ExperimentOutput,
    InstanceConfig,
};
pub use io::writer as csv_writer;
pub use io::{
    emit_plot_data, fmt_real, read_plot_data, read_summary, write_summary, write_trace, PlotRow,
    PlotSeries, PLOT_HEADER, SUMMARY_HEADER, TRACE_HEADER,
};
pub use simulate::{final_regrets, run_replications, simulate_run};
pub use summary::{mean_ci, summarize, SummaryRow, Z_99};
