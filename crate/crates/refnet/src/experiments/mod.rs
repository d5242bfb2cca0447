//! Monte Carlo sweeps over `(n, c)` and random-digraph statistics.

mod laws;
mod stats;
mod sweep;

pub use laws::{estimate_graph_laws, rho_of_c, LawError, LawReport, MeanSe};
pub use stats::{cell_stats, stats_from_records, write_stats_csv, CellStats, StatsError};
pub use sweep::{
    cell_seed, measure, read_records_csv, run_single, run_sweep, write_records_csv, ConfigError,
    SweepConfig, SweepRecord,
};
