//! Experiment configuration, the cross-estimator comparison with its
//! inequality verdicts, the sup/inf sweep over pair families, and report
//! artifacts.

mod compare;
mod config;
mod crofton_series;
mod output;
mod pairs;
mod sweep;

pub use compare::{
    capacity_csv, compare_entropies, run_bar, run_capacity, run_cat, run_volume, CompareFailure,
    ComparisonReport, ComparisonSeries, Verdict,
};
pub use config::{
    parse_curve, BarSchedule, CapacityMode, CapacitySchedule, CroftonSpec, ExperimentConfig,
    VolumeSchedule, DEFAULT_CURVE_TOLERANCE, DEFAULT_TOLERANCE,
};
pub use crofton_series::{crofton_series, CroftonRow, CroftonSeries};
pub use output::{csv_field, write_artifacts};
pub use pairs::{crossing_count, PairSpec};
pub use sweep::{sup_inf_sweep, SweepRow, SweepTable};
