//! End-to-end experiments: baseline filtering, noise sweeps, decile
//! analysis, the beta/WER curve and their reports.

mod config;
mod deciles;
mod report;
mod sweep;

pub use config::{ExperimentKind, RunConfig, SweepConfig};
pub use deciles::{decile_report, Decile, DecileReport};
pub use report::{
    export_sweep, read_sweep_aggregates, read_sweep_rows, sweep_svg, wer_svg, write_deciles,
    write_filter_report, write_sweep_aggregates, write_sweep_rows, write_wer_curve,
};
pub use sweep::{
    aggregate_rows, baseline_similarities, beta_wer_curve, filter_pairs, run_sweep, FilterReport,
    SweepAggregate, SweepResult, SweepRow, WerPoint,
};
