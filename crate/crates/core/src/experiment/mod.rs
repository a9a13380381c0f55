//! Experiment configuration, seeded replication drivers and result files.

mod backtest_run;
mod config;
mod esd_compare;
mod ingest;
mod mc_rfl;
mod mp_curve;
mod scenario;
mod simulate;
mod stats;

pub use backtest_run::{run_backtest, weights_digest, write_backtest_outputs, BacktestOutcome, BacktestSummary};
pub use config::{
    design_one_clock, design_two_clock, BacktestKind, BacktestParams, EsdCompareParams, EsdEstimator,
    EstimatorParams, ExperimentConfig, ExperimentKind, McRflParams, MpCurveParams, RflEstimator, RflSetting,
    CONFIG_VERSION,
};
pub use esd_compare::{esd_replication, run_esd_compare, write_esd_outputs, EsdOutcome, EsdReplication, EsdSummary};
pub use ingest::{bucket_trades, ingest_ticks, ingest_ticks_with, stamp_count, IngestOptions};
pub use mc_rfl::{rfl_replication, run_mc_rfl, setting_lambdas, write_rfl_outputs, RflOutcome, RflRow, RflSummary};
pub use mp_curve::{run_mp_curve, write_mp_outputs, MpCurve};
pub use scenario::{simulate_config, simulate_scenario, Scenario};
pub use simulate::{run_simulate, write_simulation, DayTargets};
pub use stats::mean_std;
