//! Minimum-variance allocation and rolling backtests.

mod backtest;
mod weights;

pub use backtest::{
    annualized_mean, annualized_std, backtest, BacktestConfig, BacktestDay, BacktestEstimator, BacktestReport, Timing,
};
pub use weights::{min_var_weights, WeightVector, DEFAULT_FLOOR};
