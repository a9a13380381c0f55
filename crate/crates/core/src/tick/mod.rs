//! Multi-transaction data model and the realized covariance estimators.

mod averages;
mod estimators;
mod increments;
pub mod io;
mod panel;

pub use averages::{stamp_average, StampAverages};
pub use estimators::{
    a_atva, a_atva_pooled, atva, normalized_scatter, pa_atva, pa_atva_averages, pa_atva_series, piece_ends, rcv,
    self_normalized, theta_hat, tva, Atva, CovEstimate, EstimatorTag, PaAtva,
};
pub(crate) use estimators::symmetrize;
pub use increments::{default_window, increments, pre_average, IncrementKind, IncrementSeries, Parity};
pub use panel::TickPanel;
