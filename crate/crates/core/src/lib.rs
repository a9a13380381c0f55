//! Estimation of high-dimensional integrated covariance matrices from
//! multi-transaction, noise-contaminated high-frequency prices.

pub mod error;
pub mod experiment;
pub mod portfolio;
pub mod seed;
pub mod shrinkage;
pub mod sim;
pub mod spectral;
pub mod tick;

pub use error::{Error, ErrorClass, Result};
pub use tick::{CovEstimate, EstimatorTag, TickPanel};

/// Dense real matrix used throughout.
pub type Matrix = nalgebra::DMatrix<f64>;
