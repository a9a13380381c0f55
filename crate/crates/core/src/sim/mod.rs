//! Synthetic class-C diffusions observed through multi-transaction clocks.

mod clock;
mod gamma;
mod lambda;
mod noise;
mod paths;
mod targets;

pub use clock::{generate_clock, Clock, ClockKind, ClockSpec, PoissonPiece};
pub use gamma::{GammaSpec, MuFn};
pub use lambda::{build_lambda, sigma_breve, LambdaKind, LambdaSpec};
pub use noise::{add_noise, NoiseSpec};
pub use paths::{simulate_paths, simulate_paths_by_day, DayPath, Drift, LatentPaths};
pub use targets::{realized_targets, RealizedTargets};
