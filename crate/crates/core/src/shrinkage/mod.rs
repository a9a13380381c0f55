//! Rotation-equivariant nonlinear shrinkage of integrated covariance.

mod ans;
mod mns;
mod ns;

pub use crate::spectral::SpectralDecomp;
pub use ans::{ans, ans_xi, candidate_set, permutation, raw_candidates, AnsOptions, SplitPlan};
pub use mns::{apa_spot, mns, spot_window};
pub use ns::{ns_with, oracle_ns, rfl, EigenvalueProvider, Oracle, Supplied};
