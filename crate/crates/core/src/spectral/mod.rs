//! Spectral distributions, the Marčenko–Pastur equation and sample
//! covariance references.

mod decomp;
mod esd;
mod mp;
mod reference;

pub use decomp::SpectralDecomp;
pub use esd::{asymmetry, distance_grid, esd, max_esd_distance, Esd};
pub use mp::{
    linspace, mp_closed_form_density, mp_density, mp_edges, mp_map, mp_residual, mp_stieltjes, DiscreteMeasure,
    MpOptions, MpSolution,
};
pub use reference::{psd_sqrt, sample_cov_reference};
