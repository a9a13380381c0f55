use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::LatentPaths;
use crate::seed::rng_for;
use crate::tick::TickPanel;
use crate::{Error, Result};

/// Additive microstructure noise `Y = X + ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpec {
    #[default]
    None,
    IidGaussian {
        #[serde(default = "default_variance")]
        variance: f64,
    },
    /// `ε_k = φ ε_{k-1} + η_k` along each stock's transaction sequence,
    /// started from the stationary law every day.
    Ar1 { phi: f64, innovation_variance: f64 },
}

fn default_variance() -> f64 {
    0.0002
}

impl NoiseSpec {
    pub fn iid(variance: f64) -> Self {
        NoiseSpec::IidGaussian { variance }
    }

    /// AR(1) with the given stationary variance.
    pub fn ar1_stationary(phi: f64, variance: f64) -> Self {
        NoiseSpec::Ar1 { phi, innovation_variance: variance * (1.0 - phi * phi) }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseSpec::None => Ok(()),
            NoiseSpec::IidGaussian { variance } if variance >= 0.0 && variance.is_finite() => Ok(()),
            NoiseSpec::IidGaussian { variance } => {
                Err(Error::InvalidSpec(format!("noise variance {variance} must be non-negative")))
            }
            NoiseSpec::Ar1 { phi, innovation_variance } => {
                if !(phi.abs() < 1.0) {
                    return Err(Error::InvalidSpec(format!("AR(1) coefficient {phi} must lie in (-1, 1)")));
                }
                if !(innovation_variance >= 0.0) || !innovation_variance.is_finite() {
                    return Err(Error::InvalidSpec(format!(
                        "AR(1) innovation variance {innovation_variance} must be non-negative"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Observed prices: latent prices plus noise drawn from `spec`.
pub fn add_noise(paths: &LatentPaths, spec: &NoiseSpec, seed: u64) -> Result<TickPanel> {
    spec.validate()?;
    let latent = &paths.latent;
    match *spec {
        NoiseSpec::None => Ok(latent.clone()),
        NoiseSpec::IidGaussian { variance } => {
            let sd = variance.sqrt();
            let mut rng = rng_for(seed, u64::MAX);
            Ok(latent.map_prices(|x| {
                let z: f64 = rng.sample(StandardNormal);
                x + sd * z
            }))
        }
        NoiseSpec::Ar1 { phi, innovation_variance } => {
            let (p, n) = (latent.p(), latent.n());
            let sd = innovation_variance.sqrt();
            let stationary_sd = (innovation_variance / (1.0 - phi * phi)).sqrt();
            let mut rng = rng_for(seed, u64::MAX - 1);
            let mut state = vec![0.0; p];
            let mut prices = Vec::with_capacity(latent.total_transactions());
            for d in 0..latent.days() {
                for s in state.iter_mut() {
                    let z: f64 = rng.sample(StandardNormal);
                    *s = stationary_sd * z;
                }
                let mut fresh = vec![true; p];
                for i in 0..n {
                    for q in 0..p {
                        for &x in latent.prices(d, i, q) {
                            if fresh[q] {
                                fresh[q] = false;
                            } else {
                                let z: f64 = rng.sample(StandardNormal);
                                state[q] = phi * state[q] + sd * z;
                            }
                            prices.push(x + state[q]);
                        }
                    }
                }
            }
            TickPanel::from_parts(p, n, latent.days(), latent.counts().to_vec(), prices)
        }
    }
}
