use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Deterministic mean-reversion target `μ_t` of the volatility process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MuFn {
    /// `2·sqrt(0.0009 + 0.0008·cos 2πt)`: high at the open and close.
    #[default]
    UShaped,
    Constant { level: f64 },
}

impl MuFn {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            MuFn::UShaped => 2.0 * (0.0009 + 0.0008 * (2.0 * std::f64::consts::PI * t).cos()).sqrt(),
            MuFn::Constant { level } => *level,
        }
    }
}

/// Ornstein–Uhlenbeck type volatility `dγ = -ρ(γ - μ_t)dt + σ dW̃`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaSpec {
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default)]
    pub mu: MuFn,
    /// Starting level; `μ_0` when absent.
    #[serde(default)]
    pub gamma0: Option<f64>,
}

fn default_rho() -> f64 {
    10.0
}

fn default_sigma() -> f64 {
    0.05
}

impl Default for GammaSpec {
    fn default() -> Self {
        Self { rho: default_rho(), sigma: default_sigma(), mu: MuFn::UShaped, gamma0: None }
    }
}

impl GammaSpec {
    /// Constant volatility `γ ≡ level`.
    pub fn constant(level: f64) -> Self {
        Self { rho: 1.0, sigma: 0.0, mu: MuFn::Constant { level }, gamma0: Some(level) }
    }

    pub fn initial(&self) -> f64 {
        self.gamma0.unwrap_or_else(|| self.mu.eval(0.0))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) {
            return Err(Error::InvalidSpec(format!("gamma rho must be positive, got {}", self.rho)));
        }
        if !(self.sigma >= 0.0) {
            return Err(Error::InvalidSpec(format!("gamma sigma must be non-negative, got {}", self.sigma)));
        }
        Ok(())
    }
}
