use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::portfolio::Timing;
use crate::sim::{ClockKind, ClockSpec, GammaSpec, LambdaSpec, NoiseSpec, PoissonPiece};
use crate::tick::default_window;
use crate::{Error, Result};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Simulate,
    EsdCompare,
    McRfl,
    Backtest,
    MpCurve,
}

/// Busy first and last hour around a quieter session:
/// `L_i - 1 ~ Poisson(20)` then `Poisson(5)` then `Poisson(20)`.
pub fn design_one_clock() -> ClockKind {
    let edge = 1.0 / 6.5;
    ClockKind::PiecewisePoisson {
        pieces: vec![
            PoissonPiece { fraction: edge, lambda: 20.0 },
            PoissonPiece { fraction: 1.0 - 2.0 * edge, lambda: 5.0 },
            PoissonPiece { fraction: edge, lambda: 20.0 },
        ],
    }
}

/// Per-stock `U{1, …, L_i}` thinning of [`design_one_clock`].
pub fn design_two_clock() -> ClockSpec {
    ClockSpec::per_stock_uniform(design_one_clock())
}

/// Knobs shared by the estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimatorParams {
    /// Pre-averaging window; `⌊ξ n^β⌋` when absent.
    pub h: Option<usize>,
    pub xi: f64,
    pub beta: f64,
    /// Spot window; `⌊ϑ √n⌋` when absent.
    pub k_n: Option<usize>,
    pub vartheta: f64,
    /// ANS permutations.
    pub b: usize,
    /// A-ATVA piece ends in `(0, 1]`.
    pub breakpoints: Vec<f64>,
}

impl Default for EstimatorParams {
    fn default() -> Self {
        Self { h: None, xi: 1.0, beta: 0.55, k_n: None, vartheta: 0.75, b: 50, breakpoints: vec![1.0] }
    }
}

impl EstimatorParams {
    pub fn window(&self, n: usize) -> usize {
        self.h.unwrap_or_else(|| default_window(n, self.xi, self.beta))
    }

    pub fn spot_window(&self, n: usize) -> usize {
        self.k_n.unwrap_or_else(|| crate::shrinkage::spot_window(n, self.vartheta))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EsdEstimator {
    Atva,
    AAtva,
    /// A-ATVA with the correction averaged across stocks.
    AAtvaPooled,
    PaAtva,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EsdCompareParams {
    pub estimator: EsdEstimator,
    /// Also measure the distance between two independent references.
    pub noise_floor: bool,
}

impl Default for EsdCompareParams {
    fn default() -> Self {
        Self { estimator: EsdEstimator::AAtva, noise_floor: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RflSetting {
    I,
    II,
    III,
    IV,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RflEstimator {
    /// Oracle shrinkage with the true `Σ̆` of the last day.
    Ns,
    /// ANS with the `index`-th (1-based) entry of the candidate list.
    AnsFixed { index: usize },
    /// ANS with the split chosen by the criterion.
    Ans,
    Mns,
    PaAtva,
    /// The realized ICV itself.
    Icv,
}

impl RflEstimator {
    pub fn label(&self) -> String {
        match self {
            RflEstimator::Ns => "NS".into(),
            RflEstimator::AnsFixed { index } => format!("ANS{index}"),
            RflEstimator::Ans => "ANS".into(),
            RflEstimator::Mns => "MNS".into(),
            RflEstimator::PaAtva => "PA-ATVA".into(),
            RflEstimator::Icv => "ICV".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McRflParams {
    pub settings: Vec<RflSetting>,
    pub estimators: Vec<RflEstimator>,
    /// Days of data; the last one is the target day.
    pub tau: usize,
    /// Rescale the Toeplitz factor of setting I to `tr(ΛΛᵀ) = p`.
    pub rescale_setting_one: bool,
}

impl Default for McRflParams {
    fn default() -> Self {
        Self {
            settings: vec![RflSetting::I, RflSetting::II, RflSetting::III, RflSetting::IV],
            estimators: vec![RflEstimator::Ns, RflEstimator::AnsFixed { index: 7 }, RflEstimator::Mns],
            tau: 2,
            rescale_setting_one: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BacktestKind {
    EqualWeight,
    PaAtva,
    /// Simulation only: needs the true `Σ̆`.
    OracleNs,
    Ans,
    Mns,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BacktestParams {
    pub estimator: BacktestKind,
    pub window_days: usize,
    pub timing: Timing,
    /// Real-data windows in minutes, converted with `stamp_seconds`.
    pub preavg_minutes: Option<f64>,
    pub k_n_minutes: Option<f64>,
    pub stamp_seconds: f64,
    pub trim_open_minutes: f64,
    pub session_seconds: f64,
    /// Directory of daily CSV files; simulate when absent.
    pub data_dir: Option<PathBuf>,
}

impl Default for BacktestParams {
    fn default() -> Self {
        Self {
            estimator: BacktestKind::Mns,
            window_days: 10,
            timing: Timing::CloseClose,
            preavg_minutes: None,
            k_n_minutes: None,
            stamp_seconds: 1.0,
            trim_open_minutes: 5.0,
            session_seconds: 23400.0,
            data_dir: None,
        }
    }
}

impl BacktestParams {
    /// Defaults for exchange data: 15-minute pre-averaging, 6-minute spot
    /// window.
    pub fn real_data(data_dir: PathBuf) -> Self {
        Self { preavg_minutes: Some(15.0), k_n_minutes: Some(6.0), data_dir: Some(data_dir), ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MpCurveParams {
    pub c: f64,
    /// Population eigenvalues with uniform weight; the spectrum of
    /// `ΛΛᵀ` from the lambda spec when absent.
    pub support: Option<Vec<f64>>,
    pub scale: f64,
    pub grid_points: usize,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub eta: Option<f64>,
}

impl Default for MpCurveParams {
    fn default() -> Self {
        Self { c: 0.5, support: None, scale: 1.0, grid_points: 512, lo: None, hi: None, eta: None }
    }
}

fn default_version() -> u32 {
    CONFIG_VERSION
}

fn one() -> usize {
    1
}

fn default_p() -> usize {
    100
}

fn default_n() -> usize {
    390
}

fn default_clock() -> ClockSpec {
    ClockSpec::constant(1)
}

fn default_lambda() -> LambdaSpec {
    LambdaSpec::toeplitz(default_p())
}

/// A complete, versioned experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_version")]
    pub version: u32,
    pub kind: ExperimentKind,
    #[serde(default = "default_p")]
    pub p: usize,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "one")]
    pub days: usize,
    #[serde(default = "default_clock")]
    pub clock: ClockSpec,
    #[serde(default)]
    pub noise: NoiseSpec,
    #[serde(default)]
    pub gamma: GammaSpec,
    #[serde(default = "default_lambda")]
    pub lambda: LambdaSpec,
    #[serde(default)]
    pub estimator: EstimatorParams,
    #[serde(default = "one")]
    pub reps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub esd: EsdCompareParams,
    #[serde(default)]
    pub mc_rfl: McRflParams,
    #[serde(default)]
    pub backtest: BacktestParams,
    #[serde(default)]
    pub mp_curve: MpCurveParams,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, p: usize, n: usize) -> Self {
        Self {
            version: CONFIG_VERSION,
            kind,
            p,
            n,
            days: 1,
            clock: default_clock(),
            noise: NoiseSpec::None,
            gamma: GammaSpec::default(),
            lambda: LambdaSpec::toeplitz(p),
            estimator: EstimatorParams::default(),
            reps: 1,
            seed: 0,
            out_dir: None,
            esd: EsdCompareParams::default(),
            mc_rfl: McRflParams::default(),
            backtest: BacktestParams::default(),
            mp_curve: MpCurveParams::default(),
        }
    }

    /// Default experiment of each kind, sized for a desk run.
    pub fn preset(kind: ExperimentKind) -> Self {
        match kind {
            ExperimentKind::Simulate | ExperimentKind::EsdCompare => {
                let mut cfg = Self::new(kind, 100, 390);
                cfg.clock = ClockSpec::shifted_poisson(5.0);
                cfg
            }
            ExperimentKind::McRfl => {
                let mut cfg = Self::new(kind, 30, 23400);
                cfg.clock = design_two_clock();
                cfg.noise = NoiseSpec::iid(0.0002);
                cfg
            }
            ExperimentKind::Backtest => {
                let mut cfg = Self::new(kind, 30, 390);
                cfg.days = 30;
                cfg.clock = ClockSpec::new(design_one_clock());
                cfg.noise = NoiseSpec::iid(0.0002);
                cfg
            }
            ExperimentKind::MpCurve => Self::new(kind, 100, 390),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.version != CONFIG_VERSION {
            return bad(format!("unsupported config version {}, expected {CONFIG_VERSION}", self.version));
        }
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if self.p == 0 || self.n < 2 || self.days == 0 {
            return bad(format!("need p >= 1, n >= 2, days >= 1 (got {}, {}, {})", self.p, self.n, self.days));
        }
        if self.lambda.dimension() != self.p && self.kind != ExperimentKind::McRfl {
            return bad(format!("lambda dimension {} differs from p = {}", self.lambda.dimension(), self.p));
        }
        let spec = |r: Result<()>| r.map_err(|e| Error::Config(e.to_string()));
        spec(self.clock.validate())?;
        spec(self.noise.validate())?;
        spec(self.gamma.validate())?;
        if self.estimator.b == 0 {
            return bad("ANS needs b >= 1".into());
        }
        if !(self.estimator.vartheta > 0.0) || !(self.estimator.xi > 0.0) {
            return bad("vartheta and xi must be positive".into());
        }
        if self.kind == ExperimentKind::McRfl && self.mc_rfl.tau < 2 {
            return bad("mc-rfl needs tau >= 2 days".into());
        }
        if self.kind == ExperimentKind::MpCurve && !(self.mp_curve.c > 0.0) {
            return bad("mp-curve needs c > 0".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_json_uses_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"kind": "esd-compare", "p": 10, "lambda": {"kind": "toeplitz_half", "p": 10}}"#)
            .unwrap();
        assert_eq!(cfg.n, 390);
        assert_eq!(cfg.estimator.b, 50);
        assert_eq!(cfg.estimator.vartheta, 0.75);
        assert_eq!(cfg.estimator.window(23400), 252);
        assert_eq!(cfg.estimator.spot_window(23400), 114);
    }

    #[test]
    fn roundtrip() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::McRfl, 30, 23400);
        cfg.clock = design_two_clock();
        cfg.noise = NoiseSpec::iid(0.0002);
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(ExperimentConfig::from_json("{"), Err(Error::Config(_))));
        assert!(ExperimentConfig::from_json(r#"{"kind": "simulate", "version": 2}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"kind": "simulate", "reps": 0}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"kind": "simulate", "p": 5}"#).is_err());
    }
}
