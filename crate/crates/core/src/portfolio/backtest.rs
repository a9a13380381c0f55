use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{min_var_weights, WeightVector, DEFAULT_FLOOR};
use crate::shrinkage::{ans, mns, oracle_ns, AnsOptions};
use crate::spectral::SpectralDecomp;
use crate::tick::{pa_atva_series, pre_average, self_normalized, stamp_average, theta_hat, IncrementSeries, StampAverages, TickPanel};
use crate::{Error, Matrix, Result};

/// Which stamp averages delimit a daily return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Timing {
    /// First stamp average of day `i` to first of day `i + 1`.
    OpenOpen,
    /// Last stamp average of day `i - 1` to last of day `i`.
    CloseClose,
}

/// Covariance model behind the weights.
#[derive(Debug, Clone, PartialEq)]
pub enum BacktestEstimator {
    EqualWeight,
    PaAtva,
    /// Oracle shrinkage against a known `Σ̆` (simulation only).
    OracleNs { sigma_breve: Matrix },
    Ans { b: usize, seed: u64 },
    Mns { k_n: usize, vartheta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestConfig {
    pub estimator: BacktestEstimator,
    pub window_days: usize,
    pub timing: Timing,
    /// Pre-averaging window in stamps.
    pub h: usize,
    pub trading_days: f64,
    pub floor: f64,
}

impl BacktestConfig {
    pub fn new(estimator: BacktestEstimator, window_days: usize, timing: Timing, h: usize) -> Self {
        Self { estimator, window_days, timing, h, trading_days: 252.0, floor: DEFAULT_FLOOR }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestDay {
    /// 0-based index of the day whose return was earned.
    pub day: usize,
    pub weights: WeightVector,
    pub ret: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestReport {
    pub days: Vec<BacktestDay>,
    pub annual_return: f64,
    pub annual_std: f64,
    pub sharpe: f64,
    /// Mean over days of `max_i |w_i|`.
    pub ame: f64,
    pub window_days: usize,
    pub timing: Timing,
}

/// `base / count · Σ r`.
pub fn annualized_mean(returns: &[f64], base: f64) -> f64 {
    base / returns.len() as f64 * returns.iter().sum::<f64>()
}

/// `√base` times the sample standard deviation.
pub fn annualized_std(returns: &[f64], base: f64) -> f64 {
    let k = returns.len();
    if k < 2 {
        return 0.0;
    }
    let mean = returns.iter().sum::<f64>() / k as f64;
    let var = returns.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    (base * var).sqrt()
}

fn concat_days(series: &[IncrementSeries]) -> IncrementSeries {
    IncrementSeries::concat(series).expect("per-day series share their shape")
}

/// Rolling minimum-variance backtest: the weights for day `i` use only the
/// `ℓ` preceding days.
pub fn backtest(panels: &[TickPanel], config: &BacktestConfig) -> Result<BacktestReport> {
    let panel = TickPanel::concat(panels)?;
    let ell = config.window_days;
    let total = panel.days();
    if ell == 0 {
        return Err(Error::InvalidSpec("training window must be at least one day".into()));
    }
    if total < ell + 1 {
        return Err(Error::InsufficientData(format!("{total} days cannot support a {ell}-day window")));
    }
    if matches!(config.estimator, BacktestEstimator::Mns { .. }) && ell < 2 {
        return Err(Error::InvalidSpec("MNS needs a window of at least two days".into()));
    }
    let avgs = stamp_average(&panel);
    let needs_series = !matches!(config.estimator, BacktestEstimator::EqualWeight);
    let daily: Vec<IncrementSeries> = if needs_series {
        (0..total).map(|d| pre_average(&avgs.select_days(d..d + 1), config.h)).collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let n = panel.n();
    let ret_of = |i: usize| -> Option<Vec<f64>> {
        let (a, b) = match config.timing {
            Timing::CloseClose => (avgs.day(i - 1).column(n - 1), avgs.day(i).column(n - 1)),
            Timing::OpenOpen => {
                if i + 1 >= total {
                    return None;
                }
                (avgs.day(i).column(0), avgs.day(i + 1).column(0))
            }
        };
        Some((b - a).iter().copied().collect())
    };
    let eval_days: Vec<usize> = (ell..total).filter(|&i| config.timing == Timing::CloseClose || i + 1 < total).collect();
    if eval_days.is_empty() {
        return Err(Error::InsufficientData("no day has a complete open-to-open return".into()));
    }
    let days = eval_days
        .par_iter()
        .map(|&i| {
            let weights = weights_for(&avgs, &daily, i, config)?;
            let r = ret_of(i).expect("evaluation days have returns");
            Ok(BacktestDay { day: i, ret: weights.dot(&r), weights })
        })
        .collect::<Result<Vec<_>>>()?;
    let returns: Vec<f64> = days.iter().map(|d| d.ret).collect();
    let annual_return = annualized_mean(&returns, config.trading_days);
    let annual_std = annualized_std(&returns, config.trading_days);
    let ame = days.iter().map(|d| d.weights.max_abs()).sum::<f64>() / days.len() as f64;
    Ok(BacktestReport {
        annual_return,
        annual_std,
        sharpe: annual_return / annual_std,
        ame,
        window_days: ell,
        timing: config.timing,
        days,
    })
}

fn weights_for(avgs: &StampAverages, daily: &[IncrementSeries], i: usize, config: &BacktestConfig) -> Result<WeightVector> {
    let ell = config.window_days;
    let p = avgs.p();
    let estimate = match &config.estimator {
        BacktestEstimator::EqualWeight => return Ok(WeightVector::equal(p)),
        BacktestEstimator::PaAtva => pa_atva_series(&concat_days(&daily[i - ell..i]), avgs.is_synchronous())?.estimate.matrix,
        BacktestEstimator::OracleNs { sigma_breve } => {
            let window = concat_days(&daily[i - ell..i]);
            let decomp = SpectralDecomp::new(&self_normalized(&window)?)?;
            oracle_ns(&decomp, sigma_breve, theta_hat(&daily[i - 1]))?.matrix
        }
        BacktestEstimator::Ans { b, seed } => {
            let window = concat_days(&daily[i - ell..i]);
            let opts = AnsOptions { b: *b, seed: *seed, candidates: None };
            ans(&window, theta_hat(&daily[i - 1]), &opts)?.0.matrix
        }
        BacktestEstimator::Mns { k_n, vartheta } => {
            let window = concat_days(&daily[i - ell..i - 1]);
            let decomp = SpectralDecomp::new(&self_normalized(&window)?)?;
            mns(&decomp, &avgs.select_days(i - 1..i), *k_n, *vartheta)?.matrix
        }
    };
    min_var_weights(&estimate, config.floor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn panel_from_days(days: &[Vec<f64>], p: usize, n: usize) -> TickPanel {
        let prices: Vec<f64> = days.iter().flatten().copied().collect();
        TickPanel::from_parts(p, n, days.len(), vec![1; p * n * days.len()], prices).unwrap()
    }

    #[test]
    fn single_asset_close_to_close() {
        // one stock, 4 stamps per day, closes 1, 3, 4, 8
        let closes = [1.0, 3.0, 4.0, 8.0];
        let days: Vec<Vec<f64>> = closes.iter().map(|&c| vec![0.0, 0.5, -0.5, c]).collect();
        let panel = panel_from_days(&days, 1, 4);
        let cfg = BacktestConfig::new(BacktestEstimator::EqualWeight, 1, Timing::CloseClose, 1);
        let report = backtest(&[panel], &cfg).unwrap();
        assert_eq!(report.days.len(), 3);
        let rets: Vec<f64> = report.days.iter().map(|d| d.ret).collect();
        assert_eq!(rets, vec![2.0, 1.0, 4.0]);
        assert_eq!(report.annual_return, 252.0 / 3.0 * 7.0);
        assert_eq!(report.ame, 1.0);
    }

    #[test]
    fn open_to_open_drops_last_day() {
        let days: Vec<Vec<f64>> = (0..5).map(|d| vec![d as f64, 0.0, 0.0, 0.0]).collect();
        let panel = panel_from_days(&days, 1, 4);
        let cfg = BacktestConfig::new(BacktestEstimator::EqualWeight, 2, Timing::OpenOpen, 1);
        let report = backtest(&[panel], &cfg).unwrap();
        assert_eq!(report.days.len(), 2);
        assert!(report.days.iter().all(|d| d.ret == 1.0));
    }

    #[test]
    fn insufficient_days() {
        let panel = panel_from_days(&[vec![0.0; 4]], 1, 4);
        let cfg = BacktestConfig::new(BacktestEstimator::EqualWeight, 1, Timing::CloseClose, 1);
        assert!(matches!(backtest(&[panel], &cfg), Err(Error::InsufficientData(_))));
    }
}
