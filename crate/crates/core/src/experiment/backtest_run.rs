use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ingest::{ingest_ticks_with, IngestOptions};
use super::scenario::simulate_config;
use super::{BacktestKind, ExperimentConfig};
use crate::portfolio::{backtest, BacktestConfig, BacktestEstimator, BacktestReport, Timing};
use crate::shrinkage::spot_window;
use crate::sim::{build_lambda, sigma_breve};
use crate::tick::TickPanel;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestSummary {
    pub estimator: BacktestKind,
    pub window_days: usize,
    pub timing: Timing,
    pub days: usize,
    pub annual_return: f64,
    pub annual_std: f64,
    pub sharpe: f64,
    pub ame: f64,
}

impl BacktestSummary {
    fn new(kind: BacktestKind, report: &BacktestReport) -> Self {
        Self {
            estimator: kind,
            window_days: report.window_days,
            timing: report.timing,
            days: report.days.len(),
            annual_return: report.annual_return,
            annual_std: report.annual_std,
            sharpe: report.sharpe,
            ame: report.ame,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BacktestOutcome {
    pub report: BacktestReport,
    pub summary: BacktestSummary,
}

fn load_days(dir: &Path, opts: &IngestOptions) -> Result<Vec<TickPanel>> {
    let mut files: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Ingestion(format!("no CSV files in {}", dir.display())));
    }
    files.iter().map(|f| ingest_ticks_with(f, opts)).collect()
}

/// Rolling backtest on ingested daily files, or on simulated days when no
/// data directory is configured.
pub fn run_backtest(cfg: &ExperimentConfig) -> Result<BacktestOutcome> {
    cfg.validate()?;
    let params = &cfg.backtest;
    let (panels, sigma, h, k_n, vartheta) = match &params.data_dir {
        Some(dir) => {
            let opts = IngestOptions {
                stamp_seconds: params.stamp_seconds,
                trim_open_minutes: params.trim_open_minutes,
                session_seconds: params.session_seconds,
            };
            let panels = load_days(dir, &opts)?;
            let n = panels[0].n();
            let minutes = |m: f64| ((m * 60.0 / params.stamp_seconds).round() as usize).max(1);
            let h = params.preavg_minutes.map_or_else(|| cfg.estimator.window(n), minutes);
            let k_n = params.k_n_minutes.map_or_else(|| cfg.estimator.spot_window(n), minutes);
            let vartheta = k_n as f64 / (n as f64).sqrt();
            (panels, None, h, k_n, vartheta)
        }
        None => {
            let scenario = simulate_config(cfg, cfg.seed)?;
            let sigma = sigma_breve(&build_lambda(&cfg.lambda)?);
            let n = cfg.n;
            let k_n = cfg.estimator.k_n.unwrap_or_else(|| spot_window(n, cfg.estimator.vartheta));
            (vec![scenario.panel], Some(sigma), cfg.estimator.window(n), k_n, cfg.estimator.vartheta)
        }
    };
    let estimator = match params.estimator {
        BacktestKind::EqualWeight => BacktestEstimator::EqualWeight,
        BacktestKind::PaAtva => BacktestEstimator::PaAtva,
        BacktestKind::OracleNs => BacktestEstimator::OracleNs {
            sigma_breve: sigma.ok_or_else(|| Error::Config("oracle NS needs simulated data".into()))?,
        },
        BacktestKind::Ans => BacktestEstimator::Ans { b: cfg.estimator.b, seed: cfg.seed },
        BacktestKind::Mns => BacktestEstimator::Mns { k_n, vartheta },
    };
    let config = BacktestConfig::new(estimator, params.window_days, params.timing, h);
    let report = backtest(&panels, &config)?;
    Ok(BacktestOutcome { summary: BacktestSummary::new(params.estimator, &report), report })
}

/// First 16 hex digits of the SHA-256 of the weights' little-endian bytes.
pub fn weights_digest(w: &[f64]) -> String {
    let mut hasher = Sha256::new();
    for v in w {
        hasher.update(v.to_le_bytes());
    }
    hex::encode(hasher.finalize())[..16].to_string()
}

/// `days.csv` and `report.json` under `dir`.
pub fn write_backtest_outputs(outcome: &BacktestOutcome, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("days.csv"))?;
    w.write_record(["date", "weights_digest", "return"])?;
    for d in &outcome.report.days {
        w.write_record([(d.day + 1).to_string(), weights_digest(&d.weights.w), d.ret.to_string()])?;
    }
    w.flush()?;
    std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(&outcome.summary)?)?;
    Ok(())
}
