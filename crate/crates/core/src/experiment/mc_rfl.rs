use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scenario::{simulate_scenario, stream};
use super::stats::mean_std;
use super::{ExperimentConfig, RflEstimator, RflSetting};
use crate::seed::derive_seed;
use crate::shrinkage::{ans, mns, oracle_ns, raw_candidates, rfl, AnsOptions};
use crate::sim::{build_lambda, LambdaSpec};
use crate::spectral::SpectralDecomp;
use crate::tick::{pre_average, self_normalized, stamp_average, theta_hat, IncrementSeries};
use crate::{Error, Matrix, Result};

/// Per-day `Λ` of a setting over `tau` days; changes happen on the last day.
pub fn setting_lambdas(setting: RflSetting, p: usize, tau: usize, rescale_one: bool) -> Result<Vec<Matrix>> {
    let base = build_lambda(&LambdaSpec::spiked(p, vec![15.0, 10.0, 5.0]))?;
    let (early, last) = match setting {
        RflSetting::I => {
            let l = build_lambda(&LambdaSpec::toeplitz(p).with_rescale(rescale_one))?;
            (l.clone(), l)
        }
        RflSetting::II => (base.clone(), base),
        RflSetting::III => (base, build_lambda(&LambdaSpec::spiked(p, vec![30.0, 10.0, 5.0]))?),
        RflSetting::IV => (base, build_lambda(&LambdaSpec::spiked(p, vec![30.0]))?),
    };
    let mut out = vec![early; tau - 1];
    out.push(last);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RflRow {
    pub setting: RflSetting,
    pub rep: usize,
    pub estimator: String,
    pub rfl: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RflSummary {
    pub setting: RflSetting,
    pub estimator: String,
    pub reps: usize,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone)]
pub struct RflOutcome {
    pub rows: Vec<RflRow>,
    pub summary: Vec<RflSummary>,
}

impl RflOutcome {
    pub fn mean(&self, setting: RflSetting, estimator: &str) -> Option<f64> {
        self.summary.iter().find(|s| s.setting == setting && s.estimator == estimator).map(|s| s.mean)
    }
}

fn ans_fixed(series: &IncrementSeries, theta: f64, m1: usize, b: usize, seed: u64) -> Result<Matrix> {
    let opts = AnsOptions { b, seed, candidates: Some(vec![m1]) };
    Ok(ans(series, theta, &opts)?.0.matrix)
}

/// RFL of every configured estimator on one simulated `tau`-day sample.
pub fn rfl_replication(cfg: &ExperimentConfig, setting: RflSetting, rep: usize) -> Result<Vec<(RflEstimator, f64)>> {
    let params = &cfg.mc_rfl;
    let tau = params.tau;
    let seed = derive_seed(cfg.seed, rep as u64);
    let lambdas = setting_lambdas(setting, cfg.p, tau, params.rescale_setting_one)?;
    let scenario = simulate_scenario(cfg, &lambdas, seed)?;
    let last = &scenario.paths.days[tau - 1];
    let icv = &last.realized_icv;
    let avgs = stamp_average(&scenario.panel);
    let n = cfg.n;
    let series = pre_average(&avgs, cfg.estimator.window(n))?;
    let theta = theta_hat(&series.last_day());
    let xi = self_normalized(&series.last_day())?;
    let perm_seed = derive_seed(seed, stream::PERMUTATIONS);
    let mut decomp_last: Option<SpectralDecomp> = None;
    let mut out = Vec::with_capacity(params.estimators.len());
    for &est in &params.estimators {
        let matrix = match est {
            RflEstimator::Icv => icv.clone(),
            RflEstimator::PaAtva => &xi * theta,
            RflEstimator::Ns => {
                if decomp_last.is_none() {
                    decomp_last = Some(SpectralDecomp::new(&xi)?);
                }
                oracle_ns(decomp_last.as_ref().expect("just set"), &last.sigma_breve, theta)?.matrix
            }
            RflEstimator::AnsFixed { index } => {
                let cands = raw_candidates(series.len());
                let m1 = *cands
                    .get(index.wrapping_sub(1))
                    .ok_or_else(|| Error::Config(format!("ANS index {index} outside 1..=7")))?;
                ans_fixed(&series, theta, m1, cfg.estimator.b, perm_seed)?
            }
            RflEstimator::Ans => {
                let opts = AnsOptions { b: cfg.estimator.b, seed: perm_seed, candidates: None };
                ans(&series, theta, &opts)?.0.matrix
            }
            RflEstimator::Mns => {
                let early = IncrementSeries::concat(&(0..tau - 1).map(|d| series.day(d)).collect::<Vec<_>>())?;
                let decomp = SpectralDecomp::new(&self_normalized(&early)?)?;
                mns(&decomp, &avgs.last_day(), cfg.estimator.spot_window(n), cfg.estimator.vartheta)?.matrix
            }
        };
        out.push((est, rfl(&matrix, icv)?));
    }
    Ok(out)
}

/// Relative Frobenius loss table over settings, estimators and replications.
pub fn run_mc_rfl(cfg: &ExperimentConfig) -> Result<RflOutcome> {
    cfg.validate()?;
    let jobs: Vec<(RflSetting, usize)> =
        cfg.mc_rfl.settings.iter().flat_map(|&s| (0..cfg.reps).map(move |r| (s, r))).collect();
    let results = jobs
        .par_iter()
        .map(|&(s, r)| rfl_replication(cfg, s, r).map(|v| (s, r, v)))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (setting, rep, values) in results {
        for (est, value) in values {
            rows.push(RflRow { setting, rep, estimator: est.label(), rfl: value });
        }
    }
    Ok(RflOutcome { summary: summarize(cfg, &rows), rows })
}

pub fn summarize(cfg: &ExperimentConfig, rows: &[RflRow]) -> Vec<RflSummary> {
    let mut out = Vec::new();
    for &setting in &cfg.mc_rfl.settings {
        for est in &cfg.mc_rfl.estimators {
            let label = est.label();
            let v: Vec<f64> = rows.iter().filter(|r| r.setting == setting && r.estimator == label).map(|r| r.rfl).collect();
            let (mean, std) = mean_std(&v);
            out.push(RflSummary { setting, estimator: label, reps: v.len(), mean, std });
        }
    }
    out
}

/// `replications.csv` and `summary.json` under `dir`.
pub fn write_rfl_outputs(outcome: &RflOutcome, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("replications.csv"))?;
    w.write_record(["setting", "rep", "estimator", "rfl"])?;
    for r in &outcome.rows {
        w.write_record([format!("{:?}", r.setting), r.rep.to_string(), r.estimator.clone(), r.rfl.to_string()])?;
    }
    w.flush()?;
    std::fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&outcome.summary)?)?;
    Ok(())
}
