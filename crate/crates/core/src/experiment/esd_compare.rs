use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scenario::{simulate_config, stream};
use super::stats::mean_std;
use super::{EsdEstimator, ExperimentConfig};
use crate::seed::derive_seed;
use crate::spectral::{distance_grid, esd, max_esd_distance, sample_cov_reference};
use crate::tick::{a_atva, a_atva_pooled, atva, pa_atva_averages, stamp_average};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsdReplication {
    pub rep: usize,
    pub distance: f64,
    /// Distance between two independent references, when requested.
    pub noise_floor: Option<f64>,
    /// Sample size of the reference.
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsdSummary {
    pub estimator: EsdEstimator,
    pub p: usize,
    pub n: usize,
    pub reps: usize,
    pub mean: f64,
    pub std: f64,
    pub floor_mean: Option<f64>,
    pub floor_std: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct EsdOutcome {
    pub rows: Vec<EsdReplication>,
    pub summary: EsdSummary,
    /// `(x, F_estimate(x), F_reference(x))` of replication 0.
    pub grid: Vec<(f64, f64, f64)>,
}

/// One replication: simulate, estimate, draw the reference from the last
/// day's realized ICV and compare spectra.
pub fn esd_replication(cfg: &ExperimentConfig, rep: usize) -> Result<(EsdReplication, Vec<(f64, f64, f64)>)> {
    let seed = derive_seed(cfg.seed, rep as u64);
    let scenario = simulate_config(cfg, seed)?;
    let avgs = stamp_average(&scenario.panel);
    let last = scenario.paths.days.len() - 1;
    let n = cfg.n;
    let (estimate, samples) = match cfg.esd.estimator {
        EsdEstimator::Atva => (atva(&avgs)?.estimate, n / 2),
        EsdEstimator::AAtva => {
            let day = avgs.last_day();
            (a_atva(&day, &scenario.paths.days[last].clock, &cfg.estimator.breakpoints)?, n / 2)
        }
        EsdEstimator::AAtvaPooled => {
            let day = avgs.last_day();
            (a_atva_pooled(&day, &scenario.paths.days[last].clock, &cfg.estimator.breakpoints)?, n / 2)
        }
        EsdEstimator::PaAtva => {
            let h = cfg.estimator.window(n);
            (pa_atva_averages(&avgs, h)?.estimate, n / (2 * h))
        }
    };
    let icv = &scenario.paths.days[last].realized_icv;
    let reference = sample_cov_reference(icv, samples, derive_seed(seed, stream::REFERENCE))?;
    let e_est = esd(&estimate.matrix)?;
    let e_ref = esd(&reference.matrix)?;
    let distance = max_esd_distance(&e_est, &e_ref)?;
    let noise_floor = if cfg.esd.noise_floor {
        let other = sample_cov_reference(icv, samples, derive_seed(seed, stream::FLOOR))?;
        Some(max_esd_distance(&e_ref, &esd(&other.matrix)?)?)
    } else {
        None
    };
    let grid = distance_grid(&e_est, &e_ref)?;
    Ok((EsdReplication { rep, distance, noise_floor, samples }, grid))
}

/// `cfg.reps` independent replications of [`esd_replication`].
pub fn run_esd_compare(cfg: &ExperimentConfig) -> Result<EsdOutcome> {
    cfg.validate()?;
    let mut results = (0..cfg.reps).into_par_iter().map(|r| esd_replication(cfg, r)).collect::<Result<Vec<_>>>()?;
    let grid = std::mem::take(&mut results[0].1);
    let rows: Vec<EsdReplication> = results.into_iter().map(|(row, _)| row).collect();
    Ok(EsdOutcome { summary: summarize(cfg, &rows), rows, grid })
}

pub fn summarize(cfg: &ExperimentConfig, rows: &[EsdReplication]) -> EsdSummary {
    let d: Vec<f64> = rows.iter().map(|r| r.distance).collect();
    let (mean, std) = mean_std(&d);
    let floors: Option<Vec<f64>> = rows.iter().map(|r| r.noise_floor).collect();
    let floor = floors.map(|f| mean_std(&f));
    EsdSummary {
        estimator: cfg.esd.estimator,
        p: cfg.p,
        n: cfg.n,
        reps: rows.len(),
        mean,
        std,
        floor_mean: floor.map(|f| f.0),
        floor_std: floor.map(|f| f.1),
    }
}

/// `replications.csv`, `grid.csv` and `summary.json` under `dir`.
pub fn write_esd_outputs(outcome: &EsdOutcome, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("replications.csv"))?;
    w.write_record(["rep", "distance", "noise_floor", "samples"])?;
    for r in &outcome.rows {
        let floor = r.noise_floor.map(|f| f.to_string()).unwrap_or_default();
        w.write_record([r.rep.to_string(), r.distance.to_string(), floor, r.samples.to_string()])?;
    }
    w.flush()?;
    let mut g = csv::Writer::from_path(dir.join("grid.csv"))?;
    g.write_record(["x", "f_estimate", "f_reference"])?;
    for (x, a, b) in &outcome.grid {
        g.write_record([x.to_string(), a.to_string(), b.to_string()])?;
    }
    g.flush()?;
    std::fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&outcome.summary)?)?;
    Ok(())
}
