use std::path::Path;

use serde::{Deserialize, Serialize};

use super::scenario::{simulate_config, Scenario};
use super::ExperimentConfig;
use crate::seed::derive_seed;
use crate::sim::realized_targets;
use crate::tick::io::{save_panel, spec_digest, write_cov, PanelMeta};
use crate::tick::{CovEstimate, EstimatorTag};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayTargets {
    pub day: usize,
    pub theta: f64,
    pub theta_tilde_f: f64,
}

/// Simulates replication `rep` of the configured model.
pub fn run_simulate(cfg: &ExperimentConfig, rep: usize) -> Result<Scenario> {
    cfg.validate()?;
    simulate_config(cfg, derive_seed(cfg.seed, rep as u64))
}

/// Writes `panel_<rep>.csv` with its JSON sidecar, `icv_<rep>_<day>.csv`
/// and `targets_<rep>.json` under `dir`.
pub fn write_simulation(cfg: &ExperimentConfig, rep: usize, scenario: &Scenario, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let panel = &scenario.panel;
    let meta = PanelMeta {
        p: panel.p(),
        n: panel.n(),
        days: panel.days(),
        seed: derive_seed(cfg.seed, rep as u64),
        spec_digest: spec_digest(cfg)?,
    };
    save_panel(panel, &meta, &dir.join(format!("panel_{rep:04}.csv")), &dir.join(format!("panel_{rep:04}.json")))?;
    let mut targets = Vec::new();
    for (d, day) in scenario.paths.days.iter().enumerate() {
        let est = CovEstimate { n: panel.n(), ..CovEstimate::new(day.realized_icv.clone(), EstimatorTag::Reference) };
        let file = std::fs::File::create(dir.join(format!("icv_{rep:04}_{:03}.csv", d + 1)))?;
        write_cov(&est, std::io::BufWriter::new(file))?;
        let t = realized_targets(day);
        targets.push(DayTargets { day: d + 1, theta: t.theta, theta_tilde_f: t.theta_tilde_f });
    }
    std::fs::write(dir.join(format!("targets_{rep:04}.json")), serde_json::to_string_pretty(&targets)?)?;
    Ok(())
}
