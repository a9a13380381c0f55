use super::ExperimentConfig;
use crate::seed::derive_seed;
use crate::sim::{add_noise, build_lambda, generate_clock, simulate_paths_by_day, LatentPaths};
use crate::tick::TickPanel;
use crate::{Matrix, Result};

/// Stream indices under a replication seed.
pub(crate) mod stream {
    pub const PATHS: u64 = 1;
    pub const NOISE: u64 = 2;
    pub const REFERENCE: u64 = 3;
    pub const FLOOR: u64 = 4;
    pub const PERMUTATIONS: u64 = 5;
    pub const CLOCK: u64 = 100;
}

/// Simulated latent paths and the observed panel built from them.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub paths: LatentPaths,
    pub panel: TickPanel,
}

/// Simulates `lambdas.len()` days of the configured model under `seed`.
pub fn simulate_scenario(cfg: &ExperimentConfig, lambdas: &[Matrix], seed: u64) -> Result<Scenario> {
    let clocks = (0..lambdas.len())
        .map(|d| generate_clock(&cfg.clock, cfg.n, cfg.p, derive_seed(seed, stream::CLOCK + d as u64)))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&Matrix> = lambdas.iter().collect();
    let paths = simulate_paths_by_day(&refs, &cfg.gamma, &clocks, None, derive_seed(seed, stream::PATHS))?;
    let panel = add_noise(&paths, &cfg.noise, derive_seed(seed, stream::NOISE))?;
    Ok(Scenario { paths, panel })
}

/// `cfg.days` days with the configured `Λ`.
pub fn simulate_config(cfg: &ExperimentConfig, seed: u64) -> Result<Scenario> {
    let lambda = build_lambda(&cfg.lambda)?;
    simulate_scenario(cfg, &vec![lambda; cfg.days], seed)
}
