use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{sigma_breve, Clock, GammaSpec};
use crate::seed::rng_for;
use crate::tick::TickPanel;
use crate::{Error, Matrix, Result};

/// Per-stock drift `μ^(q)(t)`; must be bounded.
pub type Drift = dyn Fn(usize, f64) -> f64 + Send + Sync;

/// Simulated state of one trading day.
#[derive(Debug, Clone)]
pub struct DayPath {
    pub clock: Clock,
    /// Union grid of all transaction times and stamp ends, starting at 0.
    pub grid: Vec<f64>,
    /// `γ` at each grid point.
    pub gamma: Vec<f64>,
    /// `stamp_steps[i]..stamp_steps[i + 1]` are the grid steps inside stamp `i`.
    pub stamp_steps: Vec<usize>,
    /// Left-Riemann `∫γ² dt` over the day.
    pub theta: f64,
    pub sigma_breve: Matrix,
    /// `θ · Σ̆`.
    pub realized_icv: Matrix,
}

impl DayPath {
    pub fn steps(&self) -> usize {
        self.grid.len() - 1
    }
}

/// Latent class-C paths observed at every transaction time.
#[derive(Debug, Clone)]
pub struct LatentPaths {
    pub p: usize,
    pub n: usize,
    pub seed: u64,
    pub days: Vec<DayPath>,
    /// Noise-free log prices at every transaction time.
    pub latent: TickPanel,
}

impl LatentPaths {
    pub fn day_count(&self) -> usize {
        self.days.len()
    }
}

/// Reduced fraction `num/den` in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Frac {
    num: u64,
    den: u64,
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Union of within-stamp transaction fractions `j/L` plus, for each distinct
/// `L`, the union index of each of its `L` transactions.
struct StampGrid {
    points: Vec<Frac>,
    index_by_count: BTreeMap<u32, Vec<usize>>,
}

impl StampGrid {
    fn new(counts: &[u32]) -> Self {
        let mut distinct: Vec<u32> = counts.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let mut points = Vec::new();
        for &l in &distinct {
            for j in 1..=l as u64 {
                let g = gcd(j, l as u64);
                points.push(Frac { num: j / g, den: l as u64 / g });
            }
        }
        points.sort_unstable();
        points.dedup();
        let mut index_by_count = BTreeMap::new();
        for &l in &distinct {
            let idx = (1..=l as u64)
                .map(|j| {
                    let g = gcd(j, l as u64);
                    let f = Frac { num: j / g, den: l as u64 / g };
                    points.binary_search(&f).expect("fraction is in the union")
                })
                .collect();
            index_by_count.insert(l, idx);
        }
        Self { points, index_by_count }
    }
}

/// Euler–Maruyama simulation of `dX = μ dt + γ_t Λ dW` with
/// `dγ = -ρ(γ - μ_t)dt + σ dW̃`, `W̃ = Σ_k W^(k) / sqrt(p)`, on the union of
/// all transaction times. Each day restarts `γ` at its initial level and
/// continues prices from the previous close.
pub fn simulate_paths(
    lambda: &Matrix,
    gamma: &GammaSpec,
    clocks: &[Clock],
    drift: Option<&Drift>,
    seed: u64,
) -> Result<LatentPaths> {
    let lambdas: Vec<&Matrix> = vec![lambda; clocks.len()];
    simulate_paths_by_day(&lambdas, gamma, clocks, drift, seed)
}

/// As [`simulate_paths`] but with a separate `Λ` for every day.
pub fn simulate_paths_by_day(
    lambdas: &[&Matrix],
    gamma: &GammaSpec,
    clocks: &[Clock],
    drift: Option<&Drift>,
    seed: u64,
) -> Result<LatentPaths> {
    gamma.validate()?;
    let first = clocks.first().ok_or_else(|| Error::InvalidSpec("no trading days to simulate".into()))?;
    if lambdas.len() != clocks.len() {
        return Err(Error::DimensionMismatch { expected: clocks.len(), found: lambdas.len() });
    }
    let (p, n) = (first.p(), first.n());
    if n == 0 || p == 0 {
        return Err(Error::InvalidSpec("empty simulation grid".into()));
    }
    for (clock, lambda) in clocks.iter().zip(lambdas) {
        if clock.p() != p || clock.n() != n {
            return Err(Error::InvalidSpec("clocks disagree on shape".into()));
        }
        if lambda.nrows() != p || lambda.ncols() != p {
            return Err(Error::DimensionMismatch { expected: p, found: lambda.nrows() });
        }
    }

    let total: usize = clocks.iter().map(Clock::total_transactions).sum();
    let mut prices = Vec::with_capacity(total);
    let mut counts = Vec::with_capacity(clocks.len() * n * p);
    let mut x0 = vec![0.0; p];
    let mut days = Vec::with_capacity(clocks.len());
    for (d, (clock, lambda)) in clocks.iter().zip(lambdas).enumerate() {
        let mut rng = rng_for(seed, d as u64);
        counts.extend_from_slice(clock.counts());
        let day = simulate_day(lambda, gamma, clock, drift, &mut x0, &mut rng, &mut prices);
        days.push(day);
    }
    let latent = TickPanel::from_parts(p, n, clocks.len(), counts, prices)?;
    Ok(LatentPaths { p, n, seed, days, latent })
}

fn simulate_day(
    lambda: &Matrix,
    spec: &GammaSpec,
    clock: &Clock,
    drift: Option<&Drift>,
    x0: &mut [f64],
    rng: &mut ChaCha8Rng,
    prices: &mut Vec<f64>,
) -> DayPath {
    let (p, n) = (clock.p(), clock.n());
    let rows: Vec<f64> = (0..p).flat_map(|i| (0..p).map(move |j| (i, j))).map(|(i, j)| lambda[(i, j)]).collect();
    let inv_sqrt_p = 1.0 / (p as f64).sqrt();

    let mut g = vec![0.0; p];
    let mut dr = vec![0.0; p];
    let mut gamma = spec.initial();
    let mut t_prev = 0.0f64;
    let mut grid = Vec::with_capacity(clock.total_transactions() / p.max(1) + n + 1);
    let mut gamma_path = Vec::with_capacity(grid.capacity());
    let mut stamp_steps = Vec::with_capacity(n + 1);
    grid.push(0.0);
    gamma_path.push(gamma);
    stamp_steps.push(0);
    let mut theta = 0.0;

    let mut snaps: Vec<f64> = Vec::new();
    for i in 0..n {
        let sg = StampGrid::new(clock.stamp_counts(i));
        snaps.clear();
        snaps.reserve(sg.points.len() * p);
        for f in &sg.points {
            let t = (i as f64 + f.num as f64 / f.den as f64) / n as f64;
            let dt = t - t_prev;
            let sd = dt.sqrt();
            let mut sum_dw = 0.0;
            for gk in g.iter_mut() {
                let z: f64 = rng.sample(StandardNormal);
                let dw = sd * z;
                *gk += gamma * dw;
                sum_dw += dw;
            }
            if let Some(mu) = drift {
                for (q, d) in dr.iter_mut().enumerate() {
                    *d += mu(q, t_prev) * dt;
                }
            }
            theta += gamma * gamma * dt;
            gamma += -spec.rho * (gamma - spec.mu.eval(t_prev)) * dt + spec.sigma * sum_dw * inv_sqrt_p;
            t_prev = t;
            grid.push(t);
            gamma_path.push(gamma);
            snaps.extend_from_slice(&g);
            if drift.is_some() {
                snaps.extend_from_slice(&dr);
            }
        }
        stamp_steps.push(grid.len() - 1);
        let stride = if drift.is_some() { 2 * p } else { p };
        for q in 0..p {
            let row = &rows[q * p..(q + 1) * p];
            for &k in &sg.index_by_count[&clock.count(i, q)] {
                let snap = &snaps[k * stride..k * stride + p];
                let mut x = x0[q] + row.iter().zip(snap).map(|(a, b)| a * b).sum::<f64>();
                if drift.is_some() {
                    x += snaps[k * stride + p + q];
                }
                prices.push(x);
            }
        }
    }
    // every stock trades exactly at the close, so the last price is the close
    for q in 0..p {
        let row = &rows[q * p..(q + 1) * p];
        x0[q] += row.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() + dr[q];
    }
    let sb = sigma_breve(lambda);
    let realized_icv = &sb * theta;
    DayPath { clock: clock.clone(), grid, gamma: gamma_path, stamp_steps, theta, sigma_breve: sb, realized_icv }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{build_lambda, generate_clock, ClockKind, ClockSpec, LambdaSpec};

    #[test]
    fn stamp_grid_union() {
        let sg = StampGrid::new(&[2, 3, 2, 1]);
        // 1/3, 1/2, 2/3, 1
        assert_eq!(sg.points.len(), 4);
        assert_eq!(sg.index_by_count[&1], vec![3]);
        assert_eq!(sg.index_by_count[&2], vec![1, 3]);
        assert_eq!(sg.index_by_count[&3], vec![0, 2, 3]);
    }

    #[test]
    fn transaction_layout_and_continuity() {
        let p = 3;
        let clock_spec = ClockSpec::per_stock_uniform(ClockKind::Constant { l: 4 });
        let clocks: Vec<_> = (0..2).map(|d| generate_clock(&clock_spec, 8, p, d).unwrap()).collect();
        let lambda = build_lambda(&LambdaSpec::toeplitz(p)).unwrap();
        let paths = simulate_paths(&lambda, &GammaSpec::default(), &clocks, None, 4).unwrap();
        for (d, clock) in clocks.iter().enumerate() {
            for i in 0..8 {
                for q in 0..p {
                    assert_eq!(paths.latent.prices(d, i, q).len(), clock.count(i, q) as usize);
                }
            }
            let day = &paths.days[d];
            assert!(day.grid.windows(2).all(|w| w[1] > w[0]));
            assert_eq!(*day.grid.last().unwrap(), 1.0);
            assert_eq!(day.stamp_steps.len(), 9);
            for i in 0..8 {
                let t_end = day.grid[day.stamp_steps[i + 1]];
                assert!((t_end - (i + 1) as f64 / 8.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn constant_volatility_icv() {
        let p = 4;
        let lambda = build_lambda(&LambdaSpec::toeplitz(p)).unwrap();
        let clocks = vec![Clock::constant(50, p, 2)];
        let c = 0.3;
        let paths = simulate_paths(&lambda, &GammaSpec::constant(c), &clocks, None, 1).unwrap();
        let day = &paths.days[0];
        assert!(day.gamma.iter().all(|&g| g == c));
        let expected = sigma_breve(&lambda) * (c * c);
        assert!((&day.realized_icv - expected).amax() < 1e-12);
    }

    #[test]
    fn drift_shifts_prices() {
        let p = 2;
        let lambda = Matrix::identity(p, p);
        let clocks = vec![Clock::constant(10, p, 1)];
        let zero = GammaSpec { sigma: 0.0, ..GammaSpec::constant(0.0) };
        let drift = |q: usize, _t: f64| if q == 0 { 1.0 } else { -2.0 };
        let paths = simulate_paths(&lambda, &zero, &clocks, Some(&drift), 1).unwrap();
        let last = |q| paths.latent.prices(0, 9, q)[0];
        assert!((last(0) - 1.0).abs() < 1e-12);
        assert!((last(1) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_given_seed() {
        let p = 3;
        let lambda = build_lambda(&LambdaSpec::toeplitz(p)).unwrap();
        let clocks = vec![generate_clock(&ClockSpec::shifted_poisson(2.0), 20, p, 1).unwrap()];
        let a = simulate_paths(&lambda, &GammaSpec::default(), &clocks, None, 9).unwrap();
        let b = simulate_paths(&lambda, &GammaSpec::default(), &clocks, None, 9).unwrap();
        assert_eq!(a.latent, b.latent);
        assert_eq!(a.days[0].gamma, b.days[0].gamma);
        let c = simulate_paths(&lambda, &GammaSpec::default(), &clocks, None, 10).unwrap();
        assert_ne!(a.latent, c.latent);
    }

    #[test]
    fn rejects_mismatched_dimensions() {
        let lambda = Matrix::identity(3, 3);
        let clocks = vec![Clock::constant(10, 2, 1)];
        assert!(simulate_paths(&lambda, &GammaSpec::default(), &clocks, None, 0).is_err());
        assert!(simulate_paths(&lambda, &GammaSpec::default(), &[], None, 0).is_err());
    }
}
