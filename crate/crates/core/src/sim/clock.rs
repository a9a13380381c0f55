use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::seed::rng_for;
use crate::{Error, Result};

/// One segment of a piecewise Poisson intensity profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonPiece {
    /// Length of the segment as a fraction of the day.
    pub fraction: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClockKind {
    /// Exactly `l` transactions in every stamp.
    Constant { l: u32 },
    /// `L - 1 ~ Poisson(lambda)`.
    IidShiftedPoisson { lambda: f64 },
    /// `L - 1 ~ Poisson(lambda_k)` on consecutive segments of the day.
    PiecewisePoisson { pieces: Vec<PoissonPiece> },
    /// Common base count `L_i`, then `L_i^(q) ~ U{1, ..., L_i}` per stock.
    PerStockUniform { base: Box<ClockKind> },
}

/// Generator of per-stamp, per-stock transaction counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClockSpec {
    #[serde(flatten)]
    pub kind: ClockKind,
    /// Share a single draw across stocks in each stamp. Ignored by
    /// `per_stock_uniform`, which is asynchronous by construction.
    #[serde(default = "default_true")]
    pub synchronous: bool,
}

fn default_true() -> bool {
    true
}

impl ClockSpec {
    pub fn new(kind: ClockKind) -> Self {
        Self { kind, synchronous: true }
    }

    pub fn constant(l: u32) -> Self {
        Self::new(ClockKind::Constant { l })
    }

    pub fn shifted_poisson(lambda: f64) -> Self {
        Self::new(ClockKind::IidShiftedPoisson { lambda })
    }

    /// Busy first and last segments (`lambda_edge`) around a quieter middle.
    pub fn u_shaped_poisson(edge_fraction: f64, lambda_edge: f64, lambda_mid: f64) -> Self {
        Self::new(ClockKind::PiecewisePoisson {
            pieces: vec![
                PoissonPiece { fraction: edge_fraction, lambda: lambda_edge },
                PoissonPiece { fraction: 1.0 - 2.0 * edge_fraction, lambda: lambda_mid },
                PoissonPiece { fraction: edge_fraction, lambda: lambda_edge },
            ],
        })
    }

    pub fn per_stock_uniform(base: ClockKind) -> Self {
        Self { kind: ClockKind::PerStockUniform { base: Box::new(base) }, synchronous: false }
    }

    pub fn validate(&self) -> Result<()> {
        validate_kind(&self.kind, 0)
    }
}

fn validate_kind(kind: &ClockKind, depth: usize) -> Result<()> {
    match kind {
        ClockKind::Constant { l } => {
            if *l == 0 {
                return Err(Error::InvalidSpec("constant clock needs L >= 1".into()));
            }
        }
        ClockKind::IidShiftedPoisson { lambda } => check_lambda(*lambda)?,
        ClockKind::PiecewisePoisson { pieces } => {
            if pieces.is_empty() {
                return Err(Error::InvalidSpec("piecewise clock has no pieces".into()));
            }
            let mut total = 0.0;
            for piece in pieces {
                if !(piece.fraction > 0.0) {
                    return Err(Error::InvalidSpec(format!("piece fraction {} must be positive", piece.fraction)));
                }
                check_lambda(piece.lambda)?;
                total += piece.fraction;
            }
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidSpec(format!("piece fractions sum to {total}, expected 1")));
            }
        }
        ClockKind::PerStockUniform { base } => {
            if depth > 0 || matches!(**base, ClockKind::PerStockUniform { .. }) {
                return Err(Error::InvalidSpec("per-stock uniform clocks cannot be nested".into()));
            }
            validate_kind(base, depth + 1)?;
        }
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidSpec(format!("poisson intensity {lambda} is invalid")));
    }
    Ok(())
}

/// Realized transaction counts `L_i^(q)` for one trading day.
#[derive(Debug, Clone, PartialEq)]
pub struct Clock {
    n: usize,
    p: usize,
    /// Stamp-major: `counts[i * p + q]`.
    counts: Vec<u32>,
    synchronous: bool,
}

impl Clock {
    pub fn from_counts(n: usize, p: usize, counts: Vec<u32>) -> Result<Self> {
        if counts.len() != n * p {
            return Err(Error::DimensionMismatch { expected: n * p, found: counts.len() });
        }
        if counts.contains(&0) {
            return Err(Error::InvalidSpec("transaction counts must be at least 1".into()));
        }
        let synchronous = counts.chunks(p.max(1)).all(|row| row.iter().all(|&c| c == row[0]));
        Ok(Self { n, p, counts, synchronous })
    }

    pub fn constant(n: usize, p: usize, l: u32) -> Self {
        Self { n, p, counts: vec![l.max(1); n * p], synchronous: true }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Count for 0-based `stamp` and `stock`.
    pub fn count(&self, stamp: usize, stock: usize) -> u32 {
        self.counts[stamp * self.p + stock]
    }

    pub fn stamp_counts(&self, stamp: usize) -> &[u32] {
        &self.counts[stamp * self.p..(stamp + 1) * self.p]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn is_synchronous(&self) -> bool {
        self.synchronous
    }

    pub fn total_transactions(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    /// Mean of `1/L²` over the stocks of a stamp.
    pub fn mean_inv_sq(&self, stamp: usize) -> f64 {
        let row = self.stamp_counts(stamp);
        row.iter().map(|&l| 1.0 / (l as f64 * l as f64)).sum::<f64>() / row.len() as f64
    }
}

fn draw_base<R: Rng>(kind: &ClockKind, t: f64, rng: &mut R) -> u32 {
    match kind {
        ClockKind::Constant { l } => *l,
        ClockKind::IidShiftedPoisson { lambda } => 1 + poisson(*lambda, rng),
        ClockKind::PiecewisePoisson { pieces } => {
            let mut edge = 0.0;
            let mut lambda = pieces[pieces.len() - 1].lambda;
            for piece in pieces {
                edge += piece.fraction;
                if t <= edge + 1e-12 {
                    lambda = piece.lambda;
                    break;
                }
            }
            1 + poisson(lambda, rng)
        }
        ClockKind::PerStockUniform { base } => draw_base(base, t, rng),
    }
}

fn poisson<R: Rng>(lambda: f64, rng: &mut R) -> u32 {
    if lambda <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(lambda).expect("validated intensity");
    let v: f64 = dist.sample(rng);
    v as u32
}

/// Draws the transaction counts of one day with `n` stamps and `p` stocks.
pub fn generate_clock(spec: &ClockSpec, n: usize, p: usize, seed: u64) -> Result<Clock> {
    spec.validate()?;
    if n < 2 {
        return Err(Error::InvalidSpec(format!("need at least 2 stamps, got {n}")));
    }
    if p == 0 {
        return Err(Error::InvalidSpec("dimension must be at least 1".into()));
    }
    let mut rng = rng_for(seed, 0xC10C);
    let mut counts = Vec::with_capacity(n * p);
    for i in 0..n {
        let t = (i + 1) as f64 / n as f64;
        match &spec.kind {
            ClockKind::PerStockUniform { base } => {
                let upper = draw_base(base, t, &mut rng);
                for _ in 0..p {
                    counts.push(rng.random_range(1..=upper));
                }
            }
            kind if spec.synchronous => {
                let l = draw_base(kind, t, &mut rng);
                counts.extend(std::iter::repeat_n(l, p));
            }
            kind => {
                for _ in 0..p {
                    counts.push(draw_base(kind, t, &mut rng));
                }
            }
        }
    }
    Clock::from_counts(n, p, counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_clock_single_transaction() {
        let c = generate_clock(&ClockSpec::constant(1), 10, 3, 1).unwrap();
        assert!(c.counts().iter().all(|&l| l == 1));
        assert!(c.is_synchronous());
    }

    #[test]
    fn shifted_poisson_mean() {
        let n = 20_000;
        let c = generate_clock(&ClockSpec::shifted_poisson(5.0), n, 2, 3).unwrap();
        assert!(c.is_synchronous());
        let mean = (0..n).map(|i| c.count(i, 0) as f64 - 1.0).sum::<f64>() / n as f64;
        assert!((mean - 5.0).abs() < 3.0 * (5.0 / n as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn per_stock_uniform_range_and_mean() {
        let (n, p) = (390, 100);
        let c = generate_clock(&ClockSpec::per_stock_uniform(ClockKind::Constant { l: 5 }), n, p, 11).unwrap();
        assert!(c.counts().iter().all(|&l| (1..=5).contains(&l)));
        let mean = c.counts().iter().map(|&l| l as f64).sum::<f64>() / (n * p) as f64;
        assert!((mean - 3.0).abs() < 0.1, "mean {mean}");
        assert!(!c.is_synchronous());
    }

    #[test]
    fn piecewise_uses_edge_intensity() {
        let n = 6000;
        let spec = ClockSpec::u_shaped_poisson(1.0 / 6.0, 20.0, 5.0);
        let c = generate_clock(&spec, n, 1, 5).unwrap();
        let avg = |lo: usize, hi: usize| (lo..hi).map(|i| c.count(i, 0) as f64 - 1.0).sum::<f64>() / (hi - lo) as f64;
        assert!((avg(0, 1000) - 20.0).abs() < 0.6);
        assert!((avg(1000, 5000) - 5.0).abs() < 0.3);
        assert!((avg(5000, 6000) - 20.0).abs() < 0.6);
    }

    #[test]
    fn unsynchronized_poisson_differs_across_stocks() {
        let spec = ClockSpec { kind: ClockKind::IidShiftedPoisson { lambda: 5.0 }, synchronous: false };
        let c = generate_clock(&spec, 50, 4, 2).unwrap();
        assert!(!c.is_synchronous());
    }

    #[test]
    fn invalid_specs() {
        assert!(generate_clock(&ClockSpec::constant(0), 10, 1, 0).is_err());
        assert!(generate_clock(&ClockSpec::constant(1), 1, 1, 0).is_err());
        let spec = ClockSpec::new(ClockKind::PiecewisePoisson {
            pieces: vec![PoissonPiece { fraction: 0.3, lambda: 1.0 }],
        });
        assert!(spec.validate().is_err());
        assert!(Clock::from_counts(2, 1, vec![1, 0]).is_err());
    }

    #[test]
    fn deterministic() {
        let spec = ClockSpec::per_stock_uniform(ClockKind::IidShiftedPoisson { lambda: 5.0 });
        let a = generate_clock(&spec, 100, 7, 99).unwrap();
        let b = generate_clock(&spec, 100, 7, 99).unwrap();
        assert_eq!(a, b);
    }
}
