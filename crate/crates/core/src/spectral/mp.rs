use num_complex::Complex64;

use crate::{Error, Result};

/// Probability measure with finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    support: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(support: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != weights.len() {
            return Err(Error::InvalidSpec("measure needs matching, non-empty support and weights".into()));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::InvalidSpec("measure weights must be non-negative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSpec(format!("measure weights sum to {total}")));
        }
        Ok(Self { support, weights })
    }

    /// Uniform weights on the given points, e.g. the eigenvalues of a
    /// population covariance.
    pub fn uniform(support: Vec<f64>) -> Result<Self> {
        let k = support.len();
        if k == 0 {
            return Err(Error::InvalidSpec("empty support".into()));
        }
        Ok(Self { weights: vec![1.0 / k as f64; k], support })
    }

    pub fn point_mass(tau: f64) -> Self {
        Self { support: vec![tau], weights: vec![1.0] }
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Solver knobs for [`mp_stieltjes`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub damping: f64,
    /// Multiplies every support point `τ`.
    pub scale: f64,
    /// Starting value; `-1/z` when absent.
    pub start: Option<Complex64>,
}

impl Default for MpOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 200_000, damping: 0.5, scale: 1.0, start: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpSolution {
    pub z: Complex64,
    pub m: Complex64,
    pub residual: f64,
    pub iterations: usize,
}

/// Right-hand side `∫ dH(τ) / (sτ(1 - c(1 + z m)) - z)`.
pub fn mp_map(h: &DiscreteMeasure, c: f64, scale: f64, z: Complex64, m: Complex64) -> Complex64 {
    let factor = 1.0 - c * (1.0 + z * m);
    h.support.iter().zip(&h.weights).map(|(&tau, &w)| w / (scale * tau * factor - z)).sum()
}

/// `|m - mp_map(m)|`.
pub fn mp_residual(h: &DiscreteMeasure, c: f64, scale: f64, z: Complex64, m: Complex64) -> f64 {
    (m - mp_map(h, c, scale, z, m)).norm()
}

/// Stieltjes transform of the limiting spectral law solving the
/// Marčenko–Pastur equation, by damped fixed-point iteration.
pub fn mp_stieltjes(h: &DiscreteMeasure, c: f64, z: Complex64, opts: &MpOptions) -> Result<MpSolution> {
    if !(c > 0.0) {
        return Err(Error::InvalidSpec(format!("ratio c must be positive, got {c}")));
    }
    if !(z.im > 0.0) {
        return Err(Error::InvalidSpec(format!("z must lie in the upper half plane, got {z}")));
    }
    let alpha = opts.damping;
    let mut m = opts.start.unwrap_or(-1.0 / z);
    let mut residual = f64::INFINITY;
    for it in 0..opts.max_iter {
        let f = mp_map(h, c, opts.scale, z, m);
        residual = (f - m).norm();
        if residual <= opts.tol {
            return Ok(MpSolution { z, m, residual, iterations: it });
        }
        if !residual.is_finite() {
            break;
        }
        m = (1.0 - alpha) * m + alpha * f;
    }
    Err(Error::Convergence { iterations: opts.max_iter, residual })
}

/// Density `Im m(x + iη) / π` on `grid`, warm-starting each point from its
/// neighbour's solution.
pub fn mp_density(h: &DiscreteMeasure, c: f64, grid: &[f64], eta: f64, opts: &MpOptions) -> Result<Vec<f64>> {
    if !(eta > 0.0) {
        return Err(Error::InvalidSpec(format!("eta must be positive, got {eta}")));
    }
    let mut out = Vec::with_capacity(grid.len());
    let mut prev: Option<Complex64> = None;
    for &x in grid {
        let z = Complex64::new(x, eta);
        let warm = MpOptions { start: prev.or(opts.start), ..*opts };
        let sol = match mp_stieltjes(h, c, z, &warm) {
            Ok(s) if s.m.im > 0.0 => s,
            _ => {
                let cold = MpOptions { start: None, ..*opts };
                mp_stieltjes(h, c, z, &cold)?
            }
        };
        prev = Some(sol.m);
        out.push(sol.m.im / std::f64::consts::PI);
    }
    Ok(out)
}

/// Support edges `σ²(1 ± √c)²` of the Marčenko–Pastur law.
pub fn mp_edges(c: f64, sigma2: f64) -> (f64, f64) {
    let r = c.sqrt();
    (sigma2 * (1.0 - r).powi(2), sigma2 * (1.0 + r).powi(2))
}

/// Absolutely continuous part of the Marčenko–Pastur density with ratio `c`
/// and variance `σ²`.
pub fn mp_closed_form_density(c: f64, sigma2: f64, x: f64) -> f64 {
    let (a, b) = mp_edges(c, sigma2);
    if x <= a || x >= b || x <= 0.0 {
        return 0.0;
    }
    ((b - x) * (x - a)).sqrt() / (2.0 * std::f64::consts::PI * c * sigma2 * x)
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}
