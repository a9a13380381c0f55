use rand::seq::SliceRandom;

use crate::seed::rng_for;
use crate::spectral::SpectralDecomp;
use crate::tick::{symmetrize, CovEstimate, EstimatorTag, IncrementSeries};
use crate::{Error, Matrix, Result};

/// The seven split sizes `2√M, 0.2M, 0.4M, 0.6M, 0.8M, M - 2.5√M,
/// M - 1.5√M`, rounded and clamped to `[2, M - 2]`, in that order and
/// with repeats.
pub fn raw_candidates(m_tau: usize) -> [usize; 7] {
    let m = m_tau as f64;
    let r = m.sqrt();
    let hi = m_tau.saturating_sub(2).max(2);
    [2.0 * r, 0.2 * m, 0.4 * m, 0.6 * m, 0.8 * m, m - 2.5 * r, m - 1.5 * r].map(|v| (v.round().max(0.0) as usize).clamp(2, hi))
}

/// Distinct candidates, ascending.
pub fn candidate_set(m_tau: usize) -> Vec<usize> {
    let mut c = raw_candidates(m_tau).to_vec();
    c.sort_unstable();
    c.dedup();
    c
}

/// Seeded Fisher–Yates permutation `k` of `0..m`.
pub fn permutation(m: usize, seed: u64, k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..m).collect();
    idx.shuffle(&mut rng_for(seed, k as u64));
    idx
}

/// Split-size search and the permutations it used.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPlan {
    pub m_tau: usize,
    pub candidates: Vec<usize>,
    pub chosen: usize,
    pub b: usize,
    pub seed: u64,
    /// Criterion value for each candidate, in `candidates` order.
    pub criterion: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct AnsOptions {
    pub b: usize,
    pub seed: u64,
    /// Restrict the search; defaults to [`candidate_set`].
    pub candidates: Option<Vec<usize>>,
}

impl Default for AnsOptions {
    fn default() -> Self {
        Self { b: 50, seed: 0, candidates: None }
    }
}

struct Split {
    /// `Σ_k Ξ̃_ANS^(k)`.
    ans_sum: Matrix,
    /// `Σ_k Ξ̃₂^(k)`.
    second_sum: Matrix,
}

fn unit_columns(series: &IncrementSeries) -> Matrix {
    let mut z = series.matrix().clone();
    for mut col in z.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= norm;
        }
    }
    z
}

fn scatter(z: &Matrix, idx: &[usize]) -> Matrix {
    let sub = z.select_columns(idx);
    &sub * sub.transpose()
}

fn split(z: &Matrix, m1: usize, perms: &[Vec<usize>]) -> Result<Split> {
    let (p, m) = (z.nrows(), z.ncols());
    let m2 = m - m1;
    let mut ans_sum = Matrix::zeros(p, p);
    let mut second_sum = Matrix::zeros(p, p);
    for perm in perms {
        let (j1, j2) = perm.split_at(m1);
        let xi1 = symmetrize(scatter(z, j1) * (p as f64 / m1 as f64));
        let u1 = SpectralDecomp::new(&xi1)?;
        let w = u1.u.transpose() * z.select_columns(j2);
        let d: Vec<f64> = w.row_iter().map(|r| r.norm_squared() * p as f64 / m2 as f64).collect();
        ans_sum += u1.compose(&d);
        second_sum += scatter(z, j2) * (p as f64 / m2 as f64);
    }
    Ok(Split { ans_sum, second_sum })
}

/// `(1/B) Σ_k Ξ̃_ANS^(k)` for a fixed first-split size `m1`.
pub fn ans_xi(series: &IncrementSeries, m1: usize, b: usize, seed: u64) -> Result<Matrix> {
    let m = series.len();
    if m1 < 1 || m1 >= m {
        return Err(Error::InvalidSpec(format!("split size {m1} outside 1..{m}")));
    }
    let perms: Vec<_> = (0..b).map(|k| permutation(m, seed, k)).collect();
    let z = unit_columns(series);
    Ok(split(&z, m1, &perms)?.ans_sum / b as f64)
}

/// Averaged nonlinear shrinkage `θ̂ (1/B) Σ_k U₁ diag(U₁ᵀ Ξ̃₂ U₁) U₁ᵀ` over
/// `B` random splits of the increments. The first-split size minimizes
/// `‖(1/B) Σ_k (Ξ̃_ANS^(k) - Ξ̃₂^(k))‖_F²` with the same permutations for
/// every candidate; ties go to the smaller size.
pub fn ans(series: &IncrementSeries, theta_hat: f64, opts: &AnsOptions) -> Result<(CovEstimate, SplitPlan)> {
    let m = series.len();
    if m < 8 {
        return Err(Error::InsufficientData(format!("ANS needs at least 8 increments, got {m}")));
    }
    if opts.b == 0 {
        return Err(Error::InvalidSpec("ANS needs at least one permutation".into()));
    }
    let candidates = match &opts.candidates {
        Some(c) => {
            if c.is_empty() || c.iter().any(|&v| v < 2 || v > m - 2) {
                return Err(Error::InvalidSpec(format!("split candidates {c:?} outside [2, {}]", m - 2)));
            }
            let mut c = c.clone();
            c.sort_unstable();
            c.dedup();
            c
        }
        None => candidate_set(m),
    };
    let perms: Vec<_> = (0..opts.b).map(|k| permutation(m, opts.seed, k)).collect();
    let z = unit_columns(series);
    let mut best: Option<(f64, usize, Matrix)> = None;
    let mut criterion = Vec::with_capacity(candidates.len());
    for &m1 in &candidates {
        let s = split(&z, m1, &perms)?;
        let loss = ((&s.ans_sum - &s.second_sum) / opts.b as f64).norm_squared();
        criterion.push(loss);
        if best.as_ref().is_none_or(|(l, _, _)| loss < *l) {
            best = Some((loss, m1, s.ans_sum));
        }
    }
    let (_, chosen, sum) = best.expect("at least one candidate");
    let matrix = symmetrize(sum * (theta_hat / opts.b as f64));
    let estimate = CovEstimate {
        n: series.n(),
        h: series.window(),
        theta_hat: Some(theta_hat),
        ..CovEstimate::new(matrix, EstimatorTag::ShrunkAns)
    };
    let plan = SplitPlan { m_tau: m, candidates, chosen, b: opts.b, seed: opts.seed, criterion };
    Ok((estimate, plan))
}
