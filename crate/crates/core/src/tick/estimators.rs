use serde::{Deserialize, Serialize};

use super::{increments, pre_average, IncrementSeries, Parity, StampAverages, TickPanel};
use crate::sim::Clock;
use crate::{Error, Matrix, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorTag {
    Rcv,
    Tva,
    Atva,
    AAtva,
    PaAtva,
    PaAtvaAsync,
    ShrunkNs,
    ShrunkAns,
    ShrunkMns,
    /// Sample covariance of Gaussian draws from a known matrix.
    Reference,
}

impl EstimatorTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            EstimatorTag::Rcv => "rcv",
            EstimatorTag::Tva => "tva",
            EstimatorTag::Atva => "atva",
            EstimatorTag::AAtva => "a_atva",
            EstimatorTag::PaAtva => "pa_atva",
            EstimatorTag::PaAtvaAsync => "pa_atva_async",
            EstimatorTag::ShrunkNs => "shrunk_ns",
            EstimatorTag::ShrunkAns => "shrunk_ans",
            EstimatorTag::ShrunkMns => "shrunk_mns",
            EstimatorTag::Reference => "reference",
        }
    }
}

/// A symmetric `p × p` covariance estimate and where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct CovEstimate {
    pub matrix: Matrix,
    pub tag: EstimatorTag,
    /// Stamps per day of the source data, 0 when not applicable.
    pub n: usize,
    pub h: Option<usize>,
    pub theta_hat: Option<f64>,
}

impl CovEstimate {
    pub fn new(matrix: Matrix, tag: EstimatorTag) -> Self {
        Self { matrix, tag, n: 0, h: None, theta_hat: None }
    }

    pub fn p(&self) -> usize {
        self.matrix.nrows()
    }
}

pub(crate) fn symmetrize(m: Matrix) -> Matrix {
    (&m + m.transpose()) * 0.5
}

/// `Σ ΔΔᵀ/|Δ|²` over the nonzero increments, and how many were nonzero.
pub fn normalized_scatter(series: &IncrementSeries) -> (Matrix, usize) {
    let data = series.matrix();
    let mut z = data.clone();
    let mut used = 0;
    for (k, mut col) in z.column_iter_mut().enumerate() {
        let norm = data.column(k).norm();
        if norm > 0.0 {
            col /= norm;
            used += 1;
        }
    }
    (symmetrize(&z * z.transpose()), used)
}

/// `(p/K) Σ ΔΔᵀ/|Δ|²` with the nominal count `K`: `Σ̃` for even increments,
/// `Ξ̃` for pre-averaged ones. Zero increments are skipped.
pub fn self_normalized(series: &IncrementSeries) -> Result<Matrix> {
    let (scatter, used) = normalized_scatter(series);
    if used == 0 {
        return Err(Error::DegenerateInput("all increments are zero".into()));
    }
    Ok(scatter * (series.p() as f64 / series.len() as f64))
}

/// Realized covariance `Σ ΔΔᵀ`.
pub fn rcv(series: &IncrementSeries) -> Result<CovEstimate> {
    if series.is_empty() {
        return Err(Error::InsufficientData("no increments".into()));
    }
    let d = series.matrix();
    Ok(CovEstimate { n: series.n(), ..CovEstimate::new(symmetrize(d * d.transpose()), EstimatorTag::Rcv) })
}

/// Time-variation adjusted realized covariance
/// `(tr(RCV)/K) Σ ΔΔᵀ/|Δ|²` over the `K` increments.
pub fn tva(series: &IncrementSeries) -> Result<CovEstimate> {
    let (scatter, used) = normalized_scatter(series);
    if used == 0 {
        return Err(Error::DegenerateInput("all increments are zero".into()));
    }
    let scale = series.sum_sq_norms() / series.len() as f64;
    Ok(CovEstimate { n: series.n(), ..CovEstimate::new(scatter * scale, EstimatorTag::Tva) })
}

/// `𝒜_N` together with `Σ̃`.
#[derive(Debug, Clone)]
pub struct Atva {
    pub estimate: CovEstimate,
    pub sigma_tilde: Matrix,
}

/// Averaged TVA on even increments. Over several days `Σ̃` is pooled and
/// the scale `Σ|Δ|²/p` comes from the last day.
pub fn atva(avgs: &StampAverages) -> Result<Atva> {
    let series = increments(avgs, Parity::Even)?;
    let sigma_tilde = self_normalized(&series)?;
    let scale = series.last_day().sum_sq_norms() / series.p() as f64;
    let estimate = CovEstimate { n: avgs.n(), ..CovEstimate::new(&sigma_tilde * scale, EstimatorTag::Atva) };
    Ok(Atva { estimate, sigma_tilde })
}

/// `ℓ_i = ⌊n a_i⌋` for each breakpoint, validated.
pub fn piece_ends(n: usize, breakpoints: &[f64]) -> Result<Vec<usize>> {
    let last = *breakpoints.last().ok_or_else(|| Error::InvalidBreakpoints("no breakpoints".into()))?;
    if (last - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidBreakpoints(format!("last breakpoint is {last}, expected 1")));
    }
    let mut ends = Vec::with_capacity(breakpoints.len());
    let mut prev_a = 0.0;
    let mut prev_l = 0usize;
    for &a in breakpoints {
        if !(a > prev_a) {
            return Err(Error::InvalidBreakpoints(format!("breakpoints must increase within (0, 1], got {a}")));
        }
        let l = ((n as f64 * a) + 1e-9).floor() as usize;
        let l = l.min(n);
        if l < prev_l + 3 {
            return Err(Error::InvalidBreakpoints(format!(
                "piece ending at {a} has {} stamps, need at least 3",
                l - prev_l
            )));
        }
        ends.push(l);
        prev_a = a;
        prev_l = l;
    }
    Ok(ends)
}

fn adjusted(avgs: &StampAverages, breakpoints: &[f64], inv_sq: impl Fn(usize) -> f64) -> Result<CovEstimate> {
    if avgs.day_count() != 1 {
        return Err(Error::Unsupported("A-ATVA is defined on a single day".into()));
    }
    let n = avgs.n();
    let ends = piece_ends(n, breakpoints)?;
    let series = increments(avgs, Parity::Even)?;
    let sigma_tilde = self_normalized(&series)?;
    let mut scale = 0.0;
    let mut prev = 0usize;
    for &l in &ends {
        let f2 = (prev..l).map(&inv_sq).sum::<f64>() / (l - prev) as f64;
        let weight = 1.0 / (1.0 / 3.0 + f2 / 6.0);
        let m_lo = prev.div_ceil(2) + 1;
        let m_hi = l / 2;
        let piece: f64 = (m_lo..=m_hi).map(|m| series.column(m - 1).norm_squared()).sum();
        scale += weight * piece;
        prev = l;
    }
    scale /= avgs.p() as f64;
    Ok(CovEstimate { n, ..CovEstimate::new(sigma_tilde * scale, EstimatorTag::AAtva) })
}

/// Adjusted ATVA `𝒜̃_N` with the piecewise correction
/// `(1/3 + mean(1/L²)/6)⁻¹` on the pieces ending at `breakpoints`.
/// Requires a synchronous clock.
pub fn a_atva(avgs: &StampAverages, clock: &Clock, breakpoints: &[f64]) -> Result<CovEstimate> {
    if !clock.is_synchronous() {
        return Err(Error::Unsupported("A-ATVA requires synchronous transaction counts".into()));
    }
    check_clock(avgs, clock)?;
    adjusted(avgs, breakpoints, |j| {
        let l = clock.count(j, 0) as f64;
        1.0 / (l * l)
    })
}

/// [`a_atva`] with `1/L_j²` replaced by its average across stocks, which
/// makes the construction usable on per-stock asynchronous clocks. It
/// coincides with [`a_atva`] on synchronous clocks.
pub fn a_atva_pooled(avgs: &StampAverages, clock: &Clock, breakpoints: &[f64]) -> Result<CovEstimate> {
    check_clock(avgs, clock)?;
    adjusted(avgs, breakpoints, |j| clock.mean_inv_sq(j))
}

fn check_clock(avgs: &StampAverages, clock: &Clock) -> Result<()> {
    if clock.n() != avgs.n() {
        return Err(Error::DimensionMismatch { expected: avgs.n(), found: clock.n() });
    }
    if clock.p() != avgs.p() {
        return Err(Error::DimensionMismatch { expected: avgs.p(), found: clock.p() });
    }
    Ok(())
}

/// `θ̂_p = 3 Σ|ΔỸ_{2i}|² / p`.
pub fn theta_hat(preavg: &IncrementSeries) -> f64 {
    3.0 * preavg.sum_sq_norms() / preavg.p() as f64
}

/// `ℬ_M` with its components.
#[derive(Debug, Clone)]
pub struct PaAtva {
    pub estimate: CovEstimate,
    pub xi_tilde: Matrix,
    pub theta_hat: f64,
}

/// Pre-averaged ATVA `ℬ_M = θ̂_p Ξ̃`. Over several days `Ξ̃` is pooled and
/// `θ̂_p` comes from the last day.
pub fn pa_atva(panel: &TickPanel, h: usize) -> Result<PaAtva> {
    pa_atva_averages(&super::stamp_average(panel), h)
}

pub fn pa_atva_averages(avgs: &StampAverages, h: usize) -> Result<PaAtva> {
    let series = pre_average(avgs, h)?;
    pa_atva_series(&series, avgs.is_synchronous())
}

pub fn pa_atva_series(series: &IncrementSeries, synchronous: bool) -> Result<PaAtva> {
    let xi_tilde = self_normalized(series)?;
    let theta = theta_hat(&series.last_day());
    let tag = if synchronous { EstimatorTag::PaAtva } else { EstimatorTag::PaAtvaAsync };
    let estimate = CovEstimate {
        matrix: &xi_tilde * theta,
        tag,
        n: series.n(),
        h: series.window(),
        theta_hat: Some(theta),
    };
    Ok(PaAtva { estimate, xi_tilde, theta_hat: theta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tick::IncrementKind;

    fn series(cols: &[&[f64]]) -> IncrementSeries {
        let p = cols[0].len();
        let flat: Vec<f64> = cols.iter().flat_map(|c| c.iter().copied()).collect();
        IncrementSeries::from_columns(Matrix::from_column_slice(p, cols.len(), &flat), IncrementKind::All, cols.len() + 1)
    }

    #[test]
    fn rcv_of_single_increment() {
        let s = series(&[&[1.0, -2.0]]);
        let r = rcv(&s).unwrap();
        assert_eq!(r.matrix, Matrix::from_row_slice(2, 2, &[1.0, -2.0, -2.0, 4.0]));
        let zero = rcv(&series(&[&[0.0, 0.0]])).unwrap();
        assert_eq!(zero.matrix, Matrix::zeros(2, 2));
    }

    #[test]
    fn tva_hand_computation() {
        let s = series(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let t = tva(&s).unwrap();
        let expected = Matrix::identity(2, 2) * (5.0 / 2.0);
        assert!((t.matrix - expected).amax() < 1e-15);
    }

    #[test]
    fn tva_scalar_equals_rcv() {
        let s = series(&[&[0.3], &[-0.1], &[0.7]]);
        assert!((tva(&s).unwrap().matrix[(0, 0)] - rcv(&s).unwrap().matrix[(0, 0)]).abs() < 1e-15);
    }

    #[test]
    fn tva_degenerate() {
        assert!(matches!(tva(&series(&[&[0.0], &[0.0]])), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn zero_increments_are_skipped_but_counted() {
        let s = series(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let sn = self_normalized(&s).unwrap();
        // one unit-trace term, divisor 2, times p = 2
        assert!((sn.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn breakpoints_validation() {
        assert_eq!(piece_ends(390, &[1.0 / 6.0, 5.0 / 6.0, 1.0]).unwrap(), vec![65, 325, 390]);
        assert!(piece_ends(10, &[0.5, 0.4, 1.0]).is_err());
        assert!(piece_ends(10, &[0.1, 1.0]).is_err());
        assert!(piece_ends(10, &[0.5]).is_err());
        assert!(piece_ends(10, &[]).is_err());
    }

    #[test]
    fn a_atva_single_piece_factors() {
        let avgs = StampAverages::from_days(
            vec![Matrix::from_row_slice(2, 6, &[0.0, 1.0, 0.5, 2.0, 1.0, 0.0, 0.0, 0.5, 1.0, 0.0, 0.0, 2.0])],
            true,
        );
        let base = atva(&avgs).unwrap();
        for (l, factor) in [(1u32, 2.0), (2, 8.0 / 3.0)] {
            let clock = Clock::constant(6, 2, l);
            let adj = a_atva(&avgs, &clock, &[1.0]).unwrap();
            assert!((adj.matrix - &base.estimate.matrix * factor).amax() < 1e-14);
        }
    }

    #[test]
    fn a_atva_refuses_asynchronous() {
        let avgs = StampAverages::from_days(vec![Matrix::from_element(2, 6, 1.0)], false);
        let clock = Clock::from_counts(6, 2, vec![1, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]).unwrap();
        assert!(matches!(a_atva(&avgs, &clock, &[1.0]), Err(Error::Unsupported(_))));
    }
}
