use crate::spectral::SpectralDecomp;
use crate::tick::{CovEstimate, EstimatorTag, StampAverages};
use crate::{Error, Result};

/// `k_n = ⌊ϑ √n⌋`.
pub fn spot_window(n: usize, vartheta: f64) -> usize {
    (vartheta * (n as f64).sqrt()).floor() as usize
}

fn weight(x: f64) -> f64 {
    x.min(1.0 - x)
}

/// Averaging-pre-averaging integrated variance of one scalar series
/// `y_0, …, y_{K-1}`:
/// `(12/k_n) Σ_i Δ_i² - (6/(ϑ² n)) Σ_i (y_{i+1} - y_i)²` with
/// `Δ_i = Σ_{j=1}^{k_n-1} g(j/k_n)(y_{i+j+1} - y_{i+j})`, `g(x) = x ∧ (1-x)`.
pub fn apa_spot(series: &[f64], n: usize, k_n: usize, vartheta: f64) -> Result<f64> {
    if k_n < 2 || 2 * k_n > n {
        return Err(Error::InvalidWindow(format!("k_n = {k_n} must satisfy 2 <= k_n <= n/2 with n = {n}")));
    }
    if !(vartheta > 0.0) {
        return Err(Error::InvalidSpec(format!("vartheta must be positive, got {vartheta}")));
    }
    let len = series.len();
    if len < k_n + 2 {
        return Err(Error::InsufficientData(format!("series of length {len} is shorter than k_n + 2 = {}", k_n + 2)));
    }
    let diffs: Vec<f64> = series.windows(2).map(|w| w[1] - w[0]).collect();
    let g: Vec<f64> = (1..k_n).map(|j| weight(j as f64 / k_n as f64)).collect();
    let mut first = 0.0;
    // Δ_i uses diffs[i + 1 ..= i + k_n - 1]
    for i in 0..=len - 1 - k_n {
        let d: f64 = g.iter().zip(&diffs[i + 1..i + k_n]).map(|(w, d)| w * d).sum();
        first += d * d;
    }
    let second: f64 = diffs.iter().map(|d| d * d).sum();
    Ok(12.0 / k_n as f64 * first - 6.0 / (vartheta * vartheta * n as f64) * second)
}

/// Mixed nonlinear shrinkage: eigenvectors from an earlier window, and for
/// each one the APA variance of today's stamp averages projected on it,
/// floored at zero.
pub fn mns(decomp: &SpectralDecomp, today: &StampAverages, k_n: usize, vartheta: f64) -> Result<CovEstimate> {
    if today.day_count() != 1 {
        return Err(Error::InvalidSpec(format!("MNS takes one day of averages, got {}", today.day_count())));
    }
    let v = today.day(0);
    if v.nrows() != decomp.p() {
        return Err(Error::DimensionMismatch { expected: decomp.p(), found: v.nrows() });
    }
    let projected = decomp.u.transpose() * v;
    let n = today.n();
    let d = projected
        .row_iter()
        .map(|row| {
            let y: Vec<f64> = row.iter().copied().collect();
            apa_spot(&y, n, k_n, vartheta).map(|x| x.max(0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CovEstimate { n, ..CovEstimate::new(decomp.compose(&d), EstimatorTag::ShrunkMns) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Matrix;

    #[test]
    fn constant_series_is_zero() {
        assert_eq!(apa_spot(&[2.5; 100], 100, 10, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn window_checks() {
        assert!(apa_spot(&[0.0; 10], 10, 1, 1.0).is_err());
        assert!(apa_spot(&[0.0; 10], 10, 6, 1.0).is_err());
        assert!(matches!(apa_spot(&[0.0; 5], 10, 4, 1.0), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn full_day_window() {
        assert_eq!(spot_window(23400, 0.75), 114);
    }

    #[test]
    fn negative_values_are_floored() {
        // alternating series: pure noise-like, heavy bias correction
        let y: Vec<f64> = (0..200).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let raw = apa_spot(&y, 200, 10, 10.0 / 200f64.sqrt()).unwrap();
        assert!(raw < 0.0);
        let avgs = StampAverages::from_days(vec![Matrix::from_row_slice(1, 200, &y)], true);
        let d = SpectralDecomp { u: Matrix::identity(1, 1), lambda: vec![1.0] };
        assert_eq!(mns(&d, &avgs, 10, 10.0 / 200f64.sqrt()).unwrap().matrix[(0, 0)], 0.0);
    }
}
