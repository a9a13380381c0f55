use nalgebra::SymmetricEigen;

use crate::{Error, Matrix, Result};

/// Largest `|A_ij - A_ji|`.
pub fn asymmetry(m: &Matrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..i {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub(crate) fn check_symmetric(m: &Matrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    let asym = asymmetry(m);
    if asym > 1e-10 * m.amax().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// Empirical spectral distribution: ascending eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct Esd {
    values: Vec<f64>,
}

impl Esd {
    pub fn from_eigenvalues(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn p(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `F(x) = #{λ_j <= x} / p`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.values.partition_point(|&v| v <= x) as f64 / self.values.len() as f64
    }

    pub fn scaled(&self, kappa: f64) -> Esd {
        Esd::from_eigenvalues(self.values.iter().map(|v| v * kappa).collect())
    }
}

/// Full spectrum of a symmetric matrix.
pub fn esd(m: &Matrix) -> Result<Esd> {
    check_symmetric(m)?;
    if m.nrows() == 0 {
        return Err(Error::InsufficientData("empty matrix".into()));
    }
    let eig = SymmetricEigen::new(m.clone());
    Ok(Esd::from_eigenvalues(eig.eigenvalues.iter().copied().collect()))
}

/// The `2p` equally spaced points spanning both spectra, with both CDFs.
pub fn distance_grid(e1: &Esd, e2: &Esd) -> Result<Vec<(f64, f64, f64)>> {
    if e1.p() != e2.p() {
        return Err(Error::DimensionMismatch { expected: e1.p(), found: e2.p() });
    }
    let lo = e1.min().min(e2.min());
    let hi = e1.max().max(e2.max());
    let points = 2 * e1.p();
    let step = if points > 1 { (hi - lo) / (points - 1) as f64 } else { 0.0 };
    Ok((0..points)
        .map(|k| {
            let x = if k + 1 == points { hi } else { lo + k as f64 * step };
            (x, e1.cdf(x), e2.cdf(x))
        })
        .collect())
}

/// `max_k |F₁(x_k) - F₂(x_k)|` over [`distance_grid`].
pub fn max_esd_distance(e1: &Esd, e2: &Esd) -> Result<f64> {
    Ok(distance_grid(e1, e2)?.into_iter().map(|(_, a, b)| (a - b).abs()).fold(0.0, f64::max))
}
