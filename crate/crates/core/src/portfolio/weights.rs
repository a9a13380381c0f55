use crate::spectral::SpectralDecomp;
use crate::{Error, Matrix, Result};

/// Fully invested portfolio weights; short positions allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub w: Vec<f64>,
}

impl WeightVector {
    pub fn equal(p: usize) -> Self {
        Self { w: vec![1.0 / p as f64; p] }
    }

    pub fn sum(&self) -> f64 {
        self.w.iter().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.w.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn dot(&self, r: &[f64]) -> f64 {
        self.w.iter().zip(r).map(|(a, b)| a * b).sum()
    }
}

pub const DEFAULT_FLOOR: f64 = 1e-10;

/// Global minimum-variance weights `Σ⁻¹1 / (1ᵀΣ⁻¹1)`. Eigenvalues below
/// `floor · tr(Σ)/p` are lifted to that level before inverting.
pub fn min_var_weights(sigma: &Matrix, floor: f64) -> Result<WeightVector> {
    let p = sigma.nrows();
    if p == 0 {
        return Err(Error::InsufficientData("empty covariance".into()));
    }
    if sigma.iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateInput("covariance is identically zero".into()));
    }
    let d = SpectralDecomp::new(sigma)?;
    let level = floor * sigma.trace() / p as f64;
    // Σ⁻¹1 = U diag(1/λ) Uᵀ 1
    let ut1: Vec<f64> = d.u.column_iter().map(|c| c.sum()).collect();
    let mut x = vec![0.0; p];
    for (k, (&lam, &proj)) in d.lambda.iter().zip(&ut1).enumerate() {
        let coef = proj / lam.max(level);
        for (xi, ui) in x.iter_mut().zip(d.u.column(k).iter()) {
            *xi += coef * ui;
        }
    }
    let total: f64 = x.iter().sum();
    if !total.is_finite() || total == 0.0 {
        return Err(Error::DegenerateInput("minimum-variance weights are undefined".into()));
    }
    Ok(WeightVector { w: x.into_iter().map(|v| v / total).collect() })
}
