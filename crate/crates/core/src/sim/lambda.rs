use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::{Error, Matrix, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LambdaKind {
    /// `Λ_ij = 0.5^|i-j|`.
    ToeplitzHalf { p: usize },
    /// Toeplitz base whose largest eigenvalues are replaced, in descending
    /// order, by `leading`.
    Spiked { p: usize, leading: Vec<f64> },
}

/// Recipe for the constant factor `Λ` of a class-C covolatility `γ_t Λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSpec {
    #[serde(flatten)]
    pub kind: LambdaKind,
    /// Rescale so that `tr(ΛΛᵀ) = p`.
    #[serde(default)]
    pub rescale_trace: bool,
}

impl LambdaSpec {
    pub fn toeplitz(p: usize) -> Self {
        Self { kind: LambdaKind::ToeplitzHalf { p }, rescale_trace: false }
    }

    pub fn spiked(p: usize, leading: Vec<f64>) -> Self {
        Self { kind: LambdaKind::Spiked { p, leading }, rescale_trace: true }
    }

    pub fn with_rescale(mut self, rescale: bool) -> Self {
        self.rescale_trace = rescale;
        self
    }

    pub fn dimension(&self) -> usize {
        match &self.kind {
            LambdaKind::ToeplitzHalf { p } | LambdaKind::Spiked { p, .. } => *p,
        }
    }
}

fn toeplitz_half(p: usize) -> Matrix {
    Matrix::from_fn(p, p, |i, j| 0.5f64.powi(i.abs_diff(j) as i32))
}

/// Builds `Λ` from its spec.
pub fn build_lambda(spec: &LambdaSpec) -> Result<Matrix> {
    let p = spec.dimension();
    if p == 0 {
        return Err(Error::InvalidSpec("lambda dimension must be at least 1".into()));
    }
    let mut lambda = match &spec.kind {
        LambdaKind::ToeplitzHalf { .. } => toeplitz_half(p),
        LambdaKind::Spiked { leading, .. } => {
            if leading.len() > p {
                return Err(Error::InvalidSpec(format!(
                    "{} replacement eigenvalues for dimension {p}",
                    leading.len()
                )));
            }
            if let Some(bad) = leading.iter().find(|v| !(**v > 0.0)) {
                return Err(Error::InvalidSpec(format!(
                    "replacement eigenvalue {bad} is not positive"
                )));
            }
            let eig = SymmetricEigen::new(toeplitz_half(p));
            let mut order: Vec<usize> = (0..p).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
            let mut values = eig.eigenvalues.clone();
            for (slot, &v) in order.iter().zip(leading) {
                values[*slot] = v;
            }
            let u = &eig.eigenvectors;
            let rebuilt = u * Matrix::from_diagonal(&values) * u.transpose();
            (&rebuilt + rebuilt.transpose()) * 0.5
        }
    };
    if spec.rescale_trace {
        let trace = (&lambda * lambda.transpose()).trace();
        lambda *= (p as f64 / trace).sqrt();
    }
    Ok(lambda)
}

/// `Σ̆ = ΛΛᵀ`.
pub fn sigma_breve(lambda: &Matrix) -> Matrix {
    let s = lambda * lambda.transpose();
    (&s + s.transpose()) * 0.5
}
