use nalgebra::SymmetricEigen;

use super::esd::check_symmetric;
use crate::{Matrix, Result};

/// Eigendecomposition `A = U diag(λ) Uᵀ` with eigenvalues descending and
/// eigenvectors in the matching columns of `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomp {
    pub u: Matrix,
    pub lambda: Vec<f64>,
}

impl SpectralDecomp {
    pub fn new(m: &Matrix) -> Result<Self> {
        check_symmetric(m)?;
        let eig = SymmetricEigen::new(m.clone());
        let p = m.nrows();
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let mut u = Matrix::zeros(p, p);
        for (k, &src) in order.iter().enumerate() {
            u.set_column(k, &eig.eigenvectors.column(src));
        }
        let lambda = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        Ok(Self { u, lambda })
    }

    pub fn p(&self) -> usize {
        self.lambda.len()
    }

    /// `U diag(d) Uᵀ`, exactly symmetric.
    pub fn compose(&self, d: &[f64]) -> Matrix {
        let mut scaled = self.u.clone();
        for (mut col, &v) in scaled.column_iter_mut().zip(d) {
            col *= v;
        }
        crate::tick::symmetrize(&scaled * self.u.transpose())
    }
}
