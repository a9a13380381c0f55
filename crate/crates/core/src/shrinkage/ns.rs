use crate::spectral::SpectralDecomp;
use crate::tick::{CovEstimate, EstimatorTag};
use crate::{Error, Matrix, Result};

/// Source of the shrunk eigenvalues `d̂_i` for a fixed eigenbasis.
pub trait EigenvalueProvider {
    fn eigenvalues(&self, decomp: &SpectralDecomp) -> Result<Vec<f64>>;
}

/// `d_i = uᵢᵀ Σ̆ uᵢ` from the true `Σ̆`.
#[derive(Debug, Clone, Copy)]
pub struct Oracle<'a> {
    pub sigma_breve: &'a Matrix,
}

impl EigenvalueProvider for Oracle<'_> {
    fn eigenvalues(&self, decomp: &SpectralDecomp) -> Result<Vec<f64>> {
        let p = decomp.p();
        if self.sigma_breve.nrows() != p || self.sigma_breve.ncols() != p {
            return Err(Error::DimensionMismatch { expected: p, found: self.sigma_breve.nrows() });
        }
        let su = self.sigma_breve * &decomp.u;
        Ok((0..p).map(|i| decomp.u.column(i).dot(&su.column(i))).collect())
    }
}

/// Externally computed eigenvalues, e.g. from a spectrum-recovery routine.
#[derive(Debug, Clone)]
pub struct Supplied(pub Vec<f64>);

impl EigenvalueProvider for Supplied {
    fn eigenvalues(&self, decomp: &SpectralDecomp) -> Result<Vec<f64>> {
        if self.0.len() != decomp.p() {
            return Err(Error::DimensionMismatch { expected: decomp.p(), found: self.0.len() });
        }
        Ok(self.0.clone())
    }
}

/// `θ̂ · U diag(d̂) Uᵀ` with `d̂` from `provider`.
pub fn ns_with(decomp: &SpectralDecomp, provider: &dyn EigenvalueProvider, theta_hat: f64) -> Result<CovEstimate> {
    let d = provider.eigenvalues(decomp)?;
    let matrix = decomp.compose(&d) * theta_hat;
    Ok(CovEstimate { theta_hat: Some(theta_hat), ..CovEstimate::new(matrix, EstimatorTag::ShrunkNs) })
}

/// Oracle nonlinear shrinkage: the Frobenius projection of `Σ̆` onto
/// matrices sharing the eigenvectors of `decomp`, scaled by `θ̂`.
pub fn oracle_ns(decomp: &SpectralDecomp, sigma_breve: &Matrix, theta_hat: f64) -> Result<CovEstimate> {
    ns_with(decomp, &Oracle { sigma_breve }, theta_hat)
}

/// Relative Frobenius loss `‖Q - ICV‖_F / ‖ICV‖_F`.
pub fn rfl(estimate: &Matrix, icv: &Matrix) -> Result<f64> {
    if estimate.shape() != icv.shape() {
        return Err(Error::DimensionMismatch { expected: icv.nrows(), found: estimate.nrows() });
    }
    let norm = icv.norm();
    if norm == 0.0 {
        return Err(Error::DegenerateInput("ICV is zero".into()));
    }
    Ok((estimate - icv).norm() / norm)
}
