use rand::Rng;
use rand_distr::StandardNormal;

use super::esd::check_symmetric;
use super::SpectralDecomp;
use crate::seed::rng_for;
use crate::tick::{symmetrize, CovEstimate, EstimatorTag};
use crate::{Error, Matrix, Result};

/// PSD square root through the spectral decomposition. Eigenvalues down to
/// `-1e-10·tr/p` are treated as zero.
pub fn psd_sqrt(m: &Matrix) -> Result<Matrix> {
    let d = SpectralDecomp::new(m)?;
    let p = d.p() as f64;
    let tol = 1e-10 * m.trace().abs().max(f64::MIN_POSITIVE) / p;
    let min = d.lambda.last().copied().unwrap_or(0.0);
    if min < -tol {
        return Err(Error::NotPositiveSemidefinite(min));
    }
    let roots: Vec<f64> = d.lambda.iter().map(|&l| l.max(0.0).sqrt()).collect();
    Ok(d.compose(&roots))
}

/// `S = (1/m) Σ ICV^{1/2} Z_k Z_kᵀ ICV^{1/2}` with `Z_k ~ N(0, I_p)`.
pub fn sample_cov_reference(icv: &Matrix, m: usize, seed: u64) -> Result<CovEstimate> {
    check_symmetric(icv)?;
    if m == 0 {
        return Err(Error::InsufficientData("reference needs at least one sample".into()));
    }
    let root = psd_sqrt(icv)?;
    let p = icv.nrows();
    let mut rng = rng_for(seed, 0);
    let z = Matrix::from_fn(p, m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let y = root * z;
    let s = symmetrize(&y * y.transpose()) / m as f64;
    Ok(CovEstimate { n: m, ..CovEstimate::new(s, EstimatorTag::Reference) })
}
