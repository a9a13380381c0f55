use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ExperimentConfig;
use crate::sim::{build_lambda, sigma_breve};
use crate::spectral::{esd, linspace, mp_closed_form_density, mp_density, DiscreteMeasure, MpOptions};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpCurve {
    pub c: f64,
    pub eta: f64,
    pub x: Vec<f64>,
    pub density: Vec<f64>,
    /// Closed form, available when the population law is a point mass.
    pub closed_form: Option<Vec<f64>>,
}

/// Limiting density of the sample-covariance type matrix for the configured
/// population spectrum and ratio.
pub fn run_mp_curve(cfg: &ExperimentConfig) -> Result<MpCurve> {
    cfg.validate()?;
    let params = &cfg.mp_curve;
    let support = match &params.support {
        Some(s) => s.clone(),
        None => esd(&sigma_breve(&build_lambda(&cfg.lambda)?))?.values().to_vec(),
    };
    let h = DiscreteMeasure::uniform(support.clone())?;
    let top = support.iter().fold(0.0f64, |m, &v| m.max(v)) * params.scale;
    let lo = params.lo.unwrap_or(0.0);
    let hi = params.hi.unwrap_or(1.1 * top * (1.0 + params.c.sqrt()).powi(2));
    let eta = params.eta.unwrap_or(1e-2 * (hi - lo));
    let x = linspace(lo, hi, params.grid_points);
    let opts = MpOptions { scale: params.scale, ..MpOptions::default() };
    let density = mp_density(&h, params.c, &x, eta, &opts)?;
    let atom = support.windows(2).all(|w| w[0] == w[1]);
    let closed_form = atom.then(|| x.iter().map(|&v| mp_closed_form_density(params.c, support[0] * params.scale, v)).collect());
    Ok(MpCurve { c: params.c, eta, x, density, closed_form })
}

/// `curve.csv` and `curve.json` under `dir`.
pub fn write_mp_outputs(curve: &MpCurve, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("curve.csv"))?;
    w.write_record(["x", "density", "closed_form"])?;
    for (k, (x, f)) in curve.x.iter().zip(&curve.density).enumerate() {
        let cf = curve.closed_form.as_ref().map(|c| c[k].to_string()).unwrap_or_default();
        w.write_record([x.to_string(), f.to_string(), cf])?;
    }
    w.flush()?;
    std::fs::write(dir.join("curve.json"), serde_json::to_string_pretty(curve)?)?;
    Ok(())
}
