use super::DayPath;

/// Pathwise integrals of the simulated volatility for one day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizedTargets {
    /// `∫ γ² dt`.
    pub theta: f64,
    /// `∫ (1/3 + f̂₂(t)/6) γ² dt`, where `f̂₂` is the mean of `1/L²` across
    /// stocks in the stamp containing `t`.
    pub theta_tilde_f: f64,
}

/// Left-Riemann targets on the stored fine grid.
pub fn realized_targets(day: &DayPath) -> RealizedTargets {
    let mut theta = 0.0;
    let mut theta_tilde_f = 0.0;
    for i in 0..day.clock.n() {
        let weight = 1.0 / 3.0 + day.clock.mean_inv_sq(i) / 6.0;
        let mut piece = 0.0;
        for k in day.stamp_steps[i]..day.stamp_steps[i + 1] {
            piece += day.gamma[k] * day.gamma[k] * (day.grid[k + 1] - day.grid[k]);
        }
        theta += piece;
        theta_tilde_f += weight * piece;
    }
    RealizedTargets { theta, theta_tilde_f }
}
