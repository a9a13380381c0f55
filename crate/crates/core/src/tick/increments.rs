use super::StampAverages;
use crate::{Error, Matrix, Result};

/// How an [`IncrementSeries`] was formed from stamp averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncrementKind {
    /// `ΔV̄_i` for `i = 2..=n`.
    All,
    /// `ΔV̄_{2i}` for `i = 1..=⌊n/2⌋`.
    Even,
    /// `ΔṼ_{2i}` for `i = 1..=⌊n/(2h)⌋` with block length `h`.
    PreAveraged { h: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    All,
    Even,
}

/// Ordered price increments, one column per increment, never straddling a
/// day boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementSeries {
    data: Matrix,
    day_bounds: Vec<usize>,
    kind: IncrementKind,
    n: usize,
}

impl IncrementSeries {
    /// Wraps raw increments (columns) of a single day.
    pub fn from_columns(data: Matrix, kind: IncrementKind, n: usize) -> Self {
        let count = data.ncols();
        Self { data, day_bounds: vec![0, count], kind, n }
    }

    pub fn p(&self) -> usize {
        self.data.nrows()
    }

    /// Stamps per day of the underlying averages.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> IncrementKind {
        self.kind
    }

    pub fn window(&self) -> Option<usize> {
        match self.kind {
            IncrementKind::PreAveraged { h } => Some(h),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.data.ncols() == 0
    }

    /// Increments per day implied by the kind: `n - 1`, `N` or `M`.
    pub fn per_day(&self) -> usize {
        per_day(self.kind, self.n)
    }

    pub fn day_count(&self) -> usize {
        self.day_bounds.len() - 1
    }

    pub fn matrix(&self) -> &Matrix {
        &self.data
    }

    pub fn column(&self, k: usize) -> nalgebra::DVectorView<'_, f64> {
        self.data.column(k)
    }

    pub fn day(&self, d: usize) -> IncrementSeries {
        let (a, b) = (self.day_bounds[d], self.day_bounds[d + 1]);
        Self {
            data: self.data.columns(a, b - a).into_owned(),
            day_bounds: vec![0, b - a],
            kind: self.kind,
            n: self.n,
        }
    }

    pub fn last_day(&self) -> IncrementSeries {
        self.day(self.day_count() - 1)
    }

    /// Joins series of the same kind along the day axis.
    pub fn concat(parts: &[IncrementSeries]) -> Result<IncrementSeries> {
        let first = parts.first().ok_or_else(|| Error::InsufficientData("no series to join".into()))?;
        let p = first.p();
        let total: usize = parts.iter().map(IncrementSeries::len).sum();
        let mut data = Matrix::zeros(p, total);
        let mut day_bounds = vec![0];
        let mut at = 0;
        for part in parts {
            if part.p() != p || part.kind != first.kind || part.n != first.n {
                return Err(Error::InvalidSpec("cannot join increment series of different shapes".into()));
            }
            data.columns_mut(at, part.len()).copy_from(&part.data);
            for w in part.day_bounds.windows(2) {
                day_bounds.push(at + w[1]);
            }
            at += part.len();
        }
        Ok(Self { data, day_bounds, kind: first.kind, n: first.n })
    }

    /// `Σ |Δ|²`.
    pub fn sum_sq_norms(&self) -> f64 {
        self.data.column_iter().map(|c| c.norm_squared()).sum()
    }
}

fn per_day(kind: IncrementKind, n: usize) -> usize {
    match kind {
        IncrementKind::All => n.saturating_sub(1),
        IncrementKind::Even => n / 2,
        IncrementKind::PreAveraged { h } => n / (2 * h),
    }
}

fn collect(avgs: &StampAverages, kind: IncrementKind, mut f: impl FnMut(&Matrix, usize) -> nalgebra::DVector<f64>) -> IncrementSeries {
    let (p, n) = (avgs.p(), avgs.n());
    let k = per_day(kind, n);
    let mut data = Matrix::zeros(p, k * avgs.day_count());
    let mut day_bounds = vec![0];
    for (d, day) in avgs.days().iter().enumerate() {
        for i in 0..k {
            data.set_column(d * k + i, &f(day, i));
        }
        day_bounds.push((d + 1) * k);
    }
    IncrementSeries { data, day_bounds, kind, n }
}

/// Stamp-average increments within each day.
pub fn increments(avgs: &StampAverages, parity: Parity) -> Result<IncrementSeries> {
    let n = avgs.n();
    if n < 2 || avgs.day_count() == 0 {
        return Err(Error::InsufficientData(format!("increments need at least 2 stamps, got {n}")));
    }
    Ok(match parity {
        Parity::All => collect(avgs, IncrementKind::All, |v, i| v.column(i + 1) - v.column(i)),
        Parity::Even => collect(avgs, IncrementKind::Even, |v, i| v.column(2 * i + 1) - v.column(2 * i)),
    })
}

/// Default pre-averaging window `⌊ξ n^β⌋`, at least 1.
pub fn default_window(n: usize, xi: f64, beta: f64) -> usize {
    ((xi * (n as f64).powf(beta)).floor() as usize).max(1)
}

/// Differences of adjacent disjoint `h`-block means: `Ṽ_{2i} - Ṽ_{2i-1}`.
pub fn pre_average(avgs: &StampAverages, h: usize) -> Result<IncrementSeries> {
    let n = avgs.n();
    if h == 0 || 2 * h > n {
        return Err(Error::InvalidWindow(format!("window {h} must satisfy 1 <= h <= n/2 with n = {n}")));
    }
    if avgs.day_count() == 0 {
        return Err(Error::InsufficientData("no trading days".into()));
    }
    let inv = 1.0 / h as f64;
    Ok(collect(avgs, IncrementKind::PreAveraged { h }, |v, i| {
        let first = v.columns(2 * i * h, h).column_sum();
        let second = v.columns((2 * i + 1) * h, h).column_sum();
        (second - first) * inv
    }))
}
