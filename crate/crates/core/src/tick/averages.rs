use super::TickPanel;
use crate::Matrix;

/// Per-stamp averaged prices `V̄_i`, one `p × n` matrix per day with column
/// `i` holding stamp `i + 1`. For asynchronous panels each stock is averaged
/// over its own transaction count.
#[derive(Debug, Clone, PartialEq)]
pub struct StampAverages {
    days: Vec<Matrix>,
    synchronous: bool,
}

impl StampAverages {
    pub fn from_days(days: Vec<Matrix>, synchronous: bool) -> Self {
        Self { days, synchronous }
    }

    pub fn p(&self) -> usize {
        self.days.first().map_or(0, Matrix::nrows)
    }

    pub fn n(&self) -> usize {
        self.days.first().map_or(0, Matrix::ncols)
    }

    pub fn day_count(&self) -> usize {
        self.days.len()
    }

    pub fn day(&self, d: usize) -> &Matrix {
        &self.days[d]
    }

    pub fn days(&self) -> &[Matrix] {
        &self.days
    }

    pub fn is_synchronous(&self) -> bool {
        self.synchronous
    }

    pub fn select_days(&self, range: std::ops::Range<usize>) -> StampAverages {
        Self { days: self.days[range].to_vec(), synchronous: self.synchronous }
    }

    pub fn last_day(&self) -> StampAverages {
        let d = self.days.len();
        self.select_days(d - 1..d)
    }
}

/// Arithmetic mean of the transaction prices in every (day, stamp, stock).
pub fn stamp_average(panel: &TickPanel) -> StampAverages {
    let (p, n) = (panel.p(), panel.n());
    let days = (0..panel.days())
        .map(|d| {
            let mut m = Matrix::zeros(p, n);
            for i in 0..n {
                for q in 0..p {
                    let prices = panel.prices(d, i, q);
                    m[(q, i)] = prices.iter().sum::<f64>() / prices.len() as f64;
                }
            }
            m
        })
        .collect();
    StampAverages { days, synchronous: panel.is_synchronous() }
}
