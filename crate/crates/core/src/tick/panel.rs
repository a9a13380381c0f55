use crate::sim::Clock;
use crate::{Error, Result};

/// Multi-transaction price record: for every (day, stamp, stock) the
/// ordered list of `L_i^(q) >= 1` log prices observed in that stamp.
///
/// Storage is flat and day-major, then stamp, then stock, so the prices of
/// one stamp across all stocks are contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct TickPanel {
    p: usize,
    n: usize,
    days: usize,
    counts: Vec<u32>,
    offsets: Vec<usize>,
    prices: Vec<f64>,
}

impl TickPanel {
    pub fn from_parts(p: usize, n: usize, days: usize, counts: Vec<u32>, prices: Vec<f64>) -> Result<Self> {
        if p == 0 || n == 0 || days == 0 {
            return Err(Error::InvalidSpec(format!("empty panel shape p={p} n={n} days={days}")));
        }
        let cells = p * n * days;
        if counts.len() != cells {
            return Err(Error::DimensionMismatch { expected: cells, found: counts.len() });
        }
        if counts.contains(&0) {
            return Err(Error::InvalidSpec("every stamp needs at least one price per stock".into()));
        }
        let mut offsets = Vec::with_capacity(cells + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for &c in &counts {
            acc += c as usize;
            offsets.push(acc);
        }
        if acc != prices.len() {
            return Err(Error::DimensionMismatch { expected: acc, found: prices.len() });
        }
        Ok(Self { p, n, days, counts, offsets, prices })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn days(&self) -> usize {
        self.days
    }

    #[inline]
    fn cell(&self, day: usize, stamp: usize, stock: usize) -> usize {
        (day * self.n + stamp) * self.p + stock
    }

    /// Prices of `stock` in `stamp` of `day` (all 0-based).
    #[inline]
    pub fn prices(&self, day: usize, stamp: usize, stock: usize) -> &[f64] {
        let c = self.cell(day, stamp, stock);
        &self.prices[self.offsets[c]..self.offsets[c + 1]]
    }

    pub fn count(&self, day: usize, stamp: usize, stock: usize) -> u32 {
        self.counts[self.cell(day, stamp, stock)]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn all_prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn total_transactions(&self) -> usize {
        self.prices.len()
    }

    /// Transaction counts of one day as a [`Clock`].
    pub fn clock(&self, day: usize) -> Clock {
        let per_day = self.n * self.p;
        let counts = self.counts[day * per_day..(day + 1) * per_day].to_vec();
        Clock::from_counts(self.n, self.p, counts).expect("panel counts are validated")
    }

    pub fn is_synchronous(&self) -> bool {
        self.counts.chunks(self.p).all(|row| row.iter().all(|&c| c == row[0]))
    }

    /// Panel restricted to the half-open day range.
    pub fn select_days(&self, range: std::ops::Range<usize>) -> Result<TickPanel> {
        if range.start >= range.end || range.end > self.days {
            return Err(Error::InvalidSpec(format!("day range {range:?} outside 0..{}", self.days)));
        }
        let per_day = self.n * self.p;
        let (c0, c1) = (range.start * per_day, range.end * per_day);
        let counts = self.counts[c0..c1].to_vec();
        let prices = self.prices[self.offsets[c0]..self.offsets[c1]].to_vec();
        TickPanel::from_parts(self.p, self.n, range.len(), counts, prices)
    }

    /// Concatenates panels with matching `p` and `n` along the day axis.
    pub fn concat(panels: &[TickPanel]) -> Result<TickPanel> {
        let first = panels.first().ok_or_else(|| Error::InsufficientData("no panels to concatenate".into()))?;
        let mut counts = Vec::new();
        let mut prices = Vec::new();
        let mut days = 0;
        for panel in panels {
            if panel.p != first.p {
                return Err(Error::DimensionMismatch { expected: first.p, found: panel.p });
            }
            if panel.n != first.n {
                return Err(Error::DimensionMismatch { expected: first.n, found: panel.n });
            }
            counts.extend_from_slice(&panel.counts);
            prices.extend_from_slice(&panel.prices);
            days += panel.days;
        }
        TickPanel::from_parts(first.p, first.n, days, counts, prices)
    }

    /// Same layout with every price replaced through `f`.
    pub fn map_prices(&self, mut f: impl FnMut(f64) -> f64) -> TickPanel {
        TickPanel {
            prices: self.prices.iter().map(|&x| f(x)).collect(),
            ..self.clone()
        }
    }
}
