use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::tick::io::{read_panel, PANEL_HEADER};
use crate::tick::TickPanel;
use crate::{Error, Result};

/// Bucketing rules for raw trade files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IngestOptions {
    pub stamp_seconds: f64,
    pub trim_open_minutes: f64,
    pub session_seconds: f64,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self { stamp_seconds: 1.0, trim_open_minutes: 5.0, session_seconds: 23400.0 }
    }
}

#[derive(Debug, Deserialize)]
struct Trade {
    /// Seconds since the session open.
    timestamp: f64,
    stock: String,
    price: f64,
}

/// Reads one day of ticks. A panel CSV (`day,stamp,stock,txn_index,price`,
/// log prices) is taken as is. A raw `timestamp,stock,price` file is
/// bucketed into stamps of `stamp_seconds` after dropping the first
/// `trim_open_minutes`, log-transformed, and empty stamps are filled with
/// the previous price (the first traded price before the first trade).
pub fn ingest_ticks(path: &Path, stamp_seconds: f64, trim_open_minutes: f64) -> Result<TickPanel> {
    ingest_ticks_with(path, &IngestOptions { stamp_seconds, trim_open_minutes, ..Default::default() })
}

pub fn ingest_ticks_with(path: &Path, opts: &IngestOptions) -> Result<TickPanel> {
    let text = std::fs::read_to_string(path)?;
    let header = text.lines().next().unwrap_or_default();
    if header.split(',').map(str::trim).eq(PANEL_HEADER) {
        return read_panel(text.as_bytes());
    }
    bucket_trades(text.as_bytes(), opts)
}

/// Number of stamps in the trimmed session.
pub fn stamp_count(opts: &IngestOptions) -> usize {
    ((opts.session_seconds - 60.0 * opts.trim_open_minutes) / opts.stamp_seconds + 1e-9).floor() as usize
}

pub fn bucket_trades<R: std::io::Read>(input: R, opts: &IngestOptions) -> Result<TickPanel> {
    if !(opts.stamp_seconds > 0.0) {
        return Err(Error::Ingestion(format!("stamp length {} must be positive", opts.stamp_seconds)));
    }
    let n = stamp_count(opts);
    if n < 2 {
        return Err(Error::Ingestion(format!("session leaves {n} stamps")));
    }
    let start = 60.0 * opts.trim_open_minutes;
    let mut reader = csv::Reader::from_reader(input);
    let mut by_stock: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();
    let mut seen: BTreeMap<String, ()> = BTreeMap::new();
    for row in reader.deserialize() {
        let t: Trade = row?;
        seen.insert(t.stock.clone(), ());
        if !(t.price > 0.0) {
            return Err(Error::Ingestion(format!("non-positive price {} for {}", t.price, t.stock)));
        }
        if t.timestamp <= start && opts.trim_open_minutes > 0.0 {
            continue;
        }
        let offset = (t.timestamp - start).max(0.0);
        let stamp = ((offset / opts.stamp_seconds).ceil() as usize).clamp(1, n) - 1;
        if t.timestamp > opts.session_seconds {
            continue;
        }
        by_stock.entry(t.stock).or_insert_with(|| vec![Vec::new(); n])[stamp].push(t.price.ln());
    }
    let missing: Vec<&String> = seen.keys().filter(|s| !by_stock.contains_key(*s)).collect();
    if !missing.is_empty() {
        return Err(Error::Ingestion(format!("no trades in session for {missing:?}")));
    }
    if by_stock.is_empty() {
        return Err(Error::Ingestion("file has no trades".into()));
    }
    let p = by_stock.len();
    let stocks: Vec<Vec<Vec<f64>>> = by_stock
        .into_values()
        .map(|mut stamps| {
            let first = stamps.iter().find_map(|s| s.first().copied()).expect("stock has a trade");
            let mut prev = first;
            for s in stamps.iter_mut() {
                if s.is_empty() {
                    s.push(prev);
                }
                prev = *s.last().expect("non-empty");
            }
            stamps
        })
        .collect();
    let mut counts = Vec::with_capacity(n * p);
    let mut prices = Vec::new();
    for i in 0..n {
        for stock in &stocks {
            counts.push(stock[i].len() as u32);
            prices.extend_from_slice(&stock[i]);
        }
    }
    TickPanel::from_parts(p, n, 1, counts, prices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(stamp: f64, session: f64) -> IngestOptions {
        IngestOptions { stamp_seconds: stamp, trim_open_minutes: 0.0, session_seconds: session }
    }

    #[test]
    fn ten_second_stamps() {
        assert_eq!(stamp_count(&opts(10.0, 23400.0)), 2340);
        assert_eq!(stamp_count(&IngestOptions { stamp_seconds: 60.0, ..Default::default() }), 385);
    }

    #[test]
    fn forward_fill_and_order() {
        let csv = "timestamp,stock,price\n0.5,B,2.0\n1.5,A,1.0\n1.7,A,4.0\n9.9,B,8.0\n";
        let panel = bucket_trades(csv.as_bytes(), &opts(1.0, 10.0)).unwrap();
        assert_eq!((panel.p(), panel.n()), (2, 10));
        // A first trades in stamp 2; stamp 1 is back-filled
        assert_eq!(panel.prices(0, 0, 0), &[1.0f64.ln()]);
        assert_eq!(panel.prices(0, 1, 0), &[1.0f64.ln(), 4.0f64.ln()]);
        assert_eq!(panel.prices(0, 5, 0), &[4.0f64.ln()]);
        assert_eq!(panel.prices(0, 8, 1), &[2.0f64.ln()]);
        assert_eq!(panel.prices(0, 9, 1), &[8.0f64.ln()]);
    }

    #[test]
    fn trim_removes_open() {
        let csv = "timestamp,stock,price\n30,A,1.0\n61,A,2.0\n";
        let o = IngestOptions { stamp_seconds: 60.0, trim_open_minutes: 1.0, session_seconds: 180.0 };
        let panel = bucket_trades(csv.as_bytes(), &o).unwrap();
        assert_eq!(panel.n(), 2);
        assert_eq!(panel.prices(0, 0, 0), &[2.0f64.ln()]);
        let only_open = "timestamp,stock,price\n30,A,1.0\n61,B,2.0\n";
        assert!(matches!(bucket_trades(only_open.as_bytes(), &o), Err(Error::Ingestion(_))));
    }
}
