//! CSV and JSON encodings of panels and covariance estimates.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CovEstimate, TickPanel};
use crate::{Error, Result};

pub const PANEL_HEADER: [&str; 5] = ["day", "stamp", "stock", "txn_index", "price"];

/// JSON sidecar written next to a panel CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PanelMeta {
    pub p: usize,
    pub n: usize,
    pub days: usize,
    pub seed: u64,
    /// Hex SHA-256 of the canonical JSON of the generating spec.
    pub spec_digest: String,
}

/// Hex SHA-256 of `value` serialized as JSON.
pub fn spec_digest<T: Serialize>(value: &T) -> Result<String> {
    let bytes = serde_json::to_vec(value)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[derive(Debug, Serialize, Deserialize)]
struct PanelRow {
    day: usize,
    stamp: usize,
    stock: usize,
    txn_index: usize,
    price: f64,
}

/// Writes one row per transaction with 1-based indices and prices in
/// round-trip exponent notation.
pub fn write_panel<W: Write>(panel: &TickPanel, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PANEL_HEADER)?;
    let mut buf = String::new();
    for d in 0..panel.days() {
        for i in 0..panel.n() {
            for q in 0..panel.p() {
                for (j, price) in panel.prices(d, i, q).iter().enumerate() {
                    buf.clear();
                    use std::fmt::Write as _;
                    let _ = write!(buf, "{price:.16e}");
                    w.write_record([
                        (d + 1).to_string().as_str(),
                        (i + 1).to_string().as_str(),
                        (q + 1).to_string().as_str(),
                        (j + 1).to_string().as_str(),
                        buf.as_str(),
                    ])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a panel CSV. Rows may come in any order but every
/// (day, stamp, stock) cell must be present with dense transaction indices.
pub fn read_panel<R: Read>(input: R) -> Result<TickPanel> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.iter().ne(PANEL_HEADER) {
        return Err(Error::Ingestion(format!("unexpected panel header {headers:?}")));
    }
    let mut cells: BTreeMap<(usize, usize, usize), BTreeMap<usize, f64>> = BTreeMap::new();
    let (mut days, mut n, mut p) = (0, 0, 0);
    for row in reader.deserialize() {
        let row: PanelRow = row?;
        if row.day == 0 || row.stamp == 0 || row.stock == 0 || row.txn_index == 0 {
            return Err(Error::Ingestion("panel indices are 1-based".into()));
        }
        days = days.max(row.day);
        n = n.max(row.stamp);
        p = p.max(row.stock);
        let cell = cells.entry((row.day - 1, row.stamp - 1, row.stock - 1)).or_default();
        if cell.insert(row.txn_index, row.price).is_some() {
            return Err(Error::Ingestion(format!(
                "duplicate transaction day {} stamp {} stock {} index {}",
                row.day, row.stamp, row.stock, row.txn_index
            )));
        }
    }
    if cells.len() != days * n * p {
        return Err(Error::Ingestion(format!(
            "panel has {} of {} (day, stamp, stock) cells",
            cells.len(),
            days * n * p
        )));
    }
    let mut counts = Vec::with_capacity(cells.len());
    let mut prices = Vec::new();
    for (&(d, i, q), txns) in &cells {
        if txns.keys().copied().ne(1..=txns.len()) {
            return Err(Error::Ingestion(format!(
                "transaction indices of day {} stamp {} stock {} are not 1..L",
                d + 1,
                i + 1,
                q + 1
            )));
        }
        counts.push(txns.len() as u32);
        prices.extend(txns.values());
    }
    TickPanel::from_parts(p, n, days, counts, prices)
}

pub fn save_panel(panel: &TickPanel, meta: &PanelMeta, csv_path: &Path, json_path: &Path) -> Result<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(csv_path)?);
    write_panel(panel, file)?;
    std::fs::write(json_path, serde_json::to_string_pretty(meta)?)?;
    Ok(())
}

pub fn load_panel(csv_path: &Path) -> Result<TickPanel> {
    read_panel(std::io::BufReader::new(std::fs::File::open(csv_path)?))
}

/// JSON metadata for a covariance estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovMeta {
    pub tag: String,
    pub p: usize,
    pub n: usize,
    pub h: Option<usize>,
    pub theta_hat: Option<f64>,
}

impl From<&CovEstimate> for CovMeta {
    fn from(e: &CovEstimate) -> Self {
        Self { tag: e.tag.as_str().to_string(), p: e.p(), n: e.n, h: e.h, theta_hat: e.theta_hat }
    }
}

/// Row-major `i,j,value` with 1-based indices.
pub fn write_cov<W: Write>(estimate: &CovEstimate, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["i", "j", "value"])?;
    let m = &estimate.matrix;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            w.write_record([(i + 1).to_string(), (j + 1).to_string(), format!("{:.16e}", m[(i, j)])])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn save_cov(estimate: &CovEstimate, csv_path: &Path, json_path: &Path) -> Result<()> {
    write_cov(estimate, std::io::BufWriter::new(std::fs::File::create(csv_path)?))?;
    std::fs::write(json_path, serde_json::to_string_pretty(&CovMeta::from(estimate))?)?;
    Ok(())
}
