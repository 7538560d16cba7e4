//! Transaction dumps and canonical edge lists.
//!
//! Transactions come as JSON lines,
//!
//! ```text
//! {"tx":"t1","in":[["A",2],["B",8]],"out":[["C",2],["D",3],["E",4]]}
//! ```
//!
//! or as CSV with header `tx_id,side,address,amount`, one row per input or
//! output, rows of one transaction contiguous, `side` either `in` or `out`.
//! Amounts are decimal coins with at most eight fractional digits and are
//! converted to integer units on read.
//!
//! Edge lists are UTF-8 TSV: `src<TAB>dst<TAB>weight`, with an optional
//! fourth column carrying the collapsed-edge multiplicity when it exceeds one.
//! A line holding a single address declares a node without edges. Lines
//! starting with `#` are comments.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    expand_transaction, GraphBuilder, TransactionRecord, WeightedDigraph, UNITS_PER_COIN,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TxFormat {
    Jsonl,
    Csv,
}

impl std::str::FromStr for TxFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "jsonl" | "json" => Ok(TxFormat::Jsonl),
            "csv" => Ok(TxFormat::Csv),
            other => Err(format!("unknown transaction format `{other}`")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub transactions_read: u64,
    pub transactions_rejected: u64,
    pub edges_emitted: u64,
    pub distinct_addresses: u64,
    pub warnings: Vec<String>,
}

/// Parse a decimal coin amount into integer units. Rejects negatives and
/// more than eight fractional digits.
pub fn parse_amount(text: &str) -> Option<u64> {
    let text = text.trim();
    if text.is_empty() || text.starts_with('-') || text.starts_with('+') {
        return None;
    }
    // serde_json renders large or tiny floats in exponent form.
    if text.contains(['e', 'E']) {
        let value: f64 = text.parse().ok()?;
        if !value.is_finite() || value < 0.0 {
            return None;
        }
        let units = (value * UNITS_PER_COIN as f64).round();
        return (units <= u64::MAX as f64).then_some(units as u64);
    }
    let (whole, frac) = match text.split_once('.') {
        Some((w, f)) => (w, f),
        None => (text, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let frac = frac.trim_end_matches('0');
    if frac.len() > 8 {
        return None;
    }
    let whole: u64 = if whole.is_empty() {
        0
    } else {
        whole.parse().ok()?
    };
    let frac_units: u64 = if frac.is_empty() {
        0
    } else {
        format!("{frac:0<8}").parse().ok()?
    };
    whole.checked_mul(UNITS_PER_COIN)?.checked_add(frac_units)
}

#[derive(Deserialize)]
struct JsonTx {
    tx: String,
    #[serde(rename = "in")]
    inputs: Vec<(String, serde_json::Number)>,
    #[serde(rename = "out")]
    outputs: Vec<(String, serde_json::Number)>,
}

fn parse_json_line(line: &str) -> std::result::Result<TransactionRecord, String> {
    let raw: JsonTx = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let convert = |side: Vec<(String, serde_json::Number)>| {
        side.into_iter()
            .map(|(addr, n)| {
                parse_amount(&n.to_string())
                    .map(|a| (addr, a))
                    .ok_or_else(|| format!("invalid amount {n}"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()
    };
    Ok(TransactionRecord {
        tx_id: raw.tx,
        inputs: convert(raw.inputs)?,
        outputs: convert(raw.outputs)?,
    })
}

/// Outcome of parsing one unit of input.
enum Parsed {
    Record(TransactionRecord),
    Rejected(String),
}

/// Streaming transaction reader. Yields records in file order; malformed
/// records are counted in [`IngestStats::transactions_rejected`] and skipped.
pub struct TransactionReader {
    path: PathBuf,
    inner: ReaderKind,
    stats: IngestStats,
    seen_first: bool,
}

enum ReaderKind {
    Jsonl {
        lines: std::io::Lines<BufReader<File>>,
        line_no: usize,
    },
    Csv {
        rows: csv::StringRecordsIntoIter<File>,
        pending: Option<csv::StringRecord>,
    },
}

pub fn parse_transactions(path: impl AsRef<Path>, format: TxFormat) -> Result<TransactionReader> {
    let path = path.as_ref().to_path_buf();
    let file = File::open(&path).map_err(|e| Error::io(&path, e))?;
    let inner = match format {
        TxFormat::Jsonl => ReaderKind::Jsonl {
            lines: BufReader::new(file).lines(),
            line_no: 0,
        },
        TxFormat::Csv => {
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(true)
                .flexible(true)
                .trim(csv::Trim::All)
                .from_reader(file);
            let header_ok = match reader.headers() {
                Ok(h) => {
                    h.is_empty()
                        || (h.len() == 4
                            && h.get(0) == Some("tx_id")
                            && h.get(1) == Some("side")
                            && h.get(2) == Some("address")
                            && h.get(3) == Some("amount"))
                }
                Err(_) => false,
            };
            if !header_ok {
                return Err(Error::Format {
                    path,
                    message: "expected CSV header `tx_id,side,address,amount`".into(),
                });
            }
            ReaderKind::Csv {
                rows: reader.into_records(),
                pending: None,
            }
        }
    };
    Ok(TransactionReader {
        path,
        inner,
        stats: IngestStats::default(),
        seen_first: false,
    })
}

impl TransactionReader {
    pub fn stats(&self) -> &IngestStats {
        &self.stats
    }

    pub fn into_stats(self) -> IngestStats {
        self.stats
    }

    fn next_parsed(&mut self) -> Option<Result<Parsed>> {
        match &mut self.inner {
            ReaderKind::Jsonl { lines, line_no } => loop {
                let line = match lines.next()? {
                    Ok(l) => l,
                    Err(e) if e.kind() == std::io::ErrorKind::InvalidData => {
                        *line_no += 1;
                        return Some(Ok(Parsed::Rejected(format!(
                            "line {line_no}: invalid UTF-8"
                        ))));
                    }
                    Err(e) => return Some(Err(Error::io(&self.path, e))),
                };
                *line_no += 1;
                if line.trim().is_empty() {
                    continue;
                }
                return Some(Ok(match parse_json_line(&line) {
                    Ok(tx) => Parsed::Record(tx),
                    Err(msg) => Parsed::Rejected(format!("line {line_no}: {msg}")),
                }));
            },
            ReaderKind::Csv { rows, pending } => {
                let first = match pending.take() {
                    Some(r) => r,
                    None => match rows.next()? {
                        Ok(r) => r,
                        Err(e) => return Some(Ok(Parsed::Rejected(e.to_string()))),
                    },
                };
                let tx_id = first.get(0).unwrap_or_default().to_owned();
                let mut group = vec![first];
                loop {
                    match rows.next() {
                        None => break,
                        Some(Ok(r)) if r.get(0) == Some(tx_id.as_str()) => group.push(r),
                        Some(Ok(r)) => {
                            *pending = Some(r);
                            break;
                        }
                        Some(Err(_)) => {
                            // A broken row poisons the transaction it sits in.
                            group.clear();
                            break;
                        }
                    }
                }
                Some(Ok(csv_group(tx_id, &group)))
            }
        }
    }
}

fn csv_group(tx_id: String, rows: &[csv::StringRecord]) -> Parsed {
    if rows.is_empty() {
        return Parsed::Rejected(format!("transaction {tx_id}: unreadable row"));
    }
    let mut tx = TransactionRecord {
        tx_id,
        inputs: Vec::new(),
        outputs: Vec::new(),
    };
    for row in rows {
        if row.len() != 4 {
            return Parsed::Rejected(format!("transaction {}: expected 4 fields", tx.tx_id));
        }
        let Some(amount) = parse_amount(&row[3]) else {
            return Parsed::Rejected(format!(
                "transaction {}: invalid amount {}",
                tx.tx_id, &row[3]
            ));
        };
        let entry = (row[2].to_owned(), amount);
        match &row[1] {
            "in" => tx.inputs.push(entry),
            "out" => tx.outputs.push(entry),
            other => {
                return Parsed::Rejected(format!("transaction {}: unknown side {other}", tx.tx_id));
            }
        }
    }
    Parsed::Record(tx)
}

impl Iterator for TransactionReader {
    type Item = Result<TransactionRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let parsed = match self.next_parsed()? {
                Ok(p) => p,
                Err(e) => return Some(Err(e)),
            };
            let first = !self.seen_first;
            self.seen_first = true;
            match parsed {
                Parsed::Record(tx) => {
                    self.stats.transactions_read += 1;
                    return Some(Ok(tx));
                }
                Parsed::Rejected(msg) if first => {
                    return Some(Err(Error::Format {
                        path: self.path.clone(),
                        message: msg,
                    }));
                }
                Parsed::Rejected(msg) => {
                    self.stats.transactions_read += 1;
                    self.stats.transactions_rejected += 1;
                    self.stats.warnings.push(msg);
                }
            }
        }
    }
}

const QUEUE_DEPTH: usize = 1024;

/// Parse a transaction file and build its graph. Parsing runs on its own
/// thread and hands records to the builder through a bounded queue in file
/// order.
pub fn ingest_transactions(
    path: impl AsRef<Path>,
    format: TxFormat,
) -> Result<(WeightedDigraph, IngestStats)> {
    let mut reader = parse_transactions(path, format)?;
    let (sender, receiver) = mpsc::sync_channel::<Result<TransactionRecord>>(QUEUE_DEPTH);
    let parser = thread::spawn(move || {
        for item in reader.by_ref() {
            let stop = item.is_err();
            if sender.send(item).is_err() || stop {
                break;
            }
        }
        reader.into_stats()
    });

    let mut builder = GraphBuilder::new();
    let mut rejected = 0u64;
    let mut edges = 0u64;
    let mut warnings = Vec::new();
    let mut failure = None;
    for item in receiver {
        let tx = match item {
            Ok(tx) => tx,
            Err(e) => {
                failure = Some(e);
                break;
            }
        };
        match expand_transaction(&tx) {
            Ok(expanded) => {
                if tx.overspends() {
                    let msg = format!("transaction {}: outputs exceed inputs", tx.tx_id);
                    log::warn!("{msg}");
                    warnings.push(msg);
                }
                edges += expanded.len() as u64;
                for e in expanded {
                    builder.add_edge(&e.src, &e.dst, e.weight);
                }
            }
            Err(e) => {
                rejected += 1;
                warnings.push(e.to_string());
            }
        }
    }
    let mut stats = parser.join().expect("transaction parser panicked");
    if let Some(e) = failure {
        return Err(e);
    }
    stats.transactions_rejected += rejected;
    stats.edges_emitted = edges;
    stats.distinct_addresses = builder.node_count() as u64;
    stats.warnings.extend(warnings);
    Ok((builder.finish(), stats))
}

/// Render a weight with 12 significant digits in its shortest form.
pub fn format_weight(w: f64) -> String {
    let rounded: f64 = format!("{w:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<WeightedDigraph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_edge_list_from(BufReader::new(file), path)
}

pub fn read_edge_list_from(reader: impl BufRead, path: &Path) -> Result<WeightedDigraph> {
    let mut builder = GraphBuilder::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let malformed = || Error::MalformedLine {
            path: path.to_path_buf(),
            line_no,
        };
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => malformed(),
            _ => Error::io(path, e),
        })?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match fields.as_slice() {
            [node] if !node.is_empty() => builder.add_node(node),
            [src, dst, weight] | [src, dst, weight, _] if !src.is_empty() && !dst.is_empty() => {
                let weight: f64 = weight.trim().parse().map_err(|_| malformed())?;
                if !weight.is_finite() || weight < 0.0 {
                    return Err(malformed());
                }
                let multiplicity = match fields.get(3) {
                    Some(m) => m
                        .trim()
                        .parse::<u32>()
                        .ok()
                        .filter(|&m| m > 0)
                        .ok_or_else(malformed)?,
                    None => 1,
                };
                builder.add_edge_with_multiplicity(src, dst, weight, multiplicity);
            }
            _ => return Err(malformed()),
        }
    }
    Ok(builder.finish())
}

pub fn write_edge_list(g: &WeightedDigraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_edge_list_to(g, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

/// Canonical edge-list text: isolated nodes first, then edges, each sorted by
/// label.
pub fn write_edge_list_to(g: &WeightedDigraph, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "# src\tdst\tweight[\tmultiplicity]")?;
    let mut isolated: Vec<&str> = g
        .nodes()
        .filter(|&v| g.out_degree(v) == 0 && g.in_degree(v) == 0)
        .map(|v| g.label(v))
        .collect();
    isolated.sort_unstable();
    for label in isolated {
        writeln!(out, "{label}")?;
    }
    let mut edges: Vec<_> = g.edges().collect();
    edges.sort_by(|a, b| (g.label(a.src), g.label(a.dst)).cmp(&(g.label(b.src), g.label(b.dst))));
    for e in edges {
        write!(
            out,
            "{}\t{}\t{}",
            g.label(e.src),
            g.label(e.dst),
            format_weight(e.weight)
        )?;
        if e.multiplicity > 1 {
            write!(out, "\t{}", e.multiplicity)?;
        }
        writeln!(out)?;
    }
    Ok(())
}
