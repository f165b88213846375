//! Text formats.
//!
//! * Edge list: `src<TAB>dst<TAB>count` per line. IDs are 0-based integers,
//!   or arbitrary labels mapped to dense ids in first-seen order (label mode
//!   is used as soon as one ID is not a nonnegative integer).
//! * Dense CSV: `n` rows of `n` comma-separated nonnegative integers.
//! * Pair list: `selector<TAB>selected<TAB>similarity`, similarity with six
//!   decimals.
//! * Partition: `node<TAB>label`.
//!
//! Blank lines and lines starting with `#` are ignored by every reader.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::community::{DetectionResult, Partition, Provenance};
use crate::error::{Error, Result};
use crate::selection::{RankedPair, RankedPairList};
use crate::similarity::CitationMatrix;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Edges,
    Dense,
}

impl FromStr for InputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edges" => Ok(InputFormat::Edges),
            "dense" => Ok(InputFormat::Dense),
            other => Err(Error::Config(format!("unknown input format `{other}`"))),
        }
    }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines<R: BufRead>(reader: R, name: &str) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::parse(name, idx + 1, e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        out.push((idx + 1, trimmed.to_string()));
    }
    Ok(out)
}

fn split_tab<'a>(line: &'a str, name: &str, lineno: usize) -> Result<[&'a str; 3]> {
    let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
    match fields.as_slice() {
        [a, b, c] => Ok([a, b, c]),
        _ => Err(Error::parse(
            name,
            lineno,
            format!("expected 3 tab-separated fields, found {}", fields.len()),
        )),
    }
}

/// Maps node tokens to dense ids. Numeric when every token is an integer.
struct NodeIds {
    ids: Vec<usize>,
    n_nodes: usize,
    labels: Option<Vec<String>>,
}

fn resolve_ids(tokens: &[&str]) -> NodeIds {
    let numeric: Option<Vec<usize>> = tokens.iter().map(|t| t.parse::<usize>().ok()).collect();
    match numeric {
        Some(ids) => NodeIds {
            n_nodes: ids.iter().max().map_or(0, |m| m + 1),
            ids,
            labels: None,
        },
        None => {
            let mut index: HashMap<&str, usize> = HashMap::new();
            let mut labels = Vec::new();
            let ids = tokens
                .iter()
                .map(|&t| {
                    *index.entry(t).or_insert_with(|| {
                        labels.push(t.to_string());
                        labels.len() - 1
                    })
                })
                .collect();
            NodeIds {
                ids,
                n_nodes: labels.len(),
                labels: Some(labels),
            }
        }
    }
}

pub fn read_edge_list<R: BufRead>(reader: R, name: &str) -> Result<CitationMatrix> {
    let lines = content_lines(reader, name)?;
    let mut tokens = Vec::with_capacity(lines.len() * 2);
    let mut counts = Vec::with_capacity(lines.len());
    for (lineno, line) in &lines {
        let [src, dst, count] = split_tab(line, name, *lineno)?;
        if src.is_empty() || dst.is_empty() {
            return Err(Error::parse(name, *lineno, "empty node id"));
        }
        let count: u64 = count.parse().map_err(|_| {
            Error::parse(
                name,
                *lineno,
                format!("count `{count}` is not a nonnegative integer"),
            )
        })?;
        tokens.push(src);
        tokens.push(dst);
        counts.push(count);
    }
    let nodes = resolve_ids(&tokens);
    let mut m = CitationMatrix::new(nodes.n_nodes);
    for (k, &count) in counts.iter().enumerate() {
        m.add(nodes.ids[2 * k], nodes.ids[2 * k + 1], count)?;
    }
    match nodes.labels {
        Some(labels) => m.with_labels(labels),
        None => Ok(m),
    }
}

pub fn read_dense_csv<R: BufRead>(reader: R, name: &str) -> Result<CitationMatrix> {
    let lines = content_lines(reader, name)?;
    let n = lines.len();
    let mut rows = Vec::with_capacity(n);
    for (lineno, line) in &lines {
        let row: Vec<u64> = line
            .split(',')
            .map(|f| {
                let f = f.trim();
                f.parse::<u64>().map_err(|_| {
                    Error::parse(name, *lineno, format!("`{f}` is not a nonnegative integer"))
                })
            })
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::parse(
                name,
                *lineno,
                format!("row has {} values, expected {n} (one per row)", row.len()),
            ));
        }
        rows.push(row);
    }
    CitationMatrix::from_dense(&rows)
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

pub fn read_matrix(path: &Path, format: InputFormat) -> Result<CitationMatrix> {
    let name = path.display().to_string();
    let reader = open(path)?;
    match format {
        InputFormat::Edges => read_edge_list(reader, &name),
        InputFormat::Dense => read_dense_csv(reader, &name),
    }
}

pub fn write_edge_list<W: Write>(m: &CitationMatrix, mut w: W) -> std::io::Result<()> {
    for i in 0..m.n_nodes() {
        for (j, c) in m.row(i) {
            match m.labels() {
                Some(l) => writeln!(w, "{}\t{}\t{c}", l[i], l[j])?,
                None => writeln!(w, "{i}\t{j}\t{c}")?,
            }
        }
    }
    Ok(())
}

pub fn write_dense_csv<W: Write>(m: &CitationMatrix, mut w: W) -> std::io::Result<()> {
    for row in m.to_dense() {
        let line: Vec<String> = row.iter().map(u64::to_string).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// A pair list read from text, with the node mapping it implies.
#[derive(Clone, Debug, PartialEq)]
pub struct PairInput {
    pub pairs: RankedPairList,
    pub n_nodes: usize,
    pub labels: Option<Vec<String>>,
}

/// Reads a pair list. Pairs are stably sorted by decreasing similarity, so
/// a list that is already in processing order is replayed verbatim.
pub fn read_pairs_tsv<R: BufRead>(reader: R, name: &str) -> Result<PairInput> {
    let lines = content_lines(reader, name)?;
    let mut tokens = Vec::with_capacity(lines.len() * 2);
    let mut sims = Vec::with_capacity(lines.len());
    for (lineno, line) in &lines {
        let [a, b, s] = split_tab(line, name, *lineno)?;
        let s: f64 = s
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite() && *v >= 0.0)
            .ok_or_else(|| Error::parse(name, *lineno, format!("invalid similarity `{s}`")))?;
        if a == b {
            return Err(Error::parse(
                name,
                *lineno,
                "a node cannot pair with itself",
            ));
        }
        tokens.push(a);
        tokens.push(b);
        sims.push(s);
    }
    let nodes = resolve_ids(&tokens);
    let mut pairs: Vec<RankedPair> = sims
        .iter()
        .enumerate()
        .map(|(k, &s)| RankedPair::new(nodes.ids[2 * k], nodes.ids[2 * k + 1], s))
        .collect();
    pairs.sort_by(|a, b| b.similarity.total_cmp(&a.similarity));
    Ok(PairInput {
        pairs: RankedPairList::from_ordered(pairs),
        n_nodes: nodes.n_nodes,
        labels: nodes.labels,
    })
}

pub fn write_pairs_tsv<W: Write>(pairs: &RankedPairList, mut w: W) -> std::io::Result<()> {
    for p in pairs {
        writeln!(w, "{}\t{}\t{:.6}", p.selector, p.selected, p.similarity)?;
    }
    Ok(())
}

pub fn write_partition_tsv<W: Write>(p: &Partition, mut w: W) -> std::io::Result<()> {
    for (node, label) in p.labels().iter().enumerate() {
        writeln!(w, "{node}\t{label}")?;
    }
    Ok(())
}

pub fn read_partition_tsv<R: BufRead>(reader: R, name: &str) -> Result<Partition> {
    let lines = content_lines(reader, name)?;
    let mut raw: Vec<Option<String>> = Vec::new();
    for (lineno, line) in &lines {
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [node, label] = fields.as_slice() else {
            return Err(Error::parse(name, *lineno, "expected `node<TAB>label`"));
        };
        let node: usize = node
            .parse()
            .map_err(|_| Error::parse(name, *lineno, format!("invalid node `{node}`")))?;
        if node >= raw.len() {
            raw.resize(node + 1, None);
        }
        if raw[node].replace(label.to_string()).is_some() {
            return Err(Error::parse(
                name,
                *lineno,
                format!("node {node} listed twice"),
            ));
        }
    }
    let labels: Vec<String> = raw
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| Error::parse(name, 0, format!("node {i} has no label"))))
        .collect::<Result<_>>()?;
    Ok(Partition::from_labels(&labels))
}

/// JSON form of a [`DetectionResult`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub n_nodes: usize,
    pub cores: Vec<Vec<usize>>,
    pub reals: Vec<Vec<usize>>,
    /// `[selector, selected, core_a, core_b]`
    pub tides: Vec<[usize; 4]>,
    pub unassigned: Vec<usize>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_labels: Option<Vec<String>>,
}

impl DetectionRecord {
    pub fn from_result(r: &DetectionResult, labels: Option<&[String]>) -> Self {
        let ids = |v: &[crate::similarity::NodeId]| v.iter().map(|n| n.0).collect::<Vec<_>>();
        DetectionRecord {
            n_nodes: r.n_nodes,
            cores: r.cores.iter().map(|c| ids(&c.members)).collect(),
            reals: r.reals.iter().map(|c| ids(&c.members)).collect(),
            tides: r
                .tides
                .iter()
                .map(|t| [t.pair.selector.0, t.pair.selected.0, t.core_a, t.core_b])
                .collect(),
            unassigned: ids(&r.unassigned),
            provenance: r.provenance.clone(),
            node_labels: labels.map(<[String]>::to_vec),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
