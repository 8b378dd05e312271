//! Partition quality (modularity) and agreement (normalized mutual
//! information), plus the report row that bundles them with timing.

use std::collections::HashMap;
use std::io::Write;
use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Newman–Girvan modularity `Σ_c [ e_c / m - (d_c / 2m)^2 ]`.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    if p.node_count() != g.node_count() {
        return Err(Error::PartitionMismatch(format!(
            "partition covers {} nodes, graph has {}",
            p.node_count(),
            g.node_count()
        )));
    }
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let labels = p.labels()?;
    let k = labels.iter().copied().max().map_or(0, |c| c + 1);
    let mut internal = vec![0u64; k];
    let mut degree = vec![0u64; k];
    for v in g.nodes() {
        degree[labels[v]] += g.degree(v) as u64;
    }
    for (u, v) in g.edges() {
        if labels[u] == labels[v] {
            internal[labels[u]] += 1;
        }
    }
    let m = g.edge_count() as f64;
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| e as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum())
}

/// `I(X;Y) / ((H(X) + H(Y)) / 2)`, natural logarithms. Two single-block
/// partitions score 1.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    if a.node_count() != b.node_count() {
        return Err(Error::PartitionMismatch(format!(
            "partitions cover {} and {} nodes",
            a.node_count(),
            b.node_count()
        )));
    }
    let la = a.labels()?;
    let lb = b.labels()?;
    let n = la.len() as f64;
    if la.is_empty() {
        return Err(Error::EmptyNodeSet);
    }

    let mut joint: HashMap<(usize, usize), u64> = HashMap::new();
    let mut ca: HashMap<usize, u64> = HashMap::new();
    let mut cb: HashMap<usize, u64> = HashMap::new();
    for (&x, &y) in la.iter().zip(&lb) {
        *joint.entry((x, y)).or_insert(0) += 1;
        *ca.entry(x).or_insert(0) += 1;
        *cb.entry(y).or_insert(0) += 1;
    }
    let entropy = |counts: &HashMap<usize, u64>| -> f64 {
        counts
            .values()
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let ha = entropy(&ca);
    let hb = entropy(&cb);
    if ha == 0.0 && hb == 0.0 {
        return Ok(1.0);
    }
    let mi: f64 = joint
        .iter()
        .map(|(&(x, y), &c)| {
            let pxy = c as f64 / n;
            pxy * (pxy * n * n / (ca[&x] as f64 * cb[&y] as f64)).ln()
        })
        .sum();
    Ok((2.0 * mi / (ha + hb)).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub algorithm: String,
    pub dataset: String,
    pub modularity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmi: Option<f64>,
    pub community_count: usize,
    /// Wall-clock seconds, rounded to 0.01.
    pub elapsed: f64,
}

pub fn evaluate(
    g: &Graph,
    p: &Partition,
    ground_truth: Option<&Partition>,
    elapsed: Duration,
    algorithm: &str,
    dataset: &str,
) -> Result<MetricReport> {
    Ok(MetricReport {
        algorithm: algorithm.to_owned(),
        dataset: dataset.to_owned(),
        modularity: modularity(g, p)?,
        nmi: ground_truth.map(|t| nmi(p, t)).transpose()?,
        community_count: p.community_count(),
        elapsed: round_centis(elapsed.as_secs_f64()),
    })
}

pub fn round_centis(secs: f64) -> f64 {
    (secs * 100.0).round() / 100.0
}

pub const REPORT_CSV_HEADER: &str = "algorithm,dataset,modularity,nmi,community_count,elapsed";

impl MetricReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.4},{},{},{:.2}",
            self.algorithm,
            self.dataset,
            self.modularity,
            self.nmi.map(|x| format!("{x:.4}")).unwrap_or_default(),
            self.community_count,
            self.elapsed
        )
    }
}

pub fn write_reports_csv<W: Write>(reports: &[MetricReport], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{REPORT_CSV_HEADER}")?;
    for r in reports {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

pub fn write_reports_json<W: Write>(reports: &[MetricReport], out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(out, reports).map_err(std::io::Error::other)
}
