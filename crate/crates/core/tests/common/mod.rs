//! Brute-force reference computations shared by the integration tests.

#![allow(dead_code)]

use ncb::{Graph, NodeId, Ratio};
use num_rational::Ratio as Exact;

pub fn exact(r: Ratio) -> Exact<i64> {
    Exact::new(r.numer(), r.denom())
}

/// Every node pair checked against the adjacency relation.
pub struct PairCounts {
    pub cut: u64,
    pub internal: u64,
    pub volume: u64,
    pub total_volume: u64,
}

pub fn brute_counts(g: &Graph, set: &[NodeId]) -> PairCounts {
    let n = g.node_count();
    let inside: Vec<bool> = (0..n).map(|v| set.contains(&v)).collect();
    let (mut cut, mut internal, mut edges) = (0, 0, 0);
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                continue;
            }
            edges += 1;
            match (inside[u], inside[v]) {
                (true, true) => internal += 1,
                (true, false) | (false, true) => cut += 1,
                _ => {}
            }
        }
    }
    let volume = (0..n)
        .filter(|&u| inside[u])
        .map(|u| (0..n).filter(|&w| g.has_edge(u, w)).count() as u64)
        .sum();
    PairCounts {
        cut,
        internal,
        volume,
        total_volume: 2 * edges,
    }
}

/// `None` when either side has zero volume or the set is empty or whole.
pub fn brute_conductance(g: &Graph, set: &[NodeId]) -> Option<Exact<i64>> {
    if set.is_empty() || set.len() == g.node_count() {
        return None;
    }
    let c = brute_counts(g, set);
    let den = c.volume.min(c.total_volume - c.volume);
    (den > 0).then(|| Exact::new(c.cut as i64, den as i64))
}

pub fn from_edge_bits(n: usize, bits: &[bool]) -> Option<Graph> {
    let mut edges = Vec::new();
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits.get(k).copied().unwrap_or(false) {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &edges).ok()
}
