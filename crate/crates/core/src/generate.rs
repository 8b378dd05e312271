//! Seeded synthetic graphs for tests and the scaling benchmark.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// G(n, p): every pair independently with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability("p", p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// `blocks` groups of `block_size` nodes; pairs inside a block connect with
/// probability `p_in`, pairs across blocks with `p_out`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedPartition {
    pub blocks: usize,
    pub block_size: usize,
    pub p_in: f64,
    pub p_out: f64,
}

impl PlantedPartition {
    pub fn validate(&self) -> Result<()> {
        if self.blocks == 0 || self.block_size == 0 {
            return Err(Error::Config(
                "planted partition needs at least one non-empty block".into(),
            ));
        }
        check_probability("p_in", self.p_in)?;
        check_probability("p_out", self.p_out)
    }

    pub fn node_count(&self) -> usize {
        self.blocks * self.block_size
    }

    pub fn expected_edges(&self) -> f64 {
        let s = self.block_size as f64;
        let k = self.blocks as f64;
        k * s * (s - 1.0) / 2.0 * self.p_in + k * (k - 1.0) / 2.0 * s * s * self.p_out
    }

    pub fn block_of(&self, v: NodeId) -> usize {
        v / self.block_size
    }

    pub fn generate(&self, seed: u64) -> Result<Graph> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = self.block_size;
        let n = self.node_count();
        let mut edges = Vec::new();
        for b in 0..self.blocks {
            let base = b * s;
            for i in 0..s {
                for j in i + 1..s {
                    if rng.random_bool(self.p_in) {
                        edges.push((base + i, base + j));
                    }
                }
            }
        }
        // Cross-block edges: draw the count, then that many distinct pairs.
        let cross_pairs = (self.blocks * (self.blocks - 1) / 2 * s * s) as u64;
        if cross_pairs > 0 && self.p_out > 0.0 {
            let count = Binomial::new(cross_pairs, self.p_out)
                .map_err(|e| Error::Config(e.to_string()))?
                .sample(&mut rng);
            let mut chosen: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(count as usize);
            let mut ordered = Vec::with_capacity(count as usize);
            while (chosen.len() as u64) < count {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                if self.block_of(u) == self.block_of(v) {
                    continue;
                }
                let pair = (u.min(v), u.max(v));
                if chosen.insert(pair) {
                    ordered.push(pair);
                }
            }
            edges.extend(ordered);
        }
        Graph::from_edges(n, &edges)
    }
}

/// Two `k`-cliques on `0..k` and `k..2k` joined by the edge `(k-1, k)`.
pub fn cliques_with_bridge(k: usize) -> Result<Graph> {
    if k < 2 {
        return Err(Error::Config("cliques need at least two nodes".into()));
    }
    let mut edges = Vec::new();
    for base in [0, k] {
        for i in 0..k {
            for j in i + 1..k {
                edges.push((base + i, base + j));
            }
        }
    }
    edges.push((k - 1, k));
    Graph::from_edges(2 * k, &edges)
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must lie in [0, 1], got {p}")))
    }
}
