//! Comparison algorithms: asynchronous label propagation and greedy
//! agglomerative modularity maximization.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::partition::Partition;

pub const DEFAULT_LPA_ITERATIONS: usize = 100;

/// Asynchronous label propagation.
///
/// Every node starts with its own label. Each sweep visits nodes in a
/// freshly shuffled order; a node keeps its label if it is among the most
/// frequent neighbor labels and otherwise takes one of those uniformly at
/// random. Stops after a sweep with no change or after `max_iters` sweeps.
pub fn lpa(g: &Graph, seed: u64, max_iters: usize) -> Result<Partition> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<NodeId> = (0..n).collect();
    let mut counts = vec![0u32; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut tied: Vec<usize> = Vec::new();

    for iter in 0..max_iters {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &v in &order {
            if g.degree(v) == 0 {
                continue;
            }
            for &w in g.neighbors(v) {
                let l = labels[w];
                if counts[l] == 0 {
                    touched.push(l);
                }
                counts[l] += 1;
            }
            let best = touched.iter().map(|&l| counts[l]).max().unwrap_or(0);
            tied.clear();
            tied.extend(touched.iter().copied().filter(|&l| counts[l] == best));
            for &l in &touched {
                counts[l] = 0;
            }
            touched.clear();

            if !tied.contains(&labels[v]) {
                tied.sort_unstable();
                labels[v] = tied[rng.random_range(0..tied.len())];
                changed = true;
            }
        }
        if !changed {
            log::debug!("label propagation settled after {} sweeps", iter + 1);
            break;
        }
    }
    let mut p = Partition::from_labels(g, &labels)?;
    p.finalize();
    Ok(p)
}

/// Greedy agglomerative modularity maximization (Clauset–Newman–Moore
/// style). Returns the partition at peak modularity.
pub fn greedy_modularity(g: &Graph) -> Result<Partition> {
    greedy_modularity_traced(g).map(|(p, _)| p)
}

/// Like [`greedy_modularity`], also returning modularity after each merge,
/// starting with the all-singletons value.
pub fn greedy_modularity_traced(g: &Graph) -> Result<(Partition, Vec<f64>)> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = g.node_count();
    let m = g.edge_count() as i128;
    let mut degree: Vec<i128> = g.nodes().map(|v| g.degree(v) as i128).collect();
    let mut adj: Vec<BTreeMap<usize, i128>> = g
        .nodes()
        .map(|v| g.neighbors(v).iter().map(|&w| (w, 1)).collect())
        .collect();
    let mut members: Vec<Vec<NodeId>> = (0..n).map(|v| vec![v]).collect();

    // Merging i and j changes Q by (2m * l_ij - d_i * d_j) / (2 m^2).
    let gain = |l: i128, di: i128, dj: i128| 2 * m * l - di * dj;
    let mut heap: BTreeSet<(Reverse<i128>, usize, usize)> = BTreeSet::new();
    for (i, nbrs) in adj.iter().enumerate() {
        for (&j, &l) in nbrs.range(i + 1..) {
            heap.insert((Reverse(gain(l, degree[i], degree[j])), i, j));
        }
    }

    let two_m = 2.0 * m as f64;
    let mut q = if m == 0 {
        0.0
    } else {
        -degree
            .iter()
            .map(|&d| (d as f64 / two_m).powi(2))
            .sum::<f64>()
    };
    let mut history = vec![q];

    while let Some(&(Reverse(score), i, j)) = heap.first() {
        if score <= 0 {
            break;
        }
        for &a in &[i, j] {
            for (&k, &l) in &adj[a] {
                let (x, y) = (a.min(k), a.max(k));
                heap.remove(&(Reverse(gain(l, degree[x], degree[y])), x, y));
            }
        }
        let from_j = std::mem::take(&mut adj[j]);
        for (k, l) in from_j {
            adj[k].remove(&j);
            if k == i {
                continue;
            }
            *adj[i].entry(k).or_insert(0) += l;
            *adj[k].entry(i).or_insert(0) += l;
        }
        degree[i] += degree[j];
        degree[j] = 0;
        let moved = std::mem::take(&mut members[j]);
        members[i].extend(moved);
        for (&k, &l) in &adj[i] {
            let (x, y) = (i.min(k), i.max(k));
            heap.insert((Reverse(gain(l, degree[x], degree[y])), x, y));
        }

        q += score as f64 / (2.0 * (m * m) as f64);
        history.push(q);
    }

    let mut labels = vec![0usize; n];
    for (c, group) in members.iter().enumerate() {
        for &v in group {
            labels[v] = c;
        }
    }
    let mut p = Partition::from_labels(g, &labels)?;
    p.finalize();
    Ok((p, history))
}
