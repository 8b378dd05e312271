//! Cut, volume and conductance of node sets, and the seed scan that picks
//! nodes whose closed neighborhood is a local conductance minimum.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::ratio::Ratio;

/// Number of edges leaving `set`. Duplicate ids are ignored.
pub fn cut(g: &Graph, set: &[NodeId]) -> Result<u64> {
    let mask = g.membership_mask(set)?;
    Ok(cut_masked(g, &mask))
}

/// Sum of degrees over `set`. Duplicate ids are ignored.
pub fn volume(g: &Graph, set: &[NodeId]) -> Result<u64> {
    let mask = g.membership_mask(set)?;
    Ok(volume_masked(g, &mask))
}

fn cut_masked(g: &Graph, mask: &[bool]) -> u64 {
    g.nodes()
        .filter(|&u| mask[u])
        .map(|u| g.neighbors(u).iter().filter(|&&w| !mask[w]).count() as u64)
        .sum()
}

fn volume_masked(g: &Graph, mask: &[bool]) -> u64 {
    g.nodes()
        .filter(|&u| mask[u])
        .map(|u| g.degree(u) as u64)
        .sum()
}

/// `cut(S) / min(vol(S), vol(V \ S))`.
pub fn conductance(g: &Graph, set: &[NodeId]) -> Result<Ratio> {
    if set.is_empty() {
        return Err(Error::UndefinedConductance("empty node set"));
    }
    let mask = g.membership_mask(set)?;
    if mask.iter().all(|&m| m) {
        return Err(Error::UndefinedConductance(
            "node set covers the whole graph",
        ));
    }
    let vol = volume_masked(g, &mask);
    ratio_from_parts(cut_masked(g, &mask), vol, g.total_volume() - vol)
}

fn ratio_from_parts(cut: u64, vol_in: u64, vol_out: u64) -> Result<Ratio> {
    let den = vol_in.min(vol_out);
    if den == 0 {
        return Err(Error::UndefinedConductance("one side has zero volume"));
    }
    Ok(Ratio::from_counts(cut, den))
}

/// Conductance of the closed neighborhood `{v} ∪ N1(v)`.
pub fn neighborhood_conductance(g: &Graph, v: NodeId) -> Result<Ratio> {
    g.check_node(v)?;
    let mut marker = vec![usize::MAX; g.node_count()];
    closed_neighborhood_conductance(g, v, &mut marker)
}

/// `marker` is scratch space of length `n`; entries equal to `v` mark
/// members of the current closed neighborhood.
fn closed_neighborhood_conductance(g: &Graph, v: NodeId, marker: &mut [usize]) -> Result<Ratio> {
    let deg = g.degree(v);
    if deg == 0 {
        return Err(Error::UndefinedConductance("isolated node"));
    }
    if deg + 1 == g.node_count() {
        return Err(Error::UndefinedConductance(
            "closed neighborhood covers the whole graph",
        ));
    }
    marker[v] = v;
    for &u in g.neighbors(v) {
        marker[u] = v;
    }
    let mut vol = deg as u64;
    let mut cut = 0u64;
    for &u in g.neighbors(v) {
        vol += g.degree(u) as u64;
        cut += g.neighbors(u).iter().filter(|&&w| marker[w] != v).count() as u64;
    }
    ratio_from_parts(cut, vol, g.total_volume() - vol)
}

/// Closed-neighborhood conductance for every node; `None` where undefined.
pub fn neighborhood_conductances(g: &Graph) -> Vec<Option<Ratio>> {
    (0..g.node_count())
        .into_par_iter()
        .map_init(
            || vec![usize::MAX; g.node_count()],
            |marker, v| closed_neighborhood_conductance(g, v, marker).ok(),
        )
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub struct SeedRecord {
    // Field order gives the (score, node) ordering.
    pub score: Ratio,
    pub node: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSequence {
    pub records: Vec<SeedRecord>,
    /// True when no node met the local-minimum condition and the
    /// minimum-degree node was substituted.
    pub fallback: bool,
}

/// Nodes whose closed-neighborhood conductance is no larger than that of
/// any neighbor, sorted ascending by `(score, node)`. Neighbors with
/// undefined conductance impose no constraint.
pub fn find_seeds(g: &Graph) -> Result<SeedSequence> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let scores = neighborhood_conductances(g);
    let mut heap: BinaryHeap<Reverse<SeedRecord>> = g
        .nodes()
        .filter_map(|v| {
            let score = scores[v]?;
            let is_local_min = g
                .neighbors(v)
                .iter()
                .all(|&w| scores[w].is_none_or(|sw| score <= sw));
            is_local_min.then_some(Reverse(SeedRecord { score, node: v }))
        })
        .collect();

    let mut records = Vec::with_capacity(heap.len());
    while let Some(Reverse(r)) = heap.pop() {
        records.push(r);
    }
    if !records.is_empty() {
        return Ok(SeedSequence {
            records,
            fallback: false,
        });
    }

    let node = g
        .nodes()
        .filter(|&v| g.degree(v) > 0)
        .min_by_key(|&v| (g.degree(v), v))
        .unwrap_or(0);
    log::debug!("no local-minimum seed found, falling back to node {node}");
    Ok(SeedSequence {
        records: vec![SeedRecord {
            score: scores[node].unwrap_or(Ratio::ONE),
            node,
        }],
        fallback: true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileRecord {
    pub node: NodeId,
    pub degree: usize,
    pub conductance: Option<Ratio>,
}

pub fn profile(g: &Graph) -> Vec<ProfileRecord> {
    neighborhood_conductances(g)
        .into_iter()
        .enumerate()
        .map(|(node, conductance)| ProfileRecord {
            node,
            degree: g.degree(node),
            conductance,
        })
        .collect()
}

/// CSV with header `node,degree,conductance`; undefined conductance is an
/// empty field. Nodes are written by external label.
pub fn write_profile_csv<W: Write>(
    g: &Graph,
    records: &[ProfileRecord],
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "node,degree,conductance")?;
    for r in records {
        match r.conductance {
            Some(c) => writeln!(out, "{},{},{}", g.label(r.node), r.degree, c.to_f64())?,
            None => writeln!(out, "{},{},", g.label(r.node), r.degree)?,
        }
    }
    Ok(())
}
