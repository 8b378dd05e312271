//! Node-to-community assignments with cached per-community counters, and
//! the CSV / JSON partition file formats.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::ratio::Ratio;

pub type CommunityId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Community {
    pub id: CommunityId,
    pub members: Vec<NodeId>,
    /// Edges with both endpoints inside.
    pub internal_edges: u64,
    /// Sum of member degrees.
    pub degree_sum: u64,
}

impl Community {
    fn empty(id: CommunityId) -> Self {
        Self {
            id,
            members: Vec::new(),
            internal_edges: 0,
            degree_sum: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `2 * internal_edges / degree_sum`.
    pub fn stability(&self) -> Result<Ratio> {
        if self.degree_sum == 0 {
            return Err(Error::ZeroVolume);
        }
        Ok(Ratio::from_counts(2 * self.internal_edges, self.degree_sum))
    }

    /// Stability change from absorbing a node of degree `degree` that has
    /// `links` edges into this community.
    pub fn stability_gain(&self, links: u64, degree: u64) -> Result<Ratio> {
        let before = self.stability()?;
        let after = Ratio::from_counts(2 * (self.internal_edges + links), self.degree_sum + degree);
        Ok(after - before)
    }
}

/// Assignment of nodes to communities. Nodes may be unassigned while a
/// detection run is in progress; finished partitions are total.
#[derive(Debug, Clone)]
pub struct Partition {
    assignment: Vec<Option<CommunityId>>,
    communities: Vec<Community>,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.assignment == other.assignment
    }
}

impl Eq for Partition {}

impl Partition {
    pub fn unassigned(node_count: usize) -> Self {
        Self {
            assignment: vec![None; node_count],
            communities: Vec::new(),
        }
    }

    /// Builds a total partition from one label per node. Labels are
    /// compacted to `0..k` in order of first appearance.
    pub fn from_labels(g: &Graph, labels: &[usize]) -> Result<Self> {
        if labels.len() != g.node_count() {
            return Err(Error::PartitionMismatch(format!(
                "{} labels for {} nodes",
                labels.len(),
                g.node_count()
            )));
        }
        let mut remap: HashMap<usize, CommunityId> = HashMap::new();
        let mut p = Self::unassigned(g.node_count());
        for (v, &l) in labels.iter().enumerate() {
            let next = remap.len();
            let c = *remap.entry(l).or_insert(next);
            if c == p.communities.len() {
                p.communities.push(Community::empty(c));
            }
            p.assign(g, v, c);
        }
        Ok(p)
    }

    /// Like [`Partition::from_labels`], but keeps the ids unchanged when they
    /// already form the dense range `0..k`.
    fn from_ids_preserving(g: &Graph, ids: &[usize]) -> Result<Self> {
        let k = ids.iter().copied().max().map_or(0, |m| m + 1);
        let mut used = vec![false; k];
        for &c in ids {
            used[c] = true;
        }
        if !used.iter().all(|&u| u) {
            return Self::from_labels(g, ids);
        }
        let mut p = Self::unassigned(g.node_count());
        p.communities = (0..k).map(Community::empty).collect();
        for (v, &c) in ids.iter().enumerate() {
            p.assign(g, v, c);
        }
        p.finalize();
        Ok(p)
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn community_of(&self, v: NodeId) -> Option<CommunityId> {
        self.assignment[v]
    }

    pub fn is_assigned(&self, v: NodeId) -> bool {
        self.assignment[v].is_some()
    }

    pub fn communities(&self) -> &[Community] {
        &self.communities
    }

    pub fn community(&self, c: CommunityId) -> &Community {
        &self.communities[c]
    }

    pub fn community_count(&self) -> usize {
        self.communities.len()
    }

    pub fn unassigned_count(&self) -> usize {
        self.assignment.iter().filter(|a| a.is_none()).count()
    }

    pub fn is_total(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    /// One community id per node. Fails if any node is unassigned.
    pub fn labels(&self) -> Result<Vec<CommunityId>> {
        self.assignment
            .iter()
            .enumerate()
            .map(|(v, a)| {
                a.ok_or_else(|| Error::PartitionMismatch(format!("node {v} is unassigned")))
            })
            .collect()
    }

    /// Opens a new community holding `members`, which must all be unassigned.
    pub fn open_community(&mut self, g: &Graph, members: &[NodeId]) -> CommunityId {
        let c = self.communities.len();
        self.communities.push(Community::empty(c));
        for &v in members {
            self.assign(g, v, c);
        }
        c
    }

    /// Adds unassigned node `v` to community `c`, updating its counters.
    pub fn assign(&mut self, g: &Graph, v: NodeId, c: CommunityId) {
        assert!(self.assignment[v].is_none(), "node {v} is already assigned");
        let links = self.links(g, v, c);
        self.assignment[v] = Some(c);
        let com = &mut self.communities[c];
        com.members.push(v);
        com.internal_edges += links;
        com.degree_sum += g.degree(v) as u64;
    }

    /// Number of edges from `v` to members of community `c`.
    pub fn links(&self, g: &Graph, v: NodeId, c: CommunityId) -> u64 {
        g.neighbors(v)
            .iter()
            .filter(|&&w| self.assignment[w] == Some(c))
            .count() as u64
    }

    /// Sorts member lists. Called once a run has finished.
    pub fn finalize(&mut self) {
        for c in &mut self.communities {
            c.members.sort_unstable();
        }
    }

    /// Checks totality, disjointness, member/assignment consistency, and
    /// recounts every community's counters from scratch.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.assignment.len() != g.node_count() {
            return Err(Error::PartitionMismatch(format!(
                "partition covers {} nodes, graph has {}",
                self.assignment.len(),
                g.node_count()
            )));
        }
        let labels = self.labels()?;
        let mut seen = vec![false; g.node_count()];
        for (idx, com) in self.communities.iter().enumerate() {
            if com.id != idx {
                return Err(Error::PartitionMismatch(format!(
                    "community at {idx} has id {}",
                    com.id
                )));
            }
            if com.members.is_empty() {
                return Err(Error::PartitionMismatch(format!(
                    "community {idx} is empty"
                )));
            }
            let mut internal = 0u64;
            let mut degree_sum = 0u64;
            for &v in &com.members {
                if seen[v] {
                    return Err(Error::PartitionMismatch(format!("node {v} listed twice")));
                }
                seen[v] = true;
                if labels[v] != idx {
                    return Err(Error::PartitionMismatch(format!(
                        "node {v} listed in {idx} but assigned to {}",
                        labels[v]
                    )));
                }
                degree_sum += g.degree(v) as u64;
                internal += g.neighbors(v).iter().filter(|&&w| labels[w] == idx).count() as u64;
            }
            if internal != 2 * com.internal_edges || degree_sum != com.degree_sum {
                return Err(Error::PartitionMismatch(format!(
                    "stale counters on community {idx}"
                )));
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::PartitionMismatch(format!(
                "node {v} is in no member list"
            )));
        }
        Ok(())
    }
}

/// Writes `node,community` rows in node-id order, nodes by external label.
pub fn write_csv<W: Write>(g: &Graph, p: &Partition, mut out: W) -> Result<()> {
    let labels = p.labels()?;
    writeln!(out, "node,community")?;
    for (v, c) in labels.iter().enumerate() {
        writeln!(out, "{},{}", g.label(v), c)?;
    }
    Ok(())
}

/// Reads a `node,community` file against the labels of `g`. Every node must
/// appear exactly once. Community ids that already form `0..k` are kept;
/// anything else is compacted in node order.
pub fn read_csv<R: BufRead>(g: &Graph, source: R) -> Result<Partition> {
    let mut raw: Vec<Option<String>> = vec![None; g.node_count()];
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || (line_no == 1 && line.eq_ignore_ascii_case("node,community")) {
            continue;
        }
        let (node, com) = line.split_once(',').ok_or_else(|| Error::Parse {
            line: line_no,
            message: "expected `node,community`".into(),
        })?;
        let v = g.node_id(node.trim()).ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("unknown node label `{}`", node.trim()),
        })?;
        if raw[v].replace(com.trim().to_owned()).is_some() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("node `{}` listed twice", node.trim()),
            });
        }
    }
    if let Some(v) = raw.iter().position(Option::is_none) {
        return Err(Error::PartitionMismatch(format!(
            "node `{}` missing from partition file",
            g.label(v)
        )));
    }
    let raw: Vec<String> = raw.into_iter().map(Option::unwrap).collect();
    let numeric: Option<Vec<usize>> = raw.iter().map(|s| s.parse().ok()).collect();
    match numeric {
        Some(ids) => Partition::from_ids_preserving(g, &ids),
        None => {
            let mut names: HashMap<&str, usize> = HashMap::new();
            let ids: Vec<usize> = raw
                .iter()
                .map(|s| {
                    let next = names.len();
                    *names.entry(s.as_str()).or_insert(next)
                })
                .collect();
            Partition::from_labels(g, &ids)
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonPartition {
    communities: Vec<Vec<String>>,
}

/// Writes `{"communities": [[label, ...], ...]}` indexed by community id.
pub fn write_json<W: Write>(g: &Graph, p: &Partition, out: W) -> Result<()> {
    p.labels()?;
    let doc = JsonPartition {
        communities: p
            .communities()
            .iter()
            .map(|c| {
                let mut m = c.members.clone();
                m.sort_unstable();
                m.into_iter().map(|v| g.label(v).to_owned()).collect()
            })
            .collect(),
    };
    serde_json::to_writer_pretty(out, &doc).map_err(|e| Error::Io(e.to_string()))
}

pub fn read_json<R: BufRead>(g: &Graph, source: R) -> Result<Partition> {
    let doc: JsonPartition = serde_json::from_reader(source).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let mut ids: Vec<Option<usize>> = vec![None; g.node_count()];
    for (c, members) in doc.communities.iter().enumerate() {
        for label in members {
            let v = g
                .node_id(label)
                .ok_or_else(|| Error::PartitionMismatch(format!("unknown node label `{label}`")))?;
            if ids[v].replace(c).is_some() {
                return Err(Error::PartitionMismatch(format!(
                    "node `{label}` listed twice"
                )));
            }
        }
    }
    let ids: Vec<usize> = ids
        .into_iter()
        .enumerate()
        .map(|(v, c)| {
            c.ok_or_else(|| Error::PartitionMismatch(format!("node `{}` missing", g.label(v))))
        })
        .collect::<Result<_>>()?;
    Partition::from_ids_preserving(g, &ids)
}
