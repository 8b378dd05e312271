//! Seeded community growth.
//!
//! A detection run has three phases:
//!
//! 1. **Initial communities.** Seeds (local conductance minima, ascending)
//!    become founders unless they sit inside territory already claimed by an
//!    earlier founder. Each founder opens a community from its closed
//!    neighborhood; nodes claimed by two or more founders are left for the
//!    growth phase to settle.
//! 2. **Growth.** A single priority queue holds every `(node, community)`
//!    pair where the node is unassigned and adjacent to the community, keyed
//!    by gravitation (fraction of the node's edges landing in the
//!    community). The best pair is popped; the community accepts the node
//!    only if doing so strictly raises its stability. Rejections are
//!    permanent for that pair.
//! 3. **Leftovers.** Remaining nodes join, in rounds, the adjacent community
//!    with the highest gravitation, ignoring stability. Isolated nodes
//!    become singletons.
//!
//! All ties break by ascending node id, then ascending community id.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::conductance::{find_seeds, SeedRecord};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::partition::{Community, CommunityId, Partition};
use crate::ratio::Ratio;

/// Fraction of `u`'s edges that land in community `c`.
pub fn gravitation(g: &Graph, p: &Partition, u: NodeId, c: CommunityId) -> Result<Ratio> {
    g.check_node(u)?;
    let deg = g.degree(u);
    if deg == 0 {
        return Err(Error::UndefinedGravitation(u));
    }
    if p.community_of(u) == Some(c) {
        return Err(Error::AlreadyMember(u));
    }
    Ok(Ratio::from_counts(p.links(g, u, c), deg as u64))
}

pub fn stability(c: &Community) -> Result<Ratio> {
    c.stability()
}

/// `stability(C ∪ {v}) - stability(C)`, without mutating `C`.
pub fn capture_factor(g: &Graph, p: &Partition, c: CommunityId, v: NodeId) -> Result<Ratio> {
    g.check_node(v)?;
    if p.community_of(v) == Some(c) {
        return Err(Error::AlreadyMember(v));
    }
    if g.degree(v) == 0 {
        return Err(Error::UndefinedGravitation(v));
    }
    p.community(c)
        .stability_gain(p.links(g, v, c), g.degree(v) as u64)
}

/// Queue entry: a candidate node's pull toward one community.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub gravitation: Ratio,
    pub node: NodeId,
    pub community: CommunityId,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .gravitation
            .cmp(&self.gravitation)
            .then(self.node.cmp(&other.node))
            .then(self.community.cmp(&other.community))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered frontier of unassigned nodes, best candidate first.
#[derive(Debug, Clone, Default)]
pub struct CandidateIndex {
    queue: BTreeSet<Candidate>,
    links: BTreeMap<(NodeId, CommunityId), u64>,
    rejected: HashSet<(NodeId, CommunityId)>,
}

impl CandidateIndex {
    pub fn len(&self) -> usize {
        self.queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn peek(&self) -> Option<&Candidate> {
        self.queue.first()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Candidate> {
        self.queue.iter()
    }

    pub fn is_rejected(&self, node: NodeId, community: CommunityId) -> bool {
        self.rejected.contains(&(node, community))
    }

    /// Edge count behind the entry for `(node, community)`, if queued.
    pub fn links(&self, node: NodeId, community: CommunityId) -> Option<u64> {
        self.links.get(&(node, community)).copied()
    }

    /// Removes the best entry, returning it with its edge count.
    fn pop(&mut self) -> Option<(Candidate, u64)> {
        let best = self.queue.pop_first()?;
        let links = self.links.remove(&(best.node, best.community)).unwrap_or(0);
        Some((best, links))
    }

    /// Records one more edge from `node` into `community`.
    fn add_link(&mut self, g: &Graph, node: NodeId, community: CommunityId) {
        if self.rejected.contains(&(node, community)) {
            return;
        }
        let deg = g.degree(node) as u64;
        let slot = self.links.entry((node, community)).or_insert(0);
        if *slot > 0 {
            self.queue.remove(&Candidate {
                gravitation: Ratio::from_counts(*slot, deg),
                node,
                community,
            });
        }
        *slot += 1;
        self.queue.insert(Candidate {
            gravitation: Ratio::from_counts(*slot, deg),
            node,
            community,
        });
    }

    /// Drops every entry for `node` once it has been assigned.
    fn remove_node(&mut self, g: &Graph, node: NodeId) {
        let deg = g.degree(node) as u64;
        let keys: Vec<(NodeId, CommunityId)> = self
            .links
            .range((node, 0)..=(node, CommunityId::MAX))
            .map(|(&k, _)| k)
            .collect();
        for key in keys {
            let count = self.links.remove(&key).unwrap_or(0);
            self.queue.remove(&Candidate {
                gravitation: Ratio::from_counts(count, deg),
                node,
                community: key.1,
            });
        }
    }
}

/// One accept/reject decision taken during growth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    pub node: NodeId,
    pub community: CommunityId,
    pub gravitation: f64,
    pub capture_factor: f64,
    pub accepted: bool,
}

/// Opens the initial communities from a seed sequence sorted ascending by
/// `(score, node)`.
///
/// A seed founds a community when it is outside every earlier founder's
/// closed neighborhood and at most half of its neighbors are. The founder
/// keeps each closed-neighborhood member that no other founder also claims.
pub fn init_communities(g: &Graph, seeds: &[SeedRecord]) -> Result<(Partition, CandidateIndex)> {
    if seeds.is_empty() {
        return Err(Error::NoSeeds);
    }
    debug_assert!(
        seeds.windows(2).all(|w| w[0] <= w[1]),
        "seed list must be sorted"
    );

    let n = g.node_count();
    let mut claims = vec![0u32; n];
    let mut founders = Vec::new();
    for seed in seeds {
        let v = seed.node;
        g.check_node(v)?;
        if claims[v] > 0 {
            continue;
        }
        let covered = g.neighbors(v).iter().filter(|&&w| claims[w] > 0).count();
        if 2 * covered > g.degree(v) {
            continue;
        }
        founders.push(v);
        claims[v] += 1;
        for &w in g.neighbors(v) {
            claims[w] += 1;
        }
    }

    let mut partition = Partition::unassigned(n);
    for &v in &founders {
        let members: Vec<NodeId> = std::iter::once(v)
            .chain(g.neighbors(v).iter().copied().filter(|&w| claims[w] == 1))
            .collect();
        partition.open_community(g, &members);
    }

    let mut index = CandidateIndex::default();
    for u in g.nodes() {
        if let Some(c) = partition.community_of(u) {
            for &w in g.neighbors(u) {
                if !partition.is_assigned(w) {
                    index.add_link(g, w, c);
                }
            }
        }
    }
    Ok((partition, index))
}

/// Drains the candidate index: the best pair is accepted when its capture
/// factor is strictly positive and permanently rejected otherwise.
pub fn expand(g: &Graph, partition: Partition, index: CandidateIndex) -> Partition {
    expand_logged(g, partition, index, None)
}

pub fn expand_logged(
    g: &Graph,
    mut partition: Partition,
    mut index: CandidateIndex,
    mut log: Option<&mut Vec<Event>>,
) -> Partition {
    while let Some((best, links)) = index.pop() {
        let Candidate {
            gravitation,
            node,
            community,
        } = best;
        debug_assert_eq!(links, partition.links(g, node, community));
        let epsilon = partition
            .community(community)
            .stability_gain(links, g.degree(node) as u64)
            .expect("communities in a run never have zero volume");
        let accepted = epsilon.is_positive();
        if let Some(log) = log.as_deref_mut() {
            log.push(Event {
                node,
                community,
                gravitation: gravitation.to_f64(),
                capture_factor: epsilon.to_f64(),
                accepted,
            });
        }
        if accepted {
            partition.assign(g, node, community);
            index.remove_node(g, node);
            for &w in g.neighbors(node) {
                if !partition.is_assigned(w) {
                    index.add_link(g, w, community);
                }
            }
        } else {
            index.rejected.insert((node, community));
        }
    }
    partition
}

/// Assigns every node the growth phase left behind.
///
/// Each round, every unassigned node adjacent to a community joins the one
/// it has the most edges into (lowest id on ties), judged on the state at
/// the start of the round. A connected component with no community at all
/// gets a new one opened at its lowest-id node. Isolated nodes become
/// singletons.
pub fn assign_leftovers(g: &Graph, mut partition: Partition) -> Partition {
    let mut frontier: BTreeSet<NodeId> = g
        .nodes()
        .filter(|&v| !partition.is_assigned(v) && g.degree(v) > 0)
        .filter(|&v| g.neighbors(v).iter().any(|&w| partition.is_assigned(w)))
        .collect();
    let mut rounds = 0usize;
    loop {
        if frontier.is_empty() {
            // Components untouched by any community.
            match g
                .nodes()
                .find(|&v| !partition.is_assigned(v) && g.degree(v) > 0)
            {
                Some(v) => {
                    partition.open_community(g, &[v]);
                    frontier.extend(
                        g.neighbors(v)
                            .iter()
                            .copied()
                            .filter(|&w| !partition.is_assigned(w)),
                    );
                    continue;
                }
                None => break,
            }
        }
        rounds += 1;
        let moves: Vec<(NodeId, CommunityId)> = frontier
            .iter()
            .map(|&v| {
                let mut counts: BTreeMap<CommunityId, u64> = BTreeMap::new();
                for &w in g.neighbors(v) {
                    if let Some(c) = partition.community_of(w) {
                        *counts.entry(c).or_insert(0) += 1;
                    }
                }
                // max_by_key keeps the last maximum; iterate in reverse so the
                // lowest id wins ties.
                let (&c, _) = counts
                    .iter()
                    .rev()
                    .max_by_key(|(_, &k)| k)
                    .expect("frontier node touches a community");
                (v, c)
            })
            .collect();
        let mut next = BTreeSet::new();
        for &(v, c) in &moves {
            partition.assign(g, v, c);
        }
        for &(v, _) in &moves {
            next.extend(
                g.neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&w| !partition.is_assigned(w)),
            );
        }
        frontier = next;
    }
    if rounds > 0 {
        log::debug!("leftover assignment took {rounds} rounds");
    }
    for v in g.nodes() {
        if !partition.is_assigned(v) {
            partition.open_community(g, &[v]);
        }
    }
    partition.finalize();
    partition
}

/// Full pipeline: seeds, initial communities, growth, leftovers.
pub fn detect(g: &Graph) -> Result<Partition> {
    detect_impl(g, None)
}

/// [`detect`] plus the accept/reject log of the growth phase.
pub fn detect_traced(g: &Graph) -> Result<(Partition, Vec<Event>)> {
    let mut events = Vec::new();
    let p = detect_impl(g, Some(&mut events))?;
    Ok((p, events))
}

fn detect_impl(g: &Graph, log: Option<&mut Vec<Event>>) -> Result<Partition> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if g.edge_count() == 0 {
        return Ok(assign_leftovers(g, Partition::unassigned(g.node_count())));
    }
    let seeds = find_seeds(g)?;
    let (partition, index) = init_communities(g, &seeds.records)?;
    log::debug!(
        "{} seeds, {} initial communities, {} candidates",
        seeds.records.len(),
        partition.community_count(),
        index.len()
    );
    let partition = expand_logged(g, partition, index, log);
    Ok(assign_leftovers(g, partition))
}
