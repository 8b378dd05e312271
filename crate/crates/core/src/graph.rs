//! Immutable undirected simple graph in compressed adjacency form, plus the
//! edge-list and GML readers that build it.
//!
//! External node labels are arbitrary strings. Internal ids are dense
//! `0..n` and assigned in first-seen order, so a fixed input file always
//! yields the same ids.

use std::collections::HashMap;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Dense node index in `0..n`.
pub type NodeId = usize;

/// Counts of input records that did not become edges.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadSummary {
    pub self_loops: usize,
    pub duplicate_edges: usize,
}

#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    edge_count: usize,
    summary: LoadSummary,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.offsets == other.offsets
            && self.targets == other.targets
            && self.labels == other.labels
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph on nodes labelled `"0".."n-1"`. Self-loops and repeated
    /// edges are dropped and counted in [`Graph::load_summary`].
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut builder = GraphBuilder::default();
        for v in 0..n {
            builder.intern(&v.to_string());
        }
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::NodeOutOfRange(u));
            }
            if v >= n {
                return Err(Error::NodeOutOfRange(v));
            }
            builder.add_edge_ids(u, v);
        }
        Ok(builder.build())
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sum of all degrees, `2m`.
    pub fn total_volume(&self) -> u64 {
        2 * self.edge_count as u64
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Sorted neighbor slice. Panics if `v` is out of range; use
    /// [`Graph::neighborhood`] for a checked variant.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v))
        })
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    pub fn load_summary(&self) -> LoadSummary {
        self.summary
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange(v))
        }
    }

    /// Open neighborhood `N1(v)`: every node at distance exactly one.
    pub fn neighborhood(&self, v: NodeId) -> Result<Vec<NodeId>> {
        self.check_node(v)?;
        Ok(self.neighbors(v).to_vec())
    }

    /// `N1(C)`: nodes outside `members` adjacent to at least one member,
    /// returned sorted.
    pub fn community_neighborhood(&self, members: &[NodeId]) -> Result<Vec<NodeId>> {
        if members.is_empty() {
            return Err(Error::EmptyNodeSet);
        }
        let inside = self.membership_mask(members)?;
        let mut seen = vec![false; self.node_count()];
        let mut out = Vec::new();
        for &u in members {
            for &w in self.neighbors(u) {
                if !inside[w] && !seen[w] {
                    seen[w] = true;
                    out.push(w);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Boolean membership table for `set`, validating every id.
    pub fn membership_mask(&self, set: &[NodeId]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.node_count()];
        for &v in set {
            self.check_node(v)?;
            mask[v] = true;
        }
        Ok(mask)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeListOptions {
    pub comment_prefix: char,
    /// `None` splits on any whitespace.
    pub delimiter: Option<char>,
}

impl Default for EdgeListOptions {
    fn default() -> Self {
        Self {
            comment_prefix: '#',
            delimiter: None,
        }
    }
}

/// Reads a two-column edge list. Directed inputs are symmetrized.
pub fn load_edge_list<R: BufRead>(source: R, options: EdgeListOptions) -> Result<Graph> {
    let mut builder = GraphBuilder::default();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with(options.comment_prefix) {
            continue;
        }
        let tokens: Vec<&str> = match options.delimiter {
            Some(d) => trimmed
                .split(d)
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .collect(),
            None => trimmed.split_whitespace().collect(),
        };
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!(
                    "expected two endpoint labels, found {} tokens",
                    tokens.len()
                ),
            });
        }
        builder.add_edge_labels(tokens[0], tokens[1]);
    }
    builder.finish()
}

/// Reads the `graph [ node [ id .. ] edge [ source .. target .. ] ]` subset
/// of GML. Node labels are the decimal `id` values.
pub fn load_gml<R: BufRead>(mut source: R) -> Result<Graph> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let tokens = tokenize_gml(&text)?;
    let mut pos = 0;

    // Find the top-level `graph [`.
    loop {
        match tokens.get(pos) {
            None => {
                return Err(Error::Parse {
                    line: tokens.last().map_or(1, |t| t.line),
                    message: "missing graph block".into(),
                })
            }
            Some(t) if t.text == "graph" && tokens.get(pos + 1).is_some_and(|n| n.text == "[") => {
                pos += 2;
                break;
            }
            Some(t) if t.text == "[" => pos = skip_block(&tokens, pos)?,
            Some(_) => pos += 1,
        }
    }

    let mut builder = GraphBuilder::default();
    let mut saw_node = false;
    let mut pending_edges: Vec<(i64, i64, usize)> = Vec::new();
    let mut node_ids: HashMap<i64, ()> = HashMap::new();

    while pos < tokens.len() {
        let tok = &tokens[pos];
        if tok.text == "]" {
            break;
        }
        let is_block = tokens.get(pos + 1).is_some_and(|n| n.text == "[");
        match (tok.text.as_str(), is_block) {
            ("node", true) => {
                let (attrs, next) = read_flat_block(&tokens, pos + 2)?;
                let id = int_attr(&attrs, "id", tok.line)?;
                if node_ids.insert(id, ()).is_some() {
                    return Err(Error::Parse {
                        line: tok.line,
                        message: format!("duplicate node id {id}"),
                    });
                }
                builder.intern(&id.to_string());
                saw_node = true;
                pos = next;
            }
            ("edge", true) => {
                let (attrs, next) = read_flat_block(&tokens, pos + 2)?;
                let s = int_attr(&attrs, "source", tok.line)?;
                let t = int_attr(&attrs, "target", tok.line)?;
                pending_edges.push((s, t, tok.line));
                pos = next;
            }
            (_, true) => pos = skip_block(&tokens, pos + 1)?,
            _ => pos += 2,
        }
    }
    if pos >= tokens.len() {
        return Err(Error::Parse {
            line: tokens.last().map_or(1, |t| t.line),
            message: "unterminated graph block".into(),
        });
    }
    if !saw_node {
        return Err(Error::Parse {
            line: tokens[pos].line,
            message: "graph has no node blocks".into(),
        });
    }
    for (s, t, line) in pending_edges {
        for end in [s, t] {
            if !node_ids.contains_key(&end) {
                return Err(Error::Parse {
                    line,
                    message: format!("edge references undeclared node {end}"),
                });
            }
        }
        builder.add_edge_labels(&s.to_string(), &t.to_string());
    }
    builder.finish()
}

struct Token {
    text: String,
    line: usize,
}

fn tokenize_gml(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '[' | ']' => {
                out.push(Token {
                    text: c.to_string(),
                    line,
                });
                chars.next();
            }
            '"' => {
                let start = line;
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some('\n') => {
                            line += 1;
                            s.push('\n');
                        }
                        Some(ch) => s.push(ch),
                        None => {
                            return Err(Error::Parse {
                                line: start,
                                message: "unterminated string".into(),
                            })
                        }
                    }
                }
                out.push(Token {
                    text: s,
                    line: start,
                });
            }
            '#' => {
                while let Some(&ch) = chars.peek() {
                    if ch == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            _ => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_whitespace() || ch == '[' || ch == ']' {
                        break;
                    }
                    s.push(ch);
                    chars.next();
                }
                out.push(Token { text: s, line });
            }
        }
    }
    Ok(out)
}

/// `pos` points at a `[`; returns the index just past its matching `]`.
fn skip_block(tokens: &[Token], pos: usize) -> Result<usize> {
    let mut depth = 0usize;
    let mut i = pos;
    while i < tokens.len() {
        match tokens[i].text.as_str() {
            "[" => depth += 1,
            "]" => {
                depth -= 1;
                if depth == 0 {
                    return Ok(i + 1);
                }
            }
            _ => {}
        }
        i += 1;
    }
    Err(Error::Parse {
        line: tokens[pos].line,
        message: "unbalanced brackets".into(),
    })
}

/// Reads `key value` pairs up to the closing `]`, skipping nested blocks.
fn read_flat_block(tokens: &[Token], mut pos: usize) -> Result<(Vec<(String, String)>, usize)> {
    let mut attrs = Vec::new();
    let open_line = tokens.get(pos.saturating_sub(1)).map_or(1, |t| t.line);
    while pos < tokens.len() {
        let key = &tokens[pos];
        if key.text == "]" {
            return Ok((attrs, pos + 1));
        }
        match tokens.get(pos + 1) {
            Some(v) if v.text == "[" => pos = skip_block(tokens, pos + 1)?,
            Some(v) if v.text != "]" => {
                attrs.push((key.text.clone(), v.text.clone()));
                pos += 2;
            }
            _ => {
                return Err(Error::Parse {
                    line: key.line,
                    message: format!("attribute `{}` has no value", key.text),
                })
            }
        }
    }
    Err(Error::Parse {
        line: open_line,
        message: "unterminated block".into(),
    })
}

fn int_attr(attrs: &[(String, String)], key: &str, line: usize) -> Result<i64> {
    let raw = attrs
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v)
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("missing `{key}`"),
        })?;
    raw.parse::<i64>().map_err(|_| Error::Parse {
        line,
        message: format!("`{key}` is not an integer: {raw}"),
    })
}

#[derive(Default)]
struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<(NodeId, NodeId)>,
    self_loops: usize,
}

impl GraphBuilder {
    fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        id
    }

    fn add_edge_labels(&mut self, a: &str, b: &str) {
        let u = self.intern(a);
        let v = self.intern(b);
        self.add_edge_ids(u, v);
    }

    fn add_edge_ids(&mut self, u: NodeId, v: NodeId) {
        if u == v {
            self.self_loops += 1;
        } else {
            self.edges.push((u.min(v), u.max(v)));
        }
    }

    fn finish(self) -> Result<Graph> {
        let g = self.build();
        let s = g.summary;
        if s.self_loops > 0 || s.duplicate_edges > 0 {
            log::warn!(
                "dropped {} self-loops and {} duplicate edges while loading",
                s.self_loops,
                s.duplicate_edges
            );
        }
        if g.edge_count == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(g)
    }

    fn build(mut self) -> Graph {
        let n = self.labels.len();
        let raw = self.edges.len();
        self.edges.sort_unstable();
        self.edges.dedup();
        let duplicate_edges = raw - self.edges.len();

        let mut degree = vec![0usize; n];
        for &(u, v) in &self.edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0; offsets[n]];
        for &(u, v) in &self.edges {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph {
            offsets,
            targets,
            labels: self.labels,
            index: self.index,
            edge_count: self.edges.len(),
            summary: LoadSummary {
                self_loops: self.self_loops,
                duplicate_edges,
            },
        }
    }
}
