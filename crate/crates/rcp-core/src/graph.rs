//! Immutable undirected social graphs with dense node indices.
//!
//! A [`SocialGraph`] is constructed once (from an edge list or a
//! [`GraphBuilder`]) and is read-only afterwards, so queries are safe to run
//! concurrently from many threads. Adjacency lists are kept sorted by index;
//! the index space is dense and assigned in order of first appearance, while
//! every external interface reports the opaque string labels.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, BufReader, Read};

use serde::Serialize;

use crate::error::{RcpError, Result};

/// Dense index of a node inside one [`SocialGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How directed input lines are interpreted by the loader.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoadMode {
    /// Every listed pair becomes one undirected edge; duplicates and
    /// reversed duplicates collapse.
    #[default]
    Undirected,
    /// An undirected edge exists iff both directions appear in the input.
    MutualOnly,
}

/// Loader options beyond the mode itself.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    pub mode: LoadMode,
    /// Keep nodes that end up with no edges (only takes effect for labels
    /// that appear in the input or in `sidecar_nodes`).
    pub retain_isolated: bool,
    /// Labels registered even if absent from the edge list, in the given
    /// order, after all edge-list nodes. Implies retention of those nodes.
    pub sidecar_nodes: Vec<String>,
}

/// What the loader saw and dropped while building the graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub nodes: usize,
    pub edges: usize,
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
    /// Directed lines that never mutualized (mutual-only mode).
    pub unreciprocated_dropped: usize,
}

/// Descriptive statistics mirroring the usual dataset tables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphStats {
    pub node_count: usize,
    pub link_count: usize,
    pub avg_degree: f64,
    /// Average local clustering; nodes of degree < 2 contribute 0.
    pub clustering_coefficient: f64,
}

/// Immutable undirected simple graph with an external-label map.
#[derive(Debug, Clone, PartialEq)]
pub struct SocialGraph {
    adjacency: Vec<Vec<NodeId>>,
    labels: Vec<String>,
    label_index: HashMap<String, NodeId>,
    edge_count: usize,
}

impl SocialGraph {
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.adjacency.len() as u32).map(NodeId)
    }

    pub fn contains(&self, node: NodeId) -> bool {
        node.index() < self.adjacency.len()
    }

    /// Neighbors of `node`, sorted ascending by index.
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node.index()]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node.index()].len()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adjacency[a.index()].binary_search(&b).is_ok()
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.label_index.get(label).copied()
    }

    /// Resolve a label or fail with up to five near-matches.
    pub fn require_label(&self, label: &str) -> Result<NodeId> {
        self.node_by_label(label).ok_or_else(|| {
            let mut candidates: Vec<(usize, &String)> = self
                .labels
                .iter()
                .map(|l| (levenshtein_capped(label, l, 3), l))
                .filter(|(d, _)| *d <= 2)
                .collect();
            candidates.sort();
            RcpError::UnknownLabel {
                label: label.to_string(),
                near_matches: candidates
                    .into_iter()
                    .take(5)
                    .map(|(_, l)| l.clone())
                    .collect(),
            }
        })
    }

    /// Undirected edges as `(a, b)` pairs with `a < b`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, nbrs)| {
            let a = NodeId(i as u32);
            nbrs.iter()
                .copied()
                .filter(move |b| a < *b)
                .map(move |b| (a, b))
        })
    }

    /// Number of common neighbors of two distinct nodes.
    ///
    /// Adjacency of the pair is not required; endpoints never count
    /// themselves because the graph holds no self-loops.
    pub fn tie_strength(&self, i: NodeId, j: NodeId) -> Result<u32> {
        if i == j {
            return Err(RcpError::InvalidArgument(format!(
                "tie strength of a node with itself ({})",
                self.label(i)
            )));
        }
        Ok(intersection_count(self.neighbors(i), self.neighbors(j)) as u32)
    }

    /// True iff the pair is adjacent and shares at least `k` neighbors.
    pub fn strong_tie(&self, i: NodeId, j: NodeId, k: u32) -> bool {
        i != j
            && self.has_edge(i, j)
            && intersection_count_at_least(self.neighbors(i), self.neighbors(j), k as usize)
    }

    pub fn stats(&self) -> Result<GraphStats> {
        if self.is_empty() {
            return Err(RcpError::EmptyGraph);
        }
        let n = self.node_count();
        let mut clustering_sum = 0.0;
        for node in self.nodes() {
            let nbrs = self.neighbors(node);
            let d = nbrs.len();
            if d < 2 {
                continue;
            }
            let mut ties = 0usize;
            for &u in nbrs {
                ties += intersection_count(nbrs, self.neighbors(u));
            }
            // each edge among neighbors was seen from both endpoints
            clustering_sum += (ties / 2) as f64 / (d * (d - 1) / 2) as f64;
        }
        Ok(GraphStats {
            node_count: n,
            link_count: self.edge_count,
            avg_degree: 2.0 * self.edge_count as f64 / n as f64,
            clustering_coefficient: clustering_sum / n as f64,
        })
    }

    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }
}

/// Incremental construction of a [`SocialGraph`].
///
/// Labels are interned in first-appearance order; duplicate edges collapse
/// and self-loops are dropped, both with counters for the load report.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<String>,
    label_index: HashMap<String, NodeId>,
    edges: BTreeSet<(NodeId, NodeId)>,
    self_loops_dropped: usize,
    duplicates_collapsed: usize,
}

impl GraphBuilder {
    /// Intern a label, returning its dense id.
    pub fn node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.label_index.get(label) {
            return id;
        }
        let id = NodeId(self.labels.len() as u32);
        self.labels.push(label.to_string());
        self.label_index.insert(label.to_string(), id);
        id
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge(&mut self, a: NodeId, b: NodeId) {
        assert!(
            a.index() < self.labels.len() && b.index() < self.labels.len(),
            "edge endpoints must be interned first"
        );
        if a == b {
            self.self_loops_dropped += 1;
            return;
        }
        let key = (a.min(b), a.max(b));
        if !self.edges.insert(key) {
            self.duplicates_collapsed += 1;
        }
    }

    pub fn edge_by_label(&mut self, a: &str, b: &str) {
        let a = self.node(a);
        let b = self.node(b);
        self.edge(a, b);
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn build(self) -> SocialGraph {
        let mut adjacency = vec![Vec::new(); self.labels.len()];
        for &(a, b) in &self.edges {
            adjacency[a.index()].push(b);
            adjacency[b.index()].push(a);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        SocialGraph {
            adjacency,
            labels: self.labels,
            label_index: self.label_index,
            edge_count: self.edges.len(),
        }
    }

    pub fn build_with_report(self) -> (SocialGraph, LoadReport) {
        let self_loops = self.self_loops_dropped;
        let duplicates = self.duplicates_collapsed;
        let graph = self.build();
        let report = LoadReport {
            nodes: graph.node_count(),
            edges: graph.edge_count(),
            self_loops_dropped: self_loops,
            duplicates_collapsed: duplicates,
            unreciprocated_dropped: 0,
        };
        (graph, report)
    }
}

/// Load an edge list: one edge per line, two whitespace- or comma-separated
/// tokens, `#` comment lines and blank lines skipped.
pub fn load_edge_list<R: Read>(source: R, options: &LoadOptions) -> Result<(SocialGraph, LoadReport)> {
    let reader = BufReader::new(source);

    // interning pass over the raw directed pairs
    let mut appearance: Vec<String> = Vec::new();
    let mut intern: HashMap<String, u32> = HashMap::new();
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    let mut self_loops = 0usize;

    for (line_no, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.len() != 2 {
            return Err(RcpError::Parse {
                line: line_no + 1,
                message: format!("expected two node tokens, found {}", tokens.len()),
            });
        }
        let mut id_of = |label: &str| -> u32 {
            if let Some(&id) = intern.get(label) {
                id
            } else {
                let id = appearance.len() as u32;
                appearance.push(label.to_string());
                intern.insert(label.to_string(), id);
                id
            }
        };
        let a = id_of(tokens[0]);
        let b = id_of(tokens[1]);
        if a == b {
            self_loops += 1;
            continue;
        }
        pairs.push((a, b));
    }

    if pairs.is_empty() && appearance.is_empty() && options.sidecar_nodes.is_empty() {
        return Err(RcpError::EmptyInput);
    }

    let mut duplicates = 0usize;
    let mut unreciprocated = 0usize;
    let mut kept: BTreeSet<(u32, u32)> = BTreeSet::new();
    match options.mode {
        LoadMode::Undirected => {
            for &(a, b) in &pairs {
                if !kept.insert((a.min(b), a.max(b))) {
                    duplicates += 1;
                }
            }
        }
        LoadMode::MutualOnly => {
            let mut directed: BTreeSet<(u32, u32)> = BTreeSet::new();
            for &(a, b) in &pairs {
                if !directed.insert((a, b)) {
                    duplicates += 1;
                }
            }
            for &(a, b) in &directed {
                if a < b {
                    if directed.contains(&(b, a)) {
                        kept.insert((a, b));
                    } else {
                        unreciprocated += 1;
                    }
                } else if !directed.contains(&(b, a)) {
                    unreciprocated += 1;
                }
            }
        }
    }

    // dense indices by first appearance among retained nodes
    let retain_all = options.retain_isolated;
    let mut linked = vec![false; appearance.len()];
    for &(a, b) in &kept {
        linked[a as usize] = true;
        linked[b as usize] = true;
    }
    let mut builder = GraphBuilder::default();
    let mut final_id = vec![u32::MAX; appearance.len()];
    for (raw, label) in appearance.iter().enumerate() {
        if retain_all || linked[raw] {
            final_id[raw] = builder.node(label).0;
        }
    }
    for extra in &options.sidecar_nodes {
        if let Some(&raw) = intern.get(extra.as_str()) {
            if final_id[raw as usize] == u32::MAX {
                final_id[raw as usize] = builder.node(extra).0;
            }
        } else {
            builder.node(extra);
        }
    }
    for &(a, b) in &kept {
        builder.edge(NodeId(final_id[a as usize]), NodeId(final_id[b as usize]));
    }

    if builder.node_count() == 0 {
        return Err(RcpError::EmptyInput);
    }

    let (graph, _) = builder.build_with_report();
    let report = LoadReport {
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        self_loops_dropped: self_loops,
        duplicates_collapsed: duplicates,
        unreciprocated_dropped: unreciprocated,
    };
    Ok((graph, report))
}

/// Load a node-attribute file: `node_label<TAB>group_label` per line,
/// `#` comments skipped. Returns `(label, group)` pairs in file order.
pub fn load_attributes<R: Read>(source: R) -> Result<Vec<(String, String)>> {
    let reader = BufReader::new(source);
    let mut out = Vec::new();
    for (line_no, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        let mut parts = trimmed.splitn(2, '\t');
        let label = parts.next().unwrap_or("").trim();
        let group = parts.next().map(str::trim).unwrap_or("");
        if label.is_empty() || group.is_empty() {
            return Err(RcpError::Parse {
                line: line_no + 1,
                message: "expected node_label<TAB>group_label".to_string(),
            });
        }
        out.push((label.to_string(), group.to_string()));
    }
    Ok(out)
}

/// Count of common elements of two ascending slices.
pub(crate) fn intersection_count(a: &[NodeId], b: &[NodeId]) -> usize {
    let mut count = 0;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// True iff two ascending slices share at least `k` elements (early exit).
pub(crate) fn intersection_count_at_least(a: &[NodeId], b: &[NodeId], k: usize) -> bool {
    if k == 0 {
        return true;
    }
    let mut count = 0;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if count + (a.len() - i).min(b.len() - j) < k {
            return false;
        }
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                if count >= k {
                    return true;
                }
                i += 1;
                j += 1;
            }
        }
    }
    false
}

fn levenshtein_capped(a: &str, b: &str, cap: usize) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.len().abs_diff(b.len()) > cap {
        return cap + 1;
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load_str(input: &str, options: &LoadOptions) -> Result<(SocialGraph, LoadReport)> {
        load_edge_list(input.as_bytes(), options)
    }

    #[test]
    fn undirected_dedup_and_self_loop() {
        let (g, report) = load_str("a b\nb a\na a\n", &LoadOptions::default()).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(report.self_loops_dropped, 1);
        assert_eq!(report.duplicates_collapsed, 1);
    }

    #[test]
    fn mutual_only_keeps_reciprocated_edges() {
        let opts = LoadOptions {
            mode: LoadMode::MutualOnly,
            ..Default::default()
        };
        let (g, report) = load_str("a b\nb a\nb c\n", &opts).unwrap();
        assert_eq!(g.node_count(), 2, "c never mutualized and is dropped");
        assert_eq!(g.edge_count(), 1);
        assert!(g.node_by_label("c").is_none());
        assert_eq!(report.unreciprocated_dropped, 1);

        let opts = LoadOptions {
            mode: LoadMode::MutualOnly,
            retain_isolated: true,
            ..Default::default()
        };
        let (g, _) = load_str("a b\nb a\nb c\n", &opts).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.degree(g.node_by_label("c").unwrap()), 0);
    }

    #[test]
    fn triangle_with_duplicate_and_comment() {
        let (g, report) = load_str("# fixture\na b\nb c\nc a\na b\n", &LoadOptions::default()).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(report.duplicates_collapsed, 1);
    }

    #[test]
    fn comma_separated_tokens_accepted() {
        let (g, _) = load_str("a,b\nb,c\n", &LoadOptions::default()).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn malformed_line_reports_number() {
        let err = load_str("a b\nx y z\n", &LoadOptions::default()).unwrap_err();
        match err {
            RcpError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            load_str("", &LoadOptions::default()),
            Err(RcpError::EmptyInput)
        ));
        assert!(matches!(
            load_str("# only a comment\n", &LoadOptions::default()),
            Err(RcpError::EmptyInput)
        ));
    }

    #[test]
    fn first_appearance_indexing_is_deterministic() {
        let input = "n4 n2\nn2 n9\nn9 n4\n";
        let (g1, _) = load_str(input, &LoadOptions::default()).unwrap();
        let (g2, _) = load_str(input, &LoadOptions::default()).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(g1.label(NodeId(0)), "n4");
        assert_eq!(g1.label(NodeId(1)), "n2");
        assert_eq!(g1.label(NodeId(2)), "n9");
    }

    #[test]
    fn sidecar_nodes_are_appended() {
        let opts = LoadOptions {
            sidecar_nodes: vec!["lonely".to_string(), "a".to_string()],
            ..Default::default()
        };
        let (g, _) = load_str("a b\n", &opts).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.label(NodeId(2)), "lonely");
        assert_eq!(g.degree(NodeId(2)), 0);
    }

    #[test]
    fn adjacency_is_symmetric_and_loop_free() {
        let (g, _) = load_str("a b\nb c\nc a\nc d\nd e\n", &LoadOptions::default()).unwrap();
        for i in g.nodes() {
            assert!(!g.has_edge(i, i));
            for &j in g.neighbors(i) {
                assert!(g.has_edge(j, i));
            }
        }
    }

    #[test]
    fn tie_strength_examples() {
        let mut b = GraphBuilder::default();
        b.edge_by_label("a", "b");
        b.edge_by_label("b", "c");
        b.edge_by_label("c", "a");
        let g = b.build();
        let (a, bb) = (NodeId(0), NodeId(1));
        assert_eq!(g.tie_strength(a, bb).unwrap(), 1);

        let mut b = GraphBuilder::default();
        for i in 0..5u32 {
            for j in (i + 1)..5 {
                b.edge_by_label(&format!("k{i}"), &format!("k{j}"));
            }
        }
        let k5 = b.build();
        assert_eq!(k5.tie_strength(NodeId(0), NodeId(4)).unwrap(), 3);

        let mut b = GraphBuilder::default();
        b.edge_by_label("a", "b");
        b.edge_by_label("b", "c");
        let path = b.build();
        assert_eq!(path.tie_strength(NodeId(0), NodeId(1)).unwrap(), 0);

        assert!(path.tie_strength(NodeId(0), NodeId(0)).is_err());
    }

    #[test]
    fn stats_examples() {
        let mut b = GraphBuilder::default();
        for i in 0..4u32 {
            for j in (i + 1)..4 {
                b.edge_by_label(&format!("k{i}"), &format!("k{j}"));
            }
        }
        let s = b.build().stats().unwrap();
        assert_eq!(s.avg_degree, 3.0);
        assert_eq!(s.clustering_coefficient, 1.0);

        let mut b = GraphBuilder::default();
        for i in 0..5u32 {
            b.edge_by_label(&format!("c{i}"), &format!("c{}", (i + 1) % 5));
        }
        let s = b.build().stats().unwrap();
        assert_eq!(s.avg_degree, 2.0);
        assert_eq!(s.clustering_coefficient, 0.0);

        // triangle plus one pendant: (1/3 + 1 + 1 + 0) / 4
        let mut b = GraphBuilder::default();
        b.edge_by_label("a", "b");
        b.edge_by_label("b", "c");
        b.edge_by_label("c", "a");
        b.edge_by_label("a", "d");
        let s = b.build().stats().unwrap();
        assert!((s.clustering_coefficient - 7.0 / 12.0).abs() < 1e-12);

        assert!(GraphBuilder::default().build().stats().is_err());
    }

    #[test]
    fn near_match_suggestions() {
        let (g, _) = load_str("alice bob\nbob carol\n", &LoadOptions::default()).unwrap();
        match g.require_label("alicia") {
            Err(RcpError::UnknownLabel { near_matches, .. }) => {
                assert!(near_matches.contains(&"alice".to_string()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
