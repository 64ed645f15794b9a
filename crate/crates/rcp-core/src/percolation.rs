//! Definition-faithful sequential-expansion engine.
//!
//! [`compose_backbone`] grows the least fixpoint of `S := {center}` under two
//! monotone admission rules:
//!
//! * Rule A — admit `m` if some member `l` is adjacent to `m` with tie
//!   strength at least `beta`;
//! * Rule B — admit `m` if some connected component of the subgraph induced
//!   by `S ∩ F(m)` has size at least `alpha`.
//!
//! Both rules only get easier as `S` grows, so the result is order
//! independent; the worklist pops lowest node index first purely so traces
//! are reproducible. [`brute_force_largest_backbone`] is the independent
//! oracle: it saturates over all feasible expansion duplets (general
//! sentinel sets, multi-node candidate sets) decided by
//! [`check_expansion_feasibility`] and is only usable on small graphs.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use serde::Serialize;

use crate::error::{RcpError, Result};
use crate::graph::{NodeId, SocialGraph};
use crate::policy::{check_expansion_feasibility, ExpansionDuplet, RcpPolicy};
use crate::supercore::{build_strong_tie_graph, StrongTieGraph};

/// Largest policy-compliant backbone composed for one central node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Backbone {
    center: NodeId,
    members: Vec<NodeId>,
}

impl Backbone {
    pub fn center(&self) -> NodeId {
        self.center
    }

    /// Members sorted ascending by index; always contains the center.
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.members.binary_search(&node).is_ok()
    }

    pub fn member_set(&self) -> BTreeSet<NodeId> {
        self.members.iter().copied().collect()
    }
}

/// Complete domain: union of the closed friend circles of backbone members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    center: NodeId,
    members: Vec<NodeId>,
    backbone: Backbone,
}

impl Domain {
    pub fn center(&self) -> NodeId {
        self.center
    }

    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.members.binary_search(&node).is_ok()
    }

    pub fn backbone(&self) -> &Backbone {
        &self.backbone
    }
}

/// Which admission rule fired for a trace step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TraceRule {
    A,
    B,
}

/// Why a node was admitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceWitness {
    /// Rule A: the member holding the strong tie.
    KeyNode(String),
    /// Rule B: the connected sentinel component inside `S ∩ F(m)`.
    SentinelComponent(Vec<String>),
}

/// One admission in an expansion trace; serializes to a JSON line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub rule: TraceRule,
    pub admitted: String,
    pub witness: TraceWitness,
}

/// Render trace steps as JSON lines for audit output.
pub fn trace_to_jsonl(steps: &[TraceStep]) -> String {
    let mut out = String::new();
    for step in steps {
        out.push_str(&serde_json::to_string(step).expect("trace serializes"));
        out.push('\n');
    }
    out
}

/// Compose the largest compliant backbone for `center` under `policy`.
pub fn compose_backbone(
    graph: &SocialGraph,
    policy: RcpPolicy,
    center: NodeId,
) -> Result<Backbone> {
    let stg = build_strong_tie_graph(graph, policy);
    compose_backbone_with(&stg, center)
}

/// As [`compose_backbone`], reusing a prebuilt strong-tie graph. This is the
/// entry point for batch measurement over many centers.
pub fn compose_backbone_with(stg: &StrongTieGraph<'_>, center: NodeId) -> Result<Backbone> {
    Ok(engine(stg, center, None, false)?.0)
}

/// As [`compose_backbone_with`], also returning the expansion trace.
pub fn compose_backbone_traced(
    stg: &StrongTieGraph<'_>,
    center: NodeId,
) -> Result<(Backbone, Vec<TraceStep>)> {
    let (backbone, trace) = engine(stg, center, None, true)?;
    Ok((backbone, trace.unwrap_or_default()))
}

/// Engine with an explicit worklist priority, used by confluence tests.
/// `priority[i]` is the pop rank of node `i`; the member set must not
/// depend on it.
pub fn compose_backbone_ordered(
    stg: &StrongTieGraph<'_>,
    center: NodeId,
    priority: &[u32],
) -> Result<Backbone> {
    Ok(engine(stg, center, Some(priority), false)?.0)
}

struct CandidateState {
    /// Members of `S ∩ F(m)` in insertion order.
    nodes: Vec<u32>,
    parent: Vec<u32>,
    size: Vec<u32>,
    slot_of: HashMap<u32, u32>,
    max_component: u32,
}

impl CandidateState {
    fn new() -> Self {
        CandidateState {
            nodes: Vec::new(),
            parent: Vec::new(),
            size: Vec::new(),
            slot_of: HashMap::new(),
            max_component: 0,
        }
    }

    fn find(&mut self, mut slot: u32) -> u32 {
        while self.parent[slot as usize] != slot {
            let up = self.parent[self.parent[slot as usize] as usize];
            self.parent[slot as usize] = up;
            slot = up;
        }
        slot
    }

    fn insert(&mut self, node: u32, adjacent_members: impl Iterator<Item = u32>) {
        let slot = self.nodes.len() as u32;
        self.nodes.push(node);
        self.parent.push(slot);
        self.size.push(1);
        self.slot_of.insert(node, slot);
        self.max_component = self.max_component.max(1);
        for other in adjacent_members {
            let other_slot = self.slot_of[&other];
            let (mut a, mut b) = (self.find(slot), self.find(other_slot));
            if a == b {
                continue;
            }
            if self.size[a as usize] < self.size[b as usize] {
                std::mem::swap(&mut a, &mut b);
            }
            self.parent[b as usize] = a;
            self.size[a as usize] += self.size[b as usize];
            self.max_component = self.max_component.max(self.size[a as usize]);
        }
    }

    /// Members of the first component reaching `threshold`, for traces.
    fn component_reaching(&mut self, threshold: u32) -> Vec<u32> {
        let roots: Vec<u32> = (0..self.nodes.len() as u32)
            .map(|s| self.find(s))
            .collect();
        match roots.iter().find(|&&r| self.size[r as usize] >= threshold) {
            Some(&root) => roots
                .iter()
                .enumerate()
                .filter(|(_, &r)| r == root)
                .map(|(s, _)| self.nodes[s])
                .collect(),
            None => Vec::new(),
        }
    }
}

enum Reason {
    RuleA { key: u32 },
    RuleB { component: Vec<u32> },
}

fn engine(
    stg: &StrongTieGraph<'_>,
    center: NodeId,
    priority: Option<&[u32]>,
    want_trace: bool,
) -> Result<(Backbone, Option<Vec<TraceStep>>)> {
    let graph = stg.base();
    if !graph.contains(center) {
        return Err(RcpError::InvalidArgument(format!(
            "center index {center} out of range"
        )));
    }
    if let Some(p) = priority {
        debug_assert_eq!(p.len(), graph.node_count());
    }
    let rank = |node: u32| priority.map_or(node, |p| p[node as usize]);
    let alpha = stg.policy().alpha();

    let n = graph.node_count();
    let mut in_backbone = vec![false; n];
    let mut pending = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> = BinaryHeap::new();
    let mut reasons: Vec<(u32, Reason)> = Vec::new();
    let mut states: HashMap<u32, CandidateState> = HashMap::new();

    pending[center.index()] = true;
    heap.push(Reverse((rank(center.0), center.0)));

    let mut members: Vec<NodeId> = Vec::new();
    while let Some(Reverse((_, v))) = heap.pop() {
        if in_backbone[v as usize] {
            continue;
        }
        in_backbone[v as usize] = true;
        states.remove(&v);
        members.push(NodeId(v));

        // Rule A: strong-tie neighbors of the new member join outright.
        for &u in stg.strong_neighbors(NodeId(v)) {
            let u = u.0;
            if !in_backbone[u as usize] && !pending[u as usize] {
                pending[u as usize] = true;
                if want_trace {
                    reasons.push((u, Reason::RuleA { key: v }));
                }
                heap.push(Reverse((rank(u), u)));
            }
        }

        // Rule B bookkeeping: v extends the sentinel components of every
        // still-outside neighbor m (weak or strong ties alike — the
        // component lives in the base graph).
        for &m in graph.neighbors(NodeId(v)) {
            let m = m.0;
            if in_backbone[m as usize] || pending[m as usize] {
                continue;
            }
            let state = states.entry(m).or_insert_with(CandidateState::new);
            // members of S ∩ F(m) adjacent to v
            let adjacent: Vec<u32> = common_members(
                graph.neighbors(NodeId(v)),
                graph.neighbors(NodeId(m)),
                &in_backbone,
            );
            state.insert(v, adjacent.into_iter());
            if state.max_component >= alpha {
                pending[m as usize] = true;
                if want_trace {
                    let component = state.component_reaching(alpha);
                    reasons.push((m, Reason::RuleB { component }));
                }
                heap.push(Reverse((rank(m), m)));
                states.remove(&m);
            }
        }
    }

    let trace = want_trace.then(|| {
        // order steps by actual admission order
        let pop_rank: HashMap<u32, usize> = members
            .iter()
            .enumerate()
            .map(|(i, n)| (n.0, i))
            .collect();
        let mut step_source: Vec<(u32, Reason)> = reasons;
        step_source.retain(|(node, _)| in_backbone[*node as usize]);
        step_source.sort_by_key(|(node, _)| pop_rank[node]);
        let mut steps = Vec::new();
        for (node, reason) in step_source {
            let (rule, witness) = match reason {
                Reason::RuleA { key } => (
                    TraceRule::A,
                    TraceWitness::KeyNode(graph.label(NodeId(key)).to_string()),
                ),
                Reason::RuleB { component } => (
                    TraceRule::B,
                    TraceWitness::SentinelComponent(
                        component
                            .into_iter()
                            .map(|c| graph.label(NodeId(c)).to_string())
                            .collect(),
                    ),
                ),
            };
            steps.push(TraceStep {
                step: steps.len(),
                rule,
                admitted: graph.label(NodeId(node)).to_string(),
                witness,
            });
        }
        steps
    });

    members.sort_unstable();
    Ok((Backbone { center, members }, trace))
}

/// Members of `S ∩ F(m)` adjacent to the newly admitted node: the
/// intersection of two sorted adjacency lists filtered by membership.
fn common_members(a: &[NodeId], b: &[NodeId], in_backbone: &[bool]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if in_backbone[a[i].index()] {
                    out.push(a[i].0);
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Step 2: union of closed neighborhoods of all backbone members.
pub fn compose_complete_domain(graph: &SocialGraph, backbone: &Backbone) -> Result<Domain> {
    for &m in backbone.members() {
        if !graph.contains(m) {
            return Err(RcpError::InvalidArgument(format!(
                "backbone member index {m} out of range"
            )));
        }
    }
    if !backbone.contains(backbone.center()) {
        return Err(RcpError::InvalidArgument(
            "backbone does not contain its center".into(),
        ));
    }
    let mut marked = vec![false; graph.node_count()];
    for &m in backbone.members() {
        marked[m.index()] = true;
        for &u in graph.neighbors(m) {
            marked[u.index()] = true;
        }
    }
    let members: Vec<NodeId> = (0..graph.node_count() as u32)
        .map(NodeId)
        .filter(|n| marked[n.index()])
        .collect();
    Ok(Domain {
        center: backbone.center(),
        members,
        backbone: backbone.clone(),
    })
}

/// Caps protecting the exhaustive oracle from combinatorial blowup.
#[derive(Debug, Clone, Copy)]
pub struct BruteForceCaps {
    pub max_nodes: usize,
}

impl Default for BruteForceCaps {
    fn default() -> Self {
        BruteForceCaps { max_nodes: 12 }
    }
}

/// Exhaustive independent oracle for the largest compliant backbone.
///
/// Saturates the union of all reachable expansions by enumerating every
/// sentinel subset `R` of the current set and every candidate subset `Q` of
/// the outside neighbors of `R`, delegating each feasibility decision to
/// [`check_expansion_feasibility`]. Candidate sets only need to range over
/// neighbors of `R` because every feasible branch ties each candidate to a
/// sentinel by an edge.
pub fn brute_force_largest_backbone(
    graph: &SocialGraph,
    policy: RcpPolicy,
    center: NodeId,
    caps: BruteForceCaps,
) -> Result<BTreeSet<NodeId>> {
    let n = graph.node_count();
    if n > caps.max_nodes {
        return Err(RcpError::CapExceeded {
            nodes: n,
            cap: caps.max_nodes,
        });
    }
    if n > 24 {
        return Err(RcpError::CapExceeded { nodes: n, cap: 24 });
    }
    if !graph.contains(center) {
        return Err(RcpError::InvalidArgument(format!(
            "center index {center} out of range"
        )));
    }

    let adj: Vec<u32> = (0..n)
        .map(|i| {
            graph
                .neighbors(NodeId(i as u32))
                .iter()
                .fold(0u32, |mask, u| mask | (1 << u.0))
        })
        .collect();
    let set_of = |mask: u32| -> BTreeSet<NodeId> {
        (0..n as u32).filter(|i| mask & (1 << i) != 0).map(NodeId).collect()
    };

    let mut s_mask: u32 = 1 << center.0;
    loop {
        let backbone_set = set_of(s_mask);
        let mut added: u32 = 0;

        // nonempty submasks of s_mask
        let mut r_mask = s_mask;
        loop {
            let mut candidates_mask = 0u32;
            let mut bits = r_mask;
            while bits != 0 {
                let i = bits.trailing_zeros();
                candidates_mask |= adj[i as usize];
                bits &= bits - 1;
            }
            candidates_mask &= !s_mask;

            if candidates_mask != 0 {
                let sentinels = set_of(r_mask);
                // nonempty submasks of candidates_mask
                let mut q_mask = candidates_mask;
                loop {
                    if q_mask & !added != 0 {
                        let duplet = ExpansionDuplet {
                            sentinels: sentinels.clone(),
                            candidates: set_of(q_mask),
                            key_node: None,
                        };
                        let verdict =
                            check_expansion_feasibility(graph, policy, &duplet, &backbone_set)?;
                        if verdict.feasible {
                            added |= q_mask;
                        }
                    }
                    if q_mask == 0 {
                        break;
                    }
                    q_mask = (q_mask - 1) & candidates_mask;
                    if q_mask == 0 {
                        break;
                    }
                }
            }

            r_mask = (r_mask - 1) & s_mask;
            if r_mask == 0 {
                break;
            }
        }

        if added == 0 {
            break;
        }
        s_mask |= added;
    }

    Ok(set_of(s_mask))
}
