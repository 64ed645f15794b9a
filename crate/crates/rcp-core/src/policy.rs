//! Percolation policy parameters, behavior assumptions, and feasibility of a
//! single proposed expansion.
//!
//! An expansion is described by a duplet `(R, Q)`: the sentinel set `R`
//! already inside the backbone and the non-empty candidate set `Q` outside
//! it. Feasibility holds in exactly one of two branch pairings:
//!
//! * branch A — a key node `l` sits in `R`, `1 <= |R| < alpha`, `R` is
//!   connected, the whole expansion set lies in `l`'s closed friend circle,
//!   and every candidate is adjacent to `l` with at least `beta` mutual
//!   friends;
//! * branch B — `|R| >= alpha`, `R` is connected, and every candidate is a
//!   key node of the expansion set (hence adjacent to all of `R` and to all
//!   other candidates).
//!
//! Cross-pairing the size clause of one branch with the tie clause of the
//! other is rejected.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{RcpError, Result};
use crate::graph::{NodeId, SocialGraph};

/// The `(alpha, beta)` pair governing percolation strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RcpPolicy {
    alpha: u32,
    beta: u32,
}

impl RcpPolicy {
    pub fn new(alpha: u32, beta: u32) -> Result<Self> {
        if alpha < 1 {
            return Err(RcpError::InvalidPolicy("alpha must be at least 1".into()));
        }
        if beta < 1 {
            return Err(RcpError::InvalidPolicy(
                "beta must be at least 1 (beta = 0 would make every edge strong)".into(),
            ));
        }
        Ok(RcpPolicy { alpha, beta })
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    /// Whether the pair satisfies `alpha >= beta + 1`, mirroring the
    /// congruence requirement `y >= x + 1` on behavior parameters.
    pub fn resilience_aligned(&self) -> bool {
        self.alpha >= self.beta + 1
    }
}

impl std::fmt::Display for RcpPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "pi({},{})", self.alpha, self.beta)
    }
}

/// Behavior parameters of socially responsible accounts: responsibility
/// threshold `r`, small-group threshold `x`, large-group threshold `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BehaviorParams {
    pub r: f64,
    pub x: u32,
    pub y: u32,
}

impl BehaviorParams {
    pub fn new(r: f64, x: u32, y: u32) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(RcpError::InvalidArgument(
                "responsibility threshold r must lie in (0, 1)".into(),
            ));
        }
        if x < 1 {
            return Err(RcpError::InvalidArgument("x must be at least 1".into()));
        }
        if y < x + 1 {
            return Err(RcpError::InvalidArgument("y must be at least x + 1".into()));
        }
        Ok(BehaviorParams { r, x, y })
    }
}

/// True iff the policy guarantees backbone purity under the assumptions:
/// `alpha >= y` and `beta >= x`.
pub fn validate_policy_alignment(policy: RcpPolicy, behavior: &BehaviorParams) -> bool {
    policy.alpha >= behavior.y && policy.beta >= behavior.x
}

/// A proposed expansion: sentinels `R`, candidates `Q`, and optionally a
/// pinned key node (otherwise the checker searches for one).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionDuplet {
    pub sentinels: BTreeSet<NodeId>,
    pub candidates: BTreeSet<NodeId>,
    pub key_node: Option<NodeId>,
}

impl ExpansionDuplet {
    pub fn new(
        sentinels: impl IntoIterator<Item = NodeId>,
        candidates: impl IntoIterator<Item = NodeId>,
    ) -> Self {
        ExpansionDuplet {
            sentinels: sentinels.into_iter().collect(),
            candidates: candidates.into_iter().collect(),
            key_node: None,
        }
    }
}

/// Which branch pairing certified feasibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    A,
    B,
    #[serde(rename = "none")]
    None,
}

/// Outcome of a feasibility check, serializable for fixture auditing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub feasible: bool,
    pub branch: Branch,
    pub violations: Vec<String>,
}

impl Verdict {
    fn feasible(branch: Branch) -> Self {
        Verdict {
            feasible: true,
            branch,
            violations: Vec::new(),
        }
    }
}

/// Every node of `set` whose friend circle contains all other members.
pub fn find_key_nodes(graph: &SocialGraph, set: &BTreeSet<NodeId>) -> Result<BTreeSet<NodeId>> {
    if set.is_empty() {
        return Err(RcpError::InvalidArgument(
            "key-node search requires a non-empty set".into(),
        ));
    }
    for &node in set {
        if !graph.contains(node) {
            return Err(RcpError::InvalidArgument(format!(
                "node index {node} out of range"
            )));
        }
    }
    Ok(set
        .iter()
        .copied()
        .filter(|&l| is_key_node(graph, set, l))
        .collect())
}

fn is_key_node(graph: &SocialGraph, set: &BTreeSet<NodeId>, l: NodeId) -> bool {
    set.iter().all(|&v| v == l || graph.has_edge(l, v))
}

/// Induced-subgraph connectivity of `set` in `graph`.
pub(crate) fn is_connected_subset(graph: &SocialGraph, set: &BTreeSet<NodeId>) -> bool {
    let mut iter = set.iter();
    let Some(&start) = iter.next() else {
        return false;
    };
    if set.len() == 1 {
        return true;
    }
    let mut seen: BTreeSet<NodeId> = BTreeSet::new();
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &u in graph.neighbors(v) {
            if set.contains(&u) && seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == set.len()
}

/// Decide feasibility of one proposed expansion against `P1`-`P3`.
///
/// Preconditions (argument errors when breached): `Q` non-empty and disjoint
/// from both `R` and the current backbone; `R` contained in the backbone.
pub fn check_expansion_feasibility(
    graph: &SocialGraph,
    policy: RcpPolicy,
    duplet: &ExpansionDuplet,
    current_backbone: &BTreeSet<NodeId>,
) -> Result<Verdict> {
    let r = &duplet.sentinels;
    let q = &duplet.candidates;
    if q.is_empty() {
        return Err(RcpError::InvalidArgument(
            "candidate set Q must be non-empty".into(),
        ));
    }
    for &node in r.iter().chain(q.iter()) {
        if !graph.contains(node) {
            return Err(RcpError::InvalidArgument(format!(
                "node index {node} out of range"
            )));
        }
    }
    if !r.is_subset(current_backbone) {
        return Err(RcpError::InvalidArgument(
            "sentinel set R must lie inside the current backbone".into(),
        ));
    }
    if q.iter().any(|n| current_backbone.contains(n)) {
        return Err(RcpError::InvalidArgument(
            "candidate set Q must be disjoint from the current backbone".into(),
        ));
    }
    if r.intersection(q).next().is_some() {
        return Err(RcpError::InvalidArgument(
            "sentinel and candidate sets must be disjoint".into(),
        ));
    }
    if let Some(key) = duplet.key_node {
        if !r.contains(&key) && !q.contains(&key) {
            return Err(RcpError::InvalidArgument(
                "pinned key node must belong to the expansion set".into(),
            ));
        }
    }

    let expansion: BTreeSet<NodeId> = r.union(q).copied().collect();
    let alpha = policy.alpha as usize;
    let r_connected = !r.is_empty() && is_connected_subset(graph, r);

    let mut violations: Vec<String> = Vec::new();

    // Branch A: key node in R, |R| < alpha, beta-strong ties to every candidate.
    let keys_in_r: Vec<NodeId> = match duplet.key_node {
        Some(key) if r.contains(&key) => {
            if is_key_node(graph, &expansion, key) {
                vec![key]
            } else {
                Vec::new()
            }
        }
        Some(_) => Vec::new(),
        None => r
            .iter()
            .copied()
            .filter(|&l| is_key_node(graph, &expansion, l))
            .collect(),
    };
    if keys_in_r.is_empty() {
        violations.push("A/P1: no key node of the expansion set lies in R".to_string());
    } else if r.len() >= alpha {
        violations.push(format!(
            "A/P2: |R| = {} is not below alpha = {}",
            r.len(),
            alpha
        ));
    } else if !r_connected {
        violations.push("A/P2: sentinel set R is not a connected set".to_string());
    } else {
        for &l in &keys_in_r {
            let mut clause_failures = Vec::new();
            for &cand in q {
                if !graph.has_edge(l, cand) {
                    clause_failures.push(format!(
                        "A/P3: candidate {} is not linked with key node {}",
                        graph.label(cand),
                        graph.label(l)
                    ));
                    continue;
                }
                let strength = graph.tie_strength(l, cand)?;
                if strength < policy.beta {
                    clause_failures.push(format!(
                        "A/P3: candidate {} has {} < beta = {} mutual friends with key node {}",
                        graph.label(cand),
                        strength,
                        policy.beta,
                        graph.label(l)
                    ));
                }
            }
            if clause_failures.is_empty() {
                return Ok(Verdict::feasible(Branch::A));
            }
            if l == keys_in_r[0] {
                violations.extend(clause_failures);
            }
        }
    }

    // Branch B: |R| >= alpha and every candidate is a key node.
    if r.len() < alpha {
        violations.push(format!(
            "B/P2: |R| = {} is below alpha = {}",
            r.len(),
            alpha
        ));
    } else if !r_connected {
        violations.push("B/P2: sentinel set R is not a connected set".to_string());
    } else {
        let mut clause_failures = Vec::new();
        if matches!(duplet.key_node, Some(key) if !q.contains(&key)) {
            clause_failures.push("B/P2: pinned key node does not lie in Q".to_string());
        }
        for &cand in q {
            if !is_key_node(graph, &expansion, cand) {
                clause_failures.push(format!(
                    "B/P3: candidate {} is not a key node of the expansion set",
                    graph.label(cand)
                ));
            }
        }
        if clause_failures.is_empty() {
            return Ok(Verdict::feasible(Branch::B));
        }
        violations.extend(clause_failures);
    }

    Ok(Verdict {
        feasible: false,
        branch: Branch::None,
        violations,
    })
}
