//! Whole-graph batch pipeline over the unique supercore partition.
//!
//! Three steps: keep only ties of strength at least `beta` and take the
//! connected components of that strong-tie graph; draw a directed edge from
//! component `H_i` to `H_j` whenever some node of `H_j` sees a connected
//! set of at least `alpha` nodes inside `H_i`; condense strongly connected
//! components of that digraph. The condensation is acyclic, its node sets
//! partition the graph, and directed reachability yields the largest
//! backbone (and complete domain) for every node at once.

use std::collections::BTreeSet;

use serde_json::json;

use crate::error::{RcpError, Result};
use crate::graph::{intersection_count_at_least, NodeId, SocialGraph};
use crate::policy::RcpPolicy;

/// Subgraph of the base graph keeping only beta-strong ties.
#[derive(Debug, Clone)]
pub struct StrongTieGraph<'g> {
    base: &'g SocialGraph,
    policy: RcpPolicy,
    strong: Vec<Vec<NodeId>>,
}

impl<'g> StrongTieGraph<'g> {
    pub fn base(&self) -> &'g SocialGraph {
        self.base
    }

    pub fn policy(&self) -> RcpPolicy {
        self.policy
    }

    pub fn strong_neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.strong[node.index()]
    }

    pub fn strong_edge_count(&self) -> usize {
        self.strong.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// Step 1: retain exactly the edges with tie strength at least `beta`.
pub fn build_strong_tie_graph(graph: &SocialGraph, policy: RcpPolicy) -> StrongTieGraph<'_> {
    let beta = policy.beta() as usize;
    let mut strong: Vec<Vec<NodeId>> = vec![Vec::new(); graph.node_count()];
    for (u, v) in graph.edges() {
        if intersection_count_at_least(graph.neighbors(u), graph.neighbors(v), beta) {
            strong[u.index()].push(v);
            strong[v.index()].push(u);
        }
    }
    // edges() yields ascending pairs, so each list is already sorted
    StrongTieGraph {
        base: graph,
        policy,
        strong,
    }
}

/// Connected components of the strong-tie graph, including singletons.
/// Ordered by smallest contained node index; members sorted.
pub fn strong_components(stg: &StrongTieGraph<'_>) -> Vec<Vec<NodeId>> {
    let n = stg.base.node_count();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n as u32 {
        if seen[start as usize] {
            continue;
        }
        seen[start as usize] = true;
        let mut members = vec![NodeId(start)];
        let mut stack = vec![NodeId(start)];
        while let Some(v) = stack.pop() {
            for &u in stg.strong_neighbors(v) {
                if !seen[u.index()] {
                    seen[u.index()] = true;
                    members.push(u);
                    stack.push(u);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

/// Directed graph over strong-tie components.
#[derive(Debug, Clone)]
pub struct ComponentDigraph {
    pub components: Vec<Vec<NodeId>>,
    pub component_of: Vec<u32>,
    /// Directed edges `(from, to)` over component indices, ascending, no
    /// self-edges.
    pub edges: Vec<(u32, u32)>,
}

/// Step 2: edge `H_i -> H_j` iff some `m` in `H_j` has a connected set of at
/// least `alpha` nodes inside `F(m) ∩ H_i`. Computed per node by grouping
/// the neighborhood by component and measuring connected pieces inside each
/// group.
pub fn build_component_digraph(
    graph: &SocialGraph,
    components: &[Vec<NodeId>],
    policy: RcpPolicy,
) -> Result<ComponentDigraph> {
    let n = graph.node_count();
    let mut component_of = vec![u32::MAX; n];
    for (idx, members) in components.iter().enumerate() {
        for &m in members {
            if !graph.contains(m) {
                return Err(RcpError::InvalidArgument(format!(
                    "component member index {m} out of range"
                )));
            }
            if component_of[m.index()] != u32::MAX {
                return Err(RcpError::InvalidArgument(format!(
                    "node {m} appears in more than one component"
                )));
            }
            component_of[m.index()] = idx as u32;
        }
    }
    if component_of.iter().any(|&c| c == u32::MAX) {
        return Err(RcpError::InvalidArgument(
            "components do not cover the node set".into(),
        ));
    }

    let alpha = policy.alpha() as usize;
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut grouped: Vec<(u32, NodeId)> = Vec::new();
    for m in graph.nodes() {
        let own = component_of[m.index()];
        grouped.clear();
        grouped.extend(
            graph
                .neighbors(m)
                .iter()
                .map(|&u| (component_of[u.index()], u))
                .filter(|&(c, _)| c != own),
        );
        grouped.sort_unstable();
        let mut run_start = 0;
        while run_start < grouped.len() {
            let comp = grouped[run_start].0;
            let mut run_end = run_start;
            while run_end < grouped.len() && grouped[run_end].0 == comp {
                run_end += 1;
            }
            let group = &grouped[run_start..run_end];
            if group.len() >= alpha
                && !edges.contains(&(comp, own))
                && max_induced_component(graph, group) >= alpha
            {
                edges.insert((comp, own));
            }
            run_start = run_end;
        }
    }

    Ok(ComponentDigraph {
        components: components.to_vec(),
        component_of,
        edges: edges.into_iter().collect(),
    })
}

/// Size of the largest connected component of the subgraph induced on the
/// (sorted) `group` slice. Union-find over slice positions.
fn max_induced_component(graph: &SocialGraph, group: &[(u32, NodeId)]) -> usize {
    let mut parent: Vec<u32> = (0..group.len() as u32).collect();
    let mut size = vec![1u32; group.len()];
    let mut max = 1u32;
    fn find(parent: &mut [u32], mut i: u32) -> u32 {
        while parent[i as usize] != i {
            let up = parent[parent[i as usize] as usize];
            parent[i as usize] = up;
            i = up;
        }
        i
    }
    for (pos, &(_, u)) in group.iter().enumerate() {
        // forward intersection of F(u) with the remaining group members
        let nbrs = graph.neighbors(u);
        let mut gi = pos + 1;
        let mut ni = 0;
        while gi < group.len() && ni < nbrs.len() {
            match nbrs[ni].cmp(&group[gi].1) {
                std::cmp::Ordering::Less => ni += 1,
                std::cmp::Ordering::Greater => gi += 1,
                std::cmp::Ordering::Equal => {
                    let (mut a, mut b) = (
                        find(&mut parent, pos as u32),
                        find(&mut parent, gi as u32),
                    );
                    if a != b {
                        if size[a as usize] < size[b as usize] {
                            std::mem::swap(&mut a, &mut b);
                        }
                        parent[b as usize] = a;
                        size[a as usize] += size[b as usize];
                        max = max.max(size[a as usize]);
                    }
                    gi += 1;
                    ni += 1;
                }
            }
        }
    }
    max as usize
}

/// Acyclic condensation over the unique supercore partition.
#[derive(Debug, Clone)]
pub struct SupercoreDag {
    /// Node sets of the supercores, ordered by smallest contained node
    /// index; members sorted.
    pub supercores: Vec<Vec<NodeId>>,
    /// Directed edges over supercore indices, ascending, no self-edges.
    pub dag_edges: Vec<(u32, u32)>,
    pub node_to_supercore: Vec<u32>,
}

impl SupercoreDag {
    pub fn supercore_of(&self, node: NodeId) -> u32 {
        self.node_to_supercore[node.index()]
    }

    pub fn len(&self) -> usize {
        self.supercores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.supercores.is_empty()
    }
}

/// Step 3: merge strongly connected components of the component digraph.
pub fn condense(digraph: &ComponentDigraph) -> SupercoreDag {
    let k = digraph.components.len();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); k];
    for &(a, b) in &digraph.edges {
        adj[a as usize].push(b);
    }
    let scc_of = tarjan_scc(&adj);
    let scc_count = scc_of.iter().map(|&c| c as usize + 1).max().unwrap_or(0);

    // gather member nodes per SCC
    let mut nodes_per_scc: Vec<Vec<NodeId>> = vec![Vec::new(); scc_count];
    for (comp_idx, members) in digraph.components.iter().enumerate() {
        nodes_per_scc[scc_of[comp_idx] as usize].extend_from_slice(members);
    }
    for members in &mut nodes_per_scc {
        members.sort_unstable();
    }

    // deterministic ordering by smallest contained node
    let mut order: Vec<usize> = (0..scc_count).collect();
    order.sort_by_key(|&s| nodes_per_scc[s][0]);
    let mut final_of_scc = vec![0u32; scc_count];
    for (final_idx, &scc) in order.iter().enumerate() {
        final_of_scc[scc] = final_idx as u32;
    }

    let supercores: Vec<Vec<NodeId>> = order.into_iter().map(|s| std::mem::take(&mut nodes_per_scc[s])).collect();
    let mut node_to_supercore = vec![0u32; digraph.component_of.len()];
    for (idx, members) in supercores.iter().enumerate() {
        for &m in members {
            node_to_supercore[m.index()] = idx as u32;
        }
    }
    let mut dag_edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    for &(a, b) in &digraph.edges {
        let (sa, sb) = (
            final_of_scc[scc_of[a as usize] as usize],
            final_of_scc[scc_of[b as usize] as usize],
        );
        if sa != sb {
            dag_edges.insert((sa, sb));
        }
    }

    SupercoreDag {
        supercores,
        dag_edges: dag_edges.into_iter().collect(),
        node_to_supercore,
    }
}

/// Iterative Tarjan; returns the SCC index of every vertex.
fn tarjan_scc(adj: &[Vec<u32>]) -> Vec<u32> {
    let n = adj.len();
    let mut index = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut scc_of = vec![u32::MAX; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut scc_count = 0u32;
    // (vertex, next child position)
    let mut call: Vec<(u32, usize)> = Vec::new();

    for root in 0..n as u32 {
        if index[root as usize] != u32::MAX {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut child)) = call.last_mut() {
            if *child == 0 {
                index[v as usize] = next_index;
                low[v as usize] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v as usize] = true;
            }
            if let Some(&w) = adj[v as usize].get(*child) {
                *child += 1;
                if index[w as usize] == u32::MAX {
                    call.push((w, 0));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent as usize] = low[parent as usize].min(low[v as usize]);
                }
                if low[v as usize] == index[v as usize] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w as usize] = false;
                        scc_of[w as usize] = scc_count;
                        if w == v {
                            break;
                        }
                    }
                    scc_count += 1;
                }
            }
        }
    }
    scc_of
}

/// Largest backbone per supercore: the union of the supercore with every
/// supercore reachable along directed DAG paths, computed in reverse
/// topological order with memoized unions.
pub fn all_largest_backbones(dag: &SupercoreDag) -> Result<Vec<Vec<NodeId>>> {
    let k = dag.supercores.len();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); k];
    let mut indegree = vec![0usize; k];
    for &(a, b) in &dag.dag_edges {
        adj[a as usize].push(b);
        indegree[b as usize] += 1;
    }
    // Kahn topological order; doubles as the acyclicity guard
    let mut queue: Vec<u32> = (0..k as u32).filter(|&v| indegree[v as usize] == 0).collect();
    let mut topo: Vec<u32> = Vec::with_capacity(k);
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        topo.push(v);
        for &w in &adj[v as usize] {
            indegree[w as usize] -= 1;
            if indegree[w as usize] == 0 {
                queue.push(w);
            }
        }
    }
    if topo.len() != k {
        return Err(RcpError::InvariantViolation(
            "supercore digraph contains a cycle".into(),
        ));
    }

    let mut reach: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); k];
    for &v in topo.iter().rev() {
        let mut set = BTreeSet::new();
        set.insert(v);
        for &w in &adj[v as usize] {
            set.extend(reach[w as usize].iter().copied());
        }
        reach[v as usize] = set;
    }

    Ok(reach
        .into_iter()
        .map(|set| {
            let mut members: Vec<NodeId> = set
                .into_iter()
                .flat_map(|s| dag.supercores[s as usize].iter().copied())
                .collect();
            members.sort_unstable();
            members
        })
        .collect())
}

/// Complete domain per supercore: union of closed neighborhoods of the
/// supercore's backbone members. Every node inherits its supercore's domain.
pub fn all_complete_domains(graph: &SocialGraph, backbones: &[Vec<NodeId>]) -> Vec<Vec<NodeId>> {
    let mut mark = vec![u32::MAX; graph.node_count()];
    backbones
        .iter()
        .enumerate()
        .map(|(idx, backbone)| {
            let stamp = idx as u32;
            let mut members = Vec::new();
            for &m in backbone {
                if mark[m.index()] != stamp {
                    mark[m.index()] = stamp;
                    members.push(m);
                }
                for &u in graph.neighbors(m) {
                    if mark[u.index()] != stamp {
                        mark[u.index()] = stamp;
                        members.push(u);
                    }
                }
            }
            members.sort_unstable();
            members
        })
        .collect()
}

/// The full pipeline output for one `(graph, policy)` pair.
#[derive(Debug, Clone)]
pub struct SupercoreAnalysis {
    pub policy: RcpPolicy,
    pub dag: SupercoreDag,
    /// Backbone node set per supercore index.
    pub backbones: Vec<Vec<NodeId>>,
    /// Complete domain node set per supercore index.
    pub domains: Vec<Vec<NodeId>>,
}

impl SupercoreAnalysis {
    /// Run strong ties, components, digraph, condensation, backbones and
    /// domains in sequence.
    pub fn run(graph: &SocialGraph, policy: RcpPolicy) -> Result<SupercoreAnalysis> {
        if graph.is_empty() {
            return Err(RcpError::EmptyGraph);
        }
        let stg = build_strong_tie_graph(graph, policy);
        let components = strong_components(&stg);
        let digraph = build_component_digraph(graph, &components, policy)?;
        let dag = condense(&digraph);
        let backbones = all_largest_backbones(&dag)?;
        let domains = all_complete_domains(graph, &backbones);
        Ok(SupercoreAnalysis {
            policy,
            dag,
            backbones,
            domains,
        })
    }

    pub fn supercore_of(&self, node: NodeId) -> u32 {
        self.dag.supercore_of(node)
    }

    pub fn backbone_of(&self, node: NodeId) -> &[NodeId] {
        &self.backbones[self.supercore_of(node) as usize]
    }

    pub fn domain_of(&self, node: NodeId) -> &[NodeId] {
        &self.domains[self.supercore_of(node) as usize]
    }

    /// JSON form: supercores with sizes (and member labels when asked),
    /// plus the DAG edges.
    pub fn to_json(&self, graph: &SocialGraph, emit_members: bool) -> serde_json::Value {
        let supercores: Vec<serde_json::Value> = self
            .dag
            .supercores
            .iter()
            .enumerate()
            .map(|(idx, members)| {
                let mut entry = json!({
                    "id": idx,
                    "size": members.len(),
                    "backbone_size": self.backbones[idx].len(),
                    "domain_size": self.domains[idx].len(),
                });
                if emit_members {
                    entry["members"] = json!(members
                        .iter()
                        .map(|&m| graph.label(m))
                        .collect::<Vec<_>>());
                }
                entry
            })
            .collect();
        json!({
            "alpha": self.policy.alpha(),
            "beta": self.policy.beta(),
            "supercore_count": self.dag.supercores.len(),
            "dag_edges": self.dag.dag_edges,
            "supercores": supercores,
        })
    }
}
