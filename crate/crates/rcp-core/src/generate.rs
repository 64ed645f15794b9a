//! Deterministic graph generators: small named fixtures for tests and
//! seeded synthetic models for experiments.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{GraphBuilder, NodeId, SocialGraph};

/// Complete graph on `n` nodes, labels `k0..`.
pub fn clique(n: usize) -> SocialGraph {
    let mut b = GraphBuilder::default();
    let ids: Vec<NodeId> = (0..n).map(|i| b.node(&format!("k{i}"))).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            b.edge(ids[i], ids[j]);
        }
    }
    b.build()
}

/// Path on `n` nodes, labels `p0..`.
pub fn path(n: usize) -> SocialGraph {
    let mut b = GraphBuilder::default();
    let ids: Vec<NodeId> = (0..n).map(|i| b.node(&format!("p{i}"))).collect();
    for w in ids.windows(2) {
        b.edge(w[0], w[1]);
    }
    b.build()
}

/// Cycle on `n` nodes, labels `c0..`.
pub fn cycle(n: usize) -> SocialGraph {
    let mut b = GraphBuilder::default();
    let ids: Vec<NodeId> = (0..n).map(|i| b.node(&format!("c{i}"))).collect();
    for i in 0..n {
        b.edge(ids[i], ids[(i + 1) % n]);
    }
    b.build()
}

/// Star with `leaves` leaves, labels `hub`, `leaf0..`.
pub fn star(leaves: usize) -> SocialGraph {
    let mut b = GraphBuilder::default();
    let hub = b.node("hub");
    for i in 0..leaves {
        let leaf = b.node(&format!("leaf{i}"));
        b.edge(hub, leaf);
    }
    b.build()
}

/// The 14-node ladder fixture.
///
/// A path `p1-p2-p3-p4` where each consecutive pair shares three private
/// common neighbors `ci1..ci3` (each adjacent to exactly that pair), plus a
/// node `m` adjacent to `p1..p4` only. The three path edges are the only
/// ties of strength >= 3; every `(pi, cij)` edge has strength 1 and
/// `(m, pi)` strength 1 or 2.
pub fn ladder() -> SocialGraph {
    let mut b = GraphBuilder::default();
    let p: Vec<NodeId> = (1..=4).map(|i| b.node(&format!("p{i}"))).collect();
    for w in p.windows(2) {
        b.edge(w[0], w[1]);
    }
    for pair in 0..3 {
        for j in 1..=3 {
            let c = b.node(&format!("c{}{}", pair + 1, j));
            b.edge(c, p[pair]);
            b.edge(c, p[pair + 1]);
        }
    }
    let m = b.node("m");
    for &pi in &p {
        b.edge(m, pi);
    }
    b.build()
}

/// Erdos-Renyi `G(n, p)` with labels `n0..`, seeded.
pub fn gnp(n: usize, p: f64, seed: u64) -> SocialGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::default();
    let ids: Vec<NodeId> = (0..n).map(|i| b.node(&format!("n{i}"))).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                b.edge(ids[i], ids[j]);
            }
        }
    }
    b.build()
}

/// Configuration for the clustered clique-chain model.
#[derive(Debug, Clone)]
pub struct CliqueChainConfig {
    pub nodes: usize,
    pub clique_min: usize,
    pub clique_max: usize,
    /// Members each new clique shares with already-placed nodes.
    pub overlap: usize,
    /// Fraction of clique edges rewired to uniform random pairs.
    pub rewire_fraction: f64,
    /// Fraction of nodes attached by a few random links instead of cliques.
    pub peripheral_fraction: f64,
    /// Links given to each peripheral node.
    pub peripheral_links: usize,
}

impl Default for CliqueChainConfig {
    fn default() -> Self {
        CliqueChainConfig {
            nodes: 1000,
            clique_min: 5,
            clique_max: 8,
            overlap: 2,
            rewire_fraction: 0.03,
            peripheral_fraction: 0.0,
            peripheral_links: 2,
        }
    }
}

/// Overlapping planted cliques with rewiring: a connected clustered core
/// rich in strong ties, with optional weakly-attached periphery.
pub fn clique_chain(cfg: &CliqueChainConfig, seed: u64) -> SocialGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = clique_chain_edges(cfg, &mut rng);
    let mut b = GraphBuilder::default();
    let ids: Vec<NodeId> = (0..cfg.nodes).map(|i| b.node(&format!("n{i}"))).collect();
    for (u, v) in edges {
        b.edge(ids[u as usize], ids[v as usize]);
    }
    b.build()
}

/// Edge set of the clique-chain model over vertex ids `0..cfg.nodes`.
pub(crate) fn clique_chain_edges(cfg: &CliqueChainConfig, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    assert!(cfg.clique_min >= 3 && cfg.clique_max >= cfg.clique_min);
    assert!(cfg.overlap >= 1 && cfg.overlap < cfg.clique_min);
    let n = cfg.nodes;
    let peripheral = ((n as f64) * cfg.peripheral_fraction).round() as usize;
    let core = n - peripheral;

    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut placed: Vec<u32> = Vec::new();
    let mut next = 0u32;
    while (next as usize) < core {
        let size = rng.gen_range(cfg.clique_min..=cfg.clique_max);
        let mut members: Vec<u32> = Vec::with_capacity(size);
        if !placed.is_empty() {
            for _ in 0..cfg.overlap.min(placed.len()) {
                let pick = placed[rng.gen_range(0..placed.len())];
                if !members.contains(&pick) {
                    members.push(pick);
                }
            }
        }
        while members.len() < size && (next as usize) < core {
            members.push(next);
            placed.push(next);
            next += 1;
        }
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                edges.push((members[i].min(members[j]), members[i].max(members[j])));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();

    if cfg.rewire_fraction > 0.0 && core > 1 {
        let rewire = ((edges.len() as f64) * cfg.rewire_fraction).round() as usize;
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.shuffle(rng);
        for &idx in order.iter().take(rewire) {
            let a = rng.gen_range(0..core) as u32;
            let b = rng.gen_range(0..core) as u32;
            if a != b {
                edges[idx] = (a.min(b), a.max(b));
            }
        }
        edges.sort_unstable();
        edges.dedup();
    }

    for v in core..n {
        for _ in 0..cfg.peripheral_links {
            let t = rng.gen_range(0..v) as u32;
            edges.push((t.min(v as u32), t.max(v as u32)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Two equally sized clique-chain communities (`a*` / `b*` label prefixes)
/// joined by bridging cliques that keep the strong cores balanced.
pub fn two_community(per_side: usize, bridge_cliques: usize, seed: u64) -> SocialGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = CliqueChainConfig {
        nodes: per_side,
        ..Default::default()
    };
    let a_edges = clique_chain_edges(&cfg, &mut rng);
    let b_edges = clique_chain_edges(&cfg, &mut rng);

    let mut b = GraphBuilder::default();
    let a_ids: Vec<NodeId> = (0..per_side).map(|i| b.node(&format!("a{i}"))).collect();
    let b_ids: Vec<NodeId> = (0..per_side).map(|i| b.node(&format!("b{i}"))).collect();
    for (u, v) in a_edges {
        b.edge(a_ids[u as usize], a_ids[v as usize]);
    }
    for (u, v) in b_edges {
        b.edge(b_ids[u as usize], b_ids[v as usize]);
    }
    for _ in 0..bridge_cliques {
        let mut members: Vec<NodeId> = Vec::with_capacity(6);
        for _ in 0..3 {
            members.push(a_ids[rng.gen_range(0..per_side)]);
            members.push(b_ids[rng.gen_range(0..per_side)]);
        }
        members.sort_unstable();
        members.dedup();
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                b.edge(members[i], members[j]);
            }
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_fixture_shape() {
        let g = ladder();
        assert_eq!(g.node_count(), 14);
        assert_eq!(g.edge_count(), 25, "3 path + 18 pair-to-c + 4 m edges");

        let id = |l: &str| g.node_by_label(l).unwrap();
        for (a, b) in [("p1", "p2"), ("p2", "p3"), ("p3", "p4")] {
            assert_eq!(g.tie_strength(id(a), id(b)).unwrap(), 4);
        }
        assert_eq!(g.tie_strength(id("p1"), id("c11")).unwrap(), 1);
        assert_eq!(g.tie_strength(id("m"), id("p1")).unwrap(), 1);
        assert_eq!(g.tie_strength(id("m"), id("p2")).unwrap(), 2);
    }

    #[test]
    fn clique_strengths() {
        let g = clique(6);
        for (a, b) in g.edges() {
            assert_eq!(g.tie_strength(a, b).unwrap(), 4);
        }
    }

    #[test]
    fn seeded_models_are_reproducible() {
        let a = gnp(30, 0.2, 42);
        let b = gnp(30, 0.2, 42);
        assert_eq!(a, b);
        assert_ne!(a, gnp(30, 0.2, 43));

        let cfg = CliqueChainConfig {
            nodes: 200,
            peripheral_fraction: 0.2,
            ..Default::default()
        };
        assert_eq!(clique_chain(&cfg, 7), clique_chain(&cfg, 7));
    }

    #[test]
    fn clique_chain_is_mostly_connected_and_clustered() {
        let cfg = CliqueChainConfig {
            nodes: 300,
            ..Default::default()
        };
        let g = clique_chain(&cfg, 1);
        assert_eq!(g.node_count(), 300);
        let stats = g.stats().unwrap();
        assert!(stats.clustering_coefficient > 0.4, "clustered core expected");
    }
}
