//! Oracle cross-checks and property tests for the expansion engine.

use std::collections::BTreeSet;

use proptest::prelude::*;

use rcp_core::generate;
use rcp_core::graph::NodeId;
use rcp_core::percolation::{
    brute_force_largest_backbone, compose_backbone_ordered, compose_backbone_with,
    BruteForceCaps,
};
use rcp_core::policy::{check_expansion_feasibility, ExpansionDuplet, RcpPolicy};
use rcp_core::supercore::build_strong_tie_graph;

fn policy(alpha: u32, beta: u32) -> RcpPolicy {
    RcpPolicy::new(alpha, beta).unwrap()
}

/// Engine and exhaustive-duplet oracle agree on every center of every small
/// graph, across the full policy grid.
#[test]
fn generality_equivalence_on_small_corpus() {
    let caps = BruteForceCaps { max_nodes: 12 };
    let mut checked = 0usize;
    for seed in 0..30u64 {
        let n = 5 + (seed as usize % 8); // 5..=12
        let p = [0.2, 0.35, 0.5][seed as usize % 3];
        let g = generate::gnp(n, p, seed);
        for beta in 1..=3u32 {
            for alpha in 2..=4u32 {
                let pol = policy(alpha, beta);
                let stg = build_strong_tie_graph(&g, pol);
                for center in g.nodes() {
                    let engine = compose_backbone_with(&stg, center).unwrap().member_set();
                    let oracle =
                        brute_force_largest_backbone(&g, pol, center, caps).unwrap();
                    assert_eq!(
                        engine, oracle,
                        "seed {seed} n {n} {pol} center {center}: engine vs oracle"
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000);
}

/// Shuffled worklist orders cannot change the member set.
#[test]
fn confluence_under_shuffled_worklists() {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for seed in 0..10u64 {
        let g = generate::gnp(40, 0.2, seed);
        let stg = build_strong_tie_graph(&g, policy(3, 2));
        for center in g.nodes().step_by(7) {
            let reference = compose_backbone_with(&stg, center).unwrap();
            for _ in 0..4 {
                let mut priority: Vec<u32> = (0..g.node_count() as u32).collect();
                priority.shuffle(&mut rng);
                let shuffled = compose_backbone_ordered(&stg, center, &priority).unwrap();
                assert_eq!(reference.members(), shuffled.members());
            }
        }
    }
}

/// Branch A feasibility survives enlarging the sentinel set with extra
/// connected backbone nodes while the key node and containment hold.
#[test]
fn branch_a_stable_under_sentinel_enlargement() {
    // key l with candidates q; extra sentinels e1, e2 inside F(l)
    let mut b = rcp_core::graph::GraphBuilder::default();
    b.edge_by_label("l", "q");
    for c in ["c1", "c2", "c3"] {
        b.edge_by_label("l", c);
        b.edge_by_label("q", c);
    }
    b.edge_by_label("l", "e1");
    b.edge_by_label("l", "e2");
    b.edge_by_label("e1", "q");
    b.edge_by_label("e2", "q");
    let g = b.build();
    let id = |l: &str| g.node_by_label(l).unwrap();
    let pol = policy(4, 3);

    let mut backbone: BTreeSet<NodeId> = [id("l")].into_iter().collect();
    let mut duplet = ExpansionDuplet::new([id("l")], [id("q")]);
    let verdict = check_expansion_feasibility(&g, pol, &duplet, &backbone).unwrap();
    assert!(verdict.feasible);

    for extra in ["e1", "e2"] {
        backbone.insert(id(extra));
        duplet.sentinels.insert(id(extra));
        let verdict = check_expansion_feasibility(&g, pol, &duplet, &backbone).unwrap();
        assert!(verdict.feasible, "enlarged by {extra}");
        assert_eq!(verdict.branch, rcp_core::policy::Branch::A);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Raising beta never turns an infeasible duplet feasible.
    #[test]
    fn feasibility_monotone_in_beta(
        seed in 0u64..500,
        r_bits in 1u16..64,
        q_bits in 1u16..64,
        alpha in 2u32..=4,
        beta in 1u32..=2,
    ) {
        let g = generate::gnp(12, 0.4, seed);
        let r_set: BTreeSet<NodeId> = (0..6u32)
            .filter(|i| r_bits & (1 << i) != 0)
            .map(NodeId)
            .collect();
        let q_set: BTreeSet<NodeId> = (6..12u32)
            .filter(|i| q_bits & (1 << (i - 6)) != 0)
            .map(NodeId)
            .collect();
        prop_assume!(!r_set.is_empty() && !q_set.is_empty());
        let backbone = r_set.clone();
        let duplet = ExpansionDuplet { sentinels: r_set, candidates: q_set, key_node: None };

        let loose = check_expansion_feasibility(&g, policy(alpha, beta), &duplet, &backbone).unwrap();
        let tight = check_expansion_feasibility(&g, policy(alpha, beta + 1), &duplet, &backbone).unwrap();
        prop_assert!(!(tight.feasible && !loose.feasible));
    }

    /// Feasibility depends only on (R, Q, G, policy), not on the rest of
    /// the backbone.
    #[test]
    fn feasibility_ignores_backbone_beyond_sentinels(
        seed in 0u64..500,
        r_bits in 1u16..64,
        q_bits in 1u16..64,
        extra_bits in 0u16..64,
    ) {
        let g = generate::gnp(12, 0.4, seed);
        let r_set: BTreeSet<NodeId> = (0..6u32)
            .filter(|i| r_bits & (1 << i) != 0)
            .map(NodeId)
            .collect();
        let q_set: BTreeSet<NodeId> = (6..9u32)
            .filter(|i| q_bits & (1 << (i - 6)) != 0)
            .map(NodeId)
            .collect();
        prop_assume!(!r_set.is_empty() && !q_set.is_empty());
        let duplet = ExpansionDuplet { sentinels: r_set.clone(), candidates: q_set.clone(), key_node: None };

        let minimal = check_expansion_feasibility(&g, policy(3, 2), &duplet, &r_set).unwrap();
        let mut enlarged = r_set.clone();
        enlarged.extend((9..12u32).filter(|i| extra_bits & (1 << (i - 9)) != 0).map(NodeId));
        prop_assume!(enlarged.intersection(&q_set).next().is_none());
        let widened = check_expansion_feasibility(&g, policy(3, 2), &duplet, &enlarged).unwrap();
        prop_assert_eq!(minimal.feasible, widened.feasible);
        prop_assert_eq!(minimal.branch, widened.branch);
    }

    /// The engine agrees with the oracle on arbitrary random graphs.
    #[test]
    fn engine_equals_oracle_on_random_graphs(
        seed in 0u64..2000,
        n in 4usize..=10,
        edge_prob in 0.15f64..0.6,
        alpha in 2u32..=4,
        beta in 1u32..=3,
    ) {
        let g = generate::gnp(n, edge_prob, seed);
        let pol = policy(alpha, beta);
        let stg = build_strong_tie_graph(&g, pol);
        let center = NodeId((seed % n as u64) as u32);
        let engine = compose_backbone_with(&stg, center).unwrap().member_set();
        let oracle = brute_force_largest_backbone(&g, pol, center, BruteForceCaps { max_nodes: 10 }).unwrap();
        prop_assert_eq!(engine, oracle);
    }
}
