//! Acceptance suite: one pass/fail line per criterion.
//!
//! Run with `cargo test -p rcp-core --test acceptance -- --nocapture` to see
//! the lines; any violated criterion fails its test.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;

use rcp_core::analysis::sweep;
use rcp_core::generate::{self, CliqueChainConfig};
use rcp_core::graph::{NodeId, SocialGraph};
use rcp_core::percolation::{
    brute_force_largest_backbone, compose_backbone_ordered, compose_backbone_with,
    compose_complete_domain, BruteForceCaps,
};
use rcp_core::policy::{BehaviorParams, RcpPolicy};
use rcp_core::sim::{
    generate_planted_graph, measure_domain_resilience, mean_stderr, verify_assumptions,
    GeneratorConfig,
};
use rcp_core::supercore::{all_largest_backbones, build_strong_tie_graph, SupercoreAnalysis};

fn policy(alpha: u32, beta: u32) -> RcpPolicy {
    RcpPolicy::new(alpha, beta).unwrap()
}

fn pass(line: &str) {
    println!("ACCEPTANCE {line}: PASS");
}

/// Criterion 1 — oracle generality: on 504 random graphs with n <= 12,
/// across the full policy grid beta in {1,2,3} x alpha in {2,3,4}, the
/// exhaustive duplet oracle equals the engine for every center, within five
/// minutes.
#[test]
fn c01_oracle_generality() {
    let started = Instant::now();
    let graphs: Vec<SocialGraph> = (0..504u64)
        .map(|seed| {
            let n = 4 + (seed as usize % 9);
            let p = [0.15, 0.25, 0.35, 0.5][seed as usize % 4];
            generate::gnp(n, p, seed)
        })
        .collect();
    let caps = BruteForceCaps { max_nodes: 12 };
    let checked: usize = graphs
        .par_iter()
        .enumerate()
        .map(|(seed, g)| {
            let mut count = 0;
            for beta in 1..=3u32 {
                for alpha in 2..=4u32 {
                    let pol = policy(alpha, beta);
                    let stg = build_strong_tie_graph(g, pol);
                    for center in g.nodes() {
                        let engine = compose_backbone_with(&stg, center).unwrap().member_set();
                        let oracle =
                            brute_force_largest_backbone(g, pol, center, caps).unwrap();
                        assert_eq!(
                            engine, oracle,
                            "criterion 1: divergence at graph {seed}, {pol}, center {center}"
                        );
                        count += 1;
                    }
                }
            }
            count
        })
        .sum();
    let elapsed = started.elapsed();
    assert!(checked >= 500 * 9 * 4, "corpus too small: {checked}");
    assert!(
        elapsed.as_secs() < 300,
        "criterion 1 runtime {elapsed:?} exceeds 5 minutes"
    );
    pass(&format!(
        "1 (oracle generality, {checked} center checks in {elapsed:.1?})"
    ));
}

/// Criteria 2-4 — on 200 random graphs (n <= 60): the pipeline backbone is
/// a subset of the engine backbone for every node (equality rate reported,
/// strict subsets dumped as counterexamples); supercores partition N; the
/// condensed digraph is acyclic.
#[test]
fn c02_c03_c04_method_soundness_partition_acyclicity() {
    let out_dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("counterexamples");
    std::fs::create_dir_all(&out_dir).unwrap();

    let policies = [(2u32, 1u32), (3, 2), (4, 3), (4, 2), (5, 3)];
    let results: Vec<(usize, usize, usize)> = (0..200u64)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&seed| {
            let g = if seed % 5 == 4 {
                let cfg = CliqueChainConfig {
                    nodes: 40 + (seed as usize % 21),
                    clique_min: 4,
                    clique_max: 6,
                    overlap: 1,
                    rewire_fraction: 0.05,
                    peripheral_fraction: 0.1,
                    peripheral_links: 2,
                };
                generate::clique_chain(&cfg, seed)
            } else {
                let n = 20 + (seed as usize % 41);
                let p = [0.08, 0.15, 0.25, 0.35][seed as usize % 4];
                generate::gnp(n, p, seed)
            };
            let (alpha, beta) = policies[seed as usize % policies.len()];
            let pol = policy(alpha, beta);
            let analysis = SupercoreAnalysis::run(&g, pol).unwrap();

            // criterion 3: partition
            let mut seen = vec![false; g.node_count()];
            for members in &analysis.dag.supercores {
                for &m in members {
                    assert!(!seen[m.index()], "criterion 3: overlap at seed {seed}");
                    seen[m.index()] = true;
                }
            }
            assert!(
                seen.iter().all(|&s| s),
                "criterion 3: cover failure at seed {seed}"
            );

            // criterion 4: acyclicity (explicit cycle check via topological
            // pass over the condensed digraph)
            assert!(
                all_largest_backbones(&analysis.dag).is_ok(),
                "criterion 4: cycle at seed {seed}"
            );

            // criterion 2: soundness, with equality measured per node
            let stg = build_strong_tie_graph(&g, pol);
            let mut equal = 0usize;
            let mut strict = 0usize;
            for node in g.nodes() {
                let direct = compose_backbone_with(&stg, node).unwrap();
                let pipeline = analysis.backbone_of(node);
                for &m in pipeline {
                    assert!(
                        direct.contains(m),
                        "criterion 2: pipeline exceeded engine at seed {seed}, node {node}"
                    );
                }
                if pipeline.len() == direct.len() {
                    equal += 1;
                } else {
                    strict += 1;
                    let file = out_dir.join(format!("seed{seed}_node{node}.json"));
                    let payload = serde_json::json!({
                        "seed": seed,
                        "alpha": alpha,
                        "beta": beta,
                        "node": g.label(node),
                        "pipeline_backbone": pipeline.iter().map(|&m| g.label(m)).collect::<Vec<_>>(),
                        "engine_backbone": direct.members().iter().map(|&m| g.label(m)).collect::<Vec<_>>(),
                        "edges": g.edges().map(|(a, b)| [g.label(a), g.label(b)]).collect::<Vec<_>>(),
                    });
                    std::fs::write(file, serde_json::to_string_pretty(&payload).unwrap())
                        .unwrap();
                }
            }
            (g.node_count(), equal, strict)
        })
        .collect();

    let nodes: usize = results.iter().map(|r| r.0).sum();
    let equal: usize = results.iter().map(|r| r.1).sum();
    let strict: usize = results.iter().map(|r| r.2).sum();
    pass("2 (method soundness: pipeline subset of engine on 200 graphs)");
    println!(
        "    criterion 2 equality rate: {equal}/{nodes} nodes ({:.4}); {strict} strict-subset counterexamples in {}",
        equal as f64 / nodes as f64,
        out_dir.display()
    );
    pass("3 (supercore partition on 200 graphs)");
    pass("4 (supercore digraph acyclic on 200 graphs)");
}

/// Criteria 5-6 — 50 planted graphs (~2000 nodes, r = 0.05, x = 3, y = 4)
/// under pi(4,3): zero bad citizens in every good center's backbone, and
/// pooled mean domain bad fraction + 3 stderr below r, with the analytic
/// bound below r for every nonempty backbone.
#[test]
fn c05_c06_planted_resilience() {
    let params = BehaviorParams::new(0.05, 3, 4).unwrap();
    let config = GeneratorConfig::default();
    let pol = policy(4, 3);
    let started = Instant::now();

    let mut total_bad: u64 = 0;
    let mut fractions: Vec<f64> = Vec::new();
    let mut max_bound = 0.0f64;
    for seed in 0..50u64 {
        let pg = generate_planted_graph(params, 1700, 300, &config, seed).unwrap();
        let assumptions = verify_assumptions(&pg);
        assert!(
            assumptions.all_ok(),
            "criterion 5: generator contract broken at seed {seed}: {assumptions:?}"
        );
        let report = measure_domain_resilience(&pg, pol);
        assert!(report.aligned);
        for center in &report.centers {
            total_bad += center.backbone_bad as u64;
            fractions.push(center.domain_bad_fraction);
            assert!(
                center.analytic_bound < params.r,
                "criterion 6: analytic bound not below r for {}",
                center.center
            );
            max_bound = max_bound.max(center.analytic_bound);
        }
        assert_eq!(
            report.centers.iter().map(|c| c.backbone_bad as u64).sum::<u64>(),
            0,
            "criterion 5: bad backbone member at seed {seed}"
        );
    }
    assert_eq!(total_bad, 0, "criterion 5 demands exact zero");
    pass(&format!(
        "5 (backbone purity: 0 bad members across {} good centers, 50 seeds)",
        fractions.len()
    ));

    let (mean, stderr) = mean_stderr(&fractions);
    assert!(
        mean + 3.0 * stderr < params.r,
        "criterion 6: mean {mean} + 3*stderr {stderr} not below r {}",
        params.r
    );
    pass(&format!(
        "6 (domain resilience: mean {:.4} + 3se {:.5} < r 0.05; max bound {:.4}; {:.1?})",
        mean,
        3.0 * stderr,
        max_bound,
        started.elapsed()
    ));
}

/// Criterion 7 — ladder fixture exactness through both the engine and the
/// batch pipeline.
#[test]
fn c07_ladder_exactness() {
    let g = generate::ladder();
    let pol = policy(4, 3);
    let id = |l: &str| g.node_by_label(l).unwrap();
    let expected: BTreeSet<NodeId> =
        ["p1", "p2", "p3", "p4", "m"].iter().map(|l| id(l)).collect();

    let stg = build_strong_tie_graph(&g, pol);
    let b_p1 = compose_backbone_with(&stg, id("p1")).unwrap();
    assert_eq!(b_p1.member_set(), expected);
    assert_eq!(b_p1.len(), 5);
    let d_p1 = compose_complete_domain(&g, &b_p1).unwrap();
    assert_eq!(d_p1.len(), 14);

    let b_m = compose_backbone_with(&stg, id("m")).unwrap();
    assert_eq!(b_m.members(), &[id("m")]);
    let d_m = compose_complete_domain(&g, &b_m).unwrap();
    assert_eq!(d_m.len(), 5);

    let analysis = SupercoreAnalysis::run(&g, pol).unwrap();
    assert_eq!(analysis.dag.supercores.len(), 11);
    assert_eq!(analysis.dag.dag_edges.len(), 1);
    assert_eq!(
        analysis.backbone_of(id("p1")).iter().copied().collect::<BTreeSet<_>>(),
        expected
    );
    assert_eq!(analysis.domain_of(id("p1")).len(), 14);
    assert_eq!(analysis.backbone_of(id("m")), &[id("m")]);
    assert_eq!(analysis.domain_of(id("m")).len(), 5);

    pass("7 (ladder fixture exactness: backbones, domains, 11 supercores, 1 DAG edge)");
}

/// Criterion 8 — raising either policy parameter never enlarges any
/// backbone, on 100 random graphs.
#[test]
fn c08_policy_monotonicity() {
    (0..100u64).collect::<Vec<_>>().par_iter().for_each(|&seed| {
        let n = 16 + (seed as usize % 25);
        let p = [0.15, 0.25, 0.35][seed as usize % 3];
        let g = generate::gnp(n, p, seed + 7000);
        // nested chain plus single-parameter steps
        let chain = [(2u32, 1u32), (3, 2), (4, 3), (5, 4)];
        let stgs: Vec<_> = chain
            .iter()
            .map(|&(a, b)| build_strong_tie_graph(&g, policy(a, b)))
            .collect();
        for center in g.nodes() {
            let mut previous: Option<BTreeSet<NodeId>> = None;
            for stg in &stgs {
                let members = compose_backbone_with(stg, center).unwrap().member_set();
                if let Some(prev) = &previous {
                    assert!(
                        members.is_subset(prev),
                        "criterion 8: backbone grew along the chain at seed {seed}"
                    );
                }
                previous = Some(members);
            }
        }
        for &(a, b) in &[(3u32, 2u32), (4, 3)] {
            let base = build_strong_tie_graph(&g, policy(a, b));
            let alpha_up = build_strong_tie_graph(&g, policy(a + 1, b));
            let beta_up = build_strong_tie_graph(&g, policy(a, b + 1));
            for center in g.nodes() {
                let base_set = compose_backbone_with(&base, center).unwrap().member_set();
                for tighter in [&alpha_up, &beta_up] {
                    let tight_set =
                        compose_backbone_with(tighter, center).unwrap().member_set();
                    assert!(
                        tight_set.is_subset(&base_set),
                        "criterion 8: single-parameter step grew a backbone at seed {seed}"
                    );
                }
            }
        }
    });
    pass("8 (policy monotonicity on 100 random graphs)");
}

/// Criterion 9 — desk-scale substitute for the paper-scale analyses:
/// (a) the full pipeline plus a beta sweep completes on a seeded 100k-node,
/// ~1M-edge clustered graph within five minutes, and the sweep satisfies
/// both monotonicity properties; (b) `stats` emits the dataset-table
/// columns bit-for-bit for a SNAP-style edge list.
#[test]
fn c09_desk_scale_substitute() {
    // (a) pipeline scale and sweep shape
    let started = Instant::now();
    let cfg = CliqueChainConfig {
        nodes: 100_000,
        clique_min: 9,
        clique_max: 11,
        overlap: 6,
        rewire_fraction: 0.02,
        peripheral_fraction: 0.2,
        peripheral_links: 2,
    };
    let g = generate::clique_chain(&cfg, 42);
    let edges = g.edge_count();
    assert!(
        (700_000..=1_400_000).contains(&edges),
        "expected ~1M edges, got {edges}"
    );
    let betas: Vec<u32> = (3..=6).collect();
    let rows = sweep(&g, &betas, None, 1000).unwrap();
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 300,
        "criterion 9a: {elapsed:?} exceeds 5 minutes"
    );

    // beta-monotonicity within each bucket
    let mut by_bucket: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
    for row in &rows {
        by_bucket.entry(row.bucket_lo).or_default().push(row.fraction);
    }
    for (bucket, fractions) in &by_bucket {
        for pair in fractions.windows(2) {
            assert!(
                pair[1] <= pair[0] + 1e-12,
                "criterion 9a: fraction rose with beta in bucket {bucket}"
            );
        }
    }
    // degree-monotonicity at fixed beta, over populated buckets
    for &beta in &betas {
        let mut last = -1.0f64;
        for row in rows.iter().filter(|r| r.beta == beta && r.nodes > 0) {
            assert!(
                row.fraction >= last - 1e-12,
                "criterion 9a: fraction fell with degree at beta {beta} bucket {}",
                row.bucket_lo
            );
            last = row.fraction;
        }
    }
    pass(&format!(
        "9a (100k/{edges}-edge pipeline + sweep in {elapsed:.1?}, both monotonicity properties hold)"
    ));

    // (b) stats column format, bit for bit
    let dir = std::env::temp_dir().join(format!("rcp_acceptance_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("snap_style.txt");
    std::fs::write(
        &input,
        "# Undirected graph: toy excerpt\n# Nodes: 4 Edges: 6\n0\t1\n0\t2\n0\t3\n1\t2\n1\t3\n2\t3\n",
    )
    .unwrap();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_rcp"))
        .args(["stats", "--input", input.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "nodes,links,avg_degree,clustering_coefficient\n4,6,3.000000,1.000000\n",
        "criterion 9b: stats output format drifted"
    );
    let _ = std::fs::remove_dir_all(&dir);
    pass("9b (stats reproduces the dataset-table columns bit-for-bit)");
}

/// Criterion 10 — confluence: shuffled worklist orders yield identical
/// backbones on 50 random graphs x 10 permutations.
#[test]
fn c10_confluence() {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    (0..50u64).collect::<Vec<_>>().par_iter().for_each(|&seed| {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xc0ff);
        let n = 20 + (seed as usize % 31);
        let p = [0.12, 0.2, 0.3][seed as usize % 3];
        let g = generate::gnp(n, p, seed + 9000);
        let (alpha, beta) = [(2u32, 1u32), (3, 2), (4, 3)][seed as usize % 3];
        let stg = build_strong_tie_graph(&g, policy(alpha, beta));
        for center in g.nodes() {
            let reference = compose_backbone_with(&stg, center).unwrap();
            for _ in 0..10 {
                let mut priority: Vec<u32> = (0..g.node_count() as u32).collect();
                priority.shuffle(&mut rng);
                let shuffled = compose_backbone_ordered(&stg, center, &priority).unwrap();
                assert_eq!(
                    reference.members(),
                    shuffled.members(),
                    "criterion 10: order dependence at seed {seed}, center {center}"
                );
            }
        }
    });
    pass("10 (confluence: 50 graphs x 10 shuffled orders)");
}
