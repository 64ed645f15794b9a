//! Planted good/bad-citizen graphs and empirical resilience measurement.
//!
//! The generator plants a clustered good-citizen core, a dense bad-citizen
//! block, and cross links sampled so each good node's expected bad-neighbor
//! fraction stays within the responsibility threshold. Two repair passes
//! then enforce the hard behavioral constraints by deletion only: a
//! good-bad edge never keeps `x` or more common neighbors, and no bad node
//! stays adjacent to a connected good set of size `y` or more. The
//! measurement half composes backbones and domains for every good center
//! and reports realized bad fractions next to the analytic bound
//! `r * sum(|F(m)|) / sum(|F(m)| + 1)`.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{RcpError, Result};
use crate::generate::{clique_chain_edges, CliqueChainConfig};
use crate::graph::{GraphBuilder, NodeId, SocialGraph};
use crate::percolation::compose_backbone_with;
use crate::policy::{validate_policy_alignment, BehaviorParams, RcpPolicy};
use crate::supercore::build_strong_tie_graph;

/// Ground-truth role of a node. Exists only in simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Citizen {
    Good,
    Bad,
}

/// Structure of the good-good subgraph.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum GoodModel {
    /// Overlapping planted cliques with rewiring.
    Cliques {
        clique_min: usize,
        clique_max: usize,
        overlap: usize,
        rewire_fraction: f64,
    },
    /// Uniform random graph, mostly for contrast experiments.
    Random { edge_prob: f64 },
}

impl Default for GoodModel {
    fn default() -> Self {
        GoodModel::Cliques {
            clique_min: 5,
            clique_max: 8,
            overlap: 2,
            rewire_fraction: 0.03,
        }
    }
}

/// Generator knobs besides the behavior parameters themselves.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorConfig {
    #[serde(default)]
    pub good_model: GoodModel,
    /// Edge probability inside the bad-citizen block.
    pub bad_density: f64,
    /// Fraction of the responsibility budget `r` spent on cross links;
    /// each good node of degree `d` draws Binomial(d, cross_rate * r)
    /// cross partners.
    pub cross_rate: f64,
    /// Fraction of bad nodes that attempt infiltration at all.
    pub infiltrator_fraction: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            good_model: GoodModel::default(),
            bad_density: 0.25,
            cross_rate: 0.8,
            infiltrator_fraction: 0.2,
        }
    }
}

/// What the generator sampled and what the repair passes removed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    pub cross_edges_sampled: usize,
    pub cross_removed_small_group: usize,
    pub cross_removed_large_group: usize,
}

/// A graph with ground-truth labels and the behavior parameters it was
/// generated under.
#[derive(Debug, Clone)]
pub struct PlantedGraph {
    pub graph: SocialGraph,
    pub labels: Vec<Citizen>,
    pub params: BehaviorParams,
    pub seed: u64,
    pub report: GenerationReport,
}

impl PlantedGraph {
    pub fn new(
        graph: SocialGraph,
        labels: Vec<Citizen>,
        params: BehaviorParams,
        seed: u64,
    ) -> Result<Self> {
        if labels.len() != graph.node_count() {
            return Err(RcpError::InvalidArgument(
                "label vector must cover every node".into(),
            ));
        }
        Ok(PlantedGraph {
            graph,
            labels,
            params,
            seed,
            report: GenerationReport::default(),
        })
    }

    pub fn is_good(&self, node: NodeId) -> bool {
        self.labels[node.index()] == Citizen::Good
    }

    pub fn good_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.graph.nodes().filter(|&n| self.is_good(n))
    }

    pub fn bad_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.graph.nodes().filter(|&n| !self.is_good(n))
    }

    pub fn bad_neighbor_count(&self, node: NodeId) -> usize {
        self.graph
            .neighbors(node)
            .iter()
            .filter(|&&u| !self.is_good(u))
            .count()
    }
}

/// Generate a planted graph satisfying the behavior assumptions.
///
/// Good labels are `g0..`, bad labels `b0..`. Identical inputs give an
/// identical graph.
pub fn generate_planted_graph(
    params: BehaviorParams,
    n_good: usize,
    n_bad: usize,
    config: &GeneratorConfig,
    seed: u64,
) -> Result<PlantedGraph> {
    if n_good < 1 {
        return Err(RcpError::InvalidArgument(
            "at least one good citizen is required".into(),
        ));
    }
    if !(0.0..=1.0).contains(&config.bad_density)
        || !(0.0..=1.0).contains(&config.cross_rate)
        || !(0.0..=1.0).contains(&config.infiltrator_fraction)
    {
        return Err(RcpError::InvalidArgument(
            "generator rates must lie in [0, 1]".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n_good + n_bad;
    let mut adj: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
    let add = |adj: &mut Vec<BTreeSet<u32>>, a: u32, b: u32| {
        if a != b {
            adj[a as usize].insert(b);
            adj[b as usize].insert(a);
        }
    };

    // good-good structure
    match config.good_model {
        GoodModel::Cliques {
            clique_min,
            clique_max,
            overlap,
            rewire_fraction,
        } => {
            let cfg = CliqueChainConfig {
                nodes: n_good,
                clique_min,
                clique_max,
                overlap,
                rewire_fraction,
                peripheral_fraction: 0.0,
                peripheral_links: 0,
            };
            for (u, v) in clique_chain_edges(&cfg, &mut rng) {
                add(&mut adj, u, v);
            }
        }
        GoodModel::Random { edge_prob } => {
            for u in 0..n_good as u32 {
                for v in (u + 1)..n_good as u32 {
                    if rng.gen_bool(edge_prob) {
                        add(&mut adj, u, v);
                    }
                }
            }
        }
    }

    // dense bad-bad block
    for u in n_good as u32..n as u32 {
        for v in (u + 1)..n as u32 {
            if rng.gen_bool(config.bad_density) {
                add(&mut adj, u, v);
            }
        }
    }

    // cross links toward the infiltrating subset of bad nodes
    let mut report = GenerationReport::default();
    let infiltrators: Vec<u32> = {
        let count = ((n_bad as f64) * config.infiltrator_fraction).round() as usize;
        let count = if n_bad > 0 && config.infiltrator_fraction > 0.0 {
            count.max(1).min(n_bad)
        } else {
            0
        };
        (n_good as u32..(n_good + count) as u32).collect()
    };
    if !infiltrators.is_empty() && config.cross_rate > 0.0 {
        let p_link = (config.cross_rate * params.r).min(1.0);
        for g in 0..n_good as u32 {
            let degree = adj[g as usize].len();
            let mut links = 0usize;
            for _ in 0..degree {
                if rng.gen_bool(p_link) {
                    links += 1;
                }
            }
            let links = links.min(infiltrators.len());
            if links > 0 {
                for idx in sample(&mut rng, infiltrators.len(), links) {
                    add(&mut adj, g, infiltrators[idx]);
                    report.cross_edges_sampled += 1;
                }
            }
        }
    }

    let is_good = |v: u32| (v as usize) < n_good;

    // small-group repair: no surviving good-bad edge keeps >= x commons
    loop {
        let mut violating: Vec<(u32, u32)> = Vec::new();
        for g in 0..n_good as u32 {
            for &b in &adj[g as usize] {
                if !is_good(b) && common_count(&adj, g, b) >= params.x as usize {
                    violating.push((g, b));
                }
            }
        }
        if violating.is_empty() {
            break;
        }
        for (g, b) in violating {
            adj[g as usize].remove(&b);
            adj[b as usize].remove(&g);
            report.cross_removed_small_group += 1;
        }
    }

    // large-group repair: every connected good-neighborhood piece of a bad
    // node stays below y; the attacker-side edge is what gets deleted
    for b in n_good as u32..n as u32 {
        loop {
            let good_nbrs: Vec<u32> = adj[b as usize]
                .iter()
                .copied()
                .filter(|&v| is_good(v))
                .collect();
            let Some(victim) = oversized_component_member(&adj, &good_nbrs, params.y as usize)
            else {
                break;
            };
            adj[b as usize].remove(&victim);
            adj[victim as usize].remove(&b);
            report.cross_removed_large_group += 1;
        }
    }

    let mut builder = GraphBuilder::default();
    let mut labels = Vec::with_capacity(n);
    for g in 0..n_good {
        builder.node(&format!("g{g}"));
        labels.push(Citizen::Good);
    }
    for b in 0..n_bad {
        builder.node(&format!("b{b}"));
        labels.push(Citizen::Bad);
    }
    for (u, nbrs) in adj.iter().enumerate() {
        for &v in nbrs {
            if (u as u32) < v {
                builder.edge(NodeId(u as u32), NodeId(v));
            }
        }
    }
    Ok(PlantedGraph {
        graph: builder.build(),
        labels,
        params,
        seed,
        report,
    })
}

fn common_count(adj: &[BTreeSet<u32>], a: u32, b: u32) -> usize {
    let (small, large) = if adj[a as usize].len() <= adj[b as usize].len() {
        (&adj[a as usize], &adj[b as usize])
    } else {
        (&adj[b as usize], &adj[a as usize])
    };
    small.iter().filter(|v| large.contains(v)).count()
}

/// If the subgraph induced on `members` has a connected component of size at
/// least `threshold`, return that component's best-connected member
/// (smallest id on ties) as the deletion victim.
fn oversized_component_member(
    adj: &[BTreeSet<u32>],
    members: &[u32],
    threshold: usize,
) -> Option<u32> {
    if members.len() < threshold {
        return None;
    }
    let member_set: BTreeSet<u32> = members.iter().copied().collect();
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    for &start in members {
        if seen.contains(&start) {
            continue;
        }
        let mut component = vec![start];
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            for &u in &adj[v as usize] {
                if member_set.contains(&u) && seen.insert(u) {
                    component.push(u);
                    stack.push(u);
                }
            }
        }
        if component.len() >= threshold {
            component.sort_unstable();
            let victim = component
                .iter()
                .copied()
                .max_by_key(|&v| {
                    let within = adj[v as usize]
                        .iter()
                        .filter(|u| member_set.contains(u))
                        .count();
                    (within, std::cmp::Reverse(v))
                })
                .expect("component is non-empty");
            return Some(victim);
        }
    }
    None
}

/// One offending good-bad edge for the small-group assumption.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeOffender {
    pub good: String,
    pub bad: String,
    pub common_neighbors: u32,
}

/// One offending bad node for the large-group assumption.
#[derive(Debug, Clone, Serialize)]
pub struct NodeOffender {
    pub bad: String,
    pub largest_good_component: usize,
}

/// Verification of the three behavior assumptions against ground truth.
#[derive(Debug, Clone, Serialize)]
pub struct AssumptionReport {
    pub a1_ok: bool,
    /// Mean over good nodes (degree > 0) of bad-neighbor fraction.
    pub a1_mean_bad_fraction: f64,
    pub a2_ok: bool,
    pub a2_offenders: Vec<EdgeOffender>,
    pub a3_ok: bool,
    pub a3_offenders: Vec<NodeOffender>,
    /// Good nodes with the highest realized bad-neighbor fraction.
    pub worst_exposure: Vec<(String, f64)>,
}

impl AssumptionReport {
    pub fn all_ok(&self) -> bool {
        self.a1_ok && self.a2_ok && self.a3_ok
    }
}

const MAX_OFFENDERS: usize = 10;

pub fn verify_assumptions(pg: &PlantedGraph) -> AssumptionReport {
    let g = &pg.graph;

    let mut fractions: Vec<(f64, NodeId)> = Vec::new();
    for node in pg.good_nodes() {
        let degree = g.degree(node);
        if degree == 0 {
            continue;
        }
        fractions.push((pg.bad_neighbor_count(node) as f64 / degree as f64, node));
    }
    let a1_mean = if fractions.is_empty() {
        0.0
    } else {
        fractions.iter().map(|(f, _)| f).sum::<f64>() / fractions.len() as f64
    };
    let mut worst = fractions.clone();
    worst.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let worst_exposure = worst
        .into_iter()
        .take(5)
        .filter(|(f, _)| *f > 0.0)
        .map(|(f, n)| (g.label(n).to_string(), f))
        .collect();

    let mut a2_offenders = Vec::new();
    for good in pg.good_nodes() {
        for &nbr in g.neighbors(good) {
            if pg.is_good(nbr) {
                continue;
            }
            let commons = g.tie_strength(good, nbr).expect("distinct endpoints");
            if commons >= pg.params.x {
                a2_offenders.push(EdgeOffender {
                    good: g.label(good).to_string(),
                    bad: g.label(nbr).to_string(),
                    common_neighbors: commons,
                });
            }
        }
    }
    a2_offenders.truncate(MAX_OFFENDERS);

    let mut a3_offenders = Vec::new();
    for bad in pg.bad_nodes() {
        let good_nbrs: BTreeSet<NodeId> = g
            .neighbors(bad)
            .iter()
            .copied()
            .filter(|&u| pg.is_good(u))
            .collect();
        let largest = largest_induced_component(g, &good_nbrs);
        if largest >= pg.params.y as usize {
            a3_offenders.push(NodeOffender {
                bad: g.label(bad).to_string(),
                largest_good_component: largest,
            });
        }
    }
    a3_offenders.truncate(MAX_OFFENDERS);

    AssumptionReport {
        a1_ok: a1_mean <= pg.params.r,
        a1_mean_bad_fraction: a1_mean,
        a2_ok: a2_offenders.is_empty(),
        a2_offenders,
        a3_ok: a3_offenders.is_empty(),
        a3_offenders,
        worst_exposure,
    }
}

fn largest_induced_component(g: &SocialGraph, set: &BTreeSet<NodeId>) -> usize {
    let mut seen: BTreeSet<NodeId> = BTreeSet::new();
    let mut largest = 0;
    for &start in set {
        if seen.contains(&start) {
            continue;
        }
        let mut size = 0;
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            size += 1;
            for &u in g.neighbors(v) {
                if set.contains(&u) && seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        largest = largest.max(size);
    }
    largest
}

/// Per-center measurement shared by purity and resilience reports.
#[derive(Debug, Clone, Serialize)]
pub struct CenterMeasure {
    pub center: String,
    pub backbone_size: usize,
    pub backbone_bad: u32,
    pub domain_size: usize,
    pub domain_bad: u32,
    pub domain_bad_fraction: f64,
    /// `r * sum(|F(m)|) / sum(|F(m)| + 1)` over backbone members.
    pub analytic_bound: f64,
}

/// Bad-member counts of every good center's backbone.
#[derive(Debug, Clone, Serialize)]
pub struct PurityReport {
    /// When false, the policy is not aligned with the behavior parameters
    /// and zero counts are not guaranteed.
    pub aligned: bool,
    pub centers: Vec<CenterMeasure>,
    pub total_bad_members: u64,
    pub centers_with_bad: usize,
}

/// Realized and analytic resilience of every good center's domain.
#[derive(Debug, Clone, Serialize)]
pub struct ResilienceReport {
    pub aligned: bool,
    pub r: f64,
    pub centers: Vec<CenterMeasure>,
    pub mean_fraction: f64,
    pub stderr_fraction: f64,
    pub mean_bound: f64,
    pub max_bound: f64,
}

fn measure_centers(pg: &PlantedGraph, policy: RcpPolicy) -> Vec<CenterMeasure> {
    let g = &pg.graph;
    let stg = build_strong_tie_graph(g, policy);
    let good: Vec<NodeId> = pg.good_nodes().collect();
    good.par_iter()
        .map(|&center| {
            let backbone = compose_backbone_with(&stg, center).expect("center is valid");
            let mut deg_sum = 0u64;
            let mut backbone_bad = 0u32;
            let mut marked = vec![false; g.node_count()];
            let mut domain_size = 0usize;
            let mut domain_bad = 0u32;
            for &m in backbone.members() {
                deg_sum += g.degree(m) as u64;
                if !pg.is_good(m) {
                    backbone_bad += 1;
                }
                for node in std::iter::once(m).chain(g.neighbors(m).iter().copied()) {
                    if !marked[node.index()] {
                        marked[node.index()] = true;
                        domain_size += 1;
                        if !pg.is_good(node) {
                            domain_bad += 1;
                        }
                    }
                }
            }
            let members = backbone.len() as u64;
            let analytic_bound = pg.params.r * deg_sum as f64 / (deg_sum + members) as f64;
            CenterMeasure {
                center: g.label(center).to_string(),
                backbone_size: backbone.len(),
                backbone_bad,
                domain_size,
                domain_bad,
                domain_bad_fraction: domain_bad as f64 / domain_size as f64,
                analytic_bound,
            }
        })
        .collect()
}

/// Count bad members of `compose_backbone` for every good center.
pub fn measure_backbone_purity(pg: &PlantedGraph, policy: RcpPolicy) -> PurityReport {
    let centers = measure_centers(pg, policy);
    let total_bad_members = centers.iter().map(|c| c.backbone_bad as u64).sum();
    let centers_with_bad = centers.iter().filter(|c| c.backbone_bad > 0).count();
    PurityReport {
        aligned: validate_policy_alignment(policy, &pg.params),
        centers,
        total_bad_members,
        centers_with_bad,
    }
}

/// Realized domain bad fractions plus the analytic bound for every good
/// center.
pub fn measure_domain_resilience(pg: &PlantedGraph, policy: RcpPolicy) -> ResilienceReport {
    let centers = measure_centers(pg, policy);
    let fractions: Vec<f64> = centers.iter().map(|c| c.domain_bad_fraction).collect();
    let (mean, stderr) = mean_stderr(&fractions);
    let mean_bound = if centers.is_empty() {
        0.0
    } else {
        centers.iter().map(|c| c.analytic_bound).sum::<f64>() / centers.len() as f64
    };
    let max_bound = centers
        .iter()
        .map(|c| c.analytic_bound)
        .fold(0.0f64, f64::max);
    ResilienceReport {
        aligned: validate_policy_alignment(policy, &pg.params),
        r: pg.params.r,
        centers,
        mean_fraction: mean,
        stderr_fraction: stderr,
        mean_bound,
        max_bound,
    }
}

/// Sample mean and standard error.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Plain breadth-first friend-of-friend expansion, the naive baseline a
/// percolation policy is contrasted against.
pub fn friend_of_friend_domain(g: &SocialGraph, center: NodeId, hops: usize) -> Vec<NodeId> {
    let mut dist = vec![usize::MAX; g.node_count()];
    dist[center.index()] = 0;
    let mut queue = std::collections::VecDeque::from([center]);
    let mut members = vec![center];
    while let Some(v) = queue.pop_front() {
        if dist[v.index()] >= hops {
            continue;
        }
        for &u in g.neighbors(v) {
            if dist[u.index()] == usize::MAX {
                dist[u.index()] = dist[v.index()] + 1;
                members.push(u);
                queue.push_back(u);
            }
        }
    }
    members.sort_unstable();
    members
}

/// Mean bad fraction of `hops`-bounded friend-of-friend domains over good
/// centers.
pub fn measure_fof_bad_fraction(pg: &PlantedGraph, hops: usize) -> f64 {
    let good: Vec<NodeId> = pg.good_nodes().collect();
    if good.is_empty() {
        return 0.0;
    }
    let sum: f64 = good
        .par_iter()
        .map(|&center| {
            let domain = friend_of_friend_domain(&pg.graph, center, hops);
            let bad = domain.iter().filter(|&&n| !pg.is_good(n)).count();
            bad as f64 / domain.len() as f64
        })
        .sum();
    sum / good.len() as f64
}

/// How the attacker spends the cross-link budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackStrategy {
    /// Uniform random good targets.
    Random,
    /// Concentrate attempts on the highest-degree good citizens.
    HighDegree,
}

/// Attacker capabilities for one mass-infiltration scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttackSpec {
    pub bots: usize,
    /// Edge probability among the added bots.
    pub bot_edge_density: f64,
    /// Cross-link attempts; each is rejected if it would breach an
    /// assumption or push the target's bad-neighbor fraction over `r`.
    pub cross_budget: usize,
    pub strategy: AttackStrategy,
}

/// Tally of what the attacker managed to do.
#[derive(Debug, Clone, Default, Serialize)]
pub struct AttackLog {
    pub bots_added: usize,
    pub bot_edges_added: usize,
    pub cross_attempted: usize,
    pub cross_accepted: usize,
    pub rejected_responsibility: usize,
    pub rejected_small_group: usize,
    pub rejected_large_group: usize,
}

/// Before/after measurement around an attack.
#[derive(Debug, Clone)]
pub struct AttackOutcome {
    pub attacked: PlantedGraph,
    pub before: ResilienceReport,
    pub after: ResilienceReport,
    pub log: AttackLog,
}

/// Apply a mass-infiltration attack and re-measure.
///
/// Bot additions and bot-bot edges are unconstrained. Cross-link attempts
/// model socially responsible targets: an attempt is rejected whenever it
/// would leave a good-bad edge with `x` or more common friends, hand the
/// bot a connected good audience of size `y`, or push the target's
/// bad-neighbor fraction over `r`.
pub fn mass_infiltration_attack(
    pg: &PlantedGraph,
    spec: &AttackSpec,
    policy: RcpPolicy,
) -> Result<AttackOutcome> {
    let before = measure_domain_resilience(pg, policy);
    let mut rng = ChaCha8Rng::seed_from_u64(pg.seed ^ 0xa77ac4);
    let g = &pg.graph;
    let n_old = g.node_count();
    let n = n_old + spec.bots;
    let params = pg.params;

    let mut adj: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
    for node in g.nodes() {
        for &u in g.neighbors(node) {
            adj[node.index()].insert(u.0);
        }
    }
    let mut labels = pg.labels.clone();
    labels.resize(n, Citizen::Bad);
    let is_good = |labels: &[Citizen], v: u32| labels[v as usize] == Citizen::Good;

    let mut log = AttackLog {
        bots_added: spec.bots,
        ..Default::default()
    };

    // fully attacker-controlled: bots and their internal wiring
    for u in n_old as u32..n as u32 {
        for v in (u + 1)..n as u32 {
            if rng.gen_bool(spec.bot_edge_density) {
                adj[u as usize].insert(v);
                adj[v as usize].insert(u);
                log.bot_edges_added += 1;
            }
        }
    }

    let good: Vec<u32> = (0..n_old as u32)
        .filter(|&v| is_good(&labels, v))
        .collect();
    let bad: Vec<u32> = (0..n as u32).filter(|&v| !is_good(&labels, v)).collect();
    let mut high_degree = good.clone();
    high_degree.sort_by_key(|&v| std::cmp::Reverse(adj[v as usize].len()));
    high_degree.truncate((good.len() / 10).max(1));

    for _ in 0..spec.cross_budget {
        if good.is_empty() || bad.is_empty() {
            break;
        }
        log.cross_attempted += 1;
        let target = match spec.strategy {
            AttackStrategy::Random => good[rng.gen_range(0..good.len())],
            AttackStrategy::HighDegree => high_degree[rng.gen_range(0..high_degree.len())],
        };
        let bot = bad[rng.gen_range(0..bad.len())];
        if adj[target as usize].contains(&bot) {
            continue;
        }

        // responsibility: target's bad fraction must stay within r
        let degree = adj[target as usize].len();
        let bad_nbrs = adj[target as usize]
            .iter()
            .filter(|&&v| !is_good(&labels, v))
            .count();
        if (bad_nbrs + 1) as f64 / (degree + 1) as f64 > params.r {
            log.rejected_responsibility += 1;
            continue;
        }

        // small groups: the new edge itself, plus every existing good-bad
        // edge that would gain the new endpoint as a common friend
        let mut small_group_breach = common_count(&adj, target, bot) >= params.x as usize;
        if !small_group_breach {
            for &u in &adj[target as usize] {
                if is_good(&labels, u)
                    && adj[u as usize].contains(&bot)
                    && common_count(&adj, u, bot) + 1 >= params.x as usize
                {
                    small_group_breach = true;
                    break;
                }
            }
        }
        if !small_group_breach {
            for &other_bot in &adj[bot as usize] {
                if !is_good(&labels, other_bot)
                    && adj[target as usize].contains(&other_bot)
                    && common_count(&adj, target, other_bot) + 1 >= params.x as usize
                {
                    small_group_breach = true;
                    break;
                }
            }
        }
        if small_group_breach {
            log.rejected_small_group += 1;
            continue;
        }

        // large groups: the bot's good audience must stay fragmented
        let mut audience: Vec<u32> = adj[bot as usize]
            .iter()
            .copied()
            .filter(|&v| is_good(&labels, v))
            .collect();
        audience.push(target);
        if oversized_component_member(&adj, &audience, params.y as usize).is_some() {
            log.rejected_large_group += 1;
            continue;
        }

        adj[target as usize].insert(bot);
        adj[bot as usize].insert(target);
        log.cross_accepted += 1;
    }

    // rebuild with original index order preserved, bots appended
    let mut builder = GraphBuilder::default();
    for node in g.nodes() {
        builder.node(g.label(node));
    }
    for b in 0..spec.bots {
        builder.node(&format!("ab{b}"));
    }
    for (u, nbrs) in adj.iter().enumerate() {
        for &v in nbrs {
            if (u as u32) < v {
                builder.edge(NodeId(u as u32), NodeId(v));
            }
        }
    }
    let attacked = PlantedGraph {
        graph: builder.build(),
        labels,
        params,
        seed: pg.seed,
        report: pg.report.clone(),
    };
    let after = measure_domain_resilience(&attacked, policy);
    Ok(AttackOutcome {
        attacked,
        before,
        after,
        log,
    })
}

/// Negative control: wire one bad node into a good citizen's circle with
/// enough common friends to breach the small-group assumption.
pub fn inject_strong_cross_tie(pg: &PlantedGraph) -> Result<PlantedGraph> {
    let g = &pg.graph;
    let x = pg.params.x as usize;
    let target = pg
        .good_nodes()
        .find(|&node| {
            g.neighbors(node)
                .iter()
                .filter(|&&u| pg.is_good(u))
                .count()
                >= x
        })
        .ok_or_else(|| {
            RcpError::InvalidArgument(format!(
                "no good node has {x} good neighbors to recruit"
            ))
        })?;
    let bot = pg
        .bad_nodes()
        .next()
        .ok_or_else(|| RcpError::InvalidArgument("graph has no bad node".into()))?;

    let mut builder = GraphBuilder::default();
    for node in g.nodes() {
        builder.node(g.label(node));
    }
    for (a, b) in g.edges() {
        builder.edge(a, b);
    }
    builder.edge(target, bot);
    let recruits: Vec<NodeId> = g
        .neighbors(target)
        .iter()
        .copied()
        .filter(|&u| pg.is_good(u))
        .take(x)
        .collect();
    for u in recruits {
        builder.edge(u, bot);
    }
    Ok(PlantedGraph {
        graph: builder.build(),
        labels: pg.labels.clone(),
        params: pg.params,
        seed: pg.seed,
        report: pg.report.clone(),
    })
}
