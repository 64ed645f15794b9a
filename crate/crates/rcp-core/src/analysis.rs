//! Building blocks behind the `rcp` command line: policy sweeps, group
//! membership tables, and the simulation experiment runner.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{RcpError, Result};
use crate::graph::SocialGraph;
use crate::policy::{BehaviorParams, RcpPolicy};
use crate::sim::{
    generate_planted_graph, inject_strong_cross_tie, mass_infiltration_attack,
    measure_domain_resilience, measure_fof_bad_fraction, verify_assumptions, AssumptionReport,
    AttackLog, AttackSpec, GeneratorConfig, ResilienceReport,
};
use crate::supercore::SupercoreAnalysis;

/// Fixed-precision rendering used by every numeric CLI column.
pub fn fmt6(value: f64) -> String {
    format!("{value:.6}")
}

/// Round to the same fixed precision for JSON output.
pub fn round6(value: f64) -> f64 {
    (value * 1e6).round() / 1e6
}

/// Half-open degree bucket `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeBucket {
    pub lo: usize,
    pub hi: usize,
}

/// Powers-of-two buckets covering degrees up to `max_degree`:
/// `[0,1), [1,2), [2,4), [4,8), ...`.
pub fn power_of_two_buckets(max_degree: usize) -> Vec<DegreeBucket> {
    let mut buckets = vec![DegreeBucket { lo: 0, hi: 1 }];
    let mut lo = 1usize;
    while lo <= max_degree {
        buckets.push(DegreeBucket { lo, hi: lo * 2 });
        lo *= 2;
    }
    buckets
}

fn bucket_index(buckets: &[DegreeBucket], degree: usize) -> usize {
    buckets
        .iter()
        .position(|b| degree >= b.lo && degree < b.hi)
        .expect("buckets cover the degree range")
}

/// One `(beta, degree-bucket)` cell of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub beta: u32,
    pub alpha: u32,
    pub bucket_lo: usize,
    pub bucket_hi: usize,
    pub nodes: usize,
    /// Fraction of the bucket's nodes whose complete domain reaches the
    /// size threshold.
    pub fraction: f64,
}

/// Fraction of nodes with large domains, per policy strength and degree
/// bucket. `alpha` defaults to `beta + 1` unless overridden.
pub fn sweep(
    graph: &SocialGraph,
    betas: &[u32],
    alpha_override: Option<u32>,
    threshold: usize,
) -> Result<Vec<SweepRow>> {
    if betas.is_empty() {
        return Err(RcpError::InvalidArgument("beta range is empty".into()));
    }
    let max_degree = graph.nodes().map(|n| graph.degree(n)).max().unwrap_or(0);
    let buckets = power_of_two_buckets(max_degree);
    let mut rows = Vec::new();
    for &beta in betas {
        let alpha = alpha_override.unwrap_or(beta + 1);
        let policy = RcpPolicy::new(alpha, beta)?;
        let analysis = SupercoreAnalysis::run(graph, policy)?;
        let mut counts = vec![(0usize, 0usize); buckets.len()];
        for node in graph.nodes() {
            let idx = bucket_index(&buckets, graph.degree(node));
            counts[idx].0 += 1;
            if analysis.domain_of(node).len() >= threshold {
                counts[idx].1 += 1;
            }
        }
        for (idx, bucket) in buckets.iter().enumerate() {
            let (total, large) = counts[idx];
            rows.push(SweepRow {
                beta,
                alpha,
                bucket_lo: bucket.lo,
                bucket_hi: bucket.hi,
                nodes: total,
                fraction: if total == 0 {
                    0.0
                } else {
                    large as f64 / total as f64
                },
            });
        }
    }
    Ok(rows)
}

/// One `(group, beta)` cell: the share of the group inside the globally
/// largest supercore.
#[derive(Debug, Clone, Serialize)]
pub struct PulsRow {
    pub group: String,
    pub beta: u32,
    pub alpha: u32,
    pub group_size: usize,
    pub puls: f64,
}

/// Percentage of each attribute group inside the largest supercore, per
/// `beta` (alpha defaults to `beta + 1`). Attribute labels missing from the
/// graph are returned as skipped.
pub fn puls(
    graph: &SocialGraph,
    attributes: &[(String, String)],
    betas: &[u32],
    alpha_override: Option<u32>,
) -> Result<(Vec<PulsRow>, Vec<String>)> {
    if betas.is_empty() {
        return Err(RcpError::InvalidArgument("beta range is empty".into()));
    }
    let mut skipped = Vec::new();
    let mut groups: std::collections::BTreeMap<String, Vec<crate::graph::NodeId>> =
        std::collections::BTreeMap::new();
    for (label, group) in attributes {
        match graph.node_by_label(label) {
            Some(node) => groups.entry(group.clone()).or_default().push(node),
            None => skipped.push(label.clone()),
        }
    }
    if groups.is_empty() {
        return Err(RcpError::InvalidArgument(
            "attribute file maps no node present in the graph".into(),
        ));
    }
    for members in groups.values_mut() {
        members.sort_unstable();
        members.dedup();
    }

    let mut rows = Vec::new();
    for &beta in betas {
        let alpha = alpha_override.unwrap_or(beta + 1);
        let policy = RcpPolicy::new(alpha, beta)?;
        let analysis = SupercoreAnalysis::run(graph, policy)?;
        // largest supercore by global member count; smallest index on ties
        let largest = analysis
            .dag
            .supercores
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.len().cmp(&b.len()).then(ib.cmp(ia)))
            .map(|(idx, _)| idx as u32)
            .expect("non-empty graph has at least one supercore");
        for (group, members) in &groups {
            let inside = members
                .iter()
                .filter(|&&n| analysis.supercore_of(n) == largest)
                .count();
            rows.push(PulsRow {
                group: group.clone(),
                beta,
                alpha,
                group_size: members.len(),
                puls: inside as f64 / members.len() as f64,
            });
        }
    }
    Ok((rows, skipped))
}

/// Experiment description consumed by `rcp simulate`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_good: usize,
    pub n_bad: usize,
    pub behavior: BehaviorSpec,
    #[serde(default)]
    pub generator: GeneratorConfig,
    pub seeds: Vec<u64>,
    pub policies: Vec<PolicySpec>,
    #[serde(default)]
    pub attack: Option<AttackSpec>,
    /// Hop count for the naive friend-of-friend baseline, when wanted.
    #[serde(default)]
    pub fof_hops: Option<usize>,
    /// When set, deliberately break the small-group assumption after
    /// generation; the run is then expected to fail verification.
    #[serde(default)]
    pub negative_control: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BehaviorSpec {
    pub r: f64,
    pub x: u32,
    pub y: u32,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PolicySpec {
    pub alpha: u32,
    pub beta: u32,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| RcpError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        BehaviorParams::new(self.behavior.r, self.behavior.x, self.behavior.y)
            .map_err(|e| RcpError::Config(e.to_string()))?;
        if self.seeds.is_empty() {
            return Err(RcpError::Config("at least one seed is required".into()));
        }
        if self.policies.is_empty() {
            return Err(RcpError::Config("at least one policy is required".into()));
        }
        for p in &self.policies {
            RcpPolicy::new(p.alpha, p.beta).map_err(|e| RcpError::Config(e.to_string()))?;
        }
        Ok(())
    }
}

/// Attack measurement attached to a run.
#[derive(Debug, Clone, Serialize)]
pub struct AttackSummary {
    pub log: AttackLog,
    pub post_mean_fraction: f64,
    pub post_total_backbone_bad: u64,
    pub post_assumptions_ok: bool,
}

/// One `(seed, policy)` simulation result.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationRun {
    pub seed: u64,
    pub alpha: u32,
    pub beta: u32,
    pub aligned: bool,
    pub assumptions_ok: bool,
    pub total_backbone_bad: u64,
    pub mean_fraction: f64,
    pub stderr_fraction: f64,
    pub mean_bound: f64,
    pub max_bound: f64,
    pub fof_mean_fraction: Option<f64>,
    pub attack: Option<AttackSummary>,
    #[serde(skip)]
    pub assumptions: AssumptionReport,
    #[serde(skip)]
    pub resilience: ResilienceReport,
}

impl SimulationRun {
    /// Lemma-1 invariant: aligned policy on a verified graph admits no bad
    /// citizen into any good center's backbone (before or after attack).
    pub fn purity_breached(&self) -> bool {
        (self.aligned && self.assumptions_ok && self.total_backbone_bad > 0)
            || self.attack.as_ref().is_some_and(|a| {
                self.aligned && a.post_assumptions_ok && a.post_total_backbone_bad > 0
            })
    }
}

/// All runs of one experiment.
#[derive(Debug)]
pub struct ExperimentOutcome {
    pub runs: Vec<SimulationRun>,
}

impl ExperimentOutcome {
    pub fn any_purity_breach(&self) -> bool {
        self.runs.iter().any(SimulationRun::purity_breached)
    }

    pub fn any_assumption_failure(&self) -> bool {
        self.runs.iter().any(|r| !r.assumptions_ok)
    }
}

/// Run every `(seed, policy)` combination of the experiment.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    let params = BehaviorParams::new(config.behavior.r, config.behavior.x, config.behavior.y)?;
    let mut runs = Vec::new();
    for &seed in &config.seeds {
        let mut pg =
            generate_planted_graph(params, config.n_good, config.n_bad, &config.generator, seed)?;
        if config.negative_control {
            pg = inject_strong_cross_tie(&pg)?;
        }
        let assumptions = verify_assumptions(&pg);
        for policy_spec in &config.policies {
            let policy = RcpPolicy::new(policy_spec.alpha, policy_spec.beta)?;
            let resilience = measure_domain_resilience(&pg, policy);
            let total_backbone_bad: u64 =
                resilience.centers.iter().map(|c| c.backbone_bad as u64).sum();
            let fof_mean_fraction = config
                .fof_hops
                .map(|hops| measure_fof_bad_fraction(&pg, hops));
            let attack = match &config.attack {
                Some(spec) => {
                    let outcome = mass_infiltration_attack(&pg, spec, policy)?;
                    let post_assumptions_ok =
                        verify_assumptions(&outcome.attacked).all_ok();
                    let post_total_backbone_bad = outcome
                        .after
                        .centers
                        .iter()
                        .map(|c| c.backbone_bad as u64)
                        .sum();
                    Some(AttackSummary {
                        log: outcome.log,
                        post_mean_fraction: outcome.after.mean_fraction,
                        post_total_backbone_bad,
                        post_assumptions_ok,
                    })
                }
                None => None,
            };
            runs.push(SimulationRun {
                seed,
                alpha: policy.alpha(),
                beta: policy.beta(),
                aligned: resilience.aligned,
                assumptions_ok: assumptions.all_ok(),
                total_backbone_bad,
                mean_fraction: resilience.mean_fraction,
                stderr_fraction: resilience.stderr_fraction,
                mean_bound: resilience.mean_bound,
                max_bound: resilience.max_bound,
                fof_mean_fraction,
                attack,
                assumptions: assumptions.clone(),
                resilience,
            });
        }
    }
    Ok(ExperimentOutcome { runs })
}

/// Full JSON report for one run, including per-center rows.
pub fn run_to_json(run: &SimulationRun) -> serde_json::Value {
    let mut value = serde_json::to_value(run).expect("run serializes");
    value["assumptions"] =
        serde_json::to_value(&run.assumptions).expect("assumption report serializes");
    value["centers"] = json!(run
        .resilience
        .centers
        .iter()
        .map(|c| {
            json!({
                "center": c.center,
                "backbone_size": c.backbone_size,
                "backbone_bad": c.backbone_bad,
                "domain_size": c.domain_size,
                "domain_bad": c.domain_bad,
                "domain_bad_fraction": round6(c.domain_bad_fraction),
                "analytic_bound": round6(c.analytic_bound),
            })
        })
        .collect::<Vec<_>>());
    value
}

/// CSV header matching [`run_to_csv_row`].
pub const RUN_CSV_HEADER: &str = "seed,alpha,beta,aligned,assumptions_ok,centers,total_backbone_bad,mean_fraction,stderr_fraction,mean_bound,max_bound,fof_mean_fraction,cross_accepted,post_attack_backbone_bad";

/// One CSV summary row per run.
pub fn run_to_csv_row(run: &SimulationRun) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        run.seed,
        run.alpha,
        run.beta,
        run.aligned,
        run.assumptions_ok,
        run.resilience.centers.len(),
        run.total_backbone_bad,
        fmt6(run.mean_fraction),
        fmt6(run.stderr_fraction),
        fmt6(run.mean_bound),
        fmt6(run.max_bound),
        run.fof_mean_fraction.map(fmt6).unwrap_or_default(),
        run.attack
            .as_ref()
            .map(|a| a.log.cross_accepted.to_string())
            .unwrap_or_default(),
        run.attack
            .as_ref()
            .map(|a| a.post_total_backbone_bad.to_string())
            .unwrap_or_default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn buckets_cover_the_degree_range() {
        let buckets = power_of_two_buckets(20);
        assert_eq!(buckets.first().unwrap(), &DegreeBucket { lo: 0, hi: 1 });
        for d in 0..=20 {
            let idx = bucket_index(&buckets, d);
            assert!(buckets[idx].lo <= d && d < buckets[idx].hi);
        }
    }

    #[test]
    fn sweep_on_big_clique_is_all_ones() {
        let g = generate::clique(40);
        let rows = sweep(&g, &[3, 4, 5], None, 20).unwrap();
        for row in rows.iter().filter(|r| r.nodes > 0) {
            assert_eq!(row.fraction, 1.0);
        }
    }

    #[test]
    fn sweep_on_edgeless_graph_is_all_zeros() {
        let mut b = crate::graph::GraphBuilder::default();
        for i in 0..10 {
            b.node(&format!("n{i}"));
        }
        let g = b.build();
        let rows = sweep(&g, &[3], None, 2).unwrap();
        for row in rows.iter().filter(|r| r.nodes > 0) {
            assert_eq!(row.fraction, 0.0);
        }
    }

    #[test]
    fn sweep_fractions_fall_as_beta_rises() {
        let cfg = generate::CliqueChainConfig {
            nodes: 400,
            peripheral_fraction: 0.2,
            ..Default::default()
        };
        let g = generate::clique_chain(&cfg, 17);
        let rows = sweep(&g, &[3, 4, 5, 6, 7], None, 100).unwrap();
        let mut by_bucket: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
        for row in &rows {
            by_bucket.entry(row.bucket_lo).or_default().push(row.fraction);
        }
        for (bucket, fractions) in by_bucket {
            for pair in fractions.windows(2) {
                assert!(
                    pair[1] <= pair[0] + 1e-12,
                    "bucket {bucket}: fractions must be non-increasing in beta"
                );
            }
        }
    }

    #[test]
    fn puls_full_group_on_clique() {
        let g = generate::clique(10);
        let attributes: Vec<(String, String)> = g
            .labels()
            .iter()
            .map(|l| (l.clone(), "all".to_string()))
            .collect();
        let (rows, skipped) = puls(&g, &attributes, &[3], None).unwrap();
        assert!(skipped.is_empty());
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].puls, 1.0);
    }

    #[test]
    fn puls_disjoint_group_scores_zero_and_unknown_labels_skip() {
        let g = generate::two_community(120, 0, 3); // no bridges
        let mut attributes: Vec<(String, String)> = g
            .labels()
            .iter()
            .map(|l| {
                let group = if l.starts_with('a') { "A" } else { "B" };
                (l.clone(), group.to_string())
            })
            .collect();
        attributes.push(("ghost".to_string(), "A".to_string()));
        let (rows, skipped) = puls(&g, &attributes, &[3], None).unwrap();
        assert_eq!(skipped, vec!["ghost".to_string()]);
        let a = rows.iter().find(|r| r.group == "A").unwrap();
        let b = rows.iter().find(|r| r.group == "B").unwrap();
        // the largest supercore lives wholly inside one community
        assert!((a.puls == 0.0) != (b.puls == 0.0));
    }

    #[test]
    fn puls_balanced_bridged_communities_are_even() {
        let g = generate::two_community(150, 12, 5);
        let attributes: Vec<(String, String)> = g
            .labels()
            .iter()
            .map(|l| {
                let group = if l.starts_with('a') { "A" } else { "B" };
                (l.clone(), group.to_string())
            })
            .collect();
        let (rows, _) = puls(&g, &attributes, &[3], None).unwrap();
        let a = rows.iter().find(|r| r.group == "A").unwrap().puls;
        let b = rows.iter().find(|r| r.group == "B").unwrap().puls;
        assert!(a > 0.5 && b > 0.5, "bridged cores should span both sides");
        assert!((a - b).abs() <= 0.15, "PULS spread too wide: {a} vs {b}");
    }

    #[test]
    fn experiment_config_validation() {
        let good = r#"{
            "n_good": 50, "n_bad": 10,
            "behavior": {"r": 0.05, "x": 3, "y": 4},
            "seeds": [1], "policies": [{"alpha": 4, "beta": 3}]
        }"#;
        assert!(ExperimentConfig::from_json(good).is_ok());

        let bad_behavior = good.replace("\"y\": 4", "\"y\": 3");
        assert!(ExperimentConfig::from_json(&bad_behavior).is_err());

        let no_seed = good.replace("[1]", "[]");
        assert!(ExperimentConfig::from_json(&no_seed).is_err());
    }

    #[test]
    fn small_experiment_runs_clean() {
        let config = ExperimentConfig::from_json(
            r#"{
                "n_good": 120, "n_bad": 25,
                "behavior": {"r": 0.05, "x": 3, "y": 4},
                "seeds": [1, 2], "policies": [{"alpha": 4, "beta": 3}],
                "fof_hops": 2
            }"#,
        )
        .unwrap();
        let outcome = run_experiment(&config).unwrap();
        assert_eq!(outcome.runs.len(), 2);
        assert!(!outcome.any_purity_breach());
        assert!(!outcome.any_assumption_failure());
        for run in &outcome.runs {
            assert!(run.aligned);
            assert_eq!(run.total_backbone_bad, 0);
            assert!(run.max_bound < 0.05);
            let csv = run_to_csv_row(run);
            assert_eq!(csv.split(',').count(), RUN_CSV_HEADER.split(',').count());
        }
    }

    #[test]
    fn negative_control_experiment_fails_verification() {
        let config = ExperimentConfig::from_json(
            r#"{
                "n_good": 120, "n_bad": 25,
                "behavior": {"r": 0.05, "x": 3, "y": 4},
                "seeds": [3], "policies": [{"alpha": 4, "beta": 3}],
                "negative_control": true
            }"#,
        )
        .unwrap();
        let outcome = run_experiment(&config).unwrap();
        assert!(outcome.any_assumption_failure());
        let run = &outcome.runs[0];
        assert!(!run.assumptions.a2_ok);
        assert!(!run.assumptions.a2_offenders.is_empty());
    }
}
