//! Command-line surface for the percolation pipeline: ingest edge lists,
//! compute per-node domains, sweep policy strengths, tabulate group
//! membership in the largest supercore, and drive resilience simulations.
//!
//! Exit codes: 0 success, 1 usage, 2 input/parse failure, 3 invariant
//! failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use rcp_core::analysis::{
    fmt6, puls, round6, run_experiment, run_to_csv_row, run_to_json, sweep, ExperimentConfig,
    RUN_CSV_HEADER,
};
use rcp_core::error::{RcpError, Result};
use rcp_core::graph::{load_attributes, load_edge_list, LoadMode, LoadOptions, SocialGraph};
use rcp_core::policy::RcpPolicy;
use rcp_core::supercore::SupercoreAnalysis;

#[derive(Parser)]
#[command(
    name = "rcp",
    version,
    about = "Disinformation-resilient domain composition over social graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Node/link counts, average degree, and clustering coefficient
    Stats(StatsArgs),
    /// Per-node supercore, backbone size, and domain size
    Domains(DomainsArgs),
    /// Fraction of nodes with large domains, per beta and degree bucket
    Sweep(SweepArgs),
    /// Percentage of each attribute group inside the largest supercore
    Puls(PulsArgs),
    /// Planted-graph resilience experiments from a JSON config
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Undirected,
    Mutual,
}

#[derive(Args)]
struct InputArgs {
    /// Edge-list file: two whitespace- or comma-separated labels per line,
    /// '#' comments
    #[arg(long)]
    input: PathBuf,
    /// Edge interpretation for directed sources
    #[arg(long, value_enum, default_value = "undirected")]
    mode: Mode,
    /// Keep nodes left without edges; with --attributes this also registers
    /// attribute-only nodes as isolated
    #[arg(long)]
    retain_isolated: bool,
    /// Node attribute TSV (node_label<TAB>group_label)
    #[arg(long)]
    attributes: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write results into this directory instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DomainsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 4)]
    alpha: u32,
    #[arg(long, default_value_t = 3)]
    beta: u32,
    /// Restrict output to these node labels (comma separated)
    #[arg(long, value_delimiter = ',')]
    centers: Vec<String>,
    /// Include member labels (suppressed above 10000 nodes)
    #[arg(long)]
    emit_members: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Inclusive beta range A:B
    #[arg(long, value_parser = parse_range)]
    beta_range: (u32, u32),
    /// Override alpha (defaults to beta + 1)
    #[arg(long)]
    alpha: Option<u32>,
    /// Domain size counted as "large"
    #[arg(long, default_value_t = 1000)]
    threshold: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PulsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Inclusive beta range A:B
    #[arg(long, value_parser = parse_range)]
    beta_range: (u32, u32),
    /// Override alpha (defaults to beta + 1)
    #[arg(long)]
    alpha: Option<u32>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SimulateArgs {
    /// Experiment config (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Override the config's seed list with a single seed
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_range(text: &str) -> std::result::Result<(u32, u32), String> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| "expected A:B".to_string())?;
    let a: u32 = a.trim().parse().map_err(|_| "expected A:B".to_string())?;
    let b: u32 = b.trim().parse().map_err(|_| "expected A:B".to_string())?;
    if a > b {
        return Err("range start exceeds end".to_string());
    }
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version are successful exits, everything else is usage
            let benign = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if benign { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                RcpError::InvariantViolation(_) => 3,
                _ => 2,
            })
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Stats(args) => cmd_stats(args),
        Command::Domains(args) => cmd_domains(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Puls(args) => cmd_puls(args),
        Command::Simulate(args) => cmd_simulate(args),
    }
}

fn load_graph(args: &InputArgs) -> Result<(SocialGraph, rcp_core::graph::LoadReport)> {
    let mut options = LoadOptions {
        mode: match args.mode {
            Mode::Undirected => LoadMode::Undirected,
            Mode::Mutual => LoadMode::MutualOnly,
        },
        retain_isolated: args.retain_isolated,
        sidecar_nodes: Vec::new(),
    };
    if args.retain_isolated {
        if let Some(path) = &args.attributes {
            let attrs = load_attributes(fs::File::open(path)?)?;
            options.sidecar_nodes = attrs.into_iter().map(|(label, _)| label).collect();
        }
    }
    let file = fs::File::open(&args.input)?;
    let (graph, report) = load_edge_list(file, &options)?;
    if report.self_loops_dropped > 0 {
        eprintln!("warning: dropped {} self-loop(s)", report.self_loops_dropped);
    }
    Ok((graph, report))
}

fn emit(output: &OutputArgs, file_stem: &str, content: &str) -> Result<()> {
    let extension = match output.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    match &output.output {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(format!("{file_stem}.{extension}"));
            fs::write(&path, content)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_stats(args: StatsArgs) -> Result<ExitCode> {
    let (graph, report) = load_graph(&args.input)?;
    let stats = graph.stats()?;
    let content = match args.output.format {
        Format::Csv => format!(
            "nodes,links,avg_degree,clustering_coefficient\n{},{},{},{}\n",
            stats.node_count,
            stats.link_count,
            fmt6(stats.avg_degree),
            fmt6(stats.clustering_coefficient)
        ),
        Format::Json => {
            let value = json!({
                "nodes": stats.node_count,
                "links": stats.link_count,
                "avg_degree": round6(stats.avg_degree),
                "clustering_coefficient": round6(stats.clustering_coefficient),
                "load_report": report,
            });
            format!("{}\n", serde_json::to_string_pretty(&value).expect("stats serialize"))
        }
    };
    emit(&args.output, "stats", &content)?;
    Ok(ExitCode::SUCCESS)
}

const MEMBER_SUPPRESSION_LIMIT: usize = 10_000;

fn cmd_domains(args: DomainsArgs) -> Result<ExitCode> {
    let (graph, _) = load_graph(&args.input)?;
    let policy = RcpPolicy::new(args.alpha, args.beta)?;
    let analysis = SupercoreAnalysis::run(&graph, policy)?;

    let mut nodes: Vec<rcp_core::graph::NodeId> = if args.centers.is_empty() {
        graph.nodes().collect()
    } else {
        args.centers
            .iter()
            .map(|label| graph.require_label(label))
            .collect::<Result<Vec<_>>>()?
    };
    nodes.sort_by(|a, b| graph.label(*a).cmp(graph.label(*b)));

    let emit_members = if args.emit_members && graph.node_count() > MEMBER_SUPPRESSION_LIMIT {
        eprintln!(
            "warning: member lists suppressed above {MEMBER_SUPPRESSION_LIMIT} nodes; emitting sizes only"
        );
        false
    } else {
        args.emit_members
    };

    let content = match args.output.format {
        Format::Csv => {
            let mut out = String::from("label,supercore,backbone_size,domain_size\n");
            for &node in &nodes {
                let sc = analysis.supercore_of(node);
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    graph.label(node),
                    sc,
                    analysis.backbones[sc as usize].len(),
                    analysis.domains[sc as usize].len()
                ));
            }
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = nodes
                .iter()
                .map(|&node| {
                    let sc = analysis.supercore_of(node);
                    let mut row = json!({
                        "label": graph.label(node),
                        "supercore": sc,
                        "backbone_size": analysis.backbones[sc as usize].len(),
                        "domain_size": analysis.domains[sc as usize].len(),
                    });
                    if emit_members {
                        row["backbone_members"] = json!(analysis.backbones[sc as usize]
                            .iter()
                            .map(|&m| graph.label(m))
                            .collect::<Vec<_>>());
                        row["domain_members"] = json!(analysis.domains[sc as usize]
                            .iter()
                            .map(|&m| graph.label(m))
                            .collect::<Vec<_>>());
                    }
                    row
                })
                .collect();
            let value = json!({
                "pipeline": analysis.to_json(&graph, emit_members),
                "nodes": rows,
            });
            format!("{}\n", serde_json::to_string_pretty(&value).expect("domains serialize"))
        }
    };
    emit(&args.output, "domains", &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode> {
    let (graph, _) = load_graph(&args.input)?;
    let betas: Vec<u32> = (args.beta_range.0..=args.beta_range.1).collect();
    let rows = sweep(&graph, &betas, args.alpha, args.threshold)?;
    let content = match args.output.format {
        Format::Csv => {
            let mut out = String::from("beta,alpha,bucket_lo,bucket_hi,nodes,fraction\n");
            for row in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    row.beta,
                    row.alpha,
                    row.bucket_lo,
                    row.bucket_hi,
                    row.nodes,
                    fmt6(row.fraction)
                ));
            }
            out
        }
        Format::Json => {
            let value: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "beta": row.beta,
                        "alpha": row.alpha,
                        "bucket_lo": row.bucket_lo,
                        "bucket_hi": row.bucket_hi,
                        "nodes": row.nodes,
                        "fraction": round6(row.fraction),
                    })
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&value).expect("sweep serialize"))
        }
    };
    emit(&args.output, "sweep", &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_puls(args: PulsArgs) -> Result<ExitCode> {
    let attributes_path = args.input.attributes.clone().ok_or_else(|| {
        RcpError::InvalidArgument("--attributes is required for puls".into())
    })?;
    let (graph, _) = load_graph(&args.input)?;
    let attributes = load_attributes(fs::File::open(&attributes_path)?)?;
    let betas: Vec<u32> = (args.beta_range.0..=args.beta_range.1).collect();
    let (rows, skipped) = puls(&graph, &attributes, &betas, args.alpha)?;
    for label in &skipped {
        eprintln!("warning: attribute label {label:?} not present in graph; skipped");
    }
    let content = match args.output.format {
        Format::Csv => {
            let mut out = String::from("group,beta,alpha,group_size,puls\n");
            for row in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.group,
                    row.beta,
                    row.alpha,
                    row.group_size,
                    fmt6(row.puls)
                ));
            }
            out
        }
        Format::Json => {
            let value: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "group": row.group,
                        "beta": row.beta,
                        "alpha": row.alpha,
                        "group_size": row.group_size,
                        "puls": round6(row.puls),
                    })
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&value).expect("puls serialize"))
        }
    };
    emit(&args.output, "puls", &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.config)?;
    let mut config = ExperimentConfig::from_json(&text)?;
    if let Some(seed) = args.seed {
        config.seeds = vec![seed];
    }
    let outcome = run_experiment(&config)?;

    let mut summary = String::from(RUN_CSV_HEADER);
    summary.push('\n');
    for run in &outcome.runs {
        summary.push_str(&run_to_csv_row(run));
        summary.push('\n');
    }

    if let Some(dir) = &args.output.output {
        fs::create_dir_all(dir)?;
        for run in &outcome.runs {
            let path = dir.join(format!(
                "resilience_seed{}_a{}_b{}.json",
                run.seed, run.alpha, run.beta
            ));
            fs::write(
                &path,
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&run_to_json(run)).expect("run serialize")
                ),
            )?;
        }
        let summary_path = dir.join("summary.csv");
        fs::write(&summary_path, &summary)?;
        eprintln!("wrote {}", summary_path.display());
    } else {
        print!("{summary}");
    }

    for run in &outcome.runs {
        if !run.assumptions_ok {
            eprintln!(
                "assumption failure (seed {}, pi({},{})): a1_ok={} a2_ok={} a3_ok={}",
                run.seed,
                run.alpha,
                run.beta,
                run.assumptions.a1_ok,
                run.assumptions.a2_ok,
                run.assumptions.a3_ok
            );
            for offender in &run.assumptions.a2_offenders {
                eprintln!(
                    "  small-group offender: edge {}-{} with {} common friends",
                    offender.good, offender.bad, offender.common_neighbors
                );
            }
            for offender in &run.assumptions.a3_offenders {
                eprintln!(
                    "  large-group offender: {} adjacent to a connected good set of {}",
                    offender.bad, offender.largest_good_component
                );
            }
        }
        if run.purity_breached() {
            eprintln!(
                "purity breach (seed {}, pi({},{})): {} bad backbone member(s) across good centers",
                run.seed, run.alpha, run.beta, run.total_backbone_bad
            );
        }
    }

    if outcome.any_purity_breach() || outcome.any_assumption_failure() {
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}
