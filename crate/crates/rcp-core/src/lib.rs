//! Composition of disinformation-resilient information-aggregation domains
//! over undirected social graphs via relaxed clique percolation.
//!
//! The crate is organized around a small pipeline:
//!
//! * [`graph`] — immutable undirected social graphs, edge-list loading,
//!   tie strength and descriptive statistics.
//! * [`policy`] — percolation policy parameters `(alpha, beta)`, behavior
//!   assumptions, and feasibility checking for a single proposed expansion.
//! * [`percolation`] — the definition-faithful sequential-expansion engine
//!   composing the largest compliant backbone and complete domain for one
//!   central node, plus an exhaustive small-graph oracle.
//! * [`supercore`] — the whole-graph batch pipeline: strong-tie graph,
//!   component digraph, its acyclic condensation, and one-pass composition
//!   of backbones and domains for all nodes at once.
//! * [`sim`] — planted good/bad-citizen graphs, assumption verification,
//!   and empirical resilience measurement including attack scenarios.
//! * [`analysis`] — the building blocks behind the `rcp` CLI: policy
//!   sweeps, group statistics, and experiment configs.

pub mod analysis;
pub mod error;
pub mod generate;
pub mod graph;
pub mod percolation;
pub mod policy;
pub mod sim;
pub mod supercore;

pub use error::RcpError;
pub use graph::{GraphStats, LoadMode, LoadOptions, LoadReport, NodeId, SocialGraph};
pub use percolation::{Backbone, Domain};
pub use policy::{BehaviorParams, RcpPolicy};
pub use supercore::{SupercoreAnalysis, SupercoreDag};
