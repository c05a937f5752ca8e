//! Dismantling sparse random graphs.
//!
//! The central quantity is `ν(G, Γ)`: the largest fraction of vertices of
//! `G` whose induced subgraph lies in a class `Γ`, where `Γ` is either
//! "every component has at most `k` vertices" or "is a forest". The crate
//! provides
//!
//! * [`graph`]: immutable simple graphs and component / cycle queries,
//! * [`generators`]: seeded `G(n, c/n)`, random `d`-regular graphs, random
//!   labelled trees and small deterministic families,
//! * [`fragment`]: exact oracles, a constructive forest fragmenter, a
//!   bounded-component pipeline and several heuristics,
//! * [`analysis`]: Chernoff-tail calculus, the density checker and
//!   giant-component values,
//! * [`experiments`]: seeded Monte Carlo estimates of fragmentation curves
//!   with CSV persistence.
//!
//! Replicates run on rayon when the `parallel` feature is enabled (the
//! default); [`Execution`] selects the path at run time.

pub mod analysis;
pub mod experiments;
pub mod fragment;
pub mod generators;
pub mod graph;
pub mod io;
mod par;

pub use generators::Seed;
pub use graph::{Graph, GraphError, VertexSet};
pub use par::Execution;
