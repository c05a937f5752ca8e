//! Fragmenters: procedures that pick a kept vertex set whose induced
//! subgraph lies in a target class (bounded components or forests).
//!
//! Every procedure returns a [`FragmentationResult`] that can be re-checked
//! against the graph with [`FragmentationResult::validate`].

mod exact;
mod forest;
mod heuristics;
mod pipeline;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{components_within, excess, excess_within, Graph, GraphError, VertexSet};

pub use exact::{exact_max_forest, exact_max_induced, DEFAULT_EXACT_LIMIT};
pub use forest::fragment_forest;
pub use heuristics::{decycle_heuristic, greedy_fragment, strip_short_cycles, trim_components};
pub use pipeline::{theorem_pipeline, PipelineOutcome};

pub(crate) use forest::fragment_forest_within;
pub(crate) use heuristics::decycle_within;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FragmentError {
    #[error("graph has {n} vertices, above the exact-search limit {limit}")]
    GraphTooLarge { n: usize, limit: usize },
    #[error("component cap must be at least 1")]
    InvalidCap,
    #[error("input is not a forest (excess {excess})")]
    NotAForest { excess: usize },
    #[error("eps must lie strictly between 0 and 1, got {0}")]
    InvalidEps(f64),
    #[error("invalid vertex set: {0}")]
    InvalidSet(#[from] GraphError),
    #[error("component of size {size} exceeds cap {cap}")]
    ComponentExceedsCap { size: usize, cap: usize },
    #[error("removed {removed} vertices although the density claim held (budget {budget})")]
    BudgetViolated { removed: usize, budget: f64 },
}

/// Which procedure produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    ExactForest,
    ForestCut,
    Greedy,
    Decycle,
    Pipeline,
    Trim,
    StripCycles,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::ExactForest => "exact-forest",
            Method::ForestCut => "forest-cut",
            Method::Greedy => "greedy",
            Method::Decycle => "decycle",
            Method::Pipeline => "pipeline",
            Method::Trim => "trim",
            Method::StripCycles => "strip-cycles",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Method::Exact,
            Method::ExactForest,
            Method::ForestCut,
            Method::Greedy,
            Method::Decycle,
            Method::Pipeline,
            Method::Trim,
            Method::StripCycles,
        ]
        .into_iter()
        .find(|m| m.tag() == s)
        .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// A kept/removed partition of the vertices plus summary numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct FragmentationResult {
    pub kept: VertexSet,
    pub removed: VertexSet,
    pub max_component: usize,
    pub method: Method,
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("kept and removed do not partition the vertex range")]
    NotAPartition,
    #[error("stored max component {stored} but recomputed {actual}")]
    MaxComponentMismatch { stored: usize, actual: usize },
    #[error("largest component {size} exceeds cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("kept set induces a subgraph with excess {0}")]
    NotAForest(usize),
    #[error("nu {stored} does not match |kept|/n = {actual}")]
    NuMismatch { stored: f64, actual: f64 },
}

/// `|kept| / n`, with the empty graph mapped to 0.
pub fn nu_of(kept: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        kept as f64 / n as f64
    }
}

impl FragmentationResult {
    pub fn from_kept(g: &Graph, kept: VertexSet, method: Method) -> Self {
        debug_assert_eq!(kept.universe(), g.n());
        let max_component = components_within(g, &kept).largest();
        let removed = kept.complement();
        let nu = nu_of(kept.len(), g.n());
        FragmentationResult {
            kept,
            removed,
            max_component,
            method,
            nu,
        }
    }

    pub fn removed_count(&self) -> usize {
        self.removed.len()
    }

    /// Recomputes everything from scratch; `cap` additionally bounds the
    /// largest component.
    pub fn validate(&self, g: &Graph, cap: Option<usize>) -> Result<(), ValidationError> {
        let n = g.n();
        if self.kept.universe() != n
            || self.removed.universe() != n
            || self.kept.len() + self.removed.len() != n
            || self.kept.iter().any(|v| self.removed.contains(v))
        {
            return Err(ValidationError::NotAPartition);
        }
        let actual = components_within(g, &self.kept).largest();
        if actual != self.max_component {
            return Err(ValidationError::MaxComponentMismatch {
                stored: self.max_component,
                actual,
            });
        }
        if let Some(cap) = cap {
            if actual > cap {
                return Err(ValidationError::CapExceeded { size: actual, cap });
            }
        }
        let nu = nu_of(self.kept.len(), n);
        if nu != self.nu || !(0.0..=1.0).contains(&self.nu) {
            return Err(ValidationError::NuMismatch {
                stored: self.nu,
                actual: nu,
            });
        }
        Ok(())
    }

    /// Like [`validate`](Self::validate) but requires `G[kept]` to be a forest.
    pub fn validate_forest(&self, g: &Graph) -> Result<(), ValidationError> {
        self.validate(g, None)?;
        match excess_within(g, &self.kept) {
            0 => Ok(()),
            e => Err(ValidationError::NotAForest(e)),
        }
    }
}

/// Minimum number of edges whose deletion leaves a forest:
/// `m - (n - components)`.
pub fn edge_decycling_count(g: &Graph) -> usize {
    excess(g)
}

/// `ceil(x)` that treats values within 1e-9 of an integer as that integer,
/// so `3.0 / 0.3` maps to 10 rather than 11.
pub fn ceil_tolerant(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r as usize
    } else {
        x.ceil() as usize
    }
}

/// `floor(x)` with the same tolerance as [`ceil_tolerant`].
pub fn floor_tolerant(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r as usize
    } else {
        x.floor() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path};

    #[test]
    fn edge_decycling_examples() {
        assert_eq!(edge_decycling_count(&path(7)), 0);
        assert_eq!(edge_decycling_count(&cycle(9)), 1);
        assert_eq!(edge_decycling_count(&complete(4)), 3);
    }

    #[test]
    fn tolerant_rounding() {
        assert_eq!(ceil_tolerant(3.0 / 0.3), 10);
        assert_eq!(ceil_tolerant(3.0 / 0.9), 4);
        assert_eq!(ceil_tolerant(6.0), 6);
        assert_eq!(floor_tolerant(0.3 * 10.0), 3);
        assert_eq!(floor_tolerant(2.7), 2);
    }

    #[test]
    fn method_tags_roundtrip() {
        for m in [
            Method::Exact,
            Method::Greedy,
            Method::StripCycles,
            Method::ForestCut,
        ] {
            assert_eq!(m.tag().parse::<Method>().unwrap(), m);
        }
        assert!("bogus".parse::<Method>().is_err());
    }

    #[test]
    fn validation_catches_tampering() {
        let g = path(4);
        let mut r = FragmentationResult::from_kept(
            &g,
            VertexSet::from_ids(4, &[0, 2, 3]).unwrap(),
            Method::Greedy,
        );
        assert_eq!(r.max_component, 2);
        assert!(r.validate(&g, Some(2)).is_ok());
        assert_eq!(
            r.validate(&g, Some(1)),
            Err(ValidationError::CapExceeded { size: 2, cap: 1 })
        );
        r.max_component = 1;
        assert!(matches!(
            r.validate(&g, None),
            Err(ValidationError::MaxComponentMismatch { .. })
        ));
    }
}
