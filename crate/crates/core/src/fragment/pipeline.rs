//! From a set `S` with components of size up to `δn` to a subset whose
//! components have at most `ceil(3/eps)` vertices.
//!
//! Components of `G[S]` that already fit under the small cap are kept as they
//! are, cycles included. Each larger component `T` first loses at most
//! `excess(T)` cycle vertices, which leaves a forest, and that forest is then
//! cut with [`fragment_forest`](super::fragment_forest)'s procedure.
//!
//! If every component satisfies `e(T) <= (1 + eps/3)|T|`, then at most
//! `eps|S|/3` components are large, the decycling step removes fewer than
//! `2 eps |S| / 3` vertices and the forest step fewer than `eps |S| / 3`; the
//! total is therefore at most `eps n`, and this is checked on every run.

use super::{
    ceil_tolerant, decycle_within, fragment_forest_within, FragmentError, FragmentationResult,
    Method,
};
use crate::graph::{components_within, Graph, VertexSet};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutcome {
    pub result: FragmentationResult,
    /// `ceil(3 / eps)`, the component cap of the output.
    pub cap: usize,
    /// Every component `T` of `G[S]` spans at most `(1 + eps/3)|T|` edges.
    pub density_ok: bool,
    pub decycle_removed: usize,
    pub forest_removed: usize,
    /// `eps * n`.
    pub budget: f64,
}

impl PipelineOutcome {
    pub fn removed_from_s(&self) -> usize {
        self.decycle_removed + self.forest_removed
    }
}

pub fn theorem_pipeline(
    g: &Graph,
    s: &VertexSet,
    eps: f64,
) -> Result<PipelineOutcome, FragmentError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(FragmentError::InvalidEps(eps));
    }
    s.check_for(g)?;
    let cap = ceil_tolerant(3.0 / eps);
    let limit = 1.0 + eps / 3.0;

    let decomposition = components_within(g, s);
    let mut component_edges = vec![0usize; decomposition.count()];
    for &(u, v) in g.edges() {
        if s.contains(u) && s.contains(v) {
            component_edges[decomposition.label(u)] += 1;
        }
    }
    let density_ok = component_edges
        .iter()
        .zip(decomposition.sizes())
        .all(|(&e, &size)| e as f64 <= limit * size as f64);
    let mut large = VertexSet::empty(g.n());
    for v in s.iter() {
        if decomposition.sizes()[decomposition.label(v)] > cap {
            large.insert(v);
        }
    }

    let decycled = decycle_within(g, &mut large);
    let fragmented = fragment_forest_within(g, &mut large, cap);

    let mut kept = s.clone();
    for &v in decycled.iter().chain(&fragmented) {
        kept.remove(v);
    }
    let result = FragmentationResult::from_kept(g, kept, Method::Pipeline);
    let budget = eps * g.n() as f64;
    let removed = decycled.len() + fragmented.len();
    if density_ok && removed as f64 > budget {
        return Err(FragmentError::BudgetViolated { removed, budget });
    }
    Ok(PipelineOutcome {
        result,
        cap,
        density_ok,
        decycle_removed: decycled.len(),
        forest_removed: fragmented.len(),
        budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, disjoint_union, path};

    #[test]
    fn small_forest_components_are_kept() {
        let g = disjoint_union(&path(5), &path(6));
        let s = VertexSet::full(g.n());
        let out = theorem_pipeline(&g, &s, 0.5).unwrap();
        assert_eq!(out.cap, 6);
        assert_eq!(out.result.kept, s);
    }

    #[test]
    fn two_five_cycles() {
        let g = disjoint_union(&cycle(5), &cycle(5));
        let s = VertexSet::full(10);
        // Cap 6: both cycles already fit.
        let out = theorem_pipeline(&g, &s, 0.5).unwrap();
        assert_eq!(out.result.kept, s);
        // Cap 4: each cycle loses one vertex and the remaining path of 4 fits.
        let out = theorem_pipeline(&g, &s, 0.9).unwrap();
        assert_eq!(out.cap, 4);
        assert_eq!(out.decycle_removed, 2);
        assert_eq!(out.forest_removed, 0);
        assert!(out.result.validate(&g, Some(4)).is_ok());
        assert!(out.removed_from_s() as f64 <= 0.9 * 10.0);
    }

    #[test]
    fn output_is_subset_with_bounded_components() {
        let g = disjoint_union(&complete(5), &path(40));
        let s = VertexSet::full(g.n());
        let out = theorem_pipeline(&g, &s, 0.5).unwrap();
        assert!(out.result.kept.is_subset(&s));
        assert!(out.result.validate(&g, Some(6)).is_ok());
        assert!(!out.density_ok);
    }

    #[test]
    fn rejects_bad_eps() {
        let g = path(3);
        let s = VertexSet::full(3);
        for eps in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(matches!(
                theorem_pipeline(&g, &s, eps),
                Err(FragmentError::InvalidEps(_))
            ));
        }
        assert!(matches!(
            theorem_pipeline(&g, &VertexSet::full(4), 0.5),
            Err(FragmentError::InvalidSet(_))
        ));
    }
}
