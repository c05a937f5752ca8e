//! Exact branch-and-bound for `N(G, C_k)` and `N(G, F)` on small graphs.
//!
//! Vertices are decided in order of decreasing degree; the kept set is a
//! bitmask, so graphs are limited to 63 vertices regardless of `limit`.

use super::{FragmentError, FragmentationResult, Method};
use crate::graph::{Graph, VertexSet};

pub const DEFAULT_EXACT_LIMIT: usize = 20;
const MASK_BITS: usize = 63;

struct Search {
    adj: Vec<u64>,
    order: Vec<usize>,
    best: u32,
    best_mask: u64,
}

impl Search {
    fn new(g: &Graph) -> Self {
        let adj = (0..g.n())
            .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | (1 << w)))
            .collect();
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        Search {
            adj,
            order,
            best: 0,
            best_mask: 0,
        }
    }

    /// Component of `v` inside `within`, stopping early once it exceeds `limit`.
    fn component(&self, v: usize, within: u64, limit: u32) -> u64 {
        let mut comp = 1u64 << v;
        let mut frontier = comp;
        while frontier != 0 && comp.count_ones() <= limit {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let u = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[u];
            }
            frontier = next & within & !comp;
            comp |= frontier;
        }
        comp
    }

    fn bounded(&mut self, depth: usize, kept: u64, cap: u32) {
        let kept_count = kept.count_ones();
        if kept_count + (self.order.len() - depth) as u32 <= self.best {
            return;
        }
        if depth == self.order.len() {
            self.best = kept_count;
            self.best_mask = kept;
            return;
        }
        let v = self.order[depth];
        let with_v = kept | (1 << v);
        if self.component(v, with_v, cap).count_ones() <= cap {
            self.bounded(depth + 1, with_v, cap);
        }
        self.bounded(depth + 1, kept, cap);
    }

    fn acyclic_after_adding(&self, v: usize, kept: u64) -> bool {
        let mut seen = 0u64;
        let mut nbrs = self.adj[v] & kept;
        while nbrs != 0 {
            let u = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            if seen & (1 << u) != 0 {
                return false;
            }
            seen |= self.component(u, kept, u32::MAX);
        }
        true
    }

    fn forest(&mut self, depth: usize, kept: u64) {
        let kept_count = kept.count_ones();
        if kept_count + (self.order.len() - depth) as u32 <= self.best {
            return;
        }
        if depth == self.order.len() {
            self.best = kept_count;
            self.best_mask = kept;
            return;
        }
        let v = self.order[depth];
        if self.acyclic_after_adding(v, kept) {
            self.forest(depth + 1, kept | (1 << v));
        }
        self.forest(depth + 1, kept);
    }

    fn into_result(self, g: &Graph, method: Method) -> FragmentationResult {
        let ids: Vec<usize> = (0..g.n())
            .filter(|&v| self.best_mask & (1 << v) != 0)
            .collect();
        let kept = VertexSet::from_ids(g.n(), &ids).expect("mask bits are in range");
        FragmentationResult::from_kept(g, kept, method)
    }
}

fn check_size(g: &Graph, limit: usize) -> Result<(), FragmentError> {
    let limit_eff = limit.min(MASK_BITS);
    if g.n() > limit_eff {
        return Err(FragmentError::GraphTooLarge {
            n: g.n(),
            limit: limit_eff,
        });
    }
    Ok(())
}

/// Largest kept set whose induced components have at most `k` vertices.
pub fn exact_max_induced(
    g: &Graph,
    k: usize,
    limit: usize,
) -> Result<FragmentationResult, FragmentError> {
    if k == 0 {
        return Err(FragmentError::InvalidCap);
    }
    check_size(g, limit)?;
    let mut search = Search::new(g);
    search.bounded(0, 0, k.min(MASK_BITS) as u32);
    Ok(search.into_result(g, Method::Exact))
}

/// Largest kept set inducing a forest; `n - N` is the decycling number.
pub fn exact_max_forest(g: &Graph, limit: usize) -> Result<FragmentationResult, FragmentError> {
    check_size(g, limit)?;
    let mut search = Search::new(g);
    search.forest(0, 0);
    Ok(search.into_result(g, Method::ExactForest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path, random_tree, Seed};

    #[test]
    fn cycle_and_path_values() {
        let r = exact_max_induced(&cycle(5), 1, DEFAULT_EXACT_LIMIT).unwrap();
        assert_eq!(r.kept.len(), 2);
        assert!(r.validate(&cycle(5), Some(1)).is_ok());

        let p = path(6);
        let r = exact_max_induced(&p, 2, DEFAULT_EXACT_LIMIT).unwrap();
        assert_eq!(r.kept.len(), 4);
        assert!(r.validate(&p, Some(2)).is_ok());
    }

    #[test]
    fn forest_keeps_everything_at_k_n() {
        for s in 0..10 {
            let t = random_tree(15, Seed::new(s)).unwrap();
            let r = exact_max_induced(&t, 15, DEFAULT_EXACT_LIMIT).unwrap();
            assert_eq!(r.kept.len(), 15);
            assert!(r.removed.is_empty());
        }
    }

    #[test]
    fn max_forest_values() {
        assert_eq!(exact_max_forest(&cycle(5), 20).unwrap().kept.len(), 4);
        let k4 = exact_max_forest(&complete(4), 20).unwrap();
        assert_eq!(k4.kept.len(), 2);
        assert!(k4.validate_forest(&complete(4)).is_ok());
        let t = random_tree(12, Seed::new(3)).unwrap();
        let r = exact_max_forest(&t, 20).unwrap();
        assert_eq!(r.kept.len(), 12);
        assert!(r.removed.is_empty());
    }

    #[test]
    fn rejects_large_graphs_and_zero_cap() {
        assert_eq!(
            exact_max_induced(&path(21), 2, DEFAULT_EXACT_LIMIT),
            Err(FragmentError::GraphTooLarge { n: 21, limit: 20 })
        );
        assert_eq!(
            exact_max_forest(&path(70), 100),
            Err(FragmentError::GraphTooLarge { n: 70, limit: 63 })
        );
        assert_eq!(
            exact_max_induced(&path(3), 0, 20),
            Err(FragmentError::InvalidCap)
        );
    }

    #[test]
    fn empty_graph_convention() {
        let r = exact_max_induced(&Graph::empty(0), 1, 20).unwrap();
        assert_eq!((r.kept.len(), r.nu), (0, 0.0));
    }
}
