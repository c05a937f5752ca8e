//! Constructive fragmentation of forests into components of at most `k`
//! vertices, removing at most `floor(n / (k + 1))` vertices per tree.
//!
//! For a tree on more than `k` vertices, every edge splits it into two
//! sides. Each edge is oriented towards its larger side (ties towards the
//! smaller endpoint id) and marked red when both sides exceed `k`.
//!
//! * No red edge: some vertex has every incident edge pointing at it. All
//!   branches hanging off such a sink have at most `k` vertices, so removing
//!   it finishes the tree.
//! * Otherwise: a vertex incident to exactly one red edge is removed. Its
//!   non-red branches have at most `k` vertices, and the branch across the
//!   red edge has at most `n - k - 1`; only that branch is processed further.

use std::collections::VecDeque;

use super::{FragmentError, FragmentationResult, Method};
use crate::graph::{components_within, excess, Graph, VertexSet};

pub fn fragment_forest(f: &Graph, k: usize) -> Result<FragmentationResult, FragmentError> {
    if k == 0 {
        return Err(FragmentError::InvalidCap);
    }
    let e = excess(f);
    if e != 0 {
        return Err(FragmentError::NotAForest { excess: e });
    }
    let mut kept = VertexSet::full(f.n());
    fragment_forest_within(f, &mut kept, k);
    Ok(FragmentationResult::from_kept(f, kept, Method::ForestCut))
}

/// Scratch space indexed by vertex id, reused across trees.
struct Scratch {
    parent: Vec<usize>,
    size: Vec<usize>,
    out_degree: Vec<usize>,
    red_degree: Vec<usize>,
    red_to_parent: Vec<bool>,
    order: Vec<usize>,
    queue: VecDeque<usize>,
    visited: Vec<u32>,
    stamp: u32,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            parent: vec![usize::MAX; n],
            size: vec![0; n],
            out_degree: vec![0; n],
            red_degree: vec![0; n],
            red_to_parent: vec![false; n],
            order: Vec::new(),
            queue: VecDeque::new(),
            visited: vec![0; n],
            stamp: 0,
        }
    }

    /// BFS order of the tree containing `root` inside `alive`, filling parents.
    fn traverse(&mut self, g: &Graph, alive: &VertexSet, root: usize) {
        self.stamp += 1;
        self.order.clear();
        self.visited[root] = self.stamp;
        self.parent[root] = usize::MAX;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            for &w in g.neighbors(v) {
                if alive.contains(w) && self.visited[w] != self.stamp {
                    self.visited[w] = self.stamp;
                    self.parent[w] = v;
                    self.queue.push_back(w);
                }
            }
        }
    }
}

/// Fragments the forest `G[alive]` in place, returning removed vertices in
/// removal order. `G[alive]` must be acyclic.
pub(crate) fn fragment_forest_within(g: &Graph, alive: &mut VertexSet, k: usize) -> Vec<usize> {
    let mut removed = Vec::new();
    let mut scratch = Scratch::new(g.n());
    let decomposition = components_within(g, alive);
    for tree in decomposition.members() {
        if tree.len() <= k {
            continue;
        }
        // Trees are rooted at their smallest vertex.
        let mut root = tree[0];
        loop {
            scratch.traverse(g, alive, root);
            let total = scratch.order.len();
            if total <= k {
                break;
            }
            match split_tree(&mut scratch, total, k) {
                Split::Sink(v) => {
                    alive.remove(v);
                    removed.push(v);
                    break;
                }
                Split::RedLeaf { leaf, across } => {
                    alive.remove(leaf);
                    removed.push(leaf);
                    root = across;
                }
            }
        }
    }
    removed
}

enum Split {
    Sink(usize),
    RedLeaf { leaf: usize, across: usize },
}

fn split_tree(s: &mut Scratch, total: usize, k: usize) -> Split {
    for &v in &s.order {
        s.size[v] = 1;
        s.out_degree[v] = 0;
        s.red_degree[v] = 0;
        s.red_to_parent[v] = false;
    }
    for i in (1..s.order.len()).rev() {
        let v = s.order[i];
        let p = s.parent[v];
        s.size[p] += s.size[v];
    }
    let mut any_red = false;
    for i in 1..s.order.len() {
        let child = s.order[i];
        let parent = s.parent[child];
        let child_side = s.size[child];
        let parent_side = total - child_side;
        let head = match child_side.cmp(&parent_side) {
            std::cmp::Ordering::Greater => child,
            std::cmp::Ordering::Less => parent,
            std::cmp::Ordering::Equal => child.min(parent),
        };
        let tail = if head == child { parent } else { child };
        s.out_degree[tail] += 1;
        if child_side > k && parent_side > k {
            any_red = true;
            s.red_to_parent[child] = true;
            s.red_degree[child] += 1;
            s.red_degree[parent] += 1;
        }
    }
    if !any_red {
        let sink = s
            .order
            .iter()
            .copied()
            .filter(|&v| s.out_degree[v] == 0)
            .min()
            .expect("an oriented tree has a sink");
        return Split::Sink(sink);
    }
    let leaf = s
        .order
        .iter()
        .copied()
        .filter(|&v| s.red_degree[v] == 1)
        .min()
        .expect("a nonempty set of tree edges has a leaf");
    let across = if s.red_to_parent[leaf] {
        s.parent[leaf]
    } else {
        s.order
            .iter()
            .copied()
            .find(|&c| s.red_to_parent[c] && s.parent[c] == leaf)
            .expect("the red edge at a red leaf goes to a child")
    };
    Split::RedLeaf { leaf, across }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, path, random_tree, star, Seed};

    #[test]
    fn small_trees() {
        // n <= k keeps everything, n = k + 1 needs exactly one removal.
        for n in 1..=5 {
            let r = fragment_forest(&path(n), 5).unwrap();
            assert!(r.removed.is_empty());
        }
        let r = fragment_forest(&path(6), 5).unwrap();
        assert_eq!(r.removed_count(), 1);
        assert!(r.max_component <= 5);
    }

    #[test]
    fn path_nine_cap_two() {
        let p = path(9);
        let r = fragment_forest(&p, 2).unwrap();
        assert!(r.removed_count() <= 3);
        assert!(r.validate(&p, Some(2)).is_ok());
    }

    #[test]
    fn star_removes_centre() {
        let g = star(5);
        let r = fragment_forest(&g, 1).unwrap();
        assert_eq!(r.removed.to_vec(), vec![0]);
        assert_eq!(components_within(&g, &r.kept).count(), 5);
    }

    #[test]
    fn rejects_cycles() {
        assert_eq!(
            fragment_forest(&cycle(4), 2),
            Err(FragmentError::NotAForest { excess: 1 })
        );
        assert_eq!(fragment_forest(&path(4), 0), Err(FragmentError::InvalidCap));
    }

    #[test]
    fn removal_bound_on_random_trees() {
        for s in 0..100 {
            let t = random_tree(60, Seed::new(s)).unwrap();
            for k in 1..=12 {
                let r = fragment_forest(&t, k).unwrap();
                assert!(r.validate(&t, Some(k)).is_ok());
                assert!(r.removed_count() <= 60 / (k + 1), "seed {s} k {k}");
            }
        }
    }
}
