//! Deterministic removal heuristics. Ties are always broken by
//! (largest current degree, then smallest id).

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::{FragmentError, FragmentationResult, Method};
use crate::graph::{components_within, Graph, VertexSet};

/// Max-heap over `(degree, Reverse(id))` with lazy invalidation: stale
/// entries are skipped when their degree no longer matches.
struct DegreeQueue {
    heap: BinaryHeap<(usize, Reverse<usize>)>,
}

impl DegreeQueue {
    fn new(vertices: impl IntoIterator<Item = usize>, degree: &[usize]) -> Self {
        DegreeQueue {
            heap: vertices
                .into_iter()
                .map(|v| (degree[v], Reverse(v)))
                .collect(),
        }
    }

    fn push(&mut self, v: usize, degree: usize) {
        self.heap.push((degree, Reverse(v)));
    }

    fn pop_live(&mut self, degree: &[usize], live: impl Fn(usize) -> bool) -> Option<usize> {
        while let Some((d, Reverse(v))) = self.heap.pop() {
            if live(v) && degree[v] == d {
                return Some(v);
            }
        }
        None
    }
}

fn degrees_within(g: &Graph, alive: &VertexSet) -> Vec<usize> {
    (0..g.n())
        .map(|v| {
            if alive.contains(v) {
                g.neighbors(v)
                    .iter()
                    .filter(|&&w| alive.contains(w))
                    .count()
            } else {
                0
            }
        })
        .collect()
}

fn remove_vertex(
    g: &Graph,
    v: usize,
    alive: &mut VertexSet,
    degree: &mut [usize],
    queue: &mut DegreeQueue,
) {
    alive.remove(v);
    for &w in g.neighbors(v) {
        if alive.contains(w) {
            degree[w] -= 1;
            queue.push(w, degree[w]);
        }
    }
}

/// While some component exceeds `cap`, removes the vertex of largest
/// degree within that component.
///
/// Components evolve independently, so a single global queue ordered by
/// (degree, id) visits each component's vertices in the same order as a
/// per-component loop. A popped vertex whose component already fits is
/// settled together with its whole component.
pub fn greedy_fragment(g: &Graph, cap: usize) -> Result<FragmentationResult, FragmentError> {
    if cap == 0 {
        return Err(FragmentError::InvalidCap);
    }
    let n = g.n();
    let mut alive = VertexSet::full(n);
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut settled = vec![false; n];
    let mut queue = DegreeQueue::new(0..n, &degree);
    let mut seen = vec![0u32; n];
    let mut stamp = 0u32;
    let mut bfs = VecDeque::new();
    let mut members = Vec::new();

    while let Some(v) = queue.pop_live(&degree, |v| alive.contains(v) && !settled[v]) {
        // Explore v's component but give up once it is known to be too big.
        stamp += 1;
        members.clear();
        bfs.clear();
        seen[v] = stamp;
        bfs.push_back(v);
        let mut oversized = false;
        while let Some(u) = bfs.pop_front() {
            members.push(u);
            if members.len() > cap {
                oversized = true;
                break;
            }
            for &w in g.neighbors(u) {
                if alive.contains(w) && seen[w] != stamp {
                    seen[w] = stamp;
                    bfs.push_back(w);
                }
            }
        }
        if oversized {
            remove_vertex(g, v, &mut alive, &mut degree, &mut queue);
        } else {
            for &u in &members {
                settled[u] = true;
            }
        }
    }
    Ok(FragmentationResult::from_kept(g, alive, Method::Greedy))
}

/// Vertices of `G[alive]` lying on at least one cycle: those incident to a
/// non-bridge edge. Iterative lowpoint DFS.
fn cycle_vertices(g: &Graph, alive: &VertexSet, candidates: &[usize]) -> Vec<bool> {
    const UNSEEN: usize = usize::MAX;
    let n = g.n();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_cycle = vec![false; n];
    let mut timer = 0;
    // (vertex, parent, next neighbour index)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for &root in candidates {
        if disc[root] != UNSEEN || !alive.contains(root) {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, UNSEEN, 0));
        while let Some(top) = stack.last_mut() {
            let (v, parent, idx) = *top;
            if idx < g.degree(v) {
                top.2 += 1;
                let w = g.neighbors(v)[idx];
                if w == parent || !alive.contains(w) {
                    continue;
                }
                if disc[w] == UNSEEN {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, v, 0));
                } else {
                    // Back edge: always lies on a cycle.
                    low[v] = low[v].min(disc[w]);
                    if disc[w] < disc[v] {
                        on_cycle[v] = true;
                        on_cycle[w] = true;
                    }
                }
            } else {
                stack.pop();
                if parent != UNSEEN {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] <= disc[parent] {
                        // Tree edge parent-v is not a bridge.
                        on_cycle[v] = true;
                        on_cycle[parent] = true;
                    }
                }
            }
        }
    }
    on_cycle
}

/// Peels `G[within]` down to its 2-core, returning the core vertices.
fn two_core(g: &Graph, within: &VertexSet) -> Vec<usize> {
    let mut deg = degrees_within(g, within);
    let mut in_core = within.clone();
    let mut stack: Vec<usize> = within.iter().filter(|&v| deg[v] < 2).collect();
    while let Some(v) = stack.pop() {
        if !in_core.remove(v) {
            continue;
        }
        for &w in g.neighbors(v) {
            if in_core.contains(w) {
                deg[w] -= 1;
                if deg[w] < 2 {
                    stack.push(w);
                }
            }
        }
    }
    in_core.to_vec()
}

/// Removes cycle vertices from `G[alive]` until it is a forest, largest
/// current degree first. Each removal lowers the excess by at least one.
pub(crate) fn decycle_within(g: &Graph, alive: &mut VertexSet) -> Vec<usize> {
    let mut degree = degrees_within(g, alive);
    let mut removed = Vec::new();
    let mut core = two_core(g, alive);
    loop {
        let on_cycle = cycle_vertices(g, alive, &core);
        let pick = core
            .iter()
            .copied()
            .filter(|&v| on_cycle[v])
            .max_by_key(|&v| (degree[v], Reverse(v)));
        let Some(v) = pick else { break };
        alive.remove(v);
        removed.push(v);
        for &w in g.neighbors(v) {
            if alive.contains(w) {
                degree[w] -= 1;
            }
        }
        // Cores only shrink, so the next one lies inside the current one.
        let mut within = VertexSet::empty(g.n());
        for &u in core.iter().filter(|&&u| alive.contains(u)) {
            within.insert(u);
        }
        core = two_core(g, &within);
    }
    removed
}

/// Removes cycle vertices until the kept set induces a forest.
pub fn decycle_heuristic(g: &Graph) -> FragmentationResult {
    let mut alive = VertexSet::full(g.n());
    decycle_within(g, &mut alive);
    FragmentationResult::from_kept(g, alive, Method::Decycle)
}

/// Cuts every component of `G[s]` larger than `target` down to exactly
/// `target` vertices, largest current degree first.
pub fn trim_components(
    g: &Graph,
    s: &VertexSet,
    target: usize,
) -> Result<FragmentationResult, FragmentError> {
    if target == 0 {
        return Err(FragmentError::InvalidCap);
    }
    s.check_for(g)?;
    let mut alive = s.clone();
    let mut degree = degrees_within(g, &alive);
    for component in components_within(g, s).members() {
        if component.len() <= target {
            continue;
        }
        let mut queue = DegreeQueue::new(component.iter().copied(), &degree);
        for _ in 0..component.len() - target {
            let v = queue
                .pop_live(&degree, |v| alive.contains(v))
                .expect("component still has vertices to remove");
            remove_vertex(g, v, &mut alive, &mut degree, &mut queue);
        }
    }
    Ok(FragmentationResult::from_kept(g, alive, Method::Trim))
}

/// Breaks every cycle of `G[s]`, where all components of `G[s]` have at most
/// `k` vertices and hence every cycle has length at most `k`. At most one
/// vertex is removed per cycle.
pub fn strip_short_cycles(
    g: &Graph,
    s: &VertexSet,
    k: usize,
) -> Result<FragmentationResult, FragmentError> {
    s.check_for(g)?;
    let largest = components_within(g, s).largest();
    if largest > k {
        return Err(FragmentError::ComponentExceedsCap {
            size: largest,
            cap: k,
        });
    }
    let mut alive = s.clone();
    decycle_within(g, &mut alive);
    Ok(FragmentationResult::from_kept(
        g,
        alive,
        Method::StripCycles,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, disjoint_union, gnp, path, Seed};
    use crate::graph::{count_short_cycles, excess_within, induced_subgraph};

    #[test]
    fn greedy_keeps_all_when_cap_large() {
        let g = gnp(80, 3.0, Seed::new(2)).unwrap();
        let r = greedy_fragment(&g, 80).unwrap();
        assert!(r.removed.is_empty());
    }

    #[test]
    fn greedy_cap_one_is_independent() {
        let g = gnp(200, 4.0, Seed::new(5)).unwrap();
        let r = greedy_fragment(&g, 1).unwrap();
        assert!(r.validate(&g, Some(1)).is_ok());
        assert!(g
            .edges()
            .iter()
            .all(|&(u, v)| !(r.kept.contains(u) && r.kept.contains(v))));
    }

    #[test]
    fn greedy_on_six_cycle() {
        let g = cycle(6);
        let r = greedy_fragment(&g, 2).unwrap();
        assert!(r.validate(&g, Some(2)).is_ok());
        // 0 goes first on the all-ties cycle, leaving the path 1..=5.
        assert_eq!(r.removed.to_vec(), vec![0, 2, 4]);
    }

    #[test]
    fn greedy_rejects_zero_cap() {
        assert_eq!(greedy_fragment(&path(3), 0), Err(FragmentError::InvalidCap));
    }

    #[test]
    fn cycle_vertices_excludes_bridges() {
        // Two triangles joined by a path 2-3-4.
        let g = Graph::new(
            7,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (4, 6),
            ],
        )
        .unwrap();
        let alive = VertexSet::full(7);
        let on = cycle_vertices(&g, &alive, &(0..7).collect::<Vec<_>>());
        assert_eq!(on, vec![true, true, true, false, true, true, true]);
    }

    #[test]
    fn decycle_examples() {
        assert!(decycle_heuristic(&path(6)).removed.is_empty());
        assert_eq!(decycle_heuristic(&cycle(5)).removed_count(), 1);
        let k4 = complete(4);
        let r = decycle_heuristic(&k4);
        assert_eq!(r.removed_count(), 2);
        assert!(r.validate_forest(&k4).is_ok());
    }

    #[test]
    fn decycle_random_graphs_end_in_forests() {
        for s in 0..20 {
            let g = gnp(300, 3.0, Seed::new(s)).unwrap();
            let r = decycle_heuristic(&g);
            assert!(r.validate_forest(&g).is_ok());
            assert!(r.removed_count() <= crate::graph::excess(&g));
        }
    }

    #[test]
    fn trim_examples() {
        let g = path(10);
        let s = VertexSet::full(10);
        let r = trim_components(&g, &s, 4).unwrap();
        assert_eq!(r.removed_count(), 6);
        assert!(r.max_component <= 4);

        let r = trim_components(&g, &s, 10).unwrap();
        assert_eq!(r.kept, s);
    }

    #[test]
    fn strip_examples() {
        let c5 = cycle(5);
        let r = strip_short_cycles(&c5, &VertexSet::full(5), 5).unwrap();
        assert_eq!(r.removed_count(), 1);

        let k4 = complete(4);
        let s = VertexSet::full(4);
        let r = strip_short_cycles(&k4, &s, 4).unwrap();
        assert_eq!(r.removed_count(), 2);
        let (sub, _) = induced_subgraph(&k4, &s).unwrap();
        assert!(r.removed_count() as u64 <= count_short_cycles(&sub, 4));
        assert_eq!(excess_within(&k4, &r.kept), 0);

        let two = disjoint_union(&path(3), &path(4));
        let r = strip_short_cycles(&two, &VertexSet::full(7), 4).unwrap();
        assert!(r.removed.is_empty());

        assert_eq!(
            strip_short_cycles(&c5, &VertexSet::full(5), 4),
            Err(FragmentError::ComponentExceedsCap { size: 5, cap: 4 })
        );
    }
}
