//! Brute-force reference implementations, deliberately sharing no code with
//! the library beyond reading a graph's edge list.

#![allow(dead_code)]

use dismantle::Graph;

/// Union-find over `0..n`.
pub struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// False when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub fn size_of(&mut self, v: usize) -> usize {
        let r = self.find(v);
        self.size[r]
    }
}

fn in_mask(mask: u32, v: usize) -> bool {
    mask >> v & 1 == 1
}

/// Largest component and whether a cycle exists in the subgraph induced by
/// `mask`.
pub fn mask_profile(g: &Graph, mask: u32) -> (usize, bool) {
    let mut dsu = Dsu::new(g.n());
    let mut cyclic = false;
    for &(u, v) in g.edges() {
        if in_mask(mask, u) && in_mask(mask, v) && !dsu.union(u, v) {
            cyclic = true;
        }
    }
    let largest = (0..g.n())
        .filter(|&v| in_mask(mask, v))
        .map(|v| dsu.size_of(v))
        .max()
        .unwrap_or(0);
    (largest, cyclic)
}

/// `N(G, C_k)` by trying every subset.
pub fn brute_max_bounded(g: &Graph, k: usize) -> usize {
    assert!(g.n() <= 20);
    (0u32..1 << g.n())
        .filter(|&mask| mask_profile(g, mask).0 <= k)
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// `N(G, F)` by trying every subset.
pub fn brute_max_forest(g: &Graph) -> usize {
    assert!(g.n() <= 20);
    (0u32..1 << g.n())
        .filter(|&mask| !mask_profile(g, mask).1)
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Simple cycles of length `3..=k`, counted by choosing a vertex set with
/// its smallest member fixed first and trying every ordering of the rest;
/// each cycle then shows up once per direction.
pub fn brute_cycle_count(g: &Graph, k: usize) -> u64 {
    let n = g.n();
    assert!(n <= 10);
    let mut total = 0u64;
    for mask in 0u32..1 << n {
        let len = mask.count_ones() as usize;
        if len < 3 || len > k {
            continue;
        }
        let verts: Vec<usize> = (0..n).filter(|&v| in_mask(mask, v)).collect();
        let mut rest = verts[1..].to_vec();
        let mut directed = 0u64;
        permute(&mut rest, 0, &mut |order| {
            let mut prev = verts[0];
            for &v in order {
                if !g.has_edge(prev, v) {
                    return;
                }
                prev = v;
            }
            if g.has_edge(prev, verts[0]) {
                directed += 1;
            }
        });
        total += directed / 2;
    }
    total
}

fn permute(items: &mut Vec<usize>, at: usize, visit: &mut impl FnMut(&[usize])) {
    if at == items.len() {
        visit(items);
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        permute(items, at + 1, visit);
        items.swap(at, i);
    }
}

/// Component size of every vertex of `G[keep]` (0 outside `keep`).
pub fn component_sizes(g: &Graph, keep: &[bool]) -> Vec<usize> {
    let mut dsu = Dsu::new(g.n());
    for &(u, v) in g.edges() {
        if keep[u] && keep[v] {
            dsu.union(u, v);
        }
    }
    (0..g.n())
        .map(|v| if keep[v] { dsu.size_of(v) } else { 0 })
        .collect()
}

pub fn largest_component(g: &Graph, keep: &[bool]) -> usize {
    component_sizes(g, keep).into_iter().max().unwrap_or(0)
}

pub fn is_forest_within(g: &Graph, keep: &[bool]) -> bool {
    let mut dsu = Dsu::new(g.n());
    g.edges()
        .iter()
        .all(|&(u, v)| !(keep[u] && keep[v]) || dsu.union(u, v))
}
