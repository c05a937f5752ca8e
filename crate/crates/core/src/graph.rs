//! Immutable simple undirected graphs over dense vertex ids `0..n`.
//!
//! Removal of vertices is never done by mutation: callers describe the
//! surviving vertices with a [`VertexSet`] and ask for components of the
//! induced subgraph.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Errors raised while constructing graphs or vertex sets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} outside 0..{n}")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("vertex {0} listed twice")]
    RepeatedVertex(usize),
    #[error("vertex set covers {set} vertices but graph has {graph}")]
    SizeMismatch { set: usize, graph: usize },
}

/// Simple undirected graph. Adjacency lists are sorted ascending.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("m", &self.m())
            .finish()
    }
}

impl Graph {
    /// Builds a graph, rejecting out-of-range endpoints, self-loops and
    /// repeated pairs (in either orientation).
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &normalized {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            adj,
            edges: normalized,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn components(&self) -> ComponentDecomposition {
        components(self)
    }

    pub fn excess(&self) -> usize {
        excess(self)
    }

    pub fn is_forest(&self) -> bool {
        excess(self) == 0
    }
}

/// Subset of the vertices of a graph with `n` vertices.
#[derive(Clone, PartialEq, Eq)]
pub struct VertexSet {
    member: Vec<bool>,
    len: usize,
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            member: vec![false; n],
            len: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        VertexSet {
            member: vec![true; n],
            len: n,
        }
    }

    /// Builds a set from explicit ids, rejecting ids `>= n` and repeats.
    pub fn from_ids(n: usize, ids: &[usize]) -> Result<Self, GraphError> {
        let mut set = VertexSet::empty(n);
        for &v in ids {
            if v >= n {
                return Err(GraphError::InvalidVertex { vertex: v, n });
            }
            if !set.insert(v) {
                return Err(GraphError::RepeatedVertex(v));
            }
        }
        Ok(set)
    }

    pub fn from_flags(member: Vec<bool>) -> Self {
        let len = member.iter().filter(|&&b| b).count();
        VertexSet { member, len }
    }

    /// Size of the ambient vertex range.
    #[inline]
    pub fn universe(&self) -> usize {
        self.member.len()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.member.get(v).copied().unwrap_or(false)
    }

    /// Returns `true` if `v` was not already present.
    pub fn insert(&mut self, v: usize) -> bool {
        if self.member[v] {
            return false;
        }
        self.member[v] = true;
        self.len += 1;
        true
    }

    /// Returns `true` if `v` was present.
    pub fn remove(&mut self, v: usize) -> bool {
        if !self.member[v] {
            return false;
        }
        self.member[v] = false;
        self.len -= 1;
        true
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.member
            .iter()
            .enumerate()
            .filter_map(|(v, &b)| b.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet {
            member: self.member.iter().map(|b| !b).collect(),
            len: self.member.len() - self.len,
        }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.universe() == other.universe() && self.iter().all(|v| other.contains(v))
    }

    pub fn flags(&self) -> &[bool] {
        &self.member
    }

    pub(crate) fn check_for(&self, g: &Graph) -> Result<(), GraphError> {
        if self.universe() != g.n() {
            return Err(GraphError::SizeMismatch {
                set: self.universe(),
                graph: g.n(),
            });
        }
        Ok(())
    }
}

/// Connected components: a label per vertex plus per-label sizes.
///
/// Labels are assigned in order of the smallest vertex of each component.
/// When computed over an induced subgraph, vertices outside the set carry
/// [`ComponentDecomposition::OUTSIDE`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition {
    labels: Vec<usize>,
    sizes: Vec<usize>,
}

impl ComponentDecomposition {
    pub const OUTSIDE: usize = usize::MAX;

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn largest(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    /// Member lists per component, each ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (v, &l) in self.labels.iter().enumerate() {
            if l != Self::OUTSIDE {
                out[l].push(v);
            }
        }
        out
    }
}

pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
    Graph::new(n, edges)
}

pub fn components(g: &Graph) -> ComponentDecomposition {
    label_components(g, |_| true)
}

/// Components of `G[s]` without materializing the induced subgraph.
pub fn components_within(g: &Graph, s: &VertexSet) -> ComponentDecomposition {
    label_components(g, |v| s.contains(v))
}

fn label_components(g: &Graph, alive: impl Fn(usize) -> bool) -> ComponentDecomposition {
    let n = g.n();
    let mut labels = vec![ComponentDecomposition::OUTSIDE; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for root in 0..n {
        if labels[root] != ComponentDecomposition::OUTSIDE || !alive(root) {
            continue;
        }
        let id = sizes.len();
        labels[root] = id;
        queue.push_back(root);
        let mut size = 0;
        while let Some(v) = queue.pop_front() {
            size += 1;
            for &w in g.neighbors(v) {
                if labels[w] == ComponentDecomposition::OUTSIDE && alive(w) {
                    labels[w] = id;
                    queue.push_back(w);
                }
            }
        }
        sizes.push(size);
    }
    ComponentDecomposition { labels, sizes }
}

/// Largest component of `G[s]`; zero for the empty set.
pub fn max_component_within(g: &Graph, s: &VertexSet) -> usize {
    components_within(g, s).largest()
}

/// Induced subgraph `G[s]` with the old-to-new index map.
///
/// New ids follow ascending old ids, so the map is monotone. Entries for
/// vertices outside `s` are `None`.
pub fn induced_subgraph(
    g: &Graph,
    s: &VertexSet,
) -> Result<(Graph, Vec<Option<usize>>), GraphError> {
    s.check_for(g)?;
    let mut map = vec![None; g.n()];
    for (new, old) in s.iter().enumerate() {
        map[old] = Some(new);
    }
    let mut adj = vec![Vec::new(); s.len()];
    let mut edges = Vec::new();
    for &(u, v) in g.edges() {
        if let (Some(a), Some(b)) = (map[u], map[v]) {
            adj[a].push(b);
            adj[b].push(a);
            edges.push((a, b));
        }
    }
    // Monotone relabelling preserves both the edge order and sorted adjacency.
    Ok((Graph { adj, edges }, map))
}

/// Number of edges of `G[s]`.
pub fn edges_within(g: &Graph, s: &VertexSet) -> usize {
    g.edges()
        .iter()
        .filter(|&&(u, v)| s.contains(u) && s.contains(v))
        .count()
}

/// `m - n + (number of components)`: zero exactly for forests.
pub fn excess(g: &Graph) -> usize {
    g.m() + components(g).count() - g.n()
}

/// Excess of the induced subgraph `G[s]`.
pub fn excess_within(g: &Graph, s: &VertexSet) -> usize {
    edges_within(g, s) + components_within(g, s).count() - s.len()
}

/// Counts cycles of length at most `k`, each counted once regardless of
/// starting point or direction.
///
/// A cycle is found from its smallest vertex, and only in the direction
/// where the second vertex is smaller than the last.
pub fn count_short_cycles(g: &Graph, k: usize) -> u64 {
    if k < 3 {
        return 0;
    }
    let n = g.n();
    let mut on_path = vec![false; n];
    let mut path = Vec::with_capacity(k);
    let mut total = 0u64;
    for start in 0..n {
        // Only vertices that can close a cycle through `start` matter.
        if g.degree(start) < 2 {
            continue;
        }
        path.push(start);
        on_path[start] = true;
        total += extend_cycles(g, k, start, &mut path, &mut on_path);
        on_path[start] = false;
        path.pop();
    }
    total
}

fn extend_cycles(
    g: &Graph,
    k: usize,
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
) -> u64 {
    let last = *path.last().expect("path is never empty");
    let mut found = 0;
    for &w in g.neighbors(last) {
        if w == start && path.len() >= 3 && path[1] < last {
            found += 1;
        }
        if w <= start || on_path[w] || path.len() == k {
            continue;
        }
        path.push(w);
        on_path[w] = true;
        found += extend_cycles(g, k, start, path, on_path);
        on_path[w] = false;
        path.pop();
    }
    found
}
