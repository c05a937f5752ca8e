//! Seeded random graph models and small deterministic families.
//!
//! All randomness comes from ChaCha8 seeded with [`Seed::value`] and
//! switched to stream [`Seed::stream`]; replicate `r` of an experiment uses
//! stream `r`, so any replicate can be regenerated in isolation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use thiserror::Error;

use crate::graph::Graph;

pub const DEFAULT_REJECTION_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Seed {
    pub value: u64,
    pub stream: u64,
}

impl Seed {
    pub const fn new(value: u64) -> Self {
        Seed { value, stream: 0 }
    }

    pub const fn with_stream(self, stream: u64) -> Self {
        Seed {
            value: self.value,
            stream,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.value);
        rng.set_stream(self.stream);
        rng
    }
}

impl From<u64> for Seed {
    fn from(value: u64) -> Self {
        Seed::new(value)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("need at least one vertex")]
    NoVertices,
    #[error("mean degree {c} outside [0, {n}]")]
    MeanDegreeOutOfRange { c: f64, n: usize },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("n*d = {n}*{d} is odd; no {d}-regular graph exists")]
    OddDegreeSum { n: usize, d: usize },
    #[error("a {d}-regular simple graph needs more than {d} vertices, got {n}")]
    TooFewVertices { n: usize, d: usize },
    #[error("no simple pairing found in {attempts} configuration-model attempts")]
    RejectionBudgetExhausted { attempts: usize },
}

/// `G(n, c/n)` by geometric skipping over the `C(n, 2)` pairs.
pub fn gnp(n: usize, c: f64, seed: Seed) -> Result<Graph, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::NoVertices);
    }
    if !(0.0..=n as f64).contains(&c) {
        return Err(GeneratorError::MeanDegreeOutOfRange { c, n });
    }
    let p = c / n as f64;
    if p == 0.0 || n < 2 {
        return Ok(Graph::empty(n));
    }
    let pairs = (n as u64) * (n as u64 - 1) / 2;
    let mut rng = seed.rng();
    let skips = Geometric::new(p).expect("p in (0, 1]");
    let mut edges = Vec::with_capacity((p * pairs as f64 * 1.1) as usize + 16);
    // `next` is the index of the next candidate pair in (v, w), w < v order.
    let mut next: u64 = 0;
    loop {
        let skip: u64 = skips.sample(&mut rng);
        let idx = match next.checked_add(skip) {
            Some(i) if i < pairs => i,
            _ => break,
        };
        edges.push(pair_at(idx));
        next = idx + 1;
    }
    Ok(Graph::new(n, &edges).expect("distinct in-range pairs"))
}

/// Inverse of `v(v-1)/2 + w` for `0 <= w < v`.
fn pair_at(idx: u64) -> (usize, usize) {
    let mut v = ((1.0 + (1.0 + 8.0 * idx as f64).sqrt()) / 2.0) as u64;
    while v * (v - 1) / 2 > idx {
        v -= 1;
    }
    while (v + 1) * v / 2 <= idx {
        v += 1;
    }
    let w = idx - v * (v - 1) / 2;
    (w as usize, v as usize)
}

pub fn random_regular(n: usize, d: usize, seed: Seed) -> Result<Graph, GeneratorError> {
    random_regular_with_cap(n, d, seed, DEFAULT_REJECTION_CAP)
}

/// Configuration model: a uniform perfect matching of the `n*d` half-edges,
/// resampled from scratch until the outcome has no loop or multi-edge.
pub fn random_regular_with_cap(
    n: usize,
    d: usize,
    seed: Seed,
    max_attempts: usize,
) -> Result<Graph, GeneratorError> {
    if d == 0 {
        return Err(GeneratorError::ZeroDegree);
    }
    if (n * d) % 2 == 1 {
        return Err(GeneratorError::OddDegreeSum { n, d });
    }
    if n <= d {
        return Err(GeneratorError::TooFewVertices { n, d });
    }
    let mut rng = seed.rng();
    let mut points: Vec<usize> = (0..n * d).map(|h| h / d).collect();
    let mut edges = Vec::with_capacity(n * d / 2);
    for _ in 0..max_attempts {
        points.shuffle(&mut rng);
        edges.clear();
        let mut simple = true;
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v {
                simple = false;
                break;
            }
            edges.push((u.min(v), u.max(v)));
        }
        if !simple {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Ok(Graph::new(n, &edges).expect("simple pairing"));
    }
    Err(GeneratorError::RejectionBudgetExhausted {
        attempts: max_attempts,
    })
}

/// Uniform labelled tree via a random Prüfer sequence.
pub fn random_tree(n: usize, seed: Seed) -> Result<Graph, GeneratorError> {
    match n {
        0 => return Err(GeneratorError::NoVertices),
        1 => return Ok(Graph::empty(1)),
        2 => return Ok(Graph::new(2, &[(0, 1)]).expect("single edge")),
        _ => {}
    }
    let mut rng = seed.rng();
    let code: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    Ok(prufer_decode(n, &code))
}

/// Decodes a Prüfer sequence of length `n - 2` into its tree.
pub fn prufer_decode(n: usize, code: &[usize]) -> Graph {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    assert_eq!(code.len() + 2, n, "Prüfer code must have length n - 2");
    let mut degree = vec![1usize; n];
    for &v in code {
        degree[v] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in code {
        let Reverse(leaf) = leaves.pop().expect("a leaf always exists");
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.push(Reverse(v));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves remain");
    let Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a, b));
    Graph::new(n, &edges).expect("Prüfer decoding yields a tree")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::new(n, &edges).expect("path edges are valid")
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a simple cycle needs at least 3 vertices");
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges).expect("cycle edges are valid")
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::new(n, &edges).expect("complete graph edges are valid")
}

/// Star `K_{1,leaves}` with centre 0.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::new(leaves + 1, &edges).expect("star edges are valid")
}

/// Disjoint union, relabelling `b` after `a`.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let offset = a.n();
    let edges: Vec<_> = a
        .edges()
        .iter()
        .copied()
        .chain(b.edges().iter().map(|&(u, v)| (u + offset, v + offset)))
        .collect();
    Graph::new(a.n() + b.n(), &edges).expect("disjoint union of simple graphs is simple")
}
