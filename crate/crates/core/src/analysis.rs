//! Numeric side of the bounded-component argument: Chernoff tails for edge
//! counts of small sets, the admissible `δ`, a brute-force density checker
//! and giant-component values for `G(n, c/n)`.

// `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::graph::{components, Graph};
use crate::par::Execution;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("mean degree must be positive, got {0}")]
    NonPositiveMeanDegree(f64),
    #[error("mean degree must exceed 1, got {0}")]
    SubcriticalMeanDegree(f64),
    #[error("threshold {x} does not exceed the mean {lambda}")]
    ThresholdNotAboveMean { lambda: f64, x: f64 },
    #[error("eps must lie strictly between 0 and 1, got {0}")]
    InvalidEps(f64),
    #[error("set size {t} outside 1..={n}")]
    InvalidSetSize { t: usize, n: usize },
    #[error("threshold ratio x/lambda = {ratio} is not above 1; choose smaller sets")]
    SideCondition { ratio: f64 },
    #[error("t_max must be at least 1")]
    InvalidTmax,
    #[error("enumeration stopped after {examined} sets (budget {budget})")]
    EnumerationBudget { examined: u64, budget: u64 },
}

fn check_eps(eps: f64) -> Result<(), AnalysisError> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(AnalysisError::InvalidEps(eps))
    }
}

/// `ρ(c)`: the positive solution of `ρ = 1 - exp(-cρ)` for `c > 1`, else 0.
pub fn rho(c: f64) -> Result<f64, AnalysisError> {
    if !(c > 0.0) {
        return Err(AnalysisError::NonPositiveMeanDegree(c));
    }
    if c <= 1.0 {
        return Ok(0.0);
    }
    // The map is increasing and contracting near the fixed point.
    let mut r = 0.5f64;
    for _ in 0..100_000 {
        let next = -(-c * r).exp_m1();
        if (next - r).abs() <= 1e-15 {
            return Ok(next);
        }
        r = next;
    }
    // Slow convergence near c = 1: bisect h(ρ) = ρ - (1 - e^{-cρ}), which is
    // negative just above 0 and positive at 1.
    let h = |r: f64| r + (-c * r).exp_m1();
    let (mut lo, mut hi) = (f64::MIN_POSITIVE, 1.0);
    for _ in 0..2_000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `P(X >= x) <= exp(-l x)` with `l = ln(x/λ) - 1 + λ/x`, clamped to 1.
pub fn chernoff_tail(lambda: f64, x: f64) -> Result<f64, AnalysisError> {
    if !(lambda > 0.0) || !(x > lambda) {
        return Err(AnalysisError::ThresholdNotAboveMean { lambda, x });
    }
    let ratio = x / lambda;
    let rate = ratio.ln() - 1.0 + 1.0 / ratio;
    Ok((-rate * x).exp().min(1.0))
}

/// Union bound on the probability that some `t`-set of `G(n, c/n)` spans at
/// least `(1 + eps/4) t` edges.
#[derive(Debug, Clone, PartialEq)]
pub struct TailBound {
    pub t: usize,
    /// `n / t`.
    pub tau: f64,
    /// Mean edge count `(c/n) C(t, 2)`.
    pub lambda: f64,
    /// Edge threshold `(1 + eps/4) t`.
    pub x: f64,
    /// Chernoff rate `ln m - 1 + 1/m` with `m = x / λ`.
    pub l: f64,
    /// Natural log of the unclamped union bound `(eτ)^t exp(-l x)`.
    pub log_bound: f64,
    /// The union bound clamped to `[0, 1]`.
    pub bound: f64,
    /// `t(1 + ln τ) - t(1 + eps/4)(ln τ - 1 - ln c)`, which dominates
    /// `log_bound` because `l > ln τ - 1 - ln c`.
    pub coarse_exponent: f64,
    /// `-eps t ln(τ) / 8`, reported when `ln τ > 1 + ln c` and it dominates
    /// `coarse_exponent`.
    pub simplified_exponent: Option<f64>,
}

pub fn p_t_bound(t: usize, n: usize, c: f64, eps: f64) -> Result<TailBound, AnalysisError> {
    if t == 0 || t > n {
        return Err(AnalysisError::InvalidSetSize { t, n });
    }
    if !(c > 1.0) {
        return Err(AnalysisError::SubcriticalMeanDegree(c));
    }
    check_eps(eps)?;
    let tf = t as f64;
    let tau = n as f64 / tf;
    let lambda = c / n as f64 * tf * (tf - 1.0) / 2.0;
    let x = (1.0 + eps / 4.0) * tf;
    let ln_tau = tau.ln();
    let coarse_exponent = tf * (1.0 + ln_tau) - x * (ln_tau - 1.0 - c.ln());
    let simplified = -eps * tf * ln_tau / 8.0;
    let simplified_exponent =
        (ln_tau - 1.0 - c.ln() > 0.0 && coarse_exponent <= simplified).then_some(simplified);
    if t == 1 {
        // A single vertex spans no edges.
        return Ok(TailBound {
            t,
            tau,
            lambda,
            x,
            l: f64::INFINITY,
            log_bound: f64::NEG_INFINITY,
            bound: 0.0,
            coarse_exponent,
            simplified_exponent,
        });
    }
    let ratio = x / lambda;
    if !(ratio > 1.0) {
        return Err(AnalysisError::SideCondition { ratio });
    }
    let l = ratio.ln() - 1.0 + 1.0 / ratio;
    let log_bound = tf * (1.0 + ln_tau) - l * x;
    Ok(TailBound {
        t,
        tau,
        lambda,
        x,
        l,
        log_bound,
        bound: log_bound.min(0.0).exp(),
        coarse_exponent,
        simplified_exponent,
    })
}

/// Sum of [`p_t_bound`] over `1 <= t <= floor(δ n)`.
pub fn p_t_sum(n: usize, c: f64, eps: f64, delta: f64) -> Result<f64, AnalysisError> {
    let t_max = crate::fragment::floor_tolerant(delta * n as f64).min(n);
    let mut total = 0.0;
    for t in 1..=t_max {
        total += p_t_bound(t, n, c, eps)?.bound;
    }
    Ok(total)
}

/// An admissible `δ = 2^-halvings`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delta {
    pub halvings: u32,
    /// `2^-halvings`; underflows to 0 beyond 1074 halvings.
    pub value: f64,
    /// `ln(1/δ)`, exact even when `value` underflows.
    pub ln_tau: f64,
}

/// `(1 + ln τ) - (1 + eps/4)(ln τ - 1 - ln c) + eps ln(τ)/8`: nonpositive
/// exactly when the per-`t` exponent inequality holds at `τ`.
pub fn exponent_margin(c: f64, eps: f64, ln_tau: f64) -> f64 {
    (1.0 + ln_tau) - (1.0 + eps / 4.0) * (ln_tau - 1.0 - c.ln()) + eps * ln_tau / 8.0
}

/// Largest dyadic `δ` with `δ < eps/3`, `δ < 2/c`, `ln(1/δ) > 1 + ln c` and
/// a nonpositive [`exponent_margin`] at `τ = 1/δ`.
pub fn delta_for(c: f64, eps: f64) -> Result<Delta, AnalysisError> {
    if !(c > 1.0) {
        return Err(AnalysisError::SubcriticalMeanDegree(c));
    }
    check_eps(eps)?;
    let ln2 = std::f64::consts::LN_2;
    // Strict inequalities on δ become strict lower bounds on ln τ.
    let floor_ln_tau = (3.0 / eps).ln().max((c / 2.0).ln()).max(1.0 + c.ln());
    let mut halvings = 1u32;
    loop {
        let ln_tau = halvings as f64 * ln2;
        if ln_tau > floor_ln_tau && exponent_margin(c, eps, ln_tau) <= 0.0 {
            return Ok(Delta {
                halvings,
                value: 0.5f64.powi(halvings as i32),
                ln_tau,
            });
        }
        halvings += 1;
    }
}

/// Connected sets that span too many edges.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimReport {
    pub eps: f64,
    pub t_max: usize,
    /// `(vertices ascending, edge count)`, ordered by smallest vertex.
    pub violations: Vec<(Vec<usize>, usize)>,
    pub sets_examined: u64,
}

impl ClaimReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const DEFAULT_ENUMERATION_BUDGET: u64 = 2_000_000_000;

/// Whether `edges > (1 + eps/3) size`.
pub fn violates_density(edges: usize, size: usize, eps: f64) -> bool {
    edges as f64 > (1.0 + eps / 3.0) * size as f64
}

/// Enumerates every connected vertex set of size at most `t_max` and lists
/// those spanning more than `(1 + eps/3)|T|` edges.
///
/// Checking connected sets is enough: edges and sizes add over components,
/// so a violating set always has a violating component. Each set is reached
/// exactly once from its smallest vertex, so roots are independent tasks.
pub fn density_claim_check(
    g: &Graph,
    t_max: usize,
    eps: f64,
    budget: u64,
    exec: Execution,
) -> Result<ClaimReport, AnalysisError> {
    if t_max == 0 {
        return Err(AnalysisError::InvalidTmax);
    }
    if !(eps > 0.0) {
        return Err(AnalysisError::InvalidEps(eps));
    }
    let examined = AtomicU64::new(0);
    let per_root = exec.map(g.n(), |root| {
        NEAR.with(|buf| {
            let mut near = buf.borrow_mut();
            if near.len() < g.n() {
                near.resize(g.n(), 0);
            }
            let mut walk = ConnectedSets::new(g, root, t_max, eps, budget, &examined, &mut near);
            walk.run();
            (walk.violations, walk.aborted)
        })
    });
    let total = examined.load(Ordering::Relaxed);
    if per_root.iter().any(|(_, aborted)| *aborted) || total > budget {
        return Err(AnalysisError::EnumerationBudget {
            examined: total,
            budget,
        });
    }
    Ok(ClaimReport {
        eps,
        t_max,
        violations: per_root.into_iter().flat_map(|(v, _)| v).collect(),
        sets_examined: total,
    })
}

thread_local! {
    /// Per-worker scratch for [`ConnectedSets::near`]; all zeros between roots.
    static NEAR: std::cell::RefCell<Vec<u32>> = const { std::cell::RefCell::new(Vec::new()) };
}

/// ESU-style enumeration of connected sets whose smallest vertex is `root`.
struct ConnectedSets<'a, 'b> {
    g: &'a Graph,
    root: usize,
    t_max: usize,
    eps: f64,
    budget: u64,
    examined: &'a AtomicU64,
    local: u64,
    /// Number of members of the current set equal or adjacent to a vertex.
    near: &'b mut [u32],
    members: Vec<usize>,
    violations: Vec<(Vec<usize>, usize)>,
    aborted: bool,
}

impl<'a, 'b> ConnectedSets<'a, 'b> {
    fn new(
        g: &'a Graph,
        root: usize,
        t_max: usize,
        eps: f64,
        budget: u64,
        examined: &'a AtomicU64,
        near: &'b mut [u32],
    ) -> Self {
        ConnectedSets {
            g,
            root,
            t_max,
            eps,
            budget,
            examined,
            local: 0,
            near,
            members: Vec::with_capacity(t_max),
            violations: Vec::new(),
            aborted: false,
        }
    }

    fn mark(&mut self, v: usize, delta: i32) {
        let apply = |c: &mut u32| *c = (*c as i32 + delta) as u32;
        apply(&mut self.near[v]);
        for &w in self.g.neighbors(v) {
            apply(&mut self.near[w]);
        }
    }

    fn run(&mut self) {
        let root = self.root;
        let extension: Vec<usize> = self
            .g
            .neighbors(root)
            .iter()
            .copied()
            .filter(|&u| u > root)
            .collect();
        self.members.push(root);
        self.mark(root, 1);
        self.extend(extension, 0);
        self.mark(root, -1);
        self.members.pop();
        self.flush();
    }

    fn flush(&mut self) {
        self.examined.fetch_add(self.local, Ordering::Relaxed);
        self.local = 0;
    }

    fn extend(&mut self, mut extension: Vec<usize>, edges: usize) {
        if self.aborted {
            return;
        }
        self.local += 1;
        if self.local >= 4096 {
            self.flush();
            if self.examined.load(Ordering::Relaxed) > self.budget {
                self.aborted = true;
                return;
            }
        }
        if violates_density(edges, self.members.len(), self.eps) {
            let mut set = self.members.clone();
            set.sort_unstable();
            self.violations.push((set, edges));
        }
        if self.members.len() == self.t_max {
            return;
        }
        while let Some(w) = extension.pop() {
            let mut next = extension.clone();
            next.extend(
                self.g
                    .neighbors(w)
                    .iter()
                    .copied()
                    .filter(|&u| u > self.root && self.near[u] == 0),
            );
            let added = self
                .g
                .neighbors(w)
                .iter()
                .filter(|&&u| self.members.contains(&u))
                .count();
            self.members.push(w);
            self.mark(w, 1);
            self.extend(next, edges + added);
            self.mark(w, -1);
            self.members.pop();
            if self.aborted {
                return;
            }
        }
    }
}

/// Largest component size over `n`; 0 for the empty graph.
pub fn giant_component_fraction(g: &Graph) -> f64 {
    if g.n() == 0 {
        return 0.0;
    }
    components(g).largest() as f64 / g.n() as f64
}
