//! Seeded Monte Carlo estimates of `ν(G, C_k)` and `ν(G, C_{xn})` over the
//! binomial and regular models.
//!
//! Estimates are heuristic lower bounds backed by feasible witnesses (or
//! exact values for tiny `n`); they are not claimed to be the limiting curves.
//! Replicate `r` always draws its graph from stream `r` of the base seed, so
//! any row of a results file can be regenerated on its own.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::analysis::{delta_for, AnalysisError};
use crate::fragment::{
    ceil_tolerant, decycle_within, exact_max_induced, floor_tolerant, fragment_forest_within,
    greedy_fragment, nu_of, theorem_pipeline, FragmentError, FragmentationResult, Method,
    DEFAULT_EXACT_LIMIT,
};
use crate::generators::{gnp, random_regular, GeneratorError, Seed};
use crate::graph::{components, components_within, ComponentDecomposition, Graph, VertexSet};
use crate::par::Execution;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Fragment(#[from] FragmentError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("need at least 2 replicates, got {0}")]
    TooFewReplicates(usize),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// `G(n, c/n)`.
    Binomial { c: f64 },
    /// Uniform simple `d`-regular graphs.
    Regular { d: usize },
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Binomial { .. } => "binomial",
            Model::Regular { .. } => "regular",
        }
    }

    pub fn sample(&self, n: usize, seed: Seed) -> Result<Graph, GeneratorError> {
        match *self {
            Model::Binomial { c } => gnp(n, c, seed),
            Model::Regular { d } => random_regular(n, d, seed),
        }
    }
}

/// How each replicate graph is fragmented at a given component cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveMethod {
    /// Branch-and-bound optimum; only for `n <= 20`.
    Exact,
    Greedy,
    /// Decycle, then cut the remaining forest.
    ForestPipeline,
}

impl CurveMethod {
    pub fn tag(self) -> &'static str {
        match self {
            CurveMethod::Exact => "exact",
            CurveMethod::Greedy => "greedy",
            CurveMethod::ForestPipeline => "forest-pipeline",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            CurveMethod::Exact,
            CurveMethod::Greedy,
            CurveMethod::ForestPipeline,
        ]
        .into_iter()
        .find(|m| m.tag() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// Absolute component caps `k`.
    K(Vec<usize>),
    /// Caps `ceil(x n)` for `x` in `(0, 1]`.
    X(Vec<f64>),
}

impl Grid {
    fn len(&self) -> usize {
        match self {
            Grid::K(v) => v.len(),
            Grid::X(v) => v.len(),
        }
    }

    fn value(&self, i: usize) -> f64 {
        match self {
            Grid::K(v) => v[i] as f64,
            Grid::X(v) => v[i],
        }
    }

    fn cap(&self, i: usize, n: usize) -> usize {
        match self {
            Grid::K(v) => v[i],
            Grid::X(v) => ceil_tolerant(v[i] * n as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: Model,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    pub method: CurveMethod,
    pub grid: Grid,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::InvalidConfig(m));
        if self.replicates == 0 {
            return bad("replicates must be at least 1".into());
        }
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        match self.model {
            Model::Binomial { c } if !(0.0..=self.n as f64).contains(&c) => {
                return bad(format!("mean degree {c} outside [0, n]"));
            }
            Model::Regular { d } if d == 0 || (self.n * d) % 2 == 1 || self.n <= d => {
                return bad(format!(
                    "no simple {d}-regular graph on {} vertices",
                    self.n
                ));
            }
            _ => {}
        }
        if self.method == CurveMethod::Exact && self.n > DEFAULT_EXACT_LIMIT {
            return bad(format!(
                "exact method needs n <= {DEFAULT_EXACT_LIMIT}, got {}",
                self.n
            ));
        }
        if self.grid.len() == 0 {
            return bad("grid is empty".into());
        }
        match &self.grid {
            Grid::K(ks) if ks.contains(&0) => bad("k grid values must be at least 1".into()),
            Grid::X(xs) if xs.iter().any(|&x| !(x > 0.0 && x <= 1.0)) => {
                bad("x grid values must lie in (0, 1]".into())
            }
            _ => Ok(()),
        }
    }

    pub fn replicate_seed(&self, replicate: usize) -> Seed {
        Seed::new(self.seed).with_stream(replicate as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicateValue {
    pub nu: f64,
    pub max_component: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    /// `k` or `x`, depending on the grid.
    pub grid_value: f64,
    pub cap: usize,
    pub mean: f64,
    /// Sample standard deviation (denominator `R - 1`; 0 when `R = 1`).
    pub stddev: f64,
    /// One entry per replicate, in replicate order.
    pub values: Vec<ReplicateValue>,
}

impl CurvePoint {
    fn from_values(grid_value: f64, cap: usize, values: Vec<ReplicateValue>) -> Self {
        let (mean, stddev) = mean_and_stddev(values.iter().map(|v| v.nu));
        CurvePoint {
            grid_value,
            cap,
            mean,
            stddev,
            values,
        }
    }
}

pub fn mean_and_stddev(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let count = xs.clone().count();
    if count == 0 {
        return (0.0, 0.0);
    }
    let mean = xs.clone().sum::<f64>() / count as f64;
    if count == 1 {
        return (mean, 0.0);
    }
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (count - 1) as f64;
    (mean, var.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveEstimate {
    pub config: ExperimentConfig,
    pub points: Vec<CurvePoint>,
}

/// Fragments one replicate graph at every grid cap.
pub fn replicate_witnesses(
    cfg: &ExperimentConfig,
    replicate: usize,
) -> Result<(Graph, Vec<FragmentationResult>), ExperimentError> {
    let g = cfg.model.sample(cfg.n, cfg.replicate_seed(replicate))?;
    let caps = (0..cfg.grid.len()).map(|i| cfg.grid.cap(i, cfg.n));
    let results = match cfg.method {
        CurveMethod::Exact => caps
            .map(|cap| exact_max_induced(&g, cap, DEFAULT_EXACT_LIMIT))
            .collect::<Result<Vec<_>, _>>()?,
        CurveMethod::Greedy => caps
            .map(|cap| greedy_fragment(&g, cap))
            .collect::<Result<Vec<_>, _>>()?,
        CurveMethod::ForestPipeline => {
            let comps = components(&g);
            caps.map(|cap| forest_pipeline(&g, &comps, cap)).collect()
        }
    };
    Ok((g, results))
}

/// Components that fit under `cap` are kept whole; larger ones are decycled
/// and the resulting forest is cut.
fn forest_pipeline(g: &Graph, comps: &ComponentDecomposition, cap: usize) -> FragmentationResult {
    let mut large = VertexSet::empty(g.n());
    for v in 0..g.n() {
        if comps.sizes()[comps.label(v)] > cap {
            large.insert(v);
        }
    }
    let mut kept = VertexSet::full(g.n());
    let removed = decycle_within(g, &mut large);
    for v in removed
        .into_iter()
        .chain(fragment_forest_within(g, &mut large, cap))
    {
        kept.remove(v);
    }
    FragmentationResult::from_kept(g, kept, Method::ForestCut)
}

fn estimate(cfg: &ExperimentConfig, exec: Execution) -> Result<CurveEstimate, ExperimentError> {
    cfg.validate()?;
    let rows = exec.map(cfg.replicates, |r| {
        replicate_witnesses(cfg, r).map(|(_, results)| {
            results
                .into_iter()
                .map(|res| ReplicateValue {
                    nu: res.nu,
                    max_component: res.max_component,
                })
                .collect::<Vec<_>>()
        })
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let points = (0..cfg.grid.len())
        .map(|i| {
            let values = rows.iter().map(|row| row[i]).collect();
            CurvePoint::from_values(cfg.grid.value(i), cfg.grid.cap(i, cfg.n), values)
        })
        .collect();
    Ok(CurveEstimate {
        config: cfg.clone(),
        points,
    })
}

/// Estimates `ν(G, C_k)` on a grid of absolute caps `k`.
pub fn estimate_phi(
    cfg: &ExperimentConfig,
    exec: Execution,
) -> Result<CurveEstimate, ExperimentError> {
    if !matches!(cfg.grid, Grid::K(_)) {
        return Err(ExperimentError::InvalidConfig(
            "estimate_phi needs a k grid".into(),
        ));
    }
    estimate(cfg, exec)
}

/// Estimates `ν(G, C_{xn})` on a grid of fractions `x`.
pub fn estimate_f(
    cfg: &ExperimentConfig,
    exec: Execution,
) -> Result<CurveEstimate, ExperimentError> {
    if !matches!(cfg.grid, Grid::X(_)) {
        return Err(ExperimentError::InvalidConfig(
            "estimate_f needs an x grid".into(),
        ));
    }
    estimate(cfg, exec)
}

/// Runs whichever estimator matches the grid.
pub fn estimate_curve(
    cfg: &ExperimentConfig,
    exec: Execution,
) -> Result<CurveEstimate, ExperimentError> {
    estimate(cfg, exec)
}

/// Regenerates every replicate and checks that each stored row is
/// reproduced by a witness that respects its cap.
pub fn revalidate(est: &CurveEstimate) -> Result<(), ExperimentError> {
    let cfg = &est.config;
    for r in 0..cfg.replicates {
        let (g, results) = replicate_witnesses(cfg, r)?;
        for (point, res) in est.points.iter().zip(&results) {
            let stored = point.values[r];
            let ok = res.validate(&g, Some(point.cap)).is_ok()
                && res.nu == stored.nu
                && res.max_component == stored.max_component;
            if !ok {
                return Err(ExperimentError::InvalidConfig(format!(
                    "replicate {r} at grid value {} does not revalidate",
                    point.grid_value
                )));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationPoint {
    pub grid_value: f64,
    pub mean: f64,
    pub stddev: f64,
    pub max_deviation: f64,
    /// `stddev / mean`, infinite when the mean is 0 and the spread is not.
    pub relative_spread: f64,
    pub flagged: bool,
}

pub const DEFAULT_CONCENTRATION_THRESHOLD: f64 = 0.05;

/// Per-point spread statistics; points whose `stddev / mean` exceeds
/// `threshold` are flagged.
pub fn concentration_report(
    est: &CurveEstimate,
    threshold: f64,
) -> Result<Vec<ConcentrationPoint>, ExperimentError> {
    if est.config.replicates < 2 {
        return Err(ExperimentError::TooFewReplicates(est.config.replicates));
    }
    Ok(est
        .points
        .iter()
        .map(|p| {
            let max_deviation = p
                .values
                .iter()
                .map(|v| (v.nu - p.mean).abs())
                .fold(0.0, f64::max);
            let relative_spread = if p.stddev == 0.0 {
                0.0
            } else if p.mean == 0.0 {
                f64::INFINITY
            } else {
                p.stddev / p.mean
            };
            ConcentrationPoint {
                grid_value: p.grid_value,
                mean: p.mean,
                stddev: p.stddev,
                max_deviation,
                relative_spread,
                flagged: relative_spread > threshold,
            }
        })
        .collect())
}

/// Finite-difference slopes of the mean curve between adjacent grid points.
pub fn empirical_slopes(est: &CurveEstimate) -> Vec<f64> {
    est.points
        .windows(2)
        .map(|w| (w[1].mean - w[0].mean) / (w[1].grid_value - w[0].grid_value))
        .collect()
}

/// Pool-adjacent-violators fit: the nondecreasing sequence closest to `ys`
/// in least squares.
pub fn pool_adjacent_violators(ys: &[f64]) -> Vec<f64> {
    // (block mean, block length)
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(ys.len());
    for &y in ys {
        blocks.push((y, 1));
        while blocks.len() >= 2 {
            let (m2, l2) = blocks[blocks.len() - 1];
            let (m1, l1) = blocks[blocks.len() - 2];
            if m1 <= m2 {
                break;
            }
            blocks.truncate(blocks.len() - 2);
            let len = l1 + l2;
            blocks.push(((m1 * l1 as f64 + m2 * l2 as f64) / len as f64, len));
        }
    }
    blocks
        .into_iter()
        .flat_map(|(m, l)| std::iter::repeat_n(m, l))
        .collect()
}

/// Piecewise-linear, monotone-regularized version of an `x`-curve with an
/// inverse: the smallest `x` at which the curve reaches a given `ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCurve {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl MonotoneCurve {
    pub fn from_estimate(est: &CurveEstimate) -> Result<Self, ExperimentError> {
        if !matches!(est.config.grid, Grid::X(_)) {
            return Err(ExperimentError::InvalidConfig(
                "inversion needs an x grid".into(),
            ));
        }
        let mut pts: Vec<(f64, f64)> = est.points.iter().map(|p| (p.grid_value, p.mean)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let ys = pool_adjacent_violators(&pts.iter().map(|p| p.1).collect::<Vec<_>>());
        Ok(MonotoneCurve { xs, ys })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.xs.partition_point(|&v| v < x);
        if i == 0 {
            return self.ys[0];
        }
        if i == self.xs.len() {
            return self.ys[i - 1];
        }
        let (x0, x1, y0, y1) = (self.xs[i - 1], self.xs[i], self.ys[i - 1], self.ys[i]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// `None` when the curve never reaches `z` on the grid.
    pub fn inverse(&self, z: f64) -> Option<f64> {
        if z <= self.ys[0] {
            return Some(self.xs[0]);
        }
        for i in 1..self.xs.len() {
            let (y0, y1) = (self.ys[i - 1], self.ys[i]);
            if z <= y1 && y1 > y0 {
                return Some(self.xs[i - 1] + (z - y0) / (y1 - y0) * (self.xs[i] - self.xs[i - 1]));
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoRow {
    pub replicate: usize,
    /// `|S| / n` for the greedy set with components of at most the large cap.
    pub nu_large: f64,
    /// `|S'| / n` after the pipeline.
    pub nu_small: f64,
    pub gap: f64,
    pub density_ok: bool,
    pub passed: bool,
    /// Number of components of `G[S]`.
    pub components_large: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoReport {
    pub c: f64,
    pub eps: f64,
    pub n: usize,
    pub delta: f64,
    pub large_cap: usize,
    pub small_cap: usize,
    pub rows: Vec<DemoRow>,
}

impl DemoReport {
    pub fn pass_fraction(&self) -> f64 {
        self.rows.iter().filter(|r| r.passed).count() as f64 / self.rows.len() as f64
    }

    /// Rows whose density check held but whose gap exceeded `eps`.
    pub fn conditional_failures(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.density_ok && !r.passed)
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemoConfig {
    pub c: f64,
    pub eps: f64,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    /// Replaces `max(1, floor(δ n))` as the large component cap.
    pub large_cap: Option<usize>,
}

/// Greedy set at cap `max(1, floor(δ n))`, then the pipeline down to
/// `ceil(3/eps)`, per replicate of `G(n, c/n)`.
pub fn theorem_demo(
    c: f64,
    eps: f64,
    n: usize,
    replicates: usize,
    seed: u64,
    exec: Execution,
) -> Result<DemoReport, ExperimentError> {
    run_demo(
        &DemoConfig {
            c,
            eps,
            n,
            replicates,
            seed,
            large_cap: None,
        },
        exec,
    )
}

pub fn run_demo(cfg: &DemoConfig, exec: Execution) -> Result<DemoReport, ExperimentError> {
    if cfg.replicates == 0 || cfg.n == 0 {
        return Err(ExperimentError::InvalidConfig(
            "need n >= 1 and replicates >= 1".into(),
        ));
    }
    let delta = delta_for(cfg.c, cfg.eps)?.value;
    let large_cap = cfg
        .large_cap
        .unwrap_or_else(|| floor_tolerant(delta * cfg.n as f64))
        .max(1);
    let small_cap = ceil_tolerant(3.0 / cfg.eps);
    let base = Seed::new(cfg.seed);
    let rows = exec.map(cfg.replicates, |r| -> Result<DemoRow, ExperimentError> {
        let g = gnp(cfg.n, cfg.c, base.with_stream(r as u64))?;
        let large = greedy_fragment(&g, large_cap)?;
        let out = theorem_pipeline(&g, &large.kept, cfg.eps)?;
        let nu_small = out.result.nu;
        let gap = large.nu - nu_small;
        Ok(DemoRow {
            replicate: r,
            nu_large: large.nu,
            nu_small,
            gap,
            density_ok: out.density_ok,
            passed: out.removed_from_s() as f64 <= cfg.eps * cfg.n as f64,
            components_large: components_within(&g, &large.kept).count(),
        })
    });
    Ok(DemoReport {
        c: cfg.c,
        eps: cfg.eps,
        n: cfg.n,
        delta,
        large_cap,
        small_cap,
        rows: rows.into_iter().collect::<Result<_, _>>()?,
    })
}

pub const RESULTS_HEADER: &str = "model,param,n,grid_value,replicate,nu,max_component,seed_stream";

fn fmt9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Shortest form that parses back to the same `f64`; used for inputs (`c`,
/// `x`) so that reloaded caps match exactly.
fn fmt_exact(x: f64) -> String {
    format!("{x:e}")
}

/// Renders the results file: one metadata comment line, the header, then one
/// row per (grid point, replicate).
pub fn format_results(est: &CurveEstimate) -> String {
    let cfg = &est.config;
    let kind = match cfg.grid {
        Grid::K(_) => "k",
        Grid::X(_) => "x",
    };
    let mut out = String::new();
    writeln!(
        out,
        "# kind={kind} method={} seed={} replicates={}",
        cfg.method.tag(),
        cfg.seed,
        cfg.replicates
    )
    .unwrap();
    writeln!(out, "{RESULTS_HEADER}").unwrap();
    let param = match cfg.model {
        Model::Binomial { c } => fmt_exact(c),
        Model::Regular { d } => d.to_string(),
    };
    for p in &est.points {
        let grid_value = match cfg.grid {
            Grid::K(_) => (p.grid_value as usize).to_string(),
            Grid::X(_) => fmt_exact(p.grid_value),
        };
        for (r, v) in p.values.iter().enumerate() {
            writeln!(
                out,
                "{},{param},{},{grid_value},{r},{},{},{r}",
                cfg.model.name(),
                cfg.n,
                fmt9(v.nu),
                v.max_component
            )
            .unwrap();
        }
    }
    out
}

pub fn save_results(est: &CurveEstimate, path: impl AsRef<Path>) -> Result<(), ExperimentError> {
    fs::write(path, format_results(est))?;
    Ok(())
}

pub fn load_results(path: impl AsRef<Path>) -> Result<CurveEstimate, ExperimentError> {
    parse_results(&fs::read_to_string(path)?)
}

fn schema(line: usize, message: impl Into<String>) -> ExperimentError {
    ExperimentError::Schema {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(line: usize, name: &str, raw: &str) -> Result<T, ExperimentError> {
    raw.parse()
        .map_err(|_| schema(line, format!("{name} `{raw}` does not parse")))
}

struct Meta {
    grid_is_k: bool,
    method: CurveMethod,
    seed: u64,
    replicates: usize,
}

fn parse_meta(line: &str) -> Result<Meta, ExperimentError> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| schema(1, "missing metadata comment line"))?;
    let (mut kind, mut method, mut seed, mut replicates) = (None, None, None, None);
    for pair in body.split_whitespace() {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| schema(1, format!("malformed metadata `{pair}`")))?;
        match key {
            "kind" => kind = Some(value == "k"),
            "method" => {
                method = Some(
                    CurveMethod::parse(value)
                        .ok_or_else(|| schema(1, format!("unknown method `{value}`")))?,
                )
            }
            "seed" => seed = Some(field(1, "seed", value)?),
            "replicates" => replicates = Some(field(1, "replicates", value)?),
            _ => return Err(schema(1, format!("unknown metadata key `{key}`"))),
        }
    }
    match (kind, method, seed, replicates) {
        (Some(grid_is_k), Some(method), Some(seed), Some(replicates)) => Ok(Meta {
            grid_is_k,
            method,
            seed,
            replicates,
        }),
        _ => Err(schema(
            1,
            "metadata needs kind, method, seed and replicates",
        )),
    }
}

pub fn parse_results(text: &str) -> Result<CurveEstimate, ExperimentError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().ok_or_else(|| schema(1, "empty file"))?;
    let meta = parse_meta(first)?;
    let (hline, header) = lines.next().ok_or_else(|| schema(2, "missing header"))?;
    if header != RESULTS_HEADER {
        return Err(schema(hline, "unexpected header"));
    }
    if meta.replicates == 0 {
        return Err(schema(1, "replicates must be at least 1"));
    }

    let mut model: Option<(Model, usize)> = None;
    let mut points: Vec<CurvePoint> = Vec::new();
    for (line, row) in lines {
        let cols: Vec<&str> = row.split(',').collect();
        if cols.len() != 8 {
            return Err(schema(
                line,
                format!("expected 8 fields, found {}", cols.len()),
            ));
        }
        let n: usize = field(line, "n", cols[2])?;
        let this_model = match cols[0] {
            "binomial" => Model::Binomial {
                c: field(line, "param", cols[1])?,
            },
            "regular" => Model::Regular {
                d: field(line, "param", cols[1])?,
            },
            other => return Err(schema(line, format!("unknown model `{other}`"))),
        };
        match model {
            None => model = Some((this_model, n)),
            Some(prev) if prev != (this_model, n) => {
                return Err(schema(line, "model, parameter or n changes between rows"));
            }
            _ => {}
        }
        let grid_value: f64 = if meta.grid_is_k {
            field::<usize>(line, "grid_value", cols[3])? as f64
        } else {
            field(line, "grid_value", cols[3])?
        };
        let replicate: usize = field(line, "replicate", cols[4])?;
        let raw_nu: f64 = field(line, "nu", cols[5])?;
        let max_component: usize = field(line, "max_component", cols[6])?;
        let stream: usize = field(line, "seed_stream", cols[7])?;
        if !(0.0..=1.0).contains(&raw_nu) {
            return Err(schema(line, format!("nu {raw_nu} outside [0, 1]")));
        }
        if max_component > n {
            return Err(schema(
                line,
                format!("max_component {max_component} exceeds n = {n}"),
            ));
        }
        if stream != replicate {
            return Err(schema(line, "seed_stream differs from replicate index"));
        }
        // ν is always |kept| / n; recover it exactly from its 9 digits.
        let kept = (raw_nu * n as f64).round() as usize;
        let nu = nu_of(kept, n);
        if (nu - raw_nu).abs() > 1e-8 {
            return Err(schema(
                line,
                format!("nu {raw_nu} is not a multiple of 1/{n}"),
            ));
        }
        let start_new = points
            .last()
            .is_none_or(|p| p.values.len() == meta.replicates);
        if start_new {
            points.push(CurvePoint {
                grid_value,
                cap: 0,
                mean: 0.0,
                stddev: 0.0,
                values: Vec::with_capacity(meta.replicates),
            });
        }
        let point = points.last_mut().expect("just ensured");
        if point.grid_value != grid_value || replicate != point.values.len() {
            return Err(schema(line, "rows out of order or a replicate is missing"));
        }
        point.values.push(ReplicateValue { nu, max_component });
    }
    let (model, n) = model.ok_or_else(|| schema(3, "no data rows"))?;
    if points
        .last()
        .is_some_and(|p| p.values.len() != meta.replicates)
    {
        return Err(schema(
            text.lines().count(),
            "file ends in the middle of a grid point",
        ));
    }
    let grid = if meta.grid_is_k {
        Grid::K(points.iter().map(|p| p.grid_value as usize).collect())
    } else {
        Grid::X(points.iter().map(|p| p.grid_value).collect())
    };
    let config = ExperimentConfig {
        model,
        n,
        replicates: meta.replicates,
        seed: meta.seed,
        method: meta.method,
        grid,
    };
    config.validate()?;
    let points = points
        .into_iter()
        .enumerate()
        .map(|(i, p)| CurvePoint::from_values(p.grid_value, config.grid.cap(i, n), p.values))
        .collect();
    Ok(CurveEstimate { config, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg(method: CurveMethod, grid: Grid) -> ExperimentConfig {
        ExperimentConfig {
            model: Model::Binomial { c: 2.0 },
            n: 12,
            replicates: 6,
            seed: 11,
            method,
            grid,
        }
    }

    #[test]
    fn exact_dominates_greedy() {
        let grid = Grid::K(vec![1, 2, 4, 8]);
        let exact = estimate_phi(
            &small_cfg(CurveMethod::Exact, grid.clone()),
            Execution::Sequential,
        )
        .unwrap();
        let greedy =
            estimate_phi(&small_cfg(CurveMethod::Greedy, grid), Execution::Sequential).unwrap();
        for (e, g) in exact.points.iter().zip(&greedy.points) {
            assert!(e.mean >= g.mean);
            for (ev, gv) in e.values.iter().zip(&g.values) {
                assert!(ev.nu >= gv.nu);
            }
        }
        for w in exact.points.windows(2) {
            assert!(w[0].mean <= w[1].mean);
        }
    }

    #[test]
    fn deterministic_and_execution_independent() {
        let cfg = ExperimentConfig {
            n: 400,
            replicates: 5,
            ..small_cfg(CurveMethod::Greedy, Grid::K(vec![2, 5]))
        };
        let a = estimate_phi(&cfg, Execution::Sequential).unwrap();
        let b = estimate_phi(&cfg, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, estimate_phi(&cfg, Execution::Sequential).unwrap());
    }

    #[test]
    fn x_equal_one_keeps_everything() {
        for method in [
            CurveMethod::Greedy,
            CurveMethod::ForestPipeline,
            CurveMethod::Exact,
        ] {
            let est = estimate_f(
                &small_cfg(method, Grid::X(vec![1.0])),
                Execution::Sequential,
            )
            .unwrap();
            assert_eq!(est.points[0].mean, 1.0);
            assert_eq!(est.points[0].cap, 12);
        }
    }

    #[test]
    fn grid_kind_is_enforced() {
        let cfg = small_cfg(CurveMethod::Greedy, Grid::X(vec![0.5]));
        assert!(matches!(
            estimate_phi(&cfg, Execution::Sequential),
            Err(ExperimentError::InvalidConfig(_))
        ));
        let cfg = small_cfg(CurveMethod::Greedy, Grid::K(vec![3]));
        assert!(matches!(
            estimate_f(&cfg, Execution::Sequential),
            Err(ExperimentError::InvalidConfig(_))
        ));
    }

    #[test]
    fn config_validation() {
        let base = small_cfg(CurveMethod::Greedy, Grid::K(vec![1]));
        let bad = [
            ExperimentConfig {
                replicates: 0,
                ..base.clone()
            },
            ExperimentConfig {
                model: Model::Regular { d: 3 },
                n: 11,
                ..base.clone()
            },
            ExperimentConfig {
                method: CurveMethod::Exact,
                n: 21,
                ..base.clone()
            },
            ExperimentConfig {
                grid: Grid::X(vec![0.0]),
                ..base.clone()
            },
            ExperimentConfig {
                grid: Grid::K(vec![]),
                ..base.clone()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
        assert!(base.validate().is_ok());
    }

    #[test]
    fn concentration_of_constant_values() {
        let est = CurveEstimate {
            config: small_cfg(CurveMethod::Greedy, Grid::K(vec![1])),
            points: vec![CurvePoint::from_values(
                1.0,
                1,
                vec![
                    ReplicateValue {
                        nu: 0.5,
                        max_component: 1
                    };
                    6
                ],
            )],
        };
        let rep = concentration_report(&est, 0.05).unwrap();
        assert_eq!(rep[0].stddev, 0.0);
        assert_eq!(rep[0].max_deviation, 0.0);
        assert!(!rep[0].flagged);

        let mut one = est.clone();
        one.config.replicates = 1;
        assert!(matches!(
            concentration_report(&one, 0.05),
            Err(ExperimentError::TooFewReplicates(1))
        ));
    }

    #[test]
    fn pav_and_inverse() {
        assert_eq!(
            pool_adjacent_violators(&[1.0, 3.0, 2.0, 4.0]),
            vec![1.0, 2.5, 2.5, 4.0]
        );
        assert_eq!(
            pool_adjacent_violators(&[3.0, 2.0, 1.0]),
            vec![2.0, 2.0, 2.0]
        );
        let curve = MonotoneCurve {
            xs: vec![0.1, 0.5, 0.9],
            ys: vec![0.4, 0.8, 1.0],
        };
        assert_eq!(curve.inverse(0.3), Some(0.1));
        assert!((curve.inverse(0.6).unwrap() - 0.3).abs() < 1e-12);
        assert!((curve.eval(curve.inverse(0.9).unwrap()) - 0.9).abs() < 1e-12);
        assert_eq!(curve.inverse(1.01), None);
    }

    #[test]
    fn results_roundtrip_and_rejections() {
        let est = estimate_f(
            &ExperimentConfig {
                n: 300,
                replicates: 3,
                ..small_cfg(CurveMethod::Greedy, Grid::X(vec![0.05, 0.3, 1.0]))
            },
            Execution::Sequential,
        )
        .unwrap();
        let text = format_results(&est);
        assert_eq!(parse_results(&text).unwrap(), est);
        revalidate(&est).unwrap();

        // Cut the file mid-row.
        let truncated = &text[..text.len() - 12];
        assert!(matches!(
            parse_results(truncated),
            Err(ExperimentError::Schema { .. })
        ));

        let bad_nu = text.replacen(
            &format!(",{},", fmt9(est.points[0].values[0].nu)),
            ",1.20000000e0,",
            1,
        );
        match parse_results(&bad_nu) {
            Err(ExperimentError::Schema { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("outside"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
