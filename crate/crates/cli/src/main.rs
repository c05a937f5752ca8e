use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dismantle::analysis::{
    delta_for, density_claim_check, p_t_bound, p_t_sum, AnalysisError, DEFAULT_ENUMERATION_BUDGET,
};
use dismantle::experiments::{
    concentration_report, empirical_slopes, estimate_curve, run_demo, save_results, CurveMethod,
    DemoConfig, ExperimentConfig, ExperimentError, Grid, Model, MonotoneCurve,
    DEFAULT_CONCENTRATION_THRESHOLD,
};
use dismantle::fragment::{
    exact_max_forest, exact_max_induced, fragment_forest, greedy_fragment, theorem_pipeline,
    FragmentError, FragmentationResult, DEFAULT_EXACT_LIMIT,
};
use dismantle::generators::{gnp, path, random_regular, random_tree, GeneratorError};
use dismantle::io::{read_edge_list, write_edge_list, EdgeListError};
use dismantle::{Execution, Seed};

/// Fragmenting sparse random graphs into small components or forests.
#[derive(Parser)]
#[command(name = "dismantle", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random or deterministic graph as an edge list.
    Gen(GenArgs),
    /// Remove vertices until every component is small.
    Fragment(FragmentArgs),
    /// Exact N(G, C_k) or N(G, F) for graphs with at most 20 vertices.
    Exact(ExactArgs),
    /// Monte Carlo estimate of the fragmentation curve, written as CSV.
    Curve(CurveArgs),
    /// List connected sets spanning more than (1 + eps/3)|T| edges.
    VerifyClaim(VerifyArgs),
    /// Admissible δ for (c, eps) and the tail bound sweep.
    Delta(DeltaArgs),
    /// Cut a greedy set with components up to δn down to ceil(3/eps).
    Demo(DemoArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenModel {
    Gnp,
    Regular,
    Tree,
    Path,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: GenModel,
    #[arg(long)]
    n: usize,
    /// Mean degree for gnp.
    #[arg(long)]
    c: Option<f64>,
    /// Degree for regular.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum FragmentMethod {
    Greedy,
    /// Input must be a forest.
    Forest,
    /// Greedy at --cap, then cut to ceil(3/eps).
    Pipeline,
}

#[derive(Args)]
struct FragmentArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    cap: usize,
    #[arg(long, value_enum, default_value = "greedy")]
    method: FragmentMethod,
    /// Required by the pipeline method.
    #[arg(long)]
    eps: Option<f64>,
    /// File for the removed vertex ids; printed when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, conflicts_with = "forest", required_unless_present = "forest")]
    k: Option<usize>,
    #[arg(long)]
    forest: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveModel {
    Gnp,
    Regular,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveMethodArg {
    Exact,
    Greedy,
    ForestPipeline,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long, value_enum)]
    model: CurveModel,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n: usize,
    /// `k:1,2,4` for absolute caps or `x:0.01,0.1` for fractions of n.
    #[arg(long, value_parser = parse_grid)]
    grid: Grid,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "greedy")]
    method: CurveMethodArg,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    jobs: Jobs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    tmax: usize,
    #[command(flatten)]
    jobs: Jobs,
}

#[derive(Args)]
struct DeltaArgs {
    #[arg(long)]
    c: f64,
    #[arg(long)]
    eps: f64,
    /// Graph size for the sweep.
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long)]
    c: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use this cap instead of max(1, floor(δn)) for the greedy set.
    #[arg(long)]
    large_cap: Option<usize>,
    #[command(flatten)]
    jobs: Jobs,
}

#[derive(Args)]
struct Jobs {
    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

impl Jobs {
    fn execution(&self) -> Execution {
        Execution::from_jobs(self.jobs)
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let (kind, values) = s
        .split_once(':')
        .ok_or_else(|| "expected `k:<caps>` or `x:<fractions>`".to_string())?;
    let items = values.split(',').map(str::trim);
    match kind {
        "k" => items
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|e| format!("bad cap `{v}`: {e}"))
            })
            .collect::<Result<_, _>>()
            .map(Grid::K),
        "x" => items
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|e| format!("bad fraction `{v}`: {e}"))
            })
            .collect::<Result<_, _>>()
            .map(Grid::X),
        other => Err(format!("unknown grid kind `{other}`")),
    }
}

/// Exit code and message for a failed run.
struct Failure {
    code: u8,
    message: String,
}

const INVALID_ARGS: u8 = 1;
const INFEASIBLE: u8 = 2;
const IO_OR_FORMAT: u8 = 3;

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<EdgeListError> for Failure {
    fn from(e: EdgeListError) -> Self {
        Failure::new(IO_OR_FORMAT, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(IO_OR_FORMAT, e.to_string())
    }
}

impl From<GeneratorError> for Failure {
    fn from(e: GeneratorError) -> Self {
        Failure::new(INFEASIBLE, e.to_string())
    }
}

impl From<FragmentError> for Failure {
    fn from(e: FragmentError) -> Self {
        let code = match e {
            FragmentError::InvalidCap | FragmentError::InvalidEps(_) => INVALID_ARGS,
            _ => INFEASIBLE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        let code = match e {
            AnalysisError::InvalidEps(_)
            | AnalysisError::InvalidTmax
            | AnalysisError::NonPositiveMeanDegree(_) => INVALID_ARGS,
            _ => INFEASIBLE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Generator(e) => e.into(),
            ExperimentError::Fragment(e) => e.into(),
            ExperimentError::Analysis(e) => e.into(),
            ExperimentError::Io(_) | ExperimentError::Schema { .. } => {
                Failure::new(IO_OR_FORMAT, e.to_string())
            }
            ExperimentError::InvalidConfig(_) => Failure::new(INVALID_ARGS, e.to_string()),
            ExperimentError::TooFewReplicates(_) => Failure::new(INFEASIBLE, e.to_string()),
        }
    }
}

fn required<T>(value: Option<T>, flag: &str, model: &str) -> Result<T, Failure> {
    value.ok_or_else(|| {
        Failure::new(
            INVALID_ARGS,
            format!("--{flag} is required for the {model} model"),
        )
    })
}

fn summary(r: &FragmentationResult) -> String {
    format!("nu={} max_component={}", r.nu, r.max_component)
}

fn gen(args: GenArgs) -> Result<(), Failure> {
    let seed = Seed::new(args.seed);
    let g = match args.model {
        GenModel::Gnp => gnp(args.n, required(args.c, "c", "gnp")?, seed)?,
        GenModel::Regular => random_regular(args.n, required(args.d, "d", "regular")?, seed)?,
        GenModel::Tree => random_tree(args.n, seed)?,
        GenModel::Path => path(args.n),
    };
    write_edge_list(&g, &args.out)?;
    println!("n={} m={}", g.n(), g.m());
    Ok(())
}

fn fragment(args: FragmentArgs) -> Result<(), Failure> {
    let g = read_edge_list(&args.input)?;
    let result = match args.method {
        FragmentMethod::Greedy => greedy_fragment(&g, args.cap)?,
        FragmentMethod::Forest => fragment_forest(&g, args.cap)?,
        FragmentMethod::Pipeline => {
            let eps = args.eps.ok_or_else(|| {
                Failure::new(INVALID_ARGS, "--eps is required for the pipeline method")
            })?;
            let s = greedy_fragment(&g, args.cap)?;
            let out = theorem_pipeline(&g, &s.kept, eps)?;
            println!(
                "large: {} density_ok={} removed_from_s={} budget={}",
                summary(&s),
                out.density_ok,
                out.removed_from_s(),
                out.budget
            );
            out.result
        }
    };
    let removed = result.removed.to_vec();
    match &args.out {
        Some(path) => {
            let mut text = String::new();
            for v in &removed {
                writeln!(text, "{v}").unwrap();
            }
            fs::write(path, text)?;
        }
        None => println!(
            "removed={}",
            removed
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        ),
    }
    println!("{}", summary(&result));
    Ok(())
}

fn exact(args: ExactArgs) -> Result<(), Failure> {
    let g = read_edge_list(&args.input)?;
    let result = match args.k {
        Some(k) => exact_max_induced(&g, k, DEFAULT_EXACT_LIMIT)?,
        None => exact_max_forest(&g, DEFAULT_EXACT_LIMIT)?,
    };
    println!("N={}", result.kept.len());
    println!(
        "kept={}",
        result
            .kept
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    Ok(())
}

fn curve(args: CurveArgs) -> Result<(), Failure> {
    let model = match args.model {
        CurveModel::Gnp => Model::Binomial {
            c: required(args.c, "c", "gnp")?,
        },
        CurveModel::Regular => Model::Regular {
            d: required(args.d, "d", "regular")?,
        },
    };
    let method = match args.method {
        CurveMethodArg::Exact => CurveMethod::Exact,
        CurveMethodArg::Greedy => CurveMethod::Greedy,
        CurveMethodArg::ForestPipeline => CurveMethod::ForestPipeline,
    };
    let cfg = ExperimentConfig {
        model,
        n: args.n,
        replicates: args.reps,
        seed: args.seed,
        method,
        grid: args.grid,
    };
    let est = estimate_curve(&cfg, args.jobs.execution())?;
    save_results(&est, &args.out)?;
    println!(
        "heuristic lower-bound estimates ({} method, {} replicates)",
        method.tag(),
        cfg.replicates
    );
    let spread = if cfg.replicates >= 2 {
        Some(concentration_report(&est, DEFAULT_CONCENTRATION_THRESHOLD)?)
    } else {
        None
    };
    for (i, p) in est.points.iter().enumerate() {
        let flag = match &spread {
            Some(rep) if rep[i].flagged => " spread_flagged",
            _ => "",
        };
        println!(
            "grid={} cap={} mean={:.6} stddev={:.6}{flag}",
            p.grid_value, p.cap, p.mean, p.stddev
        );
    }
    let slopes = empirical_slopes(&est);
    if !slopes.is_empty() {
        println!(
            "slopes={}",
            slopes
                .iter()
                .map(|s| format!("{s:.6}"))
                .collect::<Vec<_>>()
                .join(",")
        );
    }
    if let Grid::X(_) = cfg.grid {
        let inverse = MonotoneCurve::from_estimate(&est)?;
        let fmt = |z: f64| {
            inverse
                .inverse(z)
                .map_or("none".to_string(), |x| format!("{x:.6}"))
        };
        println!(
            "inverse nu=0.5:{} nu=0.75:{} nu=0.9:{}",
            fmt(0.5),
            fmt(0.75),
            fmt(0.9)
        );
    }
    Ok(())
}

fn verify_claim(args: VerifyArgs) -> Result<(), Failure> {
    let g = read_edge_list(&args.input)?;
    let report = density_claim_check(
        &g,
        args.tmax,
        args.eps,
        DEFAULT_ENUMERATION_BUDGET,
        args.jobs.execution(),
    )?;
    for (set, edges) in &report.violations {
        println!(
            "violation size={} edges={} vertices={}",
            set.len(),
            edges,
            set.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
    println!(
        "violations={} sets_examined={}",
        report.violations.len(),
        report.sets_examined
    );
    Ok(())
}

fn delta(args: DeltaArgs) -> Result<(), Failure> {
    let d = delta_for(args.c, args.eps)?;
    println!(
        "delta=2^-{} ({:e}) ln_tau={:.4}",
        d.halvings, d.value, d.ln_tau
    );
    let limit = (d.value * args.n as f64).floor() as usize;
    println!("n={} floor(delta*n)={limit}", args.n);
    let mut t = 2;
    while t <= args.n / 2 {
        match p_t_bound(t, args.n, args.c, args.eps) {
            Ok(b) => println!(
                "t={t} tau={:.4e} log_bound={:.4} bound={:.4e}",
                b.tau, b.log_bound, b.bound
            ),
            Err(e) => println!("t={t} {e}"),
        }
        t *= 4;
    }
    println!("sum={:e}", p_t_sum(args.n, args.c, args.eps, d.value)?);
    Ok(())
}

fn demo(args: DemoArgs) -> Result<(), Failure> {
    let cfg = DemoConfig {
        c: args.c,
        eps: args.eps,
        n: args.n,
        replicates: args.reps,
        seed: args.seed,
        large_cap: args.large_cap,
    };
    let report = run_demo(&cfg, args.jobs.execution())?;
    println!(
        "delta={:e} large_cap={} small_cap={}",
        report.delta, report.large_cap, report.small_cap
    );
    for r in &report.rows {
        println!(
            "replicate={} nu_large={:.6} nu_small={:.6} gap={:.6} density_ok={} components={} pass={}",
            r.replicate, r.nu_large, r.nu_small, r.gap, r.density_ok, r.components_large, r.passed
        );
    }
    println!("pass_fraction={}", report.pass_fraction());
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Fragment(a) => fragment(a),
        Command::Exact(a) => exact(a),
        Command::Curve(a) => curve(a),
        Command::VerifyClaim(a) => verify_claim(a),
        Command::Delta(a) => delta(a),
        Command::Demo(a) => demo(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(INVALID_ARGS)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
