//! `dks` — experiment runner for the densest k-subgraph solvers.
//!
//! Three subcommands: `solve` runs q-RCC1/q-RCC2 on a loaded or generated
//! instance and writes CSV or JSON reports; `oracle` solves small instances
//! exactly; `sweep` runs a (q, iters) grid and writes one CSV row per cell.
//!
//! Exit codes: 0 success, 2 invalid flags / infeasible parameters / parse
//! errors, 3 oracle guard exceeded, 1 unexpected failures.

mod report;

use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dks_core::graph::{generate, load_edge_list, load_matrix, GeneratorSpec, Graph, LoadedGraph};
use dks_core::oracle::{exhaustive_dks, OracleError};
use dks_core::solver::{run, Algorithm, InitKind, RunReport, SolverConfig, SolverError};
use dks_core::subproblem::WeightMode;

use report::{
    aggregate, write_json, write_solve_csv, write_sweep_csv, InstanceMeta, JsonDoc, JsonRun,
    SolveRow, SweepRow,
};

#[derive(Parser)]
#[command(
    name = "dks",
    version,
    about = "Densest k-subgraph heuristics: q-random coordinate constrained descent"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one instance, repeating with derived seeds, and write a report
    Solve(SolveArgs),
    /// Exhaustively solve a small instance (guarded at 1e8 subsets)
    Oracle(OracleArgs),
    /// Run a (q, iters) grid on one instance and write a CSV table
    Sweep(SweepArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Edge-list file (lines "u v"; '#'/'%' comments; optional "n m" header)
    #[arg(long, conflicts_with = "generate")]
    input: Option<PathBuf>,
    /// Treat --input as an "n d"-header 0/1 adjacency-matrix file
    #[arg(long, requires = "input")]
    matrix: bool,
    /// Generate an instance instead of loading one
    #[arg(long, value_enum)]
    generate: Option<GenArg>,
    /// Vertex count for --generate
    #[arg(long, requires = "generate")]
    n: Option<usize>,
    /// Edge probability in (0,1] for --generate
    #[arg(long, requires = "generate")]
    p: Option<f64>,
    /// Planted clique size (only for --generate planted)
    #[arg(long)]
    planted_k: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenArg {
    Erdos,
    Planted,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Rcc1,
    Rcc2,
}

impl From<AlgArg> for Algorithm {
    fn from(a: AlgArg) -> Self {
        match a {
            AlgArg::Rcc1 => Algorithm::Rcc1,
            AlgArg::Rcc2 => Algorithm::Rcc2,
        }
    }
}

impl fmt::Display for AlgArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgArg::Rcc1 => write!(f, "rcc1"),
            AlgArg::Rcc2 => write!(f, "rcc2"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    /// Random feasible point up to 8192 vertices, uniform k/n above
    Auto,
    Random,
    Uniform,
}

impl fmt::Display for InitArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitArg::Auto => write!(f, "auto"),
            InitArg::Random => write!(f, "random"),
            InitArg::Uniform => write!(f, "uniform"),
        }
    }
}

impl From<InitArg> for InitKind {
    fn from(a: InitArg) -> Self {
        match a {
            InitArg::Auto => InitKind::Auto,
            InitArg::Random => InitKind::RandomSimplex,
            InitArg::Uniform => InitKind::UniformKOverN,
        }
    }
}

/// Proximal-weight flag: degree | sqrt | const:V
#[derive(Clone, Copy, Debug)]
struct WeightArg(WeightMode<f64>);

impl fmt::Display for WeightArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            WeightMode::Degree => write!(f, "degree"),
            WeightMode::SqrtDegree => write!(f, "sqrt"),
            WeightMode::Constant(v) => write!(f, "const:{v}"),
        }
    }
}

impl FromStr for WeightArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "degree" => Ok(WeightArg(WeightMode::Degree)),
            "sqrt" => Ok(WeightArg(WeightMode::SqrtDegree)),
            other => {
                if let Some(v) = other.strip_prefix("const:") {
                    let v: f64 = v
                        .parse()
                        .map_err(|_| format!("bad constant weight {v:?}"))?;
                    if v <= 0.0 {
                        return Err("constant weight must be positive".into());
                    }
                    Ok(WeightArg(WeightMode::Constant(v)))
                } else {
                    Err(format!(
                        "unknown weight mode {other:?}; use degree, sqrt, or const:V"
                    ))
                }
            }
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutArg {
    Csv,
    Json,
}

#[derive(Args)]
struct SolverFlags {
    /// Target subgraph size (3 ≤ k ≤ n−2)
    #[arg(long)]
    k: usize,
    /// Algorithm: rcc1 (quadratic subproblem) or rcc2 (linear subproblem)
    #[arg(long, value_enum, default_value_t = AlgArg::Rcc2)]
    alg: AlgArg,
    /// Restart budget (stops early on a clique certificate)
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = InitArg::Auto)]
    init: InitArg,
    /// Proximal weights for rcc1: degree | sqrt | const:V
    #[arg(long, default_value = "degree")]
    weights: WeightArg,
    /// Integrality detection tolerance
    #[arg(long, default_value_t = 1e-6)]
    int_tol: f64,
    /// Stall tolerance on consecutive objective values (rcc1 only)
    #[arg(long, default_value_t = 1e-7)]
    obj_tol: f64,
}

impl SolverFlags {
    fn config(&self, q: usize, iters: usize, seed: u64) -> SolverConfig<f64> {
        let mut cfg = SolverConfig::new(self.alg.into(), self.k, q);
        cfg.max_iters = iters;
        cfg.max_restarts = self.restarts;
        cfg.seed = seed;
        cfg.init = self.init.into();
        cfg.weight_mode = self.weights.0;
        cfg.int_tol = self.int_tol;
        cfg.obj_tol = self.obj_tol;
        cfg
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    solver: SolverFlags,
    /// Coordinates updated per iteration; 10–20% of n is a good heuristic
    #[arg(long)]
    q: usize,
    /// Iteration budget per restart
    #[arg(long, default_value_t = 1000)]
    iters: usize,
    /// Repetitions; repetition i runs with seed + i
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, value_enum, default_value_t = OutArg::Csv)]
    out: OutArg,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out_path: Option<PathBuf>,
    /// Report wall times as 0 so reports are byte-reproducible
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Subgraph size to solve exactly
    #[arg(long)]
    k: usize,
    /// Seed for --generate
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    solver: SolverFlags,
    /// Comma-separated q values
    #[arg(long, value_delimiter = ',', required = true)]
    q_list: Vec<usize>,
    /// Comma-separated iteration budgets
    #[arg(long, value_delimiter = ',', required = true)]
    iters_list: Vec<usize>,
    #[arg(long)]
    out_path: Option<PathBuf>,
    /// Report wall times as 0 so reports are byte-reproducible
    #[arg(long)]
    no_timing: bool,
}

/// Errors mapped onto process exit codes.
enum CliError {
    /// Invalid flags, infeasible parameters, unreadable/malformed input: 2.
    Usage(String),
    /// Oracle guard exceeded: 3.
    Guard(String),
    /// Everything else: 1.
    Other(anyhow::Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Other(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Guard(m) => m.clone(),
            CliError::Other(e) => format!("{e:#}"),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Other(e)
    }
}

struct Instance {
    graph: Graph,
    /// Original label of each internal vertex id.
    labels: Vec<u64>,
    name: String,
}

fn acquire(args: &InstanceArgs, seed: u64) -> Result<Instance, CliError> {
    match (&args.input, args.generate) {
        (Some(path), None) => load_file(path, args.matrix),
        (None, Some(kind)) => {
            let n = args
                .n
                .ok_or_else(|| CliError::Usage("--generate requires --n".into()))?;
            let p = args
                .p
                .ok_or_else(|| CliError::Usage("--generate requires --p".into()))?;
            let (spec, name) = match kind {
                GenArg::Erdos => (
                    GeneratorSpec::erdos_renyi(n, p, seed),
                    format!("erdos-n{n}-p{p}-s{seed}"),
                ),
                GenArg::Planted => {
                    let pk = args.planted_k.ok_or_else(|| {
                        CliError::Usage("--generate planted requires --planted-k".into())
                    })?;
                    (
                        GeneratorSpec::planted(n, p, pk, seed),
                        format!("planted-n{n}-p{p}-k{pk}-s{seed}"),
                    )
                }
            };
            let out = generate(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
            let n = out.graph.n();
            Ok(Instance {
                graph: out.graph,
                labels: (0..n as u64).collect(),
                name,
            })
        }
        _ => Err(CliError::Usage(
            "exactly one of --input or --generate is required".into(),
        )),
    }
}

fn load_file(path: &Path, matrix: bool) -> Result<Instance, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let reader = BufReader::new(file);
    let loaded: LoadedGraph = if matrix {
        load_matrix(reader)
    } else {
        load_edge_list(reader)
    }
    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if loaded.weighted_lines_ignored > 0 {
        eprintln!(
            "warning: {} weighted lines in {}; weights ignored (unweighted objective)",
            loaded.weighted_lines_ignored,
            path.display()
        );
    }
    Ok(Instance {
        graph: loaded.graph,
        labels: loaded.labels,
        name: path.display().to_string(),
    })
}

fn best_restart_termination(report: &RunReport<f64>) -> String {
    report
        .best_restart
        .and_then(|i| report.termination.get(i))
        .or_else(|| report.termination.last())
        .map(|t| t.to_string())
        .unwrap_or_else(|| "max_iters".into())
}

fn open_sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| {
                CliError::Other(anyhow::anyhow!("cannot write {}: {e}", p.display()))
            })?;
            Ok(Box::new(f))
        }
        None => Ok(Box::new(io::stdout())),
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<(), CliError> {
    if args.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let instance = acquire(&args.instance, args.solver.seed)?;
    // surface parameter problems before any run
    args.solver
        .config(args.q, args.iters, args.solver.seed)
        .validate(&instance.graph)?;

    let mut rows = Vec::with_capacity(args.reps);
    let mut json_runs = Vec::with_capacity(args.reps);
    for rep in 0..args.reps {
        let seed = args.solver.seed.wrapping_add(rep as u64);
        let cfg = args.solver.config(args.q, args.iters, seed);
        let report = run(&instance.graph, &cfg)?;
        let time_s = if args.no_timing {
            0.0
        } else {
            report.wall_time_seconds
        };
        let row = SolveRow {
            instance: instance.name.clone(),
            n: instance.graph.n(),
            m: instance.graph.m(),
            k: cfg.k,
            alg: args.solver.alg.to_string(),
            q: cfg.q,
            iters: cfg.max_iters,
            restarts: cfg.max_restarts,
            seed,
            bound: report.best_bound,
            integer_value: report.best_integer_value,
            certified: report.is_clique_certified,
            time_s,
            termination: best_restart_termination(&report),
        };
        json_runs.push(JsonRun {
            row: row.clone(),
            init: args.solver.init.to_string(),
            weights: args.solver.weights.to_string(),
            int_tol: args.solver.int_tol,
            obj_tol: args.solver.obj_tol,
            restarts_used: report.restarts_used,
            iterations_total: report.iterations_total,
            terminations: report.termination.iter().map(|t| t.to_string()).collect(),
            vertex_set: report
                .best_vertex_set
                .as_ref()
                .map(|s| s.iter().map(|&v| instance.labels[v as usize]).collect()),
        });
        rows.push(row);
    }

    let sink = open_sink(&args.out_path)?;
    match args.out {
        OutArg::Csv => write_solve_csv(sink, &rows)?,
        OutArg::Json => {
            let doc = JsonDoc {
                instance: InstanceMeta {
                    name: instance.name.clone(),
                    n: instance.graph.n(),
                    m: instance.graph.m(),
                },
                summary: aggregate(&rows),
                runs: json_runs,
            };
            write_json(sink, &doc)?;
        }
    }
    Ok(())
}

fn cmd_oracle(args: &OracleArgs) -> Result<(), CliError> {
    let instance = acquire(&args.instance, args.seed)?;
    let result = exhaustive_dks(&instance.graph, args.k).map_err(|e| match e {
        OracleError::GuardExceeded { .. } => CliError::Guard(e.to_string()),
        OracleError::KTooLarge { .. } => CliError::Usage(e.to_string()),
    })?;
    println!(
        "optimum {} objective {}",
        result.optimum,
        2 * result.optimum
    );
    let labels: Vec<String> = result
        .argmax_set
        .iter()
        .map(|&v| instance.labels[v as usize].to_string())
        .collect();
    println!("set {}", labels.join(" "));
    println!("subsets_examined {}", result.subsets_examined);
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    if args.q_list.is_empty() || args.iters_list.is_empty() {
        return Err(CliError::Usage(
            "--q-list and --iters-list must be nonempty".into(),
        ));
    }
    let instance = acquire(&args.instance, args.solver.seed)?;
    let mut rows = Vec::with_capacity(args.q_list.len() * args.iters_list.len());
    for &q in &args.q_list {
        for &iters in &args.iters_list {
            let cfg = args.solver.config(q, iters, args.solver.seed);
            cfg.validate(&instance.graph)?;
            let report = run(&instance.graph, &cfg)?;
            rows.push(SweepRow {
                q,
                iters,
                bound: report.best_bound,
                integer_value: report.best_integer_value,
                wall_time_s: if args.no_timing {
                    0.0
                } else {
                    report.wall_time_seconds
                },
                termination: best_restart_termination(&report),
            });
        }
    }
    write_sweep_csv(open_sink(&args.out_path)?, &rows)?;
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Solve(args) => cmd_solve(args),
        Cmd::Oracle(args) => cmd_oracle(args),
        Cmd::Sweep(args) => cmd_sweep(args),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message());
        std::process::exit(e.code());
    }
}
