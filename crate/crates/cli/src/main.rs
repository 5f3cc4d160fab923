use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lassospec::bounds::{
    classify_spectrum, lower_bound, max_mult_kp, max_mult_upper, upper_bound, BoundsError,
    BoundsProfile,
};
use lassospec::graph::{
    graph_profile, is_lasso_tree, parse_graph, serialize_graph, GraphError, MetricGraph,
};
use lassospec::json::to_canonical_string;
use lassospec::solver::{
    eigenvalue_under_scaling, entry_at, find_spectrum, spectrum_to_index, SolverError,
    SolverOptions, Spectrum,
};
use lassospec::surgery::{
    attach_loop, construct_lasso_tree, join_at_dirichlet, verify_prediction, JoinItem,
    SurgeryError, SurgeryResult,
};

/// Laplacian spectra, eigenvalue bounds and sharp-eigenvalue constructions
/// for metric graphs.
#[derive(Parser, Debug)]
#[command(name = "lassospec", version)]
struct Cli {
    /// Worker threads for the spectral scan (0 = all cores).
    #[arg(long, global = true, env = "LASSOSPEC_THREADS")]
    threads: Option<usize>,
    /// Output path. construct, join and attach-loop write the resulting graph
    /// there; other commands write their report.
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Largest spectral parameter k; eigenvalues up to k² are reported.
    #[arg(long, conflicts_with = "count")]
    k_max: Option<f64>,
    /// Compute at least this many eigenvalues (default 20).
    #[arg(long)]
    count: Option<usize>,
    /// Scan grid spacing in k (default π / (20 L)).
    #[arg(long)]
    grid_step: Option<f64>,
    /// Relative singular-value threshold for numerical nullity.
    #[arg(long, default_value_t = 1e-7)]
    rank_tol: f64,
}

#[derive(Args, Debug)]
struct SolverArgs {
    #[arg(long)]
    grid_step: Option<f64>,
    #[arg(long, default_value_t = 1e-7)]
    rank_tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Betti number, pendant counts, multiplicity ceilings and lasso-tree test.
    Analyze { graph: PathBuf },
    /// Eigenvalues with multiplicities and index ranges.
    Spectrum {
        graph: PathBuf,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Each computed eigenvalue next to its lower and upper estimate.
    Bounds {
        graph: PathBuf,
        #[command(flatten)]
        scan: ScanArgs,
        /// Relative tolerance for equality with an estimate.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Sharpness classification of the computed eigenvalues.
    Classify {
        graph: PathBuf,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Lasso tree with N Neumann pendants, D Dirichlet pendants and B loops.
    Construct {
        #[arg(long)]
        neumann: usize,
        #[arg(long)]
        dirichlet: usize,
        #[arg(long)]
        beta: usize,
        /// Number of predicted sharp eigenvalues to list.
        #[arg(long, default_value_t = 3)]
        terms: usize,
    },
    /// Glue graphs at one Dirichlet vertex each; all must have eigenvalue λ.
    Join {
        #[arg(num_args = 2.., required = true)]
        graphs: Vec<PathBuf>,
        /// Dirichlet vertex to glue, one per graph in order.
        #[arg(long = "vertex", required = true)]
        vertices: Vec<String>,
        #[arg(long)]
        lambda: f64,
        /// Check the prediction against the solver (exit 1 on mismatch).
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Attach a loop of length 2hπ/√λ at a Neumann pendant.
    AttachLoop {
        graph: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 1)]
        harmonic: usize,
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Scale one edge and check the eigenvalue sandwich.
    Perturb {
        graph: PathBuf,
        #[arg(long)]
        edge: String,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        index: usize,
        /// Relative slack for the inequalities.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Graph(PathBuf, GraphError),
    Solver(SolverError),
    Bounds(BoundsError),
    Surgery(SurgeryError),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Graph(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Solver(e) => write!(f, "{e}"),
            CliError::Bounds(e) => write!(f, "{e}"),
            CliError::Surgery(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(..) | CliError::Graph(..) | CliError::Surgery(_) => 2,
            CliError::Solver(SolverError::Graph(_)) => 2,
            CliError::Solver(_) => 3,
            CliError::Bounds(BoundsError::Exceptional) => 4,
            CliError::Bounds(_) => 2,
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        CliError::Solver(e)
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        CliError::Bounds(e)
    }
}

impl From<SurgeryError> for CliError {
    fn from(e: SurgeryError) -> Self {
        CliError::Surgery(e)
    }
}

fn read_graph(path: &Path) -> Result<MetricGraph, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    parse_graph(&text).map_err(|e| CliError::Graph(path.to_path_buf(), e))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn solver_options(grid_step: Option<f64>, rank_tol: f64) -> Result<SolverOptions, CliError> {
    if grid_step.is_some_and(|h| h.is_nan() || h <= 0.0) {
        return Err(CliError::Usage("--grid-step must be positive".into()));
    }
    if rank_tol.is_nan() || rank_tol <= 0.0 {
        return Err(CliError::Usage("--rank-tol must be positive".into()));
    }
    Ok(SolverOptions {
        grid_step,
        rank_tol,
        ..SolverOptions::default()
    })
}

fn compute_spectrum(g: &MetricGraph, scan: &ScanArgs) -> Result<Spectrum, CliError> {
    let opts = solver_options(scan.grid_step, scan.rank_tol)?;
    Ok(match scan.k_max {
        Some(k) => find_spectrum(g, k, &opts)?,
        None => spectrum_to_index(g, scan.count.unwrap_or(20), &opts)?,
    })
}

fn spectrum_csv(s: &Spectrum) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["first_index", "lambda", "multiplicity"])
        .expect("in-memory write");
    for e in &s.entries {
        w.write_record([
            e.first_index.to_string(),
            format!("{:.16e}", e.lambda),
            e.multiplicity.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv emits UTF-8")
}

struct Report {
    body: String,
    /// Graph file to write to `-o` instead of the body.
    graph: Option<String>,
    code: u8,
}

impl Report {
    fn json(v: &Value, code: u8) -> Self {
        Report {
            body: to_canonical_string(v) + "\n",
            graph: None,
            code,
        }
    }
}

fn surgery_report(
    r: &SurgeryResult,
    verify: Option<(f64, SolverOptions)>,
) -> Result<Report, CliError> {
    let mut v = r.to_value();
    let mut code = 0;
    if let Some((tol, opts)) = verify {
        let check = verify_prediction(&r.graph, &r.prediction, tol, &opts)?;
        if !check.ok {
            code = 1;
        }
        v["verification"] = json!({
            "lambda": check.observed_lambda,
            "first_index": check.observed_first_index,
            "multiplicity": check.observed_multiplicity,
            "ok": check.ok,
        });
    }
    Ok(Report {
        body: to_canonical_string(&v) + "\n",
        graph: Some(serialize_graph(&r.graph)),
        code,
    })
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Spectrum { .. }) {
        return Err(CliError::Usage(
            "--format csv is only available for spectrum".into(),
        ));
    }
    match &cli.command {
        Command::Analyze { graph } => {
            let g = read_graph(graph)?;
            let p = BoundsProfile::from_graph(&g);
            let gp = graph_profile(&g);
            Ok(Report::json(
                &json!({
                    "betti": gp.betti,
                    "n_dirichlet": gp.n_dirichlet,
                    "n_neumann": gp.n_neumann,
                    "total_length": gp.total_length,
                    "m_U": max_mult_upper(&p).ok(),
                    "m_M": max_mult_kp(&g),
                    "is_lasso_tree": is_lasso_tree(&g),
                    "is_cycle_exceptional": p.is_cycle_exceptional,
                }),
                0,
            ))
        }
        Command::Spectrum { graph, scan } => {
            let g = read_graph(graph)?;
            let s = compute_spectrum(&g, scan)?;
            Ok(match cli.format {
                Format::Json => Report::json(&s.to_value(), 0),
                Format::Csv => Report {
                    body: spectrum_csv(&s),
                    graph: None,
                    code: 0,
                },
            })
        }
        Command::Bounds { graph, scan, tol } | Command::Classify { graph, scan, tol } => {
            let g = read_graph(graph)?;
            let p = BoundsProfile::from_graph(&g);
            if p.is_cycle_exceptional {
                return Err(BoundsError::Exceptional.into());
            }
            let s = compute_spectrum(&g, scan)?;
            let r = classify_spectrum(&s, &p, *tol)?;
            let code = if r.characterization_ok && r.eq4_ok {
                0
            } else {
                1
            };
            let v = if matches!(cli.command, Command::Bounds { .. }) {
                let table: Vec<Value> = s
                    .eigenvalues()
                    .iter()
                    .enumerate()
                    .map(|(i, &lambda)| {
                        let n = i + 1;
                        json!({
                            "n": n,
                            "lambda": lambda,
                            "lower": lower_bound(&p, n).ok(),
                            "upper": upper_bound(&p, n).ok(),
                        })
                    })
                    .collect();
                json!({
                    "profile": {
                        "n_dirichlet": p.n_dirichlet,
                        "n_neumann": p.n_neumann,
                        "betti": p.betti,
                        "total_length": p.total_length,
                    },
                    "m_U": r.max_mult_upper,
                    "table": table,
                    "characterization_ok": r.characterization_ok,
                    "eq4_ok": r.eq4_ok,
                })
            } else {
                r.to_value()
            };
            Ok(Report::json(&v, code))
        }
        Command::Construct {
            neumann,
            dirichlet,
            beta,
            terms,
        } => {
            let c = construct_lasso_tree(*neumann, *dirichlet, *beta)?;
            let mut v = c.to_value(*terms)?;
            let graph = serialize_graph(&c.graph);
            if cli.output.is_some() {
                v.as_object_mut().expect("object").remove("graph");
            }
            Ok(Report {
                body: to_canonical_string(&v) + "\n",
                graph: Some(graph),
                code: 0,
            })
        }
        Command::Join {
            graphs,
            vertices,
            lambda,
            verify,
            tol,
            solver,
        } => {
            if graphs.len() != vertices.len() {
                return Err(CliError::Usage(format!(
                    "{} graphs but {} --vertex values",
                    graphs.len(),
                    vertices.len()
                )));
            }
            let opts = solver_options(solver.grid_step, solver.rank_tol)?;
            let mut items = Vec::with_capacity(graphs.len());
            for (path, v) in graphs.iter().zip(vertices) {
                let g = read_graph(path)?;
                let e = entry_at(&g, *lambda, *tol, &opts)?;
                items.push(JoinItem {
                    graph: g,
                    vertex: v.clone(),
                    lambda: *lambda,
                    n: e.first_index,
                    m: e.multiplicity,
                });
            }
            let r = join_at_dirichlet(&items)?;
            surgery_report(&r, verify.then_some((*tol, opts)))
        }
        Command::AttachLoop {
            graph,
            vertex,
            lambda,
            harmonic,
            verify,
            tol,
            solver,
        } => {
            let g = read_graph(graph)?;
            let opts = solver_options(solver.grid_step, solver.rank_tol)?;
            if lambda.is_nan() || *lambda <= 0.0 {
                return Err(SurgeryError::NonpositiveLambda(*lambda).into());
            }
            let e = entry_at(&g, *lambda, *tol, &opts)?;
            let r = attach_loop(
                &g,
                vertex,
                *lambda,
                *harmonic,
                e.first_index,
                e.multiplicity,
            )?;
            surgery_report(&r, verify.then_some((*tol, opts)))
        }
        Command::Perturb {
            graph,
            edge,
            rho,
            index,
            tol,
            solver,
        } => {
            let g = read_graph(graph)?;
            if rho.is_nan() || *rho <= 0.0 {
                return Err(CliError::Usage("--rho must be positive".into()));
            }
            let opts = solver_options(solver.grid_step, solver.rank_tol)?;
            let r = eigenvalue_under_scaling(&g, edge, *rho, *index, *tol, &opts)?;
            let code = if r.sandwich_ok && r.monotone_ok { 0 } else { 1 };
            Ok(Report::json(&r.to_value(), code))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("lassospec: {e}");
            return ExitCode::from(2);
        }
    }
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("lassospec: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let written = match (&cli.output, &report.graph) {
        (Some(path), Some(graph)) => write_text(path, graph).map(|_| print!("{}", report.body)),
        (Some(path), None) => write_text(path, &report.body),
        (None, _) => {
            print!("{}", report.body);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("lassospec: {e}");
        return ExitCode::from(e.exit_code());
    }
    ExitCode::from(report.code)
}
