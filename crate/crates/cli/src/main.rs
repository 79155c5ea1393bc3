//! Command-line surface for graph-to-chain reduction, local rewrites,
//! condition checks, cube return-walk solving, and walk verification.
//!
//! Exit codes: 0 success; 2 parse or validation failure; 3 unknown node;
//! 4 pattern mismatch; 5 condition violated; 6 cube precondition failure;
//! 7 verification deviation above tolerance.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use walkchain_core::{
    build_cube, check_condition, compare_walks, full_decompose, is_identity_up_to_sign,
    json_to_graph, solve_return_walk, ChainError, ConditionInput, CubeError, EvolveError,
    GraphError, Propagator, RewriteResult, SiteSelector, TransformError, WeightedGraph,
};

#[derive(Parser)]
#[command(
    name = "walkchain",
    version,
    about = "Reduce complex-weighted graphs to linear chains and verify quantum-walk equivalence"
)]
struct Cli {
    /// Relative tolerance for equivalence conditions and verification
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Output file; results print to stdout when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Linearize a graph into one or more chains from a start node
    Reduce {
        /// Graph JSON file
        graph: PathBuf,
        /// Label of the chain's first node
        #[arg(long)]
        start: String,
        /// Termination cutoff (default: 1e-12 times the largest entry)
        #[arg(long)]
        cutoff: Option<f64>,
    },
    /// Apply one named local rewrite at an explicitly selected site
    Transform {
        kind: TransformKind,
        /// Graph JSON file
        graph: PathBuf,
        /// Pattern role assignment, repeated: --map 1=nodeA --map 1'=nodeB ...
        #[arg(long = "map", value_name = "ROLE=LABEL")]
        map: Vec<String>,
        /// Extra diagonal energy on the branch node (three-loop only)
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        e1prime: f64,
        /// Free amplitude `re[,im]` for rhomboid-expand
        #[arg(long, allow_hyphen_values = true)]
        a_choice: Option<String>,
        /// Phase of the second free amplitude for rhomboid-expand
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        arg_d: f64,
    },
    /// Evaluate a named equivalence condition from explicit amplitudes
    Check {
        kind: CheckKind,
        /// Amplitude assignment, repeated: --amp "B'=0.5,-0.2"
        #[arg(long = "amp", value_name = "NAME=RE[,IM]")]
        amp: Vec<String>,
    },
    /// Solve the cube return-walk phase system and verify the gate
    CubeSolve {
        a: f64,
        b: f64,
        c: f64,
        n: u32,
        m: u32,
        /// alpha11,alpha00,beta11,beta00,gamma11,gamma00
        #[arg(long, value_delimiter = ',', num_args = 6, allow_hyphen_values = true)]
        free_phases: Option<Vec<f64>>,
    },
    /// Decompose a graph and compare walk amplitudes against the original
    Verify {
        /// Graph JSON file
        graph: PathBuf,
        /// Label of the walk's start node
        #[arg(long)]
        start: String,
        #[arg(long, default_value_t = 10.0)]
        tmax: f64,
        /// Number of intervals on [0, tmax]; 0 checks only t = 0
        #[arg(long, default_value_t = 63)]
        steps: usize,
    },
    /// Write a transfer-amplitude trace as CSV
    Evolve {
        /// Graph JSON file
        graph: PathBuf,
        #[arg(long)]
        source: String,
        /// Defaults to the source (return amplitude)
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 10.0)]
        tmax: f64,
        /// Number of intervals on [0, tmax]
        #[arg(long, default_value_t = 64)]
        steps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformKind {
    /// Shift a one-segment branch along the chain
    OneBranch,
    /// Reduce an edge-sharing three-segment loop (generates self-loops)
    ThreeLoop,
    /// Fold two adjacent branches into a four-segment loop
    FourloopForward,
    /// Unfold a four-segment loop into two branches (conditional)
    FourloopReverse,
    /// Reduce a rhomboidal insertion to a one-segment branch
    Rhomboid,
    /// Expand a one-segment branch into a rhomboidal square
    RhomboidExpand,
    /// Reduce a six-segment loop or two-segment branch to a four-loop
    SixLoop,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    /// B'/B* = C'/A'* on a four-segment loop (names A', B, B', C')
    Fourloop,
    /// |c2 b|^2 = |a c1|^2 on a two-segment branch (names a, b, c1, c2)
    TwoBranch,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::new(2, e.to_string())
    }
}

impl From<ChainError> for Failure {
    fn from(e: ChainError) -> Self {
        match e {
            ChainError::StartNotInSpace(_) => Failure::new(3, e.to_string()),
            _ => Failure::new(2, e.to_string()),
        }
    }
}

impl From<TransformError> for Failure {
    fn from(e: TransformError) -> Self {
        let code = match &e {
            TransformError::PatternMismatch(_) | TransformError::DegenerateAmplitudes(_) => 4,
            TransformError::ConditionViolated { .. } => 5,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<CubeError> for Failure {
    fn from(e: CubeError) -> Self {
        Failure::new(6, e.to_string())
    }
}

impl From<EvolveError> for Failure {
    fn from(e: EvolveError) -> Self {
        match e {
            EvolveError::UnknownNode(_) => Failure::new(3, e.to_string()),
            EvolveError::DimensionMismatch { .. } => Failure::new(2, e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(Failure::new(2, format!("--tol must be positive, got {}", cli.tol)));
    }
    match cli.command {
        Command::Reduce {
            graph,
            start,
            cutoff,
        } => cmd_reduce(&graph, &start, cutoff, cli.out.as_deref()),
        Command::Transform {
            kind,
            graph,
            map,
            e1prime,
            a_choice,
            arg_d,
        } => cmd_transform(
            kind,
            &graph,
            &map,
            e1prime,
            a_choice.as_deref(),
            arg_d,
            cli.tol,
            cli.out.as_deref(),
        ),
        Command::Check { kind, amp } => cmd_check(kind, &amp, cli.tol),
        Command::CubeSolve {
            a,
            b,
            c,
            n,
            m,
            free_phases,
        } => cmd_cube_solve(a, b, c, n, m, free_phases, cli.out.as_deref()),
        Command::Verify {
            graph,
            start,
            tmax,
            steps,
        } => cmd_verify(&graph, &start, tmax, steps, cli.tol),
        Command::Evolve {
            graph,
            source,
            target,
            tmax,
            steps,
        } => cmd_evolve(
            &graph,
            &source,
            target.as_deref(),
            tmax,
            steps,
            cli.out.as_deref(),
        ),
    }
}

fn load_graph(path: &Path) -> Result<WeightedGraph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", path.display())))?;
    Ok(json_to_graph(&text)?)
}

/// Writes via a temporary sibling and renames, so failures leave no partial
/// file behind. Without a path the payload goes to stdout.
fn emit(out: Option<&Path>, payload: &str) -> Result<(), Failure> {
    let payload = if payload.ends_with('\n') {
        payload.to_owned()
    } else {
        format!("{payload}\n")
    };
    match out {
        None => {
            print!("{payload}");
            Ok(())
        }
        Some(path) => {
            let tmp = path.with_extension("tmp");
            fs::write(&tmp, &payload)
                .map_err(|e| Failure::new(2, format!("cannot write {}: {e}", tmp.display())))?;
            fs::rename(&tmp, path).map_err(|e| {
                Failure::new(2, format!("cannot move into {}: {e}", path.display()))
            })?;
            Ok(())
        }
    }
}

fn fmt_c(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn fmt_reals(xs: &[f64]) -> String {
    let mut s = String::from("[");
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{x}");
    }
    s.push(']');
    s
}

fn cmd_reduce(
    graph: &Path,
    start: &str,
    cutoff: Option<f64>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let g = load_graph(graph)?;
    let d = full_decompose(&g, &start.into(), cutoff)?;
    println!("chains: {}", d.chains.len());
    for (i, chain) in d.chains.iter().enumerate() {
        println!(
            "chain {} (start {}): omega = {}",
            i + 1,
            chain.start_label,
            fmt_reals(&chain.hoppings)
        );
        if chain.diagonals.iter().any(|&x| x.abs() > 1e-12) {
            println!("  diagonals = {}", fmt_reals(&chain.diagonals));
        }
    }
    if d.residual_dim > 0 {
        println!("residual dimension: {}", d.residual_dim);
    }
    emit(out, &walkchain_core::decomposition_to_json(&d))
}

fn parse_map(map: &[String]) -> Result<SiteSelector, Failure> {
    let mut site = SiteSelector::new();
    for entry in map {
        let (role, label) = entry.split_once('=').ok_or_else(|| {
            Failure::new(2, format!("bad --map entry `{entry}`, want ROLE=LABEL"))
        })?;
        site.insert(role.trim(), label.trim());
    }
    Ok(site)
}

fn parse_complex(text: &str) -> Result<Complex64, Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| Failure::new(2, format!("bad number `{s}`: {e}")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err(Failure::new(
            2,
            format!("bad complex `{text}`, want RE or RE,IM"),
        )),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_transform(
    kind: TransformKind,
    graph: &Path,
    map: &[String],
    e1prime: f64,
    a_choice: Option<&str>,
    arg_d: f64,
    tol: f64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let g = load_graph(graph)?;
    let site = parse_map(map)?;
    let result: RewriteResult = match kind {
        TransformKind::OneBranch => walkchain_core::shift_one_segment_branch(&g, &site)?,
        TransformKind::ThreeLoop => walkchain_core::reduce_three_loop(&g, &site, e1prime)?,
        TransformKind::FourloopForward => walkchain_core::branches_to_fourloop(&g, &site)?,
        TransformKind::FourloopReverse => walkchain_core::fourloop_to_branches(&g, &site, tol)?,
        TransformKind::Rhomboid => walkchain_core::rhomboid_reduce(&g, &site)?,
        TransformKind::RhomboidExpand => {
            let pick = parse_complex(
                a_choice
                    .ok_or_else(|| Failure::new(2, "rhomboid-expand needs --a-choice RE[,IM]"))?,
            )?;
            walkchain_core::rhomboid_expand(&g, &site, pick, arg_d)?
        }
        TransformKind::SixLoop => walkchain_core::sixloop_reduce(&g, &site)?,
    };
    for (symbol, value) in &result.report {
        println!("{symbol} = {}", fmt_c(*value));
    }
    emit(out, &walkchain_core::graph_to_json(&result.graph))
}

fn cmd_check(kind: CheckKind, amp: &[String], tol: f64) -> Result<(), Failure> {
    let mut values = std::collections::BTreeMap::new();
    for entry in amp {
        let (name, value) = entry.split_once('=').ok_or_else(|| {
            Failure::new(2, format!("bad --amp entry `{entry}`, want NAME=RE[,IM]"))
        })?;
        values.insert(name.trim().to_owned(), parse_complex(value)?);
    }
    let mut take = |name: &str| {
        values
            .remove(name)
            .ok_or_else(|| Failure::new(2, format!("missing amplitude `{name}`")))
    };
    let input = match kind {
        CheckKind::Fourloop => ConditionInput::FourLoop {
            a_prime: take("A'")?,
            b: take("B")?,
            b_prime: take("B'")?,
            c_prime: take("C'")?,
        },
        CheckKind::TwoBranch => ConditionInput::TwoBranch {
            a: take("a")?,
            b: take("b")?,
            c1: take("c1")?,
            c2: take("c2")?,
        },
    };
    if let Some(extra) = values.keys().next() {
        return Err(Failure::new(2, format!("unexpected amplitude `{extra}`")));
    }
    let report = check_condition(&input, tol)?;
    println!("lhs = {}", fmt_c(report.lhs));
    println!("rhs = {}", fmt_c(report.rhs));
    println!("residual = {} (scale {})", report.residual, report.scale);
    if report.holds {
        println!("condition holds at tol {tol}");
        Ok(())
    } else {
        Err(Failure::new(
            5,
            format!(
                "condition violated: residual {} exceeds {tol} x scale {}",
                report.residual, report.scale
            ),
        ))
    }
}

fn cmd_cube_solve(
    a: f64,
    b: f64,
    c: f64,
    n: u32,
    m: u32,
    free_phases: Option<Vec<f64>>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let free: [f64; 6] = match free_phases {
        None => [0.0; 6],
        Some(v) => v
            .try_into()
            .map_err(|_| Failure::new(2, "--free-phases needs exactly six values"))?,
    };
    let sol = solve_return_walk(a, b, c, n, m, free)?;
    println!("omega       = {}", fmt_reals(&sol.omega));
    println!("omega_prime = {}", fmt_reals(&sol.omega_prime));
    let check = walkchain_core::check_split_conditions(&sol.amps, 1e-10);
    println!(
        "split residuals = {:e}, {:e}",
        check.cond1_residual, check.cond2_residual
    );
    let g = build_cube(&sol.amps);
    let u = Propagator::new(&g).at(std::f64::consts::PI);
    let (ok, sign) = is_identity_up_to_sign(&u, 1e-8);
    let verdict = match (ok, sign) {
        (true, 1) => "+identity",
        (true, -1) => "-identity",
        _ => "neither",
    };
    println!(
        "gate at t = pi: {verdict} (max deviation {:e})",
        walkchain_core::deviation_from_signed_identity(&u, sign)
    );
    if !ok {
        return Err(Failure::new(6, "gate check failed: U(pi) is not ±identity"));
    }
    emit(out, &sol.to_json())
}


fn sample_times(tmax: f64, steps: usize) -> Vec<f64> {
    if steps == 0 {
        return vec![0.0];
    }
    (0..=steps)
        .map(|i| tmax * i as f64 / steps as f64)
        .collect()
}

fn cmd_verify(graph: &Path, start: &str, tmax: f64, steps: usize, tol: f64) -> Result<(), Failure> {
    let g = load_graph(graph)?;
    let d = full_decompose(&g, &start.into(), None)?;
    let mut times = sample_times(tmax, steps);
    if steps > 0 {
        times.push(std::f64::consts::PI);
    }
    let cmp = compare_walks(&g, &d, &times, tol)?;
    println!(
        "chains: {}, compared nodes: {}, max deviation = {:e}",
        d.chains.len(),
        cmp.per_node.len(),
        cmp.max_deviation
    );
    if cmp.pass {
        println!("walks agree at tol {tol}");
        Ok(())
    } else {
        Err(Failure::new(
            7,
            format!("walk deviation {:e} exceeds {tol}", cmp.max_deviation),
        ))
    }
}

fn cmd_evolve(
    graph: &Path,
    source: &str,
    target: Option<&str>,
    tmax: f64,
    steps: usize,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let g = load_graph(graph)?;
    let target = target.unwrap_or(source);
    let times = sample_times(tmax, steps);
    let trace = walkchain_core::walk_trace(&g, &source.into(), &target.into(), &times)?;
    emit(out, &trace.to_csv())
}
