//! Command-line surface: compute products, verify the counting laws and the
//! equivalence of the two constructions, build subtyping unrollings, and
//! generate seeded random graphs.
//!
//! Exit codes: 0 success, 1 law violation, 2 format or parameter error,
//! 3 precondition violation.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use pcgp::analysis::{
    edge_count_forms, is_isomorphic, random_digraph, transitive_reduction, CountReport,
};
use pcgp::classdecl;
use pcgp::dot;
use pcgp::graph::{Digraph, GraphError, Label};
use pcgp::products;
use pcgp::subtyping::{self, SubtypingError};

const EXIT_LAW_VIOLATION: u8 = 1;
const EXIT_FORMAT: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "pcgp",
    version,
    about = "Partial Cartesian graph products and generic subtyping construction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a product of two graphs
    Product(ProductArgs),
    /// Check the counting laws and the equivalence of the two constructions
    Verify(VerifyArgs),
    /// Construct finite unrollings of a subtyping relation from class declarations
    Subtype(SubtypeArgs),
    /// Generate a seeded random digraph
    Gen(GenArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProductOp {
    /// Partial Cartesian product, constructive view
    Pcgp,
    /// Partial Cartesian product, coalescing view
    Gsp,
    /// Standard Cartesian product (product vertices ignored)
    Cgp,
    /// The rival partial product that keeps all vertex pairs
    Yero,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct ProductArgs {
    /// Which product to compute
    #[arg(long, value_enum)]
    op: ProductOp,
    /// First factor, JSON graph file
    #[arg(long)]
    g1: PathBuf,
    /// Second factor, JSON graph file
    #[arg(long)]
    g2: PathBuf,
    /// Comma-separated product vertices of g1 (empty for none)
    #[arg(long, default_value = "")]
    pv: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Apply transitive reduction before emitting
    #[arg(long)]
    reduce: bool,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// First factor, JSON graph file (required unless --fuzz is given)
    #[arg(long, required_unless_present = "fuzz")]
    g1: Option<PathBuf>,
    /// Second factor, JSON graph file (required unless --fuzz is given)
    #[arg(long, required_unless_present = "fuzz")]
    g2: Option<PathBuf>,
    /// Comma-separated product vertices of g1 (empty for none)
    #[arg(long, default_value = "")]
    pv: String,
    /// Check this many seeded random triples instead of input files
    #[arg(long)]
    fuzz: Option<usize>,
    /// Base seed for --fuzz case generation
    #[arg(long, default_value = "0")]
    seed: u64,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SubtypeArgs {
    /// Class declaration source file (.jdecl)
    #[arg(long)]
    input: PathBuf,
    /// Number of product rounds
    #[arg(long)]
    depth: usize,
    /// Identify `? extends Object` with `?`
    #[arg(long, overrides_with = "no_identify_top")]
    identify_top: bool,
    /// Keep `? extends Object` distinct from `?` (the default)
    #[arg(long, overrides_with = "identify_top")]
    no_identify_top: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Emit the transitive reduction of the final round
    #[arg(long)]
    reduce: bool,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Number of vertices
    #[arg(long)]
    n: usize,
    /// Edge probability in [0, 1]
    #[arg(long)]
    p: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn format(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_FORMAT,
            message: message.into(),
        }
    }

    fn precondition(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_PRECONDITION,
            message: message.into(),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(err: GraphError) -> Self {
        CliError::precondition(err.to_string())
    }
}

impl From<SubtypingError> for CliError {
    fn from(err: SubtypingError) -> Self {
        CliError::precondition(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Product(args) => cmd_product(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Subtype(args) => cmd_subtype(args),
        Command::Gen(args) => cmd_gen(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn load_graph(path: &Path) -> Result<Digraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::format(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::format(format!("{} is not a valid graph: {e}", path.display())))
}

fn parse_pv(pv: &str) -> Result<BTreeSet<Label>, CliError> {
    if pv.is_empty() {
        return Ok(BTreeSet::new());
    }
    let mut labels = BTreeSet::new();
    for token in pv.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(CliError::format(
                "--pv must be a comma-separated list of vertex names".to_string(),
            ));
        }
        labels.insert(Label::atom(token));
    }
    Ok(labels)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::format(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            std::io::stdout()
                .flush()
                .map_err(|e| CliError::format(format!("cannot write to stdout: {e}")))
        }
    }
}

fn render_graph(
    graph: &Digraph,
    format: Format,
    render: impl Fn(&Label) -> String,
) -> Result<String, CliError> {
    match format {
        Format::Dot => Ok(dot::to_dot(graph, render)),
        Format::Json => {
            let mut text = serde_json::to_string_pretty(graph)
                .map_err(|e| CliError::format(format!("serialization failed: {e}")))?;
            text.push('\n');
            Ok(text)
        }
    }
}

fn cmd_product(args: ProductArgs) -> Result<(), CliError> {
    let g1 = load_graph(&args.g1)?;
    let g2 = load_graph(&args.g2)?;
    let pv = parse_pv(&args.pv)?;
    let product = match args.op {
        ProductOp::Pcgp => products::pcgp(&g1, &pv, &g2)?,
        ProductOp::Gsp => products::gsp(&g1, &pv, &g2)?,
        ProductOp::Cgp => g1.cartesian_product(&g2),
        // The rival product takes its factors the other way around; the
        // selected vertices still live in g1.
        ProductOp::Yero => products::yero(&g2, &pv, &g1)?,
    };
    let product = if args.reduce {
        transitive_reduction(&product)?
    } else {
        product
    };
    emit(
        &render_graph(&product, args.format, dot::plain_label)?,
        args.out.as_deref(),
    )
}

/// Law checks for one (g1, pv, g2) triple.
#[derive(Serialize)]
struct CaseReport {
    case: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    pcgp: CountReport,
    edge_forms_agree: bool,
    gsp_isomorphic: bool,
    yero: CountReport,
    /// pv = V1: the partial product must equal the Cartesian product.
    #[serde(skip_serializing_if = "Option::is_none")]
    cartesian_boundary: Option<bool>,
    /// pv empty: the partial product must equal g1 itself.
    #[serde(skip_serializing_if = "Option::is_none")]
    identity_boundary: Option<bool>,
    /// Edgeless non-product subgraph: both partial products have the same
    /// number of edges.
    #[serde(skip_serializing_if = "Option::is_none")]
    discrete_order_equal: Option<bool>,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    total: usize,
    passed: usize,
    all_pass: bool,
    cases: Vec<CaseReport>,
}

fn check_case(
    case: usize,
    seed: Option<u64>,
    g1: &Digraph,
    pv: &BTreeSet<Label>,
    g2: &Digraph,
) -> Result<CaseReport, CliError> {
    let constructed = products::pcgp(g1, pv, g2)?;
    let coalesced = products::gsp(g1, pv, g2)?;
    let rival = products::yero(g2, pv, g1)?;

    let pcgp_counts = CountReport::for_partial_product(g1, pv, g2, &constructed)?;
    let (direct, alternative) = edge_count_forms(g1, pv, g2)?;
    let edge_forms_agree = direct == alternative;
    let gsp_isomorphic = is_isomorphic(&coalesced, &constructed).is_some();
    let yero_counts = CountReport::new(
        g2.vertex_count() * g1.vertex_count(),
        g2.vertex_count() * g1.edge_count() + g2.edge_count() * pv.len(),
        rival.vertex_count(),
        rival.edge_count(),
    );

    let cartesian_boundary = (pv == g1.vertex_set())
        .then(|| constructed == g1.cartesian_product(g2));
    let identity_boundary = pv.is_empty().then(|| constructed == *g1);
    let non_product: BTreeSet<Label> = g1
        .vertices()
        .filter(|v| !pv.contains(*v))
        .cloned()
        .collect();
    let discrete_order_equal = (g1.induced_subgraph(&non_product)?.edge_count() == 0)
        .then(|| constructed.edge_count() == rival.edge_count());

    let pass = pcgp_counts.matches
        && edge_forms_agree
        && gsp_isomorphic
        && yero_counts.matches
        && cartesian_boundary.unwrap_or(true)
        && identity_boundary.unwrap_or(true)
        && discrete_order_equal.unwrap_or(true);

    Ok(CaseReport {
        case,
        seed,
        pcgp: pcgp_counts,
        edge_forms_agree,
        gsp_isomorphic,
        yero: yero_counts,
        cartesian_boundary,
        identity_boundary,
        discrete_order_equal,
        pass,
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let mut cases = Vec::new();
    match args.fuzz {
        Some(count) => {
            for case in 0..count {
                let case_seed = args.seed.wrapping_add(case as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
                let g1 = random_digraph(rng.gen_range(1..=6), 0.4, rng.gen());
                let g2 = random_digraph(rng.gen_range(1..=4), 0.4, rng.gen());
                let pv = g1
                    .vertices()
                    .filter(|_| rng.gen_bool(0.5))
                    .cloned()
                    .collect();
                cases.push(check_case(case, Some(case_seed), &g1, &pv, &g2)?);
            }
        }
        None => {
            let g1 = load_graph(args.g1.as_deref().expect("clap enforces presence"))?;
            let g2 = load_graph(args.g2.as_deref().expect("clap enforces presence"))?;
            let pv = parse_pv(&args.pv)?;
            cases.push(check_case(0, None, &g1, &pv, &g2)?);
        }
    }

    let passed = cases.iter().filter(|c| c.pass).count();
    let report = VerifyReport {
        total: cases.len(),
        passed,
        all_pass: passed == cases.len(),
        cases,
    };
    let mut text = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::format(format!("serialization failed: {e}")))?;
    text.push('\n');
    emit(&text, args.out.as_deref())?;
    if report.all_pass {
        Ok(())
    } else {
        Err(CliError {
            code: EXIT_LAW_VIOLATION,
            message: format!("{} of {} cases failed", report.total - passed, report.total),
        })
    }
}

fn cmd_subtype(args: SubtypeArgs) -> Result<(), CliError> {
    let source = fs::read_to_string(&args.input)
        .map_err(|e| CliError::format(format!("cannot read {}: {e}", args.input.display())))?;
    let table = classdecl::parse(&source).map_err(|e| CliError::format(e.to_string()))?;
    let identify_top = args.identify_top && !args.no_identify_top;
    let result = subtyping::subtyping_iterate(&table, args.depth, identify_top)?;

    for (round, (vertices, edges)) in result.per_iteration_counts.iter().enumerate() {
        eprintln!("round {}: vertices={vertices} edges={edges}", round + 1);
    }

    let graph = if args.reduce {
        transitive_reduction(&result.graph)?
    } else {
        result.graph
    };
    // Re-key the graph by rendered type names for emission.
    let rendered = Digraph::new(
        graph.vertices().map(|v| Label::atom(dot::type_label(v))),
        graph
            .edges()
            .map(|(s, t)| (Label::atom(dot::type_label(s)), Label::atom(dot::type_label(t)))),
    )
    .map_err(|e| CliError::format(format!("rendering failed: {e}")))?;
    emit(
        &render_graph(&rendered, args.format, dot::plain_label)?,
        args.out.as_deref(),
    )
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&args.p) {
        return Err(CliError::format(format!(
            "edge probability must lie in [0, 1], got {}",
            args.p
        )));
    }
    let graph = random_digraph(args.n, args.p, args.seed);
    emit(
        &render_graph(&graph, args.format, dot::plain_label)?,
        args.out.as_deref(),
    )
}
