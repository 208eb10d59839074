use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::LevelFilter;
use serde::Serialize;
use serde_json::{json, Value};
use symbreak::automorphism::{enumerate_automorphisms, small_automorphisms, vertex_orbits, Permutation};
use symbreak::construct::{theorem_edge_colouring, total_colouring};
use symbreak::format::{parse_graph, GraphFormat};
use symbreak::index::{
    exists_breaking_colouring, random_list_assignment, small_distinguishing_index,
    small_list_distinguishing_index_bounds, BoundsOptions, DEFAULT_BUDGET,
};
use symbreak::verify::{
    breaks_all_small, breaks_all_small_rooted, breaks_all_small_rooted_total, breaks_all_small_total,
};
use symbreak::{EdgeColouring, Graph, ListAssignment, TotalColouring, VerifierReport};

const EXIT_INVALID: u8 = 2;
const EXIT_LIMIT: u8 = 3;
const EXIT_REJECTED: u8 = 4;

/// Symmetry-breaking list colourings of small graphs.
#[derive(Parser, Debug)]
#[command(name = "symbreak", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write JSON here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    /// Cap on colourings visited by exhaustive searches.
    #[arg(long, global = true, env = "SYMBREAK_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,

    /// Repeat for more log output on standard error.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every automorphism.
    Autos(GraphArgs),
    /// List the automorphisms moving some vertex to a neighbour.
    SmallAutos(GraphArgs),
    /// Orbits of the stabiliser of a root.
    Orbits {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        root: usize,
    },
    /// Edge colouring from lists of length at least three.
    ColorEdges {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        lists: ListArgs,
    },
    /// Total colouring from lists of length at least two.
    ColorTotal {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        lists: ListArgs,
    },
    /// Check a colouring against every small automorphism.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        coloring: PathBuf,
        /// Only consider automorphisms fixing this vertex.
        #[arg(long)]
        root: Option<usize>,
        /// The colouring also colours vertices.
        #[arg(long)]
        total: bool,
    },
    /// Small distinguishing index and bounds on its list version.
    Index {
        #[command(flatten)]
        graph: GraphArgs,
        /// Enumerate list patterns to tighten the list bounds.
        #[arg(long)]
        adversarial: bool,
        /// Random three-list assignments used to spot-check the upper bound.
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustively search for a breaking colouring from the given lists.
    Oracle {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        lists: ListArgs,
    },
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Skip format detection.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// graph6 or edge-list file; `-` reads standard input.
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Inline graph6 string.
    #[arg(long)]
    g6: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Graph6,
    EdgeList,
}

#[derive(Args, Debug)]
struct ListArgs {
    #[command(flatten)]
    source: ListSource,
    /// Palette size for `--random`.
    #[arg(long, default_value_t = 9, requires = "random")]
    palette: usize,
    /// Seed for `--random`.
    #[arg(long, default_value_t = 0, requires = "random")]
    seed: u64,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ListSource {
    /// JSON list assignment.
    #[arg(long)]
    lists: Option<PathBuf>,
    /// Every list is {1..K}.
    #[arg(long, value_name = "K")]
    uniform: Option<usize>,
    /// Every list is a random K-subset of the palette.
    #[arg(long, value_name = "K")]
    random: Option<usize>,
}

/// Errors carrying their exit code.
enum Failure {
    Core(symbreak::Error),
    Other(anyhow::Error),
    Rejected(Value),
    Internal(String),
}

impl From<symbreak::Error> for Failure {
    fn from(e: symbreak::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<symbreak::Error>() {
            Ok(core) => Failure::Core(core),
            Err(e) => Failure::Other(e),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn read_text(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(args: &GraphArgs) -> anyhow::Result<Graph> {
    let text = match (&args.source.input, &args.source.g6) {
        (Some(path), _) => read_text(path)?,
        (None, Some(g6)) => g6.clone(),
        (None, None) => unreachable!("clap enforces a graph source"),
    };
    let format = args.format.map(|f| match f {
        FormatArg::Graph6 => GraphFormat::Graph6,
        FormatArg::EdgeList => GraphFormat::EdgeList,
    });
    Ok(parse_graph(&text, format)?)
}

fn load_lists(g: &Graph, args: &ListArgs, with_vertices: bool) -> anyhow::Result<ListAssignment> {
    let src = &args.source;
    if let Some(path) = &src.lists {
        return serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing {}", path.display()));
    }
    if let Some(k) = src.uniform {
        return Ok(if with_vertices {
            ListAssignment::uniform_total(g, k)
        } else {
            ListAssignment::uniform_edges(g, k)
        });
    }
    let k = src.random.expect("clap enforces a list source");
    Ok(random_list_assignment(g, k, args.palette, args.seed, with_vertices)?)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialise to JSON")
}

fn with_fields(base: Value, extra: Value) -> Value {
    let (Value::Object(mut a), Value::Object(b)) = (base, extra) else {
        unreachable!("colourings serialise to JSON objects")
    };
    a.extend(b);
    Value::Object(a)
}

fn automorphism_list(perms: Vec<Permutation>) -> Value {
    json!({ "count": perms.len(), "automorphisms": perms })
}

/// Colouring subcommands print only certified output.
fn ensure_verified(report: &VerifierReport) -> Result<(), Failure> {
    match &report.witness {
        None => Ok(()),
        Some(w) => Err(Failure::Internal(format!(
            "constructed colouring is preserved by the small automorphism {:?}",
            w.image()
        ))),
    }
}

fn verify_report(report: VerifierReport) -> Outcome {
    if report.ok {
        Ok(to_value(&report))
    } else {
        Err(Failure::Rejected(to_value(&report)))
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Autos(graph) => Ok(automorphism_list(enumerate_automorphisms(&load_graph(graph)?)?)),
        Command::SmallAutos(graph) => Ok(automorphism_list(small_automorphisms(&load_graph(graph)?)?)),
        Command::Orbits { graph, root } => Ok(to_value(&vertex_orbits(&load_graph(graph)?, *root)?)),
        Command::ColorEdges { graph, lists } => {
            let g = load_graph(graph)?;
            let lists = load_lists(&g, lists, false)?;
            let (c, traces) = theorem_edge_colouring(&g, &lists)?;
            c.check_lists(&lists)?;
            let report = breaks_all_small(&g, &c)?;
            ensure_verified(&report)?;
            Ok(with_fields(
                to_value(&c),
                json!({ "verified": true, "checked_count": report.checked_count, "traces": traces }),
            ))
        }
        Command::ColorTotal { graph, lists } => {
            let g = load_graph(graph)?;
            let lists = load_lists(&g, lists, true)?;
            let c = total_colouring(&g, &lists)?;
            c.check_lists(&lists)?;
            let report = breaks_all_small_total(&g, &c)?;
            ensure_verified(&report)?;
            Ok(with_fields(
                to_value(&c),
                json!({ "verified": true, "checked_count": report.checked_count }),
            ))
        }
        Command::Verify {
            graph,
            coloring,
            root,
            total,
        } => {
            let g = load_graph(graph)?;
            let text = read_text(coloring)?;
            let parse_err = || format!("parsing {}", coloring.display());
            let report = if *total {
                let c: TotalColouring = serde_json::from_str(&text).with_context(parse_err)?;
                match root {
                    Some(r) => breaks_all_small_rooted_total(&g, *r, &c)?,
                    None => breaks_all_small_total(&g, &c)?,
                }
            } else {
                let c: EdgeColouring = serde_json::from_str(&text).with_context(parse_err)?;
                match root {
                    Some(r) => breaks_all_small_rooted(&g, *r, &c)?,
                    None => breaks_all_small(&g, &c)?,
                }
            };
            verify_report(report)
        }
        Command::Index {
            graph,
            adversarial,
            samples,
            seed,
        } => {
            let g = load_graph(graph)?;
            let index = small_distinguishing_index(&g, cli.budget)?;
            let opts = BoundsOptions {
                budget: cli.budget,
                adversarial: *adversarial,
                samples: *samples,
                seed: *seed,
            };
            let bounds = small_list_distinguishing_index_bounds(&g, &opts)?;
            Ok(json!({ "small_index": index, "list_bounds": bounds }))
        }
        Command::Oracle { graph, lists } => {
            let g = load_graph(graph)?;
            let lists = load_lists(&g, lists, false)?;
            let found = exists_breaking_colouring(&g, &lists, cli.budget)?;
            Ok(match found {
                Some(c) => json!({ "exists": true, "coloring": c }),
                None => json!({ "exists": false }),
            })
        }
    }
}

fn emit(value: &Value, output: Option<&Path>) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing standard output"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        2 => LevelFilter::Debug,
        _ => LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();

    let (value, code) = match run(&cli) {
        Ok(v) => (v, 0),
        Err(Failure::Rejected(v)) => (v, EXIT_REJECTED),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_limit() { EXIT_LIMIT } else { EXIT_INVALID });
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            return ExitCode::FAILURE;
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    if let Err(e) = emit(&value, cli.output.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::FAILURE;
    }
    ExitCode::from(code)
}
