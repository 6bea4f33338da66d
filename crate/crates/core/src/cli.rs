//! Command-line front end.
//!
//! Every command reads one graph (except `agree`), prints a report either as
//! plain text or as a single JSON line, and returns an exit status: 0 on
//! success, 1 when a violation or disagreement was found, 2 on usage, input
//! or size errors.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::enumerate::agreement_experiment;
use crate::error::{Error, Result};
use crate::game::{gamma, is_convex_brute, is_convex_structural, GameTable};
use crate::graph::{parse_graph, Coalition, Graph, MAX_EDGES};
use crate::lp::{pmas_feasible, Feasibility};
use crate::pmas::{
    build_pmas, check_population_monotonic, lemma_suite, verify_scheme, AllocationScheme,
    Certificate, PmVerdict, VerificationMode,
};
use crate::Rational;

/// Largest edge count for which `construct` prints the full table.
pub const TABLE_LIMIT: usize = 12;

#[derive(Debug, Parser)]
#[command(
    name = "isgame",
    version,
    about = "Population monotonicity of independent set games"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Edge classes and pendant distances.
    Classify(GraphArgs),
    /// Worth of a coalition.
    Gamma {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        coalition: String,
    },
    /// Structural verdict with a certificate on failure.
    Check(GraphArgs),
    /// Payoffs of the explicit scheme.
    Construct {
        #[command(flatten)]
        graph: GraphArgs,
        /// Prints the whole table when omitted.
        #[arg(long)]
        coalition: Option<String>,
    },
    /// Verifies the explicit scheme and its payoff identities.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Structural convexity, optionally confirmed by a pair scan.
    Convexity {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        brute: bool,
    },
    /// Exact LP feasibility of a PMAS.
    Oracle(GraphArgs),
    /// Structural verdict against the LP on every small graph.
    Agree {
        #[arg(long, default_value_t = 4)]
        max_edges: usize,
    },
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge-list file, `-` for standard input.
    #[arg(long, conflicts_with = "edges", required_unless_present = "edges")]
    pub input: Option<PathBuf>,
    /// Inline edges separated by commas or semicolons, e.g. "a b, b c".
    #[arg(long)]
    pub edges: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeName {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Args)]
pub struct ModeArgs {
    #[arg(long, value_enum, default_value_t = ModeName::Exhaustive)]
    pub mode: ModeName,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl ModeArgs {
    fn mode(&self) -> VerificationMode {
        match self.mode {
            ModeName::Exhaustive => VerificationMode::Exhaustive,
            ModeName::Sampled => VerificationMode::Sampled {
                count: self.samples,
                seed: self.seed,
            },
        }
    }
}

/// What the caller should report beyond the printed output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Clean,
    ViolationFound,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Clean => 0,
            Outcome::ViolationFound => 1,
        }
    }
}

/// Failure of a command before it produced a report.
#[derive(Debug)]
pub enum CliError {
    Io(String, io::Error),
    Library(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(what, e) => write!(f, "{what}: {e}"),
            CliError::Library(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io("write failed".into(), e)
    }
}

/// Parses arguments, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let (record, human, outcome) = match &cli.command {
        Command::Classify(src) => classify(&load(src)?),
        Command::Gamma { graph, coalition } => {
            let g = load(graph)?;
            let s = parse_coalition(&g, coalition)?;
            let value = gamma(&g, s);
            (
                json!({"command": "gamma", "graph": g.to_edge_list(), "coalition": ids(s), "value": value}),
                format!("gamma({s}) = {value}\n"),
                Outcome::Clean,
            )
        }
        Command::Check(src) => check(&load(src)?),
        Command::Construct { graph, coalition } => {
            let g = load(graph)?;
            construct(&g, coalition.as_deref())?
        }
        Command::Verify { graph, mode } => verify(&load(graph)?, mode.mode())?,
        Command::Convexity { graph, brute } => convexity(&load(graph)?, *brute)?,
        Command::Oracle(src) => oracle(&load(src)?)?,
        Command::Agree { max_edges } => agree(*max_edges)?,
    };
    match cli.format {
        Format::Human => out.write_all(human.as_bytes())?,
        Format::Structured => writeln!(out, "{record}")?,
    }
    Ok(outcome)
}

type Report = (Value, String, Outcome);

fn load(src: &GraphArgs) -> Result<Graph, CliError> {
    let text = match (&src.input, &src.edges) {
        (_, Some(inline)) => inline.replace([',', ';'], "\n"),
        (Some(path), None) if path.as_os_str() == "-" => {
            io::read_to_string(io::stdin()).map_err(|e| CliError::Io("standard input".into(), e))?
        }
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(path.display().to_string(), e))?,
        (None, None) => String::new(),
    };
    Ok(parse_graph(&text).map_err(Error::from)?)
}

/// `all`, or comma-separated edge ids.
pub fn parse_coalition(g: &Graph, text: &str) -> Result<Coalition> {
    let text = text.trim();
    if text == "all" {
        return Ok(g.grand_coalition());
    }
    let mut s = Coalition::EMPTY;
    for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let edge: usize = token
            .parse()
            .map_err(|_| Error::InvalidGraph(format!("`{token}` is not an edge id")))?;
        if edge >= MAX_EDGES {
            return Err(Error::CoalitionOutOfRange {
                edge,
                edges: g.edge_count(),
            });
        }
        s = s.with(edge);
    }
    g.check_coalition(s)?;
    Ok(s)
}

fn ids(s: Coalition) -> Vec<usize> {
    s.iter().collect()
}

fn fraction(q: &Rational) -> String {
    q.to_string()
}

fn edge_name(g: &Graph, e: usize) -> String {
    let (u, v) = g.endpoints(e);
    format!("{e} ({} {})", g.label(u), g.label(v))
}

fn classify(g: &Graph) -> Report {
    let classes = g.classify_edges();
    let distances = g.pendant_distances();
    let mut human = format!("{} vertices, {} edges\n", g.vertex_count(), g.edge_count());
    let mut edges = Vec::new();
    for e in 0..g.edge_count() {
        let (u, v) = g.endpoints(e);
        let class = classes.class(e);
        let _ = writeln!(human, "edge {}: {class}", edge_name(g, e));
        edges.push(
            json!({"id": e, "endpoints": [g.label(u), g.label(v)], "class": class.to_string()}),
        );
    }
    let mut vertices = Vec::new();
    for (v, d) in distances.into_iter().enumerate() {
        let _ = writeln!(
            human,
            "vertex {}: degree {}, distance to pendant {d}",
            g.label(v),
            g.degree(v)
        );
        vertices.push(json!({"label": g.label(v), "degree": g.degree(v), "distance_to_pendant": d.to_string()}));
    }
    (
        json!({"command": "classify", "graph": g.to_edge_list(), "edges": edges, "vertices": vertices}),
        human,
        Outcome::Clean,
    )
}

fn certificate_json(g: &Graph, c: &Certificate) -> Value {
    match *c {
        Certificate::FarVertex { vertex, distance } => json!({
            "kind": "far-vertex", "vertex": g.label(vertex), "distance": distance.to_string(),
        }),
        Certificate::IncidentTypeIPair {
            first,
            second,
            shared,
        } => json!({
            "kind": "incident-type-I-pair", "edges": [first, second], "shared": g.label(shared),
        }),
    }
}

fn certificate_text(g: &Graph, c: &Certificate) -> String {
    match *c {
        Certificate::FarVertex { vertex, distance } => {
            format!(
                "vertex {} is at distance {distance} from every pendant vertex",
                g.label(vertex)
            )
        }
        Certificate::IncidentTypeIPair {
            first,
            second,
            shared,
        } => format!(
            "type-I edges {} and {} share vertex {}",
            edge_name(g, first),
            edge_name(g, second),
            g.label(shared)
        ),
    }
}

fn check(g: &Graph) -> Report {
    let verdict = check_population_monotonic(g);
    let (json_cert, human) = match &verdict {
        PmVerdict::PopulationMonotonic => (Value::Null, "population monotonic\n".to_string()),
        PmVerdict::NotPopulationMonotonic(c) => (
            certificate_json(g, c),
            format!("not population monotonic: {}\n", certificate_text(g, c)),
        ),
    };
    (
        json!({
            "command": "check",
            "graph": g.to_edge_list(),
            "population_monotonic": verdict.is_population_monotonic(),
            "certificate": json_cert,
        }),
        human,
        Outcome::Clean,
    )
}

fn construct(g: &Graph, coalition: Option<&str>) -> Result<Report> {
    let scheme = build_pmas(g)?;
    let coalitions: Vec<Coalition> = match coalition {
        Some(text) => vec![parse_coalition(g, text)?],
        None => {
            if g.edge_count() > TABLE_LIMIT {
                return Err(Error::size(
                    "full payoff table",
                    TABLE_LIMIT,
                    g.edge_count(),
                ));
            }
            (1u64..1 << g.edge_count())
                .map(Coalition::from_bits)
                .collect()
        }
    };
    let mut human = String::new();
    let mut rows = Vec::new();
    for s in coalitions {
        let payoffs = scheme.payoff_vector(s);
        let rendered: Vec<String> = payoffs.iter().map(fraction).collect();
        let _ = writeln!(human, "{s}: {}", rendered.join(" "));
        rows.push(json!({"coalition": ids(s), "payoffs": rendered}));
    }
    Ok((
        json!({"command": "construct", "graph": g.to_edge_list(), "table": rows}),
        human,
        Outcome::Clean,
    ))
}

fn verify(g: &Graph, mode: VerificationMode) -> Result<Report> {
    let scheme = build_pmas(g)?;
    let report = verify_scheme(g, &scheme, mode)?;
    let lemmas = lemma_suite(g, &scheme, mode)?;
    let mut human = format!(
        "{} coalitions checked ({mode}): {} efficiency and {} monotonicity violations\n",
        report.coalitions_checked,
        report.efficiency_violations.len(),
        report.monotonicity_violations.len()
    );
    let efficiency: Vec<Value> = report
        .efficiency_violations
        .iter()
        .map(|v| {
            let _ = writeln!(
                human,
                "  efficiency at {}: sum {} but worth {}",
                v.coalition, v.sum, v.value
            );
            json!({"coalition": ids(v.coalition), "sum": fraction(&v.sum), "value": v.value})
        })
        .collect();
    let monotonicity: Vec<Value> = report
        .monotonicity_violations
        .iter()
        .map(|v| {
            let _ = writeln!(
                human,
                "  monotonicity of edge {} from {} to {}: {} > {}",
                v.edge, v.smaller, v.larger, v.before, v.after
            );
            json!({
                "smaller": ids(v.smaller), "larger": ids(v.larger), "edge": v.edge,
                "before": fraction(&v.before), "after": fraction(&v.after),
            })
        })
        .collect();
    let _ = writeln!(human, "{} payoff identity failures", lemmas.failures.len());
    let failures: Vec<Value> = lemmas
        .failures
        .iter()
        .map(|f| {
            let _ = writeln!(
                human,
                "  {} at {} on {}: {} instead of {}",
                f.lemma, f.coalition, f.subject, f.observed, f.expected
            );
            json!({
                "lemma": f.lemma.to_string(), "coalition": ids(f.coalition), "subject": f.subject,
                "observed": fraction(&f.observed), "expected": fraction(&f.expected),
            })
        })
        .collect();
    let outcome = if report.is_pmas() && lemmas.is_clean() {
        Outcome::Clean
    } else {
        Outcome::ViolationFound
    };
    Ok((
        json!({
            "command": "verify",
            "graph": g.to_edge_list(),
            "mode": mode.to_string(),
            "coalitions_checked": report.coalitions_checked,
            "efficiency_violations": efficiency,
            "monotonicity_violations": monotonicity,
            "lemma_failures": failures,
        }),
        human,
        outcome,
    ))
}

fn convexity(g: &Graph, brute: bool) -> Result<Report> {
    let structural = is_convex_structural(g);
    let mut human = format!(
        "structural: {}\n",
        if structural { "convex" } else { "not convex" }
    );
    let mut record =
        json!({"command": "convexity", "graph": g.to_edge_list(), "structural": structural});
    if brute {
        let witness = is_convex_brute(g)?;
        match &witness {
            None => human.push_str("pair scan: convex\n"),
            Some(w) => {
                let _ = writeln!(
                    human,
                    "pair scan: not convex, S = {} and T = {} give {} > {}",
                    w.s, w.t, w.lhs, w.rhs
                );
            }
        }
        record["brute"] = json!(witness.is_none());
        record["witness"] = match witness {
            None => Value::Null,
            Some(w) => json!({"s": ids(w.s), "t": ids(w.t), "lhs": w.lhs, "rhs": w.rhs}),
        };
    }
    Ok((record, human, Outcome::Clean))
}

fn oracle(g: &Graph) -> Result<Report> {
    let game = GameTable::new(g);
    let answer = pmas_feasible(&game)?;
    let (human, grand) = match &answer {
        Feasibility::Feasible(w) => {
            let payoffs: Vec<String> = w
                .payoff_vector(g.grand_coalition())
                .iter()
                .map(fraction)
                .collect();
            (
                format!("feasible; grand coalition payoffs: {}\n", payoffs.join(" ")),
                json!(payoffs),
            )
        }
        Feasibility::Infeasible => ("infeasible\n".to_string(), Value::Null),
    };
    Ok((
        json!({"command": "oracle", "graph": g.to_edge_list(), "feasible": answer.is_feasible(), "grand_payoffs": grand}),
        human,
        Outcome::Clean,
    ))
}

fn agree(max_edges: usize) -> Result<Report> {
    let report = agreement_experiment(max_edges)?;
    let mut human = format!(
        "{} graphs with at most {max_edges} edges, {} population monotonic, {} disagreements\n",
        report.graphs_tested,
        report.population_monotonic_count(),
        report.disagreements.len()
    );
    for d in &report.disagreements {
        let _ = writeln!(
            human,
            "  disagreement on: {}",
            d.trim_end().replace('\n', ", ")
        );
    }
    let outcome = if report.disagreements.is_empty() {
        Outcome::Clean
    } else {
        Outcome::ViolationFound
    };
    Ok((
        json!({
            "command": "agree",
            "max_edges": max_edges,
            "graphs_tested": report.graphs_tested,
            "population_monotonic": report.population_monotonic_count(),
            "disagreements": report.disagreements,
        }),
        human,
        outcome,
    ))
}
