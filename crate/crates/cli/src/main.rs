//! `cfg`: command-line front end for the chipfire library.
//!
//! Exit codes: 0 success, 1 property violation or failed check, 2 usage or
//! input error, 3 size cap exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chipfire::dynamics::{self, Configuration};
use chipfire::lattice;
use chipfire::linalg::reduced_laplacian_det;
use chipfire::oracles;
use chipfire::random;
use chipfire::recurrent::{self, enumerate_recurrents};
use chipfire::sink_bijection::theta;
use chipfire::suites::{self, Outcome, Property};
use chipfire::tutte;
use chipfire::{Error, LaurentPolynomial, MultiDigraph};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "cfg", version, about = "Chip-firing on Eulerian multidigraphs")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Largest stable cube (or permutation / subset count) to enumerate.
    /// Overrides CFG_CAP_CELLS.
    #[arg(long, global = true, value_name = "CELLS")]
    cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct GraphArg {
    /// Edge-list file: `tail head [multiplicity]` per line, `#` comments.
    graph: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Basic facts about a graph.
    Info(GraphArg),
    /// Stabilize a configuration.
    Stabilize {
        #[command(flatten)]
        graph: GraphArg,
        /// Sink vertex; without one every vertex may fire.
        #[arg(long)]
        sink: Option<String>,
        /// Configuration literal such as `v1=3,v2=0`.
        #[arg(long)]
        config: String,
    },
    /// Enumerate the recurrent configurations for a sink.
    Recurrents {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        sink: String,
    },
    /// Print T(y) and whether every sink agrees on it.
    Tutte {
        #[command(flatten)]
        graph: GraphArg,
        /// Evaluate at these points (integers or fractions like 1/2).
        #[arg(long = "at", value_name = "Y")]
        at: Vec<BigRational>,
    },
    /// Move a recurrent configuration to another sink (printed as JSON).
    Swap {
        #[command(flatten)]
        graph: GraphArg,
        /// Current sink.
        #[arg(long)]
        sink: String,
        /// Sink to move to.
        #[arg(long)]
        target: String,
        #[arg(long)]
        config: String,
    },
    /// Run a property family on one graph or on a seeded random family.
    Check {
        /// Graph file; omit to use the seeded random family.
        graph: Option<PathBuf>,
        #[arg(long, value_parser = parse_property)]
        property: Property,
        /// Seed of the random family (required without a graph).
        #[arg(long)]
        seed: Option<u64>,
        /// Size of the random family.
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Class maxima of the firing-lattice classes for every sink.
    Conjecture1(GraphArg),
    /// Run a brute-force reference and compare it with the main path.
    Oracle {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_enum)]
        kind: OracleKind,
        #[arg(long)]
        sink: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    Arborescences,
    AcyclicSets,
    Recurrents,
    UndirectedTutte,
}

fn parse_property(s: &str) -> Result<Property, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Property::ALL.iter().map(|p| p.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

/// Failure of a command, carrying its exit code.
enum Failure {
    Usage(String),
    Cap(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeCap { .. } => Failure::Cap(e.to_string()),
            Error::Internal(_) | Error::SinkDependence { .. } | Error::NonTerminating { .. } => {
                Failure::Violation(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Text written to stdout plus whether a property failed.
struct Report {
    out: String,
    violated: bool,
}

impl Report {
    fn ok(out: String) -> Self {
        Report { out, violated: false }
    }
}

fn read_graph(path: &Path) -> Result<MultiDigraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    MultiDigraph::parse_edge_list(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn seq(xs: &[u64]) -> String {
    let parts: Vec<String> = xs.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

fn info(g: &MultiDigraph, format: Format) -> Result<Report, Failure> {
    let eulerian = g.is_eulerian();
    let kappa = if eulerian { Some(recurrent::kappa(g)?) } else { None };
    let dets: Vec<(String, String)> = (0..g.vertex_count())
        .map(|s| (g.label(s).to_string(), reduced_laplacian_det(g, s).to_string()))
        .collect();
    let out = match format {
        Format::Json => pretty(&json!({
            "vertices": g.labels(),
            "arcs": g.arc_count(),
            "loops": g.loop_count(),
            "eulerian": eulerian,
            "strongly_connected": g.is_strongly_connected(),
            "undirected": g.is_undirected(),
            "kappa": kappa,
            "determinants": dets.iter().map(|(s, d)| json!({"sink": s, "det": d})).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "vertices {}: {}", g.vertex_count(), g.labels().join(" ")).unwrap();
            writeln!(s, "arcs {}, loops {}", g.arc_count(), g.loop_count()).unwrap();
            let yn = |b: bool| if b { "yes" } else { "no" };
            writeln!(
                s,
                "eulerian {}, strongly connected {}, undirected {}",
                yn(eulerian),
                yn(g.is_strongly_connected()),
                yn(g.is_undirected())
            )
            .unwrap();
            if let Some(k) = kappa {
                writeln!(s, "kappa {k}").unwrap();
            }
            for (sink, d) in &dets {
                writeln!(s, "sink {sink}: det {d}").unwrap();
            }
            s
        }
    };
    Ok(Report::ok(out))
}

fn stabilize(g: &MultiDigraph, sink: Option<&str>, config: &str, format: Format) -> Result<Report, Failure> {
    let s = sink.map(|l| g.vertex(l)).transpose()?;
    let c = Configuration::parse(g, s, config)?;
    let (d, record) = dynamics::stabilize(g, &c)?;
    let firings: Vec<String> = (0..g.vertex_count())
        .map(|v| format!("{}={}", g.label(v), record.counts[v]))
        .collect();
    let out = match format {
        Format::Json => {
            let mut f = serde_json::Map::new();
            for v in 0..g.vertex_count() {
                f.insert(g.label(v).to_string(), record.counts[v].into());
            }
            pretty(&json!({
                "config": d.to_json(g),
                "firings": f,
                "chips_to_sink": record.chips_to_sink,
            }))
        }
        Format::Text => {
            let mut s = format!("stable {}\nfirings {}\n", d.to_literal(g), firings.join(","));
            if sink.is_some() {
                writeln!(s, "chips to sink {}", record.chips_to_sink).unwrap();
            }
            s
        }
    };
    Ok(Report::ok(out))
}

fn recurrents(g: &MultiDigraph, sink: &str, format: Format) -> Result<Report, Failure> {
    let s = g.vertex(sink)?;
    let rs = enumerate_recurrents(g, s)?;
    let out = match format {
        Format::Json => pretty(&rs.to_json(g)),
        Format::Text => {
            let mut out = format!("sink {}, kappa {}, {} recurrent\n", g.label(s), rs.kappa, rs.len());
            for (i, c) in rs.configs.iter().enumerate() {
                writeln!(out, "{}  sum {}  level {}", c.to_literal(g), rs.sums[i], rs.levels[i]).unwrap();
            }
            out
        }
    };
    Ok(Report::ok(out))
}

fn tutte_cmd(g: &MultiDigraph, at: &[BigRational], format: Format) -> Result<Report, Failure> {
    let per_sink: Vec<LaurentPolynomial> = (0..g.vertex_count())
        .map(|s| tutte::tutte_gen(g, s))
        .collect::<chipfire::Result<_>>()?;
    let t = per_sink[0].clone();
    let consistent = per_sink.iter().all(|p| *p == t);
    let values: Vec<(String, String)> = at
        .iter()
        .map(|y| Ok((y.to_string(), t.eval(y)?.to_string())))
        .collect::<chipfire::Result<_>>()?;
    let out = match format {
        Format::Json => pretty(&json!({
            "polynomial": t.to_string(),
            "terms": t.to_json()["terms"],
            "per_sink": (0..g.vertex_count())
                .map(|s| json!({"sink": g.label(s), "polynomial": per_sink[s].to_string()}))
                .collect::<Vec<_>>(),
            "consistent": consistent,
            "evaluations": values.iter().map(|(y, v)| json!({"y": y, "value": v})).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = format!("{t}\n");
            for (y, v) in &values {
                writeln!(s, "T({y}) = {v}").unwrap();
            }
            if consistent {
                writeln!(s, "consistent across {} sinks", g.vertex_count()).unwrap();
            } else {
                for (v, p) in per_sink.iter().enumerate() {
                    writeln!(s, "sink {}: {p}", g.label(v)).unwrap();
                }
                writeln!(s, "inconsistent").unwrap();
            }
            s
        }
    };
    Ok(Report { out, violated: !consistent })
}

fn swap(g: &MultiDigraph, sink: &str, target: &str, config: &str) -> Result<Report, Failure> {
    let s1 = g.vertex(sink)?;
    let s2 = g.vertex(target)?;
    let c = Configuration::parse(g, Some(s1), config)?;
    let r = theta(g, s1, s2, &c)?;
    Ok(Report::ok(pretty(&r.to_json(g))))
}

fn check(
    graph: Option<&Path>,
    property: Property,
    seed: Option<u64>,
    count: usize,
    format: Format,
) -> Result<Report, Failure> {
    let (graphs, source) = match (graph, seed) {
        (Some(p), None) => (vec![read_graph(p)?], p.display().to_string()),
        (None, Some(seed)) => (random::eulerian_corpus(seed, count), format!("seed {seed}, {count} graphs")),
        (Some(_), Some(_)) => return Err(Failure::Usage("give either a graph or --seed, not both".into())),
        (None, None) => return Err(Failure::Usage("randomized checks need --seed".into())),
    };
    let single = graphs.len() == 1 && graph.is_some();
    let mut total = Outcome::default();
    let mut failing = Vec::new();
    for g in &graphs {
        let out = suites::run(property, g)?;
        if !out.passed() {
            failing.push(g.to_edge_list());
        }
        if single {
            total.merge(out);
        } else {
            total.cases += out.cases;
            total.violations.extend(out.violations);
        }
    }
    let out = match format {
        Format::Json => pretty(&json!({
            "property": property.name(),
            "source": source,
            "graphs": graphs.len(),
            "cases": total.cases,
            "details": total.details,
            "violations": total.violations,
            "failing_graphs": failing,
        })),
        Format::Text => {
            let mut s = format!("{property} on {source}\n");
            for d in &total.details {
                writeln!(s, "{d}").unwrap();
            }
            for v in &total.violations {
                writeln!(s, "violation: {v}").unwrap();
            }
            for f in &failing {
                writeln!(s, "failing graph: {}", f.trim_end().replace('\n', "; ")).unwrap();
            }
            let verdict = if total.passed() { "ok" } else { "FAILED" };
            writeln!(s, "{} cases, {} violations: {verdict}", total.cases, total.violations.len()).unwrap();
            s
        }
    };
    Ok(Report { out, violated: !total.passed() })
}

fn conjecture1(g: &MultiDigraph, format: Format) -> Result<Report, Failure> {
    let report = lattice::conjecture1_check(g)?;
    let out = match format {
        Format::Json => pretty(&report.to_json(g)),
        Format::Text => {
            let mut s = format!("eulerian {}\n", if report.eulerian { "yes" } else { "no" });
            for p in &report.per_sink {
                writeln!(
                    s,
                    "sink {}: {} recurrent, class maxima {}",
                    g.label(p.sink),
                    p.recurrent_count,
                    seq(&p.class_maxima)
                )
                .unwrap();
            }
            let verdict = if report.consistent { "same" } else { "differ" };
            writeln!(s, "class maxima across sinks: {verdict}").unwrap();
            s
        }
    };
    Ok(Report::ok(out))
}

fn oracle(g: &MultiDigraph, kind: OracleKind, sink: Option<&str>, format: Format) -> Result<Report, Failure> {
    let need_sink = || -> Result<usize, Failure> {
        let l = sink.ok_or_else(|| Failure::Usage("this oracle needs --sink".into()))?;
        Ok(g.vertex(l)?)
    };
    let (reference, main): (String, String) = match kind {
        OracleKind::Arborescences => {
            let s = need_sink()?;
            (oracles::brute_arborescences(g, s)?.to_string(), reduced_laplacian_det(g, s).to_string())
        }
        OracleKind::AcyclicSets => {
            let s = need_sink()?;
            (
                oracles::brute_acyclic_sets(g, s)?.to_string(),
                tutte::max_acyclic_unique_sink_count(g, s)?.to_string(),
            )
        }
        OracleKind::Recurrents => {
            let s = need_sink()?;
            let lit = |cs: &[Configuration]| cs.iter().map(|c| c.to_literal(g)).collect::<Vec<_>>().join("; ");
            (lit(&oracles::brute_recurrents(g, s)?), lit(&enumerate_recurrents(g, s)?.configs))
        }
        OracleKind::UndirectedTutte => {
            if sink.is_some() {
                return Err(Failure::Usage("undirected-tutte takes no --sink".into()));
            }
            (tutte::undirected_tutte_oracle(g)?.to_string(), tutte::tutte(g)?.to_string())
        }
    };
    let agree = reference == main;
    let out = match format {
        Format::Json => pretty(&json!({
            "kind": format!("{kind:?}"),
            "oracle": reference,
            "main": main,
            "agree": agree,
        })),
        Format::Text => format!(
            "oracle {reference}\nmain   {main}\n{}\n",
            if agree { "agree" } else { "DISAGREE" }
        ),
    };
    Ok(Report { out, violated: !agree })
}

fn run(cli: Cli) -> Result<Report, Failure> {
    let format = cli.format;
    match cli.command {
        Command::Info(a) => info(&read_graph(&a.graph)?, format),
        Command::Stabilize { graph, sink, config } => {
            stabilize(&read_graph(&graph.graph)?, sink.as_deref(), &config, format)
        }
        Command::Recurrents { graph, sink } => recurrents(&read_graph(&graph.graph)?, &sink, format),
        Command::Tutte { graph, at } => tutte_cmd(&read_graph(&graph.graph)?, &at, format),
        Command::Swap { graph, sink, target, config } => swap(&read_graph(&graph.graph)?, &sink, &target, &config),
        Command::Check { graph, property, seed, count } => check(graph.as_deref(), property, seed, count, format),
        Command::Conjecture1(a) => conjecture1(&read_graph(&a.graph)?, format),
        Command::Oracle { graph, kind, sink } => oracle(&read_graph(&graph.graph)?, kind, sink.as_deref(), format),
    }
}

fn cap_from_env() -> Result<Option<u64>, Failure> {
    match std::env::var("CFG_CAP_CELLS") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("CFG_CAP_CELLS: not a number: `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cap_from_env().and_then(|env| {
        if let Some(cap) = cli.cap.or(env) {
            chipfire::limits::set_cell_cap(cap);
        }
        run(cli)
    });
    match result {
        Ok(r) => {
            print!("{}", r.out);
            ExitCode::from(if r.violated { 1 } else { 0 })
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Violation(m) => (1, m),
                Failure::Usage(m) => (2, m),
                Failure::Cap(m) => (3, m),
            };
            eprintln!("cfg: {msg}");
            ExitCode::from(code)
        }
    }
}
