use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use spectra_core::bounds::{
    bruck_ryser_report, harmonic_bound, harmonic_bound_for_graph, known_nonexistence,
    lp_bound_verify, moore_report, srg_identity, three_ev_bound, BoundReport, Structure,
};
use spectra_core::fbasis::{verify_nb_theorem, FBasisExpansion};
use spectra_core::geometry::{field_of_order, plane_incidence, recognize_plane_from_double};
use spectra_core::quadratic::Quadratic;
use spectra_core::rational::{self, Rational};
use spectra_core::search::{classify_three_ev_with, verify_lemma32, RunOptions, SearchCaps, SearchSpec};
use spectra_core::spectral::{
    approx_spectrum_default, certify_three_eigenvalues, extremal_necessary_conditions, srg_params,
};
use spectra_core::{Builtin, Error, Multigraph};

/// Regular multigraphs with three distinct eigenvalues.
#[derive(Parser)]
#[command(name = "spectra", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph and print it as JSON.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
        #[command(flatten)]
        out: OutArgs,
        /// Where to write the geometry sidecar.
        #[arg(long, global = true)]
        sidecar: Option<PathBuf>,
    },
    /// Run exact checks on a graph.
    Certify(CertifyArgs),
    /// Evaluate an order bound.
    Bound {
        #[command(subcommand)]
        kind: BoundKind,
    },
    /// Enumerate connected regular multigraphs and report the
    /// three-eigenvalue ones as JSON lines.
    Search(SearchArgs),
    /// Compare the F-polynomial matrices with brute-force walk counts.
    VerifyWalks {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 6)]
        imax: usize,
    },
    /// Convert a graph to another format.
    Export(ExportArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Graph file, JSON or edge list; `-` reads stdin.
    #[arg(long, short, default_value = "-")]
    input: String,
}

#[derive(Args)]
struct OutArgs {
    /// Output file; stdout when absent.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Polarity graph G_q of PG(2, q).
    PolarityGraph {
        #[arg(long)]
        q: u64,
    },
    /// Point-line incidence graph of PG(2, q).
    IncidenceGraph {
        #[arg(long)]
        q: u64,
    },
    Cycle {
        #[arg(long)]
        n: usize,
    },
    Complete {
        #[arg(long)]
        n: usize,
    },
    Petersen,
    /// Add `t` loops at every vertex of a regular graph.
    Shift {
        /// Named graph such as `petersen` or `cycle(5)`.
        #[arg(long, conflicts_with = "input")]
        builtin: Option<String>,
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        t: u32,
    },
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    three_ev: bool,
    #[arg(long)]
    srg: bool,
    #[arg(long)]
    girth: bool,
    #[arg(long)]
    extremal: bool,
    #[arg(long)]
    plane_double: bool,
    /// Add decimal approximations next to exact values.
    #[arg(long)]
    float: bool,
}

#[derive(Subcommand)]
enum BoundKind {
    Moore {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        d: u32,
    },
    ThreeEv {
        #[arg(long)]
        k: u64,
    },
    /// Linear-programming bound for given non-trivial eigenvalues.
    Lp {
        #[arg(long)]
        k: u64,
        /// Eigenvalue such as `2`, `-1/2` or `1 - sqrt(5)`; repeatable.
        #[arg(long = "tau", required = true, allow_hyphen_values = true)]
        taus: Vec<String>,
        /// F-basis coefficients f_0,f_1,...
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        f: Vec<String>,
    },
    Harmonic {
        #[arg(long)]
        k: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        f: Vec<String>,
        /// Check positivity of F(A) on this graph instead of assuming it.
        #[arg(long)]
        input: Option<String>,
    },
    SrgIdentity {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        mu: u64,
    },
    BruckRyser {
        #[arg(long)]
        q: u64,
    },
    /// Existence status from the literature.
    Known {
        #[arg(long, conflicts_with = "plane", required_unless_present = "plane")]
        moore_graph: Option<u64>,
        #[arg(long)]
        plane: Option<u64>,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    nmin: usize,
    #[arg(long)]
    nmax: usize,
    #[arg(long)]
    loops: bool,
    #[arg(long)]
    multi: bool,
    /// Largest adjacency entry; defaults to k.
    #[arg(long)]
    max_entry: Option<u32>,
    /// Worker threads; 0 picks automatically.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from an existing checkpoint instead of starting over.
    #[arg(long, requires = "checkpoint")]
    resume: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, group = "format", required = true)]
    dot: bool,
    #[arg(long, group = "format")]
    json: bool,
    #[arg(long, group = "format")]
    edge_list: bool,
    #[command(flatten)]
    out: OutArgs,
}

/// Ways a command can stop short of success.
enum Failure {
    /// A mathematical check did not hold.
    Check,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
    } else {
        text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn load_graph(path: &str) -> Result<Multigraph, Failure> {
    Ok(Multigraph::parse_auto(&read_input(path)?)?)
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("writing stdout: {e}"))),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn parse_rationals(items: &[String]) -> Result<Vec<Rational>, Failure> {
    Ok(items.iter().map(|s| rational::parse(s)).collect::<Result<_, _>>()?)
}

fn construct(kind: ConstructKind, out: Option<PathBuf>, sidecar: Option<PathBuf>) -> CmdResult {
    let mut side = None;
    let g = match kind {
        ConstructKind::PolarityGraph { q } | ConstructKind::IncidenceGraph { q } if q < 2 => {
            return Err(Failure::Usage(format!("{q} is not a prime power")));
        }
        ConstructKind::PolarityGraph { q } => {
            let field = field_of_order(q)?;
            let inc = plane_incidence(&field);
            side = Some(spectra_core::geometry::plane::sidecar(&field, &inc));
            inc.to_multigraph()
        }
        ConstructKind::IncidenceGraph { q } => {
            let field = field_of_order(q)?;
            let inc = plane_incidence(&field);
            side = Some(spectra_core::geometry::plane::sidecar(&field, &inc));
            inc.to_multigraph().bipartite_double()
        }
        ConstructKind::Cycle { n } => Multigraph::builtin(Builtin::Cycle(n))?,
        ConstructKind::Complete { n } => Multigraph::builtin(Builtin::Complete(n))?,
        ConstructKind::Petersen => Multigraph::builtin(Builtin::Petersen)?,
        ConstructKind::Shift { builtin, input, t } => {
            let base = match (builtin, input) {
                (Some(name), _) => Multigraph::builtin(name.parse()?)?,
                (None, Some(path)) => load_graph(&path)?,
                (None, None) => return Err(Failure::Usage("shift needs --builtin or --input".into())),
            };
            base.degree_shift(t)?
        }
    };
    emit(out.as_deref(), &g.to_json())?;
    if let Some(side) = side {
        let path = sidecar.or_else(|| out.as_ref().map(|o| o.with_extension("sidecar.json")));
        if let Some(path) = path {
            let text = serde_json::to_string(&side).expect("sidecar serializes");
            emit(Some(&path), &text)?;
        }
    }
    Ok(())
}

fn quadratic_json(v: &Quadratic, float: bool) -> Value {
    let mut j = serde_json::to_value(v).expect("quadratic serializes");
    if float {
        j["approx"] = json!(v.to_f64());
    }
    j
}

fn check(name: &str, pass: bool, detail: String, data: Value) -> Value {
    json!({"check": name, "pass": pass, "detail": detail, "data": data})
}

fn check_three_ev(g: &Multigraph, float: bool) -> Value {
    match certify_three_eigenvalues(g) {
        Ok(Some(c)) => {
            let eig: Vec<Value> = c
                .eigenvalues()
                .iter()
                .map(|(v, m)| json!({"value": quadratic_json(v, float), "multiplicity": m}))
                .collect();
            let detail = format!(
                "three distinct eigenvalues {}, {}, {}",
                c.k, c.tau1, c.tau2
            );
            check(
                "three-ev",
                true,
                detail,
                json!({"certificate": c.to_json(), "eigenvalues": eig, "rational": c.has_rational_eigenvalues()}),
            )
        }
        Ok(None) => {
            let s = approx_spectrum_default(g);
            let mut data = json!({"distinct": s.distinct()});
            if float {
                data["approx"] = json!(s.eigenvalues);
            }
            check("three-ev", false, format!("{} distinct eigenvalues", s.distinct()), data)
        }
        Err(e) => check("three-ev", false, e.to_string(), Value::Null),
    }
}

fn check_srg(g: &Multigraph) -> Value {
    match srg_params(g) {
        Ok(Some(p)) => check(
            "srg",
            true,
            format!("strongly regular ({}, {}, {}, {})", p.n, p.k, p.lambda, p.mu),
            serde_json::to_value(p).expect("params serialize"),
        ),
        Ok(None) => check("srg", false, "not strongly regular".into(), Value::Null),
        Err(e) => check("srg", false, e.to_string(), Value::Null),
    }
}

fn check_extremal(g: &Multigraph) -> Value {
    match extremal_necessary_conditions(g) {
        Ok(r) => {
            let failed: Vec<&str> = r
                .conditions
                .iter()
                .filter(|c| !c.pass)
                .map(|c| c.condition.as_str())
                .collect();
            let detail = if failed.is_empty() {
                "all conditions hold".to_string()
            } else {
                format!("failed: {}", failed.join(", "))
            };
            check("extremal", r.all_pass(), detail, serde_json::to_value(&r).expect("report serializes"))
        }
        Err(e) => check("extremal", false, e.to_string(), Value::Null),
    }
}

fn check_plane_double(g: &Multigraph) -> Value {
    match recognize_plane_from_double(g) {
        Ok(r) => {
            let detail = if r.recognized {
                format!("plane of order {} recognized", r.q)
            } else {
                r.verdict.clone()
            };
            check("plane-double", r.recognized, detail, serde_json::to_value(&r).expect("recognition serializes"))
        }
        Err(e) => check("plane-double", false, e.to_string(), Value::Null),
    }
}

fn certify(args: CertifyArgs) -> CmdResult {
    let g = load_graph(&args.input.input)?;
    let none = !(args.three_ev || args.srg || args.girth || args.extremal || args.plane_double);
    let mut checks = Vec::new();
    if args.three_ev || none {
        checks.push(check_three_ev(&g, args.float));
    }
    if args.srg {
        checks.push(check_srg(&g));
    }
    if args.girth {
        let girth = g.girth().to_string();
        checks.push(check("girth", true, format!("girth {girth}"), json!({"girth": girth})));
    }
    if args.extremal {
        checks.push(check_extremal(&g));
    }
    if args.plane_double {
        checks.push(check_plane_double(&g));
    }
    let pass = checks.iter().all(|c| c["pass"] == json!(true));
    let report = json!({
        "graph": {"n": g.order(), "k": g.regularity().regular_k, "trace": g.trace()},
        "checks": checks,
        "pass": pass,
    });
    emit(None, &pretty(&report))?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn bound(kind: BoundKind) -> CmdResult {
    let report: BoundReport = match kind {
        BoundKind::Moore { k, d } => moore_report(k, d),
        BoundKind::ThreeEv { k } => three_ev_bound(k),
        BoundKind::Lp { k, taus, f } => {
            let taus: Vec<Quadratic> = taus.iter().map(|t| t.parse()).collect::<Result<_, _>>()?;
            let f = FBasisExpansion::new(k, parse_rationals(&f)?)?;
            lp_bound_verify(k, &taus, &f)
        }
        BoundKind::Harmonic { k, f, input } => {
            let f = FBasisExpansion::new(k, parse_rationals(&f)?)?;
            match input {
                Some(path) => harmonic_bound_for_graph(&load_graph(&path)?, &f),
                None => harmonic_bound(k, &f),
            }
        }
        BoundKind::SrgIdentity { n, k, lambda, mu } => {
            srg_identity(spectra_core::spectral::SrgParams { n, k, lambda, mu })
        }
        BoundKind::BruckRyser { q } => bruck_ryser_report(q),
        BoundKind::Known { moore_graph, plane } => {
            let (structure, label, param) = match (moore_graph, plane) {
                (Some(k), _) => (Structure::MooreGraph(k), "moore_graph", k),
                (None, Some(q)) => (Structure::Plane(q), "plane", q),
                (None, None) => return Err(Failure::Usage("known needs --moore-graph or --plane".into())),
            };
            let v = json!({"structure": label, "param": param, "existence": known_nonexistence(structure)});
            return emit(None, &pretty(&v));
        }
    };
    emit(None, &pretty(&serde_json::to_value(&report).expect("report serializes")))
}

fn search(args: SearchArgs) -> CmdResult {
    let mut spec = SearchSpec::new(args.k, args.nmin, args.nmax)
        .loops(args.loops)
        .multi(args.multi);
    if let Some(m) = args.max_entry {
        spec.max_entry = m;
    }
    if let Some(cp) = &args.checkpoint {
        if !args.resume && cp.exists() {
            fs::remove_file(cp).map_err(|e| Failure::Usage(format!("{}: {e}", cp.display())))?;
        }
    }
    let caps = SearchCaps::from_env()?;
    let opts = RunOptions {
        jobs: args.jobs,
        checkpoint: args.checkpoint,
    };
    let result = classify_three_ev_with(&spec, caps, &opts)?;
    let lines = result.to_json_lines();
    match &args.out.out {
        Some(p) => fs::write(p, lines).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        None => io::stdout()
            .write_all(lines.as_bytes())
            .map_err(|e| Failure::Usage(format!("writing stdout: {e}")))?,
    }
    let no_multi = verify_lemma32(&result);
    eprintln!(
        "enumerated {} graphs, {} with three distinct eigenvalues; no multiple edge at extremal order or above: {}",
        result.enumerated,
        result.graphs.len(),
        no_multi
    );
    if no_multi {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn verify_walks(input: InputArgs, imax: usize) -> CmdResult {
    let g = load_graph(&input.input)?;
    let pass = verify_nb_theorem(&g, imax)?;
    emit(None, &serde_json::to_string(&json!({"imax": imax, "n": g.order(), "pass": pass})).expect("json"))?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn export(args: ExportArgs) -> CmdResult {
    let g = load_graph(&args.input.input)?;
    let text = if args.dot {
        g.to_dot()
    } else if args.edge_list {
        g.to_edge_list()
    } else {
        g.to_json()
    };
    emit(args.out.out.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct { kind, out, sidecar } => construct(kind, out.out, sidecar),
        Command::Certify(args) => certify(args),
        Command::Bound { kind } => bound(kind),
        Command::Search(args) => search(args),
        Command::VerifyWalks { input, imax } => verify_walks(input, imax),
        Command::Export(args) => export(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
