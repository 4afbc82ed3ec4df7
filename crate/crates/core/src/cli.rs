//! Command-line front end. `main` only forwards to [`run`].

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::chordal::{is_chordal, junction_forest, random_chordal, Graph};
use crate::dataset::{load_dataset, AritySpec};
use crate::encoder::{build_encoding_with, ClauseKind, EncoderConfig, DEFAULT_MAX_VARS};
use crate::scoring::{
    build_score_table, expected_entries, integer_scale, read_score_file, write_score_file, PriorSpec, ScoreTable,
    SubsetScores, DEFAULT_PSEUDOCOUNT, DEFAULT_SCALE,
};
use crate::solve::{
    certify, sidecar_path, solve_external, solve_oracle, write_instance, OracleOptions, Report, SolveError,
    SolverCommand, Progress, ORACLE_DEFAULT_LIMIT, ORACLE_HARD_LIMIT,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "chordnet", version, about = "Exact structure learning for chordal Markov networks")]
struct Cli {
    /// Worker threads for scoring and the oracle [default: available parallelism]
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score every candidate clique of a CSV dataset
    Score(ScoreArgs),
    /// Write a weighted MaxSAT instance and its .vars sidecar
    Encode(EncodeArgs),
    /// Find and certify an optimal network
    Solve(SolveArgs),
    /// Check a result report against a score file
    Certify(CertifyArgs),
    /// Count chordal graphs, or sample random ones
    Enumerate(EnumerateArgs),
}

#[derive(Debug, Args)]
struct ScoreArgs {
    /// CSV with a header row and integer-coded values
    input: PathBuf,
    /// Score file to write [default: stdout]
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Dirichlet pseudocount per cell
    #[arg(long, default_value_t = DEFAULT_PSEUDOCOUNT)]
    prior: f64,
    /// Largest clique to score; larger cliques become unavailable
    #[arg(long)]
    max_clique: Option<usize>,
    /// Declare an arity, e.g. `--arity smoke=3`
    #[arg(long, value_name = "NAME=K")]
    arity: Vec<String>,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    scores: PathBuf,
    /// WCNF output; the sidecar goes next to it with extension .vars
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SCALE)]
    scale: i64,
    /// Refuse tables with more variables than this
    #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
    max_vars: usize,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("method").required(true).args(["oracle", "solver"])))]
struct SolveArgs {
    scores: PathBuf,
    /// Exhaustive search over all graphs
    #[arg(long)]
    oracle: bool,
    /// External MaxSAT solver, `{}` standing for the instance path
    #[arg(long, value_name = "CMD {}")]
    solver: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SCALE)]
    scale: i64,
    /// Allow the oracle on 7 or 8 variables (hours for 8)
    #[arg(long)]
    allow_large: bool,
    /// Where to write the instance for --solver; kept afterwards
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Solver time limit in seconds
    #[arg(long)]
    timeout: Option<f64>,
    /// Report file [default: stdout]
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    /// JSON report as written by `solve`
    report: PathBuf,
    scores: PathBuf,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(long)]
    nodes: usize,
    /// Print every chordal graph as a JSON line
    #[arg(long)]
    list: bool,
    /// Print this many random chordal graphs instead
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge probability before triangulation, for --sample
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long)]
    allow_large: bool,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn input(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.to_string(),
    }
}

fn usage(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

fn solve_failure(e: SolveError) -> Failure {
    let code = match e {
        SolveError::NoVariables
        | SolveError::OracleTooLarge { .. }
        | SolveError::NeedsAllowLarge(_)
        | SolveError::Score(_) => EXIT_INPUT,
        SolveError::Encode(crate::encoder::EncodeError::TooManyVariables { .. }) => EXIT_INPUT,
        SolveError::BadTemplate(_) => EXIT_USAGE,
        _ => EXIT_SOLVER,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

struct Io<'a> {
    out: &'a mut (dyn Write + Send),
    err: &'a mut (dyn Write + Send),
}

impl Io<'_> {
    fn note(&mut self, msg: impl std::fmt::Display) {
        let _ = writeln!(self.err, "{msg}");
    }

    /// Writes to `path`, or to stdout when absent.
    fn emit(&mut self, path: Option<&Path>, text: &str) -> Result<(), Failure> {
        match path {
            Some(p) => fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display()))),
            None => self.out.write_all(text.as_bytes()).map_err(|e| input(e.to_string())),
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let mut io = Io { out, err };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            io.note("error: --workers must be at least 1");
            return EXIT_USAGE;
        }
        pool = pool.num_threads(w);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            io.note(format!("error: cannot start workers: {e}"));
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| match cli.command {
        Command::Score(a) => cmd_score(a, &mut io),
        Command::Encode(a) => cmd_encode(a, &mut io),
        Command::Solve(a) => cmd_solve(a, &mut io),
        Command::Certify(a) => cmd_certify(a, &mut io),
        Command::Enumerate(a) => cmd_enumerate(a, &mut io),
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            io.note(format!("error: {}", f.message));
            f.code
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn read_scores(path: &Path) -> Result<ScoreTable, Failure> {
    read_score_file(&read_text(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn cmd_score(a: ScoreArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let mut spec = AritySpec::new();
    for decl in &a.arity {
        let (name, k) = decl
            .split_once('=')
            .and_then(|(n, k)| Some((n, k.parse::<u32>().ok()?)))
            .ok_or_else(|| usage(format!("--arity expects NAME=K, got {decl:?}")))?;
        spec = spec.declare(name, k);
    }
    let prior = PriorSpec::new(a.prior).map_err(usage)?;
    let text = read_text(&a.input)?;
    let data = load_dataset(&text, (!a.arity.is_empty()).then_some(&spec))
        .map_err(|e| input(format!("{}: {e}", a.input.display())))?;
    let n = data.n_vars();
    let cap = a.max_clique.unwrap_or(n);
    if cap == 0 {
        return Err(usage("--max-clique must be at least 1"));
    }
    if cap < n {
        io.note(format!(
            "warning: --max-clique {cap} leaves out cliques larger than {cap}; \
             the optimum found is only optimal among networks that avoid them"
        ));
    }
    let table = build_score_table(&data, prior, cap).map_err(input)?;
    io.emit(a.output.as_deref(), &write_score_file(&table))?;
    io.note(format!(
        "{} entries for {n} variables and {} rows ({} nonempty candidates; {} subsets including the empty set)",
        table.len(),
        data.row_count(),
        expected_entries(n, n),
        1u64 << n,
    ));
    Ok(EXIT_OK)
}

fn cmd_encode(a: EncodeArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let table = read_scores(&a.scores)?;
    let ints = integer_scale(&table, a.scale).map_err(input)?;
    let enc = build_encoding_with(&ints, &EncoderConfig { max_vars: a.max_vars }).map_err(input)?;
    write_instance(&enc, &a.output).map_err(solve_failure)?;
    let bytes = fs::metadata(&a.output).map(|m| m.len()).unwrap_or(0);
    let sections: serde_json::Map<String, serde_json::Value> = ClauseKind::ALL
        .iter()
        .map(|&k| (k.name().to_owned(), json!(enc.section_len(k))))
        .collect();
    let stats = json!({
        "instance": a.output,
        "sidecar": sidecar_path(&a.output),
        "variables": enc.var_count,
        "hard_clauses": enc.hard.len(),
        "soft_clauses": enc.soft.len(),
        "top": enc.soft_weight_sum() + 1,
        "offset": enc.offset,
        "bytes": bytes,
        "sections": sections,
    });
    io.emit(None, &format!("{stats:#}\n"))?;
    io.note(format!(
        "{} variables, {} hard and {} soft clauses ({} chordality), {} bytes",
        enc.var_count,
        enc.hard.len(),
        enc.soft.len(),
        enc.section_len(ClauseKind::Chordality),
        bytes
    ));
    Ok(EXIT_OK)
}

fn cmd_solve(a: SolveArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let table = read_scores(&a.scores)?;
    let result = if a.oracle {
        let last = AtomicU64::new(0);
        let progress = |done: u64, total: u64| {
            let pct = done * 100 / total;
            if last.fetch_max(pct, Ordering::Relaxed) < pct {
                eprintln!("oracle: {pct}% ({done}/{total} graphs)");
            }
        };
        let report: Progress<'_> = &progress;
        let opts = OracleOptions {
            allow_large: a.allow_large,
            progress: (table.n_vars() > ORACLE_DEFAULT_LIMIT).then_some(report),
        };
        solve_oracle(&table, a.scale, opts).map_err(solve_failure)?
    } else {
        let template = a.solver.as_deref().expect("clap requires a method");
        let mut cmd = SolverCommand::parse(template).map_err(solve_failure)?;
        if let Some(t) = a.timeout {
            if !(t > 0.0 && t.is_finite()) {
                return Err(usage("--timeout must be a positive number of seconds"));
            }
            cmd = cmd.with_timeout(Duration::from_secs_f64(t));
        }
        let (instance, keep) = match &a.instance {
            Some(p) => (p.clone(), true),
            None => (
                std::env::temp_dir().join(format!("chordnet-{}.wcnf", std::process::id())),
                false,
            ),
        };
        let r = solve_external(&table, a.scale, &cmd, &instance);
        if !keep {
            let _ = fs::remove_file(&instance);
            let _ = fs::remove_file(sidecar_path(&instance));
        }
        r.map_err(solve_failure)?
    };
    let report = result.report();
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    io.emit(a.output.as_deref(), &format!("{text}\n"))?;
    let cliques: Vec<String> = result.network.cliques.iter().map(|c| c.to_string()).collect();
    io.note(format!(
        "objective {} (integer {}), cliques {}",
        result.network.score,
        result.objective_int,
        cliques.join(" ")
    ));
    if let (Some(v), Some(c)) = (result.graphs_visited, result.chordal_graphs) {
        io.note(format!("visited {v} graphs, {c} chordal"));
    }
    if result.certificate.all_pass() {
        io.note("certificate: all checks pass");
        Ok(EXIT_OK)
    } else {
        io.note(format!("certificate FAILED: {}", result.certificate.failures().join(", ")));
        Ok(EXIT_CERTIFICATE)
    }
}

fn cmd_certify(a: CertifyArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let report: Report = serde_json::from_str(&read_text(&a.report)?)
        .map_err(|e| input(format!("{}: {e}", a.report.display())))?;
    let net = report
        .network()
        .map_err(|e| input(format!("{}: {e}", a.report.display())))?;
    let table = read_scores(&a.scores)?;
    if net.n_vars != table.n_vars() {
        return Err(input(format!(
            "report has {} variables, score file has {}",
            net.n_vars,
            table.n_vars()
        )));
    }
    let cert = certify(&net, &table);
    let mut value = serde_json::to_value(cert).expect("certificate serializes");
    value["all_pass"] = json!(cert.all_pass());
    io.emit(None, &format!("{value:#}\n"))?;
    if cert.all_pass() {
        io.note("certificate: all checks pass");
        Ok(EXIT_OK)
    } else {
        io.note(format!("certificate FAILED: {}", cert.failures().join(", ")));
        Ok(EXIT_CERTIFICATE)
    }
}

fn graph_line(g: &Graph) -> String {
    let cliques: Vec<Vec<usize>> = junction_forest(g)
        .map(|(c, _)| c.iter().map(|s| s.to_vec()).collect())
        .unwrap_or_default();
    json!({ "edges": g.edges(), "cliques": cliques }).to_string()
}

fn cmd_enumerate(a: EnumerateArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let n = a.nodes;
    if n == 0 || n > ORACLE_HARD_LIMIT {
        return Err(usage(format!("--nodes must be between 1 and {ORACLE_HARD_LIMIT}")));
    }
    if let Some(k) = a.sample {
        if !(0.0..=1.0).contains(&a.density) {
            return Err(usage("--density must lie in [0, 1]"));
        }
        for i in 0..k {
            let g = random_chordal(n, a.density, a.seed.wrapping_add(i as u64));
            io.emit(None, &format!("{}\n", graph_line(&g)))?;
        }
        return Ok(EXIT_OK);
    }
    if n > ORACLE_DEFAULT_LIMIT && !a.allow_large {
        return Err(usage(format!("{n} nodes takes long; pass --allow-large")));
    }
    let total = 1u64 << (n * (n - 1) / 2);
    let mut chordal = 0u64;
    for mask in 0..total {
        let g = Graph::from_edge_mask(n, mask);
        if is_chordal(&g).0 {
            chordal += 1;
            if a.list {
                io.emit(None, &format!("{}\n", graph_line(&g)))?;
            }
        }
    }
    if !a.list {
        io.emit(None, &format!("{}\n", json!({ "nodes": n, "graphs": total, "chordal": chordal })))?;
    }
    io.note(format!("{chordal} of {total} graphs on {n} nodes are chordal"));
    Ok(EXIT_OK)
}
