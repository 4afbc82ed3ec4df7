//! Finding and certifying optimal networks.

mod external;
mod oracle;

use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chordal::{check_structure, ChordalNetwork, CliqueEdge, SpanningForest, StructureReport};
use crate::encoder::{build_encoding, decode_model, write_sidecar, write_wcnf, EncodeError, Encoding};
use crate::nodeset::NodeSet;
use crate::scoring::{integer_scale, network_score, IntScoreTable, ScoreError, ScoreTable, SubsetScores};

pub use external::{parse_solver_output, run_external, SolverCommand, SolverOutput, SolverStatus, PLACEHOLDER};
pub use oracle::{
    exhaustive_optimum, OracleOptions, OracleOutcome, Progress, ORACLE_DEFAULT_LIMIT, ORACLE_HARD_LIMIT,
};

/// Relative tolerance for the score recomputation check.
pub const SCORE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("no variables")]
    NoVariables,
    #[error("{n} variables exceed the oracle limit of {limit}")]
    OracleTooLarge { n: usize, limit: usize },
    #[error("oracle on {0} variables takes a long time; pass --allow-large to run it")]
    NeedsAllowLarge(usize),
    #[error("no chordal network fits the score table")]
    NoFeasibleNetwork,
    #[error("solver template {0:?} must name a program and contain {{}}")]
    BadTemplate(String),
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("unparseable solver output: {0}")]
    Unparseable(String),
    #[error("solver reports UNSATISFIABLE; the disconnected network is always feasible, so an encoding bug is suspected")]
    Unsatisfiable,
    #[error("no optimum: {0}")]
    Unknown(String),
    #[error("solver timed out after {0:?}")]
    Timeout(Duration),
    #[error("I/O error: {0}")]
    Io(String),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Score(#[from] ScoreError),
}

/// Independent checks on a network plus the score recomputation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub structure: StructureReport,
    pub score: bool,
}

impl Certificate {
    pub fn all_pass(&self) -> bool {
        self.structure.all_pass() && self.score
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut f = self.structure.failures();
        if !self.score {
            f.push("score");
        }
        f
    }
}

/// Recomputes everything from the cliques, forest and table; nothing the
/// network carries is trusted except what is being checked.
pub fn certify(net: &ChordalNetwork, table: &ScoreTable) -> Certificate {
    let structure = check_structure(net.n_vars, &net.cliques, &net.forest);
    let score = network_score(table, &net.cliques, &net.separators())
        .map(|s| (s - net.score).abs() <= SCORE_TOLERANCE * s.abs().max(1.0))
        .unwrap_or(false);
    Certificate { structure, score }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    External,
}

/// A certified optimum. `network.score` is the real-valued score.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub method: Method,
    pub network: ChordalNetwork,
    pub objective_int: i64,
    pub certificate: Certificate,
    pub graphs_visited: Option<u64>,
    pub chordal_graphs: Option<u64>,
}

impl SolveResult {
    pub fn report(&self) -> Report {
        Report {
            method: self.method,
            n_vars: self.network.n_vars,
            cliques: self.network.cliques.iter().map(|c| c.to_vec()).collect(),
            separators: self
                .network
                .forest
                .edges
                .iter()
                .map(|e| ReportEdge {
                    a: e.a,
                    b: e.b,
                    label: e.label.to_vec(),
                })
                .collect(),
            objective_real: self.network.score,
            objective_int: Some(self.objective_int),
            certificate: Some(self.certificate),
            graphs_visited: self.graphs_visited,
            chordal_graphs: self.chordal_graphs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEdge {
    /// Positions in `cliques`.
    pub a: usize,
    pub b: usize,
    pub label: Vec<usize>,
}

/// Serialized form of a result, also accepted back by [`Report::network`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub method: Method,
    pub n_vars: usize,
    pub cliques: Vec<Vec<usize>>,
    pub separators: Vec<ReportEdge>,
    pub objective_real: f64,
    #[serde(default)]
    pub objective_int: Option<i64>,
    #[serde(default)]
    pub certificate: Option<Certificate>,
    #[serde(default)]
    pub graphs_visited: Option<u64>,
    #[serde(default)]
    pub chordal_graphs: Option<u64>,
}

impl Report {
    /// Network as stated in the report. Malformed indices are an error;
    /// structural problems are left for [`certify`] to find.
    pub fn network(&self) -> Result<ChordalNetwork, String> {
        if self.n_vars > crate::nodeset::MAX_VARS {
            return Err(format!("n_vars {} is too large", self.n_vars));
        }
        let cliques = self
            .cliques
            .iter()
            .map(|c| NodeSet::try_from_indices(c.iter().copied()).ok_or_else(|| format!("bad clique {c:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        let edges = self
            .separators
            .iter()
            .map(|e| {
                let label = NodeSet::try_from_indices(e.label.iter().copied())
                    .ok_or_else(|| format!("bad separator label {:?}", e.label))?;
                Ok(CliqueEdge {
                    a: e.a,
                    b: e.b,
                    label,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(ChordalNetwork {
            n_vars: self.n_vars,
            cliques,
            forest: SpanningForest { edges },
            score: self.objective_real,
        })
    }
}

/// Exhaustive search over real-valued scores.
pub fn solve_oracle(table: &ScoreTable, scale: i64, opts: OracleOptions<'_>) -> Result<SolveResult, SolveError> {
    let ints = integer_scale(table, scale)?;
    let out = exhaustive_optimum(table, opts)?;
    let network = ChordalNetwork {
        n_vars: table.n_vars(),
        cliques: out.cliques,
        forest: out.forest,
        score: out.value,
    };
    let objective_int = network.rescore(&ints).map_err(|_| SolveError::NoFeasibleNetwork)?;
    let certificate = certify(&network, table);
    Ok(SolveResult {
        method: Method::Oracle,
        network,
        objective_int,
        certificate,
        graphs_visited: Some(out.graphs_visited),
        chordal_graphs: Some(out.chordal_graphs),
    })
}

/// Writes the WCNF instance and its `.vars` sidecar.
pub fn write_instance(enc: &Encoding, instance: &Path) -> Result<(), SolveError> {
    let io = |e: std::io::Error| SolveError::Io(format!("{}: {e}", instance.display()));
    let file = std::fs::File::create(instance).map_err(io)?;
    let mut w = std::io::BufWriter::new(file);
    write_wcnf(enc, &mut w).map_err(io)?;
    std::io::Write::flush(&mut w).map_err(io)?;
    std::fs::write(sidecar_path(instance), write_sidecar(&enc.varmap)).map_err(io)?;
    Ok(())
}

/// `run.wcnf` → `run.vars`.
pub fn sidecar_path(instance: &Path) -> std::path::PathBuf {
    instance.with_extension("vars")
}

/// Encodes the integer table, runs the solver on `instance` and decodes
/// and certifies its model.
pub fn solve_external(
    table: &ScoreTable,
    scale: i64,
    cmd: &SolverCommand,
    instance: &Path,
) -> Result<SolveResult, SolveError> {
    let ints: IntScoreTable = integer_scale(table, scale)?;
    let enc = build_encoding(&ints)?;
    write_instance(&enc, instance)?;
    let model = run_external(&enc, cmd, instance)?;
    let decoded = decode_model(&enc, &model, &ints)?;
    let mut network = decoded.network;
    network.score = network_score(table, &network.cliques, &network.separators())?;
    let certificate = certify(&network, table);
    Ok(SolveResult {
        method: Method::External,
        network,
        objective_int: decoded.objective,
        certificate,
        graphs_visited: None,
        chordal_graphs: None,
    })
}
