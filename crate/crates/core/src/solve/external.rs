use std::io::Read;
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use super::SolveError;
use crate::encoder::{Assignment, Encoding, Lit};

/// Placeholder for the instance path in a solver template.
pub const PLACEHOLDER: &str = "{}";

/// External MaxSAT solver invocation, e.g. `"rc2 --model {}"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverCommand {
    pub program: String,
    pub args: Vec<String>,
    pub timeout: Option<Duration>,
}

impl SolverCommand {
    /// Splits a template on whitespace. One argument must contain `{}`.
    pub fn parse(template: &str) -> Result<Self, SolveError> {
        let mut words = template.split_whitespace().map(str::to_owned);
        let program = words
            .next()
            .ok_or_else(|| SolveError::BadTemplate(template.to_owned()))?;
        let args: Vec<String> = words.collect();
        if !args.iter().any(|a| a.contains(PLACEHOLDER)) {
            return Err(SolveError::BadTemplate(template.to_owned()));
        }
        Ok(SolverCommand {
            program,
            args,
            timeout: None,
        })
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = Some(timeout);
        self
    }

    fn build(&self, instance: &Path) -> Command {
        let path = instance.to_string_lossy();
        let mut cmd = Command::new(&self.program);
        cmd.args(self.args.iter().map(|a| a.replace(PLACEHOLDER, &path)));
        cmd
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverStatus {
    Optimum,
    Satisfiable,
    Unsatisfiable,
    Unknown,
}

/// What a solver printed, in the MaxSAT-competition dialect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverOutput {
    pub status: Option<SolverStatus>,
    /// Last `o` line.
    pub cost: Option<u64>,
    /// Signed literals from `v` lines, either listed or as a 0/1 string.
    pub model: Option<Vec<Lit>>,
}

pub fn parse_solver_output(stdout: &str) -> Result<SolverOutput, SolveError> {
    let mut out = SolverOutput {
        status: None,
        cost: None,
        model: None,
    };
    for line in stdout.lines() {
        let line = line.trim();
        let (tag, rest) = line.split_at(line.find(char::is_whitespace).unwrap_or(line.len()));
        let rest = rest.trim();
        match tag {
            "s" => {
                out.status = Some(match rest {
                    "OPTIMUM FOUND" => SolverStatus::Optimum,
                    "SATISFIABLE" => SolverStatus::Satisfiable,
                    "UNSATISFIABLE" => SolverStatus::Unsatisfiable,
                    "UNKNOWN" => SolverStatus::Unknown,
                    other => return Err(SolveError::Unparseable(format!("status line {other:?}"))),
                })
            }
            "o" => {
                let cost = rest
                    .parse()
                    .map_err(|_| SolveError::Unparseable(format!("cost line {rest:?}")))?;
                out.cost = Some(cost);
            }
            "v" => {
                let model = out.model.get_or_insert_with(Vec::new);
                // A lone 0/1 token of length >= 2 is the newer bit-string
                // form; shorter tokens mean the same thing either way.
                let is_bits = rest.len() >= 2 && rest.bytes().all(|b| b == b'0' || b == b'1');
                if is_bits {
                    let base = model.len();
                    model.extend(rest.bytes().enumerate().map(|(i, b)| {
                        let v = (base + i + 1) as Lit;
                        if b == b'1' {
                            v
                        } else {
                            -v
                        }
                    }));
                    continue;
                }
                for tok in rest.split_whitespace() {
                    let l: Lit = tok
                        .parse()
                        .map_err(|_| SolveError::Unparseable(format!("model literal {tok:?}")))?;
                    if l != 0 {
                        model.push(l);
                    }
                }
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Runs the solver on an emitted instance and returns its optimal model.
pub fn run_external(enc: &Encoding, cmd: &SolverCommand, instance: &Path) -> Result<Assignment, SolveError> {
    let mut child = cmd
        .build(instance)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| SolveError::SolverFailure(format!("cannot start {:?}: {e}", cmd.program)))?;
    let mut stdout = child.stdout.take().expect("piped stdout");
    let mut stderr = child.stderr.take().expect("piped stderr");
    let out_reader = thread::spawn(move || {
        let mut s = String::new();
        stdout.read_to_string(&mut s).map(|_| s)
    });
    let err_reader = thread::spawn(move || {
        let mut s = String::new();
        let _ = stderr.read_to_string(&mut s);
        s
    });

    let started = Instant::now();
    let status = loop {
        if let Some(status) = child.try_wait().map_err(|e| SolveError::SolverFailure(e.to_string()))? {
            break status;
        }
        if cmd.timeout.is_some_and(|t| started.elapsed() > t) {
            let _ = child.kill();
            let _ = child.wait();
            return Err(SolveError::Timeout(cmd.timeout.unwrap()));
        }
        thread::sleep(Duration::from_millis(5));
    };
    let text = out_reader
        .join()
        .expect("reader thread")
        .map_err(|e| SolveError::Unparseable(format!("solver output is not UTF-8: {e}")))?;
    let err_text = err_reader.join().expect("reader thread");

    let parsed = parse_solver_output(&text)?;
    // Competition solvers use nonzero exit codes (e.g. 30, 20) for
    // results, so a status line takes precedence over the exit code.
    match parsed.status {
        None if !status.success() => {
            let tail: String = err_text.lines().last().unwrap_or("").chars().take(200).collect();
            Err(SolveError::SolverFailure(format!("exit {status}, no status line; {tail}")))
        }
        None => Err(SolveError::Unparseable("no status line".into())),
        Some(SolverStatus::Unsatisfiable) => Err(SolveError::Unsatisfiable),
        Some(SolverStatus::Unknown) => Err(SolveError::Unknown("solver reported UNKNOWN".into())),
        Some(SolverStatus::Satisfiable) => Err(SolveError::Unknown(
            "solver found a model but did not prove it optimal".into(),
        )),
        Some(SolverStatus::Optimum) => {
            let model = parsed
                .model
                .ok_or_else(|| SolveError::Unparseable("OPTIMUM FOUND without a model".into()))?;
            Ok(Assignment::from_literals(enc.var_count, model))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signed_model() {
        let out = parse_solver_output("c hello\no 12\ns OPTIMUM FOUND\nv 1 -2 3 0\n").unwrap();
        assert_eq!(out.status, Some(SolverStatus::Optimum));
        assert_eq!(out.cost, Some(12));
        assert_eq!(out.model, Some(vec![1, -2, 3]));
        let a = Assignment::from_literals(3, out.model.unwrap());
        assert!(a.value(1) && !a.value(2) && a.value(3));
    }

    #[test]
    fn parses_bit_string_model() {
        let out = parse_solver_output("s OPTIMUM FOUND\nv 1011\n").unwrap();
        assert_eq!(out.model, Some(vec![1, -2, 3, 4]));
    }

    #[test]
    fn multi_line_model() {
        let out = parse_solver_output("s OPTIMUM FOUND\nv 1 -2\nv 3 0\n").unwrap();
        assert_eq!(out.model, Some(vec![1, -2, 3]));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_solver_output("s MAYBE\n").is_err());
        assert!(parse_solver_output("s OPTIMUM FOUND\nv 1 x\n").is_err());
    }

    #[test]
    fn template_needs_placeholder() {
        assert!(SolverCommand::parse("solver --model").is_err());
        assert!(SolverCommand::parse("   ").is_err());
        let c = SolverCommand::parse("solver --in={} -v").unwrap();
        let cmd = c.build(Path::new("/tmp/x.wcnf"));
        let args: Vec<_> = cmd.get_args().map(|a| a.to_string_lossy().into_owned()).collect();
        assert_eq!(args, vec!["--in=/tmp/x.wcnf", "-v"]);
    }
}
