//! C interface to chordnet.
//!
//! Objects are opaque heap handles, each with its own `_free`. Every call
//! that can fail returns a [`ChordnetStatus`]; on failure the message is
//! available from [`chordnet_last_error`] on the same thread. Strings
//! handed out by the library are released with [`chordnet_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Duration;

use chordnet::dataset::{load_dataset, Dataset};
use chordnet::encoder::{build_encoding, emit_wcnf, write_sidecar};
use chordnet::scoring::{
    build_score_table, integer_scale, read_score_file, write_score_file, PriorSpec, ScoreTable, SubsetScores,
};
use chordnet::solve::{solve_external, solve_oracle, OracleOptions, SolveError, SolveResult, SolverCommand};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChordnetStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    /// The external solver failed, timed out or gave an unusable answer.
    SolverFailure = 4,
    Panic = 5,
}

pub struct ChordnetDataset(Dataset);

pub struct ChordnetScores(ScoreTable);

pub struct ChordnetResult(SolveResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl std::fmt::Display) {
    let text = CString::new(message.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(ChordnetStatus, String);

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure(ChordnetStatus::InvalidInput, e.to_string())
}

fn from_solve(e: SolveError) -> Failure {
    let status = match e {
        SolveError::NoVariables
        | SolveError::OracleTooLarge { .. }
        | SolveError::NeedsAllowLarge(_)
        | SolveError::BadTemplate(_)
        | SolveError::Score(_) => ChordnetStatus::InvalidInput,
        _ => ChordnetStatus::SolverFailure,
    };
    Failure(status, e.to_string())
}

/// Runs `body`, recording any failure or panic for `chordnet_last_error`.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> ChordnetStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            ChordnetStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ChordnetStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(ChordnetStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(ChordnetStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(ChordnetStatus::NullArgument, format!("{what} is null")))
}

fn out_ptr<T>(out: *mut *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure(ChordnetStatus::NullArgument, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

fn to_c(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(invalid)
}

/// Message for the last failed call on this thread, or "" after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn chordnet_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn chordnet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses CSV text: a header of names, then integer-coded rows.
/// Arities are inferred.
///
/// # Safety
/// `csv` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chordnet_dataset_from_csv(csv: *const c_char, out: *mut *mut ChordnetDataset) -> ChordnetStatus {
    guard(|| {
        out_ptr(out)?;
        let d = load_dataset(text(csv, "csv")?, None).map_err(invalid)?;
        *out = Box::into_raw(Box::new(ChordnetDataset(d)));
        Ok(())
    })
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live dataset handle.
#[no_mangle]
pub unsafe extern "C" fn chordnet_dataset_n_vars(d: *const ChordnetDataset) -> usize {
    d.as_ref().map_or(0, |d| d.0.n_vars())
}

/// Number of rows, or 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live dataset handle.
#[no_mangle]
pub unsafe extern "C" fn chordnet_dataset_rows(d: *const ChordnetDataset) -> usize {
    d.as_ref().map_or(0, |d| d.0.row_count())
}

/// # Safety
/// `d` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn chordnet_dataset_free(d: *mut ChordnetDataset) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Scores every candidate clique of up to `max_clique` variables
/// (0 means no cap) with pseudocount `prior` per cell.
///
/// # Safety
/// `d` must be a live dataset handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chordnet_scores_compute(
    d: *const ChordnetDataset,
    prior: f64,
    max_clique: usize,
    out: *mut *mut ChordnetScores,
) -> ChordnetStatus {
    guard(|| {
        out_ptr(out)?;
        let d = &handle(d, "dataset")?.0;
        let prior = PriorSpec::new(prior).map_err(invalid)?;
        let cap = if max_clique == 0 { d.n_vars() } else { max_clique };
        let t = build_score_table(d, prior, cap).map_err(invalid)?;
        *out = Box::into_raw(Box::new(ChordnetScores(t)));
        Ok(())
    })
}

/// Reads a score file.
///
/// # Safety
/// `s` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chordnet_scores_from_text(s: *const c_char, out: *mut *mut ChordnetScores) -> ChordnetStatus {
    guard(|| {
        out_ptr(out)?;
        let t = read_score_file(text(s, "score text")?).map_err(invalid)?;
        *out = Box::into_raw(Box::new(ChordnetScores(t)));
        Ok(())
    })
}

/// Writes the score file format to a new string.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable. Free the string
/// with `chordnet_string_free`.
#[no_mangle]
pub unsafe extern "C" fn chordnet_scores_to_text(t: *const ChordnetScores, out: *mut *mut c_char) -> ChordnetStatus {
    guard(|| {
        out_ptr(out)?;
        *out = to_c(write_score_file(&handle(t, "scores")?.0))?;
        Ok(())
    })
}

/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn chordnet_scores_n_vars(t: *const ChordnetScores) -> usize {
    t.as_ref().map_or(0, |t| t.0.n_vars())
}

/// # Safety
/// `t` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn chordnet_scores_free(t: *mut ChordnetScores) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Builds the weighted MaxSAT instance for scores scaled by `scale`.
/// Either output may be null if not wanted.
///
/// # Safety
/// `t` must be a live handle; non-null outputs must be writable. Free
/// the strings with `chordnet_string_free`.
#[no_mangle]
pub unsafe extern "C" fn chordnet_encode(
    t: *const ChordnetScores,
    scale: i64,
    wcnf_out: *mut *mut c_char,
    sidecar_out: *mut *mut c_char,
) -> ChordnetStatus {
    guard(|| {
        let ints = integer_scale(&handle(t, "scores")?.0, scale).map_err(invalid)?;
        let enc = build_encoding(&ints).map_err(invalid)?;
        if !wcnf_out.is_null() {
            *wcnf_out = to_c(emit_wcnf(&enc))?;
        }
        if !sidecar_out.is_null() {
            *sidecar_out = to_c(write_sidecar(&enc.varmap))?;
        }
        Ok(())
    })
}

/// Exhaustive search. More than 6 variables needs `allow_large`.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn chordnet_solve_oracle(
    t: *const ChordnetScores,
    scale: i64,
    allow_large: bool,
    out: *mut *mut ChordnetResult,
) -> ChordnetStatus {
    guard(|| {
        out_ptr(out)?;
        let opts = OracleOptions {
            allow_large,
            ..OracleOptions::default()
        };
        let r = solve_oracle(&handle(t, "scores")?.0, scale, opts).map_err(from_solve)?;
        *out = Box::into_raw(Box::new(ChordnetResult(r)));
        Ok(())
    })
}

/// Runs an external MaxSAT solver. `command` contains `{}` where the
/// instance path goes; the instance and its sidecar are written to
/// `instance_path`. A `timeout_secs` of 0 or less means no limit.
///
/// # Safety
/// Strings must be NUL-terminated; `t` must be a live handle; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn chordnet_solve_external(
    t: *const ChordnetScores,
    scale: i64,
    command: *const c_char,
    instance_path: *const c_char,
    timeout_secs: f64,
    out: *mut *mut ChordnetResult,
) -> ChordnetStatus {
    guard(|| {
        out_ptr(out)?;
        let mut cmd = SolverCommand::parse(text(command, "command")?).map_err(from_solve)?;
        if timeout_secs > 0.0 && timeout_secs.is_finite() {
            cmd = cmd.with_timeout(Duration::from_secs_f64(timeout_secs));
        }
        let instance = Path::new(text(instance_path, "instance path")?);
        let r = solve_external(&handle(t, "scores")?.0, scale, &cmd, instance).map_err(from_solve)?;
        *out = Box::into_raw(Box::new(ChordnetResult(r)));
        Ok(())
    })
}

/// Real-valued log score of the network, or NaN for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn chordnet_result_objective(r: *const ChordnetResult) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.network.score)
}

/// Objective on the integer-scaled scores, or 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn chordnet_result_objective_int(r: *const ChordnetResult) -> i64 {
    r.as_ref().map_or(0, |r| r.0.objective_int)
}

/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn chordnet_result_clique_count(r: *const ChordnetResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.network.cliques.len())
}

/// Clique `i` as a bitmask, bit k set for variable k. 0 when out of range.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn chordnet_result_clique(r: *const ChordnetResult, i: usize) -> u32 {
    r.as_ref()
        .and_then(|r| r.0.network.cliques.get(i))
        .map_or(0, |c| c.bits())
}

/// Whether every certificate check passed.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn chordnet_result_certified(r: *const ChordnetResult) -> bool {
    r.as_ref().is_some_and(|r| r.0.certificate.all_pass())
}

/// The JSON report the command-line `solve` writes.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable. Free the string
/// with `chordnet_string_free`.
#[no_mangle]
pub unsafe extern "C" fn chordnet_result_to_json(r: *const ChordnetResult, out: *mut *mut c_char) -> ChordnetStatus {
    guard(|| {
        out_ptr(out)?;
        let report = handle(r, "result")?.0.report();
        *out = to_c(serde_json::to_string_pretty(&report).map_err(invalid)?)?;
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn chordnet_result_free(r: *mut ChordnetResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Pointer to the NUL-terminated version string. Do not free.
#[no_mangle]
pub extern "C" fn chordnet_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
