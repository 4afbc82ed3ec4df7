use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use chordnet_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(chordnet_last_error()) }.to_string_lossy().into_owned()
}

fn take(s: *mut std::ffi::c_char) -> String {
    let text = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { chordnet_string_free(s) };
    text
}

const CSV: &str = "a,b,c\n0,0,0\n0,0,1\n1,1,1\n1,1,0\n0,0,0\n1,1,1\n0,1,0\n1,0,1\n";

unsafe fn scores() -> *mut ChordnetScores {
    let csv = CString::new(CSV).unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(chordnet_dataset_from_csv(csv.as_ptr(), &mut d), ChordnetStatus::Ok);
    assert_eq!(chordnet_dataset_n_vars(d), 3);
    assert_eq!(chordnet_dataset_rows(d), 8);
    let mut t = ptr::null_mut();
    assert_eq!(chordnet_scores_compute(d, 0.5, 0, &mut t), ChordnetStatus::Ok);
    chordnet_dataset_free(d);
    t
}

#[test]
fn oracle_round_trip() {
    unsafe {
        let t = scores();
        assert_eq!(chordnet_scores_n_vars(t), 3);

        let mut text = ptr::null_mut();
        assert_eq!(chordnet_scores_to_text(t, &mut text), ChordnetStatus::Ok);
        let text = CString::new(take(text)).unwrap();
        let mut again = ptr::null_mut();
        assert_eq!(chordnet_scores_from_text(text.as_ptr(), &mut again), ChordnetStatus::Ok);

        let mut r = ptr::null_mut();
        assert_eq!(chordnet_solve_oracle(again, 1000, false, &mut r), ChordnetStatus::Ok);
        assert!(chordnet_result_certified(r));
        let k = chordnet_result_clique_count(r);
        assert!((1..=3).contains(&k));
        let covered = (0..k).fold(0, |acc, i| acc | chordnet_result_clique(r, i));
        assert_eq!(covered, 0b111);
        assert_eq!(chordnet_result_clique(r, k), 0);
        assert_eq!(
            chordnet_result_objective_int(r),
            (chordnet_result_objective(r) * 1000.0).round() as i64
        );

        let mut json = ptr::null_mut();
        assert_eq!(chordnet_result_to_json(r, &mut json), ChordnetStatus::Ok);
        assert!(take(json).contains("\"method\": \"oracle\""));

        chordnet_result_free(r);
        chordnet_scores_free(again);
        chordnet_scores_free(t);
    }
}

#[test]
fn encode_produces_instance_and_sidecar() {
    unsafe {
        let t = scores();
        let (mut w, mut s) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(chordnet_encode(t, 1000, &mut w, &mut s), ChordnetStatus::Ok);
        assert!(take(w).lines().any(|l| l.starts_with("p wcnf ")));
        assert!(take(s).starts_with("c n_vars 3"));
        // Outputs are optional.
        assert_eq!(chordnet_encode(t, 1000, ptr::null_mut(), ptr::null_mut()), ChordnetStatus::Ok);
        assert_eq!(chordnet_encode(t, 0, ptr::null_mut(), ptr::null_mut()), ChordnetStatus::InvalidInput);
        chordnet_scores_free(t);
    }
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(chordnet_dataset_from_csv(ptr::null(), &mut d), ChordnetStatus::NullArgument);
        assert!(last_error().contains("csv is null"));

        let bad = CString::new("a,b\n0,1\n1\n").unwrap();
        assert_eq!(chordnet_dataset_from_csv(bad.as_ptr(), &mut d), ChordnetStatus::InvalidInput);
        assert!(last_error().contains("line 3"), "{}", last_error());
        assert!(d.is_null());

        let t = scores();
        assert_eq!(last_error(), "");
        let mut r = ptr::null_mut();
        let no_placeholder = CString::new("maxsat").unwrap();
        let inst = CString::new("/tmp/unused.wcnf").unwrap();
        assert_eq!(
            chordnet_solve_external(t, 1000, no_placeholder.as_ptr(), inst.as_ptr(), 0.0, &mut r),
            ChordnetStatus::InvalidInput
        );

        let dir = tempfile::tempdir().unwrap();
        let script = dir.path().join("crash.sh");
        std::fs::write(&script, "exit 1\n").unwrap();
        let cmd = CString::new(format!("sh {} {{}}", script.display())).unwrap();
        let inst = CString::new(dir.path().join("i.wcnf").to_str().unwrap()).unwrap();
        assert_eq!(
            chordnet_solve_external(t, 1000, cmd.as_ptr(), inst.as_ptr(), 5.0, &mut r),
            ChordnetStatus::SolverFailure
        );
        assert!(last_error().starts_with("solver failure"));
        assert!(r.is_null());

        assert_eq!(chordnet_solve_oracle(t, 1000, false, ptr::null_mut()), ChordnetStatus::NullArgument);
        chordnet_scores_free(t);

        // Null handles are tolerated by accessors and free functions.
        assert_eq!(chordnet_result_clique_count(ptr::null()), 0);
        assert!(!chordnet_result_certified(ptr::null()));
        chordnet_result_free(ptr::null_mut());
        chordnet_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(chordnet_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/chordnet.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["chordnet_solve_oracle", "chordnet_last_error", "CHORDNET_STATUS_SOLVER_FAILURE"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(o) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).output() else {
        eprintln!("no C compiler; syntax check skipped");
        return;
    };
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}
