use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use setmc_ffi::*;

fn models_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn model_text(file: &str) -> CString {
    CString::new(std::fs::read_to_string(models_dir().join(file)).unwrap()).unwrap()
}

fn parse(file: &str) -> *mut SetmcModel {
    let text = model_text(file);
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { setmc_model_parse(text.as_ptr(), &mut m) }, SetmcStatus::Ok);
    assert!(!m.is_null());
    m
}

fn last_error() -> String {
    let p = setmc_last_error();
    assert!(!p.is_null(), "no error message recorded");
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { setmc_string_free(p) };
    s
}

fn check(m: *const SetmcModel, ltl: Option<&str>, opts: &SetmcOptions) -> (SetmcStatus, *mut SetmcVerdict) {
    let ltl = ltl.map(|l| CString::new(l).unwrap());
    let mut v = ptr::null_mut();
    let st = unsafe {
        setmc_check(m, ptr::null(), ltl.as_ref().map_or(ptr::null(), |l| l.as_ptr()), opts, &mut v)
    };
    (st, v)
}

#[test]
fn counter_verdicts_and_trace() {
    let m = parse("counter.cdve");
    let mut opts = setmc_default_options();
    let (st, v) = check(m, None, &opts);
    assert_eq!(st, SetmcStatus::Ok);
    assert!(setmc_last_error().is_null());
    unsafe {
        assert!(!setmc_verdict_holds(v));
        assert_eq!(setmc_verdict_states(v), 3);
        assert_eq!(setmc_verdict_transitions(v), 3);
        assert_eq!(setmc_verdict_iterations(v), 0);
        assert!(setmc_verdict_seconds(v) >= 0.0);
        let trace = take_string(setmc_verdict_trace_text(v));
        assert!(trace.starts_with("trace concrete counter\n"), "{trace}");
        setmc_verdict_free(v);
    }

    opts.mode = SetmcMode::Exp as u32;
    opts.algorithm = SetmcAlgorithm::Owcty as u32;
    let (st, v) = check(m, None, &opts);
    assert_eq!(st, SetmcStatus::Ok);
    unsafe {
        assert!(!setmc_verdict_holds(v));
        assert_eq!(setmc_verdict_states(v), 768);
        assert!(setmc_verdict_iterations(v) > 0);
        setmc_verdict_free(v);
        let mut name = ptr::null_mut();
        assert_eq!(setmc_model_name(m, &mut name), SetmcStatus::Ok);
        assert_eq!(take_string(name), "counter");
        setmc_model_free(m);
    }
}

#[test]
fn holding_property_has_no_trace() {
    let m = parse("subsumption.cdve");
    let (st, v) = check(m, None, &setmc_default_options());
    assert_eq!(st, SetmcStatus::Ok);
    unsafe {
        assert!(setmc_verdict_holds(v));
        assert!(setmc_verdict_trace_text(v).is_null());
        setmc_verdict_free(v);
        setmc_model_free(m);
    }
}

#[test]
fn formula_over_block_aps() {
    let m = parse("countdown.cdve");
    let opts = SetmcOptions {
        self_loop_deadlocks: false,
        ..setmc_default_options()
    };
    let (st, v) = check(m, Some("G !done"), &opts);
    assert_eq!(st, SetmcStatus::Ok);
    unsafe {
        assert!(!setmc_verdict_holds(v));
        setmc_verdict_free(v);
        setmc_model_free(m);
    }
}

#[test]
fn error_statuses() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(setmc_model_parse(ptr::null(), &mut m), SetmcStatus::NullArgument);
        assert!(last_error().contains("text"));
        let text = model_text("counter.cdve");
        assert_eq!(setmc_model_parse(text.as_ptr(), ptr::null_mut()), SetmcStatus::NullArgument);

        let bad = [0xffu8, 0];
        assert_eq!(setmc_model_parse(bad.as_ptr().cast(), &mut m), SetmcStatus::InvalidUtf8);
        let broken = CString::new("model broken").unwrap();
        assert_eq!(setmc_model_parse(broken.as_ptr(), &mut m), SetmcStatus::ModelError);
        assert!(m.is_null());
        assert!(!last_error().is_empty());
    }

    let m = parse("countdown.cdve");
    let opts = setmc_default_options();
    // Two property blocks and no choice.
    let (st, v) = check(m, None, &opts);
    assert_eq!(st, SetmcStatus::PropertyError);
    assert!(v.is_null());
    assert!(last_error().contains("property"), "{}", last_error());
    let (st, _) = check(m, Some("G unknown"), &opts);
    assert_eq!(st, SetmcStatus::PropertyError);
    let (st, _) = check(ptr::null(), Some("G true"), &opts);
    assert_eq!(st, SetmcStatus::NullArgument);

    let bad_mode = SetmcOptions {
        mode: 7,
        ..opts
    };
    let (st, _) = check(m, Some("G true"), &bad_mode);
    assert_eq!(st, SetmcStatus::InvalidArgument);
    let tiny = SetmcOptions {
        max_store_bytes: 100,
        ..opts
    };
    let (st, _) = check(m, Some("G true"), &tiny);
    assert_eq!(st, SetmcStatus::StoreBudget);
    let few = SetmcOptions {
        max_evals: 10,
        ..opts
    };
    let (st, _) = check(m, Some("G true"), &few);
    assert_eq!(st, SetmcStatus::ExploreError);
    unsafe { setmc_model_free(m) };
}

#[test]
fn peterson_generator() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(setmc_generate_peterson(4, &mut out), SetmcStatus::Ok);
        let text = take_string(out);
        assert_eq!(text, model_text("peterson4.cdve").to_str().unwrap());
        assert_eq!(setmc_generate_peterson(0, &mut out), SetmcStatus::InvalidArgument);
        assert!(out.is_null());
        setmc_string_free(ptr::null_mut());
        setmc_model_free(ptr::null_mut());
        setmc_verdict_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/setmc.h")).unwrap();
    for f in [
        "setmc_last_error",
        "setmc_default_options",
        "setmc_model_parse",
        "setmc_model_free",
        "setmc_model_name",
        "setmc_check",
        "setmc_verdict_holds",
        "setmc_verdict_states",
        "setmc_verdict_transitions",
        "setmc_verdict_iterations",
        "setmc_verdict_seconds",
        "setmc_verdict_trace_text",
        "setmc_verdict_free",
        "setmc_generate_peterson",
        "setmc_string_free",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from the header");
    }
    assert!(header.contains("typedef struct SetmcModel SetmcModel;"));
    assert!(header.contains("SETMC_STATUS_STORE_BUDGET = 8"));
}

/// Compiles the C smoke program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = lib_dir.join("libsetmc_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler named cc");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout, "holds=0 states=3 trace=yes\nbroken=4 null=1\n");
}
