//! C ABI for setmc.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `*_free` function. Every fallible call returns a
//! [`SetmcStatus`] and stores a message retrievable with
//! [`setmc_last_error`] on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::{Duration, Instant};

use setmc::cli::{check_product, explain, generate_peterson, resolve_property, Algorithm, CliError, Mode, PropertySource};
use setmc::cycledetect::{SearchError, SearchLimits, DEFAULT_MAX_STORE_BYTES};
use setmc::explore::{ExploreOptions, Product};
use setmc::model::{parse_model, Model};
use setmc::multistate::DEFAULT_EVAL_CAP;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetmcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    ModelError = 4,
    PropertyError = 5,
    ExploreError = 6,
    Timeout = 7,
    StoreBudget = 8,
    CounterexampleError = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetmcMode {
    Sym = 0,
    Exp = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetmcAlgorithm {
    Ndfs = 0,
    Owcty = 1,
}

/// Check configuration. Zero in `max_store_bytes`, `max_evals` or
/// `timeout_ms` selects the default (4 GiB, 2^24 evaluations, no timeout).
/// `mode` and `algorithm` hold [`SetmcMode`] and [`SetmcAlgorithm`] values.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SetmcOptions {
    pub mode: u32,
    pub algorithm: u32,
    pub max_store_bytes: u64,
    pub max_evals: u64,
    pub timeout_ms: u64,
    pub self_loop_deadlocks: bool,
}

/// A parsed model.
pub struct SetmcModel {
    model: Model,
}

/// The result of a completed check.
pub struct SetmcVerdict {
    holds: bool,
    states: u64,
    transitions: u64,
    iterations: u64,
    wall_time_s: f64,
    trace: Option<String>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs were removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(SetmcStatus, String);

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = match &e {
            CliError::Model(_) => SetmcStatus::ModelError,
            CliError::Property(_) => SetmcStatus::PropertyError,
            CliError::Explore(_) => SetmcStatus::ExploreError,
            CliError::Counterexample(_) => SetmcStatus::CounterexampleError,
            _ => SetmcStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

/// Runs `f`, translating failures and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SetmcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SetmcStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            SetmcStatus::Panic
        }
    }
}

unsafe fn opt_str<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Some)
        .map_err(|_| Failure(SetmcStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn null(what: &str) -> Failure {
    Failure(SetmcStatus::NullArgument, format!("{what} is NULL"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("NULs were removed")
        .into_raw()
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next setmc call on the same thread.
#[no_mangle]
pub extern "C" fn setmc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn setmc_default_options() -> SetmcOptions {
    SetmcOptions {
        mode: SetmcMode::Sym as u32,
        algorithm: SetmcAlgorithm::Ndfs as u32,
        max_store_bytes: 0,
        max_evals: 0,
        timeout_ms: 0,
        self_loop_deadlocks: false,
    }
}

/// Parses model source text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn setmc_model_parse(text: *const c_char, out: *mut *mut SetmcModel) -> SetmcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = opt_str(text, "text")?.ok_or_else(|| null("text"))?;
        let model = parse_model(text).map_err(|e| Failure(SetmcStatus::ModelError, e.to_string()))?;
        *out = Box::into_raw(Box::new(SetmcModel { model }));
        Ok(())
    })
}

/// # Safety
/// `model` must be NULL or a handle from [`setmc_model_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn setmc_model_free(model: *mut SetmcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Name declared by `model <name>;`. Free it with [`setmc_string_free`].
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn setmc_model_name(model: *const SetmcModel, out: *mut *mut c_char) -> SetmcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        *out = into_c_string(m.model.name.clone());
        Ok(())
    })
}

/// Checks the model against a property. `property` names a `#property`
/// block and `ltl` gives a formula over the APs of the model's blocks; either
/// may be NULL, following the same rules as `setmc check`. `options` may be
/// NULL for the defaults. Timeouts and store exhaustion are reported as
/// statuses, not verdicts.
///
/// # Safety
/// `model` must be a live handle, the strings NULL or NUL-terminated, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn setmc_check(
    model: *const SetmcModel,
    property: *const c_char,
    ltl: *const c_char,
    options: *const SetmcOptions,
    out: *mut *mut SetmcVerdict,
) -> SetmcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let opts = options.as_ref().copied().unwrap_or_else(|| setmc_default_options());
        let mode = match opts.mode {
            0 => Mode::Sym,
            1 => Mode::Exp,
            m => return Err(Failure(SetmcStatus::InvalidArgument, format!("unknown mode {m}"))),
        };
        let algorithm = match opts.algorithm {
            0 => Algorithm::Ndfs,
            1 => Algorithm::Owcty,
            a => return Err(Failure(SetmcStatus::InvalidArgument, format!("unknown algorithm {a}"))),
        };
        let src = PropertySource {
            property: opt_str(property, "property")?.map(str::to_string),
            ltl: opt_str(ltl, "ltl")?.map(str::to_string),
            aps: Vec::new(),
        };
        let prop = resolve_property(&m.model, &src)?;
        let explore = ExploreOptions {
            eval_cap: if opts.max_evals == 0 { DEFAULT_EVAL_CAP } else { opts.max_evals },
            self_loop_deadlocks: opts.self_loop_deadlocks,
        };
        let product = Product::new(m.model.clone(), prop, explore);
        let limits = SearchLimits {
            max_store_bytes: if opts.max_store_bytes == 0 {
                DEFAULT_MAX_STORE_BYTES
            } else {
                opts.max_store_bytes
            },
            deadline: (opts.timeout_ms > 0).then(|| Instant::now() + Duration::from_millis(opts.timeout_ms)),
        };
        let v = check_product(&product, mode, algorithm, limits).map_err(|e| match e {
            SearchError::System(e) => Failure(SetmcStatus::ExploreError, e.to_string()),
            e @ SearchError::Timeout { .. } => Failure(SetmcStatus::Timeout, e.to_string()),
            e @ SearchError::StoreBudget { .. } => Failure(SetmcStatus::StoreBudget, e.to_string()),
        })?;
        let trace = match &v.witness {
            Some(w) => Some(explain(&product, w)?.0.to_text()),
            None => None,
        };
        *out = Box::into_raw(Box::new(SetmcVerdict {
            holds: v.holds,
            states: v.stats.states,
            transitions: v.stats.transitions,
            iterations: v.stats.iterations,
            wall_time_s: v.stats.wall_time.as_secs_f64(),
            trace,
        }));
        Ok(())
    })
}

/// # Safety
/// `verdict` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn setmc_verdict_holds(verdict: *const SetmcVerdict) -> bool {
    verdict.as_ref().is_some_and(|v| v.holds)
}

/// # Safety
/// `verdict` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn setmc_verdict_states(verdict: *const SetmcVerdict) -> u64 {
    verdict.as_ref().map_or(0, |v| v.states)
}

/// # Safety
/// `verdict` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn setmc_verdict_transitions(verdict: *const SetmcVerdict) -> u64 {
    verdict.as_ref().map_or(0, |v| v.transitions)
}

/// OWCTY rounds; zero for NDFS.
///
/// # Safety
/// `verdict` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn setmc_verdict_iterations(verdict: *const SetmcVerdict) -> u64 {
    verdict.as_ref().map_or(0, |v| v.iterations)
}

/// # Safety
/// `verdict` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn setmc_verdict_seconds(verdict: *const SetmcVerdict) -> f64 {
    verdict.as_ref().map_or(0.0, |v| v.wall_time_s)
}

/// Counterexample in the text trace format, or NULL when the property
/// holds. Free the string with [`setmc_string_free`].
///
/// # Safety
/// `verdict` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn setmc_verdict_trace_text(verdict: *const SetmcVerdict) -> *mut c_char {
    match verdict.as_ref().and_then(|v| v.trace.clone()) {
        Some(t) => into_c_string(t),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `verdict` must be NULL or a handle from [`setmc_check`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn setmc_verdict_free(verdict: *mut SetmcVerdict) {
    if !verdict.is_null() {
        drop(Box::from_raw(verdict));
    }
}

/// Source text of the Peterson benchmark with input domain `0..r`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn setmc_generate_peterson(r: u32, out: *mut *mut c_char) -> SetmcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = generate_peterson(r).map_err(|e| Failure(SetmcStatus::InvalidArgument, e))?;
        *out = into_c_string(text);
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn setmc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
