//! C ABI over the trichotomy crate.
//!
//! Conventions:
//!
//! * Every function returns a [`TriStatus`]; output values go through `out`
//!   pointers that are written only on `TRI_STATUS_OK`.
//! * Handles ([`TriClass`], [`TriRunner`], [`TriCurve`]) are opaque.  Each
//!   `*_new`/`*_run` constructor has a matching `*_free`; passing null to a
//!   `*_free` is a no-op, and every other null argument fails with
//!   `TRI_STATUS_NULL_ARGUMENT`.  Handles are not thread-safe; guard shared
//!   handles externally.
//! * On any failure the error message is stored per thread and readable via
//!   [`tri_last_error`] until the next failing call on the same thread.
//! * Strings returned through `char **` outputs are NUL-terminated, owned by
//!   the caller, and must be released with [`tri_string_free`].
//! * Panics never unwind across the boundary: they are caught and reported
//!   as `TRI_STATUS_PANIC`.
//!
//! The matching header is generated into `include/trichotomy.h` at build
//! time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use trichotomy::classes::{ClassSpec, ConceptClass, DimResult};
use trichotomy::harness::{
    fit_rate, run_experiment, trichotomy_report, CurveMetric, ExperimentSpec, LearningCurve,
    SearchCaps,
};
use trichotomy::online::{online_predict, online_update, OnlineLearnerState};
use trichotomy::{Error, Result};

/// Status code of every FFI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriStatus {
    /// Success; out parameters are valid.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    Utf8 = 2,
    /// Malformed configuration (bad TOML, out-of-range parameter).
    Config = 3,
    /// A point, tuple, or label fell outside the domain.
    Domain = 4,
    /// An explicit search or materialization budget was exceeded.
    Budget = 5,
    /// Operation applied to a handle in the wrong state.
    State = 6,
    /// Observed data is inconsistent with every hypothesis.
    Realizability = 7,
    /// The requested object does not exist (no such tree, pair, schedule).
    Construction = 8,
    /// I/O failure.
    Io = 9,
    /// A panic was caught at the ABI boundary; see `tri_last_error`.
    Panic = 10,
}

/// An immutable concept class plus the spec it was generated from.
pub struct TriClass {
    spec: ClassSpec,
    class: ConceptClass,
}

/// A stateful online-learner session over a class.
pub struct TriRunner {
    class: ConceptClass,
    state: OnlineLearnerState,
}

/// A finished learning curve.
pub struct TriCurve {
    curve: LearningCurve,
}

/// One aggregated grid point of a learning curve.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct TriCurvePoint {
    /// Sample size.
    pub n: usize,
    /// Mean exact error over the seeds.
    pub mean_err: f64,
    /// Fraction of seeds with strictly positive error.
    pub p_nonzero: f64,
    /// Standard error of the mean.
    pub stderr: f64,
    /// Seeds aggregated.
    pub seeds: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> =
        RefCell::new(CString::new("no error").expect("static string has no NUL"));
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() =
            CString::new(sanitized).unwrap_or_else(|_| CString::new("error").expect("no NUL"));
    });
}

fn status_of(error: &Error) -> TriStatus {
    match error {
        Error::Config(_) => TriStatus::Config,
        Error::Domain(_) => TriStatus::Domain,
        Error::Budget(_) => TriStatus::Budget,
        Error::State(_) => TriStatus::State,
        Error::Realizability(_) => TriStatus::Realizability,
        Error::Construction(_) => TriStatus::Construction,
        Error::Io(_) => TriStatus::Io,
    }
}

fn fail(error: &Error) -> TriStatus {
    set_last_error(&error.to_string());
    status_of(error)
}

fn fail_null(name: &str) -> TriStatus {
    set_last_error(&format!("required argument '{name}' is null"));
    TriStatus::NullArgument
}

/// Run `body` with panics converted to `TRI_STATUS_PANIC` and errors to
/// their status, recording the message either way.
fn guard(body: impl FnOnce() -> Result<TriStatus>) -> TriStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(e)) => fail(&e),
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| (*s).to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic of unknown type".into());
            set_last_error(&format!("panic: {message}"));
            TriStatus::Panic
        }
    }
}

/// # Safety
/// `text` must be a valid NUL-terminated string pointer.
unsafe fn read_str<'a>(text: *const c_char, name: &str) -> std::result::Result<&'a str, TriStatus> {
    if text.is_null() {
        return Err(fail_null(name));
    }
    CStr::from_ptr(text).to_str().map_err(|_| {
        set_last_error(&format!("argument '{name}' is not valid UTF-8"));
        TriStatus::Utf8
    })
}

fn give_string(text: String, out: *mut *mut c_char) -> Result<TriStatus> {
    let c = CString::new(text.replace('\0', " "))
        .map_err(|_| Error::Config("string contains an interior NUL".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(TriStatus::Ok)
}

/// Message of the most recent failure on this thread, NUL-terminated.
/// Valid until the next failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn tri_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned by this library.  Null is a no-op.
///
/// # Safety
/// `text` must be a pointer previously returned through a `char **` output
/// of this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tri_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Build a concept class from a TOML class table, e.g.
/// `kind = "thresholds"\nm = 16`.
///
/// # Safety
/// `spec_toml` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tri_class_new(
    spec_toml: *const c_char,
    out: *mut *mut TriClass,
) -> TriStatus {
    guard(|| {
        if out.is_null() {
            return Ok(fail_null("out"));
        }
        let text = match read_str(spec_toml, "spec_toml") {
            Ok(t) => t,
            Err(status) => return Ok(status),
        };
        let spec: ClassSpec =
            toml::from_str(text).map_err(|e| Error::Config(format!("bad class spec: {e}")))?;
        let class = ConceptClass::generate(&spec)?;
        *out = Box::into_raw(Box::new(TriClass { spec, class }));
        Ok(TriStatus::Ok)
    })
}

/// Release a class handle.  Null is a no-op.
///
/// # Safety
/// `class` must be a handle from [`tri_class_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tri_class_free(class: *mut TriClass) {
    if !class.is_null() {
        drop(Box::from_raw(class));
    }
}

/// Number of domain points.
///
/// # Safety
/// `class` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tri_class_domain_size(
    class: *const TriClass,
    out: *mut usize,
) -> TriStatus {
    guard(|| {
        let (Some(class), false) = (class.as_ref(), out.is_null()) else {
            return Ok(fail_null("class/out"));
        };
        *out = class.class.domain().size();
        Ok(TriStatus::Ok)
    })
}

/// Number of hypotheses.
///
/// # Safety
/// `class` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tri_class_hypothesis_count(
    class: *const TriClass,
    out: *mut u64,
) -> TriStatus {
    guard(|| {
        let (Some(class), false) = (class.as_ref(), out.is_null()) else {
            return Ok(fail_null("class/out"));
        };
        let count = class.class.size();
        *out = u64::try_from(count)
            .map_err(|_| Error::Budget(format!("hypothesis count {count} exceeds 64 bits")))?;
        Ok(TriStatus::Ok)
    })
}

unsafe fn dim_out(
    result: DimResult,
    out_value: *mut i64,
    out_exact: *mut bool,
) -> Result<TriStatus> {
    match result {
        DimResult::Exact { value } => {
            *out_value = value;
            *out_exact = true;
        }
        DimResult::AtLeastCap { cap } => {
            *out_value = i64::from(cap);
            *out_exact = false;
        }
    }
    Ok(TriStatus::Ok)
}

/// Littlestone dimension, searched up to `cap`.  `*out_exact` reports
/// whether the value is exact or only a certified lower bound at the cap.
///
/// # Safety
/// `class` must be a live handle; both outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn tri_class_littlestone_dimension(
    class: *const TriClass,
    cap: u32,
    out_value: *mut i64,
    out_exact: *mut bool,
) -> TriStatus {
    guard(|| {
        let (Some(class), false) = (class.as_ref(), out_value.is_null() || out_exact.is_null())
        else {
            return Ok(fail_null("class/out_value/out_exact"));
        };
        dim_out(
            trichotomy::trees::littlestone_dimension(&class.class, cap)?,
            out_value,
            out_exact,
        )
    })
}

/// VC dimension, searched up to `cap`.  `*out_exact` reports whether the
/// value is exact or only a certified lower bound at the cap.
///
/// # Safety
/// `class` must be a live handle; both outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn tri_class_vc_dimension(
    class: *const TriClass,
    cap: u32,
    out_value: *mut i64,
    out_exact: *mut bool,
) -> TriStatus {
    guard(|| {
        let (Some(class), false) = (class.as_ref(), out_value.is_null() || out_exact.is_null())
        else {
            return Ok(fail_null("class/out_value/out_exact"));
        };
        dim_out(class.class.vc_dimension(cap)?, out_value, out_exact)
    })
}

/// Structural rate verdict (exponential / linear / arbitrarily slow) with
/// evidence, as a JSON document.  Free the string with [`tri_string_free`].
///
/// # Safety
/// `class` must be a live handle; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tri_class_verdict_json(
    class: *const TriClass,
    out_json: *mut *mut c_char,
) -> TriStatus {
    guard(|| {
        let (Some(class), false) = (class.as_ref(), out_json.is_null()) else {
            return Ok(fail_null("class/out_json"));
        };
        let record = trichotomy_report(&class.spec, &SearchCaps::default())?;
        let json = serde_json::to_string_pretty(&record)
            .map_err(|e| Error::Config(format!("unserializable verdict: {e}")))?;
        give_string(json, out_json)
    })
}

/// Start an online-learner session on the class.
///
/// # Safety
/// `class` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tri_runner_new(
    class: *const TriClass,
    out: *mut *mut TriRunner,
) -> TriStatus {
    guard(|| {
        let (Some(class), false) = (class.as_ref(), out.is_null()) else {
            return Ok(fail_null("class/out"));
        };
        let owned = class.class.clone();
        let state = OnlineLearnerState::fresh(&owned)?;
        *out = Box::into_raw(Box::new(TriRunner { class: owned, state }));
        Ok(TriStatus::Ok)
    })
}

/// Release a runner handle.  Null is a no-op.
///
/// # Safety
/// `runner` must be a handle from [`tri_runner_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tri_runner_free(runner: *mut TriRunner) {
    if !runner.is_null() {
        drop(Box::from_raw(runner));
    }
}

/// The learner's prediction at point `x`; does not change state.
///
/// # Safety
/// `runner` must be a live handle; `out_prediction` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tri_runner_predict(
    runner: *const TriRunner,
    x: u32,
    out_prediction: *mut u8,
) -> TriStatus {
    guard(|| {
        let (Some(runner), false) = (runner.as_ref(), out_prediction.is_null()) else {
            return Ok(fail_null("runner/out_prediction"));
        };
        *out_prediction = online_predict(&runner.class, &runner.state, x)?;
        Ok(TriStatus::Ok)
    })
}

/// Advance the learner on an observed `(x, y)` pair.  `*out_mistake`
/// reports whether the learner had predicted wrongly.
///
/// # Safety
/// `runner` must be a live handle; `out_mistake` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tri_runner_observe(
    runner: *mut TriRunner,
    x: u32,
    y: u8,
    out_mistake: *mut bool,
) -> TriStatus {
    guard(|| {
        let (Some(runner), false) = (runner.as_mut(), out_mistake.is_null()) else {
            return Ok(fail_null("runner/out_mistake"));
        };
        let before = runner.state.mistake_count();
        runner.state = online_update(&runner.class, &runner.state, x, y)?;
        *out_mistake = runner.state.mistake_count() > before;
        Ok(TriStatus::Ok)
    })
}

/// Mistakes made so far.
///
/// # Safety
/// `runner` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tri_runner_mistakes(
    runner: *const TriRunner,
    out: *mut u64,
) -> TriStatus {
    guard(|| {
        let (Some(runner), false) = (runner.as_ref(), out.is_null()) else {
            return Ok(fail_null("runner/out"));
        };
        *out = runner.state.mistake_count();
        Ok(TriStatus::Ok)
    })
}

/// Littlestone dimension of the class restricted by the mistakes so far —
/// how many more mistakes an adversary can still force.
///
/// # Safety
/// `runner` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tri_runner_game_value(
    runner: *const TriRunner,
    out: *mut i64,
) -> TriStatus {
    guard(|| {
        let (Some(runner), false) = (runner.as_ref(), out.is_null()) else {
            return Ok(fail_null("runner/out"));
        };
        *out = runner.state.game_value();
        Ok(TriStatus::Ok)
    })
}

/// Run a learning-curve experiment from a TOML experiment spec (same schema
/// as the CLI `curve` subcommand).
///
/// # Safety
/// `spec_toml` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tri_curve_run(
    spec_toml: *const c_char,
    out: *mut *mut TriCurve,
) -> TriStatus {
    guard(|| {
        if out.is_null() {
            return Ok(fail_null("out"));
        }
        let text = match read_str(spec_toml, "spec_toml") {
            Ok(t) => t,
            Err(status) => return Ok(status),
        };
        let spec = ExperimentSpec::from_toml(text)?;
        let curve = run_experiment(&spec)?;
        *out = Box::into_raw(Box::new(TriCurve { curve }));
        Ok(TriStatus::Ok)
    })
}

/// Release a curve handle.  Null is a no-op.
///
/// # Safety
/// `curve` must be a handle from [`tri_curve_run`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tri_curve_free(curve: *mut TriCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Number of grid points in the curve.
///
/// # Safety
/// `curve` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tri_curve_len(curve: *const TriCurve, out: *mut usize) -> TriStatus {
    guard(|| {
        let (Some(curve), false) = (curve.as_ref(), out.is_null()) else {
            return Ok(fail_null("curve/out"));
        };
        *out = curve.curve.points.len();
        Ok(TriStatus::Ok)
    })
}

/// Copy out one grid point by index.
///
/// # Safety
/// `curve` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tri_curve_point(
    curve: *const TriCurve,
    index: usize,
    out: *mut TriCurvePoint,
) -> TriStatus {
    guard(|| {
        let (Some(curve), false) = (curve.as_ref(), out.is_null()) else {
            return Ok(fail_null("curve/out"));
        };
        let point = curve.curve.points.get(index).ok_or_else(|| {
            Error::Config(format!(
                "curve index {index} out of range 0..{}",
                curve.curve.points.len()
            ))
        })?;
        *out = TriCurvePoint {
            n: point.n,
            mean_err: point.mean_err,
            p_nonzero: point.p_nonzero,
            stderr: point.stderr,
            seeds: point.seeds,
        };
        Ok(TriStatus::Ok)
    })
}

/// The curve as CSV (header `n,mean_err,p_nonzero,stderr,seeds`).  Free the
/// string with [`tri_string_free`].
///
/// # Safety
/// `curve` must be a live handle; `out_csv` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tri_curve_csv(
    curve: *const TriCurve,
    out_csv: *mut *mut c_char,
) -> TriStatus {
    guard(|| {
        let (Some(curve), false) = (curve.as_ref(), out_csv.is_null()) else {
            return Ok(fail_null("curve/out_csv"));
        };
        give_string(curve.curve.to_csv(), out_csv)
    })
}

/// Decay-model fits of the curve for both metrics (mean error and
/// P(error>0)), as a JSON document.  Free the string with
/// [`tri_string_free`].
///
/// # Safety
/// `curve` must be a live handle; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tri_curve_fit_json(
    curve: *const TriCurve,
    out_json: *mut *mut c_char,
) -> TriStatus {
    guard(|| {
        let (Some(curve), false) = (curve.as_ref(), out_json.is_null()) else {
            return Ok(fail_null("curve/out_json"));
        };
        let fits = serde_json::json!({
            "mean_error": fit_rate(&curve.curve, CurveMetric::MeanError)?,
            "p_nonzero": fit_rate(&curve.curve, CurveMetric::PNonzero)?,
        });
        let json = serde_json::to_string_pretty(&fits)
            .map_err(|e| Error::Config(format!("unserializable fit: {e}")))?;
        give_string(json, out_json)
    })
}
