//! End-to-end exercises of the C ABI from the Rust side: handle lifecycle,
//! error reporting, and value round-trips.

use std::ffi::{CStr, CString};
use std::ptr;

use trichotomy_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(tri_last_error()) }.to_str().unwrap().to_string()
}

fn take_string(raw: *mut std::ffi::c_char) -> String {
    assert!(!raw.is_null());
    let text = unsafe { CStr::from_ptr(raw) }.to_str().unwrap().to_string();
    unsafe { tri_string_free(raw) };
    text
}

fn make_class(toml: &str) -> *mut TriClass {
    let spec = CString::new(toml).unwrap();
    let mut class = ptr::null_mut();
    let status = unsafe { tri_class_new(spec.as_ptr(), &mut class) };
    assert_eq!(status, TriStatus::Ok, "{}", last_error());
    assert!(!class.is_null());
    class
}

#[test]
fn class_dimensions_and_verdict() {
    let class = make_class("kind = \"thresholds\"\nm = 8");
    let mut size = 0usize;
    assert_eq!(unsafe { tri_class_domain_size(class, &mut size) }, TriStatus::Ok);
    assert_eq!(size, 8);
    let mut count = 0u64;
    assert_eq!(unsafe { tri_class_hypothesis_count(class, &mut count) }, TriStatus::Ok);
    assert_eq!(count, 8);
    let (mut value, mut exact) = (0i64, false);
    assert_eq!(
        unsafe { tri_class_littlestone_dimension(class, 8, &mut value, &mut exact) },
        TriStatus::Ok
    );
    assert_eq!((value, exact), (3, true));
    assert_eq!(
        unsafe { tri_class_vc_dimension(class, 8, &mut value, &mut exact) },
        TriStatus::Ok
    );
    assert_eq!((value, exact), (1, true));
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { tri_class_verdict_json(class, &mut json) }, TriStatus::Ok);
    let text = take_string(json);
    assert!(text.contains("\"verdict\": \"exponential\""), "verdict JSON: {text}");
    unsafe { tri_class_free(class) };
}

#[test]
fn runner_session_reports_mistakes_and_value() {
    let class = make_class("kind = \"thresholds\"\nm = 8");
    let mut runner = ptr::null_mut();
    assert_eq!(unsafe { tri_runner_new(class, &mut runner) }, TriStatus::Ok);
    // The runner outlives the class handle: it owns its own copy.
    unsafe { tri_class_free(class) };
    let mut value = -99i64;
    assert_eq!(unsafe { tri_runner_game_value(runner, &mut value) }, TriStatus::Ok);
    assert_eq!(value, 3);
    let mut mistakes_total = 0u64;
    for x in 0..8u32 {
        let mut prediction = 2u8;
        assert_eq!(unsafe { tri_runner_predict(runner, x, &mut prediction) }, TriStatus::Ok);
        assert!(prediction <= 1);
        // Feed the all-ones hypothesis as the truth.
        let mut mistake = false;
        assert_eq!(unsafe { tri_runner_observe(runner, x, 1, &mut mistake) }, TriStatus::Ok);
        assert_eq!(mistake, prediction != 1);
        mistakes_total += u64::from(mistake);
    }
    let mut reported = 0u64;
    assert_eq!(unsafe { tri_runner_mistakes(runner, &mut reported) }, TriStatus::Ok);
    assert_eq!(reported, mistakes_total);
    assert!(reported <= 3, "mistake bound violated: {reported}");
    // Beyond the domain: a domain error, with a readable message.
    let mut prediction = 0u8;
    assert_eq!(unsafe { tri_runner_predict(runner, 99, &mut prediction) }, TriStatus::Domain);
    assert!(last_error().contains("99"), "{}", last_error());
    unsafe { tri_runner_free(runner) };
}

#[test]
fn curve_run_points_csv_and_fit() {
    let spec = CString::new(
        r#"
            learner = "erm"
            n_grid = [4, 8, 16, 32]
            seeds = 25
            root_seed = 7

            [class]
            kind = "thresholds"
            m = 8

            [dist]
            kind = "uniform_realizable"
            target = { fixed = 4 }
        "#,
    )
    .unwrap();
    let mut curve = ptr::null_mut();
    assert_eq!(unsafe { tri_curve_run(spec.as_ptr(), &mut curve) }, TriStatus::Ok, "{}", last_error());
    let mut len = 0usize;
    assert_eq!(unsafe { tri_curve_len(curve, &mut len) }, TriStatus::Ok);
    assert_eq!(len, 4);
    let mut point = TriCurvePoint { n: 0, mean_err: -1.0, p_nonzero: -1.0, stderr: -1.0, seeds: 0 };
    assert_eq!(unsafe { tri_curve_point(curve, 3, &mut point) }, TriStatus::Ok);
    assert_eq!((point.n, point.seeds), (32, 25));
    assert!((0.0..=1.0).contains(&point.mean_err));
    assert_eq!(unsafe { tri_curve_point(curve, 4, &mut point) }, TriStatus::Config);
    let mut csv = ptr::null_mut();
    assert_eq!(unsafe { tri_curve_csv(curve, &mut csv) }, TriStatus::Ok);
    let text = take_string(csv);
    assert!(text.starts_with("n,mean_err,p_nonzero,stderr,seeds\n"));
    assert_eq!(text.lines().count(), 5);
    let mut fit = ptr::null_mut();
    assert_eq!(unsafe { tri_curve_fit_json(curve, &mut fit) }, TriStatus::Ok);
    let text = take_string(fit);
    assert!(text.contains("\"mean_error\"") && text.contains("\"p_nonzero\""), "{text}");
    unsafe { tri_curve_free(curve) };
}

#[test]
fn error_paths_set_statuses_and_messages() {
    // Null arguments.
    let mut class = ptr::null_mut();
    assert_eq!(unsafe { tri_class_new(ptr::null(), &mut class) }, TriStatus::NullArgument);
    assert!(last_error().contains("spec_toml"));
    let spec = CString::new("kind = \"thresholds\"\nm = 4").unwrap();
    assert_eq!(unsafe { tri_class_new(spec.as_ptr(), ptr::null_mut()) }, TriStatus::NullArgument);
    // Invalid UTF-8.
    let bad = [0xffu8, 0xfe, 0x00];
    assert_eq!(
        unsafe { tri_class_new(bad.as_ptr().cast(), &mut class) },
        TriStatus::Utf8
    );
    // Bad TOML.
    let broken = CString::new("kind = \"no_such_generator\"").unwrap();
    assert_eq!(unsafe { tri_class_new(broken.as_ptr(), &mut class) }, TriStatus::Config);
    assert!(last_error().contains("bad class spec"), "{}", last_error());
    // Budget errors surface as TRI_STATUS_BUDGET: uniform target over a
    // closed-form-only class.
    let heavy = CString::new(
        r#"
            learner = "erm"
            n_grid = [4]
            seeds = 1

            [class]
            kind = "majority_blocks"
            levels = 7

            [dist]
            kind = "uniform_realizable"
            target = { fixed = 0 }
        "#,
    )
    .unwrap();
    let mut curve = ptr::null_mut();
    assert_eq!(unsafe { tri_curve_run(heavy.as_ptr(), &mut curve) }, TriStatus::Budget);
    // Construction errors too: an online duel distribution deeper than the
    // class swirls allows.
    let impossible = CString::new("kind = \"explicit\"\nrows = []").unwrap();
    let status = unsafe { tri_class_new(impossible.as_ptr(), &mut class) };
    assert_ne!(status, TriStatus::Ok);
    // Frees tolerate null.
    unsafe {
        tri_class_free(ptr::null_mut());
        tri_runner_free(ptr::null_mut());
        tri_curve_free(ptr::null_mut());
        tri_string_free(ptr::null_mut());
    }
}

#[test]
fn header_was_generated_with_the_expected_surface() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/trichotomy.h"
    ))
    .expect("build.rs generates include/trichotomy.h");
    for needle in [
        "#ifndef TRICHOTOMY_H",
        "typedef struct TriClass TriClass;",
        "typedef struct TriRunner TriRunner;",
        "typedef struct TriCurve TriCurve;",
        "TRI_STATUS_OK",
        "tri_last_error",
        "tri_class_new",
        "tri_runner_observe",
        "tri_curve_fit_json",
        "tri_string_free",
    ] {
        assert!(header.contains(needle), "header is missing {needle:?}");
    }
}
