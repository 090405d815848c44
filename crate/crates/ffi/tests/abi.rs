use std::ffi::{CStr, CString};
use std::ptr;

use freelab_ffi::*;

fn run(args: &[&str]) -> (FlStatus, i32, Option<String>) {
    let owned: Vec<CString> = args.iter().map(|a| CString::new(*a).unwrap()).collect();
    let ptrs: Vec<_> = owned.iter().map(|c| c.as_ptr()).collect();
    let mut code = -1;
    let mut out = ptr::null_mut();
    let st = unsafe { fl_run(ptrs.as_ptr(), ptrs.len(), &mut code, &mut out) };
    let text = (!out.is_null()).then(|| {
        let s = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
        unsafe { fl_string_free(out) };
        s
    });
    (st, code, text)
}

#[test]
fn run_command_matches_library() {
    let (st, code, text) = run(&["fgroup", "--trials", "10", "--seed", "3"]);
    assert_eq!(st, FlStatus::Ok);
    assert_eq!(code, 0);
    let lib = freelab::commands::run_args(["fgroup", "--trials", "10", "--seed", "3"]);
    assert_eq!(text.unwrap(), lib.text);
}

#[test]
fn run_reports_errors() {
    let (st, code, text) = run(&["moments", "--radius", "-1"]);
    assert_eq!(st, FlStatus::Domain);
    assert_eq!(code, 2);
    assert!(text.is_none());
    let msg = unsafe { CStr::from_ptr(fl_last_error()) }.to_str().unwrap();
    assert!(msg.contains("radius"), "{msg}");

    let (st, code, _) = run(&["freeness", "--L", "20"]);
    assert_eq!((st, code), (FlStatus::Resource, 3));

    let (st, code, text) = run(&["moments", "--m", "1000"]);
    assert_eq!((st, code), (FlStatus::Numeric, 1));
    assert!(text.is_none());

    let st = unsafe { fl_run(ptr::null(), 1, &mut 0, &mut ptr::null_mut()) };
    assert_eq!(st, FlStatus::NullPointer);
}

#[test]
fn rejects_invalid_utf8() {
    let bad = [0xffu8, 0];
    let argv = [bad.as_ptr().cast()];
    let mut out = ptr::null_mut();
    let st = unsafe { fl_run(argv.as_ptr(), 1, &mut 0, &mut out) };
    assert_eq!(st, FlStatus::InvalidUtf8);
}

#[test]
fn semicircle_handle() {
    let mut law = ptr::null_mut();
    assert_eq!(unsafe { fl_semicircle_new(0.0, 2.0, &mut law) }, FlStatus::Ok);
    let mut v = 0.0;
    unsafe {
        assert_eq!(fl_semicircle_moment(law, 4, &mut v), FlStatus::Ok);
        assert_eq!(v, 2.0);
        fl_semicircle_cdf(law, 0.0, &mut v);
        assert!((v - 0.5).abs() < 1e-15);
        assert_eq!(fl_semicircle_quantile(law, 1.5, &mut v), FlStatus::Domain);
        fl_semicircle_quantile(law, 0.5, &mut v);
        assert!(v.abs() < 1e-12);
    }

    let mut rng = ptr::null_mut();
    assert_eq!(unsafe { fl_rng_new(11, 0, &mut rng) }, FlStatus::Ok);
    let mut buf = [0.0; 64];
    assert_eq!(unsafe { fl_semicircle_sample(law, rng, buf.as_mut_ptr(), buf.len()) }, FlStatus::Ok);
    assert!(buf.iter().all(|x| x.abs() <= 2.0));
    unsafe {
        fl_rng_free(rng);
        fl_semicircle_free(law);
    }

    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { fl_semicircle_new(0.0, 0.0, &mut bad) }, FlStatus::Domain);
    assert!(bad.is_null());
}

#[test]
fn rng_streams_are_reproducible() {
    let draw = |seed, stream| {
        let mut h = ptr::null_mut();
        let mut x = 0u64;
        unsafe {
            fl_rng_new(seed, stream, &mut h);
            fl_rng_next_u64(h, &mut x);
            fl_rng_free(h);
        }
        x
    };
    assert_eq!(draw(1, 2), draw(1, 2));
    assert_ne!(draw(1, 2), draw(1, 3));
    assert_eq!(unsafe { fl_rng_next_u64(ptr::null_mut(), &mut 0) }, FlStatus::NullPointer);
}

#[test]
fn status_strings() {
    let s = unsafe { CStr::from_ptr(fl_status_str(FlStatus::Resource)) };
    assert_eq!(s.to_str().unwrap(), "resource guard exceeded");
}

#[test]
fn header_declares_entry_points() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/freelab.h")).unwrap();
    for name in ["fl_run", "fl_string_free", "fl_rng_new", "fl_semicircle_sample", "FL_STATUS_RESOURCE", "typedef struct FlRng FlRng"] {
        assert!(h.contains(name), "header lacks {name}");
    }
}
