use endok_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

const T_SPEC: &str = include_str!("../../core/corpus/triangular_T.alg");
const A_SPEC: &str = include_str!("../../core/corpus/two_cycle_A.alg");

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn load(spec: &str, name: Option<&str>) -> *mut EndokAlgebra {
    let json = c(spec);
    let name = name.map(c);
    let mut out = ptr::null_mut();
    let st = unsafe { endok_algebra_from_spec(json.as_ptr(), name.as_ref().map_or(ptr::null(), |n| n.as_ptr()), &mut out) };
    assert_eq!(st, EndokStatus::Ok, "{}", last_error());
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(endok_last_error()) }.to_string_lossy().into_owned()
}

fn take(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { endok_string_free(p) };
    s
}

#[test]
fn handles_and_ranks() {
    let t = load(T_SPEC, None);
    assert_eq!(unsafe { endok_algebra_dim(t) }, 3);
    let mut rank = 0usize;
    assert_eq!(unsafe { endok_k0_rank(t, ptr::null(), &mut rank) }, EndokStatus::Ok);
    assert_eq!(rank, 2);
    let mut op = ptr::null_mut();
    assert_eq!(unsafe { endok_algebra_opposite(t, &mut op) }, EndokStatus::Ok);
    assert_eq!(unsafe { endok_algebra_dim(op) }, 3);
    let mut q = EndokTri::Unknown;
    assert_eq!(unsafe { endok_is_quasi_hereditary(op, ptr::null(), &mut q) }, EndokStatus::Ok);
    assert_eq!(q, EndokTri::Yes);
    unsafe {
        endok_algebra_free(op);
        endok_algebra_free(t);
        endok_algebra_free(ptr::null_mut());
    }
}

#[test]
fn ideal_verdicts_carry_status() {
    let a = load(A_SPEC, None);
    let s = endok_settings_default();
    let mut h = EndokTri::Unknown;
    assert_eq!(unsafe { endok_is_homological(a, c("e1").as_ptr(), &s, &mut h) }, EndokStatus::Ok);
    assert_eq!(h, EndokTri::No);
    let mut json = ptr::null_mut();
    let st = unsafe { endok_verify_ideal(a, c("e1").as_ptr(), c("ideal-split-projective").as_ptr(), &s, &mut json) };
    assert_eq!(st, EndokStatus::Negative);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["classification"], "HypothesisFailsFormulaFails");
    let t = load(T_SPEC, None);
    let mut json = ptr::null_mut();
    let st = unsafe { endok_verify_ideal(t, c("e11").as_ptr(), c("ideal-split-projective").as_ptr(), &s, &mut json) };
    assert_eq!(st, EndokStatus::Ok);
    assert_eq!(serde_json::from_str::<serde_json::Value>(&take(json)).unwrap()["lhs_rank"], 2);
    unsafe {
        endok_algebra_free(a);
        endok_algebra_free(t);
    }
}

#[test]
fn errors_are_codes_with_messages() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { endok_algebra_from_spec(ptr::null(), ptr::null(), &mut out) }, EndokStatus::NullArgument);
    assert_eq!(unsafe { endok_algebra_from_spec(c("{").as_ptr(), ptr::null(), &mut out) }, EndokStatus::InvalidInput);
    assert!(!last_error().is_empty());
    let t = load(T_SPEC, None);
    assert!(last_error().is_empty());
    let mut h = EndokTri::Unknown;
    assert_eq!(unsafe { endok_is_homological(t, c("nope").as_ptr(), ptr::null(), &mut h) }, EndokStatus::InvalidInput);
    let mut json = ptr::null_mut();
    let st = unsafe { endok_verify_ideal(t, c("e11").as_ptr(), c("no-such-theorem").as_ptr(), ptr::null(), &mut json) };
    assert_eq!(st, EndokStatus::InvalidInput);
    assert!(last_error().contains("no-such-theorem"));
    assert_eq!(unsafe { endok_k0_rank(ptr::null(), ptr::null(), ptr::null_mut()) }, EndokStatus::NullArgument);
    unsafe { endok_algebra_free(t) };
}

#[test]
fn run_matches_the_binary() {
    let file = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/corpus/triangular_T.alg");
    let args = [c("--format"), c("machine"), c("k0"), c(file)];
    let ptrs: Vec<_> = args.iter().map(|a| a.as_ptr()).collect();
    let mut out = ptr::null_mut();
    let st = unsafe { endok_run(ptrs.len(), ptrs.as_ptr(), &mut out) };
    let text = take(out);
    let expected = endok::cli::main_with(["endok", "--format", "machine", "k0", file]);
    assert!(text.contains("\"rank\":2"), "{}", text);
    assert_eq!(st as i32, expected.code);
    assert_eq!(text, expected.text);
    let v = unsafe { CStr::from_ptr(endok_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
