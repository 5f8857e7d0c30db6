//! C ABI over the endok toolkit.
//!
//! Algebras cross the boundary as opaque handles. Every entry point returns
//! an [`EndokStatus`] whose values 0 to 4 match the command-line exit codes;
//! the message for the last failure on the calling thread is available from
//! [`endok_last_error`]. Strings handed out by the library are released with
//! [`endok_string_free`].

use endok::algebra::opposite;
use endok::cli::run::{parse_elem_expr, Fail};
use endok::cli::{parse_spec, Exit};
use endok::homalg::is_homological_ideal;
use endok::ktheory::{k0, verify_ideal, Classification, IdealInput, IdealStatement};
use endok::modules::AlgRef;
use endok::strat::is_quasi_hereditary;
use endok::{Settings, Verdict};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndokStatus {
    Ok = 0,
    /// A hypothesis or the checked property fails.
    Negative = 1,
    InvalidInput = 2,
    /// A bound or search budget ran out before a decision.
    Undecided = 3,
    /// Independent computations disagreed; a bug.
    Tripwire = 4,
    NullArgument = 10,
    /// A Rust panic was caught at the boundary.
    Panic = 11,
}

/// Three-valued answer.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndokTri {
    No = 0,
    Yes = 1,
    Unknown = 2,
}

/// Computation limits. Obtain defaults from [`endok_settings_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct EndokSettings {
    /// Resolution length bound; 0 means twice the algebra dimension.
    pub bound: usize,
    pub tor_bound: usize,
    pub retries: usize,
    pub seed: u64,
    pub search_budget: usize,
}

/// Opaque finite-dimensional algebra.
pub struct EndokAlgebra {
    inner: AlgRef,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn exit_status(e: Exit) -> EndokStatus {
    match e {
        Exit::Ok => EndokStatus::Ok,
        Exit::Negative => EndokStatus::Negative,
        Exit::Input => EndokStatus::InvalidInput,
        Exit::Undecided => EndokStatus::Undecided,
        Exit::Tripwire => EndokStatus::Tripwire,
    }
}

/// Runs `f` behind the boundary: errors and panics become status codes.
fn guard(f: impl FnOnce() -> Result<EndokStatus, Fail>) -> EndokStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(exit, msg))) => {
            set_error(&msg);
            if msg == NULL_ARGUMENT {
                EndokStatus::NullArgument
            } else {
                exit_status(exit)
            }
        }
        Err(_) => {
            set_error("internal panic");
            EndokStatus::Panic
        }
    }
}

const NULL_ARGUMENT: &str = "null argument";

fn null() -> Fail {
    Fail(Exit::Input, NULL_ARGUMENT.into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(Exit::Input, "string is not UTF-8".into()))
}

unsafe fn alg<'a>(p: *const EndokAlgebra) -> Result<&'a AlgRef, Fail> {
    p.as_ref().map(|a| &a.inner).ok_or_else(null)
}

unsafe fn settings(p: *const EndokSettings) -> Settings {
    match p.as_ref() {
        None => Settings::default(),
        Some(s) => Settings {
            bound: (s.bound > 0).then_some(s.bound),
            tor_bound: s.tor_bound,
            retries: s.retries,
            seed: s.seed,
            search_budget: s.search_budget,
        },
    }
}

fn tri(v: &Verdict) -> EndokTri {
    match v {
        Verdict::Yes(_) => EndokTri::Yes,
        Verdict::No(_) => EndokTri::No,
        Verdict::Unknown(_) => EndokTri::Unknown,
    }
}

fn give(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn endok_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn endok_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn endok_settings_default() -> EndokSettings {
    let s = Settings::default();
    EndokSettings { bound: s.bound.unwrap_or(0), tor_bound: s.tor_bound, retries: s.retries, seed: s.seed, search_budget: s.search_budget }
}

/// Builds the algebra `name` from an `endok-spec/1` JSON document, or the
/// document's `main` algebra when `name` is null.
///
/// # Safety
/// `json` and a non-null `name` must be NUL-terminated strings and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn endok_algebra_from_spec(json: *const c_char, name: *const c_char, out: *mut *mut EndokAlgebra) -> EndokStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let spec = parse_spec(text(json)?).map_err(|e| Fail(Exit::Input, e.to_string()))?;
        let name = if name.is_null() {
            spec.doc.main.clone().ok_or_else(|| Fail(Exit::Input, "no name given and the document has no main algebra".into()))?
        } else {
            text(name)?.to_string()
        };
        let a = spec.algebras.get(&name).ok_or_else(|| Fail(Exit::Input, format!("no algebra named {}", name)))?;
        *out = Box::into_raw(Box::new(EndokAlgebra { inner: a.clone() }));
        Ok(EndokStatus::Ok)
    })
}

/// A new handle for the opposite algebra.
///
/// # Safety
/// `a` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn endok_algebra_opposite(a: *const EndokAlgebra, out: *mut *mut EndokAlgebra) -> EndokStatus {
    guard(|| {
        let a = alg(a)?;
        if out.is_null() {
            return Err(null());
        }
        *out = Box::into_raw(Box::new(EndokAlgebra { inner: Arc::new(opposite(a)) }));
        Ok(EndokStatus::Ok)
    })
}

/// Dimension over the ground field, 0 for a null handle.
///
/// # Safety
/// `a` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn endok_algebra_dim(a: *const EndokAlgebra) -> usize {
    a.as_ref().map_or(0, |a| a.inner.dim())
}

/// # Safety
/// `a` must be null or an unfreed handle from this library.
#[no_mangle]
pub unsafe extern "C" fn endok_algebra_free(a: *mut EndokAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Rank of `K0`: the number of indecomposable projectives up to isomorphism.
///
/// # Safety
/// `a` must come from this library, `s` may be null, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn endok_k0_rank(a: *const EndokAlgebra, s: *const EndokSettings, out: *mut usize) -> EndokStatus {
    guard(|| {
        let (a, s) = (alg(a)?, settings(s));
        if out.is_null() {
            return Err(null());
        }
        *out = k0(a, s.seed, s.retries)?.rank;
        Ok(EndokStatus::Ok)
    })
}

/// Whether the algebra is quasi-hereditary. `No` is only reported after an
/// exhaustive search.
///
/// # Safety
/// `a` must come from this library, `s` may be null, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn endok_is_quasi_hereditary(a: *const EndokAlgebra, s: *const EndokSettings, out: *mut EndokTri) -> EndokStatus {
    guard(|| {
        let (a, s) = (alg(a)?, settings(s));
        if out.is_null() {
            return Err(null());
        }
        *out = tri(&is_quasi_hereditary(a, &s)?.verdict);
        Ok(EndokStatus::Ok)
    })
}

/// Whether `ReR` is a homological ideal, for the idempotent written as a
/// combination of basis labels such as `"e1"` or `"e11 + e22"`.
///
/// # Safety
/// `a` must come from this library, `e` a NUL-terminated string, `s` may be
/// null, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn endok_is_homological(a: *const EndokAlgebra, e: *const c_char, s: *const EndokSettings, out: *mut EndokTri) -> EndokStatus {
    guard(|| {
        let (a, s) = (alg(a)?, settings(s));
        let e = parse_elem_expr(a, text(e)?)?;
        if out.is_null() {
            return Err(null());
        }
        *out = tri(&is_homological_ideal(a, &e, s.tor_bound, s.seed, s.retries)?.verdict);
        Ok(EndokStatus::Ok)
    })
}

/// Checks an ideal statement (`ideal-split`, `ideal-split-projective` or
/// `idempotent-split`) for `ReR`. The verdict is written as JSON to `out`,
/// to be released with [`endok_string_free`]. The status is `Ok` when the
/// theorem is confirmed, `Negative` when a hypothesis fails and `Undecided`
/// when a hypothesis could not be settled.
///
/// # Safety
/// `a` must come from this library, `e` and `theorem` NUL-terminated
/// strings, `s` may be null, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn endok_verify_ideal(
    a: *const EndokAlgebra,
    e: *const c_char,
    theorem: *const c_char,
    s: *const EndokSettings,
    out: *mut *mut c_char,
) -> EndokStatus {
    guard(|| {
        let (a, s) = (alg(a)?, settings(s));
        let e = parse_elem_expr(a, text(e)?)?;
        let id = text(theorem)?;
        let st = IdealStatement::from_id(id).ok_or_else(|| Fail(Exit::Input, format!("unknown ideal statement {}", id)))?;
        if out.is_null() {
            return Err(null());
        }
        let v = verify_ideal(a, &IdealInput::from_idempotent(a, &e)?, st, &s)?;
        *out = give(serde_json::to_string(&v).map_err(|x| Fail(Exit::Input, x.to_string()))?);
        Ok(match v.classification {
            Classification::ConfirmsTheorem => EndokStatus::Ok,
            Classification::HypothesisFailsFormulaFails | Classification::HypothesisFailsFormulaHolds => EndokStatus::Negative,
            Classification::Inconclusive => EndokStatus::Undecided,
        })
    })
}

/// Runs a command line (without the program name) exactly as the `endok`
/// binary would. The report or usage text goes to `out`; the status is the
/// exit code.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn endok_run(argc: usize, argv: *const *const c_char, out: *mut *mut c_char) -> EndokStatus {
    guard(|| {
        if out.is_null() || (argc > 0 && argv.is_null()) {
            return Err(null());
        }
        let mut args = vec!["endok".to_string()];
        for i in 0..argc {
            args.push(text(*argv.add(i))?.to_string());
        }
        let o = endok::cli::main_with(args);
        *out = give(o.text);
        let exit = Exit::from_code(o.code).unwrap_or(Exit::Input);
        if exit != Exit::Ok {
            set_error(&format!("exit code {}", o.code));
        }
        Ok(exit_status(exit))
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or an unfreed string from this library.
#[no_mangle]
pub unsafe extern "C" fn endok_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
