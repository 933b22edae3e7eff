//! C ABI for `tamecover`.
//!
//! Objects cross the boundary as opaque heap handles released with the
//! matching `*_free` function. Every fallible call returns a [`TcStatus`];
//! on failure the message is available from [`tc_last_error`] on the same
//! thread. Strings returned through `char **` are owned by the caller and
//! released with [`tc_string_free`]. Points are 1-indexed.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tamecover::admissibility::{self, RamProfile, Verdict};
use tamecover::existence::{self, AnalysisStatus, ExistenceVerdict, Status};
use tamecover::hurwitz::HurwitzTuple;
use tamecover::permgroup::{self, Permutation};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    Internal = 5,
}

/// Existence verdict for a ramification profile.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcExistence {
    Exists = 0,
    NotExists = 1,
    OutOfScope = 2,
    Invalid = 3,
}

/// Numerical admissibility of a ramification profile.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcAdmissibility {
    Admissible = 0,
    Inadmissible = 1,
    OutOfScope = 2,
    Wild = 3,
}

/// Overall outcome of the block-system analysis.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcAnalysis {
    NotExists = 0,
    Inconclusive = 1,
}

/// Opaque permutation handle.
pub struct TcPermutation(Permutation);

/// Opaque handle for a tuple of permutations.
pub struct TcTuple(HurwitzTuple);

/// Opaque handle for an existence verdict.
pub struct TcVerdict(ExistenceVerdict);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("no interior nul"));
}

fn fail(status: TcStatus, msg: impl Into<String>) -> TcStatus {
    set_error(msg);
    status
}

/// Runs `body`, turning panics into `Internal` and clearing the error on
/// success.
fn guard(body: impl FnOnce() -> TcStatus) -> TcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(TcStatus::Ok) => {
            set_error("");
            TcStatus::Ok
        }
        Ok(status) => status,
        Err(_) => fail(TcStatus::Internal, "panic inside tamecover"),
    }
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, TcStatus> {
    if text.is_null() {
        return Err(fail(TcStatus::NullArgument, "null string"));
    }
    CStr::from_ptr(text).to_str().map_err(|_| fail(TcStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn read_indices<'a>(indices: *const u64, len: usize) -> Result<&'a [u64], TcStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if indices.is_null() {
        return Err(fail(TcStatus::NullArgument, "null index array"));
    }
    Ok(std::slice::from_raw_parts(indices, len))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> TcStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            TcStatus::Ok
        }
        Err(_) => fail(TcStatus::Internal, "string contains nul"),
    }
}

macro_rules! check_out {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(TcStatus::NullArgument, concat!("null argument: ", stringify!($p)));
        })+
    };
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses cycle notation such as `(1 2 3)(4 5)` on `degree` points.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_permutation_parse(text: *const c_char, degree: usize, out: *mut *mut TcPermutation) -> TcStatus {
    guard(|| {
        check_out!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match permgroup::parse_cycles(text, degree) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(TcPermutation(g)));
                TcStatus::Ok
            }
            Err(e) => fail(TcStatus::Parse, e.to_string()),
        }
    })
}

/// # Safety
/// `perm` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_permutation_free(perm: *mut TcPermutation) {
    if !perm.is_null() {
        drop(Box::from_raw(perm));
    }
}

/// Degree of the permutation; 0 for a null handle.
///
/// # Safety
/// `perm` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_permutation_degree(perm: *const TcPermutation) -> usize {
    perm.as_ref().map_or(0, |g| g.0.degree())
}

/// Image of the 1-indexed `point`.
///
/// # Safety
/// `perm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_permutation_apply(perm: *const TcPermutation, point: usize, out: *mut usize) -> TcStatus {
    guard(|| {
        check_out!(perm, out);
        let g = &(*perm).0;
        if point == 0 || point > g.degree() {
            return fail(TcStatus::InvalidInput, format!("point {point} outside 1..={}", g.degree()));
        }
        *out = g.apply(point - 1) + 1;
        TcStatus::Ok
    })
}

/// `a ∘ b`: `b` applied first.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_permutation_compose(
    a: *const TcPermutation,
    b: *const TcPermutation,
    out: *mut *mut TcPermutation,
) -> TcStatus {
    guard(|| {
        check_out!(a, b, out);
        match (*a).0.compose(&(*b).0) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(TcPermutation(g)));
                TcStatus::Ok
            }
            Err(e) => fail(TcStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Cycle notation, `(1)` for the identity.
///
/// # Safety
/// `perm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_permutation_to_string(perm: *const TcPermutation, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        check_out!(perm, out);
        write_string(out, (*perm).0.to_string())
    })
}

/// Parses the tuple file format: a `d=<int>` line, then one permutation
/// per line; blank lines and `#` comments are skipped.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_tuple_parse(text: *const c_char, out: *mut *mut TcTuple) -> TcStatus {
    guard(|| {
        check_out!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match HurwitzTuple::from_file_str(text) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(TcTuple(t)));
                TcStatus::Ok
            }
            Err(e) => fail(TcStatus::Parse, e.to_string()),
        }
    })
}

/// # Safety
/// `tuple` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_tuple_free(tuple: *mut TcTuple) {
    if !tuple.is_null() {
        drop(Box::from_raw(tuple));
    }
}

/// Number of entries; 0 for a null handle.
///
/// # Safety
/// `tuple` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_tuple_len(tuple: *const TcTuple) -> usize {
    tuple.as_ref().map_or(0, |t| t.0.r())
}

/// Common degree; 0 for a null handle.
///
/// # Safety
/// `tuple` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_tuple_degree(tuple: *const TcTuple) -> usize {
    tuple.as_ref().map_or(0, |t| t.0.degree())
}

/// A copy of entry `index` (0-based).
///
/// # Safety
/// `tuple` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_tuple_get(tuple: *const TcTuple, index: usize, out: *mut *mut TcPermutation) -> TcStatus {
    guard(|| {
        check_out!(tuple, out);
        match (*tuple).0.perms().get(index) {
            Some(g) => {
                *out = Box::into_raw(Box::new(TcPermutation(g.clone())));
                TcStatus::Ok
            }
            None => fail(TcStatus::InvalidInput, format!("index {index} out of range")),
        }
    })
}

/// Whether the product is trivial and the group transitive.
///
/// # Safety
/// `tuple` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_tuple_is_valid(tuple: *const TcTuple, out: *mut bool) -> TcStatus {
    guard(|| {
        check_out!(tuple, out);
        *out = (*tuple).0.validate(None).is_valid();
        TcStatus::Ok
    })
}

/// Entries concatenated in cycle notation.
///
/// # Safety
/// `tuple` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_tuple_to_string(tuple: *const TcTuple, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        check_out!(tuple, out);
        write_string(out, (*tuple).0.to_string())
    })
}

/// Numerical admissibility of `indices[0..len]` at the prime `p`.
///
/// # Safety
/// `indices` must point to `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_admissible(p: u64, indices: *const u64, len: usize, out: *mut TcAdmissibility) -> TcStatus {
    guard(|| {
        check_out!(out);
        let indices = match read_indices(indices, len) {
            Ok(i) => i,
            Err(s) => return s,
        };
        let verdict = RamProfile::new(p, indices.to_vec()).and_then(|prof| admissibility::admissible(&prof));
        match verdict {
            Ok(v) => {
                *out = match v {
                    Verdict::Admissible(_) => TcAdmissibility::Admissible,
                    Verdict::Inadmissible(_) => TcAdmissibility::Inadmissible,
                    Verdict::OutOfScope => TcAdmissibility::OutOfScope,
                    Verdict::Wild { .. } => TcAdmissibility::Wild,
                };
                TcStatus::Ok
            }
            Err(e) => fail(TcStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Existence decision for `indices[0..len]` at the prime `p`. Malformed
/// profiles give a verdict with status `INVALID`, not an error.
///
/// # Safety
/// `indices` must point to `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_decide(p: u64, indices: *const u64, len: usize, out: *mut *mut TcVerdict) -> TcStatus {
    guard(|| {
        check_out!(out);
        let indices = match read_indices(indices, len) {
            Ok(i) => i,
            Err(s) => return s,
        };
        *out = Box::into_raw(Box::new(TcVerdict(existence::decide(p, indices))));
        TcStatus::Ok
    })
}

/// # Safety
/// `verdict` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_verdict_free(verdict: *mut TcVerdict) {
    if !verdict.is_null() {
        drop(Box::from_raw(verdict));
    }
}

/// Status of the verdict; `INVALID` for a null handle.
///
/// # Safety
/// `verdict` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_verdict_status(verdict: *const TcVerdict) -> TcExistence {
    match verdict.as_ref().map(|v| v.0.status) {
        Some(Status::Exists) => TcExistence::Exists,
        Some(Status::NotExists) => TcExistence::NotExists,
        Some(Status::OutOfScope) => TcExistence::OutOfScope,
        Some(Status::Invalid) | None => TcExistence::Invalid,
    }
}

/// The certificate tuple, or null in `*out` when there is none.
///
/// # Safety
/// `verdict` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_verdict_certificate(verdict: *const TcVerdict, out: *mut *mut TcTuple) -> TcStatus {
    guard(|| {
        check_out!(verdict, out);
        *out = match &(*verdict).0.certificate {
            Some(t) => Box::into_raw(Box::new(TcTuple(t.clone()))),
            None => ptr::null_mut(),
        };
        TcStatus::Ok
    })
}

/// Human-readable reason for the verdict.
///
/// # Safety
/// `verdict` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_verdict_reason(verdict: *const TcVerdict, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        check_out!(verdict, out);
        write_string(out, (*verdict).0.reason.clone())
    })
}

/// The full verdict as JSON.
///
/// # Safety
/// `verdict` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_verdict_to_json(verdict: *const TcVerdict, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        check_out!(verdict, out);
        match serde_json::to_string(&(*verdict).0) {
            Ok(s) => write_string(out, s),
            Err(e) => fail(TcStatus::Internal, e.to_string()),
        }
    })
}

/// Block-system non-existence test at the prime `p`. Writes the overall
/// outcome to `status` and, when `json` is not null, the full report.
///
/// # Safety
/// `tuple` must be a live handle; `status` must be writable; `json` must
/// be null or writable.
#[no_mangle]
pub unsafe extern "C" fn tc_analyze(
    tuple: *const TcTuple,
    p: u64,
    status: *mut TcAnalysis,
    json: *mut *mut c_char,
) -> TcStatus {
    guard(|| {
        check_out!(tuple, status);
        let report = match existence::analyze_monodromy(&(*tuple).0, p) {
            Ok(r) => r,
            Err(e) => return fail(TcStatus::InvalidInput, e.to_string()),
        };
        *status = match report.status {
            AnalysisStatus::NotExists => TcAnalysis::NotExists,
            AnalysisStatus::Inconclusive => TcAnalysis::Inconclusive,
        };
        if json.is_null() {
            return TcStatus::Ok;
        }
        match serde_json::to_string(&report) {
            Ok(s) => write_string(json, s),
            Err(e) => fail(TcStatus::Internal, e.to_string()),
        }
    })
}
