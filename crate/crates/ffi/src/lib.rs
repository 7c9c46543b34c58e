//! C ABI over `gms_core`.
//!
//! Instances and solutions are opaque heap handles released with their
//! `*_free` function. Every fallible call returns a [`GmsStatus`]; on a
//! negative status [`gms_last_error`] describes the failure for the
//! calling thread. Strings returned to C are freed with [`gms_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gms_core::format::{parse_instance, parse_solution, serialize_solution};
use gms_core::problems::verify_solution;
use gms_core::{
    solve, Algorithm, Answer, ProblemInstance, SolutionSequence, SolveError, SolveOptions,
};

/// Result of a call. Non-negative values are answers, negative ones errors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmsStatus {
    /// Success; for solve and verify calls also "yes" / "accepted".
    Ok = 0,
    /// The instance has no solution, or the solution was rejected.
    No = 1,
    NullArgument = -1,
    InvalidUtf8 = -2,
    Parse = -3,
    Unsupported = -4,
    Solve = -5,
    Panic = -6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmsAlgorithm {
    Backward = 0,
    Forward = 1,
    Oracle = 2,
}

impl From<GmsAlgorithm> for Algorithm {
    fn from(a: GmsAlgorithm) -> Algorithm {
        match a {
            GmsAlgorithm::Backward => Algorithm::Backward,
            GmsAlgorithm::Forward => Algorithm::Forward,
            GmsAlgorithm::Oracle => Algorithm::Oracle,
        }
    }
}

/// Opaque parsed instance.
pub struct GmsInstance {
    inner: ProblemInstance,
}

/// Opaque solution sequence.
pub struct GmsSolution {
    inner: SolutionSequence,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn fail(status: GmsStatus, message: impl Into<String>) -> GmsStatus {
    set_error(message);
    status
}

/// Runs `body`, turning a panic into [`GmsStatus::Panic`].
fn guarded(body: impl FnOnce() -> GmsStatus) -> GmsStatus {
    catch_unwind(AssertUnwindSafe(body))
        .unwrap_or_else(|_| fail(GmsStatus::Panic, "internal panic"))
}

unsafe fn text_arg<'a>(text: *const c_char) -> Result<&'a str, GmsStatus> {
    if text.is_null() {
        return Err(fail(GmsStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| fail(GmsStatus::InvalidUtf8, "argument is not UTF-8"))
}

/// Message for the last negative status on this thread, or NULL. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gms_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn gms_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses instance text into `*out`.
#[no_mangle]
pub unsafe extern "C" fn gms_instance_parse(
    text: *const c_char,
    out: *mut *mut GmsInstance,
) -> GmsStatus {
    guarded(|| {
        if out.is_null() {
            return fail(GmsStatus::NullArgument, "null output pointer");
        }
        let text = match text_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_instance(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(GmsInstance { inner }));
                GmsStatus::Ok
            }
            Err(e) => fail(GmsStatus::Parse, e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn gms_instance_free(instance: *mut GmsInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Number of layers, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn gms_instance_tau(instance: *const GmsInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.tau())
}

#[no_mangle]
pub unsafe extern "C" fn gms_instance_vertex_count(instance: *const GmsInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.graph.n())
}

#[no_mangle]
pub unsafe extern "C" fn gms_instance_k(instance: *const GmsInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.k)
}

#[no_mangle]
pub unsafe extern "C" fn gms_instance_ell(instance: *const GmsInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.ell)
}

/// Solves `instance`. Returns `Ok` and stores a solution in `*out` when
/// one exists, `No` (leaving `*out` NULL) otherwise. `threads` of 0 means 1.
#[no_mangle]
pub unsafe extern "C" fn gms_solve(
    instance: *const GmsInstance,
    algorithm: GmsAlgorithm,
    threads: u32,
    out: *mut *mut GmsSolution,
) -> GmsStatus {
    guarded(|| {
        let (Some(inst), false) = (instance.as_ref(), out.is_null()) else {
            return fail(GmsStatus::NullArgument, "null argument");
        };
        *out = ptr::null_mut();
        let opts = SolveOptions {
            threads: threads.max(1) as usize,
            ..SolveOptions::default()
        };
        match solve(&inst.inner, algorithm.into(), &opts) {
            Ok(result) => match result.answer {
                Answer::Yes { solution, .. } => {
                    *out = Box::into_raw(Box::new(GmsSolution { inner: solution }));
                    GmsStatus::Ok
                }
                Answer::No { .. } => GmsStatus::No,
            },
            Err(e @ (SolveError::Unsupported { .. } | SolveError::LocalBudgetUnsupported(_))) => {
                fail(GmsStatus::Unsupported, e.to_string())
            }
            Err(e) => fail(GmsStatus::Solve, e.to_string()),
        }
    })
}

/// Parses solution text (`S <layer> <elements>` lines) for `tau` layers.
#[no_mangle]
pub unsafe extern "C" fn gms_solution_parse(
    text: *const c_char,
    tau: usize,
    out: *mut *mut GmsSolution,
) -> GmsStatus {
    guarded(|| {
        if out.is_null() {
            return fail(GmsStatus::NullArgument, "null output pointer");
        }
        let text = match text_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_solution(text, Some(tau)) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(GmsSolution { inner }));
                GmsStatus::Ok
            }
            Err(e) => fail(GmsStatus::Parse, e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn gms_solution_free(solution: *mut GmsSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Total insertions of the sequence, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn gms_solution_insertions(solution: *const GmsSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.inner.insertion_total())
}

/// Solution text; free with [`gms_string_free`]. NULL for a NULL handle.
#[no_mangle]
pub unsafe extern "C" fn gms_solution_to_string(solution: *const GmsSolution) -> *mut c_char {
    match solution.as_ref() {
        Some(s) => {
            CString::new(serialize_solution(&s.inner)).map_or(ptr::null_mut(), CString::into_raw)
        }
        None => ptr::null_mut(),
    }
}

/// `Ok` if `solution` is accepted for `instance`, `No` if rejected.
#[no_mangle]
pub unsafe extern "C" fn gms_verify(
    instance: *const GmsInstance,
    solution: *const GmsSolution,
) -> GmsStatus {
    guarded(|| {
        let (Some(inst), Some(sol)) = (instance.as_ref(), solution.as_ref()) else {
            return fail(GmsStatus::NullArgument, "null argument");
        };
        match verify_solution(&inst.inner, &sol.inner) {
            Ok(report) if report.accepted => GmsStatus::Ok,
            Ok(report) => {
                set_error(report.failures.join("; "));
                GmsStatus::No
            }
            Err(e) => fail(GmsStatus::Solve, e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn gms_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}
