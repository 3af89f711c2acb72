//! C ABI over `gmswitch`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and released
//! with the matching `*_free` function. Every fallible call returns a
//! [`GmStatus`]; on failure [`gm_last_error`] describes the problem. Strings
//! returned through out-parameters are NUL-terminated and freed with
//! [`gm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gmswitch::certify::{certify, Certificate, CertifyOptions};
use gmswitch::construct::{switching_partition, twisted_grassmann, Geometry, Parameters};
use gmswitch::graph::io::{from_graph6, to_graph6};
use gmswitch::graph::{cospectral, gm_switch, Graph};
use gmswitch::subspace::{Polarity, DEFAULT_ENUMERATION_BUDGET};
use gmswitch::Error;

/// Result code of every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmStatus {
    Ok = 0,
    /// Invalid argument, e.g. `q` not a supported prime power.
    Parameter = 1,
    /// Valid arguments outside the operation's domain, e.g. `e < 2` for the twisted graph.
    Domain = 2,
    /// A size or enumeration budget was exceeded.
    Budget = 3,
    /// The switching hypothesis failed.
    Hypothesis = 4,
    /// A construction contradicted its own definition.
    Consistency = 5,
    Parse = 6,
    Io = 7,
    NullPointer = 8,
    /// A Rust panic was caught at the boundary.
    Panic = 9,
}

/// A simple undirected graph.
pub struct GmGraph(Graph<()>);

/// The result of the certification pipeline.
pub struct GmCertificate(Certificate);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> GmStatus {
    match e {
        Error::Parameter(_) | Error::DivisionByZero(_) => GmStatus::Parameter,
        Error::Domain(_) | Error::Precondition(_) => GmStatus::Domain,
        Error::Budget { .. } => GmStatus::Budget,
        Error::Hypothesis(_) => GmStatus::Hypothesis,
        Error::Consistency(_) => GmStatus::Consistency,
        Error::Parse(_) | Error::Json(_) => GmStatus::Parse,
        Error::Io(_) => GmStatus::Io,
    }
}

/// Runs `f`, translating errors and panics into a status and the last-error message.
fn guard(f: impl FnOnce() -> Result<(), GmStatus>) -> GmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            GmStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            GmStatus::Panic
        }
    }
}

fn lib<T>(r: gmswitch::Result<T>) -> Result<T, GmStatus> {
    r.map_err(|e| {
        set_error(&e.to_string());
        status_of(&e)
    })
}

fn null(what: &str) -> GmStatus {
    set_error(&format!("{what} is null"));
    GmStatus::NullPointer
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), GmStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn store_string(out: *mut *mut c_char, s: String) -> Result<(), GmStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| {
        set_error("string contains NUL");
        GmStatus::Consistency
    })?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn graph<'a>(g: *const GmGraph) -> Result<&'a Graph<()>, GmStatus> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| null("graph"))
}

fn geometry(q: u32, e: usize) -> Result<Geometry, GmStatus> {
    lib(Parameters::new(q, e).and_then(|p| Geometry::new(p, DEFAULT_ENUMERATION_BUDGET)))
}

/// Message for the most recent failure on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn gm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// `J_q(2e+1, e+1)` with vertices in canonical subspace order.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn gm_grassmann(q: u32, e: usize, out: *mut *mut GmGraph) -> GmStatus {
    guard(|| {
        let geom = geometry(q, e)?;
        store(out, GmGraph(lib(geom.grassmann())?.unlabeled()))
    })
}

/// The twisted Grassmann graph; needs `e >= 2`.
///
/// # Safety
/// As [`gm_grassmann`].
#[no_mangle]
pub unsafe extern "C" fn gm_twisted(q: u32, e: usize, out: *mut *mut GmGraph) -> GmStatus {
    guard(|| {
        let geom = geometry(q, e)?;
        store(out, GmGraph(lib(twisted_grassmann(&geom))?.unlabeled()))
    })
}

/// `J_q(2e+1, e+1)` switched with the symplectic polarity partition; needs `e >= 2`.
///
/// # Safety
/// As [`gm_grassmann`].
#[no_mangle]
pub unsafe extern "C" fn gm_switched(q: u32, e: usize, out: *mut *mut GmGraph) -> GmStatus {
    guard(|| {
        let geom = geometry(q, e)?;
        lib(geom.params.require_certifiable())?;
        let gamma = lib(geom.grassmann())?;
        let part = lib(switching_partition(&geom, &Polarity::symplectic(&geom.field, e)))?;
        store(out, GmGraph(lib(gm_switch(&gamma, &part.partition))?.unlabeled()))
    })
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gm_graph_vertex_count(g: *const GmGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gm_graph_is_adjacent(g: *const GmGraph, i: usize, j: usize, out: *mut bool) -> GmStatus {
    guard(|| {
        let g = graph(g)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        if i >= g.n() || j >= g.n() {
            set_error(&format!("vertex out of range for order {}", g.n()));
            return Err(GmStatus::Parameter);
        }
        *out = g.adjacent(i, j);
        Ok(())
    })
}

/// graph6 encoding (with trailing newline). Free the string with [`gm_string_free`].
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gm_graph_to_graph6(g: *const GmGraph, out: *mut *mut c_char) -> GmStatus {
    guard(|| {
        let g = graph(g)?;
        store_string(out, lib(to_graph6(g))?)
    })
}

/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gm_graph_from_graph6(text: *const c_char, out: *mut *mut GmGraph) -> GmStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| {
            set_error("graph6 text is not UTF-8");
            GmStatus::Parse
        })?;
        store(out, GmGraph(lib(from_graph6(s))?))
    })
}

/// Exact characteristic polynomial comparison. `budget` bounds the order.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gm_cospectral(a: *const GmGraph, b: *const GmGraph, budget: usize, out: *mut bool) -> GmStatus {
    guard(|| {
        let (a, b) = (graph(a)?, graph(b)?);
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = lib(cospectral(a, b, budget))?.cospectral;
        Ok(())
    })
}

/// Runs the full pipeline. A certificate with failed checks is still returned
/// with status `Ok`; inspect it with [`gm_certificate_passed`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gm_certify(
    q: u32,
    e: usize,
    skip_charpoly: bool,
    spectral_budget: usize,
    out: *mut *mut GmCertificate,
) -> GmStatus {
    guard(|| {
        let opts = CertifyOptions { spectral_budget, skip_charpoly, ..CertifyOptions::default() };
        let params = lib(Parameters::new(q, e))?;
        store(out, GmCertificate(lib(certify(params, &opts))?))
    })
}

/// False for a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gm_certificate_passed(c: *const GmCertificate) -> bool {
    c.as_ref().is_some_and(|c| c.0.passed)
}

/// Pretty-printed certificate JSON. Free with [`gm_string_free`].
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gm_certificate_to_json(c: *const GmCertificate, out: *mut *mut c_char) -> GmStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("certificate"))?;
        store_string(out, lib(serde_json::to_string_pretty(&c.0).map_err(Error::from))?)
    })
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gm_graph_free(g: *mut GmGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gm_certificate_free(c: *mut GmCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
