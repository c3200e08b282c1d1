//! C ABI over the edgecolor library. Graphs and results are opaque handles
//! released with their `_free` function; every call returns an [`EcStatus`]
//! and leaves a message for [`ec_last_error`] on failure. Vertex and edge ids
//! are 0-based; colors are 1-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use edgecolor::driver::{color_graph, verify, DensityCertificate, InitialK, RunConfig, RunError};
use edgecolor::error::Error;
use edgecolor::graph::{parse_graph, Multigraph};
use edgecolor::oracle::gamma_bruteforce;

/// Result codes of every `ec_*` call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EcStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    InvalidArgument = 3,
    /// The palette is too small and escalation was off; the result still
    /// carries the certificate when one exists.
    Infeasible = 4,
    TooLarge = 5,
    InvalidColoring = 6,
    Engine = 7,
    Panic = 8,
}

/// Opaque multigraph.
pub struct EcGraph {
    g: Multigraph,
}

/// Opaque outcome of a coloring run.
pub struct EcResult {
    k: usize,
    colors: Vec<u32>,
    certificates: Vec<DensityCertificate>,
    swaps: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn fail(status: EcStatus, msg: impl Into<String>) -> EcStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> EcStatus {
    match e {
        Error::Parse { .. } => EcStatus::Parse,
        Error::TooLarge { .. } => EcStatus::TooLarge,
        Error::InvalidConfig(_) | Error::BadEdge(_) | Error::BadVertex(_) | Error::BadColor { .. } => {
            EcStatus::InvalidArgument
        }
        Error::InvalidCertificate(_) => EcStatus::InvalidColoring,
        _ => EcStatus::Engine,
    }
}

fn guard(f: impl FnOnce() -> EcStatus) -> EcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(EcStatus::Panic, "internal panic"),
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ec_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses the `p edge n m` / `e u v` text format (1-based ids in the text).
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ec_graph_parse(text: *const c_char, out: *mut *mut EcGraph) -> EcStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(EcStatus::NullPointer, "null argument");
        }
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            return fail(EcStatus::Parse, "text is not UTF-8");
        };
        match parse_graph(s) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(EcGraph { g }));
                EcStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Builds a graph on `n` vertices from `m` pairs stored as `ends[2i], ends[2i+1]` (0-based).
///
/// # Safety
/// `ends` must point to `2 * m` readable values (or be null when `m` is 0).
#[no_mangle]
pub unsafe extern "C" fn ec_graph_from_edges(n: u32, ends: *const u32, m: u32, out: *mut *mut EcGraph) -> EcStatus {
    guard(|| {
        if out.is_null() || (ends.is_null() && m > 0) {
            return fail(EcStatus::NullPointer, "null argument");
        }
        let raw = if m == 0 { &[][..] } else { std::slice::from_raw_parts(ends, 2 * m as usize) };
        let pairs: Vec<(usize, usize)> = raw.chunks(2).map(|p| (p[0] as usize, p[1] as usize)).collect();
        match Multigraph::from_edges(n as usize, &pairs) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(EcGraph { g }));
                EcStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `g` must come from `ec_graph_parse`/`ec_graph_from_edges` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ec_graph_free(g: *mut EcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle or null.
#[no_mangle]
pub unsafe extern "C" fn ec_graph_vertex_count(g: *const EcGraph) -> u32 {
    g.as_ref().map_or(0, |g| g.g.vertex_count() as u32)
}

/// # Safety
/// `g` must be a live graph handle or null.
#[no_mangle]
pub unsafe extern "C" fn ec_graph_edge_count(g: *const EcGraph) -> u32 {
    g.as_ref().map_or(0, |g| g.g.edge_count() as u32)
}

/// # Safety
/// `g` must be a live graph handle or null.
#[no_mangle]
pub unsafe extern "C" fn ec_graph_max_degree(g: *const EcGraph) -> u32 {
    g.as_ref().map_or(0, |g| g.g.max_degree() as u32)
}

/// Colors the graph. `initial_k = 0` starts at Δ+1. With `escalate = 0` a
/// too-small palette yields `Infeasible` and a result holding the certificate.
///
/// # Safety
/// `g` must be a live graph handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ec_color(g: *const EcGraph, initial_k: u32, escalate: i32, out: *mut *mut EcResult) -> EcStatus {
    guard(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            return fail(EcStatus::NullPointer, "null argument");
        };
        let cfg = RunConfig {
            initial_k: if initial_k == 0 { InitialK::Auto } else { InitialK::Fixed(initial_k as usize) },
            escalate: escalate != 0,
            ..RunConfig::default()
        };
        match color_graph(&g.g, &cfg) {
            Ok(r) => {
                let colors = r.coloring.colors().iter().map(|c| c.unwrap_or(0) as u32).collect();
                *out = Box::into_raw(Box::new(EcResult {
                    k: r.k_used,
                    colors,
                    certificates: r.certificates,
                    swaps: r.stats.swaps,
                }));
                EcStatus::Ok
            }
            Err(RunError::Infeasible { k, certificate, .. }) => {
                let msg = RunError::Infeasible { k, certificate: certificate.clone(), trace: Default::default() };
                *out = Box::into_raw(Box::new(EcResult {
                    k,
                    colors: Vec::new(),
                    certificates: certificate.into_iter().collect(),
                    swaps: 0,
                }));
                fail(EcStatus::Infeasible, msg.to_string())
            }
            Err(RunError::Failed(e)) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `r` must come from `ec_color` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ec_result_free(r: *mut EcResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Palette size used, or the failed palette size for an infeasible result.
///
/// # Safety
/// `r` must be a live result handle or null.
#[no_mangle]
pub unsafe extern "C" fn ec_result_k(r: *const EcResult) -> u32 {
    r.as_ref().map_or(0, |r| r.k as u32)
}

/// # Safety
/// `r` must be a live result handle or null.
#[no_mangle]
pub unsafe extern "C" fn ec_result_swaps(r: *const EcResult) -> u64 {
    r.as_ref().map_or(0, |r| r.swaps as u64)
}

/// Copies edge colors into `buf` (capacity `len`); returns the edge count,
/// which is 0 for an infeasible result.
///
/// # Safety
/// `r` must be a live result handle; `buf` must hold `len` values or be null.
#[no_mangle]
pub unsafe extern "C" fn ec_result_colors(r: *const EcResult, buf: *mut u32, len: u32) -> u32 {
    let Some(r) = r.as_ref() else { return 0 };
    if !buf.is_null() {
        let n = r.colors.len().min(len as usize);
        ptr::copy_nonoverlapping(r.colors.as_ptr(), buf, n);
    }
    r.colors.len() as u32
}

/// # Safety
/// `r` must be a live result handle or null.
#[no_mangle]
pub unsafe extern "C" fn ec_result_certificate_count(r: *const EcResult) -> u32 {
    r.as_ref().map_or(0, |r| r.certificates.len() as u32)
}

/// Summary of certificate `i`: the failed palette, induced edge count, the
/// density bound it proves, and its vertex count.
///
/// # Safety
/// `r` must be a live result handle; the out pointers must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn ec_result_certificate(
    r: *const EcResult,
    i: u32,
    k_failed: *mut u32,
    edge_count: *mut u32,
    bound: *mut u32,
    vertex_count: *mut u32,
) -> EcStatus {
    let Some(r) = r.as_ref() else { return fail(EcStatus::NullPointer, "null result") };
    let Some(c) = r.certificates.get(i as usize) else {
        return fail(EcStatus::InvalidArgument, format!("no certificate {i}"));
    };
    for (p, v) in [(k_failed, c.k_failed), (edge_count, c.edge_count), (bound, c.bound), (vertex_count, c.vertices.len())] {
        if let Some(p) = p.as_mut() {
            *p = v as u32;
        }
    }
    EcStatus::Ok
}

/// Copies the vertices of certificate `i` into `buf`; returns how many it has.
///
/// # Safety
/// `r` must be a live result handle; `buf` must hold `len` values or be null.
#[no_mangle]
pub unsafe extern "C" fn ec_result_certificate_vertices(r: *const EcResult, i: u32, buf: *mut u32, len: u32) -> u32 {
    let Some(c) = r.as_ref().and_then(|r| r.certificates.get(i as usize)) else { return 0 };
    if !buf.is_null() {
        for (j, v) in c.vertices.iter().take(len as usize).enumerate() {
            *buf.add(j) = v as u32;
        }
    }
    c.vertices.len() as u32
}

/// Checks that `colors` (one per edge, 0 for uncolored) is a proper total `k`-coloring.
///
/// # Safety
/// `g` must be a live graph handle and `colors` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ec_verify(g: *const EcGraph, colors: *const u32, len: u32, k: u32) -> EcStatus {
    guard(|| {
        let Some(g) = g.as_ref() else { return fail(EcStatus::NullPointer, "null graph") };
        if colors.is_null() && len > 0 {
            return fail(EcStatus::NullPointer, "null colors");
        }
        let raw = if len == 0 { &[][..] } else { std::slice::from_raw_parts(colors, len as usize) };
        let cols: Vec<Option<usize>> = raw.iter().map(|&c| (c != 0).then_some(c as usize)).collect();
        match verify(&g.g, &cols, k as usize) {
            Ok(()) => EcStatus::Ok,
            Err(v) => fail(EcStatus::InvalidColoring, v.to_string()),
        }
    })
}

/// Exact density Γ by subset enumeration (at most 20 vertices).
///
/// # Safety
/// `g` must be a live graph handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ec_gamma(g: *const EcGraph, out: *mut u32) -> EcStatus {
    guard(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            return fail(EcStatus::NullPointer, "null argument");
        };
        match gamma_bruteforce(&g.g, edgecolor::oracle::DEFAULT_GAMMA_LIMIT) {
            Ok(r) => {
                *out = r.gamma as u32;
                EcStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_handles_are_reported() {
        unsafe {
            assert_eq!(ec_graph_parse(ptr::null(), ptr::null_mut()), EcStatus::NullPointer);
            assert!(!ec_last_error().is_null());
            assert_eq!(ec_graph_edge_count(ptr::null()), 0);
            ec_graph_free(ptr::null_mut());
            ec_result_free(ptr::null_mut());
        }
    }
}
