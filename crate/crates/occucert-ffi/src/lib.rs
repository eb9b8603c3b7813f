//! C ABI for the exact-certificate library.
//!
//! Handles are opaque pointers created and destroyed here; strings returned
//! through out-parameters are owned by this library and must be released
//! with `occ_string_free`. Every entry point catches panics at the boundary
//! and reports them as `OCC_STATUS_COMPUTATION` instead of unwinding into C.
//!
//! Rational arguments use the same text forms as the CLI: a single value
//! like `"7/5"` applies to every vertex, a comma-separated list like
//! `"1/2,1/3,1/3"` assigns one value per vertex.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use occucert::coloring::{run_demand_process, ColoringError, DemandVector};
use occucert::graph::{Graph, GraphError};
use occucert::hardcore::{expected_size, Fugacity, HardcoreError};
use occucert::occupancy::{dual_certificate, general_params, thm1_bound, OccupancyError};
use occucert::rat::{fmt_rat, parse_rat, Rat};
use occucert::report::{
    analyze_report, certify_report, constants_report, counterexample_report, demand_report,
    to_json_string,
};
use occucert::special::{lambert_w, SpecialError};

/// Result of every fallible call in this interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OccStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    Utf8 = 2,
    InvalidGraph = 3,
    InvalidFugacity = 4,
    InvalidDemand = 5,
    /// A component or basis enumeration exceeded the size cap.
    CapExceeded = 6,
    /// A floating-point argument was outside the function's domain.
    DomainError = 7,
    /// Internal failure; inputs were accepted but the computation gave up.
    Computation = 8,
}

/// Opaque graph handle.
pub struct OccGraph {
    inner: Graph,
}

fn map_graph(e: &GraphError) -> OccStatus {
    match e {
        GraphError::SubsetCapExceeded { .. } => OccStatus::CapExceeded,
        _ => OccStatus::InvalidGraph,
    }
}

fn map_hardcore(e: &HardcoreError) -> OccStatus {
    match e {
        HardcoreError::CapExceeded { .. } => OccStatus::CapExceeded,
        HardcoreError::Graph(g) => map_graph(g),
        HardcoreError::LengthMismatch { .. } | HardcoreError::NegativeFugacity { .. } => {
            OccStatus::InvalidFugacity
        }
    }
}

fn map_special(e: &SpecialError) -> OccStatus {
    match e {
        SpecialError::Domain(_) | SpecialError::InvalidB(_) => OccStatus::DomainError,
        _ => OccStatus::Computation,
    }
}

fn map_occupancy(e: &OccupancyError) -> OccStatus {
    match e {
        OccupancyError::LpSizeCap { .. } => OccStatus::CapExceeded,
        OccupancyError::Graph(g) => map_graph(g),
        OccupancyError::Hardcore(h) => map_hardcore(h),
        OccupancyError::Special(s) => map_special(s),
        OccupancyError::NonpositiveFugacity { .. }
        | OccupancyError::LengthMismatch { .. }
        | OccupancyError::LambdaOutOfRange { .. } => OccStatus::InvalidFugacity,
        _ => OccStatus::Computation,
    }
}

fn map_coloring(e: &ColoringError) -> OccStatus {
    match e {
        ColoringError::LengthMismatch { .. }
        | ColoringError::NegativeDemand { .. }
        | ColoringError::InfeasibleDemand { .. } => OccStatus::InvalidDemand,
        ColoringError::NonpositiveFugacity { .. } => OccStatus::InvalidFugacity,
        ColoringError::Graph(g) => map_graph(g),
        ColoringError::Hardcore(h) => map_hardcore(h),
        ColoringError::Occupancy(o) => map_occupancy(o),
        ColoringError::LocalOccupancyFailed { .. } => OccStatus::Computation,
    }
}

fn guard(f: impl FnOnce() -> OccStatus) -> OccStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(OccStatus::Computation)
}

/// Reads a CLI-style rational list and broadcasts a single value to n
/// vertices, mirroring the command line's treatment of `--lambda`.
fn parse_values(s: &str, n: usize) -> Option<Vec<Rat>> {
    let vals: Vec<Rat> = s
        .split(',')
        .map(|part| parse_rat(part.trim()))
        .collect::<Result<_, _>>()
        .ok()?;
    match vals.len() {
        1 if n != 1 => Some(vec![vals[0].clone(); n]),
        len if len == n => Some(vals),
        _ => None,
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, OccStatus> {
    if s.is_null() {
        return Err(OccStatus::NullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| OccStatus::Utf8)
}

unsafe fn read_graph<'a>(g: *const OccGraph) -> Result<&'a Graph, OccStatus> {
    g.as_ref().map(|h| &h.inner).ok_or(OccStatus::NullArgument)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> OccStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            OccStatus::Ok
        }
        Err(_) => OccStatus::Computation,
    }
}

fn lambda_for(g: &Graph, text: &str) -> Result<Fugacity, OccStatus> {
    let vals = parse_values(text, g.n()).ok_or(OccStatus::InvalidFugacity)?;
    Fugacity::per_vertex(vals).map_err(|e| map_hardcore(&e))
}

/// Builds a graph from a flat array of `edge_count` vertex pairs
/// `[u0, v0, u1, v1, ...]`. Vertices are `0..n`; parallel edges collapse,
/// self-loops are rejected. On success writes a handle that must be
/// released with `occ_graph_free`.
#[no_mangle]
pub unsafe extern "C" fn occ_graph_new(
    n: u32,
    edges: *const u32,
    edge_count: usize,
    out: *mut *mut OccGraph,
) -> OccStatus {
    if out.is_null() || (edges.is_null() && edge_count > 0) {
        return OccStatus::NullArgument;
    }
    let flat: &[u32] = if edge_count == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(edges, 2 * edge_count)
    };
    guard(|| {
        let pairs: Vec<(u32, u32)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        match Graph::new(n as usize, &pairs) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(OccGraph { inner }));
                OccStatus::Ok
            }
            Err(e) => map_graph(&e),
        }
    })
}

/// Releases a handle from `occ_graph_new`. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn occ_graph_free(g: *mut OccGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn occ_graph_vertex_count(g: *const OccGraph) -> u32 {
    g.as_ref().map_or(0, |h| h.inner.n() as u32)
}

/// Number of edges, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn occ_graph_edge_count(g: *const OccGraph) -> u32 {
    g.as_ref().map_or(0, |h| h.inner.m() as u32)
}

/// Maximum degree, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn occ_graph_max_degree(g: *const OccGraph) -> u32 {
    g.as_ref().map_or(0, |h| h.inner.max_degree() as u32)
}

/// Average occupied-set size under the hard-core measure, written as an
/// exact rational string. `cap` limits the per-component enumeration size.
#[no_mangle]
pub unsafe extern "C" fn occ_expected_size_str(
    g: *const OccGraph,
    lambda: *const c_char,
    cap: usize,
    out: *mut *mut c_char,
) -> OccStatus {
    if out.is_null() {
        return OccStatus::NullArgument;
    }
    guard(|| {
        let g = match read_graph(g) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let text = match read_str(lambda) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let lam = match lambda_for(g, text) {
            Ok(l) => l,
            Err(s) => return s,
        };
        match expected_size(g, &lam, cap) {
            Ok(v) => write_string(out, fmt_rat(&v)),
            Err(e) => map_hardcore(&e),
        }
    })
}

/// Per-vertex degree-weighted lower bound on the average occupied-set
/// size, written as an exact rational string. Valid for any positive
/// fugacities; it is a true lower bound whenever every fugacity is below
/// one over the maximum degree.
#[no_mangle]
pub unsafe extern "C" fn occ_degree_bound_str(
    g: *const OccGraph,
    lambda: *const c_char,
    out: *mut *mut c_char,
) -> OccStatus {
    if out.is_null() {
        return OccStatus::NullArgument;
    }
    guard(|| {
        let g = match read_graph(g) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let text = match read_str(lambda) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let lam = match lambda_for(g, text) {
            Ok(l) => l,
            Err(s) => return s,
        };
        match thm1_bound(g, &lam) {
            Ok(v) => write_string(out, fmt_rat(&v)),
            Err(e) => map_occupancy(&e),
        }
    })
}

/// Full analysis report as pretty-printed JSON: degrees, density
/// statistics, exact partition function summary, bound, and gap.
#[no_mangle]
pub unsafe extern "C" fn occ_analyze_json(
    g: *const OccGraph,
    lambda: *const c_char,
    cap: usize,
    out: *mut *mut c_char,
) -> OccStatus {
    if out.is_null() {
        return OccStatus::NullArgument;
    }
    guard(|| {
        let g = match read_graph(g) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let text = match read_str(lambda) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let lam = match lambda_for(g, text) {
            Ok(l) => l,
            Err(s) => return s,
        };
        match analyze_report(g, &lam, cap) {
            Ok(r) => write_string(out, to_json_string(&r)),
            Err(e) => map_occupancy(&e),
        }
    })
}

/// Certification report as pretty-printed JSON. The `certificate` field is
/// JSON null when the dual feasibility conditions fail; that is a verdict,
/// not an error.
#[no_mangle]
pub unsafe extern "C" fn occ_certify_json(
    g: *const OccGraph,
    lambda: *const c_char,
    cap: usize,
    out: *mut *mut c_char,
) -> OccStatus {
    if out.is_null() {
        return OccStatus::NullArgument;
    }
    guard(|| {
        let g = match read_graph(g) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let text = match read_str(lambda) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let lam = match lambda_for(g, text) {
            Ok(l) => l,
            Err(s) => return s,
        };
        match certify_report(g, &lam, cap, None) {
            Ok(r) => write_string(out, to_json_string(&r)),
            Err(e) => map_occupancy(&e),
        }
    })
}

/// Writes whether an exact dual certificate exists at these fugacities.
/// A failed feasibility condition yields `false` with `OCC_STATUS_OK`.
#[no_mangle]
pub unsafe extern "C" fn occ_has_certificate(
    g: *const OccGraph,
    lambda: *const c_char,
    out: *mut bool,
) -> OccStatus {
    if out.is_null() {
        return OccStatus::NullArgument;
    }
    guard(|| {
        let g = match read_graph(g) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let text = match read_str(lambda) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let lam = match lambda_for(g, text) {
            Ok(l) => l,
            Err(s) => return s,
        };
        let p = match general_params(&lam) {
            Ok(p) => p,
            Err(e) => return map_occupancy(&e),
        };
        match dual_certificate(g, &p) {
            Ok(_) => {
                *out = true;
                OccStatus::Ok
            }
            Err(OccupancyError::ConditionsFailed(_)) => {
                *out = false;
                OccStatus::Ok
            }
            Err(e) => map_occupancy(&e),
        }
    })
}

/// Runs the weight process for the demand vector `q` (same text form as
/// `lambda`) and writes the membership report as pretty-printed JSON.
/// `strict` re-verifies the local occupancy inequality on every induced
/// subgraph the process visits.
#[no_mangle]
pub unsafe extern "C" fn occ_demand_json(
    g: *const OccGraph,
    lambda: *const c_char,
    q: *const c_char,
    cap: usize,
    strict: bool,
    out: *mut *mut c_char,
) -> OccStatus {
    if out.is_null() {
        return OccStatus::NullArgument;
    }
    guard(|| {
        let g = match read_graph(g) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let lam = match read_str(lambda).and_then(|t| lambda_for(g, t)) {
            Ok(l) => l,
            Err(s) => return s,
        };
        let q_text = match read_str(q) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let Some(q_vals) = parse_values(q_text, g.n()) else {
            return OccStatus::InvalidDemand;
        };
        let q = match DemandVector::new(q_vals) {
            Ok(q) => q,
            Err(e) => return map_coloring(&e),
        };
        let p = match general_params(&lam) {
            Ok(p) => p,
            Err(e) => return map_occupancy(&e),
        };
        let fc = match run_demand_process(g, &p, &q, cap, strict) {
            Ok(fc) => fc,
            Err(e) => return map_coloring(&e),
        };
        match demand_report(g, &p, &fc, &q) {
            Ok(r) => write_string(out, to_json_string(&r)),
            Err(e) => map_coloring(&e),
        }
    })
}

/// The three-vertex star instance separating the linear program from the
/// degree-weighted bound, as pretty-printed JSON.
#[no_mangle]
pub unsafe extern "C" fn occ_counterexample_json(
    cap: usize,
    out: *mut *mut c_char,
) -> OccStatus {
    if out.is_null() {
        return OccStatus::NullArgument;
    }
    guard(|| match counterexample_report(cap) {
        Ok(r) => write_string(out, to_json_string(&r)),
        Err(e) => map_occupancy(&e),
    })
}

/// The two threshold constants with solver residuals, as pretty-printed
/// JSON.
#[no_mangle]
pub unsafe extern "C" fn occ_constants_json(out: *mut *mut c_char) -> OccStatus {
    if out.is_null() {
        return OccStatus::NullArgument;
    }
    guard(|| match constants_report() {
        Ok(r) => write_string(out, to_json_string(&r)),
        Err(e) => map_special(&e),
    })
}

/// Principal branch of the Lambert W function on (0, inf).
#[no_mangle]
pub unsafe extern "C" fn occ_lambert_w(x: f64, out: *mut f64) -> OccStatus {
    if out.is_null() {
        return OccStatus::NullArgument;
    }
    guard(|| match lambert_w(x) {
        Ok(w) => {
            *out = w;
            OccStatus::Ok
        }
        Err(e) => map_special(&e),
    })
}

/// Static name for a status code; never free this pointer.
#[no_mangle]
pub extern "C" fn occ_status_name(status: OccStatus) -> *const c_char {
    let name: &'static CStr = match status {
        OccStatus::Ok => c"ok",
        OccStatus::NullArgument => c"null argument",
        OccStatus::Utf8 => c"invalid utf-8",
        OccStatus::InvalidGraph => c"invalid graph",
        OccStatus::InvalidFugacity => c"invalid fugacity",
        OccStatus::InvalidDemand => c"invalid demand",
        OccStatus::CapExceeded => c"enumeration cap exceeded",
        OccStatus::DomainError => c"argument outside domain",
        OccStatus::Computation => c"computation failed",
    };
    name.as_ptr()
}

/// Releases a string returned by this library. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn occ_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
