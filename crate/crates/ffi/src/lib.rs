//! C ABI over the weaklabel library.
//!
//! Objects cross the boundary as opaque handles that the caller releases with
//! the matching `wl_*_free`. Every fallible call returns a [`WlStatus`]; on
//! failure [`wl_last_error_message`] describes what went wrong. Strings
//! returned through `char **` belong to the caller and are released with
//! [`wl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use weaklabel::correspondence::{
    build_graph, build_multigraph, extract_graph, extract_multigraph, CorrespondenceError, HarmonicCollection, Mode,
};
use weaklabel::enumeration::{enumerate, Catalog, EnumOptions};
use weaklabel::graph::{LabeledGraph, LabeledMultigraph};
use weaklabel::harmonic::{verify_weak, verify_weak_multi};
use weaklabel::io::{self, GraphFile};
use weaklabel::notation::parse_collection;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    NotVerified = 4,
    AxiomsFailed = 5,
    InvalidArgument = 6,
    OutOfRange = 7,
    Panic = 8,
}

enum GraphInner {
    Simple(LabeledGraph),
    Multi(LabeledMultigraph),
}

/// A labeled graph or multigraph.
pub struct WlGraph(GraphInner);

/// A collection of harmonic (multi)sets.
pub struct WlCollection(HarmonicCollection);

/// The result of an enumeration, in canonical order.
pub struct WlCatalog(Catalog);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: WlStatus, msg: impl Into<String>) -> WlStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> WlStatus) -> WlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(WlStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, WlStatus> {
    if s.is_null() {
        return Err(fail(WlStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(WlStatus::InvalidUtf8, e.to_string()))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> WlStatus {
    *out = Box::into_raw(Box::new(value));
    WlStatus::Ok
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> WlStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            WlStatus::Ok
        }
        Err(e) => fail(WlStatus::InvalidArgument, e.to_string()),
    }
}

fn correspondence_status(e: &CorrespondenceError) -> WlStatus {
    match e {
        CorrespondenceError::NotVerified(_) => WlStatus::NotVerified,
        CorrespondenceError::Axioms(_) => WlStatus::AxiomsFailed,
        _ => WlStatus::InvalidArgument,
    }
}

macro_rules! check_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(WlStatus::NullPointer, concat!("null pointer: ", stringify!($p)));
        })+
    };
}

/// Message for the most recent failure on this thread. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn wl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn wl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses graph JSON: `{"n": .., "edges": [[a, b], ...]}`, or
/// `[[a, b, m], ...]` for multiplicities.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wl_graph_from_json(json: *const c_char, out: *mut *mut WlGraph) -> WlStatus {
    guard(|| {
        check_null!(out);
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let file = match GraphFile::parse(text) {
            Ok(f) => f,
            Err(e) => return fail(WlStatus::ParseError, e.to_string()),
        };
        let inner = if file.is_weighted() {
            file.multigraph().map(GraphInner::Multi)
        } else {
            file.simple().map(GraphInner::Simple)
        };
        match inner {
            Ok(g) => put(out, WlGraph(g)),
            Err(e) => fail(WlStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wl_graph_to_json(graph: *const WlGraph, out: *mut *mut c_char) -> WlStatus {
    guard(|| {
        check_null!(graph, out);
        let text = match &(*graph).0 {
            GraphInner::Simple(g) => io::graph_to_json(g),
            GraphInner::Multi(g) => io::multigraph_to_json(g),
        };
        put_string(out, text)
    })
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wl_graph_vertex_count(graph: *const WlGraph) -> usize {
    match graph.as_ref() {
        None => 0,
        Some(WlGraph(GraphInner::Simple(g))) => g.n(),
        Some(WlGraph(GraphInner::Multi(g))) => g.n(),
    }
}

/// Writes whether every non-leaf balances.
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wl_graph_verify(graph: *const WlGraph, out: *mut bool) -> WlStatus {
    guard(|| {
        check_null!(graph, out);
        *out = match &(*graph).0 {
            GraphInner::Simple(g) => verify_weak(g).is_verified(),
            GraphInner::Multi(g) => verify_weak_multi(g).is_verified(),
        };
        WlStatus::Ok
    })
}

/// # Safety
/// `graph` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wl_graph_free(graph: *mut WlGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Parses collection notation such as `"123;02346;345"` or `"0^6,1,2,3,4"`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wl_collection_parse(text: *const c_char, out: *mut *mut WlCollection) -> WlStatus {
    guard(|| {
        check_null!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_collection(text, None) {
            Ok(c) => put(out, WlCollection(c)),
            Err(e) => fail(WlStatus::ParseError, e.to_string()),
        }
    })
}

/// Canonical notation of a collection.
///
/// # Safety
/// `collection` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wl_collection_format(collection: *const WlCollection, out: *mut *mut c_char) -> WlStatus {
    guard(|| {
        check_null!(collection, out);
        put_string(out, (*collection).0.to_string())
    })
}

/// # Safety
/// `collection` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wl_collection_free(collection: *mut WlCollection) {
    if !collection.is_null() {
        drop(Box::from_raw(collection));
    }
}

/// Closed neighborhoods of the non-leaves of a weakly labeled graph.
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wl_extract(graph: *const WlGraph, out: *mut *mut WlCollection) -> WlStatus {
    guard(|| {
        check_null!(graph, out);
        let c = match &(*graph).0 {
            GraphInner::Simple(g) => extract_graph(g),
            GraphInner::Multi(g) => extract_multigraph(g),
        };
        match c {
            Ok(c) => put(out, WlCollection(c)),
            Err(e) => fail(correspondence_status(&e), e.to_string()),
        }
    })
}

/// The connected graph encoded by a collection.
///
/// # Safety
/// `collection` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wl_build(collection: *const WlCollection, out: *mut *mut WlGraph) -> WlStatus {
    guard(|| {
        check_null!(collection, out);
        let c = &(*collection).0;
        let g = match c.mode() {
            Mode::Simple => build_graph(c, true).map(GraphInner::Simple),
            Mode::Multi => build_multigraph(c, true).map(GraphInner::Multi),
        };
        match g {
            Ok(g) => put(out, WlGraph(g)),
            Err(e) => fail(correspondence_status(&e), e.to_string()),
        }
    })
}

/// Every connected weakly labeled simple graph on `n` vertices. `threads`
/// of 0 uses the default pool; the result does not depend on it.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wl_enumerate(n: usize, threads: usize, out: *mut *mut WlCatalog) -> WlStatus {
    guard(|| {
        check_null!(out);
        let mut opts = EnumOptions::new(n);
        if threads > 0 {
            opts = opts.threads(threads);
        }
        match enumerate(&opts) {
            Ok(c) => put(out, WlCatalog(c)),
            Err(e) => fail(WlStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Number of entries, or 0 for a null handle.
///
/// # Safety
/// `catalog` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wl_catalog_len(catalog: *const WlCatalog) -> usize {
    catalog.as_ref().map_or(0, |c| c.0.count())
}

/// Copies entry `index` into a new collection handle.
///
/// # Safety
/// `catalog` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wl_catalog_get(
    catalog: *const WlCatalog,
    index: usize,
    out: *mut *mut WlCollection,
) -> WlStatus {
    guard(|| {
        check_null!(catalog, out);
        let entries = &(*catalog).0.entries;
        match entries.get(index) {
            Some(c) => put(out, WlCollection(c.clone())),
            None => fail(WlStatus::OutOfRange, format!("index {index} out of range")),
        }
    })
}

/// The catalog as pretty JSON.
///
/// # Safety
/// `catalog` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wl_catalog_to_json(catalog: *const WlCatalog, out: *mut *mut c_char) -> WlStatus {
    guard(|| {
        check_null!(catalog, out);
        put_string(out, (*catalog).0.to_json())
    })
}

/// # Safety
/// `catalog` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wl_catalog_free(catalog: *mut WlCatalog) {
    if !catalog.is_null() {
        drop(Box::from_raw(catalog));
    }
}
