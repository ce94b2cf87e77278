//! C ABI over `ribvol`: opaque graph handles, status codes and a per-thread last error.
//!
//! Strings returned through `out` pointers are owned by the caller and must be released
//! with [`ribvol_string_free`]; graph handles with [`ribvol_graph_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use ribvol::decompose::acyclic_decompose;
use ribvol::rational::{fmt_q, parse_q_list};
use ribvol::ribbon::{automorphism_order, GraphJson, LabelledGraph};
use ribvol::{volumes, Error};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RibvolStatus {
    Ok = 0,
    Internal = 1,
    InvalidInput = 2,
    NullPointer = 4,
    InvalidUtf8 = 5,
}

/// Opaque labelled oriented ribbon graph.
pub struct RibvolGraph {
    inner: LabelledGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> RibvolStatus {
    let code = if e.exit_code() == 1 { RibvolStatus::Internal } else { RibvolStatus::InvalidInput };
    set_error(e.to_string());
    code
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, RibvolStatus> {
    if p.is_null() {
        set_error("null string argument".into());
        return Err(RibvolStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        RibvolStatus::InvalidUtf8
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> RibvolStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return RibvolStatus::NullPointer;
    }
    *out = CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut());
    RibvolStatus::Ok
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return fail(e),
        }
    };
}

macro_rules! arg {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(code) => return code,
        }
    };
}

/// Message of the last failed call on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn ribvol_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ribvol_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ribvol_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a graph in the JSON graph format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ribvol_graph_from_json(json: *const c_char, out: *mut *mut RibvolGraph) -> RibvolStatus {
    let text = arg!(read_str(json));
    if out.is_null() {
        set_error("null output pointer".into());
        return RibvolStatus::NullPointer;
    }
    let gj: GraphJson = tri!(serde_json::from_str(text).map_err(Error::from));
    let inner = tri!(gj.to_labelled());
    *out = Box::into_raw(Box::new(RibvolGraph { inner }));
    RibvolStatus::Ok
}

/// Releases a graph handle.
///
/// # Safety
/// `g` must come from [`ribvol_graph_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ribvol_graph_free(g: *mut RibvolGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Directed type `(g, n+, n-)` of a graph.
///
/// # Safety
/// `g` must be a live handle; the outputs writable.
#[no_mangle]
pub unsafe extern "C" fn ribvol_graph_type(g: *const RibvolGraph, genus: *mut u32, n_plus: *mut usize, n_minus: *mut usize) -> RibvolStatus {
    if g.is_null() || genus.is_null() || n_plus.is_null() || n_minus.is_null() {
        set_error("null pointer argument".into());
        return RibvolStatus::NullPointer;
    }
    let (a, b, c) = tri!((*g).inner.directed_type());
    *genus = a;
    *n_plus = b;
    *n_minus = c;
    RibvolStatus::Ok
}

/// Number of sign- and label-preserving automorphisms.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ribvol_graph_automorphisms(g: *const RibvolGraph, out: *mut usize) -> RibvolStatus {
    if g.is_null() || out.is_null() {
        set_error("null pointer argument".into());
        return RibvolStatus::NullPointer;
    }
    *out = automorphism_order(&(*g).inner);
    RibvolStatus::Ok
}

/// Acyclic decomposition along a vertex order; writes the stable graph as JSON.
///
/// # Safety
/// `g` must be a live handle, `order` point to `len` indices, `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn ribvol_graph_decompose(g: *const RibvolGraph, order: *const usize, len: usize, out: *mut *mut c_char) -> RibvolStatus {
    if g.is_null() || (order.is_null() && len > 0) {
        set_error("null pointer argument".into());
        return RibvolStatus::NullPointer;
    }
    let order = if len == 0 { &[][..] } else { std::slice::from_raw_parts(order, len) };
    let d = tri!(acyclic_decompose(&(*g).inner, order));
    let json = tri!(serde_json::to_string(&d.stable).map_err(Error::from));
    write_string(out, json)
}

/// `F_{g,n}` in the polynomial JSON format.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ribvol_fpoly_json(g: u32, n: usize, out: *mut *mut c_char) -> RibvolStatus {
    let p = tri!(volumes::f_polynomial(g, n));
    let json = tri!(serde_json::to_string(&p.to_json()).map_err(Error::from));
    write_string(out, json)
}

/// `F_{g,n}` in human-readable form.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ribvol_fpoly_string(g: u32, n: usize, out: *mut *mut c_char) -> RibvolStatus {
    let p = tri!(volumes::f_polynomial(g, n));
    write_string(out, p.to_string())
}

/// `Z_{g,n+,n-}` at comma-separated rational lengths; writes `"num/den"`.
///
/// # Safety
/// `l_plus`, `l_minus` must be NUL-terminated strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ribvol_zeval(g: u32, l_plus: *const c_char, l_minus: *const c_char, out: *mut *mut c_char) -> RibvolStatus {
    let lp = tri!(parse_q_list(arg!(read_str(l_plus))));
    let lm = tri!(parse_q_list(arg!(read_str(l_minus))));
    let z = tri!(volumes::z_evaluate(g, &lp, &lm));
    write_string(out, fmt_q(&z))
}
