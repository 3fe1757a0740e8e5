//! C interface for the hypersd library.
//!
//! Hypergraphs cross the boundary as opaque handles created from JSON text;
//! every other result comes back as a caller-owned C string.  All functions
//! return an [`HsdStatus`] and record a human-readable message for failures,
//! retrievable with [`hsd_last_error_message`].  The generated header lives in
//! `include/hypersd.h`.
//!
//! Ownership rules: handles returned through an `out` parameter are released
//! with [`hsd_hypergraph_free`], strings with [`hsd_string_free`].  Nothing is
//! written through `out` on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hypersd::chains::embedded_homology;
use hypersd::cli::{homology_json, parse_ring};
use hypersd::hypergraph::{simplicial_closure, Hypergraph};
use hypersd::invariance::verify_invariance;
use hypersd::subdivision::iterate_subdivision;

/// Result code of every C entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HsdStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input could not be parsed or an argument was out of range.
    InvalidInput = 3,
    /// Subdivision stopped because the edge cap was exceeded.
    CapExceeded = 4,
    /// The library hit an internal error; the process state is still sound.
    Internal = 5,
}

/// Opaque hypergraph handle.
pub struct HsdHypergraph(Hypergraph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let text = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message").expect("static text has no NUL"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn fail(status: HsdStatus, message: String) -> HsdStatus {
    set_last_error(message);
    status
}

/// Runs a body behind the unwind barrier every entry point needs.
fn guarded(body: impl FnOnce() -> HsdStatus) -> HsdStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(HsdStatus::Internal, "internal error".to_owned()),
    }
}

/// Reads a required C string argument.
///
/// # Safety
///
/// `ptr` must be null or point to a NUL-terminated string valid for reads.
unsafe fn read_str<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, HsdStatus> {
    if ptr.is_null() {
        return Err(fail(HsdStatus::NullPointer, format!("{name} is null")));
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| fail(HsdStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

/// Borrows the hypergraph behind a handle argument.
///
/// # Safety
///
/// `ptr` must be null or a handle returned by this library and not yet freed.
unsafe fn read_handle<'a>(
    ptr: *const HsdHypergraph,
    name: &str,
) -> Result<&'a Hypergraph, HsdStatus> {
    if ptr.is_null() {
        return Err(fail(HsdStatus::NullPointer, format!("{name} is null")));
    }
    Ok(unsafe { &(*ptr).0 })
}

fn write_handle(out: *mut *mut HsdHypergraph, value: Hypergraph) -> HsdStatus {
    if out.is_null() {
        return fail(HsdStatus::NullPointer, "out is null".to_owned());
    }
    unsafe { *out = Box::into_raw(Box::new(HsdHypergraph(value))) };
    HsdStatus::Ok
}

fn write_string(out: *mut *mut c_char, value: String) -> HsdStatus {
    if out.is_null() {
        return fail(HsdStatus::NullPointer, "out is null".to_owned());
    }
    match CString::new(value) {
        Ok(text) => {
            unsafe { *out = text.into_raw() };
            HsdStatus::Ok
        }
        Err(_) => fail(
            HsdStatus::Internal,
            "result contains an interior NUL byte".to_owned(),
        ),
    }
}

/// Parses a hypergraph from JSON and returns a new handle through `out`.
///
/// The JSON shape matches the CLI: an object with `"vertices"` (array of
/// strings) and `"edges"` (array of arrays of vertex indices).
///
/// # Safety
///
/// `json` must be null or a valid NUL-terminated string, and `out` must be
/// null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn hsd_hypergraph_from_json(
    json: *const c_char,
    out: *mut *mut HsdHypergraph,
) -> HsdStatus {
    guarded(|| {
        let text = match unsafe { read_str(json, "json") } {
            Ok(text) => text,
            Err(status) => return status,
        };
        match Hypergraph::from_json(text) {
            Ok(h) => write_handle(out, h),
            Err(err) => fail(HsdStatus::InvalidInput, err.to_string()),
        }
    })
}

/// Serializes a hypergraph handle back to its canonical JSON form.
///
/// # Safety
///
/// `hypergraph` must be null or a live handle from this library, and `out`
/// must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn hsd_hypergraph_to_json(
    hypergraph: *const HsdHypergraph,
    out: *mut *mut c_char,
) -> HsdStatus {
    guarded(|| {
        let h = match unsafe { read_handle(hypergraph, "hypergraph") } {
            Ok(h) => h,
            Err(status) => return status,
        };
        write_string(out, h.to_json())
    })
}

/// Computes the simplicial closure and returns it as a new handle.
///
/// # Safety
///
/// `hypergraph` must be null or a live handle from this library, and `out`
/// must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn hsd_closure(
    hypergraph: *const HsdHypergraph,
    out: *mut *mut HsdHypergraph,
) -> HsdStatus {
    guarded(|| {
        let h = match unsafe { read_handle(hypergraph, "hypergraph") } {
            Ok(h) => h,
            Err(status) => return status,
        };
        write_handle(out, simplicial_closure(h).into_hypergraph())
    })
}

/// Subdivides a hypergraph `iterations` times and returns the result.
///
/// `cap` bounds the edge count of every intermediate round and must be
/// positive; exceeding it yields the cap-exceeded status.
///
/// # Safety
///
/// `hypergraph` must be null or a live handle from this library, and `out`
/// must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn hsd_subdivide(
    hypergraph: *const HsdHypergraph,
    iterations: usize,
    cap: usize,
    out: *mut *mut HsdHypergraph,
) -> HsdStatus {
    guarded(|| {
        let h = match unsafe { read_handle(hypergraph, "hypergraph") } {
            Ok(h) => h,
            Err(status) => return status,
        };
        if cap == 0 {
            return fail(HsdStatus::InvalidInput, "cap must be positive".to_owned());
        }
        match iterate_subdivision(h, iterations, cap) {
            Ok(result) => write_handle(out, result.into_hypergraph()),
            Err(err) => fail(HsdStatus::CapExceeded, err.to_string()),
        }
    })
}

/// Computes embedded homology and returns the report as JSON.
///
/// `ring` selects the coefficients: `"z"`, `"q"`, or `"gf<p>"` with `p`
/// prime, case-insensitive.
///
/// # Safety
///
/// `hypergraph` must be null or a live handle from this library, `ring` must
/// be null or a valid NUL-terminated string, and `out` must be null or valid
/// for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn hsd_homology_json(
    hypergraph: *const HsdHypergraph,
    ring: *const c_char,
    out: *mut *mut c_char,
) -> HsdStatus {
    guarded(|| {
        let h = match unsafe { read_handle(hypergraph, "hypergraph") } {
            Ok(h) => h,
            Err(status) => return status,
        };
        let spec = match unsafe { read_str(ring, "ring") } {
            Ok(spec) => spec,
            Err(status) => return status,
        };
        let ring = match parse_ring(spec) {
            Ok(ring) => ring,
            Err(err) => return fail(HsdStatus::InvalidInput, err.to_string()),
        };
        let groups = embedded_homology(h, ring);
        write_string(out, homology_json(ring, &groups))
    })
}

/// Verifies that subdivision preserves embedded homology.
///
/// Writes the full check report as JSON and stores the overall outcome in
/// `all_pass`.  A failed check is a result, not an error: the status stays
/// `Ok` whenever the report was produced.
///
/// # Safety
///
/// `hypergraph` must be null or a live handle from this library, `ring` must
/// be null or a valid NUL-terminated string, and `all_pass` and `out` must
/// each be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn hsd_verify_json(
    hypergraph: *const HsdHypergraph,
    ring: *const c_char,
    all_pass: *mut bool,
    out: *mut *mut c_char,
) -> HsdStatus {
    guarded(|| {
        let h = match unsafe { read_handle(hypergraph, "hypergraph") } {
            Ok(h) => h,
            Err(status) => return status,
        };
        let spec = match unsafe { read_str(ring, "ring") } {
            Ok(spec) => spec,
            Err(status) => return status,
        };
        let ring = match parse_ring(spec) {
            Ok(ring) => ring,
            Err(err) => return fail(HsdStatus::InvalidInput, err.to_string()),
        };
        if all_pass.is_null() {
            return fail(HsdStatus::NullPointer, "all_pass is null".to_owned());
        }
        let report = verify_invariance(h, ring);
        unsafe { *all_pass = report.all_pass() };
        write_string(out, report.to_json())
    })
}

/// Returns the message recorded by the last failing call on this thread.
///
/// The caller owns the returned string and releases it with
/// [`hsd_string_free`].  Returns null when the last call succeeded.
#[no_mangle]
pub extern "C" fn hsd_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(text) => text.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Releases a hypergraph handle.  Null is ignored.
///
/// # Safety
///
/// `hypergraph` must be null or a handle returned by this library that has
/// not been freed before.
#[no_mangle]
pub unsafe extern "C" fn hsd_hypergraph_free(hypergraph: *mut HsdHypergraph) {
    if !hypergraph.is_null() {
        drop(unsafe { Box::from_raw(hypergraph) });
    }
}

/// Releases a string returned by this library.  Null is ignored.
///
/// # Safety
///
/// `text` must be null or a string returned by this library that has not
/// been freed before.
#[no_mangle]
pub unsafe extern "C" fn hsd_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}
