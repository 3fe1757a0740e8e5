//! Drives the C entry points the way a foreign caller would: JSON in,
//! status codes and caller-owned strings out.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use hypersd_ffi::{
    hsd_closure, hsd_homology_json, hsd_hypergraph_free, hsd_hypergraph_from_json,
    hsd_hypergraph_to_json, hsd_last_error_message, hsd_string_free, hsd_subdivide,
    hsd_verify_json, HsdHypergraph, HsdStatus,
};

const EXAMPLE: &str = r#"{"vertices":["0","1","2"],"edges":[[0],[1],[0,1],[1,2],[0,1,2]]}"#;

/// Builds a handle from JSON, asserting success.
fn handle(json: &str) -> *mut HsdHypergraph {
    let text = CString::new(json).unwrap();
    let mut out: *mut HsdHypergraph = ptr::null_mut();
    let status = unsafe { hsd_hypergraph_from_json(text.as_ptr(), &mut out) };
    assert_eq!(status, HsdStatus::Ok);
    assert!(!out.is_null());
    out
}

/// Copies a returned string into Rust and frees the C allocation.
fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let text = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_owned();
    unsafe { hsd_string_free(ptr) };
    text
}

fn last_error() -> Option<String> {
    let ptr = hsd_last_error_message();
    if ptr.is_null() {
        None
    } else {
        Some(take_string(ptr))
    }
}

#[test]
fn json_round_trips_through_a_handle() {
    let h = handle(EXAMPLE);
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { hsd_hypergraph_to_json(h, &mut out) };
    assert_eq!(status, HsdStatus::Ok);
    assert_eq!(take_string(out), EXAMPLE);
    assert_eq!(last_error(), None);
    unsafe { hsd_hypergraph_free(h) };
}

#[test]
fn closure_completes_the_example() {
    let h = handle(EXAMPLE);
    let mut closed: *mut HsdHypergraph = ptr::null_mut();
    assert_eq!(unsafe { hsd_closure(h, &mut closed) }, HsdStatus::Ok);

    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { hsd_hypergraph_to_json(closed, &mut out) },
        HsdStatus::Ok
    );
    let parsed: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(parsed["edges"].as_array().unwrap().len(), 7);

    unsafe { hsd_hypergraph_free(closed) };
    unsafe { hsd_hypergraph_free(h) };
}

#[test]
fn subdivision_counts_cells_and_honors_the_cap() {
    let h = handle(EXAMPLE);

    let mut sd: *mut HsdHypergraph = ptr::null_mut();
    assert_eq!(unsafe { hsd_subdivide(h, 1, 1000, &mut sd) }, HsdStatus::Ok);
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { hsd_hypergraph_to_json(sd, &mut out) },
        HsdStatus::Ok
    );
    let parsed: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(parsed["edges"].as_array().unwrap().len(), 14);
    assert_eq!(parsed["vertices"].as_array().unwrap().len(), 7);
    unsafe { hsd_hypergraph_free(sd) };

    let mut over: *mut HsdHypergraph = ptr::null_mut();
    let status = unsafe { hsd_subdivide(h, 2, 20, &mut over) };
    assert_eq!(status, HsdStatus::CapExceeded);
    assert!(over.is_null());
    let message = last_error().unwrap();
    assert!(message.contains("cap 20 exceeded"), "got: {message}");

    assert_eq!(
        unsafe { hsd_subdivide(h, 1, 0, &mut over) },
        HsdStatus::InvalidInput
    );

    unsafe { hsd_hypergraph_free(h) };
}

#[test]
fn homology_reports_ranks_by_ring() {
    let h = handle(EXAMPLE);
    for ring in ["z", "q", "gf2"] {
        let spec = CString::new(ring).unwrap();
        let mut out: *mut c_char = ptr::null_mut();
        let status = unsafe { hsd_homology_json(h, spec.as_ptr(), &mut out) };
        assert_eq!(status, HsdStatus::Ok);
        let parsed: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        let ranks: Vec<i64> = parsed["groups"]
            .as_array()
            .unwrap()
            .iter()
            .map(|g| g["rank"].as_i64().unwrap())
            .collect();
        assert_eq!(ranks, vec![1, 0, 0]);
    }

    let bad = CString::new("gf4").unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { hsd_homology_json(h, bad.as_ptr(), &mut out) },
        HsdStatus::InvalidInput
    );
    assert!(out.is_null());
    assert!(last_error().unwrap().contains("4"));

    unsafe { hsd_hypergraph_free(h) };
}

#[test]
fn verification_reports_all_checks_passing() {
    let h = handle(EXAMPLE);
    let ring = CString::new("z").unwrap();
    let mut all_pass = false;
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { hsd_verify_json(h, ring.as_ptr(), &mut all_pass, &mut out) };
    assert_eq!(status, HsdStatus::Ok);
    assert!(all_pass);
    let parsed: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    let checks = parsed["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 8);
    assert!(checks.iter().all(|c| c["pass"].as_bool().unwrap()));
    unsafe { hsd_hypergraph_free(h) };
}

#[test]
fn pointer_and_encoding_errors_are_reported() {
    let mut out: *mut HsdHypergraph = ptr::null_mut();
    assert_eq!(
        unsafe { hsd_hypergraph_from_json(ptr::null(), &mut out) },
        HsdStatus::NullPointer
    );
    assert_eq!(last_error().unwrap(), "json is null");

    let invalid = CString::new([0xf0, 0x28, 0x8c, 0x28]).unwrap();
    assert_eq!(
        unsafe { hsd_hypergraph_from_json(invalid.as_ptr(), &mut out) },
        HsdStatus::InvalidUtf8
    );

    let garbage = CString::new("not json").unwrap();
    assert_eq!(
        unsafe { hsd_hypergraph_from_json(garbage.as_ptr(), &mut out) },
        HsdStatus::InvalidInput
    );
    assert!(out.is_null());
    assert!(last_error().is_some());

    let h = handle(EXAMPLE);
    assert_eq!(
        unsafe { hsd_hypergraph_to_json(h, ptr::null_mut()) },
        HsdStatus::NullPointer
    );
    unsafe { hsd_hypergraph_free(h) };

    unsafe { hsd_hypergraph_free(ptr::null_mut()) };
    unsafe { hsd_string_free(ptr::null_mut()) };
}

#[test]
fn the_generated_header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/hypersd.h"
    ))
    .expect("the build script writes the header");
    for name in [
        "HSD_STATUS_OK",
        "HSD_STATUS_CAP_EXCEEDED",
        "hsd_hypergraph_from_json",
        "hsd_hypergraph_to_json",
        "hsd_closure",
        "hsd_subdivide",
        "hsd_homology_json",
        "hsd_verify_json",
        "hsd_last_error_message",
        "hsd_hypergraph_free",
        "hsd_string_free",
    ] {
        assert!(header.contains(name), "header is missing {name}");
    }
}
