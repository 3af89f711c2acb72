use std::ffi::{CStr, CString};
use std::ptr;

use gmswitch_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(gm_last_error()) }.to_string_lossy().into_owned()
}

fn build(f: unsafe extern "C" fn(u32, usize, *mut *mut GmGraph) -> GmStatus, q: u32, e: usize) -> *mut GmGraph {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { f(q, e, &mut g) }, GmStatus::Ok, "{}", last_error());
    assert!(!g.is_null());
    g
}

#[test]
fn graphs_through_the_abi() {
    let gamma = build(gm_grassmann, 2, 2);
    let switched = build(gm_switched, 2, 2);
    let twisted = build(gm_twisted, 2, 2);
    unsafe {
        for g in [gamma, switched, twisted] {
            assert_eq!(gm_graph_vertex_count(g), 155);
        }
        let mut adj = false;
        assert_eq!(gm_graph_is_adjacent(gamma, 0, 0, &mut adj), GmStatus::Ok);
        assert!(!adj);
        let degree = (0..155)
            .filter(|&j| {
                let mut a = false;
                gm_graph_is_adjacent(gamma, 0, j, &mut a);
                a
            })
            .count();
        assert_eq!(degree, 42);
        assert_eq!(gm_graph_is_adjacent(gamma, 0, 155, &mut adj), GmStatus::Parameter);
        assert!(last_error().contains("out of range"));

        let mut same = false;
        assert_eq!(gm_cospectral(gamma, switched, 2000, &mut same), GmStatus::Ok);
        assert!(same);
        assert_eq!(gm_cospectral(gamma, twisted, 100, &mut same), GmStatus::Budget);

        gm_graph_free(gamma);
        gm_graph_free(switched);
        gm_graph_free(twisted);
    }
}

#[test]
fn graph6_roundtrip() {
    let gamma = build(gm_grassmann, 2, 2);
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(gm_graph_to_graph6(gamma, &mut s), GmStatus::Ok);
        let text = CStr::from_ptr(s).to_owned();
        assert!(text.to_bytes().ends_with(b"\n"));
        let mut back = ptr::null_mut();
        assert_eq!(gm_graph_from_graph6(s, &mut back), GmStatus::Ok);
        let mut s2 = ptr::null_mut();
        gm_graph_to_graph6(back, &mut s2);
        assert_eq!(CStr::from_ptr(s2), text.as_c_str());
        gm_string_free(s);
        gm_string_free(s2);
        gm_graph_free(back);
        gm_graph_free(gamma);

        let bad = CString::new("D Qc").unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(gm_graph_from_graph6(bad.as_ptr(), &mut g), GmStatus::Parse);
        assert!(g.is_null());
    }
}

#[test]
fn error_codes() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(gm_twisted(2, 1, &mut g), GmStatus::Domain);
        assert!(last_error().contains("e = 1"));
        assert_eq!(gm_grassmann(6, 2, &mut g), GmStatus::Parameter);
        assert!(last_error().contains('6'));
        assert_eq!(gm_grassmann(2, 2, ptr::null_mut()), GmStatus::NullPointer);
        assert_eq!(gm_graph_to_graph6(ptr::null(), &mut ptr::null_mut()), GmStatus::NullPointer);
        assert_eq!(gm_graph_from_graph6(ptr::null(), &mut g), GmStatus::NullPointer);
        assert_eq!(gm_graph_vertex_count(ptr::null()), 0);
        assert!(!gm_certificate_passed(ptr::null()));
        // freeing null is a no-op
        gm_graph_free(ptr::null_mut());
        gm_certificate_free(ptr::null_mut());
        gm_string_free(ptr::null_mut());
    }
    assert!(g.is_null());
}

#[test]
fn certificate_through_the_abi() {
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(gm_certify(2, 2, true, 2000, &mut c), GmStatus::Ok, "{}", last_error());
        assert!(gm_certificate_passed(c));
        let mut json = ptr::null_mut();
        assert_eq!(gm_certificate_to_json(c, &mut json), GmStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["cospectrality"]["method"], "intersection-array");
        assert_eq!(v["cospectrality"]["charpoly"]["status"], "skipped");
        gm_string_free(json);
        gm_certificate_free(c);
        assert_eq!(gm_certify(2, 1, false, 2000, &mut c), GmStatus::Domain);
    }
}

#[test]
fn header_declares_the_abi() {
    let header = include_str!("../include/gmswitch.h");
    for name in [
        "gm_last_error",
        "gm_grassmann",
        "gm_twisted",
        "gm_switched",
        "gm_graph_vertex_count",
        "gm_graph_is_adjacent",
        "gm_graph_to_graph6",
        "gm_graph_from_graph6",
        "gm_cospectral",
        "gm_certify",
        "gm_certificate_passed",
        "gm_certificate_to_json",
        "gm_graph_free",
        "gm_certificate_free",
        "gm_string_free",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct GmGraph GmGraph;"));
    assert!(header.contains("typedef struct GmCertificate GmCertificate;"));
    for (variant, value) in [("GM_STATUS_OK", 0), ("GM_STATUS_BUDGET", 3), ("GM_STATUS_PANIC", 9)] {
        assert!(header.contains(&format!("{variant} = {value}")), "{variant}");
    }
    assert!(header.starts_with("#ifndef GMSWITCH_H"));
}
