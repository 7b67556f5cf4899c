use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use weaklabel_ffi::*;

fn take(s: *mut c_char) -> String {
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { wl_string_free(s) };
    text
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(wl_last_error_message()) }
        .to_str()
        .unwrap()
        .to_owned()
}

fn parse(text: &str) -> (WlStatus, *mut WlCollection) {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    (unsafe { wl_collection_parse(c.as_ptr(), &mut out) }, out)
}

#[test]
fn build_extract_round_trip() {
    let (status, c) = parse("123;02346;345");
    assert_eq!(status, WlStatus::Ok);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { wl_build(c, &mut g) }, WlStatus::Ok);
    assert_eq!(unsafe { wl_graph_vertex_count(g) }, 7);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { wl_graph_to_json(g, &mut json) }, WlStatus::Ok);
    assert_eq!(
        take(json),
        "{\"edges\":[[0,3],[1,2],[2,3],[3,4],[3,6],[4,5]],\"n\":7}\n"
    );

    let mut ok = false;
    assert_eq!(unsafe { wl_graph_verify(g, &mut ok) }, WlStatus::Ok);
    assert!(ok);

    let mut back = ptr::null_mut();
    assert_eq!(unsafe { wl_extract(g, &mut back) }, WlStatus::Ok);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { wl_collection_format(back, &mut text) }, WlStatus::Ok);
    assert_eq!(take(text), "1,2,3;0,2,3,4,6;3,4,5");
    unsafe {
        wl_collection_free(back);
        wl_collection_free(c);
        wl_graph_free(g);
    }
}

#[test]
fn multigraph_round_trip() {
    let (status, c) = parse("0^6,1,2,3,4");
    assert_eq!(status, WlStatus::Ok);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { wl_build(c, &mut g) }, WlStatus::Ok);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { wl_graph_to_json(g, &mut json) }, WlStatus::Ok);
    let json = CString::new(take(json)).unwrap();
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { wl_graph_from_json(json.as_ptr(), &mut again) }, WlStatus::Ok);
    let mut ok = false;
    assert_eq!(unsafe { wl_graph_verify(again, &mut ok) }, WlStatus::Ok);
    assert!(ok);
    unsafe {
        wl_graph_free(again);
        wl_graph_free(g);
        wl_collection_free(c);
    }
}

#[test]
fn error_codes_and_messages() {
    let (status, c) = parse("01x");
    assert_eq!(status, WlStatus::ParseError);
    assert!(c.is_null());
    assert!(last_error().contains('x'));

    let (_, c) = parse("0,1,2;-1,1,3");
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { wl_build(c, &mut g) }, WlStatus::AxiomsFailed);
    assert!(g.is_null());
    unsafe { wl_collection_free(c) };

    let bad = CString::new("{\"n\":4,\"edges\":[[0,1],[1,2],[1,3]]}").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { wl_graph_from_json(bad.as_ptr(), &mut g) }, WlStatus::Ok);
    let mut ok = true;
    assert_eq!(unsafe { wl_graph_verify(g, &mut ok) }, WlStatus::Ok);
    assert!(!ok);
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { wl_extract(g, &mut c) }, WlStatus::NotVerified);
    unsafe { wl_graph_free(g) };

    let junk = CString::new("{\"n\":").unwrap();
    assert_eq!(
        unsafe { wl_graph_from_json(junk.as_ptr(), &mut g) },
        WlStatus::ParseError
    );
    assert_eq!(
        unsafe { wl_graph_from_json(ptr::null(), &mut g) },
        WlStatus::NullPointer
    );
    assert_eq!(unsafe { wl_graph_verify(ptr::null(), &mut ok) }, WlStatus::NullPointer);
    assert_eq!(unsafe { wl_graph_vertex_count(ptr::null()) }, 0);
    unsafe {
        wl_graph_free(ptr::null_mut());
        wl_string_free(ptr::null_mut());
    }
}

#[test]
fn enumeration_through_the_abi() {
    let mut cat = ptr::null_mut();
    assert_eq!(unsafe { wl_enumerate(8, 2, &mut cat) }, WlStatus::Ok);
    assert_eq!(unsafe { wl_catalog_len(cat) }, 6);
    for i in 0..6 {
        let mut c = ptr::null_mut();
        assert_eq!(unsafe { wl_catalog_get(cat, i, &mut c) }, WlStatus::Ok);
        let mut g = ptr::null_mut();
        assert_eq!(unsafe { wl_build(c, &mut g) }, WlStatus::Ok);
        unsafe {
            wl_graph_free(g);
            wl_collection_free(c);
        }
    }
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { wl_catalog_get(cat, 6, &mut c) }, WlStatus::OutOfRange);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { wl_catalog_to_json(cat, &mut json) }, WlStatus::Ok);
    assert!(take(json).contains("\"count\": 6"));
    unsafe { wl_catalog_free(cat) };

    assert_eq!(unsafe { wl_enumerate(2, 0, &mut cat) }, WlStatus::InvalidArgument);
    assert_eq!(unsafe { wl_catalog_len(ptr::null()) }, 0);
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "weaklabel.h"

int main(void) {
    WlCollection *c = NULL;
    WlGraph *g = NULL;
    char *json = NULL;
    bool ok = false;
    if (wl_collection_parse("012;123", &c) != WL_STATUS_OK) return 1;
    if (wl_build(c, &g) != WL_STATUS_OK) return 2;
    if (wl_graph_verify(g, &ok) != WL_STATUS_OK || !ok) return 3;
    if (wl_graph_to_json(g, &json) != WL_STATUS_OK) return 4;
    printf("%s", json);
    wl_string_free(json);
    wl_graph_free(g);
    wl_collection_free(c);
    if (wl_collection_parse("013", &c) != WL_STATUS_OK) return 5;
    if (wl_build(c, &g) != WL_STATUS_AXIOMS_FAILED) return 6;
    if (strlen(wl_last_error_message()) == 0) return 7;
    wl_collection_free(c);
    return 0;
}
"#;

#[test]
fn header_compiles_and_links_from_c() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let include = crate_dir.join("include");
    let lib = crate_dir.join("../../target/debug/libweaklabel_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(
        String::from_utf8_lossy(&run.stdout),
        "{\"edges\":[[0,1],[1,2],[2,3]],\"n\":4}\n"
    );
}
