use std::ffi::{CStr, CString};
use std::ptr;

use ribvol_ffi::*;

const G11: &str = r#"{"darts":8,"s0":[1,2,3,0,5,6,7,4],"s1":[4,5,6,7,0,1,2,3]}"#;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    ribvol_string_free(s);
    out
}

#[test]
fn polynomials_and_values() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ribvol_fpoly_string(1, 1, &mut s), RibvolStatus::Ok);
        assert_eq!(take(s), "1/24·L1^3");
        assert_eq!(ribvol_fpoly_json(0, 3, &mut s), RibvolStatus::Ok);
        assert!(take(s).starts_with(r#"{"vars":["L1","L2","L3"]"#));
        let (a, b) = (CString::new("3,1").unwrap(), CString::new("2,2").unwrap());
        assert_eq!(ribvol_zeval(0, a.as_ptr(), b.as_ptr(), &mut s), RibvolStatus::Ok);
        assert_eq!(take(s), "3/1");
    }
}

#[test]
fn errors() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ribvol_fpoly_json(0, 1, &mut s), RibvolStatus::InvalidInput);
        let msg = CStr::from_ptr(ribvol_last_error()).to_str().unwrap();
        assert!(msg.contains("unstable"), "{msg}");
        let (a, b) = (CString::new("1,1").unwrap(), CString::new("3,3").unwrap());
        assert_eq!(ribvol_zeval(0, a.as_ptr(), b.as_ptr(), &mut s), RibvolStatus::InvalidInput);
        assert_eq!(ribvol_zeval(0, ptr::null(), b.as_ptr(), &mut s), RibvolStatus::NullPointer);
        let mut g = ptr::null_mut();
        let bad = CString::new(r#"{"darts":2,"s0":[0,1],"s1":[0,1]}"#).unwrap();
        assert_eq!(ribvol_graph_from_json(bad.as_ptr(), &mut g), RibvolStatus::InvalidInput);
        assert!(g.is_null());
    }
}

#[test]
fn graph_handle() {
    unsafe {
        let json = CString::new(G11).unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(ribvol_graph_from_json(json.as_ptr(), &mut g), RibvolStatus::Ok);
        let (mut genus, mut np, mut nm) = (0u32, 0usize, 0usize);
        assert_eq!(ribvol_graph_type(g, &mut genus, &mut np, &mut nm), RibvolStatus::Ok);
        assert_eq!((genus, np, nm), (1, 1, 1));
        let mut aut = 0;
        assert_eq!(ribvol_graph_automorphisms(g, &mut aut), RibvolStatus::Ok);
        assert_eq!(aut, 4);
        let order = [0usize, 1];
        let mut s = ptr::null_mut();
        assert_eq!(ribvol_graph_decompose(g, order.as_ptr(), 2, &mut s), RibvolStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["components"].as_array().unwrap().len(), 2);
        ribvol_graph_free(g);
    }
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ribvol.h")).unwrap();
    for name in ["ribvol_zeval", "ribvol_graph_from_json", "RIBVOL_STATUS_INVALID_INPUT", "typedef struct RibvolGraph RibvolGraph"] {
        assert!(h.contains(name), "header lacks {name}");
    }
}
