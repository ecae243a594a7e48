use std::ffi::{CStr, CString};
use std::ptr;

use cubeflow_ffi::*;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    cf_string_free(s);
    out
}

#[test]
fn torus_roundtrip_and_cohomology() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(cf_complex_torus([3usize, 3].as_ptr(), 2, &mut c), CfStatus::Ok);
        let mut n = 0;
        assert_eq!(cf_complex_count(c, 2, &mut n), CfStatus::Ok);
        assert_eq!(n, 9);
        let mut json = ptr::null_mut();
        assert_eq!(cf_complex_to_json(c, &mut json), CfStatus::Ok);
        let text = CString::new(take(json)).unwrap();
        let mut c2 = ptr::null_mut();
        assert_eq!(cf_complex_from_json(text.as_ptr(), &mut c2), CfStatus::Ok);
        let (mut b, mut t) = (0, 0);
        for (deg, want) in [(0, 1), (1, 2), (2, 1)] {
            assert_eq!(cf_cohomology(c2, deg, &mut b, &mut t), CfStatus::Ok);
            assert_eq!((b, t), (want, 0));
        }
        assert_eq!(cf_cohomology(c2, 3, &mut b, &mut t), CfStatus::OutOfRange);
        cf_complex_free(c);
        cf_complex_free(c2);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(cf_complex_torus([2usize, 3].as_ptr(), 2, &mut c), CfStatus::InvalidComplex);
        assert!(c.is_null());
        let msg = CStr::from_ptr(cf_last_error()).to_str().unwrap();
        assert!(msg.contains(">= 3"), "{msg}");
        let bad = CString::new("{not json").unwrap();
        assert_eq!(cf_complex_from_json(bad.as_ptr(), &mut c), CfStatus::InvalidComplex);
        assert_eq!(cf_complex_from_json(ptr::null(), &mut c), CfStatus::NullPointer);
        assert_eq!(cf_complex_torus([3usize].as_ptr(), 1, ptr::null_mut()), CfStatus::NullPointer);
        assert_eq!(cf_complex_torus([3usize].as_ptr(), 1, &mut c), CfStatus::Ok);
        assert!(cf_last_error().is_null());
        cf_complex_free(c);
        cf_complex_free(ptr::null_mut());
    }
}

#[test]
fn figure1_through_the_abi() {
    unsafe {
        let (mut c, mut w, mut v) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(cf_example_figure1(&mut c, &mut w, &mut v), CfStatus::Ok);
        let (mut iw, mut iv, mut prod) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(cf_intersect(c, w, &mut iw), CfStatus::Ok);
        assert_eq!(cf_intersect(c, v, &mut iv), CfStatus::Ok);
        assert_eq!(cf_cup(c, iw, iv, &mut prod), CfStatus::Ok);
        let mut deg = 0;
        assert_eq!(cf_cochain_degree(prod, &mut deg), CfStatus::Ok);
        assert_eq!(deg, 2);
        let mut big = ptr::null_mut();
        assert_eq!(cf_cup(c, prod, iw, &mut big), CfStatus::OutOfRange);

        // cI is unchanged by the flow
        let mut wt = ptr::null_mut();
        assert_eq!(cf_geo_flow(w, 4.0, &mut wt), CfStatus::Ok);
        let mut iwt = ptr::null_mut();
        assert_eq!(cf_intersect(c, wt, &mut iwt), CfStatus::Ok);
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        cf_cochain_to_json(iw, &mut a);
        cf_cochain_to_json(iwt, &mut b);
        assert_eq!(take(a), take(b));

        // geometric cochains survive a JSON round trip
        let mut gj = ptr::null_mut();
        assert_eq!(cf_geo_to_json(w, &mut gj), CfStatus::Ok);
        let gj = CString::new(take(gj)).unwrap();
        let mut w2 = ptr::null_mut();
        assert_eq!(cf_geo_from_json(c, gj.as_ptr(), &mut w2), CfStatus::Ok);

        let grid: Vec<f64> = (0..=10).map(f64::from).collect();
        let (mut t, mut report) = (f64::NAN, ptr::null_mut());
        assert_eq!(cf_verify_main(c, w2, v, grid.as_ptr(), grid.len(), &mut t, &mut report), CfStatus::Ok);
        assert!(t.is_finite() && t <= 10.0);
        assert!(take(report).starts_with("t,cube,product_value,cup_value,equal,"));
        assert_eq!(cf_verify_main(c, w2, v, grid.as_ptr(), 1, &mut t, ptr::null_mut()), CfStatus::NoThreshold);

        let mut val = 0;
        let mut nonzero = 0;
        for cube in 0..40 {
            assert_eq!(cf_cochain_get(prod, cube, &mut val), CfStatus::Ok);
            nonzero += (val != 0) as usize;
        }
        assert_eq!(nonzero, 1);

        for h in [iw, iv, prod, iwt] {
            cf_cochain_free(h);
        }
        for g in [w, v, wt, w2] {
            cf_geo_free(g);
        }
        cf_complex_free(c);
    }
}
