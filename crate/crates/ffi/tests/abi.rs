//! Exercises the C ABI through the exported symbols, the way a foreign
//! binding would: NUL-terminated JSON in, status codes and JSON strings out.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use k0silting_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn fixture(name: &str) -> CString {
    let path = format!(
        "{}/../core/fixtures/{}",
        env!("CARGO_MANIFEST_DIR"),
        name
    );
    cstr(&std::fs::read_to_string(path).unwrap())
}

unsafe fn take_string(ptr: *mut c_char) -> String {
    let s = CStr::from_ptr(ptr).to_str().unwrap().to_string();
    k0s_string_free(ptr);
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(k0s_last_error_message())
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn full_session_through_the_abi() {
    unsafe {
        let mut algebra: *mut K0sAlgebra = ptr::null_mut();
        let status = k0s_algebra_load_json(fixture("a3.algebra.json").as_ptr(), ptr::null(), &mut algebra);
        assert_eq!(status, K0sStatus::Ok, "{}", last_error());

        // Vertex-level hom dimensions under the fixed convention.
        let mut dim = 0usize;
        let v1 = cstr("1");
        let v2 = cstr("2");
        assert_eq!(
            k0s_algebra_hom_dimension(algebra, v2.as_ptr(), v1.as_ptr(), &mut dim),
            K0sStatus::Ok
        );
        assert_eq!(dim, 1); // Hom(P_2, P_1) = <alpha>
        assert_eq!(
            k0s_algebra_hom_dimension(algebra, v1.as_ptr(), v2.as_ptr(), &mut dim),
            K0sStatus::Ok
        );
        assert_eq!(dim, 0);

        let mut x: *mut K0sComplex = ptr::null_mut();
        let status =
            k0s_complex_load_json(algebra, fixture("x_example.complex.json").as_ptr(), &mut x);
        assert_eq!(status, K0sStatus::Ok, "{}", last_error());

        let mut s1: *mut K0sComplex = ptr::null_mut();
        k0s_complex_load_json(algebra, fixture("s1.complex.json").as_ptr(), &mut s1);

        // dim Hom(S1, Σ S1) = 0.
        assert_eq!(k0s_hom_dimension(s1, s1, 1, &mut dim), K0sStatus::Ok);
        assert_eq!(dim, 0);
        assert_eq!(k0s_hom_dimension(s1, s1, 0, &mut dim), K0sStatus::Ok);
        assert_eq!(dim, 1);

        // Round trip.
        let mut json_out: *mut c_char = ptr::null_mut();
        assert_eq!(k0s_complex_to_json(x, &mut json_out), K0sStatus::Ok);
        let text = take_string(json_out);
        let mut x2: *mut K0sComplex = ptr::null_mut();
        assert_eq!(
            k0s_complex_load_json(algebra, cstr(&text).as_ptr(), &mut x2),
            K0sStatus::Ok
        );

        let mut silting: *mut K0sSilting = ptr::null_mut();
        let status =
            k0s_silting_load_json(algebra, fixture("stalk_silting.json").as_ptr(), &mut silting);
        assert_eq!(status, K0sStatus::Ok, "{}", last_error());

        // Gamma of the two-term complex: P2 +1, P1 -1.
        let mut gamma_out: *mut c_char = ptr::null_mut();
        let status = k0s_gamma_json(silting, x, false, 1, &mut gamma_out);
        assert_eq!(status, K0sStatus::Ok, "{}", last_error());
        let gamma: serde_json::Value = serde_json::from_str(&take_string(gamma_out)).unwrap();
        assert_eq!(gamma["gamma"]["P2"], 1);
        assert_eq!(gamma["gamma"]["P1"], -1);

        // The class map through the certificate.
        let mut class_out: *mut c_char = ptr::null_mut();
        let status = k0s_gamma_json(silting, s1, true, 1, &mut class_out);
        assert_eq!(status, K0sStatus::Ok, "{}", last_error());
        let class: serde_json::Value = serde_json::from_str(&take_string(class_out)).unwrap();
        assert_eq!(class["class"]["P1"], 1);
        assert_eq!(class["class"]["P2"], -1);
        assert_eq!(class["class"]["P3"], 1);

        // A verification suite end to end.
        let mut verify_out: *mut c_char = ptr::null_mut();
        let which = cstr("jordan-holder");
        let status = k0s_verify_json(
            algebra,
            silting,
            which.as_ptr(),
            ptr::null(),
            7,
            10,
            0,
            &mut verify_out,
        );
        assert_eq!(status, K0sStatus::Ok, "{}", last_error());
        let report: serde_json::Value = serde_json::from_str(&take_string(verify_out)).unwrap();
        assert_eq!(report["gamma_mismatches"], 0);

        k0s_complex_free(x);
        k0s_complex_free(x2);
        k0s_complex_free(s1);
        k0s_silting_free(silting);
        k0s_algebra_free(algebra);
    }
}

#[test]
fn failing_verification_reports_status() {
    unsafe {
        let mut algebra: *mut K0sAlgebra = ptr::null_mut();
        k0s_algebra_load_json(fixture("a3.algebra.json").as_ptr(), ptr::null(), &mut algebra);
        let mut silting: *mut K0sSilting = ptr::null_mut();
        k0s_silting_load_json(algebra, fixture("rigid2.json").as_ptr(), &mut silting);

        // The 2-rigid collection is not presilting: suite runs, fails.
        let mut out: *mut c_char = ptr::null_mut();
        let which = cstr("presilting");
        let status = k0s_verify_json(
            algebra,
            silting,
            which.as_ptr(),
            ptr::null(),
            1,
            0,
            0,
            &mut out,
        );
        assert_eq!(status, K0sStatus::VerificationFailed);
        let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(report["presilting"], false);

        // theorem-a on a non-silting collection is a precondition error.
        let which = cstr("theorem-a");
        let status = k0s_verify_json(
            algebra,
            silting,
            which.as_ptr(),
            ptr::null(),
            1,
            0,
            0,
            &mut out,
        );
        assert_eq!(status, K0sStatus::Precondition);
        assert!(!last_error().is_empty());

        k0s_silting_free(silting);
        k0s_algebra_free(algebra);
    }
}

#[test]
fn error_paths_are_graceful() {
    unsafe {
        let mut algebra: *mut K0sAlgebra = ptr::null_mut();
        assert_eq!(
            k0s_algebra_load_json(cstr("{ not json").as_ptr(), ptr::null(), &mut algebra),
            K0sStatus::ParseError
        );
        assert_eq!(
            k0s_algebra_load_json(ptr::null(), ptr::null(), &mut algebra),
            K0sStatus::InvalidArgument
        );
        let bad_field = cstr("Fp:6");
        assert_eq!(
            k0s_algebra_load_json(
                fixture("a3.algebra.json").as_ptr(),
                bad_field.as_ptr(),
                &mut algebra
            ),
            K0sStatus::ParseError
        );
        assert!(!last_error().is_empty());
        // Frees tolerate null.
        k0s_algebra_free(ptr::null_mut());
        k0s_complex_free(ptr::null_mut());
        k0s_silting_free(ptr::null_mut());
        k0s_string_free(ptr::null_mut());
    }
}
