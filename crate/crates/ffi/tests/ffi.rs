use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use cubicfields_ffi::*;

fn last_error() -> String {
    let p = cf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn scalar_calls() {
    unsafe {
        let mut disc = 0;
        assert_eq!(cf_form_disc(1, 0, -3, -1, &mut disc), CfStatus::Ok);
        assert_eq!(disc, 81);
        assert!(cf_last_error().is_null());

        let (mut d, mut f) = (0, 0);
        assert_eq!(cf_resolvent_decompose(-972, &mut d, &mut f), CfStatus::Ok);
        assert_eq!((d, f), (-3, 18));
        assert_eq!(cf_resolvent_decompose(-972, ptr::null_mut(), &mut f), CfStatus::NullPointer);
        assert_eq!(cf_resolvent_decompose(7, &mut d, &mut f), CfStatus::Domain);
        assert!(!last_error().is_empty());

        assert_eq!(cf_radical(-972), 6);
        assert_eq!(cf_radical(0), 0);
        assert_eq!(CStr::from_ptr(cf_version()).to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn constants_through_the_abi() {
    unsafe {
        let (mut real, mut complex, mut err) = (0.0, 0.0, 0.0);
        assert_eq!(cf_radical_constant(true, 10_000, &mut real, &mut err), CfStatus::Ok);
        assert_eq!(cf_radical_constant(false, 10_000, &mut complex, &mut err), CfStatus::Ok);
        assert!((complex / real - 3.0).abs() < 1e-9);

        let mut v = 0.0;
        assert_eq!(cf_l1(2.0, CfInf::Both as u32, 10_000, &mut v, &mut err), CfStatus::Ok);
        assert!(v > 0.0 && err < 1e-6);
        assert_eq!(cf_l1(2.0, 7, 10_000, &mut v, &mut err), CfStatus::Domain);
        assert!(last_error().contains("selector"));
        assert_eq!(cf_l1(1.0, 0, 10_000, &mut v, &mut err), CfStatus::Domain);
    }
}

#[test]
fn census_handle_lifecycle() {
    unsafe {
        let mut c: *mut CfCensus = ptr::null_mut();
        assert_eq!(cf_census_enumerate(2_000, &mut c), CfStatus::Ok);
        assert!(!c.is_null());
        assert_eq!(cf_census_ceiling(c), 2_000);
        let n = cf_census_len(c);
        assert!(n > 0);

        let mut f = CfField::default();
        assert_eq!(cf_census_get(c, 0, &mut f), CfStatus::Ok);
        assert_eq!(f.disc, -23);
        assert_eq!(cf_census_get(c, n, &mut f), CfStatus::Domain);

        let mut r = CfCount::default();
        assert_eq!(cf_count_generalized(c, 1.0, 2.0, 1_000.0, CfInf::Real as u32, 10_000, &mut r), CfStatus::Ok);
        assert_eq!(r.count, 27);
        assert!(r.predicted > 0.0);
        assert_eq!(cf_count_generalized(c, 1.0, 2.0, 1e6, 0, 10_000, &mut r), CfStatus::Capacity);

        let mut buf = [0u64; 11];
        assert_eq!(cf_phi_coefficients(c, -3, 10, buf.as_mut_ptr(), buf.len()), CfStatus::Ok);
        assert_eq!(buf[6] + buf[9], 2, "{buf:?}");
        assert_eq!(cf_phi_coefficients(c, -3, 10, buf.as_mut_ptr(), 5), CfStatus::BufferTooSmall);

        cf_census_free(c);
        cf_census_free(ptr::null_mut());
        assert_eq!(cf_census_len(ptr::null()), 0);
        assert_eq!(cf_census_get(ptr::null(), 0, &mut f), CfStatus::NullPointer);
    }
}

#[test]
fn census_from_cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    cubicfields::datastore::build_cache(dir.path(), 5_000, 1_000).unwrap();
    let path = CString::new(dir.path().to_str().unwrap()).unwrap();
    unsafe {
        let mut c: *mut CfCensus = ptr::null_mut();
        assert_eq!(cf_census_load(path.as_ptr(), &mut c), CfStatus::Ok);
        assert_eq!(cf_census_ceiling(c), 5_000);
        cf_census_free(c);

        let missing = CString::new(dir.path().join("nope").to_str().unwrap()).unwrap();
        assert_eq!(cf_census_load(missing.as_ptr(), &mut c), CfStatus::Load);
        assert_eq!(cf_census_load(ptr::null(), &mut c), CfStatus::NullPointer);
    }
}

/// The generated header compiles as C and as C++ against a small caller.
#[test]
fn header_compiles() {
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let header = std::fs::read_to_string(format!("{include}/cubicfields.h")).unwrap();
    for sym in ["cf_census_enumerate", "cf_last_error", "CF_STATUS_CAPACITY", "typedef struct CfCensus CfCensus"] {
        assert!(header.contains(sym), "{sym} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"cubicfields.h\"\n\
         int run(void) {\n\
           CfCensus *c = NULL; CfCount r;\n\
           if (cf_census_enumerate(1000, &c) != CF_STATUS_OK) return 1;\n\
           CfStatus s = cf_count_generalized(c, 1.0, 2.0, 500.0, CF_INF_BOTH, 1000, &r);\n\
           cf_census_free(c);\n\
           return s == CF_STATUS_OK ? 0 : (int)s;\n\
         }\n",
    )
    .unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    for lang in ["c", "c++"] {
        match Command::new(&cc).args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I", include]).arg(&src).output() {
            Ok(o) => assert!(o.status.success(), "{lang}: {}", String::from_utf8_lossy(&o.stderr)),
            Err(e) => eprintln!("skipping {lang} compile: {e}"),
        }
    }
}
