use std::ffi::{CStr, CString};
use std::ptr;

use minlor_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ml_last_error_message()) }.to_string_lossy().into_owned()
}

fn example(name: &str) -> *mut MlSurface {
    let mut s = ptr::null_mut();
    let st = unsafe { ml_surface_example(c(name).as_ptr(), &mut s) };
    assert_eq!(st, MlStatus::Ok, "{}", last_error());
    assert!(!s.is_null());
    s
}

#[test]
fn version_is_cargo_version() {
    let v = unsafe { CStr::from_ptr(ml_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn m1_curvature_and_type() {
    let s = example("m1");
    let (mut k, mut kappa) = (0.0, 0.0);
    unsafe {
        assert_eq!(ml_surface_curvature(s, 0.5, 0.5, &mut k, &mut kappa), MlStatus::Ok);
        assert!((k - 20.0).abs() < 1e-12 && (kappa + 12.0).abs() < 1e-12);
        let mut ty = MlSurfaceType::NotGeneral;
        assert_eq!(ml_surface_type(s, &mut ty), MlStatus::Ok);
        assert_eq!(ty, MlSurfaceType::First);
        let mut e = 0.0;
        assert_eq!(ml_surface_induced_e(s, 0.5, 0.5, &mut e), MlStatus::Ok);
        assert!(e < 0.0);
        let mut x = [f64::NAN; 4];
        assert_eq!(ml_surface_position(s, 0.5, 0.5, x.as_mut_ptr()), MlStatus::Ok);
        assert!(x.iter().all(|v| v.is_finite()));
        ml_surface_free(s);
    }
}

#[test]
fn m3_is_third_type() {
    let s = example("m3");
    let mut ty = MlSurfaceType::NotGeneral;
    unsafe {
        assert_eq!(ml_surface_type(s, &mut ty), MlStatus::Ok);
        ml_surface_free(s);
    }
    assert_eq!(ty, MlSurfaceType::Third);
}

#[test]
fn pairs_and_triples_agree() {
    let mut a = ptr::null_mut();
    let mut b = ptr::null_mut();
    unsafe {
        let st = ml_surface_from_pairs(
            c("2*t").as_ptr(), c("t").as_ptr(), 1, c("t").as_ptr(), c("2*t").as_ptr(), -1, -10.0, 10.0, -10.0, 10.0, &mut a,
        );
        assert_eq!(st, MlStatus::Ok, "{}", last_error());
        // f = ω / (2 sqrt|g′h′|) with g′h′ = 2
        let f1 = format!("{:?}", 0.5 / 2f64.sqrt());
        let f2 = format!("{:?}", -0.5 / 2f64.sqrt());
        let st = ml_surface_from_triples(
            c(&f1).as_ptr(), c("2*t").as_ptr(), c("t").as_ptr(), c(&f2).as_ptr(), c("t").as_ptr(), c("2*t").as_ptr(),
            -10.0, 10.0, -10.0, 10.0, &mut b,
        );
        assert_eq!(st, MlStatus::Ok, "{}", last_error());
        for (u, v) in [(0.5, 0.5), (0.4, 0.6), (0.62, 0.41)] {
            let (mut k1, mut q1, mut k2, mut q2) = (0.0, 0.0, 0.0, 0.0);
            assert_eq!(ml_surface_curvature(a, u, v, &mut k1, &mut q1), MlStatus::Ok);
            assert_eq!(ml_surface_curvature(b, u, v, &mut k2, &mut q2), MlStatus::Ok);
            assert!((k1 - k2).abs() <= 1e-10 * k1.abs() && (q1 - q2).abs() <= 1e-10 * k1.abs());
        }
        ml_surface_free(a);
        ml_surface_free(b);
    }
}

#[test]
fn errors_set_code_and_message() {
    let mut s = ptr::null_mut();
    unsafe {
        let st = ml_surface_from_pairs(
            c("2*t+").as_ptr(), c("t").as_ptr(), 1, c("t").as_ptr(), c("2*t").as_ptr(), 1, -1.0, 1.0, -1.0, 1.0, &mut s,
        );
        assert_eq!(st, MlStatus::Syntax);
        assert!(s.is_null());
        assert!(last_error().starts_with("SyntaxError"), "{}", last_error());
        assert_eq!(ml_surface_example(c("m9").as_ptr(), &mut s), MlStatus::Parameter);
        assert_eq!(ml_surface_example(ptr::null(), &mut s), MlStatus::NullPointer);
        let (mut k, mut kappa) = (0.0, 0.0);
        assert_eq!(ml_surface_curvature(ptr::null(), 0.5, 0.5, &mut k, &mut kappa), MlStatus::NullPointer);
        // u = 3v is singular on M1
        let m1 = example("m1");
        assert_eq!(ml_surface_curvature(m1, 0.6, 0.2, &mut k, &mut kappa), MlStatus::Singular);
        ml_surface_free(m1);
        ml_surface_free(ptr::null_mut());
    }
}

#[test]
fn verify_report() {
    let s = example("m1");
    let mut r = MlResidualReport::default();
    unsafe {
        assert_eq!(ml_surface_verify(s, 0.35, 0.65, 0.35, 0.65, 5e-3, 10.0, &mut r), MlStatus::Ok, "{}", last_error());
        ml_surface_free(s);
    }
    assert!(r.pass);
    assert_eq!(r.delta, -1.0);
    assert_eq!(r.interior, 59 * 59);
    assert!(r.r1_max > 0.0 && r.r1_max < 10.0);
}

#[test]
fn spinor_motion() {
    let mut a = [0.0; 16];
    unsafe {
        let id = [1.0, 0.0, 0.0, 1.0];
        assert_eq!(ml_motion_from_spinors(id.as_ptr(), id.as_ptr(), a.as_mut_ptr()), MlStatus::Ok);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(a[4 * i + j], if i == j { 1.0 } else { 0.0 });
            }
        }
        let bad = [2.0, 0.0, 0.0, 1.0];
        assert_eq!(ml_motion_from_spinors(bad.as_ptr(), id.as_ptr(), a.as_mut_ptr()), MlStatus::NotSl2);
    }
}

#[test]
fn same_solution_through_c_strings() {
    let owned: Vec<CString> = ["2*t", "t", "t", "2*t", "(2*t+1)/2", "t+3", "(t+1)/2", "2*t+3"].map(c).into();
    let ptrs: Vec<_> = owned.iter().map(|s| s.as_ptr()).collect();
    let (mut same, mut diff) = (false, f64::NAN);
    unsafe {
        let st = ml_same_solution(
            ptrs[..4].as_ptr(), ptrs[4..].as_ptr(), -10.0, 10.0, -10.0, 10.0, -1, 0.35, 0.65, 0.35, 0.65, 11, 1e-8,
            &mut same, &mut diff,
        );
        assert_eq!(st, MlStatus::Ok, "{}", last_error());
    }
    assert!(same, "max rel diff {diff}");
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/minlor.h")).unwrap();
    for name in [
        "ml_version", "ml_last_error_message", "ml_surface_example", "ml_surface_from_pairs", "ml_surface_from_triples",
        "ml_surface_free", "ml_surface_curvature", "ml_surface_position", "ml_surface_induced_e", "ml_surface_type",
        "ml_surface_verify", "ml_motion_from_spinors", "ml_same_solution", "typedef struct MlSurface MlSurface",
        "ML_STATUS_OK = 0",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = std::process::Command::new("cc").arg("--version").output() else {
        return;
    };
    assert!(cc.status.success());
    let dir = std::env::temp_dir().join(format!("minlor-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"minlor.h\"\nint main(void) { MlSurface *s = 0; MlStatus st = ml_surface_example(\"m1\", &s); \
         ml_surface_free(s); return st == ML_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let out = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .output()
        .unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
