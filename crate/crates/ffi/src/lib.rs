//! C ABI over `minlor`.
//!
//! Every fallible call returns an [`MlStatus`]; on failure the message is kept
//! per thread and can be read with [`ml_last_error_message`]. Surfaces are
//! opaque heap handles released with [`ml_surface_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use minlor::equivalence::{same_solution, Quadruple};
use minlor::motions::{motion_from_spinors, Mat2};
use minlor::nullcurve::{CanonicalPair, Generator, Interval, Sign, WeierstrassTriple};
use minlor::pdeverify::verify_surface;
use minlor::surface::{MinimalSurface, Region, SurfaceType};
use minlor::{examples, Error};

/// Status codes. `Ok` is zero and every other value is a failure.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    Domain = 4,
    Degenerate = 5,
    Parameter = 6,
    NotSl2 = 7,
    Pole = 8,
    Singular = 9,
    NotGeneralType = 10,
    Audit = 11,
    Grid = 12,
    Numerical = 13,
    Panic = 14,
}

/// Causal type of a surface.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlSurfaceType {
    NotGeneral = 0,
    First = 1,
    Second = 2,
    Third = 3,
}

/// Opaque surface handle.
pub struct MlSurface(MinimalSurface);

/// Natural-equation residuals of [`ml_surface_verify`].
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MlResidualReport {
    pub r1_max: f64,
    pub r1_rms: f64,
    pub r2_max: f64,
    pub r2_rms: f64,
    /// Sign of E on the grid, or 0 if mixed.
    pub delta: f64,
    pub interior: usize,
    pub masked: usize,
    pub pass: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MlStatus {
    match e {
        Error::Syntax { .. } | Error::UnknownFunction { .. } | Error::Input(_) => MlStatus::Syntax,
        Error::Domain { .. } => MlStatus::Domain,
        Error::Degenerate { .. } => MlStatus::Degenerate,
        Error::Parameter(_) | Error::DegenerateDet | Error::InvalidTable(_) | Error::NotCanonical => {
            MlStatus::Parameter
        }
        Error::NotSl2 { .. } => MlStatus::NotSl2,
        Error::Pole { .. } => MlStatus::Pole,
        Error::Singular { .. } => MlStatus::Singular,
        Error::NotGeneralType(_) => MlStatus::NotGeneralType,
        Error::Audit(_) => MlStatus::Audit,
        Error::EmptyGrid | Error::Stencil { .. } | Error::Incomparable { .. } => MlStatus::Grid,
        _ => MlStatus::Numerical,
    }
}

struct Fail(MlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), format!("{}: {e}", e.kind()))
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MlStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            MlStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(MlStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(MlStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(null)
}

unsafe fn surface<'a>(p: *const MlSurface) -> Result<&'a MinimalSurface, Fail> {
    p.as_ref().map(|s| &s.0).ok_or_else(null)
}

fn sign(x: i32) -> Result<Sign, Fail> {
    match x {
        1 => Ok(Sign::Plus),
        -1 => Ok(Sign::Minus),
        _ => Err(Fail(MlStatus::Parameter, format!("sign must be 1 or -1, got {x}"))),
    }
}

unsafe fn store(outp: *mut *mut MlSurface, s: MinimalSurface) -> Result<(), Fail> {
    *out(outp)? = Box::into_raw(Box::new(MlSurface(s)));
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ml_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread. Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ml_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds one of the example surfaces `"m1"`, `"m2"` or `"m3"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out_surface` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ml_surface_example(name: *const c_char, out_surface: *mut *mut MlSurface) -> MlStatus {
    guard(|| {
        let s = match text(name)? {
            "m1" => examples::m1()?,
            "m2" => examples::m2()?,
            "m3" => examples::m3()?,
            other => return Err(Fail(MlStatus::Parameter, format!("unknown example `{other}`"))),
        };
        store(out_surface, s)
    })
}

/// Surface from two natural-parameter generators `(g, h, ω)` on `[a, b]` domains.
///
/// # Safety
/// String arguments must be NUL-terminated; `out_surface` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ml_surface_from_pairs(
    g1: *const c_char,
    h1: *const c_char,
    omega1: i32,
    g2: *const c_char,
    h2: *const c_char,
    omega2: i32,
    dom1_min: f64,
    dom1_max: f64,
    dom2_min: f64,
    dom2_max: f64,
    out_surface: *mut *mut MlSurface,
) -> MlStatus {
    guard(|| {
        let p1 = CanonicalPair::parse(text(g1)?, text(h1)?, sign(omega1)?, Interval::new(dom1_min, dom1_max)?)?;
        let p2 = CanonicalPair::parse(text(g2)?, text(h2)?, sign(omega2)?, Interval::new(dom2_min, dom2_max)?)?;
        store(out_surface, MinimalSurface::new(p1, p2)?)
    })
}

/// Surface from two Weierstrass triples `(f, g, h)`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out_surface` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ml_surface_from_triples(
    f1: *const c_char,
    g1: *const c_char,
    h1: *const c_char,
    f2: *const c_char,
    g2: *const c_char,
    h2: *const c_char,
    dom1_min: f64,
    dom1_max: f64,
    dom2_min: f64,
    dom2_max: f64,
    out_surface: *mut *mut MlSurface,
) -> MlStatus {
    guard(|| {
        let t1 = WeierstrassTriple::parse(text(f1)?, text(g1)?, text(h1)?, Interval::new(dom1_min, dom1_max)?)?;
        let t2 = WeierstrassTriple::parse(text(f2)?, text(g2)?, text(h2)?, Interval::new(dom2_min, dom2_max)?)?;
        store(out_surface, MinimalSurface::new(Generator::Triple(t1), Generator::Triple(t2))?)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ml_surface_free(s: *mut MlSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` and `out_type` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ml_surface_type(s: *const MlSurface, out_type: *mut MlSurfaceType) -> MlStatus {
    guard(|| {
        *out(out_type)? = match surface(s)?.classify() {
            SurfaceType::First => MlSurfaceType::First,
            SurfaceType::Second => MlSurfaceType::Second,
            SurfaceType::Third => MlSurfaceType::Third,
            SurfaceType::NotGeneral => MlSurfaceType::NotGeneral,
        };
        Ok(())
    })
}

/// Gauss curvature and normal curvature at isothermal `(u, v)`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ml_surface_curvature(
    s: *const MlSurface,
    u: f64,
    v: f64,
    out_k: *mut f64,
    out_kappa: *mut f64,
) -> MlStatus {
    guard(|| {
        let c = surface(s)?.curvature(u, v)?;
        *out(out_k)? = c.k;
        *out(out_kappa)? = c.kappa;
        Ok(())
    })
}

/// Position `x(u, v)`; `out_x` receives four values.
///
/// # Safety
/// `out_x` must point to at least four doubles.
#[no_mangle]
pub unsafe extern "C" fn ml_surface_position(s: *const MlSurface, u: f64, v: f64, out_x: *mut f64) -> MlStatus {
    guard(|| {
        let x = surface(s)?.position(u, v)?;
        if out_x.is_null() {
            return Err(null());
        }
        ptr::copy_nonoverlapping(x.0.as_ptr(), out_x, 4);
        Ok(())
    })
}

/// Conformal factor `E(u, v)`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ml_surface_induced_e(s: *const MlSurface, u: f64, v: f64, out_e: *mut f64) -> MlStatus {
    guard(|| {
        *out(out_e)? = surface(s)?.induced_e(u, v)?;
        Ok(())
    })
}

/// Natural-equation residuals on `[u0, u1] × [v0, v1]` with step `h`.
/// A residual above `tol` is not an error: it is reported through `pass`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ml_surface_verify(
    s: *const MlSurface,
    u0: f64,
    u1: f64,
    v0: f64,
    v1: f64,
    h: f64,
    tol: f64,
    out_report: *mut MlResidualReport,
) -> MlStatus {
    guard(|| {
        let v = verify_surface(surface(s)?, &Region::new(u0, u1, v0, v1)?, h, tol)?;
        let r = v.report;
        *out(out_report)? = MlResidualReport {
            r1_max: r.r1_max,
            r1_rms: r.r1_rms,
            r2_max: r.r2_max,
            r2_rms: r.r2_rms,
            delta: r.delta,
            interior: r.interior,
            masked: r.masked,
            pass: v.pass,
        };
        Ok(())
    })
}

/// Linear part of the motion induced by `B1, B2 ∈ SL(2)` (row-major `a, b, c, d`),
/// written row-major into `out_a` (16 values).
///
/// # Safety
/// `b1`, `b2` must point to four doubles and `out_a` to sixteen.
#[no_mangle]
pub unsafe extern "C" fn ml_motion_from_spinors(b1: *const f64, b2: *const f64, out_a: *mut f64) -> MlStatus {
    guard(|| {
        if b1.is_null() || b2.is_null() || out_a.is_null() {
            return Err(null());
        }
        let mat = |p: *const f64| {
            let v = std::slice::from_raw_parts(p, 4);
            Mat2::new(v[0], v[1], v[2], v[3])
        };
        let m = motion_from_spinors(&mat(b1), &mat(b2))?;
        let flat: Vec<f64> = m.a.iter().flatten().copied().collect();
        ptr::copy_nonoverlapping(flat.as_ptr(), out_a, 16);
        Ok(())
    })
}

/// Compares the curvature fields of two quadruples `(g1, h1, g2, h2)` on an `n × n` grid.
///
/// # Safety
/// `qa` and `qb` must each point to four NUL-terminated strings; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ml_same_solution(
    qa: *const *const c_char,
    qb: *const *const c_char,
    dom1_min: f64,
    dom1_max: f64,
    dom2_min: f64,
    dom2_max: f64,
    delta: i32,
    u0: f64,
    u1: f64,
    v0: f64,
    v1: f64,
    n: usize,
    tol: f64,
    out_same: *mut bool,
    out_max_rel_diff: *mut f64,
) -> MlStatus {
    guard(|| {
        let (d1, d2) = (Interval::new(dom1_min, dom1_max)?, Interval::new(dom2_min, dom2_max)?);
        let quad = |q: *const *const c_char| -> Result<Quadruple, Fail> {
            if q.is_null() {
                return Err(null());
            }
            let e = std::slice::from_raw_parts(q, 4);
            Ok(Quadruple::parse([text(e[0])?, text(e[1])?, text(e[2])?, text(e[3])?], d1, d2)?)
        };
        let r = Region::new(u0, u1, v0, v1)?;
        let c = same_solution(&quad(qa)?, &quad(qb)?, sign(delta)?, &r, n, n, tol)?;
        *out(out_same)? = c.same;
        *out(out_max_rel_diff)? = c.max_rel_diff;
        Ok(())
    })
}
