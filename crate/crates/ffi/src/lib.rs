//! C ABI over the cubeflow library.
//!
//! Every function returns a `CfStatus`; results come back through out
//! pointers. Handles are opaque and owned by the caller, who releases them
//! with the matching `cf_*_free`. Strings returned by the library are
//! released with `cf_string_free`. After a non-OK status,
//! `cf_last_error` describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cubeflow::cochain::{cohomology, cup, IntCochain};
use cubeflow::complex::build_torus_grid;
use cubeflow::error::{ComplexError, GeoError};
use cubeflow::geometry::{intersect_cochain, validate_transverse, GeoCochain};
use cubeflow::product::fixtures::{figure1, FIGURE1_DIMS};
use cubeflow::product::{threshold_sweep, ProductConfig};
use cubeflow::CubicalComplex;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidComplex = 4,
    NotTransverse = 5,
    Geometry = 6,
    NoThreshold = 7,
    OutOfRange = 8,
    Panic = 9,
}

pub struct CfComplex(CubicalComplex);
pub struct CfCochain(IntCochain);
pub struct CfGeoCochain(GeoCochain);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(CfStatus, String);

impl From<ComplexError> for Fail {
    fn from(e: ComplexError) -> Self {
        Fail(CfStatus::InvalidComplex, e.to_string())
    }
}

impl From<GeoError> for Fail {
    fn from(e: GeoError) -> Self {
        let code = match e {
            GeoError::Json(_) | GeoError::Schema(_) => CfStatus::Parse,
            GeoError::NotTransverse(_) => CfStatus::NotTransverse,
            GeoError::Complex(_) => CfStatus::InvalidComplex,
            _ => CfStatus::Geometry,
        };
        Fail(code, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CfStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            CfStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail(CfStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Fail(CfStatus::InvalidUtf8, e.to_string()))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(CfStatus::NullPointer, format!("null {what} handle")))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(CfStatus::NullPointer, "null out pointer".into()));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(CfStatus::NullPointer, "null out pointer".into()));
    }
    *out = CString::new(s).map_err(|e| Fail(CfStatus::Parse, e.to_string()))?.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Owned by the
/// library; valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn cf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn cf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `dims` must point to `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_complex_torus(dims: *const usize, n: usize, out: *mut *mut CfComplex) -> CfStatus {
    guard(|| {
        if dims.is_null() {
            return Err(Fail(CfStatus::NullPointer, "null dims".into()));
        }
        let dims = std::slice::from_raw_parts(dims, n);
        put(out, CfComplex(build_torus_grid(dims)?))
    })
}

/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_complex_from_json(json: *const c_char, out: *mut *mut CfComplex) -> CfStatus {
    guard(|| put(out, CfComplex(CubicalComplex::from_json(read_str(json)?)?)))
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_complex_to_json(c: *const CfComplex, out: *mut *mut c_char) -> CfStatus {
    guard(|| put_string(out, get(c, "complex")?.0.to_json()))
}

/// Number of cubes of dimension `dim`.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_complex_count(c: *const CfComplex, dim: usize, out: *mut usize) -> CfStatus {
    guard(|| {
        let c = &get(c, "complex")?.0;
        if dim > c.top_dim() || out.is_null() {
            return Err(Fail(CfStatus::OutOfRange, format!("dimension {dim} above {}", c.top_dim())));
        }
        *out = c.cubes_of_dim(dim).len();
        Ok(())
    })
}

/// Betti number and number of torsion coefficients of H^degree.
///
/// # Safety
/// `c` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_cohomology(c: *const CfComplex, degree: usize, betti: *mut usize, torsion: *mut usize) -> CfStatus {
    guard(|| {
        let c = &get(c, "complex")?.0;
        let h = cohomology(c);
        let g = h.get(degree).ok_or_else(|| Fail(CfStatus::OutOfRange, format!("no cohomology in degree {degree}")))?;
        if betti.is_null() || torsion.is_null() {
            return Err(Fail(CfStatus::NullPointer, "null out pointer".into()));
        }
        *betti = g.betti;
        *torsion = g.torsion.len();
        Ok(())
    })
}

/// # Safety
/// `c` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn cf_complex_free(c: *mut CfComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Parses a geometric cochain and checks it is transverse to the complex.
///
/// # Safety
/// `c` must be a live handle, `json` a nul-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_geo_from_json(c: *const CfComplex, json: *const c_char, out: *mut *mut CfGeoCochain) -> CfStatus {
    guard(|| {
        let c = &get(c, "complex")?.0;
        let g = GeoCochain::from_json(c, read_str(json)?)?;
        let rep = validate_transverse(c, &g);
        if !rep.is_ok() {
            return Err(Fail(CfStatus::NotTransverse, rep.to_string()));
        }
        put(out, CfGeoCochain(g))
    })
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_geo_to_json(g: *const CfGeoCochain, out: *mut *mut c_char) -> CfStatus {
    guard(|| put_string(out, get(g, "geometric cochain")?.0.to_json()))
}

/// A new handle viewing `g` through the additional time-`t` flow.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_geo_flow(g: *const CfGeoCochain, t: f64, out: *mut *mut CfGeoCochain) -> CfStatus {
    guard(|| put(out, CfGeoCochain(get(g, "geometric cochain")?.0.flowed(t))))
}

/// # Safety
/// `g` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn cf_geo_free(g: *mut CfGeoCochain) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// The intersection cochain cI(W).
///
/// # Safety
/// Handles must be live and `g` built on `c`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_intersect(c: *const CfComplex, g: *const CfGeoCochain, out: *mut *mut CfCochain) -> CfStatus {
    guard(|| {
        let ci = intersect_cochain(&get(c, "complex")?.0, &get(g, "geometric cochain")?.0)?;
        put(out, CfCochain(ci))
    })
}

/// # Safety
/// `c` must be a live handle, `json` a nul-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_cochain_from_json(c: *const CfComplex, json: *const c_char, out: *mut *mut CfCochain) -> CfStatus {
    guard(|| {
        let a = IntCochain::from_json(&get(c, "complex")?.0, read_str(json)?).map_err(|e| Fail(CfStatus::Parse, e.to_string()))?;
        put(out, CfCochain(a))
    })
}

/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_cochain_to_json(a: *const CfCochain, out: *mut *mut c_char) -> CfStatus {
    guard(|| put_string(out, get(a, "cochain")?.0.to_json()))
}

/// # Safety
/// `a` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_cochain_degree(a: *const CfCochain, out: *mut usize) -> CfStatus {
    guard(|| {
        let a = get(a, "cochain")?;
        if out.is_null() {
            return Err(Fail(CfStatus::NullPointer, "null out pointer".into()));
        }
        *out = a.0.degree();
        Ok(())
    })
}

/// Value of the cochain on `cube` (0 off its support).
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_cochain_get(a: *const CfCochain, cube: usize, out: *mut i64) -> CfStatus {
    guard(|| {
        let a = get(a, "cochain")?;
        if out.is_null() {
            return Err(Fail(CfStatus::NullPointer, "null out pointer".into()));
        }
        *out = a.0.get(cube);
        Ok(())
    })
}

/// # Safety
/// `a` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn cf_cochain_free(a: *mut CfCochain) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// Handles must be live and built on `c`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_cup(c: *const CfComplex, a: *const CfCochain, b: *const CfCochain, out: *mut *mut CfCochain) -> CfStatus {
    guard(|| {
        let c = &get(c, "complex")?.0;
        let (a, b) = (&get(a, "cochain")?.0, &get(b, "cochain")?.0);
        if a.degree() + b.degree() > c.top_dim() {
            return Err(Fail(CfStatus::OutOfRange, "degrees add up past the dimension".into()));
        }
        put(out, CfCochain(cup(c, a, b)))
    })
}

/// Threshold sweep over the `n` ascending flow times in `grid`. Writes the
/// CSV report to `report` (may be NULL) and the threshold to `t_found`.
/// Returns `NoThreshold` if the grid holds no threshold.
///
/// # Safety
/// Handles must be live and built on `c`; `grid` must hold `n` values;
/// `t_found` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_verify_main(
    c: *const CfComplex,
    w: *const CfGeoCochain,
    v: *const CfGeoCochain,
    grid: *const f64,
    n: usize,
    t_found: *mut f64,
    report: *mut *mut c_char,
) -> CfStatus {
    guard(|| {
        let c = &get(c, "complex")?.0;
        let (w, v) = (&get(w, "geometric cochain")?.0, &get(v, "geometric cochain")?.0);
        if grid.is_null() || t_found.is_null() {
            return Err(Fail(CfStatus::NullPointer, "null grid or out pointer".into()));
        }
        let cfg = ProductConfig::with_grid(std::slice::from_raw_parts(grid, n).to_vec());
        let rep = threshold_sweep(c, w, v, &cfg)?;
        if !report.is_null() {
            put_string(report, rep.to_csv())?;
        }
        match rep.t_found {
            Some(t) => {
                *t_found = t;
                Ok(())
            }
            None => Err(Fail(CfStatus::NoThreshold, "no threshold on the grid".into())),
        }
    })
}

/// The anti-diagonal/horizontal example on the 3×3 torus.
///
/// # Safety
/// The out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_example_figure1(
    complex: *mut *mut CfComplex,
    w: *mut *mut CfGeoCochain,
    v: *mut *mut CfGeoCochain,
) -> CfStatus {
    guard(|| {
        if complex.is_null() || w.is_null() || v.is_null() {
            return Err(Fail(CfStatus::NullPointer, "null out pointer".into()));
        }
        let c = build_torus_grid(&FIGURE1_DIMS)?;
        let (gw, gv) = figure1(&c)?;
        put(complex, CfComplex(c))?;
        put(w, CfGeoCochain(gw))?;
        put(v, CfGeoCochain(gv))
    })
}
