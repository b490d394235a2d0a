//! C ABI over `bryantflux`.
//!
//! Every function returns a [`BfStatus`]; results go through out-pointers.
//! On failure [`bf_last_error_message`] describes the error for the calling thread.
//! Frames are opaque heap handles released with [`bf_frame_free`], and strings
//! returned by this library are released with [`bf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bryantflux::balance::three_end_axes;
use bryantflux::bryant::{transform_frame, BryantFrame};
use bryantflux::ends::{
    canonical_catenoidal_frame, canonical_horospherical_frame, catenoid_cousin_frame,
    horosphere_frame, EndSpec,
};
use bryantflux::flux::{flux_for_geodesic, flux_numeric, flux_triple};
use bryantflux::geometry::{cross_ratio, ExtendedComplex, Geodesic, IsometrySL2};
use bryantflux::killing::{KillingField, KillingKind};
use bryantflux::series::{GeneralizedSeries, QuadratureGrid, DEFAULT_ORDER};
use bryantflux::{Complex64, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BfStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Unbalanceable = 3,
    LogTermRequired = 4,
    Consistency = 5,
    Degenerate = 6,
    Parse = 7,
    Io = 8,
    Panic = 99,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BfComplex {
    pub re: f64,
    pub im: f64,
}

/// A point of the Riemann sphere; `re`, `im` are ignored when `is_infinite` is set.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BfPoint {
    pub re: f64,
    pub im: f64,
    pub is_infinite: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BfKillingKind {
    Translation = 0,
    Rotation = 1,
}

/// Flux polynomial coefficients `φ₂X² + 2φ₁X + φ₀`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BfFluxTriple {
    pub phi0: BfComplex,
    pub phi1: BfComplex,
    pub phi2: BfComplex,
}

/// Opaque frame handle.
pub struct BfFrame {
    inner: BryantFrame,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BfStatus {
    match e {
        Error::Domain { .. } => BfStatus::Domain,
        Error::LogTermRequired { .. } => BfStatus::LogTermRequired,
        Error::Unbalanceable(_) => BfStatus::Unbalanceable,
        Error::Consistency { .. } => BfStatus::Consistency,
        Error::Degenerate(_) => BfStatus::Degenerate,
        Error::Parse(_) | Error::Json(_) => BfStatus::Parse,
        Error::Io(_) => BfStatus::Io,
    }
}

enum Failure {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs `body`, translating errors and panics into a status.
fn guard(body: impl FnOnce() -> Outcome) -> BfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => BfStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            BfStatus::NullPointer
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            BfStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write_out<T>(p: *mut T, value: T, what: &'static str) -> Outcome {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    p.write(value);
    Ok(())
}

fn boxed(frame: BryantFrame) -> *mut BfFrame {
    Box::into_raw(Box::new(BfFrame { inner: frame }))
}

impl From<BfComplex> for Complex64 {
    fn from(z: BfComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for BfComplex {
    fn from(z: Complex64) -> Self {
        BfComplex { re: z.re, im: z.im }
    }
}

impl From<BfPoint> for ExtendedComplex {
    fn from(p: BfPoint) -> Self {
        if p.is_infinite {
            ExtendedComplex::Infinity
        } else {
            ExtendedComplex::Finite(Complex64::new(p.re, p.im))
        }
    }
}

impl From<ExtendedComplex> for BfPoint {
    fn from(z: ExtendedComplex) -> Self {
        match z {
            ExtendedComplex::Finite(c) => BfPoint {
                re: c.re,
                im: c.im,
                is_infinite: false,
            },
            ExtendedComplex::Infinity => BfPoint {
                re: 0.0,
                im: 0.0,
                is_infinite: true,
            },
        }
    }
}

impl From<BfKillingKind> for KillingKind {
    fn from(k: BfKillingKind) -> Self {
        match k {
            BfKillingKind::Translation => KillingKind::Translation,
            BfKillingKind::Rotation => KillingKind::Rotation,
        }
    }
}

/// Message of the last failed call on this thread, or null after a success.
///
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn bf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` is null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn bf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `frame` is null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn bf_frame_free(frame: *mut BfFrame) {
    if !frame.is_null() {
        drop(Box::from_raw(frame));
    }
}

/// Catenoid cousin with growth exponent `mu`, axis `(0, ∞)`.
///
/// # Safety
/// `out` is a valid pointer to write a handle into.
#[no_mangle]
pub unsafe extern "C" fn bf_frame_catenoid_cousin(mu: f64, out: *mut *mut BfFrame) -> BfStatus {
    guard(|| {
        let f = catenoid_cousin_frame(mu)?;
        write_out(out, boxed(f), "out")
    })
}

/// Canonical catenoidal frame with `h = h(0)(1 + e₁z + e₂z² + …)` and axis `(axis_param, ∞)`.
///
/// # Safety
/// `perturbation` points to `len` values (or is null with `len == 0`); `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn bf_frame_canonical_catenoidal(
    mu: f64,
    perturbation: *const BfComplex,
    len: usize,
    axis_param: BfComplex,
    out: *mut *mut BfFrame,
) -> BfStatus {
    guard(|| {
        let e = complex_slice(perturbation, len)?;
        let h0 = bryantflux::ends::catenoidal_h0(mu);
        let mut coeffs = vec![Complex64::new(h0, 0.0)];
        coeffs.extend(e.iter().map(|&x| Complex64::from(x) * h0));
        let h = GeneralizedSeries::from_coeffs(0.0, &coeffs, DEFAULT_ORDER);
        let f = canonical_catenoidal_frame(mu, &h, axis_param.into())?;
        write_out(out, boxed(f), "out")
    })
}

/// Canonical horospherical frame of order `mu ≥ 2` with `h` given by its coefficients.
///
/// # Safety
/// `h` points to `len ≥ 1` values; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn bf_frame_canonical_horospherical(
    mu: u32,
    h: *const BfComplex,
    len: usize,
    out: *mut *mut BfFrame,
) -> BfStatus {
    guard(|| {
        let coeffs = complex_slice(h, len)?;
        if coeffs.is_empty() {
            return Err(Error::domain("h has at least one coefficient", "len = 0").into());
        }
        let coeffs: Vec<Complex64> = coeffs.iter().map(|&x| x.into()).collect();
        let h = GeneralizedSeries::from_coeffs(0.0, &coeffs, DEFAULT_ORDER);
        let f = canonical_horospherical_frame(mu, &h)?;
        write_out(out, boxed(f), "out")
    })
}

/// # Safety
/// `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn bf_frame_horosphere(out: *mut *mut BfFrame) -> BfStatus {
    guard(|| write_out(out, boxed(horosphere_frame(DEFAULT_ORDER)), "out"))
}

/// Builds a frame from either an end-spec or a serialized frame.
///
/// # Safety
/// `json` is a NUL-terminated UTF-8 string; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn bf_frame_from_json(
    json: *const c_char,
    out: *mut *mut BfFrame,
) -> BfStatus {
    guard(|| {
        let text = deref(json, "json").map(|_| CStr::from_ptr(json))?;
        let text = text
            .to_str()
            .map_err(|e| Error::Parse(format!("input is not UTF-8: {e}")))?;
        let v: serde_json::Value = serde_json::from_str(text).map_err(Error::from)?;
        let f = if v.get("type").is_some() {
            serde_json::from_value::<EndSpec>(v)
                .map_err(Error::from)?
                .build_frame()?
        } else {
            serde_json::from_value::<BryantFrame>(v).map_err(Error::from)?
        };
        write_out(out, boxed(f), "out")
    })
}

/// Serializes a frame; free the result with [`bf_string_free`].
///
/// # Safety
/// `frame` is a live handle; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn bf_frame_to_json(
    frame: *const BfFrame,
    out: *mut *mut c_char,
) -> BfStatus {
    guard(|| {
        let f = deref(frame, "frame")?;
        let text = serde_json::to_string(&f.inner).map_err(Error::from)?;
        let c = CString::new(text).map_err(|e| Error::Parse(e.to_string()))?;
        write_out(out, c.into_raw(), "out")
    })
}

/// Image of a frame under the isometry `(α, β; γ, δ)`, normalized to determinant 1.
///
/// # Safety
/// `frame` is a live handle; `m` points to four values `α, β, γ, δ`; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn bf_frame_transform(
    frame: *const BfFrame,
    m: *const BfComplex,
    out: *mut *mut BfFrame,
) -> BfStatus {
    guard(|| {
        let f = deref(frame, "frame")?;
        let m = complex_slice(m, 4)?;
        let p = IsometrySL2::new(m[0].into(), m[1].into(), m[2].into(), m[3].into())?;
        write_out(out, boxed(transform_frame(&p, &f.inner)?), "out")
    })
}

/// # Safety
/// `frame` is a live handle; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn bf_flux_triple(frame: *const BfFrame, out: *mut BfFluxTriple) -> BfStatus {
    guard(|| {
        let t = flux_triple(&deref(frame, "frame")?.inner)?;
        let t = BfFluxTriple {
            phi0: t.phi0.into(),
            phi1: t.phi1.into(),
            phi2: t.phi2.into(),
        };
        write_out(out, t, "out")
    })
}

/// Flux of the Killing field along the oriented geodesic `(from, to)`, by residues.
///
/// # Safety
/// `frame` is a live handle; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn bf_flux_for_geodesic(
    frame: *const BfFrame,
    from: BfPoint,
    to: BfPoint,
    kind: BfKillingKind,
    out: *mut f64,
) -> BfStatus {
    guard(|| {
        let t = flux_triple(&deref(frame, "frame")?.inner)?;
        let g = Geodesic::new(from.into(), to.into())?;
        write_out(out, flux_for_geodesic(&t, &g, kind.into()), "out")
    })
}

/// Flux by quadrature on the circle `|z| = rho` with `samples` points (a power of two).
///
/// # Safety
/// `frame` is a live handle; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn bf_flux_numeric(
    frame: *const BfFrame,
    from: BfPoint,
    to: BfPoint,
    kind: BfKillingKind,
    rho: f64,
    samples: usize,
    out: *mut f64,
) -> BfStatus {
    guard(|| {
        let f = deref(frame, "frame")?;
        let field = KillingField::new(kind.into(), Geodesic::new(from.into(), to.into())?);
        let grid = QuadratureGrid::new(rho, samples)?;
        write_out(out, flux_numeric(&f.inner, &field, &grid)?, "out")
    })
}

/// # Safety
/// `points` points to four values; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn bf_cross_ratio(points: *const BfPoint, out: *mut BfComplex) -> BfStatus {
    guard(|| {
        if points.is_null() {
            return Err(Failure::Null("points"));
        }
        let z: Vec<ExtendedComplex> = std::slice::from_raw_parts(points, 4)
            .iter()
            .map(|&p| p.into())
            .collect();
        let r = cross_ratio(z[0], z[1], z[2], z[3])?;
        write_out(out, r.into(), "out")
    })
}

/// Axis endpoints `𝒜ⱼ` of three balanced catenoidal ends with boundaries `-1, 0, 1`.
///
/// # Safety
/// `sigma` points to three values; `out` points to room for three points.
#[no_mangle]
pub unsafe extern "C" fn bf_three_end_axes(sigma: *const f64, out: *mut BfPoint) -> BfStatus {
    guard(|| {
        let s = deref(sigma, "sigma").map(|_| std::slice::from_raw_parts(sigma, 3))?;
        let axes = three_end_axes([s[0], s[1], s[2]])?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        for (j, a) in axes.into_iter().enumerate() {
            out.add(j).write(a.into());
        }
        Ok(())
    })
}

unsafe fn complex_slice<'a>(p: *const BfComplex, len: usize) -> Result<&'a [BfComplex], Failure> {
    match (p.is_null(), len) {
        (_, 0) => Ok(&[]),
        (true, _) => Err(Failure::Null("coefficients")),
        (false, n) => Ok(std::slice::from_raw_parts(p, n)),
    }
}
