use std::f64::consts::PI;
use std::ffi::{CStr, CString};
use std::ptr;

use bryantflux_ffi::*;

fn last_error() -> String {
    let p = bf_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn finite(re: f64, im: f64) -> BfPoint {
    BfPoint {
        re,
        im,
        is_infinite: false,
    }
}

const INF: BfPoint = BfPoint {
    re: 0.0,
    im: 0.0,
    is_infinite: true,
};

fn cousin(mu: f64) -> *mut BfFrame {
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { bf_frame_catenoid_cousin(mu, &mut f) },
        BfStatus::Ok
    );
    f
}

#[test]
fn cousin_flux_through_its_axis() {
    let f = cousin(0.5);
    let mut v = 0.0;
    let s = unsafe {
        bf_flux_for_geodesic(f, finite(0.0, 0.0), INF, BfKillingKind::Translation, &mut v)
    };
    assert_eq!(s, BfStatus::Ok);
    assert!((v - 0.75 * PI).abs() < 1e-12);
    assert!(bf_last_error_message().is_null());

    let mut n = 0.0;
    let s = unsafe {
        bf_flux_numeric(
            f,
            finite(0.0, 0.0),
            INF,
            BfKillingKind::Translation,
            0.1,
            1024,
            &mut n,
        )
    };
    assert_eq!(s, BfStatus::Ok);
    assert!((n - v).abs() < 1e-5);

    let mut t = BfFluxTriple::default();
    assert_eq!(unsafe { bf_flux_triple(f, &mut t) }, BfStatus::Ok);
    assert!((t.phi1.re + 0.75 * PI).abs() < 1e-12);
    unsafe { bf_frame_free(f) };
}

#[test]
fn json_round_trip_keeps_the_flux() {
    let f = cousin(1.5);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { bf_frame_to_json(f, &mut text) }, BfStatus::Ok);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { bf_frame_from_json(text, &mut g) }, BfStatus::Ok);
    let (mut a, mut b) = (BfFluxTriple::default(), BfFluxTriple::default());
    unsafe {
        bf_flux_triple(f, &mut a);
        bf_flux_triple(g, &mut b);
        bf_string_free(text);
        bf_frame_free(f);
        bf_frame_free(g);
    }
    assert_eq!(a, b);
}

#[test]
fn end_specs_build_through_json() {
    let spec = CString::new(r#"{"type": "catenoidal", "mu": 0.5, "axis": ["1", "inf"]}"#).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { bf_frame_from_json(spec.as_ptr(), &mut f) },
        BfStatus::Ok
    );
    let mut v = 0.0;
    unsafe { bf_flux_for_geodesic(f, finite(1.0, 0.0), INF, BfKillingKind::Translation, &mut v) };
    assert!((v - 0.75 * PI).abs() < 1e-10);
    unsafe { bf_frame_free(f) };
}

#[test]
fn transformed_frames_are_covariant() {
    let f = cousin(0.5);
    // ζ ↦ ζ + 1 moves the axis (0, ∞) to (1, ∞).
    let m = [
        BfComplex { re: 1.0, im: 0.0 },
        BfComplex { re: 0.0, im: 0.0 },
        BfComplex { re: 1.0, im: 0.0 },
        BfComplex { re: 1.0, im: 0.0 },
    ];
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { bf_frame_transform(f, m.as_ptr(), &mut g) },
        BfStatus::Ok
    );
    let (mut a, mut b) = (0.0, 0.0);
    unsafe {
        bf_flux_for_geodesic(
            f,
            finite(0.0, 0.0),
            finite(2.0, 1.0),
            BfKillingKind::Rotation,
            &mut a,
        );
        bf_flux_for_geodesic(
            g,
            finite(1.0, 0.0),
            finite(3.0, 1.0),
            BfKillingKind::Rotation,
            &mut b,
        );
        bf_frame_free(f);
        bf_frame_free(g);
    }
    assert!((a - b).abs() < 1e-10, "{a} vs {b}");
}

#[test]
fn canonical_constructors() {
    let mut f = ptr::null_mut();
    let e = [BfComplex::default(), BfComplex { re: 0.05, im: 0.0 }];
    let axis = BfComplex { re: 0.3, im: -0.2 };
    assert_eq!(
        unsafe { bf_frame_canonical_catenoidal(0.5, e.as_ptr(), e.len(), axis, &mut f) },
        BfStatus::Ok
    );
    let mut v = 0.0;
    unsafe {
        bf_flux_for_geodesic(
            f,
            finite(0.3, -0.2),
            INF,
            BfKillingKind::Translation,
            &mut v,
        )
    };
    assert!((v - 0.75 * PI).abs() < 1e-8);
    unsafe { bf_frame_free(f) };

    let h = [
        BfComplex { re: 0.6, im: 0.0 },
        BfComplex { re: 0.72, im: 0.0 },
    ];
    assert_eq!(
        unsafe { bf_frame_canonical_horospherical(2, h.as_ptr(), h.len(), &mut f) },
        BfStatus::Ok
    );
    let mut t = BfFluxTriple::default();
    assert_eq!(unsafe { bf_flux_triple(f, &mut t) }, BfStatus::Ok);
    unsafe { bf_frame_free(f) };

    assert_eq!(unsafe { bf_frame_horosphere(&mut f) }, BfStatus::Ok);
    assert_eq!(unsafe { bf_flux_triple(f, &mut t) }, BfStatus::Ok);
    assert!(t.phi0.re.abs() + t.phi1.re.abs() + t.phi2.re.abs() < 1e-12);
    unsafe { bf_frame_free(f) };
}

#[test]
fn cross_ratio_and_three_axes() {
    let pts = [finite(0.0, 0.0), finite(1.0, 0.0), INF, finite(2.0, 0.0)];
    let mut r = BfComplex::default();
    assert_eq!(
        unsafe { bf_cross_ratio(pts.as_ptr(), &mut r) },
        BfStatus::Ok
    );
    assert_eq!(r, BfComplex { re: 0.5, im: 0.0 });

    let sigma = [0.3, 0.5, 0.7];
    let mut axes = [BfPoint::default(); 3];
    assert_eq!(
        unsafe { bf_three_end_axes(sigma.as_ptr(), axes.as_mut_ptr()) },
        BfStatus::Ok
    );
    assert!(axes.iter().all(|a| !a.is_infinite));
}

#[test]
fn errors_map_to_status_codes() {
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { bf_frame_catenoid_cousin(-1.0, &mut f) },
        BfStatus::Domain
    );
    assert!(f.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(
        unsafe { bf_frame_catenoid_cousin(0.5, ptr::null_mut()) },
        BfStatus::NullPointer
    );
    assert!(last_error().contains("out"));

    let bad = CString::new("{not json").unwrap();
    assert_eq!(
        unsafe { bf_frame_from_json(bad.as_ptr(), &mut f) },
        BfStatus::Parse
    );

    let mut t = BfFluxTriple::default();
    assert_eq!(
        unsafe { bf_flux_triple(ptr::null(), &mut t) },
        BfStatus::NullPointer
    );

    let g = cousin(0.5);
    let mut v = 0.0;
    let same = finite(1.0, 0.0);
    assert_eq!(
        unsafe { bf_flux_for_geodesic(g, same, same, BfKillingKind::Translation, &mut v) },
        BfStatus::Domain
    );
    assert_eq!(
        unsafe { bf_flux_numeric(g, same, INF, BfKillingKind::Translation, 0.1, 1000, &mut v) },
        BfStatus::Domain
    );
    unsafe { bf_frame_free(g) };

    let e = [BfComplex { re: 0.1, im: 0.0 }];
    let status =
        unsafe { bf_frame_canonical_catenoidal(0.5, e.as_ptr(), 1, BfComplex::default(), &mut f) };
    assert_ne!(status, BfStatus::Ok);
}

#[test]
fn header_declares_every_entry_point() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/bryantflux.h"))
            .unwrap();
    for name in [
        "bf_last_error_message",
        "bf_string_free",
        "bf_frame_free",
        "bf_frame_catenoid_cousin",
        "bf_frame_canonical_catenoidal",
        "bf_frame_canonical_horospherical",
        "bf_frame_horosphere",
        "bf_frame_from_json",
        "bf_frame_to_json",
        "bf_frame_transform",
        "bf_flux_triple",
        "bf_flux_for_geodesic",
        "bf_flux_numeric",
        "bf_cross_ratio",
        "bf_three_end_axes",
        "typedef struct BfFrame BfFrame",
    ] {
        assert!(header.contains(name), "{name} missing from the header");
    }
}
