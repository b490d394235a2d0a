//! Bryant frames `F = (A B; C D)`, the immersion `f = F F*`, and the
//! holomorphic forms derived from a frame.
//!
//! A frame is a holomorphic null curve in `SL(2, ℂ)`: `AD − BC = 1` and
//! `dA dD − dB dC = 0`. Entries are generalized series around the puncture
//! `z = 0`, so the frame itself may be multivalued, while the immersion and the
//! three one-forms
//!
//! * `D dC − C dD`
//! * `C dB − D dA`
//! * `B dA − A dB`
//!
//! are single-valued.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{HPoint, IsometrySL2};
use crate::series::{GeneralizedSeries, QuadratureGrid, OFFSET_TOL};

/// Per-coefficient tolerance of the frame identities.
pub const FRAME_TOL: f64 = 1e-9;

/// Tolerance of the cross-identities between derived forms.
pub const FORMS_TOL: f64 = 1e-8;

/// Validity radius recorded for frames whose entries are exact finite sums.
pub const EXACT_RADIUS: f64 = f64::MAX;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrameRepr", into = "FrameRepr")]
pub struct BryantFrame {
    a: GeneralizedSeries,
    b: GeneralizedSeries,
    c: GeneralizedSeries,
    d: GeneralizedSeries,
    validity_radius: f64,
}

#[derive(Serialize, Deserialize)]
struct FrameRepr {
    #[serde(rename = "A")]
    a: GeneralizedSeries,
    #[serde(rename = "B")]
    b: GeneralizedSeries,
    #[serde(rename = "C")]
    c: GeneralizedSeries,
    #[serde(rename = "D")]
    d: GeneralizedSeries,
    validity_radius: f64,
}

impl TryFrom<FrameRepr> for BryantFrame {
    type Error = Error;
    fn try_from(r: FrameRepr) -> Result<Self> {
        BryantFrame::new(r.a, r.b, r.c, r.d, r.validity_radius)
    }
}

impl From<BryantFrame> for FrameRepr {
    fn from(f: BryantFrame) -> Self {
        FrameRepr {
            a: f.a,
            b: f.b,
            c: f.c,
            d: f.d,
            validity_radius: f.validity_radius,
        }
    }
}

fn frac_gap(x: f64, y: f64) -> f64 {
    let d = x - y;
    (d - d.round()).abs()
}

impl BryantFrame {
    /// Builds a frame after checking the offset pattern and both identities.
    pub fn new(
        a: GeneralizedSeries,
        b: GeneralizedSeries,
        c: GeneralizedSeries,
        d: GeneralizedSeries,
        validity_radius: f64,
    ) -> Result<Self> {
        let f = BryantFrame::from_parts_unchecked(a, b, c, d, validity_radius);
        if !(validity_radius > 0.0) {
            return Err(Error::domain(
                "validity_radius > 0",
                format!("validity_radius = {validity_radius}"),
            ));
        }
        if frac_gap(f.a.offset(), f.c.offset()) > OFFSET_TOL
            || frac_gap(f.b.offset(), f.d.offset()) > OFFSET_TOL
            || frac_gap(f.a.offset(), -f.d.offset()) > OFFSET_TOL
        {
            return Err(Error::domain(
                "A, C share a fractional offset and B, D carry the complementary one",
                format!(
                    "offsets ({}, {}, {}, {})",
                    f.a.offset(),
                    f.b.offset(),
                    f.c.offset(),
                    f.d.offset()
                ),
            ));
        }
        let (det, null) = frame_checks(&f);
        if det > FRAME_TOL {
            return Err(Error::Consistency {
                what: "AD − BC = 1",
                defect: det,
            });
        }
        if null > FRAME_TOL {
            return Err(Error::Consistency {
                what: "dA dD − dB dC = 0",
                defect: null,
            });
        }
        Ok(f)
    }

    /// Builds a frame with no checks; for diagnostics and negative controls.
    pub fn from_parts_unchecked(
        a: GeneralizedSeries,
        b: GeneralizedSeries,
        c: GeneralizedSeries,
        d: GeneralizedSeries,
        validity_radius: f64,
    ) -> Self {
        BryantFrame {
            a,
            b,
            c,
            d,
            validity_radius,
        }
    }

    pub fn a(&self) -> &GeneralizedSeries {
        &self.a
    }
    pub fn b(&self) -> &GeneralizedSeries {
        &self.b
    }
    pub fn c(&self) -> &GeneralizedSeries {
        &self.c
    }
    pub fn d(&self) -> &GeneralizedSeries {
        &self.d
    }

    pub fn validity_radius(&self) -> f64 {
        self.validity_radius
    }

    pub fn with_validity_radius(mut self, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::domain(
                "validity_radius > 0",
                format!("validity_radius = {r}"),
            ));
        }
        self.validity_radius = r;
        Ok(self)
    }

    /// Entry values at `z = ρe^{iτ}` on the continuous branch.
    pub fn eval_polar(&self, rho: f64, tau: f64) -> [Complex64; 4] {
        [
            self.a.eval_polar(rho, tau),
            self.b.eval_polar(rho, tau),
            self.c.eval_polar(rho, tau),
            self.d.eval_polar(rho, tau),
        ]
    }

    /// Point `(ζ, w)` of the immersion at `z = ρe^{iτ}`.
    pub fn point_at(&self, rho: f64, tau: f64) -> Result<HPoint> {
        let [a, b, c, d] = self.eval_polar(rho, tau);
        point_from_entries(a, b, c, d)
    }
}

/// `ζ = (ĀC + B̄D)/(|A|² + |B|²)`, `w = 1/(|A|² + |B|²)`.
pub(crate) fn point_from_entries(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
) -> Result<HPoint> {
    let s = a.norm_sqr() + b.norm_sqr();
    HPoint::new((a.conj() * c + b.conj() * d) / s, 1.0 / s)
}

/// Immersion samples on the grid circle.
pub fn immersion(f: &BryantFrame, grid: &QuadratureGrid) -> Result<Vec<HPoint>> {
    grid.check_within(f.validity_radius)?;
    grid.taus().map(|t| f.point_at(grid.rho(), t)).collect()
}

/// Series of coefficient magnitudes, used as a per-power error scale.
fn abs_series(s: &GeneralizedSeries) -> GeneralizedSeries {
    GeneralizedSeries::new(
        s.offset(),
        s.coeffs()
            .iter()
            .map(|c| Complex64::new(c.norm(), 0.0))
            .collect(),
    )
}

/// `max_k |r_k| / max(1, scale_k)`, matching powers of `z`.
pub(crate) fn scaled_defect(residual: &GeneralizedSeries, scale: &GeneralizedSeries) -> f64 {
    residual
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let s = scale.coeff_of_power(residual.offset() + k as f64).re;
            r.norm() / s.max(1.0)
        })
        .fold(0.0, f64::max)
}

/// `(det_defect, null_defect)`: coefficient defects of `AD − BC − 1` and
/// `dA dD − dB dC`, each relative to the magnitude of the products involved
/// when that exceeds one. Infinite if the offsets do not align.
pub fn frame_checks(f: &BryantFrame) -> (f64, f64) {
    let order = f.a.order();
    let det = f.a.mul(&f.d).sub(&f.b.mul(&f.c)).and_then(|r| {
        r.sub(&GeneralizedSeries::constant(
            Complex64::new(1.0, 0.0),
            order,
        ))
    });
    let det_scale = abs_series(&f.a)
        .mul(&abs_series(&f.d))
        .add(&abs_series(&f.b).mul(&abs_series(&f.c)));
    let (da, db, dc, dd) = (
        f.a.differentiate(),
        f.b.differentiate(),
        f.c.differentiate(),
        f.d.differentiate(),
    );
    let null = da.mul(&dd).sub(&db.mul(&dc));
    let null_scale = abs_series(&da)
        .mul(&abs_series(&dd))
        .add(&abs_series(&db).mul(&abs_series(&dc)));
    let measure = |r: Result<GeneralizedSeries>, s: Result<GeneralizedSeries>| match (r, s) {
        (Ok(r), Ok(s)) => scaled_defect(&r, &s),
        _ => f64::INFINITY,
    };
    (measure(det, det_scale), measure(null, null_scale))
}

/// Left multiplication `F ↦ P F`.
pub fn transform_frame(p: &IsometrySL2, f: &BryantFrame) -> Result<BryantFrame> {
    let comb = |x: Complex64, s: &GeneralizedSeries, y: Complex64, t: &GeneralizedSeries| {
        if y == Complex64::new(0.0, 0.0) {
            Ok(s.scale(x))
        } else if x == Complex64::new(0.0, 0.0) {
            Ok(t.scale(y))
        } else {
            s.scale(x).add(&t.scale(y))
        }
    };
    let a = comb(p.alpha, &f.a, p.beta, &f.c)?;
    let b = comb(p.alpha, &f.b, p.beta, &f.d)?;
    let c = comb(p.gamma, &f.a, p.delta, &f.c)?;
    let d = comb(p.gamma, &f.b, p.delta, &f.d)?;
    BryantFrame::new(a, b, c, d, f.validity_radius)
}

/// Coefficient series (per `dz`) of `D dC − C dD`, `C dB − D dA`, `B dA − A dB`.
pub fn flux_one_forms(f: &BryantFrame) -> Result<[GeneralizedSeries; 3]> {
    let (da, db, dc, dd) = (
        f.a.differentiate(),
        f.b.differentiate(),
        f.c.differentiate(),
        f.d.differentiate(),
    );
    let q0 = f.d.mul(&dc).sub(&f.c.mul(&dd))?;
    let q1 = f.c.mul(&db).sub(&f.d.mul(&da))?;
    let q2 = f.b.mul(&da).sub(&f.a.mul(&db))?;
    for q in [&q0, &q1, &q2] {
        if q.integer_offset().is_none() {
            return Err(Error::domain(
                "flux one-forms are single-valued (integer offsets)",
                format!("offset {}", q.offset()),
            ));
        }
    }
    Ok([q0, q1, q2])
}

/// Weierstrass data `g = z^μ f`, `ω = z^ν h dz`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassData {
    mu: f64,
    f: GeneralizedSeries,
    nu: f64,
    h: GeneralizedSeries,
}

impl WeierstrassData {
    pub fn new(mu: f64, f: GeneralizedSeries, nu: f64, h: GeneralizedSeries) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::domain("μ > 0", format!("μ = {mu}")));
        }
        if f.offset() != 0.0 || f.coeff(0).norm() == 0.0 {
            return Err(Error::domain(
                "f(0) ≠ 0",
                "f must be holomorphic and nonzero at 0",
            ));
        }
        if h.offset() != 0.0 || h.coeff(0).norm() == 0.0 {
            return Err(Error::domain(
                "h(0) ≠ 0",
                "h must be holomorphic and nonzero at 0",
            ));
        }
        let s = mu + nu;
        if (s - s.round()).abs() > OFFSET_TOL {
            return Err(Error::domain("μ + ν ∈ ℤ", format!("μ + ν = {s}")));
        }
        if s.round() < -1.0 {
            return Err(Error::domain("μ + ν ≥ −1", format!("μ + ν = {s}")));
        }
        if nu > -1.0 + OFFSET_TOL {
            return Err(Error::domain("ν ≤ −1", format!("ν = {nu}")));
        }
        Ok(WeierstrassData { mu, f, nu, h })
    }

    /// Data with `f ≡ 1`.
    pub fn with_unit_f(mu: f64, nu: f64, h: GeneralizedSeries) -> Result<Self> {
        let f = GeneralizedSeries::constant(Complex64::new(1.0, 0.0), h.order());
        WeierstrassData::new(mu, f, nu, h)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn f(&self) -> &GeneralizedSeries {
        &self.f
    }
    pub fn h(&self) -> &GeneralizedSeries {
        &self.h
    }

    /// Integer `μ + ν`.
    pub fn mu_plus_nu(&self) -> i64 {
        (self.mu + self.nu).round() as i64
    }

    /// Secondary Gauss map `g = z^μ f`.
    pub fn g(&self) -> GeneralizedSeries {
        self.f.shift(self.mu)
    }

    /// Coefficient of `ω = z^ν h dz`.
    pub fn omega(&self) -> GeneralizedSeries {
        self.h.shift(self.nu)
    }

    /// Coefficient of `ω dg = z^{μ+ν−1} h (μ f + z f') dz²`.
    pub fn hopf(&self) -> GeneralizedSeries {
        let zf = self.f.differentiate().shift(1.0);
        let inner = self
            .f
            .scale_real(self.mu)
            .add(&zf)
            .expect("f and z f' share an integer offset");
        self.h.mul(&inner).shift(self.mu + self.nu - 1.0)
    }
}

/// Defects of the identities relating the frame one-forms to `G` and `ω♯`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct IdentityDefects {
    /// `B dA − A dB + ω♯/G²`
    pub b_da_a_db: f64,
    /// `C dB − D dA − ω♯/G`
    pub c_db_d_da: f64,
    /// `D dC − C dD + ω♯`
    pub d_dc_c_dd: f64,
    /// Hopf differential from Weierstrass data against `−(B dA − A dB) dG`.
    pub hopf_routes: f64,
}

impl IdentityDefects {
    pub fn max(&self) -> f64 {
        self.b_da_a_db
            .max(self.c_db_d_da)
            .max(self.d_dc_c_dd)
            .max(self.hopf_routes)
    }
}

/// Holomorphic data derived from a frame.
///
/// `gauss`, `hopf` and `omega_sharp` are absent when the hyperbolic Gauss map
/// is the constant `∞` (the horosphere), except that `hopf` is reported as
/// zero whenever `B dA − A dB` vanishes identically.
#[derive(Clone, Debug, PartialEq)]
pub struct HolomorphicForms {
    pub gauss: Option<GeneralizedSeries>,
    pub hopf: Option<GeneralizedSeries>,
    pub omega_sharp: Option<GeneralizedSeries>,
    pub d_dc_minus_c_dd: GeneralizedSeries,
    pub c_db_minus_d_da: GeneralizedSeries,
    pub b_da_minus_a_db: GeneralizedSeries,
    pub defects: IdentityDefects,
}

const ZERO_TOL: f64 = 1e-13;

/// Computes `G`, the Hopf differential, `ω♯ = −ω dg / d(1/G)` and the three
/// one-forms, then verifies
/// `B dA − A dB = −ω♯/G²`, `C dB − D dA = ω♯/G`, `D dC − C dD = −ω♯`.
pub fn derived_forms(f: &BryantFrame, w: Option<&WeierstrassData>) -> Result<HolomorphicForms> {
    let [q0, q1, q2] = flux_one_forms(f)?;
    let (da, db) = (f.a.differentiate(), f.b.differentiate());
    // G = y'/x' from whichever column is non-constant.
    let column = if !da.is_zero(ZERO_TOL) {
        Some((da, f.c.differentiate()))
    } else if !db.is_zero(ZERO_TOL) {
        Some((db, f.d.differentiate()))
    } else {
        None
    };
    let gauss = match &column {
        Some((x1, y1)) => Some(y1.div(x1)?),
        None => None,
    };
    // The checks below are multiplied through by x'² so no series is divided:
    // with W = y''x' − y'x'' one has G' = W/x'², and ω♯ = Q y'²/W.
    let wronskian = match &column {
        Some((x1, y1)) => Some(
            y1.differentiate()
                .mul(x1)
                .sub(&y1.mul(&x1.differentiate()))?,
        ),
        None => None,
    };
    let mut defects = IdentityDefects::default();
    let q2_zero = q2.is_zero(ZERO_TOL);
    let zero_hopf = || GeneralizedSeries::zero(q2.offset() - 1.0, q2.order());
    let frame_hopf = match &gauss {
        Some(g) => Some(q2.mul(&g.differentiate()).neg()),
        None if q2_zero => Some(zero_hopf()),
        None => None,
    };
    let hopf = match (w, frame_hopf) {
        (Some(w), Some(fh)) => {
            let wh = w.hopf();
            if let (Some((x1, _)), Some(wr)) = (&column, &wronskian) {
                let lhs = wh.mul(x1).mul(x1);
                let rhs = q2.mul(wr);
                let scale = abs_series(&lhs).add(&abs_series(&rhs))?;
                defects.hopf_routes = scaled_defect(&lhs.add(&rhs)?, &scale);
            } else {
                let scale = abs_series(&wh).add(&abs_series(&fh))?;
                defects.hopf_routes = scaled_defect(&wh.sub(&fh)?, &scale);
            }
            if defects.hopf_routes > FORMS_TOL {
                return Err(Error::Consistency {
                    what: "Hopf differential from Weierstrass data vs frame",
                    defect: defects.hopf_routes,
                });
            }
            Some(wh)
        }
        (Some(w), None) => Some(w.hopf()),
        (None, fh) => fh,
    };
    let omega_sharp = match (&gauss, &hopf) {
        (Some(g), Some(h)) => {
            let dg = g.differentiate();
            if dg.is_zero(ZERO_TOL) {
                None
            } else {
                Some(h.mul(g).mul(g).div(&dg)?)
            }
        }
        _ => None,
    };
    if let (Some((x1, y1)), Some(wr), Some(q), true) =
        (&column, &wronskian, &hopf, omega_sharp.is_some())
    {
        let check = |lhs: GeneralizedSeries, rhs: GeneralizedSeries| -> Result<f64> {
            let scale = abs_series(&lhs).add(&abs_series(&rhs))?;
            Ok(scaled_defect(&lhs.add(&rhs)?, &scale))
        };
        // q₂ W = −Q x'², q₁ W = Q x' y', q₀ W = −Q y'².
        defects.b_da_a_db = check(q2.mul(wr), q.mul(x1).mul(x1))?;
        defects.c_db_d_da = check(q1.mul(wr), q.mul(x1).mul(y1).neg())?;
        defects.d_dc_c_dd = check(q0.mul(wr), q.mul(y1).mul(y1))?;
        if defects.max() > FORMS_TOL {
            return Err(Error::Consistency {
                what: "one-form identities with ω♯ and G",
                defect: defects.max(),
            });
        }
    }
    Ok(HolomorphicForms {
        gauss,
        hopf,
        omega_sharp,
        d_dc_minus_c_dd: q0,
        c_db_minus_d_da: q1,
        b_da_minus_a_db: q2,
        defects,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ends::{
        canonical_catenoidal_frame, canonical_horospherical_frame, catenoid_cousin_frame,
        horosphere_frame,
    };
    use crate::geometry::{apply_isometry, distance};
    use crate::series::DEFAULT_ORDER;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn catenoidal_h(mu: f64, eps2: f64) -> GeneralizedSeries {
        let h0 = (1.0 - mu * mu) / (4.0 * mu);
        GeneralizedSeries::from_real(0.0, &[h0, 0.0, h0 * eps2], DEFAULT_ORDER)
    }

    fn sample_frames() -> Vec<BryantFrame> {
        let mut v = vec![
            catenoid_cousin_frame(0.5).unwrap(),
            catenoid_cousin_frame(2.0).unwrap(),
            canonical_catenoidal_frame(0.5, &catenoidal_h(0.5, 0.05), c(1., 1.)).unwrap(),
            canonical_catenoidal_frame(1.5, &catenoidal_h(1.5, -0.1), c(-0.3, 0.2)).unwrap(),
        ];
        let h = GeneralizedSeries::from_real(0.0, &[1.0, 2.0, 0.3], DEFAULT_ORDER);
        v.push(canonical_horospherical_frame(2, &h).unwrap());
        v
    }

    #[test]
    fn horosphere_immersion_is_the_inverted_plane() {
        let f = horosphere_frame(DEFAULT_ORDER);
        let grid = QuadratureGrid::new(0.3, 16).unwrap();
        for (p, t) in immersion(&f, &grid).unwrap().iter().zip(grid.taus()) {
            let z = Complex64::from_polar(0.3, t);
            assert!((p.zeta() - 1.0 / z).norm() < 1e-13 && (p.w() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn cousin_immersion_on_the_real_ray() {
        let f = catenoid_cousin_frame(0.5).unwrap();
        for rho in [0.05, 0.1, 0.3, 0.9] {
            let p = f.point_at(rho, 0.0).unwrap();
            let zeta = -(3.0 / (8.0 * rho)) * (1.0 + rho) / (1.0 + rho / 9.0);
            let w = rho.powf(-0.5) / (1.0 + rho / 9.0);
            assert!((p.zeta() - c(zeta, 0.)).norm() < 1e-10 * zeta.abs());
            assert!((p.w() - w).abs() < 1e-12 * w);
        }
    }

    #[test]
    fn immersion_closes_up_and_stays_in_the_half_space() {
        let grid = QuadratureGrid::new(0.1, 64).unwrap();
        for f in sample_frames() {
            let pts = immersion(&f, &grid).unwrap();
            assert!(pts.iter().all(|p| p.w() > 0.0));
            let wrap = f.point_at(0.1, 2.0 * PI).unwrap();
            assert!(distance(&wrap, &pts[0]) < 1e-9);
            let [a, b, _, _] = f.eval_polar(0.1, 0.0);
            let [a2, b2, _, _] = f.eval_polar(0.1, 2.0 * PI);
            let s = a.norm_sqr() + b.norm_sqr();
            assert!((a2.norm_sqr() + b2.norm_sqr() - s).abs() < 1e-10 * s);
        }
    }

    #[test]
    fn immersion_rejects_radius_outside_validity() {
        let f = horosphere_frame(8).with_validity_radius(0.5).unwrap();
        assert!(immersion(&f, &QuadratureGrid::new(0.6, 16).unwrap()).is_err());
    }

    #[test]
    fn frame_check_examples() {
        let f = catenoid_cousin_frame(0.5).unwrap();
        let (det, null) = frame_checks(&f);
        assert!(det < 1e-12 && null < 1e-12);
        let (det, null) = frame_checks(&horosphere_frame(DEFAULT_ORDER));
        assert_eq!((det, null), (0.0, 0.0));
        let mut bc = f.b().coeffs().to_vec();
        bc[1] += 0.01;
        let bad = BryantFrame::from_parts_unchecked(
            f.a().clone(),
            GeneralizedSeries::new(f.b().offset(), bc.clone()),
            f.c().clone(),
            f.d().clone(),
            1.0,
        );
        let (det, _) = frame_checks(&bad);
        assert!((det - 0.01 * 3.0 / 8.0).abs() < 1e-12);
        let err = BryantFrame::new(
            f.a().clone(),
            GeneralizedSeries::new(f.b().offset(), bc),
            f.c().clone(),
            f.d().clone(),
            1.0,
        );
        assert!(matches!(err, Err(Error::Consistency { .. })));
    }

    #[test]
    fn determinant_derivative_vanishes() {
        for f in sample_frames() {
            let det = f.a().mul(f.d()).sub(&f.b().mul(f.c())).unwrap();
            let d = det.differentiate();
            assert!(d.coeffs().iter().take(20).all(|x| x.norm() < 1e-9));
        }
    }

    #[test]
    fn frame_json_round_trip() {
        let f = sample_frames().swap_remove(2);
        let js = serde_json::to_string(&f).unwrap();
        let back: BryantFrame = serde_json::from_str(&js).unwrap();
        assert_eq!(back, f);
        let v: serde_json::Value = serde_json::from_str(&js).unwrap();
        assert!(v.get("A").and_then(|a| a.get("offset")).is_some());
        assert!(v.get("validity_radius").is_some());
    }

    #[test]
    fn transform_is_covariant() {
        let p = IsometrySL2::new(c(1., 0.2), c(-0.4, 0.1), c(0.3, 0.), c(0.9, -0.5)).unwrap();
        for f in sample_frames() {
            let g = transform_frame(&p, &f).unwrap();
            for t in [0.0, 1.0, 4.0] {
                let lhs = g.point_at(0.1, t).unwrap();
                let rhs = apply_isometry(&p, &f.point_at(0.1, t).unwrap());
                assert!(distance(&lhs, &rhs) < 1e-9);
            }
        }
        let f = catenoid_cousin_frame(0.5).unwrap();
        let same = transform_frame(&IsometrySL2::IDENTITY, &f).unwrap();
        assert_eq!(same, f);
    }

    #[test]
    fn horosphere_forms_have_zero_residue() {
        let forms = derived_forms(&horosphere_frame(DEFAULT_ORDER), None).unwrap();
        assert!(forms.gauss.is_none());
        assert_eq!(forms.d_dc_minus_c_dd.residue().unwrap(), c(0., 0.));
        assert_eq!(forms.d_dc_minus_c_dd.coeff_of_power(-2.0), c(-1., 0.));
        assert!(forms.c_db_minus_d_da.is_zero(0.0));
        assert!(forms.b_da_minus_a_db.is_zero(0.0));
        assert!(forms.hopf.unwrap().is_zero(0.0));
    }

    #[test]
    fn catenoidal_middle_form_residue() {
        let h = catenoidal_h(0.5, 0.0);
        let f = canonical_catenoidal_frame(0.5, &h, c(0., 0.)).unwrap();
        let w = WeierstrassData::with_unit_f(0.5, -1.5, h).unwrap();
        let forms = derived_forms(&f, Some(&w)).unwrap();
        assert!((forms.c_db_minus_d_da.residue().unwrap() - c(-3.0 / 16.0, 0.)).norm() < 1e-12);
    }

    #[test]
    fn horospherical_hopf_leading_term() {
        let h = GeneralizedSeries::from_real(0.0, &[1.5, 2.0 * 1.5 * 1.5], DEFAULT_ORDER);
        let f = canonical_horospherical_frame(2, &h).unwrap();
        let w = WeierstrassData::with_unit_f(2.0, -2.0, h).unwrap();
        let forms = derived_forms(&f, Some(&w)).unwrap();
        let hopf = forms.hopf.unwrap();
        assert!((hopf.coeff_of_power(-1.0) - c(3.0, 0.)).norm() < 1e-12);
        assert!(forms.defects.max() < FORMS_TOL);
    }

    #[test]
    fn identities_hold_for_all_sample_frames() {
        for f in sample_frames() {
            let forms = derived_forms(&f, None).unwrap();
            assert!(forms.gauss.is_some());
            assert!(forms.defects.max() < FORMS_TOL, "{:?}", forms.defects);
        }
    }

    #[test]
    fn gauss_map_agrees_between_columns() {
        for f in sample_frames() {
            let g1 = f.c().differentiate().div(&f.a().differentiate()).unwrap();
            let g2 = f.d().differentiate().div(&f.b().differentiate()).unwrap();
            let diff = g1.sub(&g2).unwrap();
            let scale = abs_series(&g1).add(&abs_series(&g2)).unwrap();
            assert!(scaled_defect(&diff.truncate(20), &scale) < 1e-8);
        }
    }

    #[test]
    fn hopf_weierstrass_route_catches_a_wrong_sign() {
        let h = catenoidal_h(0.5, 0.05);
        let f = canonical_catenoidal_frame(0.5, &h, c(0.2, 0.)).unwrap();
        let wrong = WeierstrassData::with_unit_f(0.5, -1.5, h.neg()).unwrap();
        assert!(matches!(
            derived_forms(&f, Some(&wrong)),
            Err(Error::Consistency { .. })
        ));
    }

    #[test]
    fn middle_identity_uses_the_d_column() {
        // The combination C dB − B dA does not equal ω♯/G; C dB − D dA does.
        let h = catenoidal_h(0.5, 0.05);
        let f = canonical_catenoidal_frame(0.5, &h, c(0.7, -0.2)).unwrap();
        let forms = derived_forms(&f, None).unwrap();
        let os_over_g = forms
            .omega_sharp
            .as_ref()
            .unwrap()
            .div(forms.gauss.as_ref().unwrap())
            .unwrap();
        let literal = f
            .c()
            .mul(&f.b().differentiate())
            .sub(&f.b().mul(&f.a().differentiate()));
        let gap = literal
            .unwrap()
            .sub(&os_over_g)
            .unwrap()
            .truncate(20)
            .max_abs();
        assert!(gap > 1e-3);
        assert!(
            forms
                .c_db_minus_d_da
                .sub(&os_over_g)
                .unwrap()
                .truncate(20)
                .max_abs()
                < 1e-8
        );
    }

    #[test]
    fn relation_ab_matches_zeta_derivative() {
        // (1/w²)·conj(∂ζ/∂z̄) = A B' − A' B, with ∂/∂z̄ by finite differences.
        for f in sample_frames() {
            let (rho, tau) = (0.12, 0.7);
            let z = Complex64::from_polar(rho, tau);
            let point = |dz: Complex64| {
                let zz = z + dz;
                f.point_at(zz.norm(), tau + (zz / z).arg()).unwrap()
            };
            let hstep = 1e-6;
            let zx = (point(c(hstep, 0.)).zeta() - point(c(-hstep, 0.)).zeta()) / (2.0 * hstep);
            let zy = (point(c(0., hstep)).zeta() - point(c(0., -hstep)).zeta()) / (2.0 * hstep);
            let dzbar = 0.5 * (zx + c(0., 1.) * zy);
            let w = f.point_at(rho, tau).unwrap().w();
            let (a, da) = f.a().eval_polar_with_derivative(rho, tau);
            let (b, db) = f.b().eval_polar_with_derivative(rho, tau);
            let lhs = dzbar.conj() / (w * w);
            let rhs = a * db - da * b;
            assert!(
                (lhs - rhs).norm() < 1e-6 * (1.0 + rhs.norm()),
                "{lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn weierstrass_admissibility() {
        let h = GeneralizedSeries::constant(c(1., 0.), 4);
        assert!(WeierstrassData::with_unit_f(0.5, -1.5, h.clone()).is_ok());
        assert!(WeierstrassData::with_unit_f(0.5, -1.2, h.clone()).is_err());
        assert!(WeierstrassData::with_unit_f(0.5, -0.5, h.clone()).is_err());
        assert!(WeierstrassData::with_unit_f(0.5, -2.5, h.clone()).is_err());
        assert!(WeierstrassData::with_unit_f(-1.0, -2.0, h).is_err());
        let zero_h = GeneralizedSeries::zero(0.0, 4);
        assert!(WeierstrassData::with_unit_f(2.0, -2.0, zero_h).is_err());
    }
}
