//! Flux of Killing fields through an end.
//!
//! Two independent routes are provided:
//!
//! * **Residues.** The flux triple `φ₀ = 4π Res(D dC − C dD)`,
//!   `φ₁ = 4π Res(C dB − D dA)`, `φ₂ = 4π Res(B dA − A dB)` determines the flux
//!   polynomial `Π(X) = φ₂X² + 2φ₁X + φ₀` and its polarization `P(X, Y)`. The
//!   translation flux along `(𝒞, 𝒟)` is `Re(P(𝒞, 𝒟)/(𝒞 − 𝒟))`, and the rotation
//!   flux is `−Im` of the same quantity.
//! * **Quadrature.** [`flux_numeric`] integrates
//!   `∫₀^{2π} (−ρ⟨∂_ρX, Y⟩ + 2⟨∂_τX, Z⟩) dτ` over the immersed circle `|z| = ρ`.
//!   No residues are involved on this path.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::bryant::{flux_one_forms, point_from_entries, BryantFrame};
use crate::ends::EndDescriptor;
use crate::error::{Error, Result};
use crate::geometry::{
    cross_ratio, metric_inner_unchecked, ExtendedComplex, Geodesic, IsometrySL2,
};
use crate::killing::{KillingField, KillingKind};
use crate::series::{pairwise_sum, QuadratureGrid};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxTriple {
    #[serde(with = "crate::json::complex")]
    pub phi0: Complex64,
    #[serde(with = "crate::json::complex")]
    pub phi1: Complex64,
    #[serde(with = "crate::json::complex")]
    pub phi2: Complex64,
}

impl FluxTriple {
    pub const ZERO: FluxTriple = FluxTriple {
        phi0: ZERO,
        phi1: ZERO,
        phi2: ZERO,
    };

    pub fn new(phi0: Complex64, phi1: Complex64, phi2: Complex64) -> Self {
        FluxTriple { phi0, phi1, phi2 }
    }

    pub fn add(&self, o: &Self) -> Self {
        FluxTriple::new(self.phi0 + o.phi0, self.phi1 + o.phi1, self.phi2 + o.phi2)
    }

    pub fn max_abs(&self) -> f64 {
        self.phi0.norm().max(self.phi1.norm()).max(self.phi2.norm())
    }

    pub fn polynomial(&self) -> FluxPolynomial {
        FluxPolynomial::new([self.phi0, 2.0 * self.phi1, self.phi2])
    }

    /// `(1/4π)(φ₁, φ₂; −φ₀, −φ₁)`.
    pub fn matrix(&self) -> FluxMatrix {
        let s = 1.0 / (4.0 * PI);
        FluxMatrix {
            m: [
                [self.phi1 * s, self.phi2 * s],
                [-self.phi0 * s, -self.phi1 * s],
            ],
        }
    }
}

/// `Π(X) = c₀ + c₁X + c₂X²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxPolynomial {
    #[serde(with = "coeffs_json")]
    coeffs: [Complex64; 3],
}

mod coeffs_json {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &[Complex64; 3], s: S) -> Result<S::Ok, S::Error> {
        c.iter()
            .map(|z| [z.re, z.im])
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Complex64; 3], D::Error> {
        let v = <[[f64; 2]; 3]>::deserialize(d)?;
        Ok(v.map(|[re, im]| Complex64::new(re, im)))
    }
}

impl FluxPolynomial {
    pub const ZERO: FluxPolynomial = FluxPolynomial { coeffs: [ZERO; 3] };

    /// Coefficients in increasing degree.
    pub fn new(coeffs: [Complex64; 3]) -> Self {
        FluxPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> [Complex64; 3] {
        self.coeffs
    }

    pub fn triple(&self) -> FluxTriple {
        FluxTriple::new(self.coeffs[0], 0.5 * self.coeffs[1], self.coeffs[2])
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs[0] + x * (self.coeffs[1] + x * self.coeffs[2])
    }

    pub fn add(&self, o: &Self) -> Self {
        FluxPolynomial::new([
            self.coeffs[0] + o.coeffs[0],
            self.coeffs[1] + o.coeffs[1],
            self.coeffs[2] + o.coeffs[2],
        ])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        FluxPolynomial::new(self.coeffs.map(|c| c * s))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    /// Roots of the degree-2 form, with `∞` counted `2 − deg` times.
    /// The zero polynomial has no roots.
    pub fn roots(&self) -> Vec<ExtendedComplex> {
        let scale = self.max_abs();
        if scale == 0.0 {
            return vec![];
        }
        let tol = 1e-12 * scale;
        let [c0, c1, c2] = self.coeffs;
        if c2.norm() > tol {
            let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
            // Pick the numerically stable pairing.
            let q = if (c1.conj() * disc).re >= 0.0 {
                -0.5 * (c1 + disc)
            } else {
                -0.5 * (c1 - disc)
            };
            let r1 = q / c2;
            let r2 = if q.norm() > 0.0 { c0 / q } else { r1 };
            vec![r1.into(), r2.into()]
        } else if c1.norm() > tol {
            vec![(-c0 / c1).into(), ExtendedComplex::Infinity]
        } else {
            vec![ExtendedComplex::Infinity, ExtendedComplex::Infinity]
        }
    }

    /// `P(X, Y)/(X − Y)` for the polarization `P`, evaluated in homogeneous
    /// coordinates so that either point may be `∞`.
    pub fn geodesic_value(&self, g: &Geodesic) -> Complex64 {
        let (x1, y1) = g.from().homogeneous();
        let (x2, y2) = g.to().homogeneous();
        let [c0, c1, c2] = self.coeffs;
        let num = c2 * x1 * x2 + 0.5 * c1 * (x1 * y2 + x2 * y1) + c0 * y1 * y2;
        num / (x1 * y2 - x2 * y1)
    }

    /// Flux of the Killing field of the given kind along `g`.
    pub fn geodesic_flux(&self, g: &Geodesic, kind: KillingKind) -> f64 {
        let v = self.geodesic_value(g);
        match kind {
            KillingKind::Translation => v.re,
            KillingKind::Rotation => -v.im,
        }
    }
}

/// Trace-free flux matrix `Φ = Res(−dF F⁻¹)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluxMatrix {
    pub m: [[Complex64; 2]; 2],
}

impl FluxMatrix {
    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.m[i][j] - o.m[i][j]).norm());
            }
        }
        d
    }

    /// `P Φ P⁻¹`.
    pub fn conjugate(&self, p: &IsometrySL2) -> Self {
        let a = p.matrix();
        let b = p.inverse().matrix();
        let mul = |x: &[[Complex64; 2]; 2], y: &[[Complex64; 2]; 2]| {
            let mut r = [[ZERO; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
                }
            }
            r
        };
        FluxMatrix {
            m: mul(&mul(&a, &self.m), &b),
        }
    }
}

pub fn flux_triple(f: &BryantFrame) -> Result<FluxTriple> {
    let [q0, q1, q2] = flux_one_forms(f)?;
    let s = 4.0 * PI;
    Ok(FluxTriple::new(
        q0.residue()? * s,
        q1.residue()? * s,
        q2.residue()? * s,
    ))
}

/// Residue of `−dF F⁻¹`, with `F⁻¹ = adj(F)/det F` divided out as a series.
pub fn flux_matrix(f: &BryantFrame) -> Result<FluxMatrix> {
    let (a, b, c, d) = (f.a(), f.b(), f.c(), f.d());
    let (da, db, dc, dd) = (
        a.differentiate(),
        b.differentiate(),
        c.differentiate(),
        d.differentiate(),
    );
    let det = a.mul(d).sub(&b.mul(c))?;
    let entry =
        |x: crate::series::GeneralizedSeries| -> Result<Complex64> { x.div(&det)?.residue() };
    Ok(FluxMatrix {
        m: [
            [
                entry(db.mul(c).sub(&da.mul(d))?)?,
                entry(da.mul(b).sub(&db.mul(a))?)?,
            ],
            [
                entry(dd.mul(c).sub(&dc.mul(d))?)?,
                entry(dc.mul(b).sub(&dd.mul(a))?)?,
            ],
        ],
    })
}

pub fn flux_for_geodesic(t: &FluxTriple, g: &Geodesic, kind: KillingKind) -> f64 {
    t.polynomial().geodesic_flux(g, kind)
}

/// `Π(X) = 2πσ (X − 𝒜)(X − ℬ)/(ℬ − 𝒜)` with `σ = 1 − μ²`, and its limits when
/// `𝒜` or `ℬ` is `∞`.
pub fn catenoidal_polynomial(
    sigma: f64,
    axis_from: ExtendedComplex,
    boundary: ExtendedComplex,
) -> Result<FluxPolynomial> {
    let (xa, ya) = axis_from.homogeneous();
    let (xb, yb) = boundary.homogeneous();
    let den = xb * ya - xa * yb;
    if den.norm() <= 1e-14 {
        return Err(Error::domain(
            "𝒜 ≠ ℬ",
            format!("axis endpoints coincide at {boundary}"),
        ));
    }
    let s = 2.0 * PI * sigma / den;
    Ok(FluxPolynomial::new([
        s * xa * xb,
        -s * (ya * xb + xa * yb),
        s * ya * yb,
    ]))
}

/// Closed form through the cross-ratio `(𝒜, 𝒞, 𝒟, ℬ)`.
pub fn catenoidal_closed_form(
    mu: f64,
    axis_from: ExtendedComplex,
    boundary: ExtendedComplex,
    g: &Geodesic,
    kind: KillingKind,
) -> Result<f64> {
    let sigma = 1.0 - mu * mu;
    let cr = cross_ratio(axis_from, g.from(), g.to(), boundary)?;
    Ok(match kind {
        KillingKind::Translation => PI * sigma * (2.0 * cr.re - 1.0),
        KillingKind::Rotation => -2.0 * PI * sigma * cr.im,
    })
}

/// `Π(X) = −2πκ (X − ℬ)²`, or the constant `−2πκ` when `ℬ = ∞`.
pub fn horospherical_polynomial(kappa: Complex64, boundary: ExtendedComplex) -> FluxPolynomial {
    let (xb, yb) = boundary.homogeneous();
    let s = -2.0 * PI * kappa;
    FluxPolynomial::new([s * xb * xb, -2.0 * s * xb * yb, s * yb * yb])
}

/// `−2π Re(κ(𝒞 − ℬ)(𝒟 − ℬ)/(𝒞 − 𝒟))` for translations and `+2π Im(…)` for
/// rotations, with the `∞` cases taken as limits.
pub fn horospherical_closed_form(
    kappa: Complex64,
    boundary: ExtendedComplex,
    g: &Geodesic,
    kind: KillingKind,
) -> f64 {
    horospherical_polynomial(kappa, boundary).geodesic_flux(g, kind)
}

/// `κ = −φ₂/(2π)` for finite `ℬ`, `κ = −φ₀/(2π)` for `ℬ = ∞`.
pub fn kappa_from_triple(t: &FluxTriple, boundary: ExtendedComplex) -> Complex64 {
    match boundary {
        ExtendedComplex::Finite(_) => -t.phi2 / (2.0 * PI),
        ExtendedComplex::Infinity => -t.phi0 / (2.0 * PI),
    }
}

/// Closed-form flux polynomial of an end descriptor.
pub fn end_polynomial(e: &EndDescriptor) -> Result<FluxPolynomial> {
    match e {
        EndDescriptor::Catenoidal(c) => catenoidal_polynomial(c.sigma(), c.axis_from, c.boundary),
        EndDescriptor::Horospherical(h) => Ok(horospherical_polynomial(h.kappa, h.boundary)),
        EndDescriptor::Horosphere => Ok(FluxPolynomial::ZERO),
    }
}

/// Radial stencil spacing relative to `ρ`. Near `ε^{1/5}`, where the fourth-order
/// truncation error meets round-off for entries varying on the scale `ρ`.
pub const STENCIL_STEP: f64 = 1e-3;

/// Gradient `(∂_u f + i ∂_v f, ∂_w f)` of a gauge function `f`.
pub type GaugeGradient<'a> = &'a (dyn Fn(Complex64, f64) -> (Complex64, f64) + Sync);

/// Flux by quadrature over the circle `|z| = ρ`.
pub fn flux_numeric(f: &BryantFrame, k: &KillingField, grid: &QuadratureGrid) -> Result<f64> {
    flux_numeric_gauged(f, k, grid, None)
}

/// [`flux_numeric`] with the potential shifted to `Z + w² ∇f`, whose dual form
/// differs from the original by the exact form `df`.
pub fn flux_numeric_gauged(
    f: &BryantFrame,
    k: &KillingField,
    grid: &QuadratureGrid,
    gauge: Option<GaugeGradient<'_>>,
) -> Result<f64> {
    let rho = grid.rho();
    let h = rho * STENCIL_STEP;
    grid.with_rho(rho + 2.0 * h)?
        .check_within(f.validity_radius())?;
    let n = grid.samples();
    // Immersion at the five stencil radii, per node.
    let samples: Vec<[(Complex64, f64); 5]> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<[(Complex64, f64); 5]> {
            let tau = grid.tau(i);
            let mut out = [(ZERO, 0.0); 5];
            for (slot, off) in out.iter_mut().zip([-2.0, -1.0, 0.0, 1.0, 2.0]) {
                let [a, b, c, d] = f.eval_polar(rho + off * h, tau);
                let p = point_from_entries(a, b, c, d)?;
                *slot = (p.zeta(), p.w());
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let zeta: Vec<Complex64> = samples.iter().map(|s| s[2].0).collect();
    let w: Vec<Complex64> = samples
        .iter()
        .map(|s| Complex64::new(s[2].1, 0.0))
        .collect();
    let dzeta_dtau = spectral_derivative(&zeta);
    let dw_dtau = spectral_derivative(&w);
    let integrand: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let s = &samples[i];
            let (zt, wt) = s[2];
            let dz_drho = (-s[4].0 + s[3].0 * 8.0 - s[1].0 * 8.0 + s[0].0) / (12.0 * h);
            let dw_drho = (-s[4].1 + 8.0 * s[3].1 - 8.0 * s[1].1 + s[0].1) / (12.0 * h);
            let (ya, yb) = k.vector_components(zt, wt);
            let (mut za, mut zb) = k.potential_components(zt, wt);
            if let Some(grad) = gauge {
                let (ga, gb) = grad(zt, wt);
                za += ga * (wt * wt);
                zb += gb * wt * wt;
            }
            let eta = metric_inner_unchecked(wt, dz_drho, dw_drho, ya, yb);
            let nu = metric_inner_unchecked(wt, dzeta_dtau[i], dw_dtau[i].re, za, zb);
            -rho * eta + 2.0 * nu
        })
        .collect();
    let value = pairwise_sum(&integrand) * (2.0 * PI / n as f64);
    log::debug!("flux_numeric rho={rho} samples={n} value={value}");
    Ok(value)
}

/// Derivative in `τ` of periodic samples on `[0, 2π)`, Nyquist mode dropped.
fn spectral_derivative(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    let mut planner = FftPlanner::<f64>::new();
    let mut buf = v.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    for (j, x) in buf.iter_mut().enumerate() {
        let freq = if j < n / 2 {
            j as f64
        } else if j == n / 2 {
            0.0
        } else {
            j as f64 - n as f64
        };
        *x *= Complex64::new(0.0, freq / n as f64);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bryant::transform_frame;
    use crate::ends::{
        canonical_catenoidal_frame, canonical_horospherical_frame, catenoid_cousin_frame,
        catenoidal_h0, horosphere_frame, CatenoidalEnd,
    };
    use crate::geometry::mobius_boundary;
    use crate::series::{GeneralizedSeries, DEFAULT_ORDER};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn geo(a: &str, b: &str) -> Geodesic {
        Geodesic::new(a.parse().unwrap(), b.parse().unwrap()).unwrap()
    }

    fn cat_h(mu: f64, e2: f64) -> GeneralizedSeries {
        let h0 = catenoidal_h0(mu);
        GeneralizedSeries::from_real(0.0, &[h0, 0.0, h0 * e2], DEFAULT_ORDER)
    }

    const T: KillingKind = KillingKind::Translation;
    const R: KillingKind = KillingKind::Rotation;

    #[test]
    fn canonical_catenoidal_triple() {
        let mu = 0.5;
        let z = c(0.3, 0.2);
        let f = canonical_catenoidal_frame(mu, &cat_h(mu, 0.05), z).unwrap();
        let t = flux_triple(&f).unwrap();
        let s = 1.0 - mu * mu;
        assert!((t.phi0 - 2.0 * PI * s * z).norm() < 1e-10);
        assert!((t.phi1 - c(-PI * s, 0.)).norm() < 1e-10);
        assert!(t.phi2.norm() < 1e-10);
    }

    #[test]
    fn horosphere_has_no_flux() {
        let f = horosphere_frame(DEFAULT_ORDER);
        assert_eq!(flux_triple(&f).unwrap(), FluxTriple::ZERO);
        let m = flux_matrix(&f).unwrap();
        assert_eq!(m.max_abs_diff(&FluxMatrix { m: [[ZERO; 2]; 2] }), 0.0);
    }

    #[test]
    fn canonical_horospherical_triple() {
        let h0 = 1.3;
        let h = GeneralizedSeries::from_real(0.0, &[h0, 2.0 * h0 * h0, 0.4], DEFAULT_ORDER);
        let t = flux_triple(&canonical_horospherical_frame(2, &h).unwrap()).unwrap();
        let q = 2.0 * h0;
        assert!((t.phi0 - c(-2.0 * PI * q * q, 0.)).norm() < 1e-9);
        assert!(t.phi1.norm() < 1e-10 && t.phi2.norm() < 1e-10);
    }

    #[test]
    fn matrix_matches_triple() {
        let f = canonical_catenoidal_frame(0.5, &cat_h(0.5, 0.0), ZERO).unwrap();
        let m = flux_matrix(&f).unwrap();
        let want = FluxMatrix {
            m: [[c(-3.0 / 16.0, 0.), ZERO], [ZERO, c(3.0 / 16.0, 0.)]],
        };
        assert!(m.max_abs_diff(&want) < 1e-12);
        assert!(m.trace().norm() < 1e-12);
    }

    #[test]
    fn matrix_covariance() {
        let f = canonical_catenoidal_frame(1.5, &cat_h(1.5, 0.1), c(0.4, -0.1)).unwrap();
        let p = IsometrySL2::new(c(1., 0.3), c(0.2, 0.), c(-0.5, 0.5), c(0.8, 0.)).unwrap();
        let lhs = flux_matrix(&transform_frame(&p, &f).unwrap()).unwrap();
        let rhs = flux_matrix(&f).unwrap().conjugate(&p);
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        // The other order of conjugation is not what the frames produce.
        let wrong = flux_matrix(&f).unwrap().conjugate(&p.inverse());
        assert!(lhs.max_abs_diff(&wrong) > 1e-3);
    }

    #[test]
    fn geodesic_examples() {
        let mu: f64 = 0.5;
        let s = 1.0 - mu * mu;
        let t = FluxTriple::new(ZERO, c(PI * (mu * mu - 1.0), 0.), ZERO);
        assert!((flux_for_geodesic(&t, &geo("0", "inf"), T) - PI * s).abs() < 1e-15);
        assert!((flux_for_geodesic(&t, &geo("2+i", "inf"), T) - PI * s).abs() < 1e-15);
        assert!(flux_for_geodesic(&t, &geo("1", "-1"), T).abs() < 1e-15);
        assert!(flux_for_geodesic(&t, &geo("0.5", "inf"), R).abs() < 1e-15);
        assert!((flux_for_geodesic(&t, &geo("inf", "0"), T) + PI * s).abs() < 1e-15);
    }

    #[test]
    fn catenoidal_closed_form_examples() {
        let (mu, inf, zero) = (0.5, ExtendedComplex::Infinity, ExtendedComplex::real(0.0));
        let s = PI * 0.75;
        let v = catenoidal_closed_form(mu, zero, inf, &geo("1", "-1"), T).unwrap();
        assert!(v.abs() < 1e-15);
        let b = ExtendedComplex::new(2.0, 1.0);
        let a = ExtendedComplex::new(-1.0, 0.5);
        let v = catenoidal_closed_form(mu, a, b, &geo("0.3", "2+i"), T).unwrap();
        assert!((v - s).abs() < 1e-14);
        let v = catenoidal_closed_form(mu, a, b, &geo("2+i", "0.3"), T).unwrap();
        assert!((v + s).abs() < 1e-14);
    }

    #[test]
    fn closed_forms_agree_with_polynomials() {
        let e = CatenoidalEnd::new(
            1.5,
            ExtendedComplex::new(0.2, 1.0),
            ExtendedComplex::new(-2.0, 0.0),
        )
        .unwrap();
        let poly = catenoidal_polynomial(e.sigma(), e.axis_from, e.boundary).unwrap();
        for g in [
            geo("0", "inf"),
            geo("inf", "1-i"),
            geo("3", "0.5i"),
            geo("-2", "1"),
        ] {
            for kind in [T, R] {
                let a = catenoidal_closed_form(e.mu, e.axis_from, e.boundary, &g, kind).unwrap();
                let b = poly.geodesic_flux(&g, kind);
                assert!((a - b).abs() < 1e-12, "{g:?} {kind}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn horospherical_examples() {
        let inf = ExtendedComplex::Infinity;
        for g in [geo("1", "-1"), geo("0", "inf"), geo("i", "2")] {
            assert_eq!(horospherical_closed_form(ZERO, inf, &g, T), 0.0);
        }
        let q = c(1.2, 0.3);
        let kappa = q * q;
        let v = horospherical_closed_form(kappa, inf, &geo("1", "-1"), T);
        assert!((v - (-PI * kappa).re).abs() < 1e-14);
        assert!(horospherical_closed_form(kappa, inf, &geo("0.7", "inf"), T).abs() < 1e-15);
        let b = ExtendedComplex::new(0.5, -1.0);
        let g = geo("2", "-i");
        let (cc, dd, bb) = (c(2., 0.), c(0., -1.), c(0.5, -1.));
        let direct = kappa * (cc - bb) * (dd - bb) / (cc - dd);
        assert!((horospherical_closed_form(kappa, b, &g, T) + 2.0 * PI * direct.re).abs() < 1e-13);
        assert!((horospherical_closed_form(kappa, b, &g, R) - 2.0 * PI * direct.im).abs() < 1e-13);
    }

    #[test]
    fn kappa_extraction_follows_the_boundary() {
        let h = GeneralizedSeries::from_real(0.0, &[1.0, 2.0], DEFAULT_ORDER);
        let f = canonical_horospherical_frame(2, &h).unwrap();
        let t = flux_triple(&f).unwrap();
        assert!((kappa_from_triple(&t, ExtendedComplex::Infinity) - 4.0).norm() < 1e-9);
        let p = IsometrySL2::new(c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)).unwrap();
        let moved = transform_frame(&p, &f).unwrap();
        let b = mobius_boundary(&p, ExtendedComplex::Infinity);
        let t2 = flux_triple(&moved).unwrap();
        let k2 = kappa_from_triple(&t2, b);
        let poly = horospherical_polynomial(k2, b);
        assert!(poly.add(&t2.polynomial().scale(c(-1., 0.))).is_zero(1e-9));
    }

    #[test]
    fn polynomial_roots() {
        let e = catenoidal_polynomial(
            0.75,
            ExtendedComplex::new(1., 1.),
            ExtendedComplex::new(-2., 0.),
        )
        .unwrap();
        let r = e.roots();
        assert!(r
            .iter()
            .any(|x| x.approx_eq(&ExtendedComplex::new(1., 1.), 1e-12)));
        assert!(r
            .iter()
            .any(|x| x.approx_eq(&ExtendedComplex::new(-2., 0.), 1e-12)));
        let e = catenoidal_polynomial(
            0.75,
            ExtendedComplex::new(1., 1.),
            ExtendedComplex::Infinity,
        )
        .unwrap();
        assert!(e.roots().contains(&ExtendedComplex::Infinity));
        let h = horospherical_polynomial(c(2., 0.), ExtendedComplex::new(0.5, 0.));
        let r = h.roots();
        assert!(r
            .iter()
            .all(|x| x.approx_eq(&ExtendedComplex::real(0.5), 1e-7)));
        assert_eq!(
            horospherical_polynomial(c(2., 0.), ExtendedComplex::Infinity).roots(),
            vec![ExtendedComplex::Infinity; 2]
        );
        assert!(FluxPolynomial::ZERO.roots().is_empty());
    }

    #[test]
    fn quadrature_on_the_cousin() {
        let f = catenoid_cousin_frame(0.5).unwrap();
        let grid = QuadratureGrid::new(0.1, 1024).unwrap();
        let t = flux_numeric(&f, &KillingField::new(T, geo("0", "inf")), &grid).unwrap();
        assert!((t - 0.75 * PI).abs() < 1e-6, "{t}");
        let r = flux_numeric(&f, &KillingField::new(R, geo("0", "inf")), &grid).unwrap();
        assert!(r.abs() < 1e-8, "{r}");
        let t2 = flux_numeric(
            &f,
            &KillingField::new(T, geo("0", "inf")),
            &grid.with_rho(0.05).unwrap(),
        )
        .unwrap();
        assert!((t - t2).abs() < 1e-6);
    }

    #[test]
    fn quadrature_matches_residues_for_mixed_geodesics() {
        let f = canonical_catenoidal_frame(0.5, &cat_h(0.5, 0.05), c(0.3, 0.2)).unwrap();
        let t = flux_triple(&f).unwrap();
        let grid = QuadratureGrid::new(0.1, 512).unwrap();
        for g in [
            geo("1", "-1"),
            geo("inf", "0.5+i"),
            geo("2i", "inf"),
            geo("-1+i", "3"),
        ] {
            for kind in [T, R] {
                let k = KillingField::new(kind, g);
                let num = flux_numeric(&f, &k, &grid).unwrap();
                let res = flux_for_geodesic(&t, &g, kind);
                assert!((num - res).abs() < 1e-5, "{g:?} {kind}: {num} vs {res}");
                let rev = flux_numeric(&f, &k.reversed(), &grid).unwrap();
                assert!((num + rev).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn quadrature_respects_the_validity_radius() {
        let f = catenoid_cousin_frame(0.5)
            .unwrap()
            .with_validity_radius(0.1)
            .unwrap();
        let grid = QuadratureGrid::new(0.1, 64).unwrap();
        let k = KillingField::new(T, geo("0", "inf"));
        assert!(matches!(
            flux_numeric(&f, &k, &grid),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn spectral_derivative_of_a_trig_polynomial() {
        let n = 32;
        let v: Vec<Complex64> = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                c((3.0 * t).sin(), (2.0 * t).cos())
            })
            .collect();
        let d = spectral_derivative(&v);
        for (i, x) in d.iter().enumerate() {
            let t = 2.0 * PI * i as f64 / n as f64;
            assert!((x - c(3.0 * (3.0 * t).cos(), -2.0 * (2.0 * t).sin())).norm() < 1e-12);
        }
    }

    #[test]
    fn json_shapes() {
        let t = FluxTriple::new(c(1., 2.), ZERO, c(0., -1.));
        let js = serde_json::to_string(&t).unwrap();
        assert_eq!(
            js,
            r#"{"phi0":[1.0,2.0],"phi1":[0.0,0.0],"phi2":[0.0,-1.0]}"#
        );
        assert_eq!(t.polynomial().triple(), t);
    }
}
