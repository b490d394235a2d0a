//! Killing fields of translations along and rotations about oriented
//! geodesics, and their potential fields.
//!
//! For a Killing field `Y`, the potential `Z` is a vector field whose dual
//! 1-form `β = ⟨Z, ·⟩` satisfies `dβ = i_Y α`, where
//! `α = w⁻³ du∧dv∧dw` is the volume form. It turns the volume term of the
//! flux into a boundary integral.
//!
//! For a geodesic with two finite endpoints `(𝒞, 𝒟)`, the closed forms are
//! written with `ζ₀ = 𝒞 − 𝒟` and `ζ₁ = 𝒟`. A geodesic that starts at `∞` is
//! the reversal of one that ends there, and its fields change sign.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ExtendedComplex, Geodesic, HPoint, TangentVector};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KillingKind {
    Translation,
    Rotation,
}

impl fmt::Display for KillingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KillingKind::Translation => "translation",
            KillingKind::Rotation => "rotation",
        })
    }
}

impl FromStr for KillingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "translation" => Ok(KillingKind::Translation),
            "rotation" => Ok(KillingKind::Rotation),
            _ => Err(Error::Parse(format!(
                "kind must be translation or rotation, got {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KillingField {
    pub kind: KillingKind,
    pub geodesic: Geodesic,
}

/// A sampled vector field value as `(horizontal, vertical)` components.
type Components = (Complex64, f64);

impl KillingField {
    pub fn new(kind: KillingKind, geodesic: Geodesic) -> Self {
        KillingField { kind, geodesic }
    }

    pub fn reversed(&self) -> Self {
        KillingField::new(self.kind, self.geodesic.reversed())
    }

    pub(crate) fn vector_components(&self, zeta: Complex64, w: f64) -> Components {
        self.dispatch(zeta, w, vector_finite, vector_to_infinity)
    }

    pub(crate) fn potential_components(&self, zeta: Complex64, w: f64) -> Components {
        self.dispatch(zeta, w, potential_finite, potential_to_infinity)
    }

    fn dispatch(
        &self,
        zeta: Complex64,
        w: f64,
        finite: fn(KillingKind, Complex64, Complex64, Complex64, f64) -> Components,
        to_inf: fn(KillingKind, Complex64, Complex64, f64) -> Components,
    ) -> Components {
        match (self.geodesic.from(), self.geodesic.to()) {
            // Evaluate in one fixed orientation so that reversal is an exact negation.
            (ExtendedComplex::Finite(c), ExtendedComplex::Finite(d)) => {
                if (c.re, c.im) <= (d.re, d.im) {
                    finite(self.kind, c - d, d, zeta, w)
                } else {
                    let (a, b) = finite(self.kind, d - c, c, zeta, w);
                    (-a, -b)
                }
            }
            (ExtendedComplex::Finite(c), ExtendedComplex::Infinity) => {
                to_inf(self.kind, c, zeta, w)
            }
            (ExtendedComplex::Infinity, ExtendedComplex::Finite(d)) => {
                let (a, b) = to_inf(self.kind, d, zeta, w);
                (-a, -b)
            }
            (ExtendedComplex::Infinity, ExtendedComplex::Infinity) => {
                unreachable!("geodesic endpoints are distinct")
            }
        }
    }

    pub fn vector_at(&self, p: &HPoint) -> TangentVector {
        let (a, b) = self.vector_components(p.zeta(), p.w());
        TangentVector::new(*p, a, b)
    }

    pub fn potential_at(&self, p: &HPoint) -> TangentVector {
        let (a, b) = self.potential_components(p.zeta(), p.w());
        TangentVector::new(*p, a, b)
    }
}

fn vector_finite(
    kind: KillingKind,
    z0: Complex64,
    z1: Complex64,
    zeta: Complex64,
    w: f64,
) -> Components {
    let e = zeta - z1;
    let w2 = w * w;
    match kind {
        KillingKind::Translation => (-w2 / z0.conj() + e * e / z0 - e, 2.0 * w * (e / z0).re - w),
        KillingKind::Rotation => (
            I * (w2 / z0.conj() + e * e / z0 - e),
            -2.0 * w * (e / z0).im,
        ),
    }
}

fn vector_to_infinity(kind: KillingKind, z1: Complex64, zeta: Complex64, w: f64) -> Components {
    let e = zeta - z1;
    match kind {
        KillingKind::Translation => (e, w),
        KillingKind::Rotation => (I * e, 0.0),
    }
}

fn potential_finite(
    kind: KillingKind,
    z0: Complex64,
    z1: Complex64,
    zeta: Complex64,
    w: f64,
) -> Components {
    let e = zeta - z1;
    let lw = w * w * w.ln() / z0.conj();
    match kind {
        KillingKind::Translation => (I * (lw + 0.5 * e * e / z0 - 0.5 * e), 0.0),
        KillingKind::Rotation => (lw - 0.5 * e * e / z0 + 0.5 * e, 0.0),
    }
}

fn potential_to_infinity(kind: KillingKind, z1: Complex64, zeta: Complex64, _w: f64) -> Components {
    let e = zeta - z1;
    match kind {
        KillingKind::Translation => (0.5 * I * e, 0.0),
        KillingKind::Rotation => (-0.5 * e, 0.0),
    }
}

pub fn killing_vector(k: &KillingField, p: &HPoint) -> TangentVector {
    k.vector_at(p)
}

pub fn killing_potential(k: &KillingField, p: &HPoint) -> TangentVector {
    k.potential_at(p)
}

/// Axis-aligned box `[lo, hi]` in `(u, v, w)` coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleBox {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl SampleBox {
    pub fn new(lo: [f64; 3], hi: [f64; 3]) -> Result<Self> {
        if lo[2] <= 0.0 || (0..3).any(|i| !(hi[i] > lo[i])) {
            return Err(Error::domain(
                "sample box lies strictly inside the half-space",
                format!("lo = {lo:?}, hi = {hi:?}"),
            ));
        }
        Ok(SampleBox { lo, hi })
    }

    pub fn cube(lo: f64, hi: f64) -> Result<Self> {
        SampleBox::new([lo; 3], [hi; 3])
    }
}

/// Maximum over `n³` cells of `|dβ − i_Y α|`, relative to `max |i_Y α|` on the box.
///
/// Derivatives of `β` are central differences of half-cell width at each cell
/// centre, so the defect decreases like `O(h²)`.
pub fn verify_potential(k: &KillingField, region: &SampleBox, n: usize) -> f64 {
    verify_potential_with(k, |zeta, w| k.potential_components(zeta, w), region, n)
}

/// As [`verify_potential`] with a caller-supplied potential `(ζ, w) ↦ Z`.
pub fn verify_potential_with<F>(k: &KillingField, potential: F, region: &SampleBox, n: usize) -> f64
where
    F: Fn(Complex64, f64) -> (Complex64, f64),
{
    let n = n.max(1);
    let h: Vec<f64> = (0..3)
        .map(|i| (region.hi[i] - region.lo[i]) / n as f64)
        .collect();
    // Components (P, Q, R) of β = P du + Q dv + R dw.
    let beta = |u: f64, v: f64, w: f64| -> [f64; 3] {
        let (a, b) = potential(Complex64::new(u, v), w);
        let iw2 = 1.0 / (w * w);
        [a.re * iw2, a.im * iw2, b * iw2]
    };
    let mut max_defect: f64 = 0.0;
    let mut max_form: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let u = region.lo[0] + (i as f64 + 0.5) * h[0];
                let v = region.lo[1] + (j as f64 + 0.5) * h[1];
                let w = region.lo[2] + (l as f64 + 0.5) * h[2];
                let (hu, hv, hw) = (h[0] / 2.0, h[1] / 2.0, h[2] / 2.0);
                let du = sub3(beta(u + hu, v, w), beta(u - hu, v, w), 2.0 * hu);
                let dv = sub3(beta(u, v + hv, w), beta(u, v - hv, w), 2.0 * hv);
                let dw = sub3(beta(u, v, w + hw), beta(u, v, w - hw), 2.0 * hw);
                let (ya, yb) = k.vector_components(Complex64::new(u, v), w);
                let iw3 = 1.0 / (w * w * w);
                // i_Y α = w⁻³ (Y_u dv∧dw − Y_v du∧dw + Y_w du∧dv)
                let form = [yb * iw3, -ya.im * iw3, ya.re * iw3];
                // dβ in the basis (du∧dv, du∧dw, dv∧dw)
                let d_beta = [du[1] - dv[0], du[2] - dw[0], dv[2] - dw[1]];
                let defect = ((d_beta[0] - form[0]).powi(2)
                    + (d_beta[1] - form[1]).powi(2)
                    + (d_beta[2] - form[2]).powi(2))
                .sqrt();
                let size = (form[0].powi(2) + form[1].powi(2) + form[2].powi(2)).sqrt();
                max_defect = max_defect.max(defect);
                max_form = max_form.max(size);
            }
        }
    }
    if max_form > 0.0 {
        max_defect / max_form
    } else {
        max_defect
    }
}

fn sub3(a: [f64; 3], b: [f64; 3], h: f64) -> [f64; 3] {
    [(a[0] - b[0]) / h, (a[1] - b[1]) / h, (a[2] - b[2]) / h]
}

/// Time-`t` flow of the field from `p`, by classical fourth-order Runge–Kutta.
pub fn flow(k: &KillingField, p: &HPoint, t: f64, steps: usize) -> Result<HPoint> {
    let steps = steps.max(1);
    let dt = t / steps as f64;
    let f = |z: Complex64, w: f64| k.vector_components(z, w);
    let (mut z, mut w) = (p.zeta(), p.w());
    for _ in 0..steps {
        let (a1, b1) = f(z, w);
        let (a2, b2) = f(z + a1 * (dt / 2.0), w + b1 * dt / 2.0);
        let (a3, b3) = f(z + a2 * (dt / 2.0), w + b2 * dt / 2.0);
        let (a4, b4) = f(z + a3 * dt, w + b3 * dt);
        z += (a1 + a2 * 2.0 + a3 * 2.0 + a4) * (dt / 6.0);
        w += (b1 + 2.0 * b2 + 2.0 * b3 + b4) * dt / 6.0;
    }
    HPoint::new(z, w)
}
