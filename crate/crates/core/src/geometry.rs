//! Upper half-space model of hyperbolic space and its boundary sphere.
//!
//! Boundary points are [`ExtendedComplex`] values, with `∞` as an explicit
//! variant. Formulas that touch `∞` work in homogeneous coordinates
//! `(x, y)` with `ζ = x/y` and `∞ = (1, 0)`, so nothing ever divides by a
//! huge float.
//!
//! An [`IsometrySL2`] with entries `(α, β; γ, δ)` acts on points through the
//! Hermitian matrix `N ↦ P N P*` and on the boundary by
//! `ζ ↦ (δζ + γ)/(βζ + α)`. This is not the usual Möbius convention; see
//! [`IsometrySL2::from_mobius`] for the conversion.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative size below which a homogeneous denominator is treated as zero.
const INFINITY_REL_TOL: f64 = 1e-14;

/// A point of the Riemann sphere `ℂ ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    pub const INFINITY: ExtendedComplex = ExtendedComplex::Infinity;

    pub fn new(re: f64, im: f64) -> Self {
        ExtendedComplex::Finite(Complex64::new(re, im))
    }

    pub fn real(x: f64) -> Self {
        ExtendedComplex::Finite(Complex64::new(x, 0.0))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            ExtendedComplex::Finite(z) => Some(z),
            ExtendedComplex::Infinity => None,
        }
    }

    /// Normalized homogeneous coordinates: `(z, 1)` or `(1, 0)`.
    pub fn homogeneous(&self) -> (Complex64, Complex64) {
        match *self {
            ExtendedComplex::Finite(z) => (z, ONE),
            ExtendedComplex::Infinity => (ONE, ZERO),
        }
    }

    /// Inverse of [`homogeneous`](Self::homogeneous); `None` for `(0, 0)`.
    pub fn from_homogeneous(x: Complex64, y: Complex64) -> Option<Self> {
        if x.norm() == 0.0 && y.norm() == 0.0 {
            return None;
        }
        if y.norm() <= INFINITY_REL_TOL * x.norm() {
            Some(ExtendedComplex::Infinity)
        } else {
            Some(ExtendedComplex::Finite(x / y))
        }
    }

    /// Tag equality plus an absolute component tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (ExtendedComplex::Infinity, ExtendedComplex::Infinity) => true,
            (ExtendedComplex::Finite(a), ExtendedComplex::Finite(b)) => (a - b).norm() <= tol,
            _ => false,
        }
    }

    /// Spherical (chordal) distance, bounded by 2; useful near `∞`.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        let (x1, y1) = self.homogeneous();
        let (x2, y2) = other.homogeneous();
        let n1 = (x1.norm_sqr() + y1.norm_sqr()).sqrt();
        let n2 = (x2.norm_sqr() + y2.norm_sqr()).sqrt();
        2.0 * (x1 * y2 - x2 * y1).norm() / (n1 * n2)
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        ExtendedComplex::Finite(z)
    }
}

impl From<f64> for ExtendedComplex {
    fn from(x: f64) -> Self {
        ExtendedComplex::real(x)
    }
}

impl fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedComplex::Finite(z) => write!(f, "{z}"),
            ExtendedComplex::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for ExtendedComplex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => return Ok(ExtendedComplex::Infinity),
            "i" | "+i" => return Ok(ExtendedComplex::new(0.0, 1.0)),
            "-i" => return Ok(ExtendedComplex::new(0.0, -1.0)),
            _ => {}
        }
        let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
        Complex64::from_str(&compact)
            .map(ExtendedComplex::Finite)
            .map_err(|e| Error::Parse(format!("invalid boundary point {s:?}: {e}")))
    }
}

impl Serialize for ExtendedComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedComplex::Finite(z) => [z.re, z.im].serialize(s),
            ExtendedComplex::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Pair([f64; 2]),
            Real(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Pair([re, im]) => Ok(ExtendedComplex::new(re, im)),
            Repr::Real(x) => Ok(ExtendedComplex::real(x)),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A point `(ζ, w)` of the upper half-space, `w > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint {
    zeta: Complex64,
    w: f64,
}

impl HPoint {
    pub fn new(zeta: Complex64, w: f64) -> Result<Self> {
        if !(w > 0.0) || !w.is_finite() || !zeta.re.is_finite() || !zeta.im.is_finite() {
            return Err(Error::domain(
                "w > 0",
                format!("invalid half-space point ({zeta}, {w})"),
            ));
        }
        Ok(HPoint { zeta, w })
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    /// Hermitian matrix `[[1/w, ζ̄/w], [ζ/w, (|ζ|²+w²)/w]]` of unit determinant.
    pub fn hermitian(&self) -> [[Complex64; 2]; 2] {
        let iw = 1.0 / self.w;
        [
            [Complex64::new(iw, 0.0), self.zeta.conj() * iw],
            [
                self.zeta * iw,
                Complex64::new((self.zeta.norm_sqr() + self.w * self.w) * iw, 0.0),
            ],
        ]
    }

    /// Inverse of [`hermitian`](Self::hermitian), up to positive rescaling of `n`.
    pub fn from_hermitian(n: &[[Complex64; 2]; 2]) -> Result<Self> {
        let n11 = n[0][0].re;
        if !(n11 > 0.0) {
            return Err(Error::domain(
                "Hermitian point matrix is positive definite",
                format!("N11 = {n11}"),
            ));
        }
        let det = (n[0][0] * n[1][1] - n[0][1] * n[1][0]).re;
        if !(det > 0.0) {
            return Err(Error::domain(
                "Hermitian point matrix is positive definite",
                format!("det N = {det}"),
            ));
        }
        let w = det.sqrt() / n11;
        HPoint::new(n[1][0] / n11, w)
    }
}

/// Hyperbolic distance.
pub fn distance(p: &HPoint, q: &HPoint) -> f64 {
    let dz = (p.zeta - q.zeta).norm_sqr();
    let dw = p.w - q.w;
    let x = (dz + dw * dw) / (2.0 * p.w * q.w);
    // acosh(1 + x) written to stay accurate for small x.
    (x + (x * (x + 2.0)).sqrt()).ln_1p()
}

/// A tangent vector `(α, β)` at `base`: horizontal part `α`, vertical part `β`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVector {
    pub base: HPoint,
    pub alpha: Complex64,
    pub beta: f64,
}

impl TangentVector {
    pub fn new(base: HPoint, alpha: Complex64, beta: f64) -> Self {
        TangentVector { base, alpha, beta }
    }

    pub fn scale(&self, s: f64) -> Self {
        TangentVector::new(self.base, self.alpha * s, self.beta * s)
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }
}

/// The metric `(Re(ᾱ₁α₂) + β₁β₂)/w²`.
pub fn metric_inner(x1: &TangentVector, x2: &TangentVector) -> Result<f64> {
    let (p, q) = (x1.base, x2.base);
    if (p.zeta - q.zeta).norm() > 1e-12 * (1.0 + p.zeta.norm()) || (p.w - q.w).abs() > 1e-12 * p.w {
        return Err(Error::domain(
            "tangent vectors share a base point",
            format!("bases ({}, {}) and ({}, {})", p.zeta, p.w, q.zeta, q.w),
        ));
    }
    Ok(metric_inner_unchecked(
        p.w, x1.alpha, x1.beta, x2.alpha, x2.beta,
    ))
}

#[inline]
pub(crate) fn metric_inner_unchecked(
    w: f64,
    a1: Complex64,
    b1: f64,
    a2: Complex64,
    b2: f64,
) -> f64 {
    ((a1.conj() * a2).re + b1 * b2) / (w * w)
}

/// An oriented geodesic between two distinct boundary points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "(ExtendedComplex, ExtendedComplex)",
    into = "(ExtendedComplex, ExtendedComplex)"
)]
pub struct Geodesic {
    from: ExtendedComplex,
    to: ExtendedComplex,
}

impl Geodesic {
    pub fn new(from: ExtendedComplex, to: ExtendedComplex) -> Result<Self> {
        if from.chordal_distance(&to) <= 1e-12 {
            return Err(Error::domain(
                "geodesic endpoints are distinct",
                format!("from = to = {from}"),
            ));
        }
        Ok(Geodesic { from, to })
    }

    pub fn from(&self) -> ExtendedComplex {
        self.from
    }

    pub fn to(&self) -> ExtendedComplex {
        self.to
    }

    pub fn reversed(&self) -> Self {
        Geodesic {
            from: self.to,
            to: self.from,
        }
    }
}

impl TryFrom<(ExtendedComplex, ExtendedComplex)> for Geodesic {
    type Error = Error;
    fn try_from((a, b): (ExtendedComplex, ExtendedComplex)) -> Result<Self> {
        Geodesic::new(a, b)
    }
}

impl From<Geodesic> for (ExtendedComplex, ExtendedComplex) {
    fn from(g: Geodesic) -> Self {
        (g.from, g.to)
    }
}

impl FromStr for Geodesic {
    type Err = Error;

    /// Parses `"c,d"`, e.g. `"0,inf"` or `"1+2i,-1"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(',');
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse(format!("geodesic must be \"c,d\", got {s:?}")));
        };
        Geodesic::new(a.parse()?, b.parse()?)
    }
}

/// A unit-determinant matrix `P = (α β; γ δ)` acting as a direct isometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsometrySL2 {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
}

impl IsometrySL2 {
    pub const IDENTITY: IsometrySL2 = IsometrySL2 {
        alpha: ONE,
        beta: ZERO,
        gamma: ZERO,
        delta: ONE,
    };

    /// Builds `P`, rescaling by a square root of the determinant.
    pub fn new(
        alpha: Complex64,
        beta: Complex64,
        gamma: Complex64,
        delta: Complex64,
    ) -> Result<Self> {
        let det = alpha * delta - beta * gamma;
        let scale = alpha
            .norm()
            .max(beta.norm())
            .max(gamma.norm())
            .max(delta.norm());
        if !(det.norm() > 1e-12 * scale * scale) || !det.re.is_finite() || !det.im.is_finite() {
            return Err(Error::domain(
                "αδ − βγ ≠ 0",
                format!("singular matrix, determinant {det}"),
            ));
        }
        let s = det.sqrt();
        Ok(IsometrySL2 {
            alpha: alpha / s,
            beta: beta / s,
            gamma: gamma / s,
            delta: delta / s,
        })
    }

    /// Converts the usual Möbius map `ζ ↦ (aζ + b)/(cζ + d)`.
    pub fn from_mobius(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        IsometrySL2::new(d, c, b, a)
    }

    /// The dilation `ζ ↦ e^t ζ`, i.e. translation by `t` along `(0, ∞)`.
    pub fn dilation(t: f64) -> Self {
        IsometrySL2 {
            alpha: Complex64::new((-t / 2.0).exp(), 0.0),
            beta: ZERO,
            gamma: ZERO,
            delta: Complex64::new((t / 2.0).exp(), 0.0),
        }
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.alpha, self.beta], [self.gamma, self.delta]]
    }

    pub fn det(&self) -> Complex64 {
        self.alpha * self.delta - self.beta * self.gamma
    }

    pub fn inverse(&self) -> Self {
        IsometrySL2 {
            alpha: self.delta,
            beta: -self.beta,
            gamma: -self.gamma,
            delta: self.alpha,
        }
    }

    /// Matrix product `self · other`; acts as "apply `other`, then `self`".
    pub fn compose(&self, other: &Self) -> Self {
        let a = self.matrix();
        let b = other.matrix();
        let m = mat_mul(&a, &b);
        IsometrySL2 {
            alpha: m[0][0],
            beta: m[0][1],
            gamma: m[1][0],
            delta: m[1][1],
        }
    }

    /// The isometry whose boundary map sends `src[i]` to `dst[i]`.
    pub fn from_three_points(src: [ExtendedComplex; 3], dst: [ExtendedComplex; 3]) -> Result<Self> {
        let s = normalizing_mobius(src)?;
        let t = normalizing_mobius(dst)?;
        let m = mat_mul(&adjugate(&t), &s);
        IsometrySL2::from_mobius(m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// Usual-convention Möbius matrix sending `(p1, p2, p3)` to `(0, ∞, 1)`.
fn normalizing_mobius(p: [ExtendedComplex; 3]) -> Result<[[Complex64; 2]; 2]> {
    let h: Vec<_> = p.iter().map(|z| z.homogeneous()).collect();
    let br = |i: usize, j: usize| h[i].0 * h[j].1 - h[j].0 * h[i].1;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if br(i, j).norm() <= 1e-12 {
            return Err(Error::domain(
                "three distinct boundary points",
                format!("{} and {} coincide", p[i], p[j]),
            ));
        }
    }
    let k32 = br(2, 1);
    let k31 = br(2, 0);
    let (x1, y1) = h[0];
    let (x2, y2) = h[1];
    Ok([[k32 * y1, -k32 * x1], [k31 * y2, -k31 * x2]])
}

fn mat_mul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

fn adjugate(m: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
}

/// Boundary action `ζ ↦ (δζ + γ)/(βζ + α)`.
pub fn mobius_boundary(p: &IsometrySL2, z: ExtendedComplex) -> ExtendedComplex {
    let (x, y) = z.homogeneous();
    let nx = p.delta * x + p.gamma * y;
    let ny = p.beta * x + p.alpha * y;
    // A unit-determinant map never sends a nonzero vector to zero.
    ExtendedComplex::from_homogeneous(nx, ny).unwrap_or(ExtendedComplex::Infinity)
}

/// Action on points through `N ↦ P N P*`.
pub fn apply_isometry(p: &IsometrySL2, q: &HPoint) -> HPoint {
    let n = q.hermitian();
    let m = p.matrix();
    let mn = mat_mul(&m, &n);
    let m_star = [
        [m[0][0].conj(), m[1][0].conj()],
        [m[0][1].conj(), m[1][1].conj()],
    ];
    let out = mat_mul(&mn, &m_star);
    // N' is positive definite with unit determinant.
    let n11 = out[0][0].re;
    let w = 1.0 / n11;
    HPoint {
        zeta: out[1][0] * w,
        w,
    }
}

/// Pushforward of a tangent vector under `P`, by differentiating the point map.
pub fn push_forward(p: &IsometrySL2, v: &TangentVector) -> TangentVector {
    // The point map is real-analytic; a centered difference with a relative step
    // is accurate to ~1e-10, which is all the equivariance checks need.
    let b = v.base;
    let eps = 1e-5 * b.w;
    let fwd = apply_isometry(
        p,
        &HPoint {
            zeta: b.zeta + v.alpha * eps,
            w: b.w + v.beta * eps,
        },
    );
    let bwd = apply_isometry(
        p,
        &HPoint {
            zeta: b.zeta - v.alpha * eps,
            w: b.w - v.beta * eps,
        },
    );
    TangentVector::new(
        apply_isometry(p, &b),
        (fwd.zeta - bwd.zeta) / (2.0 * eps),
        (fwd.w - bwd.w) / (2.0 * eps),
    )
}

/// Cross-ratio `(z₁,z₂,z₃,z₄) = (z₃−z₁)/(z₃−z₂) · (z₄−z₂)/(z₄−z₁)`.
///
/// Under the preconditions `z₁ ≠ z₄` and `z₂ ≠ z₃` the value is always finite,
/// so it is returned as a plain complex number.
pub fn cross_ratio(
    z1: ExtendedComplex,
    z2: ExtendedComplex,
    z3: ExtendedComplex,
    z4: ExtendedComplex,
) -> Result<Complex64> {
    let h = [
        z1.homogeneous(),
        z2.homogeneous(),
        z3.homogeneous(),
        z4.homogeneous(),
    ];
    let br = |i: usize, j: usize| h[i].0 * h[j].1 - h[j].0 * h[i].1;
    let d32 = br(2, 1);
    let d41 = br(3, 0);
    if d32.norm() <= 1e-300 {
        return Err(Error::domain("z2 ≠ z3", format!("z2 = z3 = {z2}")));
    }
    if d41.norm() <= 1e-300 {
        return Err(Error::domain("z1 ≠ z4", format!("z1 = z4 = {z1}")));
    }
    Ok(br(2, 0) * br(3, 1) / (d32 * d41))
}

/// An isometry sending `a` to `0` and `b` to `∞` on the boundary.
pub fn standardizing_isometry(a: ExtendedComplex, b: ExtendedComplex) -> Result<IsometrySL2> {
    let (xa, ya) = a.homogeneous();
    let (xb, yb) = b.homogeneous();
    if (xb * ya - yb * xa).norm() <= 1e-12 {
        return Err(Error::domain("a ≠ b", format!("a = b = {a}")));
    }
    IsometrySL2::new(xb, -yb, -xa, ya)
}
