//! Construction of concrete ends and their descriptors.
//!
//! An end with Weierstrass data `g = z^μ`, `ω = ω̂ dz` is built from a basis
//! `(A, C)` of solutions of
//!
//! ```text
//! X'' − (ω̂'/ω̂) X' − g' ω̂ X = 0
//! ```
//!
//! found by the Frobenius method. The second column then follows from the
//! first-order system `F⁻¹ dF = (g, −g²; 1, −g) ω`:
//!
//! ```text
//! B = A'/ω̂ − g A,   D = C'/ω̂ − g C,
//! ```
//!
//! which makes `AD − BC` equal to the Wronskian `W(A, C)/ω̂`, a constant.
//!
//! * Catenoidal ends use `ω̂ = z^{−1−μ} h` with `h(0) = (1−μ²)/(4μ)` and `h'(0) = 0`.
//! * Horospherical ends use `ω̂ = z^{−2} h` with integer `μ ≥ 2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bryant::{BryantFrame, WeierstrassData, EXACT_RADIUS};
use crate::error::{Error, Result};
use crate::flux::{flux_triple, kappa_from_triple};
use crate::geometry::{standardizing_isometry, ExtendedComplex};
use crate::series::{GeneralizedSeries, DEFAULT_ORDER, OFFSET_TOL};

/// Resonance obstructions above this force a logarithmic term.
pub const OBSTRUCTION_TOL: f64 = 1e-9;

/// Tolerance on the prescribed values `h(0)` and `h'(0)`.
pub const DATA_TOL: f64 = 1e-10;

/// Tolerance of the post-construction coefficient identities.
pub const POST_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which kind of end a set of Weierstrass data describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndKind {
    Catenoidal,
    Horospherical,
    Horosphere,
}

/// A catenoidal end: growth `1 − μ` and oriented axis `(𝒜, ℬ)`, where `ℬ` is
/// the asymptotic boundary point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CatenoidalRepr", into = "CatenoidalRepr")]
pub struct CatenoidalEnd {
    pub mu: f64,
    pub axis_from: ExtendedComplex,
    pub boundary: ExtendedComplex,
}

#[derive(Serialize, Deserialize)]
struct CatenoidalRepr {
    mu: f64,
    axis: [ExtendedComplex; 2],
}

impl TryFrom<CatenoidalRepr> for CatenoidalEnd {
    type Error = Error;
    fn try_from(r: CatenoidalRepr) -> Result<Self> {
        CatenoidalEnd::new(r.mu, r.axis[0], r.axis[1])
    }
}

impl From<CatenoidalEnd> for CatenoidalRepr {
    fn from(e: CatenoidalEnd) -> Self {
        CatenoidalRepr {
            mu: e.mu,
            axis: [e.axis_from, e.boundary],
        }
    }
}

impl CatenoidalEnd {
    pub fn new(mu: f64, axis_from: ExtendedComplex, boundary: ExtendedComplex) -> Result<Self> {
        check_catenoidal_mu(mu)?;
        if axis_from.chordal_distance(&boundary) <= 1e-12 {
            return Err(Error::domain(
                "𝒜 ≠ ℬ",
                format!("axis endpoints coincide at {boundary}"),
            ));
        }
        Ok(CatenoidalEnd {
            mu,
            axis_from,
            boundary,
        })
    }

    pub fn growth(&self) -> f64 {
        1.0 - self.mu
    }

    /// `σ = 1 − μ²`, the scale of the flux polynomial.
    pub fn sigma(&self) -> f64 {
        1.0 - self.mu * self.mu
    }
}

/// A horospherical end with asymptotic boundary `ℬ` and flux coefficient `κ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorosphericalEnd {
    pub boundary: ExtendedComplex,
    #[serde(with = "crate::json::complex")]
    pub kappa: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum EndDescriptor {
    Catenoidal(CatenoidalEnd),
    Horospherical(HorosphericalEnd),
    Horosphere,
}

impl EndDescriptor {
    pub fn kind(&self) -> EndKind {
        match self {
            EndDescriptor::Catenoidal(_) => EndKind::Catenoidal,
            EndDescriptor::Horospherical(_) => EndKind::Horospherical,
            EndDescriptor::Horosphere => EndKind::Horosphere,
        }
    }

    /// Growth `1 − μ` for catenoidal ends.
    pub fn growth(&self) -> Option<f64> {
        match self {
            EndDescriptor::Catenoidal(e) => Some(e.growth()),
            _ => None,
        }
    }

    pub fn boundary(&self) -> Option<ExtendedComplex> {
        match self {
            EndDescriptor::Catenoidal(e) => Some(e.boundary),
            EndDescriptor::Horospherical(e) => Some(e.boundary),
            EndDescriptor::Horosphere => None,
        }
    }
}

fn check_catenoidal_mu(mu: f64) -> Result<()> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::domain("μ > 0", format!("μ = {mu}")));
    }
    if (mu - 1.0).abs() <= 1e-8 {
        return Err(Error::domain(
            "μ ≠ 1",
            format!("μ = {mu} has zero growth (horosphere limit)"),
        ));
    }
    Ok(())
}

/// Classifies admissible Weierstrass data by `μ + ν`.
pub fn classify_end(w: &WeierstrassData) -> Result<EndKind> {
    let (mu, nu) = (w.mu(), w.nu());
    match w.mu_plus_nu() {
        -1 => {
            check_catenoidal_mu(mu)?;
            Ok(EndKind::Catenoidal)
        }
        _ => {
            if (nu + 2.0).abs() > OFFSET_TOL {
                return Err(Error::domain("ν = −2 when μ + ν ≥ 0", format!("ν = {nu}")));
            }
            if (mu - mu.round()).abs() > OFFSET_TOL || mu.round() < 2.0 {
                return Err(Error::domain(
                    "μ ∈ ℕ, μ ≥ 2 when μ + ν ≥ 0",
                    format!("μ = {mu}"),
                ));
            }
            Ok(EndKind::Horospherical)
        }
    }
}

/// The equation `P₀ z² X'' − P₁ z X' − P₂ X = 0` with holomorphic
/// coefficients and `P₀(0) ≠ 0`.
///
/// `X'' − (q'/q) X' − V X = 0` with `q = z^e h` becomes `P₀ = h`,
/// `P₁ = e h + z h'`, `P₂ = z² V h`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusProblem {
    p0: Vec<Complex64>,
    p1: Vec<Complex64>,
    p2: Vec<Complex64>,
    roots: (f64, f64),
    resonance: Complex64,
}

impl FrobeniusProblem {
    /// `z² X'' − p z X' − r X = 0`. `p` and `r` must have offset 0; both are
    /// read up to the shorter order.
    pub fn new(p: &GeneralizedSeries, r: &GeneralizedSeries, resonance: Complex64) -> Result<Self> {
        let order = p.order().min(r.order());
        Self::with_leading(&GeneralizedSeries::constant(ONE, order), p, r, resonance)
    }

    /// `P₀ z² X'' − P₁ z X' − P₂ X = 0` with `P₀(0) ≠ 0`.
    pub fn with_leading(
        p0: &GeneralizedSeries,
        p1: &GeneralizedSeries,
        p2: &GeneralizedSeries,
        resonance: Complex64,
    ) -> Result<Self> {
        if p0.offset() != 0.0 || p1.offset() != 0.0 || p2.offset() != 0.0 {
            return Err(Error::domain(
                "ODE coefficients are holomorphic at 0",
                format!(
                    "offsets {}, {} and {}",
                    p0.offset(),
                    p1.offset(),
                    p2.offset()
                ),
            ));
        }
        let lead = p0.coeff(0);
        if lead.norm() == 0.0 {
            return Err(Error::domain("regular singular point at 0", "P₀(0) = 0"));
        }
        let order = p0.order().min(p1.order()).min(p2.order());
        let (pp, rr) = (p1.coeff(0) / lead, p2.coeff(0) / lead);
        let s = ONE + pp;
        let d = (s * s + 4.0 * rr).sqrt();
        let gap = d.re;
        if d.im.abs() > 1e-8
            || s.im.abs() > 1e-8
            || (gap - gap.round()).abs() > 1e-8
            || gap.round() < 1.0
        {
            return Err(Error::domain(
                "indicial roots are real and differ by a positive integer",
                format!("root difference {d}"),
            ));
        }
        let gap = gap.round();
        let lower = snap((s.re - gap) / 2.0);
        Ok(FrobeniusProblem {
            p0: p0.coeffs()[..=order].to_vec(),
            p1: p1.coeffs()[..=order].to_vec(),
            p2: p2.coeffs()[..=order].to_vec(),
            roots: (lower, lower + gap),
            resonance,
        })
    }

    /// `ω̂ = z^{−1−μ} h` (the `A`, `C` column of a catenoidal end).
    pub fn catenoidal(mu: f64, h: &GeneralizedSeries, resonance: Complex64) -> Result<Self> {
        Self::from_q(-1.0 - mu, h, h.scale_real(mu), resonance)
    }

    /// `g² ω̂ = z^{μ−1} h` (the `B`, `D` column of a catenoidal end).
    pub fn catenoidal_dual(mu: f64, h: &GeneralizedSeries, resonance: Complex64) -> Result<Self> {
        Self::from_q(mu - 1.0, h, h.scale_real(mu), resonance)
    }

    /// `ω̂ = z^{−2} h`, `g = z^μ` (the `A`, `C` column of a horospherical end).
    pub fn horospherical(mu: u32, h: &GeneralizedSeries, resonance: Complex64) -> Result<Self> {
        let r = h.scale_real(mu as f64).shift(mu as f64 - 1.0);
        Self::from_q(-2.0, h, shift_to_zero(&r, h.order()), resonance)
    }

    /// `g² ω̂ = z^{2μ−2} h` (the `B`, `D` column of a horospherical end).
    pub fn horospherical_dual(
        mu: u32,
        h: &GeneralizedSeries,
        resonance: Complex64,
    ) -> Result<Self> {
        let r = h.scale_real(mu as f64).shift(mu as f64 - 1.0);
        Self::from_q(
            2.0 * mu as f64 - 2.0,
            h,
            shift_to_zero(&r, h.order()),
            resonance,
        )
    }

    /// `X'' − (q'/q) X' − (r/z²) X = 0` for `q = z^e h`, multiplied through by
    /// `z² h` so that no power series of `1/h` is formed.
    fn from_q(
        e: f64,
        h: &GeneralizedSeries,
        r: GeneralizedSeries,
        resonance: Complex64,
    ) -> Result<Self> {
        check_h(h)?;
        let zh = GeneralizedSeries::new(
            0.0,
            h.coeffs()
                .iter()
                .enumerate()
                .map(|(k, a)| a * k as f64)
                .collect(),
        );
        let p1 = zh.add(&h.scale_real(e))?;
        Self::with_leading(h, &p1, &r.mul(h), resonance)
    }

    /// Indicial roots `(σ₁, σ₂)` with `σ₁ < σ₂`.
    pub fn roots(&self) -> (f64, f64) {
        self.roots
    }

    pub fn order(&self) -> usize {
        self.p0.len() - 1
    }

    /// Coefficient of `x_{m−j}` in the order-`m` equation, at exponent `s = σ + m − j`.
    fn term(&self, j: usize, s: f64) -> Complex64 {
        self.p0[j] * (s * (s - 1.0)) - self.p1[j] * s - self.p2[j]
    }

    /// Max coefficient of `P₀ z² X'' − P₁ z X' − P₂ X` relative to `z^{offset}`.
    pub fn residual(&self, x: &GeneralizedSeries) -> f64 {
        let k_max = self.order().min(x.order());
        let s = x.offset();
        (0..=k_max)
            .map(|m| {
                (0..=m)
                    .map(|j| self.term(j, s + (m - j) as f64) * x.coeff(m - j))
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }

    fn solve_root(&self, sigma: f64, resonance_at: Option<usize>) -> Result<GeneralizedSeries> {
        let k = self.order();
        let mut x = vec![ZERO; k + 1];
        x[0] = ONE;
        for m in 1..=k {
            let mut rhs = ZERO;
            let mut size: f64 = 0.0;
            for j in 1..=m {
                let t = self.term(j, sigma + (m - j) as f64) * x[m - j];
                rhs -= t;
                size = size.max(t.norm());
            }
            if resonance_at == Some(m) {
                if rhs.norm() > OBSTRUCTION_TOL * size.max(1.0) {
                    return Err(Error::LogTermRequired {
                        order: m,
                        obstruction: rhs.norm(),
                        constraint:
                            "resonance obstruction vanishes (h'(0) = 0 for catenoidal ends)",
                    });
                }
                x[m] = self.resonance;
            } else {
                x[m] = rhs / self.term(0, sigma + m as f64);
            }
        }
        Ok(GeneralizedSeries::new(sigma, x))
    }
}

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-8 {
        r
    } else {
        x
    }
}

/// Re-expresses a series with nonnegative integer offset at offset 0.
fn shift_to_zero(s: &GeneralizedSeries, order: usize) -> GeneralizedSeries {
    let n = s.offset().round() as usize;
    let mut v = vec![ZERO; n];
    v.extend_from_slice(s.coeffs());
    GeneralizedSeries::from_coeffs(0.0, &v, order)
}

fn check_h(h: &GeneralizedSeries) -> Result<()> {
    if h.offset() != 0.0 || h.coeff(0).norm() == 0.0 {
        return Err(Error::domain(
            "h(0) ≠ 0",
            "h must be holomorphic with h(0) ≠ 0",
        ));
    }
    Ok(())
}

/// Solutions at the two indicial roots, each with unit leading coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusBasis {
    /// Solution at `σ₂`.
    pub upper: GeneralizedSeries,
    /// Solution at `σ₁`, whose order-`(σ₂ − σ₁)` coefficient is the resonance parameter.
    pub lower: GeneralizedSeries,
}

pub fn frobenius_solve(p: &FrobeniusProblem) -> Result<FrobeniusBasis> {
    let (s1, s2) = p.roots;
    let gap = (s2 - s1).round() as usize;
    let upper = p.solve_root(s2, None)?;
    let lower = p.solve_root(s1, (gap <= p.order()).then_some(gap))?;
    Ok(FrobeniusBasis { upper, lower })
}

/// Recomputes a frame column pair `(X, Y)` from the first-order system
///
/// ```text
/// X' = ω̂ (g X + Y),   Y' = −g ω̂ (g X + Y),   ω̂ = z^e h,
/// ```
///
/// whose coefficients are polynomial in `h`. The second-order equation for `X`
/// alone divides by `h`; a zero of `h` near `0` is an apparent singularity for
/// it, and its forward recursion then amplifies rounding geometrically. The
/// seeds supply offsets, orders and the coefficients the system leaves free.
fn integrate_columns(
    x_seed: &GeneralizedSeries,
    y_seed: &GeneralizedSeries,
    h: &GeneralizedSeries,
    e: f64,
    mu: f64,
) -> Result<(GeneralizedSeries, GeneralizedSeries)> {
    let (xo, yo) = (x_seed.offset(), y_seed.offset());
    let order = x_seed.order().min(y_seed.order());
    let mut x: Vec<Complex64> = Vec::with_capacity(order + 1);
    let mut y: Vec<Complex64> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let (pu, pv) = (xo + n as f64, yo + n as f64);
        // Rows: [coef u, coef v, rhs] for the X' and Y' equations.
        let mut m = [[ZERO; 3]; 2];
        m[0][0] = Complex64::new(pu, 0.0);
        m[1][1] = Complex64::new(pv, 0.0);
        for (j, hj) in h.coeffs().iter().enumerate() {
            let jf = j as f64;
            let refs = [
                (0, 1.0, pu - 1.0 - e - mu - jf, true),
                (0, 1.0, pu - 1.0 - e - jf, false),
                (1, -1.0, pv - 1.0 - e - 2.0 * mu - jf, true),
                (1, -1.0, pv - 1.0 - e - mu - jf, false),
            ];
            for (row, sign, power, is_x) in refs {
                let (vals, off, col, cur) = if is_x {
                    (&x, xo, 0, pu)
                } else {
                    (&y, yo, 1, pv)
                };
                let coef = -sign * hj;
                let idx = (power - off).round();
                if (power - off - idx).abs() > OFFSET_TOL {
                    return Err(Error::domain(
                        "column offsets differ by μ modulo 1",
                        format!("power {power} against offset {off}"),
                    ));
                }
                if (power - cur).abs() <= OFFSET_TOL {
                    m[row][col] += coef;
                } else if power > cur {
                    return Err(Error::Consistency {
                        what: "first-order recursion is explicit below the current power",
                        defect: power - cur,
                    });
                } else if idx >= 0.0 {
                    m[row][2] -= coef * vals[idx as usize];
                }
            }
        }
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let scale = m[0][0]
            .norm()
            .max(m[1][1].norm())
            .max(m[0][1].norm())
            .max(m[1][0].norm());
        let (u, v) = if det.norm() > 1e-12 * scale.max(1.0).powi(2) {
            (
                (m[0][2] * m[1][1] - m[0][1] * m[1][2]) / det,
                (m[0][0] * m[1][2] - m[1][0] * m[0][2]) / det,
            )
        } else {
            // Resonant step: X keeps its seed, Y follows by least squares.
            let u = x_seed.coeff(n);
            let w = m[0][1].norm_sqr() + m[1][1].norm_sqr();
            let v = if w > 1e-24 {
                (m[0][1].conj() * (m[0][2] - m[0][0] * u)
                    + m[1][1].conj() * (m[1][2] - m[1][0] * u))
                    / w
            } else {
                y_seed.coeff(n)
            };
            (u, v)
        };
        x.push(u);
        y.push(v);
    }
    Ok((GeneralizedSeries::new(xo, x), GeneralizedSeries::new(yo, y)))
}

/// Second column from `B = A'/ω̂ − g A`, `D = C'/ω̂ − g C`, then both columns
/// refined by [`integrate_columns`].
#[allow(clippy::type_complexity)]
fn assemble_frame_columns(
    a: &GeneralizedSeries,
    c: &GeneralizedSeries,
    h: &GeneralizedSeries,
    e: f64,
    mu: f64,
) -> Result<[GeneralizedSeries; 4]> {
    let omega = h.shift(e);
    let g = GeneralizedSeries::monomial(mu, ONE, h.order());
    let b = a.differentiate().div(&omega)?.sub(&g.mul(a))?;
    let d = c.differentiate().div(&omega)?.sub(&g.mul(c))?;
    let (a, b) = integrate_columns(a, &b, h, e, mu)?;
    let (c, d) = integrate_columns(c, &d, h, e, mu)?;
    Ok([a, b, c, d])
}

/// Half the smallest advisory radius of the given series, or exact if none.
fn advisory_radius(parts: &[&GeneralizedSeries]) -> f64 {
    let est = parts
        .iter()
        .filter_map(|s| s.radius_estimate())
        .fold(f64::INFINITY, f64::min);
    if est.is_finite() {
        0.5 * est
    } else {
        EXACT_RADIUS
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The catenoid cousin with exact power entries.
pub fn catenoid_cousin_frame(mu: f64) -> Result<BryantFrame> {
    check_catenoidal_mu(mu)?;
    let k = DEFAULT_ORDER;
    let (l1, l2) = ((-1.0 - mu) / 2.0, (1.0 - mu) / 2.0);
    let (r1, r2) = ((mu - 1.0) / 2.0, (1.0 + mu) / 2.0);
    BryantFrame::new(
        GeneralizedSeries::monomial(l2, ONE, k),
        GeneralizedSeries::monomial(r2, real((mu - 1.0) / (mu + 1.0)), k),
        GeneralizedSeries::monomial(l1, real((mu * mu - 1.0) / (4.0 * mu)), k),
        GeneralizedSeries::monomial(r1, real((1.0 + mu).powi(2) / (4.0 * mu)), k),
        EXACT_RADIUS,
    )
}

/// The horosphere `w = 1`, frame `(1, 0; z⁻¹, 1)`.
pub fn horosphere_frame(order: usize) -> BryantFrame {
    BryantFrame::from_parts_unchecked(
        GeneralizedSeries::constant(ONE, order),
        GeneralizedSeries::zero(0.0, order),
        GeneralizedSeries::monomial(-1.0, ONE, order),
        GeneralizedSeries::constant(ONE, order),
        EXACT_RADIUS,
    )
}

/// `h(0) = (1 − μ²)/(4μ)` for a catenoidal end.
pub fn catenoidal_h0(mu: f64) -> f64 {
    (1.0 - mu * mu) / (4.0 * mu)
}

/// Canonical catenoidal end of axis `(𝒵, ∞)` for data `g = z^μ`, `ω = z^{−1−μ} h dz`.
///
/// The truncation order is that of `h`.
pub fn canonical_catenoidal_frame(
    mu: f64,
    h: &GeneralizedSeries,
    axis_param: Complex64,
) -> Result<BryantFrame> {
    check_catenoidal_mu(mu)?;
    check_h(h)?;
    let h0 = catenoidal_h0(mu);
    if (h.coeff(0) - h0).norm() > DATA_TOL {
        return Err(Error::domain(
            "h(0) = (1−μ²)/(4μ)",
            format!("h(0) = {} but (1−μ²)/(4μ) = {h0}", h.coeff(0)),
        ));
    }
    if h.coeff(1).norm() > DATA_TOL {
        return Err(Error::domain(
            "h'(0) = 0",
            format!("h'(0) = {}", h.coeff(1)),
        ));
    }
    let k = -h0;
    let problem = FrobeniusProblem::catenoidal(mu, h, axis_param / k)?;
    let basis = frobenius_solve(&problem)?;
    let [a, b, c, d] =
        assemble_frame_columns(&basis.upper, &basis.lower.scale(real(k)), h, -1.0 - mu, mu)?;
    let radius = advisory_radius(&[&basis.upper, &basis.lower]);
    BryantFrame::new(a, b, c, d, radius)
}

/// Canonical horospherical end of boundary `∞` for `g = z^μ`, `ω = z^{−2} h dz`.
pub fn canonical_horospherical_frame(mu: u32, h: &GeneralizedSeries) -> Result<BryantFrame> {
    if mu < 2 {
        return Err(Error::domain("μ ∈ ℕ, μ ≥ 2", format!("μ = {mu}")));
    }
    check_h(h)?;
    let h0 = h.coeff(0);
    let h1 = h.coeff(1);
    if mu == 2 {
        let want = 2.0 * h0 * h0;
        if (h1 - want).norm() > DATA_TOL * want.norm().max(1.0) {
            return Err(Error::domain(
                "h'(0) = 2h(0)² if μ = 2",
                format!("h'(0) = {h1}, 2h(0)² = {want}"),
            ));
        }
    } else if h1.norm() > DATA_TOL {
        return Err(Error::domain("h'(0) = 0 if μ ≥ 3", format!("h'(0) = {h1}")));
    }
    let c_const = -h0;
    let problem = FrobeniusProblem::horospherical(mu, h, ZERO)?;
    let basis = frobenius_solve(&problem)?;
    let [a, b, c, d] = assemble_frame_columns(
        &basis.upper,
        &basis.lower.scale(c_const),
        h,
        -2.0,
        mu as f64,
    )?;
    // B must be b z^{2μ−1} g₂ with nothing below that power.
    let lead = 2 * mu as usize - 1;
    let low = (0..lead)
        .map(|p| b.coeff_of_power(p as f64).norm())
        .fold(0.0, f64::max);
    if low > POST_TOL || b.coeff_of_power(lead as f64).norm() <= POST_TOL {
        return Err(Error::Consistency {
            what: "B = b z^{2μ−1} g₂ with b ≠ 0",
            defect: low,
        });
    }
    let f2p = a.coeff_of_power(1.0);
    let g1p = d.coeff_of_power(1.0);
    let d1 = (h1 + 2.0 * c_const * f2p).norm();
    let d2 = (f2p + g1p).norm();
    if d1 > POST_TOL {
        return Err(Error::Consistency {
            what: "h'(0) = −2c f₂'(0)",
            defect: d1,
        });
    }
    if d2 > POST_TOL {
        return Err(Error::Consistency {
            what: "f₂'(0) + g₁'(0) = 0",
            defect: d2,
        });
    }
    let radius = advisory_radius(&[&basis.upper, &basis.lower]);
    BryantFrame::new(a, b, c, d, radius)
}

/// Leading coefficients of the first column at powers `λ` and `λ + 1`, where
/// `λ` is the lowest power with a nonzero entry.
fn first_column_jet(f: &BryantFrame) -> ((Complex64, Complex64), (Complex64, Complex64)) {
    let (a, c) = (f.a(), f.c());
    let scale = a.max_abs().max(c.max_abs()).max(1e-300);
    let mut lam = a.offset().min(c.offset());
    let top = a.offset().max(c.offset()) + a.order().max(c.order()) as f64;
    while lam <= top
        && a.coeff_of_power(lam).norm() <= 1e-13 * scale
        && c.coeff_of_power(lam).norm() <= 1e-13 * scale
    {
        lam += 1.0;
    }
    (
        (c.coeff_of_power(lam), a.coeff_of_power(lam)),
        (c.coeff_of_power(lam + 1.0), a.coeff_of_power(lam + 1.0)),
    )
}

/// Asymptotic boundary point `ℬ = c(0)/a(0)`.
pub fn extract_boundary(f: &BryantFrame) -> Result<ExtendedComplex> {
    let ((c0, a0), _) = first_column_jet(f);
    ExtendedComplex::from_homogeneous(c0, a0)
        .ok_or_else(|| Error::Degenerate("first column vanishes identically".into()))
}

/// Axis `(𝒜, ℬ) = (c'(0)/a'(0), c(0)/a(0))` of a catenoidal frame written as
/// `A = z^λ a(z)`, `C = z^λ c(z)`.
pub fn extract_axis(f: &BryantFrame) -> Result<(ExtendedComplex, ExtendedComplex)> {
    let ((c0, a0), (c1, a1)) = first_column_jet(f);
    let b = ExtendedComplex::from_homogeneous(c0, a0)
        .ok_or_else(|| Error::Degenerate("first column vanishes identically".into()))?;
    let scale = c0.norm().max(a0.norm());
    if c1.norm() <= 1e-13 * scale && a1.norm() <= 1e-13 * scale {
        return Err(Error::Degenerate(
            "a'(0) = c'(0) = 0: the axis is undefined".into(),
        ));
    }
    let a = ExtendedComplex::from_homogeneous(c1, a1).expect("nonzero jet");
    Ok((a, b))
}

fn default_axis() -> [ExtendedComplex; 2] {
    [ExtendedComplex::real(0.0), ExtendedComplex::Infinity]
}

fn default_h0() -> Complex64 {
    ONE
}

/// JSON construction record for an end.
///
/// `h_perturbation` lists the coefficients `e₁, e₂, …` of
/// `h = h(0)(1 + e₁ z + e₂ z² + …)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum EndSpec {
    Catenoidal {
        mu: f64,
        #[serde(default = "default_axis")]
        axis: [ExtendedComplex; 2],
        #[serde(default, with = "crate::json::complex_vec")]
        h_perturbation: Vec<Complex64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        validity_radius: Option<f64>,
    },
    Horospherical {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mu: Option<u32>,
        #[serde(
            default = "default_h0",
            deserialize_with = "crate::json::complex_or_real",
            serialize_with = "crate::json::complex::serialize"
        )]
        h0: Complex64,
        #[serde(
            default,
            skip_serializing_if = "Option::is_none",
            with = "crate::json::complex_vec_opt"
        )]
        h_perturbation: Option<Vec<Complex64>>,
        #[serde(default = "infinity")]
        boundary: ExtendedComplex,
        /// Flux coefficient; when present, the descriptor uses it without building a frame.
        #[serde(
            default,
            skip_serializing_if = "Option::is_none",
            with = "crate::json::complex_opt"
        )]
        kappa: Option<Complex64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        validity_radius: Option<f64>,
    },
    Horosphere {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<usize>,
    },
}

fn infinity() -> ExtendedComplex {
    ExtendedComplex::Infinity
}

fn perturbed_h(h0: Complex64, e: &[Complex64], order: usize) -> GeneralizedSeries {
    let mut coeffs = vec![h0];
    coeffs.extend(e.iter().map(|x| h0 * x));
    GeneralizedSeries::from_coeffs(0.0, &coeffs, order)
}

impl EndSpec {
    pub fn order(&self) -> usize {
        match self {
            EndSpec::Catenoidal { order, .. }
            | EndSpec::Horospherical { order, .. }
            | EndSpec::Horosphere { order } => order.unwrap_or(DEFAULT_ORDER),
        }
    }

    /// Overrides the truncation order.
    pub fn with_order(mut self, k: usize) -> Self {
        match &mut self {
            EndSpec::Catenoidal { order, .. }
            | EndSpec::Horospherical { order, .. }
            | EndSpec::Horosphere { order } => *order = Some(k),
        }
        self
    }

    /// Builds a frame realizing the end, moved into position by an isometry.
    pub fn build_frame(&self) -> Result<BryantFrame> {
        let k = self.order();
        let frame = match self {
            EndSpec::Catenoidal {
                mu,
                axis,
                h_perturbation,
                validity_radius,
                ..
            } => {
                let end = CatenoidalEnd::new(*mu, axis[0], axis[1])?;
                let h = perturbed_h(real(catenoidal_h0(*mu)), h_perturbation, k);
                let f = match (end.axis_from, end.boundary) {
                    (ExtendedComplex::Finite(z), ExtendedComplex::Infinity) => {
                        canonical_catenoidal_frame(*mu, &h, z)?
                    }
                    (from, to) => {
                        let canon = canonical_catenoidal_frame(*mu, &h, ZERO)?;
                        let p = standardizing_isometry(from, to)?.inverse();
                        crate::bryant::transform_frame(&p, &canon)?
                    }
                };
                with_radius(f, *validity_radius)?
            }
            EndSpec::Horospherical {
                mu,
                h0,
                h_perturbation,
                boundary,
                validity_radius,
                ..
            } => {
                let mu = mu.unwrap_or(2);
                let e = match h_perturbation {
                    Some(e) => e.clone(),
                    None if mu == 2 => vec![2.0 * h0],
                    None => vec![],
                };
                let h = perturbed_h(*h0, &e, k);
                let canon = canonical_horospherical_frame(mu, &h)?;
                let f = match boundary {
                    ExtendedComplex::Infinity => canon,
                    ExtendedComplex::Finite(b) => {
                        let p = standardizing_isometry((b + 1.0).into(), *boundary)?.inverse();
                        crate::bryant::transform_frame(&p, &canon)?
                    }
                };
                with_radius(f, *validity_radius)?
            }
            EndSpec::Horosphere { .. } => horosphere_frame(k),
        };
        Ok(frame)
    }

    /// The end's descriptor; horospherical `κ` is read off the built frame
    /// unless given explicitly.
    pub fn descriptor(&self) -> Result<EndDescriptor> {
        match self {
            EndSpec::Catenoidal { mu, axis, .. } => Ok(EndDescriptor::Catenoidal(
                CatenoidalEnd::new(*mu, axis[0], axis[1])?,
            )),
            EndSpec::Horospherical {
                boundary, kappa, ..
            } => {
                let kappa = match kappa {
                    Some(k) => *k,
                    None => kappa_from_triple(&flux_triple(&self.build_frame()?)?, *boundary),
                };
                Ok(EndDescriptor::Horospherical(HorosphericalEnd {
                    boundary: *boundary,
                    kappa,
                }))
            }
            EndSpec::Horosphere { .. } => Ok(EndDescriptor::Horosphere),
        }
    }
}

fn with_radius(f: BryantFrame, r: Option<f64>) -> Result<BryantFrame> {
    match r {
        Some(r) => f.with_validity_radius(r),
        None => Ok(f),
    }
}
