//! Balancing of surfaces with several ends.
//!
//! The flux polynomials of the ends of a complete surface sum to zero. For two
//! and three catenoidal ends this pins down the axes; the Euclidean analogue
//! for minimal surfaces is the force and torque balance of the end axes.

use serde::{Deserialize, Serialize};

use crate::ends::{CatenoidalEnd, EndDescriptor};
use crate::error::{Error, Result};
use crate::flux::{catenoidal_polynomial, end_polynomial, FluxPolynomial};
use crate::geometry::{mobius_boundary, ExtendedComplex, Geodesic, IsometrySL2};

/// Polynomial sums below this are treated as zero.
pub const BALANCE_TOL: f64 = 1e-10;

/// Relative tolerance of the concurrency test.
pub const CONCURRENCY_TOL: f64 = 1e-9;

/// Tolerance on the Euclidean force and torque sums.
pub const EUCLIDEAN_TOL: f64 = 1e-8;

/// Matching tolerance for boundary points.
const POINT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProblemRepr", into = "ProblemRepr")]
pub struct BalanceProblem {
    ends: Vec<EndDescriptor>,
}

#[derive(Serialize, Deserialize)]
struct ProblemRepr {
    ends: Vec<EndDescriptor>,
}

impl TryFrom<ProblemRepr> for BalanceProblem {
    type Error = Error;
    fn try_from(r: ProblemRepr) -> Result<Self> {
        BalanceProblem::new(r.ends)
    }
}

impl From<BalanceProblem> for ProblemRepr {
    fn from(p: BalanceProblem) -> Self {
        ProblemRepr { ends: p.ends }
    }
}

impl BalanceProblem {
    pub fn new(ends: Vec<EndDescriptor>) -> Result<Self> {
        if ends.len() < 2 {
            return Err(Error::domain(
                "at least two ends",
                format!("{} end(s) given", ends.len()),
            ));
        }
        Ok(BalanceProblem { ends })
    }

    pub fn ends(&self) -> &[EndDescriptor] {
        &self.ends
    }
}

pub fn polynomial_sum(p: &BalanceProblem) -> Result<FluxPolynomial> {
    p.ends.iter().try_fold(FluxPolynomial::ZERO, |acc, e| {
        Ok(acc.add(&end_polynomial(e)?))
    })
}

/// Fails with [`Error::Unbalanceable`] unless the polynomial sum vanishes.
pub fn check_balanced(p: &BalanceProblem) -> Result<()> {
    let s = polynomial_sum(p)?;
    if s.is_zero(BALANCE_TOL) {
        Ok(())
    } else {
        Err(Error::Unbalanceable(format!(
            "flux polynomials sum to a nonzero polynomial (largest coefficient {:.3e})",
            s.max_abs()
        )))
    }
}

/// The second end of a balanced two-ended surface with boundaries `ℬ₁` and
/// `b2`. It exists only when `b2 = 𝒜₁`, and is then `(μ₁, ℬ₁, 𝒜₁)`.
pub fn two_end_solve(e1: &CatenoidalEnd, b2: ExtendedComplex) -> Result<CatenoidalEnd> {
    if b2.approx_eq(&e1.boundary, POINT_TOL) {
        return Err(Error::domain(
            "distinct asymptotic boundaries",
            format!("both ends have boundary {b2}"),
        ));
    }
    if !b2.approx_eq(&e1.axis_from, POINT_TOL) {
        return Err(Error::Unbalanceable(format!(
            "a second end at {b2} must sit at the first axis endpoint {}",
            e1.axis_from
        )));
    }
    CatenoidalEnd::new(e1.mu, e1.boundary, e1.axis_from)
}

/// Axis start points `𝒜ⱼ` of three balanced catenoidal ends with boundaries
/// `(−1, 0, 1)` and `σⱼ = 1 − μⱼ²`.
pub fn three_end_axes(sigma: [f64; 3]) -> Result<[ExtendedComplex; 3]> {
    if let Some(j) = sigma.iter().position(|s| !s.is_finite() || *s == 0.0) {
        return Err(Error::domain(
            "σⱼ ≠ 0",
            format!("σ{} = {}", j + 1, sigma[j]),
        ));
    }
    let [s1, s2, s3] = sigma;
    let scale = s1.abs().max(s2.abs()).max(s3.abs());
    let ratio = |num: f64, den: f64| {
        if den.abs() <= 1e-14 * scale {
            ExtendedComplex::Infinity
        } else {
            ExtendedComplex::real(num / den)
        }
    };
    Ok([
        ratio(s1 - s2 + s3, 3.0 * s1 + s2 - s3),
        ratio(s2, s3 - s1),
        ratio(s1 - s2 + s3, s1 - s2 - 3.0 * s3),
    ])
}

/// [`three_end_axes`] for arbitrary distinct boundaries, by transport through
/// the Möbius map sending them to `(−1, 0, 1)`.
pub fn three_end_axes_with_boundaries(
    sigma: [f64; 3],
    boundaries: [ExtendedComplex; 3],
) -> Result<[ExtendedComplex; 3]> {
    let chart = [-1.0, 0.0, 1.0].map(ExtendedComplex::real);
    let to_chart = IsometrySL2::from_three_points(boundaries, chart)?;
    let back = to_chart.inverse();
    Ok(three_end_axes(sigma)?.map(|a| mobius_boundary(&back, a)))
}

/// Closed-form flux polynomial sum of three ends given by `σⱼ`, axes and
/// boundaries. Unlike [`polynomial_sum`] this accepts `σ < 0` without a
/// corresponding `μ`.
pub fn sigma_polynomial_sum(
    sigma: [f64; 3],
    axes: [ExtendedComplex; 3],
    boundaries: [ExtendedComplex; 3],
) -> Result<FluxPolynomial> {
    (0..3).try_fold(FluxPolynomial::ZERO, |acc, j| {
        Ok(acc.add(&catenoidal_polynomial(sigma[j], axes[j], boundaries[j])?))
    })
}

/// Outcome of intersecting three coplanar geodesics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Concurrency {
    Interior { u: f64, w: f64 },
    Boundary { point: ExtendedComplex },
    NotConcurrent,
}

/// A geodesic in the vertical plane over the real axis, as the curve
/// `k(u² + w²) + l u + m = 0`.
#[derive(Clone, Copy, Debug)]
struct PlaneCurve {
    k: f64,
    l: f64,
    m: f64,
}

impl PlaneCurve {
    fn from_geodesic(g: &Geodesic) -> Result<Self> {
        let real = |z: ExtendedComplex| -> Result<Option<f64>> {
            match z {
                ExtendedComplex::Infinity => Ok(None),
                ExtendedComplex::Finite(c) if c.im.abs() <= 1e-12 * c.re.abs().max(1.0) => {
                    Ok(Some(c.re))
                }
                ExtendedComplex::Finite(_) => Err(Error::domain(
                    "real geodesic endpoints",
                    format!("endpoint {z} is not real"),
                )),
            }
        };
        Ok(match (real(g.from())?, real(g.to())?) {
            (Some(a), Some(b)) => PlaneCurve {
                k: 1.0,
                l: -(a + b),
                m: a * b,
            },
            (Some(a), None) | (None, Some(a)) => PlaneCurve {
                k: 0.0,
                l: 1.0,
                m: -a,
            },
            (None, None) => unreachable!("geodesic endpoints are distinct"),
        })
    }

    fn is_line(&self) -> bool {
        self.k == 0.0
    }

    /// Relative residual of the curve equation at `(u, w)`.
    fn residual(&self, u: f64, w: f64) -> f64 {
        let r2 = u * u + w * w;
        let val = self.k * r2 + self.l * u + self.m;
        let scale = (self.k * r2).abs() + (self.l * u).abs() + self.m.abs();
        val.abs() / scale.max(1.0)
    }

    fn same_as(&self, o: &Self) -> bool {
        self.k == o.k && (self.l - o.l).abs() <= POINT_TOL && (self.m - o.m).abs() <= POINT_TOL
    }
}

/// Intersection of two distinct curves: `Ok(None)` if they do not meet.
fn intersect(c1: &PlaneCurve, c2: &PlaneCurve) -> Option<Concurrency> {
    if c1.is_line() && c2.is_line() {
        // Distinct vertical lines meet only at ∞.
        return Some(Concurrency::Boundary {
            point: ExtendedComplex::Infinity,
        });
    }
    let (circle, other) = if c1.is_line() { (c2, c1) } else { (c1, c2) };
    // Subtracting the equations leaves a linear equation in u.
    let (dl, dm) = if other.is_line() {
        (other.l, other.m)
    } else {
        (circle.l - other.l, circle.m - other.m)
    };
    if dl.abs() <= 1e-15 {
        return None;
    }
    let u = -dm / dl;
    let w2 = -(u * u + circle.l * u + circle.m);
    let scale = (u * u).max(circle.m.abs()).max(1.0);
    if w2 < -CONCURRENCY_TOL * scale {
        None
    } else if w2 <= CONCURRENCY_TOL * scale {
        Some(Concurrency::Boundary {
            point: ExtendedComplex::real(u),
        })
    } else {
        Some(Concurrency::Interior { u, w: w2.sqrt() })
    }
}

/// Common point of three geodesics whose endpoints are real or `∞`.
pub fn concurrency_check(axes: &[Geodesic; 3]) -> Result<Concurrency> {
    let curves = [
        PlaneCurve::from_geodesic(&axes[0])?,
        PlaneCurve::from_geodesic(&axes[1])?,
        PlaneCurve::from_geodesic(&axes[2])?,
    ];
    let pair = [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
        .into_iter()
        .find(|&(i, j, _)| !curves[i].same_as(&curves[j]));
    let Some((i, j, rest)) = pair else {
        return Err(Error::Degenerate("all three axes coincide".into()));
    };
    let Some(cand) = intersect(&curves[i], &curves[j]) else {
        return Ok(Concurrency::NotConcurrent);
    };
    let third = &curves[rest];
    let on_third = match cand {
        Concurrency::Interior { u, w } => third.residual(u, w) <= CONCURRENCY_TOL,
        Concurrency::Boundary {
            point: ExtendedComplex::Infinity,
        } => third.is_line(),
        Concurrency::Boundary {
            point: ExtendedComplex::Finite(z),
        } => third.residual(z.re, 0.0) <= CONCURRENCY_TOL,
        Concurrency::NotConcurrent => false,
    };
    Ok(if on_third {
        cand
    } else {
        Concurrency::NotConcurrent
    })
}

/// The geodesic orthogonal to all three axes, when they form an ultraparallel
/// pencil (coaxal circles with no common point).
///
/// Curves `k(u² + w²) + l u + m = 0` are orthogonal when
/// `l₁ l₂ = 2(k₁ m₂ + k₂ m₁)`, so the perpendicular spans the kernel of a 3×3
/// system. Returns `None` when the system is regular or the kernel curve has no
/// real points (the axes then meet, or fail to lie in one pencil).
pub fn common_perpendicular(axes: &[Geodesic; 3]) -> Result<Option<Geodesic>> {
    let rows = [
        PlaneCurve::from_geodesic(&axes[0])?,
        PlaneCurve::from_geodesic(&axes[1])?,
        PlaneCurve::from_geodesic(&axes[2])?,
    ]
    .map(|c| {
        let v = [-2.0 * c.m, c.l, -2.0 * c.k];
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.map(|x| x / n)
    });
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let norm = |v: [f64; 3]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let kernel = [
        cross(rows[0], rows[1]),
        cross(rows[0], rows[2]),
        cross(rows[1], rows[2]),
    ]
    .into_iter()
    .max_by(|a, b| norm(*a).total_cmp(&norm(*b)))
    .expect("three candidates");
    let kn = norm(kernel);
    if kn <= 1e-12 {
        return Err(Error::Degenerate(
            "the axes do not determine a pencil".into(),
        ));
    }
    let det: f64 = (0..3)
        .map(|i| rows[2][i] * cross(rows[0], rows[1])[i])
        .sum();
    if det.abs() > CONCURRENCY_TOL {
        return Ok(None);
    }
    let [k, l, m] = kernel.map(|x| x / kn);
    if k.abs() <= 1e-12 {
        let foot = ExtendedComplex::real(-m / l);
        return Geodesic::new(foot, ExtendedComplex::Infinity).map(Some);
    }
    let centre = -l / (2.0 * k);
    let r2 = centre * centre - m / k;
    if r2 <= CONCURRENCY_TOL * centre.abs().max(1.0).powi(2) {
        return Ok(None);
    }
    let r = r2.sqrt();
    Geodesic::new(
        ExtendedComplex::real(centre - r),
        ExtendedComplex::real(centre + r),
    )
    .map(Some)
}

/// Flux vector and a point on the axis of a Euclidean minimal end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EuclideanEndData {
    pub flux: [f64; 3],
    pub point: [f64; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum EuclideanRelation {
    Parallel,
    Concurrent { point: [f64; 3] },
    Violation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EuclideanReport {
    pub coplanar: bool,
    #[serde(flatten)]
    pub relation: EuclideanRelation,
}

type V3 = [f64; 3];

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}
fn scale(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}
fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

/// Checks force and torque balance of three Euclidean ends, then classifies
/// their axes as parallel or concurrent.
pub fn euclidean_three_end_check(e: &[EuclideanEndData; 3]) -> EuclideanReport {
    let force = e.iter().fold([0.0; 3], |s, x| add(s, x.flux));
    let torque = e
        .iter()
        .fold([0.0; 3], |s, x| add(s, cross(x.point, x.flux)));
    let fmax = e.iter().map(|x| norm(x.flux)).fold(0.0, f64::max);
    let pmax = e.iter().map(|x| norm(x.point)).fold(0.0, f64::max);
    let tol = EUCLIDEAN_TOL * fmax.max(1.0) * pmax.max(1.0);
    let vectors = [
        sub(e[1].point, e[0].point),
        sub(e[2].point, e[0].point),
        e[0].flux,
        e[1].flux,
        e[2].flux,
    ];
    let vmax = vectors
        .iter()
        .map(|v| norm(*v))
        .fold(0.0, f64::max)
        .max(1.0);
    let mut coplanar = true;
    for i in 0..5 {
        for j in i + 1..5 {
            for k in j + 1..5 {
                let det = dot(vectors[i], cross(vectors[j], vectors[k]));
                if det.abs() > EUCLIDEAN_TOL * vmax.powi(3) {
                    coplanar = false;
                }
            }
        }
    }
    let relation = if norm(force) > tol || norm(torque) > tol {
        EuclideanRelation::Violation
    } else {
        axes_relation(e, tol)
    };
    EuclideanReport { coplanar, relation }
}

fn axes_relation(e: &[EuclideanEndData; 3], tol: f64) -> EuclideanRelation {
    let parallel = |a: V3, b: V3| norm(cross(a, b)) <= EUCLIDEAN_TOL * norm(a) * norm(b);
    if parallel(e[0].flux, e[1].flux) && parallel(e[1].flux, e[2].flux) {
        return EuclideanRelation::Parallel;
    }
    let (i, j, k) = if !parallel(e[0].flux, e[1].flux) {
        (0, 1, 2)
    } else if !parallel(e[0].flux, e[2].flux) {
        (0, 2, 1)
    } else {
        (1, 2, 0)
    };
    // Closest point of line j to line i; coplanar non-parallel lines meet there.
    let (p, d) = (e[i].point, e[i].flux);
    let (q, f) = (e[j].point, e[j].flux);
    let n = cross(d, f);
    let t = dot(cross(sub(q, p), f), n) / dot(n, n);
    let x = add(p, scale(d, t));
    let dist = |x: V3, e: &EuclideanEndData| norm(cross(sub(x, e.point), e.flux)) / norm(e.flux);
    let reach = norm(x).max(1.0);
    if dist(x, &e[j]) > tol * reach || dist(x, &e[k]) > tol * reach {
        EuclideanRelation::Violation
    } else {
        EuclideanRelation::Concurrent { point: x }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ends::HorosphericalEnd;
    use num_complex::Complex64;

    fn ec(x: f64) -> ExtendedComplex {
        ExtendedComplex::real(x)
    }

    const INF: ExtendedComplex = ExtendedComplex::Infinity;

    fn cat(mu: f64, a: ExtendedComplex, b: ExtendedComplex) -> EndDescriptor {
        EndDescriptor::Catenoidal(CatenoidalEnd::new(mu, a, b).unwrap())
    }

    #[test]
    fn ultraparallel_axes_share_a_perpendicular() {
        let sigma = [0.65, 0.79, 0.094];
        let a = three_end_axes(sigma).unwrap();
        let axes = axes_for(a);
        assert_eq!(
            concurrency_check(&axes).unwrap(),
            Concurrency::NotConcurrent
        );
        let p = common_perpendicular(&axes)
            .unwrap()
            .expect("ultraparallel pencil");
        // Orthogonality: each axis cuts the perpendicular's circle at right angles,
        // i.e. |c − m|² = R² + r² for centres c, m and radii R, r.
        let (c, rr) = match (p.from(), p.to()) {
            (ExtendedComplex::Finite(x), ExtendedComplex::Finite(y)) => {
                ((x.re + y.re) / 2.0, (y.re - x.re).abs() / 2.0)
            }
            other => panic!("{other:?}"),
        };
        for g in &axes {
            let (x, y) = (g.from().finite().unwrap().re, g.to().finite().unwrap().re);
            let (m, r) = ((x + y) / 2.0, (x - y).abs() / 2.0);
            assert!(((c - m).powi(2) - rr * rr - r * r).abs() < 1e-9);
        }
    }

    #[test]
    fn concurrent_axes_have_no_common_perpendicular() {
        let axes = axes_for(three_end_axes([1.0, 1.0, 1.0]).unwrap());
        assert_eq!(common_perpendicular(&axes).unwrap(), None);
        let generic = [
            Geodesic::new(ec(-2.0), ec(-1.0)).unwrap(),
            Geodesic::new(ec(0.0), ec(0.5)).unwrap(),
            Geodesic::new(ec(3.0), ec(5.0)).unwrap(),
        ];
        assert_eq!(common_perpendicular(&generic).unwrap(), None);
    }

    fn axes_for(a: [ExtendedComplex; 3]) -> [Geodesic; 3] {
        let b = [ec(-1.0), ec(0.0), ec(1.0)];
        [0, 1, 2].map(|j| Geodesic::new(a[j], b[j]).unwrap())
    }

    #[test]
    fn two_cousins_balance() {
        let p = BalanceProblem::new(vec![cat(0.5, ec(0.0), INF), cat(0.5, INF, ec(0.0))]).unwrap();
        assert!(polynomial_sum(&p).unwrap().is_zero(BALANCE_TOL));
        assert!(check_balanced(&p).is_ok());
    }

    #[test]
    fn costa_type_data_balances() {
        let (m1, m2) = (0.6_f64, (2.0 - 0.36_f64).sqrt());
        let a = ExtendedComplex::new(0.3, -1.0);
        let p = BalanceProblem::new(vec![
            cat(m1, a, ec(2.0)),
            cat(m2, a, ec(2.0)),
            EndDescriptor::Horospherical(HorosphericalEnd {
                boundary: ec(5.0),
                kappa: Complex64::new(0.0, 0.0),
            }),
        ])
        .unwrap();
        assert!(polynomial_sum(&p).unwrap().is_zero(1e-12));
    }

    #[test]
    fn catenoidal_with_horospherical_is_unbalanceable() {
        let p = BalanceProblem::new(vec![
            cat(0.5, ec(0.0), INF),
            EndDescriptor::Horospherical(HorosphericalEnd {
                boundary: ec(0.0),
                kappa: Complex64::new(1.0, 0.0),
            }),
        ])
        .unwrap();
        assert!(matches!(check_balanced(&p), Err(Error::Unbalanceable(_))));
        assert!(BalanceProblem::new(vec![EndDescriptor::Horosphere]).is_err());
    }

    #[test]
    fn two_end_rigidity() {
        let e1 = CatenoidalEnd::new(0.5, ec(0.0), INF).unwrap();
        let e2 = two_end_solve(&e1, ec(0.0)).unwrap();
        assert_eq!((e2.mu, e2.axis_from, e2.boundary), (0.5, INF, ec(0.0)));
        assert_eq!(two_end_solve(&e2, INF).unwrap(), e1);
        assert!(matches!(
            two_end_solve(&e1, ec(1.0)),
            Err(Error::Unbalanceable(_))
        ));
        assert!(matches!(two_end_solve(&e1, INF), Err(Error::Domain { .. })));
    }

    #[test]
    fn equal_sigmas() {
        let a = three_end_axes([1.0; 3]).unwrap();
        assert!(a[0].approx_eq(&ec(1.0 / 3.0), 1e-15));
        assert_eq!(a[1], INF);
        assert!(a[2].approx_eq(&ec(-1.0 / 3.0), 1e-15));
        match concurrency_check(&axes_for(a)).unwrap() {
            Concurrency::Interior { u, w } => {
                assert!(u.abs() < 1e-12 && (w - 1.0 / 3f64.sqrt()).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn descending_sigmas_meet_on_the_boundary() {
        let a = three_end_axes([3.0, 2.0, 1.0]).unwrap();
        for (x, want) in a.iter().zip([0.2, -1.0, -1.0]) {
            assert!(x.approx_eq(&ec(want), 1e-15));
        }
        match concurrency_check(&axes_for(a)).unwrap() {
            Concurrency::Boundary { point } => assert!(point.approx_eq(&ec(-1.0), 1e-12)),
            other => panic!("{other:?}"),
        }
        let s = sigma_polynomial_sum([3.0, 2.0, 1.0], a, [ec(-1.0), ec(0.0), ec(1.0)]).unwrap();
        assert!(s.is_zero(1e-10));
    }

    #[test]
    fn perturbed_axis_is_not_concurrent() {
        let mut a = three_end_axes([1.0; 3]).unwrap();
        a[2] = ec(-1.0 / 3.0 + 0.01);
        assert_eq!(
            concurrency_check(&axes_for(a)).unwrap(),
            Concurrency::NotConcurrent
        );
    }

    #[test]
    fn complex_endpoints_are_rejected() {
        let g = Geodesic::new(ExtendedComplex::new(0.0, 1.0), INF).unwrap();
        assert!(concurrency_check(&[g, g, g]).is_err());
    }

    #[test]
    fn zero_sigma_is_rejected() {
        assert!(three_end_axes([1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn transported_axes_balance() {
        let sigma = [0.75, -3.0, 0.19];
        let b = [
            ExtendedComplex::new(1.0, 1.0),
            INF,
            ExtendedComplex::new(-2.0, 0.5),
        ];
        let a = three_end_axes_with_boundaries(sigma, b).unwrap();
        assert!(sigma_polynomial_sum(sigma, a, b).unwrap().is_zero(1e-9));
    }

    #[test]
    fn euclidean_concurrent_and_parallel() {
        // Three forces meeting at (1, 1, 0) and summing to zero.
        let x = [1.0, 1.0, 0.0];
        let f = [[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [-1.0, -2.0, 0.0]];
        let e = [0, 1, 2].map(|j| EuclideanEndData {
            flux: f[j],
            point: add(x, scale(f[j], 3.0 - j as f64)),
        });
        let r = euclidean_three_end_check(&e);
        assert!(r.coplanar);
        match r.relation {
            EuclideanRelation::Concurrent { point } => assert!(norm(sub(point, x)) < 1e-12),
            other => panic!("{other:?}"),
        }

        let e = [
            EuclideanEndData {
                flux: [0.0, 0.0, 1.0],
                point: [0.0, 0.0, 0.0],
            },
            EuclideanEndData {
                flux: [0.0, 0.0, 1.0],
                point: [2.0, 0.0, 0.0],
            },
            EuclideanEndData {
                flux: [0.0, 0.0, -2.0],
                point: [1.0, 0.0, 5.0],
            },
        ];
        let r = euclidean_three_end_check(&e);
        assert_eq!(
            r,
            EuclideanReport {
                coplanar: true,
                relation: EuclideanRelation::Parallel
            }
        );

        let mut bad = e;
        bad[2].point = [1.5, 0.0, 0.0];
        assert_eq!(
            euclidean_three_end_check(&bad).relation,
            EuclideanRelation::Violation
        );
    }

    #[test]
    fn json_shapes() {
        let p: BalanceProblem = serde_json::from_str(
            r#"{"ends":[{"type":"catenoidal","mu":0.5,"axis":[[0,0],"inf"]},{"type":"horosphere"}]}"#,
        )
        .unwrap();
        assert_eq!(p.ends().len(), 2);
        assert!(serde_json::from_str::<BalanceProblem>(r#"{"ends":[]}"#).is_err());
        let s = serde_json::to_value(Concurrency::Interior { u: 0.0, w: 1.0 }).unwrap();
        assert_eq!(s["result"], "interior");
    }
}
