//! Truncated generalized power series `z^λ · Σ_{k=0}^{K} a_k z^k`.
//!
//! The offset `λ` is real; two series can be added only when their offsets
//! differ by an integer. Evaluation on a circle tracks the branch of `z^λ`
//! continuously in the angle, so a half-integer offset changes sign after one
//! turn.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation order `K`.
pub const DEFAULT_ORDER: usize = 32;

/// Offsets closer than this to an integer difference are snapped to it.
pub const OFFSET_TOL: f64 = 1e-9;

/// Leading coefficients below this are stripped before dividing.
pub const DIVISOR_TOL: f64 = 1e-13;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct GeneralizedSeries {
    offset: f64,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    offset: f64,
    #[serde(with = "crate::json::complex_vec")]
    coeffs: Vec<Complex64>,
}

impl TryFrom<SeriesRepr> for GeneralizedSeries {
    type Error = Error;
    fn try_from(r: SeriesRepr) -> Result<Self> {
        if r.coeffs.is_empty() || !r.offset.is_finite() {
            return Err(Error::Parse(
                "series needs a finite offset and at least one coefficient".into(),
            ));
        }
        Ok(GeneralizedSeries::new(r.offset, r.coeffs))
    }
}

impl From<GeneralizedSeries> for SeriesRepr {
    fn from(s: GeneralizedSeries) -> Self {
        SeriesRepr {
            offset: s.offset,
            coeffs: s.coeffs,
        }
    }
}

/// Binary operation selector for [`series_combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Div,
}

impl GeneralizedSeries {
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(offset: f64, coeffs: Vec<Complex64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least one coefficient"
        );
        GeneralizedSeries {
            offset: snap(offset),
            coeffs,
        }
    }

    /// `z^offset · Σ coeffs[k] z^k`, zero-padded or truncated to `order`.
    pub fn from_coeffs(offset: f64, coeffs: &[Complex64], order: usize) -> Self {
        let mut v = vec![ZERO; order + 1];
        for (slot, c) in v.iter_mut().zip(coeffs) {
            *slot = *c;
        }
        GeneralizedSeries::new(offset, v)
    }

    pub fn from_real(offset: f64, coeffs: &[f64], order: usize) -> Self {
        let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        GeneralizedSeries::from_coeffs(offset, &c, order)
    }

    /// `c · z^offset`.
    pub fn monomial(offset: f64, c: Complex64, order: usize) -> Self {
        GeneralizedSeries::from_coeffs(offset, &[c], order)
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        GeneralizedSeries::monomial(0.0, c, order)
    }

    pub fn zero(offset: f64, order: usize) -> Self {
        GeneralizedSeries::from_coeffs(offset, &[], order)
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Truncation order `K` (number of coefficients minus one).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^{offset+k}`, zero outside the window.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Coefficient of `z^e`, zero if `e − offset` is not a window index.
    pub fn coeff_of_power(&self, e: f64) -> Complex64 {
        let d = e - self.offset;
        let k = d.round();
        if (d - k).abs() > OFFSET_TOL || k < 0.0 {
            return ZERO;
        }
        self.coeff(k as usize)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.norm() <= tol)
    }

    /// Strips leading coefficients of magnitude `≤ tol` into the offset.
    /// A series that is entirely below `tol` is returned unchanged.
    pub fn normalized(&self, tol: f64) -> Self {
        match self.coeffs.iter().position(|c| c.norm() > tol) {
            Some(0) | None => self.clone(),
            Some(s) => GeneralizedSeries::new(self.offset + s as f64, self.coeffs[s..].to_vec()),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GeneralizedSeries::new(self.offset, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(Complex64::new(x, 0.0))
    }

    pub fn neg(&self) -> Self {
        self.scale_real(-1.0)
    }

    /// Multiplication by `z^s`.
    pub fn shift(&self, s: f64) -> Self {
        GeneralizedSeries::new(self.offset + s, self.coeffs.clone())
    }

    pub fn truncate(&self, order: usize) -> Self {
        GeneralizedSeries::from_coeffs(self.offset, &self.coeffs, order)
    }

    pub fn conj_coeffs(&self) -> Self {
        GeneralizedSeries::new(self.offset, self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Integer shift between two offsets, if they differ by an integer.
    fn integer_gap(&self, other: &Self) -> Option<i64> {
        let d = other.offset - self.offset;
        let k = d.round();
        ((d - k).abs() <= OFFSET_TOL).then_some(k as i64)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let gap = self.integer_gap(other).ok_or_else(|| {
            Error::domain(
                "summand offsets differ by an integer",
                format!("offsets {} and {}", self.offset, other.offset),
            )
        })?;
        let (lo, hi, gap) = if gap >= 0 {
            (self, other, gap as usize)
        } else {
            (other, self, (-gap) as usize)
        };
        let top = lo.order().min(hi.order() + gap);
        let mut v = vec![ZERO; top + 1];
        for (k, slot) in v.iter_mut().enumerate() {
            *slot = lo.coeff(k);
            if k >= gap {
                *slot += hi.coeff(k - gap);
            }
        }
        Ok(GeneralizedSeries::new(lo.offset, v))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut v = vec![ZERO; order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if *a == ZERO {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                v[i + j] += a * b;
            }
        }
        GeneralizedSeries::new(self.offset + other.offset, v)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let b = other.normalized(DIVISOR_TOL);
        let b0 = b.coeffs[0];
        if b0.norm() <= DIVISOR_TOL {
            return Err(Error::domain(
                "divisor is not identically zero",
                "division by a zero series",
            ));
        }
        let order = self.order().min(b.order());
        let mut q = vec![ZERO; order + 1];
        for k in 0..=order {
            let mut acc = self.coeff(k);
            for j in 1..=k.min(b.order()) {
                acc -= b.coeffs[j] * q[k - j];
            }
            q[k] = acc / b0;
        }
        Ok(GeneralizedSeries::new(self.offset - b.offset, q))
    }

    /// `d/dz`: the coefficient of `z^{λ+k}` becomes `(λ+k) a_k` at `z^{λ+k−1}`.
    pub fn differentiate(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a * (self.offset + k as f64))
            .collect();
        GeneralizedSeries::new(self.offset - 1.0, v)
    }

    /// Value at `z = ρe^{iτ}` with `z^λ = ρ^λ e^{iλτ}` for the given `τ` (not reduced mod 2π).
    pub fn eval_polar(&self, rho: f64, tau: f64) -> Complex64 {
        let z = Complex64::from_polar(rho, tau);
        let mut acc = ZERO;
        for a in self.coeffs.iter().rev() {
            acc = acc * z + a;
        }
        acc * Complex64::from_polar(rho.powf(self.offset), self.offset * tau)
    }

    /// Same as [`eval_polar`](Self::eval_polar) for the value and its `z`-derivative.
    pub fn eval_polar_with_derivative(&self, rho: f64, tau: f64) -> (Complex64, Complex64) {
        let z = Complex64::from_polar(rho, tau);
        // Horner for p(z) and p'(z), then (z^λ p)' = z^λ (p' + λ p / z).
        let mut p = ZERO;
        let mut dp = ZERO;
        for a in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        let zl = Complex64::from_polar(rho.powf(self.offset), self.offset * tau);
        (zl * p, zl * (dp + p * self.offset / z))
    }

    /// Integer value of the offset, if it is one within [`OFFSET_TOL`].
    pub fn integer_offset(&self) -> Option<i64> {
        let k = self.offset.round();
        ((self.offset - k).abs() <= OFFSET_TOL).then_some(k as i64)
    }

    /// Coefficient of `z^{−1}`.
    pub fn residue(&self) -> Result<Complex64> {
        let n = self.integer_offset().ok_or_else(|| {
            Error::domain(
                "integer offset (single-valued form)",
                format!(
                    "offset {} has fractional part {}",
                    self.offset,
                    self.offset - self.offset.floor()
                ),
            )
        })?;
        let k = -1 - n;
        Ok(if k < 0 { ZERO } else { self.coeff(k as usize) })
    }

    /// Advisory convergence radius from the Cauchy root test on the upper half of
    /// the coefficient window. `None` when the tail is numerically zero.
    pub fn radius_estimate(&self) -> Option<f64> {
        let k_max = self.order();
        let mut best: Option<f64> = None;
        for k in (k_max / 2).max(1)..=k_max {
            let a = self.coeffs[k].norm();
            if a > 1e-300 {
                let r = a.powf(-1.0 / k as f64);
                best = Some(best.map_or(r, |b| b.min(r)));
            }
        }
        best
    }

    /// Coefficient-wise distance after aligning offsets; `None` if the offsets
    /// are incompatible.
    pub fn distance(&self, other: &Self) -> Option<f64> {
        self.sub(other).ok().map(|d| d.max_abs())
    }
}

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= OFFSET_TOL {
        r
    } else {
        x
    }
}

pub fn series_combine(
    a: &GeneralizedSeries,
    b: &GeneralizedSeries,
    op: SeriesOp,
) -> Result<GeneralizedSeries> {
    match op {
        SeriesOp::Add => a.add(b),
        SeriesOp::Mul => Ok(a.mul(b)),
        SeriesOp::Div => a.div(b),
    }
}

pub fn differentiate(a: &GeneralizedSeries) -> GeneralizedSeries {
    a.differentiate()
}

pub fn residue(a: &GeneralizedSeries) -> Result<Complex64> {
    a.residue()
}

/// Equispaced nodes `τ_n = 2πn/N` on the circle `|z| = ρ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureGrid {
    rho: f64,
    samples: usize,
}

impl QuadratureGrid {
    pub fn new(rho: f64, samples: usize) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::domain("rho > 0", format!("rho = {rho}")));
        }
        if samples < 16 || !samples.is_power_of_two() {
            return Err(Error::domain(
                "samples is a power of two, at least 16",
                format!("samples = {samples}"),
            ));
        }
        Ok(QuadratureGrid { rho, samples })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn tau(&self, n: usize) -> f64 {
        2.0 * PI * n as f64 / self.samples as f64
    }

    pub fn taus(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples).map(move |n| self.tau(n))
    }

    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        QuadratureGrid::new(rho, self.samples)
    }

    /// Fails unless `rho` lies strictly inside `validity_radius`.
    pub fn check_within(&self, validity_radius: f64) -> Result<()> {
        if self.rho < validity_radius {
            Ok(())
        } else {
            Err(Error::domain(
                "rho < validity_radius",
                format!(
                    "rho = {} but validity radius is {validity_radius}",
                    self.rho
                ),
            ))
        }
    }
}

pub fn eval_branch(a: &GeneralizedSeries, grid: &QuadratureGrid) -> Vec<Complex64> {
    grid.taus().map(|t| a.eval_polar(grid.rho, t)).collect()
}

/// Pairwise summation; the result does not depend on how callers split work.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}
