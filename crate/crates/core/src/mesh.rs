//! Triangle meshes of immersed annuli `ρ₀ ≤ |z| ≤ ρ₁`, written as OBJ.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bryant::BryantFrame;
use crate::error::{Error, Result};
use crate::geometry::HPoint;

/// Coordinates written to the OBJ file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// `(Re ζ, Im ζ, w)` as is.
    #[default]
    Halfspace,
    /// The Poincaré ball, with `∞` at the north pole.
    Ball,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Halfspace => "halfspace",
            Model::Ball => "ball",
        })
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "halfspace" | "half-space" => Ok(Model::Halfspace),
            "ball" => Ok(Model::Ball),
            other => Err(Error::Parse(format!("unknown model `{other}`"))),
        }
    }
}

impl Model {
    pub fn coords(&self, p: &HPoint) -> [f64; 3] {
        let (u, v, w) = (p.zeta().re, p.zeta().im, p.w());
        match self {
            Model::Halfspace => [u, v, w],
            Model::Ball => {
                let r2 = u * u + v * v + w * w;
                let den = u * u + v * v + (1.0 + w) * (1.0 + w);
                [2.0 * u / den, 2.0 * v / den, (r2 - 1.0) / den]
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnulusSpec {
    pub rho_min: f64,
    pub rho_max: f64,
    pub radial: usize,
    pub angular: usize,
}

impl AnnulusSpec {
    pub fn new(rho_min: f64, rho_max: f64, radial: usize, angular: usize) -> Result<Self> {
        if !(rho_min > 0.0 && rho_max > rho_min && rho_max.is_finite()) {
            return Err(Error::domain(
                "0 < ρ_min < ρ_max",
                format!("ρ range [{rho_min}, {rho_max}]"),
            ));
        }
        if radial < 2 || angular < 3 {
            return Err(Error::domain(
                "at least 2 radial and 3 angular samples",
                format!("{radial} × {angular}"),
            ));
        }
        Ok(AnnulusSpec {
            rho_min,
            rho_max,
            radial,
            angular,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub points: Vec<HPoint>,
    /// Zero-based vertex indices.
    pub triangles: Vec<[usize; 3]>,
}

/// Samples the immersion on a polar grid; radii are spaced geometrically.
pub fn annulus_mesh(f: &BryantFrame, spec: &AnnulusSpec) -> Result<Mesh> {
    if spec.rho_max >= f.validity_radius() {
        return Err(Error::domain(
            "ρ < validity radius",
            format!(
                "ρ_max = {} but the frame is valid for ρ < {}",
                spec.rho_max,
                f.validity_radius()
            ),
        ));
    }
    let (nr, na) = (spec.radial, spec.angular);
    let ratio = (spec.rho_max / spec.rho_min).ln() / (nr - 1) as f64;
    let points = (0..nr * na)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / na, idx % na);
            let rho = spec.rho_min * (ratio * i as f64).exp();
            f.point_at(rho, 2.0 * PI * j as f64 / na as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut triangles = Vec::with_capacity(2 * (nr - 1) * na);
    for i in 0..nr - 1 {
        for j in 0..na {
            let a = i * na + j;
            let b = i * na + (j + 1) % na;
            let (c, d) = (a + na, b + na);
            triangles.push([a, b, d]);
            triangles.push([a, d, c]);
        }
    }
    Ok(Mesh { points, triangles })
}

pub fn write_obj<W: Write>(mesh: &Mesh, model: Model, mut out: W) -> Result<()> {
    writeln!(out, "# bryantflux annulus, model {model}")?;
    for p in &mesh.points {
        let [x, y, z] = model.coords(p);
        writeln!(out, "v {x:.12e} {y:.12e} {z:.12e}")?;
    }
    for t in &mesh.triangles {
        writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    out.flush()?;
    Ok(())
}
