//! Command-line front end.
//!
//! Every subcommand writes one JSON document (or `key: value` lines with
//! `--format text`) to stdout. Failures write
//! `{"error": {"kind", "message", "constraint"}}` to stderr and exit nonzero.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::balance::{
    check_balanced, concurrency_check, polynomial_sum, three_end_axes, two_end_solve,
    BalanceProblem, Concurrency,
};
use crate::bryant::BryantFrame;
use crate::ends::{EndDescriptor, EndSpec};
use crate::error::{Error, Result};
use crate::flux::{
    catenoidal_closed_form, flux_for_geodesic, flux_numeric, flux_triple,
    horospherical_closed_form, FluxTriple,
};
use crate::geometry::{
    apply_isometry, cross_ratio, mobius_boundary, ExtendedComplex, Geodesic, HPoint, IsometrySL2,
};
use crate::killing::{KillingField, KillingKind};
use crate::mesh::{annulus_mesh, write_obj, AnnulusSpec, Model};
use crate::series::QuadratureGrid;

/// Default tolerance of `verify`.
pub const VERIFY_TOL: f64 = 1e-5;

#[derive(Parser, Debug)]
#[command(
    name = "bryantflux",
    version,
    about = "Flux of Killing fields through ends of CMC-1 surfaces in hyperbolic space"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build ends from end-spec JSON.
    #[command(subcommand)]
    End(EndCommand),
    /// Flux of a Killing field through an end.
    Flux(FluxArgs),
    /// Compare quadrature with residues over a sweep of geodesics.
    Verify(VerifyArgs),
    /// Balancing of several ends.
    #[command(subcommand)]
    Balance(BalanceCommand),
    /// Cross-ratio of four boundary points.
    Crossratio(CrossratioArgs),
    /// Export the immersed annulus ρ_min ≤ |z| ≤ ρ_max as OBJ.
    Mesh(MeshArgs),
}

#[derive(Subcommand, Debug)]
pub enum EndCommand {
    /// Write the frame of an end spec as JSON.
    Build(BuildArgs),
}

#[derive(Args, Debug)]
pub struct EndInput {
    /// End-spec or frame JSON file.
    #[arg(long)]
    pub end: PathBuf,
    /// Truncation order of the series (end specs only).
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub input: EndInput,
    /// Write the frame here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FluxArgs {
    #[command(flatten)]
    pub input: EndInput,
    /// Geodesic "c,d" with complex points like 1+2i, or inf.
    #[arg(long, allow_hyphen_values = true)]
    pub geodesic: Geodesic,
    #[arg(long, default_value_t = KillingKind::Translation)]
    pub kind: KillingKind,
    /// Also integrate numerically on the circle of this radius.
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, default_value_t = 1024)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: EndInput,
    #[arg(long, default_value_t = 0.1)]
    pub rho: f64,
    #[arg(long, default_value_t = 1024)]
    pub samples: usize,
    /// Check only this geodesic instead of the built-in sweep.
    #[arg(long, allow_hyphen_values = true)]
    pub geodesic: Option<Geodesic>,
    /// Largest accepted |numeric − residue|.
    #[arg(long, default_value_t = VERIFY_TOL)]
    pub tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum BalanceCommand {
    /// The partner of a catenoidal end in a balanced two-ended surface.
    Two(TwoArgs),
    /// Axes of three balanced catenoidal ends.
    Three(ThreeArgs),
    /// Sum of the flux polynomials of a list of end descriptors.
    Sum(SumArgs),
}

#[derive(Args, Debug)]
pub struct TwoArgs {
    /// Catenoidal end spec or descriptor JSON.
    #[arg(long)]
    pub end: PathBuf,
    /// Asymptotic boundary of the second end.
    #[arg(long, allow_hyphen_values = true)]
    pub boundary: ExtendedComplex,
}

#[derive(Args, Debug)]
pub struct ThreeArgs {
    /// σⱼ = 1 − μⱼ², comma separated.
    #[arg(
        long,
        allow_hyphen_values = true,
        value_delimiter = ',',
        required = true
    )]
    pub sigma: Vec<f64>,
    /// Boundaries ℬⱼ separated by ';' (default -1;0;1).
    #[arg(long, allow_hyphen_values = true)]
    pub boundaries: Option<String>,
}

#[derive(Args, Debug)]
pub struct SumArgs {
    /// JSON {"ends": [descriptor, …]}.
    #[arg(long)]
    pub problem: PathBuf,
}

#[derive(Args, Debug)]
pub struct CrossratioArgs {
    #[arg(allow_hyphen_values = true, num_args = 4, required = true)]
    pub points: Vec<ExtendedComplex>,
}

#[derive(Args, Debug)]
pub struct MeshArgs {
    #[command(flatten)]
    pub input: EndInput,
    #[arg(long, default_value_t = 0.05)]
    pub rho_min: f64,
    #[arg(long, default_value_t = 0.5)]
    pub rho_max: f64,
    #[arg(long, default_value_t = 32)]
    pub radial: usize,
    #[arg(long, default_value_t = 64)]
    pub angular: usize,
    #[arg(long, default_value_t = Model::Halfspace)]
    pub model: Model,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let report =
                json!({"error": {"kind": "usage", "message": e.to_string(), "constraint": null}});
            let _ = writeln!(err, "{report}");
            return 2;
        }
    };
    match dispatch(&cli.command) {
        Ok(v) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&v).unwrap_or_default(),
                Format::Text => render_text(&v),
            };
            if writeln!(out, "{text}").is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            log::debug!("command failed: {e:?}");
            let _ = writeln!(err, "{}", error_json(&e));
            1
        }
    }
}

pub fn error_json(e: &Error) -> Value {
    json!({"error": {"kind": e.kind(), "message": e.to_string(), "constraint": e.constraint()}})
}

fn render_text(v: &Value) -> String {
    match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, x)| match x {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}

fn dispatch(cmd: &Command) -> Result<Value> {
    match cmd {
        Command::End(EndCommand::Build(a)) => end_build(a),
        Command::Flux(a) => flux(a),
        Command::Verify(a) => verify(a),
        Command::Balance(BalanceCommand::Two(a)) => balance_two(a),
        Command::Balance(BalanceCommand::Three(a)) => balance_three(a),
        Command::Balance(BalanceCommand::Sum(a)) => balance_sum(a),
        Command::Crossratio(a) => {
            let p = &a.points;
            let v = cross_ratio(p[0], p[1], p[2], p[3])?;
            Ok(json!({"value": [v.re, v.im]}))
        }
        Command::Mesh(a) => mesh(a),
    }
}

/// An end read from disk: either a spec, which is built, or a frame.
struct LoadedEnd {
    frame: BryantFrame,
    spec: Option<EndSpec>,
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn load_end(input: &EndInput) -> Result<LoadedEnd> {
    let v = read_json(&input.end)?;
    if v.get("type").is_some() {
        let mut spec: EndSpec = serde_json::from_value(v)?;
        if let Some(k) = input.order {
            spec = spec.with_order(k);
        }
        log::info!("building end from {}", input.end.display());
        Ok(LoadedEnd {
            frame: spec.build_frame()?,
            spec: Some(spec),
        })
    } else {
        Ok(LoadedEnd {
            frame: serde_json::from_value(v)?,
            spec: None,
        })
    }
}

fn end_build(a: &BuildArgs) -> Result<Value> {
    let end = load_end(&a.input)?;
    let v = serde_json::to_value(&end.frame)?;
    match &a.out {
        Some(path) => {
            fs::write(path, serde_json::to_string_pretty(&v)?)?;
            Ok(json!({"written": path.display().to_string()}))
        }
        None => Ok(v),
    }
}

fn triple_json(t: &FluxTriple) -> Value {
    json!({
        "phi0": [t.phi0.re, t.phi0.im],
        "phi1": [t.phi1.re, t.phi1.im],
        "phi2": [t.phi2.re, t.phi2.im],
        "polynomial_roots": t.polynomial().roots(),
    })
}

fn closed_form(d: &EndDescriptor, g: &Geodesic, kind: KillingKind) -> Result<Option<f64>> {
    Ok(match d {
        EndDescriptor::Catenoidal(c) => Some(catenoidal_closed_form(
            c.mu,
            c.axis_from,
            c.boundary,
            g,
            kind,
        )?),
        EndDescriptor::Horospherical(h) => {
            Some(horospherical_closed_form(h.kappa, h.boundary, g, kind))
        }
        EndDescriptor::Horosphere => Some(0.0),
    })
}

fn flux(a: &FluxArgs) -> Result<Value> {
    let end = load_end(&a.input)?;
    let t = flux_triple(&end.frame)?;
    let mut v = triple_json(&t);
    v["value"] = json!(flux_for_geodesic(&t, &a.geodesic, a.kind));
    if let Some(spec) = &end.spec {
        let d = spec.descriptor()?;
        v["descriptor"] = serde_json::to_value(d)?;
        v["closed_form"] = json!(closed_form(&d, &a.geodesic, a.kind)?);
    }
    if let Some(rho) = a.rho {
        let grid = QuadratureGrid::new(rho, a.samples)?;
        let k = KillingField::new(a.kind, a.geodesic);
        v["numeric"] = json!(flux_numeric(&end.frame, &k, &grid)?);
    }
    Ok(v)
}

/// Geodesics of the default `verify` sweep.
pub fn verify_sweep() -> Vec<Geodesic> {
    [
        "0,inf",
        "inf,0",
        "1,-1",
        "i,-i",
        "2+i,inf",
        "inf,-1+0.5i",
        "0.5,3i",
        "-2-i,1+2i",
        "4,0.25",
        "1+i,inf",
    ]
    .iter()
    .map(|s| s.parse().expect("valid sweep geodesic"))
    .collect()
}

fn verify(a: &VerifyArgs) -> Result<Value> {
    let end = load_end(&a.input)?;
    let t = flux_triple(&end.frame)?;
    let grid = QuadratureGrid::new(a.rho, a.samples)?;
    let geodesics = match a.geodesic {
        Some(g) => vec![g],
        None => verify_sweep(),
    };
    let mut cases = Vec::new();
    let mut max_defect: f64 = 0.0;
    for g in geodesics {
        for kind in [KillingKind::Translation, KillingKind::Rotation] {
            let residue = flux_for_geodesic(&t, &g, kind);
            let numeric = flux_numeric(&end.frame, &KillingField::new(kind, g), &grid)?;
            let defect = (numeric - residue).abs();
            max_defect = max_defect.max(defect);
            cases.push(json!({
                "geodesic": [g.from(), g.to()],
                "kind": kind,
                "residue": residue,
                "numeric": numeric,
                "defect": defect,
            }));
        }
    }
    let passed = max_defect < a.tol;
    let report = json!({
        "rho": a.rho,
        "samples": a.samples,
        "tolerance": a.tol,
        "max_defect": max_defect,
        "passed": passed,
        "cases": cases,
    });
    if passed {
        Ok(report)
    } else {
        Err(Error::Consistency {
            what: "quadrature flux disagrees with the residue flux",
            defect: max_defect,
        })
    }
}

fn balance_two(a: &TwoArgs) -> Result<Value> {
    let v = read_json(&a.end)?;
    // Accept either a descriptor or a catenoidal end spec.
    let d: EndDescriptor = match serde_json::from_value::<EndDescriptor>(v.clone()) {
        Ok(d) => d,
        Err(_) => serde_json::from_value::<EndSpec>(v)?.descriptor()?,
    };
    let EndDescriptor::Catenoidal(e1) = d else {
        return Err(Error::Unbalanceable(format!(
            "a {:?} end cannot be balanced against a single catenoidal end",
            d.kind()
        )));
    };
    let e2 = two_end_solve(&e1, a.boundary)?;
    Ok(json!({"end": EndDescriptor::Catenoidal(e2)}))
}

fn parse_boundaries(s: &str) -> Result<[ExtendedComplex; 3]> {
    let pts = s
        .split(';')
        .map(|p| p.parse::<ExtendedComplex>())
        .collect::<Result<Vec<_>>>()?;
    pts.try_into().map_err(|_| {
        Error::Parse(format!(
            "expected three ';'-separated boundaries, got {s:?}"
        ))
    })
}

/// Compact text for a boundary point: real numbers print without `+0i`.
pub fn format_point(z: &ExtendedComplex) -> String {
    match z {
        ExtendedComplex::Infinity => "inf".into(),
        ExtendedComplex::Finite(c) if c.im == 0.0 => format!("{}", c.re),
        ExtendedComplex::Finite(c) => format!("{c}"),
    }
}

fn balance_three(a: &ThreeArgs) -> Result<Value> {
    let sigma: [f64; 3] = a
        .sigma
        .clone()
        .try_into()
        .map_err(|_| Error::Parse("--sigma needs three values".into()))?;
    let chart = [-1.0, 0.0, 1.0].map(ExtendedComplex::real);
    let boundaries = match &a.boundaries {
        Some(s) => parse_boundaries(s)?,
        None => chart,
    };
    // Solve and test concurrency in the chart where the boundaries are (−1, 0, 1).
    let back = IsometrySL2::from_three_points(boundaries, chart)?.inverse();
    let chart_axes = three_end_axes(sigma)?;
    let geodesics = [
        Geodesic::new(chart_axes[0], chart[0])?,
        Geodesic::new(chart_axes[1], chart[1])?,
        Geodesic::new(chart_axes[2], chart[2])?,
    ];
    let axes = chart_axes.map(|x| mobius_boundary(&back, x));
    let (concurrency, at) = match concurrency_check(&geodesics)? {
        Concurrency::Interior { u, w } => {
            let p = apply_isometry(&back, &HPoint::new(u.into(), w)?);
            (
                Concurrency::Interior { u, w },
                json!({"zeta": [p.zeta().re, p.zeta().im], "w": p.w()}),
            )
        }
        Concurrency::Boundary { point } => {
            let q = mobius_boundary(&back, point);
            (Concurrency::Boundary { point: q }, json!(format_point(&q)))
        }
        Concurrency::NotConcurrent => (Concurrency::NotConcurrent, Value::Null),
    };
    // In the default chart, report interior points as (u, w).
    let at = match (a.boundaries.is_none(), concurrency) {
        (true, Concurrency::Interior { u, w }) => json!([u, w]),
        _ => at,
    };
    Ok(json!({
        "axes": axes.iter().map(format_point).collect::<Vec<_>>(),
        "boundaries": boundaries.iter().map(format_point).collect::<Vec<_>>(),
        "concurrency": concurrency,
        "concurrent_at": at,
    }))
}

fn balance_sum(a: &SumArgs) -> Result<Value> {
    let p: BalanceProblem = serde_json::from_value(read_json(&a.problem)?)?;
    let s = polynomial_sum(&p)?;
    Ok(json!({
        "polynomial": s,
        "balanced": check_balanced(&p).is_ok(),
    }))
}

fn mesh(a: &MeshArgs) -> Result<Value> {
    let end = load_end(&a.input)?;
    let spec = AnnulusSpec::new(a.rho_min, a.rho_max, a.radial, a.angular)?;
    let m = annulus_mesh(&end.frame, &spec)?;
    let file = fs::File::create(&a.out)?;
    write_obj(&m, a.model, std::io::BufWriter::new(file))?;
    Ok(json!({
        "written": a.out.display().to_string(),
        "vertices": m.points.len(),
        "faces": m.triangles.len(),
        "model": a.model.to_string(),
    }))
}
