//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on a domain error, 3 on a parse or usage error.

pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cce::{self, Variant};
use crate::charges::{ChargeSpec, Family, Polarization};
use crate::fmt::{named_object_checks, MapName};
use crate::lattice::{ChernVector, DivisorClass, SurfaceParams};
use crate::rational::{format_rational, parse_rational, ParseError, Rational};
use crate::regions::{self, RegionQuery, Window};
use crate::walls::{self, BgMode, SearchBounds, Verdict, WallFrame, QUADRIC_MONOMIALS};
use verify::{Suite, VerifyConfig};

pub const THREADS_ENV: &str = "ELLK3_STAB_THREADS";

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 3,
            CliError::Domain(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Parser)]
#[command(name = "ellk3-stab", version, about = "Lattice-level stability computations on Weierstrass elliptic surfaces")]
pub struct Cli {
    /// e = -Theta^2 as "p/q".
    #[arg(long, global = true, default_value = "2", allow_hyphen_values = true)]
    e: String,
    /// Tolerance for floating-point residual checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Central charges.
    Charge {
        #[command(subcommand)]
        cmd: ChargeCmd,
    },
    /// Cohomological Fourier-Mukai transforms.
    Fmt {
        #[command(subcommand)]
        cmd: FmtCmd,
    },
    /// The central-charge equation.
    Cce {
        #[command(subcommand)]
        cmd: CceCmd,
    },
    /// Stability regions in the (D, V) quadrant.
    Region {
        #[command(subcommand)]
        cmd: RegionCmd,
    },
    /// Walls, ray mini-walls, rank bounds and certificates.
    Wall {
        #[command(subcommand)]
        cmd: WallCmd,
    },
    /// Run the built-in identity checks.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
}

#[derive(Debug, Subcommand)]
enum ChargeCmd {
    /// Evaluate a charge on a Chern vector.
    Eval {
        /// standard|todd|vd|ray|weak-h|weak-vh|weak-d|weak-special
        #[arg(long)]
        family: String,
        #[arg(long = "V", allow_hyphen_values = true)]
        v: Option<String>,
        #[arg(long = "D", allow_hyphen_values = true)]
        d: Option<String>,
        /// Rational polarization "a,b" for standard/todd (alternative to --D/--V).
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<String>,
        #[arg(long = "B", default_value = "0,0", allow_hyphen_values = true)]
        b: String,
        #[arg(long = "H", allow_hyphen_values = true)]
        h: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        dalpha: Option<String>,
        /// Ratio ordering mixed kernel sums of weak charges.
        #[arg(long, allow_hyphen_values = true)]
        kernel_ratio: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        chern: String,
    },
}

#[derive(Debug, Subcommand)]
enum FmtCmd {
    /// Apply a transform to a Chern vector.
    Apply {
        /// phi|phi-hat|psi|psi-prime|upsilon|upsilon-prime
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        dalpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        chern: String,
    },
    /// Evaluate the named-object identities (e = 2).
    Checks {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        dalpha: String,
    },
}

#[derive(Debug, Subcommand)]
enum CceCmd {
    /// Solve for the target charge.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        domega: String,
        #[arg(long, allow_hyphen_values = true)]
        vomega: String,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        b: String,
        /// Target carries the Todd correction.
        #[arg(long)]
        todd: bool,
    },
    /// Closed-form image of (D, V) for B = -alpha, e = 2.
    PsiZ {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        dalpha: String,
    },
    /// Same as `verify --suite cce`.
    Verify {
        #[arg(long)]
        suite: bool,
    },
}

#[derive(Debug, Subcommand)]
enum RegionCmd {
    /// Region flags at one point.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        dalpha: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Grid of labels as CSV or SVG.
    Raster {
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        dalpha: String,
        /// "Dmin,Vmin,Dmax,Vmax"
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value_t = 100)]
        nx: usize,
        #[arg(long, default_value_t = 100)]
        ny: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Volume boundary data at the D-axis (D_alpha < -e).
    Tangency {
        #[arg(long, allow_hyphen_values = true)]
        dalpha: String,
    },
    /// A positive point that is not twisted ample.
    Witness {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        dalpha: String,
    },
}

#[derive(Debug, Subcommand)]
enum WallCmd {
    /// Quadric of the wall between two classes.
    Quadric {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        d0: String,
        #[arg(long = "chern-e", allow_hyphen_values = true)]
        chern_e: String,
        /// Defaults to the fiber class.
        #[arg(long = "chern-f", allow_hyphen_values = true)]
        chern_f: Option<String>,
    },
    /// Circle cut out by the plane z = const.
    Slice {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        d0: String,
        #[arg(long = "chern-e", allow_hyphen_values = true)]
        chern_e: String,
        #[arg(long = "chern-f", allow_hyphen_values = true)]
        chern_f: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Mini-walls on the volume ray t -> Z_{H,B,t}.
    Ray {
        #[arg(long = "H", allow_hyphen_values = true)]
        h: String,
        #[arg(long = "B", default_value = "0,0", allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// `n,theta,fiber,ch2` entries separated by `;`, or a JSON array.
        #[arg(long, allow_hyphen_values = true)]
        candidates: String,
    },
    /// Rank bound for destabilizers of a line bundle with c1 = alpha.
    RankBound {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
    },
    /// Numerical stability certificate for O(Theta + (D_alpha + e) f).
    Certify {
        /// "vd:V,D" or "standard:a,b" (B = 0).
        #[arg(long)]
        spec: String,
        /// D_alpha.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// "maxTheta,maxFiber,maxPoints"
        #[arg(long, default_value = "5,5,5")]
        bounds: String,
        #[arg(long)]
        strong_bg: bool,
    },
}

/// Parses `args`, runs the command and writes to `out`/`err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    init_threads();
    match dispatch(&cli) {
        Ok(output) => {
            let _ = out.write_all(output.text.as_bytes());
            output.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            // A pool may already exist when run twice in one process.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }

    fn json(v: Value) -> Self {
        Output::ok(serde_json::to_string_pretty(&v).expect("json value serializes") + "\n")
    }
}

fn q(s: &str) -> Result<Rational, CliError> {
    Ok(parse_rational(s)?)
}

fn divisor(s: &str) -> Result<DivisorClass, CliError> {
    Ok(DivisorClass::parse(s)?)
}

/// JSON object, or `n,theta,fiber,ch2`.
fn chern(s: &str) -> Result<ChernVector, CliError> {
    if s.trim_start().starts_with('{') {
        return Ok(ChernVector::from_json(s)?);
    }
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(CliError::Parse(format!("expected n,theta,fiber,ch2, got {s:?}")));
    }
    let mut x = parts.iter().map(|p| q(p.trim()));
    Ok(ChernVector::new(x.next().unwrap()?, x.next().unwrap()?, x.next().unwrap()?, x.next().unwrap()?))
}

fn rs(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

fn div_json(d: &DivisorClass) -> Value {
    json!({ "theta": rs(&d.theta), "fiber": rs(&d.fiber) })
}

fn chern_json(v: &ChernVector) -> Value {
    serde_json::to_value(v).expect("chern vector serializes")
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, CliError> {
    v.as_deref().ok_or_else(|| CliError::Parse(format!("missing --{flag}")))
}

fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    let surface = SurfaceParams::new(q(&cli.e)?).map_err(domain)?;
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(CliError::Parse("--tol must be positive".into()));
    }
    match &cli.cmd {
        Command::Charge { cmd } => cmd_charge(&surface, cmd),
        Command::Fmt { cmd } => cmd_fmt(&surface, cmd),
        Command::Cce { cmd } => match cmd {
            CceCmd::Verify { .. } => cmd_verify(cli, Suite::Cce),
            _ => cmd_cce(&surface, cmd),
        },
        Command::Region { cmd } => cmd_region(cli, &surface, cmd),
        Command::Wall { cmd } => cmd_wall(&surface, cmd),
        Command::Verify { suite } => cmd_verify(cli, *suite),
    }
}

fn cmd_charge(surface: &SurfaceParams, cmd: &ChargeCmd) -> Result<Output, CliError> {
    let ChargeCmd::Eval { family, v, d, omega, b, h, t, dalpha, kernel_ratio, chern: c } = cmd;
    let class = chern(c)?;
    let polarization = || -> Result<Polarization, CliError> {
        match omega {
            Some(o) => Ok(Polarization::rational(divisor(o)?)),
            None => Polarization::from_dv(surface, &q(required(d, "D")?)?, &q(required(v, "V")?)?).map_err(domain),
        }
    };
    let fam = match family.as_str() {
        "standard" => Family::Standard { omega: polarization()?, b: divisor(b)? },
        "todd" => Family::Todd { omega: polarization()?, b: divisor(b)? },
        "vd" => Family::VD { v: q(required(v, "V")?)?, d: q(required(d, "D")?)? },
        "ray" => Family::Ray { h: divisor(required(h, "H")?)?, b: divisor(b)?, t: q(required(t, "t")?)? },
        "weak-h" => Family::WeakH,
        "weak-vh" => Family::WeakVH { v: q(required(v, "V")?)? },
        "weak-d" => Family::WeakD { d: q(required(d, "D")?)? },
        "weak-special" => Family::WeakSpecial { dalpha: q(required(dalpha, "dalpha")?)? },
        other => return Err(CliError::Parse(format!("unknown family {other:?}"))),
    };
    let mut spec = ChargeSpec::new(surface.clone(), fam).map_err(domain)?;
    if let Some(r) = kernel_ratio {
        spec = spec.with_kernel_param(q(r)?).map_err(domain)?;
    }
    let z = spec.eval(&class);
    let (phase, phase_error) = match spec.phase(&class) {
        Ok(p) => (json!(p.to_f64()), Value::Null),
        Err(e) => (Value::Null, json!(e.to_string())),
    };
    Ok(Output::json(json!({
        "re": rs(&z.re),
        "im": rs(&z.im),
        "im_scale_sq": rs(&z.im_scale_sq),
        "re_f64": z.re_f64(),
        "im_f64": z.im_f64(),
        "phase": phase,
        "phase_error": phase_error,
        "in_kernel": z.is_zero(),
        "heart_necessary": spec.heart_necessary(&class),
    })))
}

fn cmd_fmt(surface: &SurfaceParams, cmd: &FmtCmd) -> Result<Output, CliError> {
    match cmd {
        FmtCmd::Apply { map, dalpha, chern: c } => {
            let name = MapName::parse(map).ok_or_else(|| CliError::Parse(format!("unknown map {map:?}")))?;
            let da = match dalpha {
                Some(s) => q(s)?,
                None if name.needs_dalpha() => return Err(CliError::Parse("--dalpha is required for psi maps".into())),
                None => Rational::from_integer(0.into()),
            };
            let image = name.matrix(surface, &da).apply(&chern(c)?);
            Ok(Output::json(chern_json(&image)))
        }
        FmtCmd::Checks { dalpha } => {
            let checks = named_object_checks(surface, &q(dalpha)?).map_err(domain)?;
            let all = checks.iter().all(|c| c.pass);
            let mut out = Output::json(serde_json::to_value(&checks).expect("checks serialize"));
            out.code = if all { 0 } else { 2 };
            Ok(out)
        }
    }
}

fn cmd_cce(surface: &SurfaceParams, cmd: &CceCmd) -> Result<Output, CliError> {
    match cmd {
        CceCmd::Solve { domega, vomega, b, todd } => {
            let variant = if *todd { Variant::Todd } else { Variant::Plain };
            let t = cce::solve(surface, &q(domega)?, &q(vomega)?, &divisor(b)?, variant).map_err(domain)?;
            Ok(Output::json(json!({
                "variant": variant,
                "d_omega_prime": rs(&t.d_omega_prime),
                "v_omega_prime": rs(&t.v_omega_prime),
                "omega_prime": { "unit": div_json(&t.omega_prime.unit), "scale_sq": rs(&t.omega_prime.scale_sq) },
                "b_prime": div_json(&t.b_prime),
                "r_b_prime": rs(t.r_b_prime()),
                "r_b_d_b_prime": rs(&t.r_b_d_b_prime(surface)),
                "a_prime": rs(&t.a_prime),
                "t": t.t,
                "det_t": t.det_t,
                "residual": t.residual,
            })))
        }
        CceCmd::PsiZ { d, v, dalpha } => {
            let (d, v) = (q(d)?, q(v)?);
            if d < Rational::from_integer(0.into()) || v < Rational::from_integer(0.into()) {
                return Err(CliError::Domain("psi_z needs D, V >= 0".into()));
            }
            let z = cce::psi_z(&d, &v, &q(dalpha)?);
            Ok(Output::json(json!({
                "d_omega_prime": rs(&z.d_omega_prime),
                "r_b_prime": rs(&z.r_b_prime),
                "v_omega_prime": rs(&z.v_omega_prime),
                "r_b_d_b_prime": rs(&z.r_b_d_b_prime),
            })))
        }
        CceCmd::Verify { .. } => unreachable!("routed to verify"),
    }
}

fn label_json(label: &regions::RegionLabel) -> Value {
    serde_json::to_value(label).expect("label serializes")
}

fn cmd_region(cli: &Cli, surface: &SurfaceParams, cmd: &RegionCmd) -> Result<Output, CliError> {
    match cmd {
        RegionCmd::Classify { dalpha, d, v } => {
            let query = RegionQuery::new(surface.clone(), q(dalpha)?, q(d)?, q(v)?).map_err(domain)?;
            let label = regions::classify(&query);
            if cli.format == OutputFormat::Csv {
                return Ok(Output::ok(format!(
                    "D,V,positive,volume_ok,twisted_ample,thm1,case,theorem\n{},{},{},{},{},{},{},{}\n",
                    d,
                    v,
                    label.positive,
                    label.volume_ok,
                    label.twisted_ample,
                    label.thm1_stable,
                    label.transform_case_stable,
                    label.theorem_region_stable
                )));
            }
            Ok(Output::json(label_json(&label)))
        }
        RegionCmd::Raster { dalpha, window, nx, ny, out } => {
            let parts = window.split(',').map(q).collect::<Result<Vec<_>, _>>()?;
            let [d0, v0, d1, v1]: [Rational; 4] =
                parts.try_into().map_err(|_| CliError::Parse("window needs four rationals".into()))?;
            let w = Window::new(d0, v0, d1, v1).map_err(domain)?;
            let base = RegionQuery::boundary(surface.clone(), q(dalpha)?, Rational::from_integer(1.into()), Rational::from_integer(1.into()));
            let grid = regions::raster(&base, &w, *nx, *ny).map_err(domain)?;
            let csv = match cli.format {
                OutputFormat::Csv => true,
                OutputFormat::Svg => false,
                OutputFormat::Json => out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "csv")),
            };
            let text = if csv { grid.to_csv() } else { grid.to_svg() };
            match out {
                Some(path) => {
                    std::fs::write(path, text).map_err(domain)?;
                    Ok(Output::json(json!({ "cells": nx * ny, "out": path.display().to_string() })))
                }
                None => Ok(Output::ok(text)),
            }
        }
        RegionCmd::Tangency { dalpha } => {
            let t = regions::tangency_data(surface, &q(dalpha)?).map_err(domain)?;
            let d_next = &t.point.0 + Rational::from_integer(1.into());
            Ok(Output::json(json!({
                "point": [rs(&t.point.0), rs(&t.point.1)],
                "g_at_point": rs(&t.g_at_point),
                "neighborhood_ok": t.neighborhood_ok,
                "derivative_at_point": rs(&t.derivative_at(&t.point.0)),
                "boundary_value_at_point_plus_one": rs(&t.boundary_value_at(&d_next)),
            })))
        }
        RegionCmd::Witness { dalpha } => {
            let (d, v) = regions::witness_stable_not_twisted_ample(surface, &q(dalpha)?).map_err(domain)?;
            Ok(Output::json(json!({ "d": rs(&d), "v": rs(&v) })))
        }
    }
}

fn verdict_json(v: &Verdict) -> Value {
    let mut obj = json!({ "verdict": v.name() });
    match v {
        Verdict::CandidateFound(list) => {
            obj["candidates"] = Value::Array(
                list.iter()
                    .map(|c| {
                        json!({
                            "rank": c.rank,
                            "curve": { "theta": c.curve.0, "fiber": c.curve.1 },
                            "points": c.points,
                            "chern": chern_json(&c.chern),
                            "phase_vs_target": format!("{:?}", c.phase_vs_target).to_lowercase(),
                            "negative_curve": c.negative_curve,
                        })
                    })
                    .collect(),
            );
        }
        Verdict::Inconclusive(reason) => obj["reason"] = json!(reason),
        Verdict::NoNumericalWall => {}
    }
    obj
}

fn cmd_wall(surface: &SurfaceParams, cmd: &WallCmd) -> Result<Output, CliError> {
    let fiber = ChernVector::ints(0, 0, 1, 0);
    let record = |d0: &str, ce: &str, cf: &Option<String>| -> Result<walls::WallRecord, CliError> {
        let frame = WallFrame::new(surface.clone(), q(d0)?).map_err(domain)?;
        let vf = match cf {
            Some(s) => chern(s)?,
            None => fiber.clone(),
        };
        Ok(walls::wall_quadric(&frame, &chern(ce)?, &vf))
    };
    match cmd {
        WallCmd::Quadric { d0, chern_e, chern_f } => {
            let rec = record(d0, chern_e, chern_f)?;
            Ok(Output::json(json!({
                "monomials": QUADRIC_MONOMIALS,
                "coeffs": rec.quadric.coeffs.iter().map(rs).collect::<Vec<_>>(),
                "degeneracy": rec.degeneracy,
                "display_diagnostic": walls::display_diagnostic(&rec),
            })))
        }
        WallCmd::Slice { d0, chern_e, chern_f, z } => {
            let rec = record(d0, chern_e, chern_f)?;
            let circle = walls::slice_circle(&rec, &q(z)?);
            Ok(Output::json(json!({ "circle": circle })))
        }
        WallCmd::Ray { h, b, target, candidates } => {
            let list: Vec<ChernVector> = if candidates.trim_start().starts_with('[') {
                serde_json::from_str(candidates).map_err(|e| CliError::Parse(format!("invalid candidate list: {e}")))?
            } else {
                candidates.split(';').map(chern).collect::<Result<_, _>>()?
            };
            let ws = walls::mini_walls_on_ray(surface, &divisor(h)?, &divisor(b)?, &chern(target)?, &list).map_err(domain)?;
            Ok(Output::json(Value::Array(
                ws.iter()
                    .map(|w| json!({ "t_root": rs(&w.t_root), "candidate": chern_json(&w.candidate), "side": w.side }))
                    .collect(),
            )))
        }
        WallCmd::RankBound { alpha, omega } => {
            let rb = walls::rank_bound(surface, &divisor(alpha)?, &Polarization::rational(divisor(omega)?)).map_err(domain)?;
            Ok(Output::json(json!({
                "a": rs(&rb.value.a),
                "b": rs(&rb.value.b),
                "m": rs(&rb.value.m),
                "value_f64": rb.value.to_f64(),
                "floor": rb.floor.to_string(),
                "enclosure": [rs(&rb.enclosure.0), rs(&rb.enclosure.1)],
            })))
        }
        WallCmd::Certify { spec, alpha, bounds, strong_bg } => {
            let (kind, params) = spec
                .split_once(':')
                .ok_or_else(|| CliError::Parse(format!("spec {spec:?} must look like vd:V,D")))?;
            let family = match kind {
                "vd" => {
                    let (v, d) = params.split_once(',').ok_or_else(|| CliError::Parse("vd:V,D".into()))?;
                    Family::VD { v: q(v)?, d: q(d)? }
                }
                "standard" => Family::Standard { omega: Polarization::rational(divisor(params)?), b: DivisorClass::zero() },
                other => return Err(CliError::Parse(format!("unsupported certificate family {other:?}"))),
            };
            let nums = bounds
                .split(',')
                .map(|s| s.trim().parse::<u32>().map_err(|_| CliError::Parse(format!("bad bound {s:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let [mt, mf, mp]: [u32; 3] = nums.try_into().map_err(|_| CliError::Parse("bounds need three integers".into()))?;
            let mut sb = SearchBounds::new(mt, mf, mp);
            if *strong_bg {
                sb.bg = BgMode::Strong;
            }
            let charge = ChargeSpec::new(surface.clone(), family).map_err(domain)?;
            let l = surface.line_bundle(&surface.unit_divisor(&q(alpha)?));
            let verdict = walls::stability_certificate(&charge, &l, &sb).map_err(domain)?;
            Ok(Output::json(verdict_json(&verdict)))
        }
    }
}

fn cmd_verify(cli: &Cli, suite: Suite) -> Result<Output, CliError> {
    let cfg = VerifyConfig { tol: cli.tol, seed: cli.seed };
    let results = verify::run_suite(suite, &cfg);
    let all = results.iter().all(|r| r.pass);
    let text = match cli.format {
        OutputFormat::Json => serde_json::to_string_pretty(&results).expect("results serialize") + "\n",
        _ => {
            let mut s = String::new();
            for r in &results {
                let status = if r.pass { "PASS" } else { "FAIL" };
                s += &format!("{status} [{:>2}] {:?}: {}: {}\n", r.id, r.suite, r.name, r.detail);
            }
            s
        }
    };
    Ok(Output { text, code: if all { 0 } else { 2 } })
}
