//! The `funkgeo` command line.
//!
//! Exit codes: 0 success, 1 a property check failed, 2 invalid input (bad
//! arguments, unreadable or invalid body), 3 domain error (a point outside
//! the body or the model, or a computation without a defined value).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bodies::ConvexBody;
use crate::checks::{self, RunConfig, Suite};
use crate::error::GeometryError;
use crate::funk::{finsler_norm, funk_f1, halfplane_to_hyperboloid, hilbert, indicatrix_sample, HalfPlanePoint};
use crate::projective::{lift_body, project, to_chart};
use crate::sampling::{random_interior_point, rng_for};
use crate::spaces::{Geometry, ModelKind, Point, TangentVector, Vector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

/// Residual above which `project --verify` reports a failure.
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "funkgeo", version, about = "Funk and Hilbert metrics on convex bodies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance between two points of a body.
    Dist(DistArgs),
    /// Finsler norm of a tangent vector, or a sampled indicatrix as CSV.
    Norm(NormArgs),
    /// Central projection of a chart body or chart points to a curved model.
    Project(ProjectArgs),
    /// Run the property suites.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    /// F(x, y).
    Funk,
    /// Reverse Funk, F(y, x).
    Rfunk,
    Hilbert,
}

/// How points on the command line are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coords {
    /// Model coordinates: `n` values in Euclidean space, `n + 1` ambient
    /// values on the sphere or hyperboloid (rescaled onto the model).
    Ambient,
    /// Affine chart `u`, mapped to the ray through `(u, 1)`.
    Chart,
    /// Upper half-plane `re,im` (hyperbolic plane only).
    Halfplane,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Spherical,
    Hyperbolic,
}

impl From<Target> for ModelKind {
    fn from(t: Target) -> Self {
        match t {
            Target::Spherical => ModelKind::Spherical,
            Target::Hyperbolic => ModelKind::Hyperbolic,
        }
    }
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// Body JSON file.
    pub body: PathBuf,
    /// First point, comma separated.
    #[arg(allow_hyphen_values = true)]
    pub x: String,
    /// Second point, comma separated.
    #[arg(allow_hyphen_values = true)]
    pub y: String,
    #[arg(long, value_enum, default_value_t = Metric::Funk)]
    pub metric: Metric,
    #[arg(long, value_enum, default_value_t = Coords::Ambient)]
    pub coords: Coords,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["xi", "indicatrix"])))]
pub struct NormArgs {
    pub body: PathBuf,
    /// Base point, comma separated.
    #[arg(allow_hyphen_values = true)]
    pub x: String,
    /// Tangent vector: `n` components in the orthonormal tangent frame at x,
    /// or `n + 1` ambient components.
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<String>,
    /// Number of equally spaced directions for the indicatrix (planar bodies).
    #[arg(long)]
    pub indicatrix: Option<usize>,
    #[arg(long, value_enum, default_value_t = Coords::Ambient)]
    pub coords: Coords,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["body", "point"])))]
pub struct ProjectArgs {
    /// Euclidean body JSON file to lift.
    #[arg(long)]
    pub body: Option<PathBuf>,
    /// Chart point; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Vec<String>,
    /// Read each point as homogeneous `(u, w)` with `w > 0`, meaning `u / w`.
    #[arg(long, requires = "point")]
    pub homogeneous: bool,
    #[arg(long, value_enum)]
    pub target: Target,
    /// Re-read the emitted JSON and report round-trip residuals on stderr.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Base sample count.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Factor applied to every tolerance.
    #[arg(long, default_value_t = 1.0)]
    pub tol: f64,
}

/// A failed command: exit code and a one-line diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }

    fn domain(message: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_DOMAIN,
            message: message.to_string(),
        }
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// `v` with 12 significant digits: fixed notation for magnitudes in
/// `[1e-4, 1e12)`, scientific otherwise. Zero prints as `0.000000000000`.
pub fn format_sig12(v: f64) -> String {
    if v == 0.0 {
        return "0.000000000000".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.11e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if !(-4..12).contains(&exp) {
        return sci;
    }
    let decimals = (11 - exp) as usize;
    format!("{v:.decimals$}")
}

fn parse_numbers(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Failure::input(format!("not a number: {t:?}"))))
        .collect()
}

fn load_body(path: &Path) -> Result<ConvexBody, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    ConvexBody::from_json(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn parse_point(g: Geometry, text: &str, coords: Coords) -> Result<Point, Failure> {
    let v = parse_numbers(text)?;
    let expect = |len: usize| {
        if v.len() == len {
            Ok(())
        } else {
            Err(Failure::input(format!("point {text:?} needs {len} coordinates for {coords:?} input")))
        }
    };
    let point = match coords {
        Coords::Ambient => {
            expect(g.ambient_dim())?;
            Point::project(g, Vector::from_vec(v))
        }
        Coords::Chart => {
            expect(g.dim())?;
            let u = Point::new(Geometry::euclidean(g.dim()), Vector::from_vec(v)).map_err(Failure::input)?;
            project(&u, g.kind())
        }
        Coords::Halfplane => {
            if g != Geometry::hyperbolic(2) {
                return Err(Failure::input("half-plane coordinates need a hyperbolic plane body"));
            }
            expect(2)?;
            HalfPlanePoint::new(v[0], v[1]).and_then(halfplane_to_hyperboloid)
        }
    };
    point.map_err(|e| Failure::domain(format!("point {text:?}: {e}")))
}

fn domain(e: GeometryError) -> Failure {
    Failure::domain(e)
}

pub fn cmd_dist(args: &DistArgs) -> Result<Output, Failure> {
    let body = load_body(&args.body)?;
    let g = body.geometry();
    let x = parse_point(g, &args.x, args.coords)?;
    let y = parse_point(g, &args.y, args.coords)?;
    let value = match args.metric {
        Metric::Funk => funk_f1(&body, &x, &y),
        Metric::Rfunk => funk_f1(&body, &y, &x),
        Metric::Hilbert => hilbert(&body, &x, &y),
    }
    .map_err(domain)?;
    Ok(Output {
        stdout: format!("{}\n", format_sig12(value)),
        ..Output::default()
    })
}

pub fn cmd_norm(args: &NormArgs) -> Result<Output, Failure> {
    let body = load_body(&args.body)?;
    let g = body.geometry();
    let x = parse_point(g, &args.x, args.coords)?;
    let frame = x.tangent_frame();
    let mut stdout = String::new();
    if let Some(xi) = &args.xi {
        let c = parse_numbers(xi)?;
        let vec = if c.len() == g.dim() {
            frame.iter().zip(&c).fold(Vector::zeros(g.ambient_dim()), |acc, (e, s)| acc + e.vec() * *s)
        } else if c.len() == g.ambient_dim() {
            Vector::from_vec(c)
        } else {
            return Err(Failure::input(format!(
                "--xi needs {} frame or {} ambient components",
                g.dim(),
                g.ambient_dim()
            )));
        };
        let xi = TangentVector::new(x, vec).map_err(Failure::input)?;
        let p = finsler_norm(&body, &xi).map_err(domain)?;
        let _ = writeln!(stdout, "{}", format_sig12(p));
    } else if let Some(count) = args.indicatrix {
        let samples = indicatrix_sample(&body, &x, count).map_err(|e| match e {
            GeometryError::Unsupported(_) | GeometryError::Precondition(_) => Failure::input(e),
            _ => Failure::domain(e),
        })?;
        stdout.push_str("theta,vx,vy\n");
        for s in samples {
            let _ = write!(stdout, "{}", format_sig12(s.theta));
            match s.vector {
                Some(v) => {
                    let _ = writeln!(stdout, ",{},{}", format_sig12(v.inner(&frame[0])), format_sig12(v.inner(&frame[1])));
                }
                None => stdout.push_str(",,\n"),
            }
        }
    }
    Ok(Output {
        stdout,
        ..Output::default()
    })
}

fn chart_point(text: &str, homogeneous: bool) -> Result<Point, Failure> {
    let mut v = parse_numbers(text)?;
    if v.len() < 1 + usize::from(homogeneous) {
        return Err(Failure::input(format!("point {text:?} has too few coordinates")));
    }
    if homogeneous {
        let w = v.pop().expect("non-empty");
        if !(w > 0.0) {
            return Err(Failure::domain(format!("homogeneous point {text:?} needs a positive last coordinate")));
        }
        v.iter_mut().for_each(|c| *c /= w);
    }
    Point::new(Geometry::euclidean(v.len()), Vector::from_vec(v)).map_err(Failure::input)
}

fn json_points(g: Geometry, points: &[Point]) -> String {
    let list: Vec<Vec<f64>> = points.iter().map(Point::to_vec).collect();
    serde_json::json!({
        "geometry": g.kind(),
        "dim": g.dim(),
        "points": list,
    })
    .to_string()
}

pub fn cmd_project(args: &ProjectArgs) -> Result<Output, Failure> {
    let target = ModelKind::from(args.target);
    let mut out = Output::default();
    if let Some(path) = &args.body {
        let body = load_body(path)?;
        let lifted = lift_body(&body, target).map_err(Failure::input)?;
        let json = lifted.to_json();
        if args.verify {
            let back = ConvexBody::from_json(&json).map_err(|e| Failure::input(format!("re-import: {e}")))?;
            let (roundtrip, metric) = verify_body(&body, &back).map_err(domain)?;
            let _ = writeln!(out.stderr, "roundtrip_residual {roundtrip:.3e}\nhilbert_residual {metric:.3e}");
            if roundtrip.max(metric) > VERIFY_TOL {
                out.code = EXIT_PROPERTY_FAILED;
            }
        }
        out.stdout = json + "\n";
    } else {
        let points: Vec<Point> = args.point.iter().map(|p| chart_point(p, args.homogeneous)).collect::<Result<_, _>>()?;
        let dim = points[0].geometry().dim();
        if points.iter().any(|p| p.geometry().dim() != dim) {
            return Err(Failure::input("points have different dimensions"));
        }
        let lifted: Vec<Point> = points
            .iter()
            .map(|p| project(p, target))
            .collect::<crate::error::Result<_>>()
            .map_err(domain)?;
        let g = Geometry::new(target, dim).map_err(Failure::input)?;
        let json = json_points(g, &lifted);
        if args.verify {
            let residual = verify_points(&points, &json).map_err(domain)?;
            let _ = writeln!(out.stderr, "roundtrip_residual {residual:.3e}");
            if residual > VERIFY_TOL {
                out.code = EXIT_PROPERTY_FAILED;
            }
        }
        out.stdout = json + "\n";
    }
    Ok(out)
}

/// Worst `|to_chart(P(u)) - u|` over the witness and vertices, and worst
/// Hilbert discrepancy over 32 deterministic interior pairs.
fn verify_body(body: &ConvexBody, lifted: &ConvexBody) -> crate::error::Result<(f64, f64)> {
    let target = lifted.geometry().kind();
    let mut roundtrip = 0f64;
    for p in std::iter::once(body.witness()).chain(body.vertices()) {
        let back = to_chart(&project(p, target)?)?;
        roundtrip = roundtrip.max((back.coords() - p.coords()).amax());
    }
    let mut metric = 0f64;
    for k in 0..32 {
        let mut rng = rng_for(0, "project-verify", k);
        let u = random_interior_point(&mut rng, body, 0.9);
        let v = random_interior_point(&mut rng, body, 0.9);
        let h0 = hilbert(body, &u, &v)?;
        let h1 = hilbert(lifted, &project(&u, target)?, &project(&v, target)?)?;
        metric = metric.max((h0 - h1).abs());
    }
    Ok((roundtrip, metric))
}

fn verify_points(points: &[Point], json: &str) -> crate::error::Result<f64> {
    #[derive(serde::Deserialize)]
    struct Points {
        geometry: ModelKind,
        dim: usize,
        points: Vec<Vec<f64>>,
    }
    let parsed: Points = serde_json::from_str(json).map_err(|e| GeometryError::InvalidBody(e.to_string()))?;
    let g = Geometry::new(parsed.geometry, parsed.dim)?;
    let mut worst = 0f64;
    for (p, q) in points.iter().zip(&parsed.points) {
        let back = to_chart(&Point::from_slice(g, q)?)?;
        worst = worst.max((back.coords() - p.coords()).amax());
    }
    Ok(worst)
}

pub fn cmd_check(args: &CheckArgs) -> Result<Output, Failure> {
    if args.samples == 0 {
        return Err(Failure::input("--samples must be positive"));
    }
    if !(args.tol > 0.0) {
        return Err(Failure::input("--tol must be positive"));
    }
    let cfg = RunConfig {
        seed: args.seed,
        samples: args.samples,
        tol_scale: args.tol,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .map_err(Failure::input)?;
    let report = pool.install(|| checks::run(args.suite, &cfg));
    Ok(Output {
        stdout: report.render(),
        stderr: format!("wall time {:.2} s\n", report.wall_time.as_secs_f64()),
        code: if report.passed() { EXIT_OK } else { EXIT_PROPERTY_FAILED },
    })
}

pub fn execute(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Dist(a) => cmd_dist(a),
        Command::Norm(a) => cmd_norm(a),
        Command::Project(a) => cmd_project(a),
        Command::Check(a) => cmd_check(a),
    }
}

/// Parses `args`, runs the command, writes its output and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            eprint!("{}", out.stderr);
            out.code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig12(2f64.ln()), "0.693147180560");
        assert_eq!(format_sig12(0.5 * 3f64.ln()), "0.549306144334");
        assert_eq!(format_sig12(0.0), "0.000000000000");
        assert_eq!(format_sig12(-0.0), "0.000000000000");
        assert_eq!(format_sig12(123.456), "123.456000000");
        assert_eq!(format_sig12(9.9999999999996), "10.0000000000");
        assert_eq!(format_sig12(-1.5e-3), "-0.00150000000000");
        assert_eq!(format_sig12(6.123233995736766e-17), "6.12323399574e-17");
        assert_eq!(format_sig12(2.5e13), "2.50000000000e13");
    }

    #[test]
    fn points_parse_with_commas_or_spaces() {
        assert_eq!(parse_numbers("0.5, -1 2").unwrap(), vec![0.5, -1.0, 2.0]);
        assert_eq!(parse_numbers("x").unwrap_err().code, EXIT_INPUT);
    }
}
