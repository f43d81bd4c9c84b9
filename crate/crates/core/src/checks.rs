//! Seeded property sweeps behind `funkgeo check`.
//!
//! Every sample draws from its own RNG stream (`rng_for(seed, stream, i)`)
//! and samples are evaluated in parallel, then reduced to the worst value in
//! index order, so a report depends only on the seed and the sample count.

use std::fmt::Write as _;
use std::time::Duration;

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bodies::{ConvexBody, Shape};
use crate::error::{GeometryError, Result};
use crate::funk::{
    additivity_defect, convexity_witness_search, finsler_norm, funk_f1, funk_f2,
    hilbert, ideal_triangle_f1, ideal_triangle_funk, ideal_triangle_funk_as_printed, indicatrix_sample,
    path_length_f3, second_difference, HalfPlanePoint, PolyPath,
};
use crate::projective::{
    hilbert_isometry_residual, lift_body, linear_cross_ratio_residual, lorentz_hilbert_residual,
    pencil_projection_residual, perspectivity_checks, project, random_chart_pencil,
    random_lorentz, random_perspectivity_config, CollinearQuadruple,
};
use crate::sampling::{
    all_geometries, random_ball, random_body, random_interior_point, random_point_near, random_polytope,
    random_unit_tangent, rng_for,
};
use crate::spaces::{dist, exp, unit_tangent, Geometry, ModelKind, Point, TangentVector};
use crate::trig::{
    cevian_residual, menelaus_points, menelaus_product, random_triangle, right_triangle, right_triangle_residual,
    side_range, sine_rule_residual, Line,
};

/// Step of the finite-difference checks along geodesics.
pub const SECOND_DIFFERENCE_STEP: f64 = 1e-2;
pub const DERIVATIVE_STEP: f64 = 1e-5;
/// Panel count of the fine Finsler-length quadrature.
pub const FINE_SUBDIVISIONS: usize = 1 << 14;
/// Displacement used to test that Menelaus detects misaligned points.
pub const MENELAUS_PERTURBATION: f64 = 1e-3;
/// Restarts of the hyperbolic convexity-witness search.
pub const WITNESS_RESTARTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Suite {
    Funk,
    Projective,
    Trig,
    Convexity,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Funk => "funk",
            Suite::Projective => "projective",
            Suite::Trig => "trig",
            Suite::Convexity => "convexity",
            Suite::All => "all",
        }
    }
}

/// How the worst sample is compared with the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Largest value `<= tol`.
    AtMost,
    /// Smallest value `>= tol`.
    AtLeast,
    /// Smallest value `> tol`.
    Above,
    /// Smallest value `< tol`.
    Below,
}

impl Rule {
    fn symbol(self) -> &'static str {
        match self {
            Rule::AtMost => "<=",
            Rule::AtLeast => ">=",
            Rule::Above => ">",
            Rule::Below => "<",
        }
    }

    fn holds(self, value: f64, tol: f64) -> bool {
        match self {
            Rule::AtMost => value <= tol,
            Rule::AtLeast => value >= tol,
            Rule::Above => value > tol,
            Rule::Below => value < tol,
        }
    }

    /// Worst of a set of values under this rule (NaN is worst of all).
    fn worst(self, values: impl Iterator<Item = f64>) -> f64 {
        let take_max = self == Rule::AtMost;
        values.fold(if take_max { f64::NEG_INFINITY } else { f64::INFINITY }, |acc, v| {
            if acc.is_nan() || v.is_nan() {
                f64::NAN
            } else if take_max {
                acc.max(v)
            } else {
                acc.min(v)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub rule: Rule,
    /// Worst value over the samples.
    pub value: f64,
    pub tolerance: f64,
    pub samples: usize,
    /// Samples whose evaluation returned an error.
    pub errors: usize,
    pub first_error: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.errors == 0 && self.samples > 0 && self.rule.holds(self.value, self.tolerance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    /// Base sample count; individual checks use fixed fractions of it.
    pub samples: usize,
    /// Multiplies every tolerance.
    pub tol_scale: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            samples: 1000,
            tol_scale: 1.0,
        }
    }
}

impl RunConfig {
    /// `samples / divisor`, at least 1.
    fn count(&self, divisor: usize) -> usize {
        (self.samples / divisor).max(1)
    }

    fn sweep<const K: usize, F>(&self, count: usize, f: F) -> Sweep<K>
    where
        F: Fn(u64) -> Result<[f64; K]> + Sync + Send,
    {
        let results: Vec<Result<[f64; K]>> = (0..count as u64).into_par_iter().map(f).collect();
        Sweep {
            results,
            tol_scale: self.tol_scale,
        }
    }
}

/// Per-sample values of a sweep with `K` outputs per sample.
struct Sweep<const K: usize> {
    results: Vec<Result<[f64; K]>>,
    tol_scale: f64,
}

impl<const K: usize> Sweep<K> {
    fn check(&self, k: usize, name: impl Into<String>, rule: Rule, tol: f64) -> CheckResult {
        let ok = self.results.iter().filter_map(|r| r.as_ref().ok());
        let first_error = self.results.iter().find_map(|r| r.as_ref().err().map(|e| e.to_string()));
        CheckResult {
            name: name.into(),
            rule,
            value: rule.worst(ok.map(|v| v[k])),
            tolerance: tol * self.tol_scale,
            samples: self.results.len(),
            errors: self.results.iter().filter(|r| r.is_err()).count(),
            first_error,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<CheckResult>,
    pub wall_time: Duration,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    /// Text report; excludes the wall time so equal seeds give equal bytes.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} seed={} samples={}", self.command, self.seed, self.samples);
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = write!(
                out,
                "{:<width$}  {:>14.6e} {:>2} {:<8.1e} n={:<5} {}",
                c.name,
                c.value,
                c.rule.symbol(),
                c.tolerance,
                c.samples,
                if c.passed() { "pass" } else { "FAIL" },
            );
            if c.errors > 0 {
                let _ = write!(out, " errors={} ({})", c.errors, c.first_error.as_deref().unwrap_or(""));
            }
            out.push('\n');
        }
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        let _ = writeln!(
            out,
            "{passed}/{} checks passed: {}",
            self.checks.len(),
            if self.passed() { "pass" } else { "fail" }
        );
        out
    }
}

/// Runs `suite` on the current rayon pool.
pub fn run(suite: Suite, cfg: &RunConfig) -> RunReport {
    let start = std::time::Instant::now();
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Funk {
        funk_suite(cfg, &mut checks);
    }
    if all || suite == Suite::Projective {
        projective_suite(cfg, &mut checks);
    }
    if all || suite == Suite::Trig {
        trig_suite(cfg, &mut checks);
    }
    if all || suite == Suite::Convexity {
        convexity_suite(cfg, &mut checks);
    }
    RunReport {
        command: format!("check {}", suite.name()),
        seed: cfg.seed,
        samples: cfg.samples,
        checks,
        wall_time: start.elapsed(),
    }
}

/// Calls `f` until it yields a configuration; gives up after 10 000 tries.
fn retry<T>(mut f: impl FnMut() -> Option<T>) -> Result<T> {
    (0..10_000)
        .find_map(|_| f())
        .ok_or_else(|| GeometryError::Degenerate("no admissible configuration found".into()))
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn exit_param(body: &ConvexBody, x: &Point, xi: &TangentVector) -> Result<f64> {
    body.ray_exit(x, xi)?
        .map(|h| h.param)
        .ok_or_else(|| GeometryError::Degenerate("ray does not leave the body".into()))
}

// ---------------------------------------------------------------- funk

fn funk_suite(cfg: &RunConfig, out: &mut Vec<CheckResult>) {
    for g in all_geometries() {
        let stream = |s: &str| format!("funk.{s}.{g}");
        let rng = |s: &str, i| rng_for(cfg.seed, &stream(s), i);

        let agreement = cfg.sweep(cfg.count(10), |i| agreement_sample(&mut rng("agreement", i), g));
        out.push(agreement.check(0, format!("funk.f1_vs_f2[{g}]"), Rule::AtMost, 1e-9));
        out.push(agreement.check(1, format!("funk.f3_vs_f1[{g}]"), Rule::AtMost, 1e-6));
        out.push(agreement.check(2, format!("funk.f3_order[{g}]"), Rule::AtLeast, 1.9));

        let axioms = cfg.sweep(cfg.samples, |i| {
            let mut r = rng("axioms", i);
            let body = random_body(&mut r, g);
            let [x, y, z] = [0; 3].map(|_| random_interior_point(&mut r, &body, 0.95));
            let on_line = crate::sampling::point_on_line(&x, &z, r.random_range(0.1..0.9))?;
            Ok([
                funk_f1(&body, &x, &x)?.abs(),
                additivity_defect(&body, &x, &y, &z)?,
                additivity_defect(&body, &x, &on_line, &z)?.abs(),
            ])
        });
        out.push(axioms.check(0, format!("funk.identity[{g}]"), Rule::AtMost, 0.0));
        out.push(axioms.check(1, format!("funk.triangle_defect[{g}]"), Rule::AtLeast, -1e-12));
        out.push(axioms.check(2, format!("funk.collinear_defect[{g}]"), Rule::AtMost, 1e-9));

        let shared = cfg.sweep(cfg.samples, |i| shared_facet_sample(&mut rng("shared-facet", i), g));
        out.push(shared.check(0, format!("funk.shared_facet_defect[{g}]"), Rule::AtMost, 1e-9));

        let strict = cfg.sweep(cfg.samples, |i| strict_ball_sample(&mut rng("ball-strict", i), g));
        out.push(strict.check(0, format!("funk.ball_defect[{g}]"), Rule::Above, 0.0));

        let radial = cfg.sweep(cfg.count(10), |i| {
            let mut r = rng("radial", i);
            let body = random_ball(&mut r, g);
            let Shape::Ball { center, radius } = body.shape() else { unreachable!() };
            let d = r.random_range(0.0..0.9) * radius;
            let y = exp(center, &random_unit_tangent(&mut r, center), d)?;
            let closed = (g.weight(*radius) / g.weight(radius - d)).ln();
            Ok([(funk_f1(&body, center, &y)? - closed).abs()])
        });
        out.push(radial.check(0, format!("funk.radial_closed_form[{g}]"), Rule::AtMost, 1e-12));

        let norm = cfg.sweep(cfg.count(5), |i| {
            let mut r = rng("finsler", i);
            let body = random_body(&mut r, g);
            let x = random_interior_point(&mut r, &body, 0.8);
            let xi = random_unit_tangent(&mut r, &x);
            let y = exp(&x, &xi, DERIVATIVE_STEP)?;
            let slope = funk_f1(&body, &x, &y)? / DERIVATIVE_STEP;
            Ok([relative(slope, finsler_norm(&body, &xi)?)])
        });
        out.push(norm.check(0, format!("funk.finsler_derivative[{g}]"), Rule::AtMost, 1e-3));

        let center = cfg.sweep(cfg.count(10), |i| {
            let mut r = rng("ball-center", i);
            let body = random_ball(&mut r, g);
            let Shape::Ball { center, radius } = body.shape() else { unreachable!() };
            let xi = random_unit_tangent(&mut r, center).scaled(r.random_range(0.1..3.0));
            let expected = xi.norm() * g.weight_log_derivative(*radius);
            Ok([relative(finsler_norm(&body, &xi)?, expected)])
        });
        out.push(center.check(0, format!("funk.ball_center_norm[{g}]"), Rule::AtMost, 1e-12));

        if g.dim() == 2 {
            let convex = cfg.sweep(cfg.count(10), |i| indicatrix_sample_excess(&mut rng("indicatrix", i), g));
            out.push(convex.check(0, format!("funk.indicatrix_midpoint_excess[{g}]"), Rule::AtMost, 1e-10));
        }
    }

    let ideal = cfg.sweep(cfg.count(20), |i| {
        let mut r = rng_for(cfg.seed, "funk.ideal-triangle", i);
        let point = |r: &mut ChaCha8Rng| {
            let re: f64 = r.random_range(0.05..0.95);
            let floor = (0.25 - (re - 0.5) * (re - 0.5)).sqrt();
            HalfPlanePoint::new(re, floor + r.random_range(0.05..2.0))
        };
        let (a, b, value) = retry(|| {
            let (a, b) = (point(&mut r).ok()?, point(&mut r).ok()?);
            ideal_triangle_funk(a, b).ok().map(|v| (a, b, v))
        })?;
        let f1 = ideal_triangle_f1(a, b)?;
        Ok([(value - f1).abs(), (ideal_triangle_funk_as_printed(a, b)? + f1).abs()])
    });
    out.push(ideal.check(0, "funk.ideal_triangle_closed_form", Rule::AtMost, 1e-9));
    out.push(ideal.check(1, "funk.ideal_triangle_printed_is_reversed", Rule::AtMost, 1e-9));
}

/// `[|F1 - F2|, |F3 - F1| at 2^14 panels, refinement order 64 -> 128]`.
fn agreement_sample(r: &mut ChaCha8Rng, g: Geometry) -> Result<[f64; 3]> {
    let body = random_body(r, g);
    let x = random_interior_point(r, &body, 0.9);
    let y = random_interior_point(r, &body, 0.9);
    let gap = (funk_f1(&body, &x, &y)? - funk_f2(&body, &x, &y)?).abs();

    let xi = random_unit_tangent(r, &x);
    let exit = exit_param(&body, &x, &xi)?;
    let z = exp(&x, &xi, r.random_range(0.05..0.8) * exit)?;
    let exact = funk_f1(&body, &x, &z)?;
    let path = PolyPath::segment(x, z, FINE_SUBDIVISIONS)?;
    let err = |n: usize| -> Result<f64> { Ok((path_length_f3(&body, &path.with_subdivisions(n)?)? - exact).abs()) };
    let order = (err(64)? / err(128)?).log2();
    Ok([gap, err(FINE_SUBDIVISIONS)?, order])
}

/// Defect of `(x, y, z)` where the rays `x -> y` and `y -> z` leave through
/// the same facet and the three points are not collinear.
fn shared_facet_sample(r: &mut ChaCha8Rng, g: Geometry) -> Result<[f64; 1]> {
    let k = r.random_range((g.dim() + 1).max(3)..=8);
    let body = random_polytope(r, g, k);
    let (x, y, z) = retry(|| {
        let x = random_interior_point(r, &body, 0.9);
        let y = random_interior_point(r, &body, 0.9);
        let ahead = unit_tangent(&x, &y).ok()?;
        let hit = body.ray_exit(&x, &ahead).ok()??;
        let facet = hit.facet_indices[0];
        let onward = unit_tangent(&y, &hit.point).ok()?;
        (0..50).find_map(|_| {
            let zeta = random_unit_tangent(r, &y);
            let turn = zeta.angle_to(&onward).ok()?;
            if !(0.05..std::f64::consts::PI - 0.05).contains(&turn) {
                return None;
            }
            let h = body.ray_exit(&y, &zeta).ok()??;
            if !h.facet_indices.contains(&facet) {
                return None;
            }
            let z = exp(&y, &zeta, r.random_range(0.1..0.9) * h.param).ok()?;
            Some((x.clone(), y.clone(), z))
        })
    })?;
    Ok([additivity_defect(&body, &x, &y, &z)?.abs()])
}

/// Triangle defect of a non-collinear triple in a ball (strictly positive).
fn strict_ball_sample(r: &mut ChaCha8Rng, g: Geometry) -> Result<[f64; 1]> {
    let body = random_ball(r, g);
    let (x, y, z) = retry(|| {
        let [x, y, z] = [0; 3].map(|_| random_interior_point(r, &body, 0.9));
        let scale = 0.05 * if g.kind() == ModelKind::Euclidean { 1.0 } else { 0.2 };
        if dist(&x, &y).ok()? < scale || dist(&y, &z).ok()? < scale {
            return None;
        }
        let turn = unit_tangent(&y, &x).ok()?.angle_to(&unit_tangent(&y, &z).ok()?).ok()?;
        (0.2..std::f64::consts::PI - 0.2).contains(&turn).then_some((x, y, z))
    })?;
    Ok([additivity_defect(&body, &x, &y, &z)?])
}

/// `max p(midpoint) - 1` over consecutive indicatrix samples at 64 angles.
fn indicatrix_sample_excess(r: &mut ChaCha8Rng, g: Geometry) -> Result<[f64; 1]> {
    let body = random_body(r, g);
    let x = random_interior_point(r, &body, 0.8);
    let samples = indicatrix_sample(&body, &x, 64)?;
    let vectors: Vec<&TangentVector> = samples
        .iter()
        .map(|s| s.vector.as_ref().ok_or(GeometryError::Degenerate("unbounded direction".into())))
        .collect::<Result<_>>()?;
    let mut excess = f64::NEG_INFINITY;
    for k in 0..vectors.len() {
        let (a, b) = (vectors[k], vectors[(k + 1) % vectors.len()]);
        let mid = TangentVector::projected(x.clone(), (a.vec() + b.vec()) * 0.5);
        excess = excess.max(finsler_norm(&body, &mid)? - 1.0);
    }
    Ok([excess])
}

// ---------------------------------------------------------- projective

fn projective_suite(cfg: &RunConfig, out: &mut Vec<CheckResult>) {
    let targets = [ModelKind::Spherical, ModelKind::Hyperbolic];
    for dim in [2, 3] {
        for target in targets {
            let stream = format!("projective.perspectivity.{dim}");
            let s = cfg.sweep(cfg.count(2), |i| {
                let c = random_perspectivity_config(&mut rng_for(cfg.seed, &stream, i), dim);
                let r = perspectivity_checks(&c, target)?;
                Ok([r.chord, r.cross_ratio, r.hilbert, r.pencil])
            });
            let tag = format!("{target}({dim})");
            out.push(s.check(0, format!("projective.chord[{tag}]"), Rule::AtMost, 1e-12));
            out.push(s.check(1, format!("projective.cross_ratio[{tag}]"), Rule::AtMost, 1e-10));
            out.push(s.check(2, format!("projective.hilbert_isometry[{tag}]"), Rule::AtMost, 1e-9));
            if dim == 2 {
                out.push(s.check(3, format!("projective.pencil[{tag}]"), Rule::AtMost, 1e-10));
            }
        }
    }

    for radius in [0.3, 0.6, 0.9] {
        let disc = ConvexBody::ball(Geometry::euclidean(2).origin(), radius).expect("valid disc");
        for target in targets {
            let lifted = lift_body(&disc, target).expect("origin-centred disc lifts");
            let s = cfg.sweep(cfg.count(10), |i| {
                let mut r = rng_for(cfg.seed, &format!("projective.disc.{radius}"), i);
                let u = random_interior_point(&mut r, &disc, 0.95);
                let v = random_interior_point(&mut r, &disc, 0.95);
                Ok([hilbert_isometry_residual(&disc, &lifted, &u, &v)?])
            });
            out.push(s.check(0, format!("projective.lifted_disc[{target} R={radius}]"), Rule::AtMost, 1e-9));
        }
    }

    // The unit disc lifts to the whole hyperbolic plane: its Hilbert metric
    // is the hyperbolic distance.
    let unit = ConvexBody::ball(Geometry::euclidean(2).origin(), 1.0).expect("valid disc");
    let s = cfg.sweep(cfg.count(10), |i| {
        let mut r = rng_for(cfg.seed, "projective.unit-disc", i);
        let rho: f64 = r.random_range(0.0..0.99);
        let theta: f64 = r.random_range(0.0..std::f64::consts::TAU);
        let y = Point::from_slice(Geometry::euclidean(2), &[rho * theta.cos(), rho * theta.sin()])?;
        let o = Geometry::euclidean(2).origin();
        let closed = 0.5 * ((1.0 + rho) / (1.0 - rho)).ln();
        let lifted = dist(&project(&o, ModelKind::Hyperbolic)?, &project(&y, ModelKind::Hyperbolic)?)?;
        Ok([(hilbert(&unit, &o, &y)? - closed).abs().max((lifted - closed).abs())])
    });
    out.push(s.check(0, "projective.unit_disc_radial", Rule::AtMost, 1e-12));

    for dim in [2, 3] {
        let h = Geometry::hyperbolic(dim);
        let s = cfg.sweep(cfg.count(10), |i| {
            let mut r = rng_for(cfg.seed, &format!("projective.lorentz.{dim}"), i);
            let k = r.random_range((dim + 1).max(3)..=8);
            let body = random_polytope(&mut r, h, k);
            let m = random_lorentz(&mut r, dim, 1.0);
            let x = random_interior_point(&mut r, &body, 0.9);
            let y = random_interior_point(&mut r, &body, 0.9);
            Ok([lorentz_hilbert_residual(&body, &m, &x, &y)?])
        });
        out.push(s.check(0, format!("projective.lorentz_hilbert[{h}]"), Rule::AtMost, 1e-9));

        let sph = Geometry::spherical(dim);
        let s = cfg.sweep(cfg.count(10), |i| {
            let mut r = rng_for(cfg.seed, &format!("projective.linear.{dim}"), i);
            let q = spherical_quadruple(&mut r, sph)?;
            let m = DMatrix::from_fn(dim + 1, dim + 1, |a, b| {
                let noise: f64 = r.sample(StandardNormal);
                if a == b { 1.0 + 0.3 * noise } else { 0.3 * noise }
            });
            Ok([linear_cross_ratio_residual(&q, &m)?])
        });
        out.push(s.check(0, format!("projective.linear_cross_ratio[{sph}]"), Rule::AtMost, 1e-10));
    }
}

fn spherical_quadruple(r: &mut ChaCha8Rng, g: Geometry) -> Result<CollinearQuadruple> {
    let p = random_point_near(r, &g.origin(), 0.5);
    let xi = random_unit_tangent(r, &p);
    let t = retry(|| {
        let mut t: [f64; 4] = std::array::from_fn(|_| r.random_range(-0.5..0.5));
        t.sort_by(f64::total_cmp);
        t.windows(2).all(|w| w[1] - w[0] >= 0.02).then_some(t)
    })?;
    CollinearQuadruple::new([exp(&p, &xi, t[0])?, exp(&p, &xi, t[1])?, exp(&p, &xi, t[2])?, exp(&p, &xi, t[3])?])
}

// ---------------------------------------------------------------- trig

fn trig_suite(cfg: &RunConfig, out: &mut Vec<CheckResult>) {
    for g in [Geometry::euclidean(2), Geometry::spherical(2), Geometry::hyperbolic(2)] {
        let rng = |s: &str, i| rng_for(cfg.seed, &format!("trig.{s}.{g}"), i);
        let (lo, hi) = side_range(g);

        let s = cfg.sweep(cfg.samples, |i| {
            let mut r = rng("triangle", i);
            let t = random_triangle(&mut r, g);
            let d = exp(
                &t.vertices()[1],
                &unit_tangent(&t.vertices()[1], &t.vertices()[2])?,
                cevian_parameter(&mut r) * t.sides()[0],
            )?;
            Ok([sine_rule_residual(&t), cevian_residual(&t, &d)?])
        });
        out.push(s.check(0, format!("trig.sine_rule[{g}]"), Rule::AtMost, 1e-10));
        out.push(s.check(1, format!("trig.cevian[{g}]"), Rule::AtMost, 1e-10));

        let s = cfg.sweep(cfg.samples, |i| {
            let mut r = rng("right", i);
            let c = random_point_near(&mut r, &g.origin(), 0.5);
            let dir = random_unit_tangent(&mut r, &c);
            let t = right_triangle(&c, &dir, r.random_range(lo..hi), r.random_range(lo..hi))?;
            Ok([right_triangle_residual(&t)?])
        });
        out.push(s.check(0, format!("trig.right_triangle[{g}]"), Rule::AtMost, 1e-10));

        let s = cfg.sweep(cfg.samples, |i| menelaus_sample(&mut rng("menelaus", i), g));
        out.push(s.check(0, format!("trig.menelaus[{g}]"), Rule::AtMost, 1e-10));
        out.push(s.check(1, format!("trig.menelaus_perturbed[{g}]"), Rule::Above, 1e-10));

        let s = cfg.sweep(cfg.samples, |i| {
            Ok([pencil_projection_residual(&random_chart_pencil(&mut rng("pencil", i)), g.kind())?])
        });
        out.push(s.check(0, format!("trig.pencil[{g}]"), Rule::AtMost, 1e-10));
    }
}

/// Position of the cevian foot on `BC` as a fraction of `a`, inside or
/// outside the segment but away from `B` and `C`.
fn cevian_parameter(r: &mut ChaCha8Rng) -> f64 {
    loop {
        let s: f64 = r.random_range(-0.5..1.5);
        if s.abs() > 0.05 && (s - 1.0).abs() > 0.05 {
            return s;
        }
    }
}

/// `[|product - 1|, |perturbed product - 1|]` for a transversal through
/// interior points of `AB` and `AC`, with `A'` then moved along `BC`.
fn menelaus_sample(r: &mut ChaCha8Rng, g: Geometry) -> Result<[f64; 2]> {
    let far = if g.kind() == ModelKind::Spherical { 1.5 } else { 3.0 };
    let (t, pts) = retry(|| {
        let t = random_triangle(r, g);
        let [a, b, c] = t.vertices();
        let p = crate::sampling::point_on_line(a, b, r.random_range(0.2..0.8)).ok()?;
        let q = crate::sampling::point_on_line(a, c, r.random_range(0.2..0.8)).ok()?;
        let pts = menelaus_points(&t, &Line::through(&p, &q).ok()?).ok()?;
        let ok = t.vertices().iter().all(|v| {
            pts.iter()
                .all(|p| dist(v, p).is_ok_and(|d| (0.05..=far).contains(&d)))
        });
        ok.then_some((t, pts))
    })?;
    let exact = (menelaus_product(&t, &pts[0], &pts[1], &pts[2])? - 1.0).abs();
    let b = &t.vertices()[1];
    let moved = exp(b, &unit_tangent(b, &pts[0])?, dist(b, &pts[0])? + MENELAUS_PERTURBATION)?;
    let perturbed = (menelaus_product(&t, &moved, &pts[1], &pts[2])? - 1.0).abs();
    Ok([exact, perturbed])
}

// ----------------------------------------------------------- convexity

fn convexity_suite(cfg: &RunConfig, out: &mut Vec<CheckResult>) {
    let h = SECOND_DIFFERENCE_STEP;
    for g in [
        Geometry::euclidean(2),
        Geometry::euclidean(3),
        Geometry::spherical(2),
        Geometry::spherical(3),
    ] {
        let s = cfg.sweep(cfg.count(2), |i| {
            let mut r = rng_for(cfg.seed, &format!("convexity.{g}"), i);
            let body = random_body(&mut r, g);
            let x = random_interior_point(&mut r, &body, 0.9);
            let alpha = retry(|| {
                let y = random_interior_point(&mut r, &body, 0.9);
                let alpha = random_unit_tangent(&mut r, &y);
                [-h, h].iter().all(|&s| body.contains(&alpha.flow(s))).then_some(alpha)
            })?;
            Ok([second_difference(&body, &x, &alpha, 0.0, h)? / (h * h)])
        });
        out.push(s.check(0, format!("convexity.scaled_second_difference[{g}]"), Rule::AtLeast, -1e-8));
    }

    let triangle = ConvexBody::regular_polygon(Geometry::hyperbolic(2), 3, 0.5).expect("bounded triangle");
    let restarts = WITNESS_RESTARTS;
    let found = convexity_witness_search(&triangle, restarts, h, cfg.seed);
    out.push(CheckResult {
        name: "convexity.hyperbolic_witness[hyperbolic(2)]".into(),
        rule: Rule::Below,
        value: found.as_ref().map(|w| w.scaled).unwrap_or(f64::NAN),
        tolerance: -1e-6 * cfg.tol_scale,
        samples: restarts,
        errors: usize::from(found.is_err()),
        first_error: found.err().map(|e| e.to_string()),
    });
}
