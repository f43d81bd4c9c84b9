//! Cross ratios and the central projections from the affine chart
//! `{x_{n+1} = 1}` onto the upper hemisphere and onto the hyperboloid.
//!
//! Chart points are Euclidean points of dimension `n`; the projection of `u`
//! is the ray through `(u, 1)`. Both projections map straight lines to
//! geodesics (the same plane through the ambient origin) and preserve the
//! weighted cross ratio, hence Hilbert distances of convex bodies.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bodies::{ConvexBody, HalfSpace, Shape};
use crate::error::{GeometryError, Result};
use crate::funk::hilbert;
use crate::sampling::{random_interior_point, simplex_directions};
use crate::spaces::{dist, unit_tangent, Geometry, Hyperplane, ModelKind, Point, Vector};
use crate::trig::{pencil_residual, weighted_cross_ratio, Line, Pencil};

/// Collinearity tolerance for [`CollinearQuadruple`].
pub const COLLINEAR_TOL: f64 = 1e-9;

/// Four pairwise distinct points on one geodesic, in order `A1..A4`.
#[derive(Debug, Clone)]
pub struct CollinearQuadruple {
    points: [Point; 4],
}

/// Distance-like residual of `p` from the geodesic through `a` and `b`.
fn off_line(a: &Point, b: &Point, p: &Point) -> f64 {
    let g = a.geometry();
    let lift = |x: &Point| -> Vector {
        if g.is_curved() {
            x.coords().clone()
        } else {
            let mut v = x.coords().clone().insert_row(g.dim(), 1.0);
            v /= v.norm();
            v
        }
    };
    // Component of p orthogonal to span(a, b), relative to |p|.
    let (a, b, p) = (lift(a), lift(b), lift(p));
    let e1 = a.normalize();
    let b_perp = &b - &e1 * e1.dot(&b);
    let e2 = b_perp.normalize();
    let r = &p - &e1 * e1.dot(&p) - &e2 * e2.dot(&p);
    r.norm() / p.norm()
}

impl CollinearQuadruple {
    pub fn new(points: [Point; 4]) -> Result<Self> {
        let g = points[0].geometry();
        if points.iter().any(|p| p.geometry() != g) {
            return Err(GeometryError::GeometryMismatch);
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if dist(&points[i], &points[j])? <= 1e-12 {
                    return Err(GeometryError::CoincidentPoints);
                }
            }
        }
        for p in &points[1..3] {
            let r = off_line(&points[0], &points[3], p);
            if r > COLLINEAR_TOL {
                return Err(GeometryError::Precondition(format!(
                    "points are not collinear (residual {r:e})"
                )));
            }
        }
        if g.kind() == ModelKind::Spherical {
            let s = points.iter().fold(Vector::zeros(g.ambient_dim()), |acc, p| acc + p.coords());
            if points.iter().any(|p| p.coords().dot(&s) <= 0.0) {
                return Err(GeometryError::HemisphereViolation);
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Point; 4] {
        &self.points
    }
}

/// Unsigned cross ratio `[A2, A3, A4, A1] = w(A2A4)/w(A3A4) * w(A3A1)/w(A2A1)`.
pub fn cross_ratio(q: &CollinearQuadruple) -> f64 {
    let [a1, a2, a3, a4] = &q.points;
    weighted_cross_ratio([a1, a2, a3, a4]).expect("validated quadruple")
}

fn homogeneous(u: &Point) -> Result<Vector> {
    if u.geometry().is_curved() {
        return Err(GeometryError::GeometryMismatch);
    }
    Ok(u.coords().clone().insert_row(u.geometry().dim(), 1.0))
}

/// `P_s(u) = (u, 1) / |(u, 1)|`, a point of the open upper hemisphere.
pub fn project_to_sphere(u: &Point) -> Result<Point> {
    let h = homogeneous(u)?;
    Point::project(Geometry::spherical(u.geometry().dim()), h)
}

/// `P_h(u) = (u, 1) / sqrt(1 - |u|^2)` for `|u| < 1`.
pub fn project_to_hyperboloid(u: &Point) -> Result<Point> {
    let h = homogeneous(u)?;
    if u.coords().norm() >= 1.0 {
        return Err(GeometryError::InvalidPoint("chart point outside the unit ball".into()));
    }
    Point::project(Geometry::hyperbolic(u.geometry().dim()), h)
}

/// Projection onto the model of `target` (identity for Euclidean).
pub fn project(u: &Point, target: ModelKind) -> Result<Point> {
    match target {
        ModelKind::Euclidean => {
            homogeneous(u)?;
            Ok(u.clone())
        }
        ModelKind::Spherical => project_to_sphere(u),
        ModelKind::Hyperbolic => project_to_hyperboloid(u),
    }
}

/// Inverse of the projections: rescale to last coordinate 1 and drop it.
/// Fails on the equator and the lower hemisphere.
pub fn to_chart(x: &Point) -> Result<Point> {
    let g = x.geometry();
    if !g.is_curved() {
        return Ok(x.clone());
    }
    let c = x.coords();
    let last = c[g.dim()];
    if !(last > 1e-12) {
        return Err(GeometryError::InvalidPoint("point is not in the upper hemisphere".into()));
    }
    Point::new(Geometry::euclidean(g.dim()), c.rows(0, g.dim()) / last)
}

/// Lifts a Euclidean body from the chart to the hemisphere or hyperboloid.
///
/// A facet `{a.u > b}` becomes the central half-space with normal `(a, -b)`
/// (sphere) or Minkowski normal `(a, b)` (hyperboloid). Balls lift only when
/// centred at the chart origin: `D_R` becomes the cap of radius `atan R` or
/// the hyperbolic ball of radius `atanh R`.
pub fn lift_body(body: &ConvexBody, target: ModelKind) -> Result<ConvexBody> {
    let g = body.geometry();
    if g.is_curved() {
        return Err(GeometryError::GeometryMismatch);
    }
    if target == ModelKind::Euclidean {
        return Ok(body.clone());
    }
    if !body.flags().bounded {
        return Err(GeometryError::Unsupported("only bounded bodies can be lifted".into()));
    }
    let n = g.dim();
    let tg = Geometry::new(target, n)?;
    let witness = project(body.witness(), target)?;
    match body.shape() {
        Shape::Ball { center, radius } => {
            if center.coords().norm() != 0.0 {
                return Err(GeometryError::Unsupported(
                    "only balls centred at the chart origin lift to metric balls".into(),
                ));
            }
            let r = match target {
                ModelKind::Spherical => radius.atan(),
                _ if *radius < 1.0 => radius.atanh(),
                _ => {
                    return Err(GeometryError::InvalidBody("disc leaves the unit ball".into()));
                }
            };
            ConvexBody::ball_with_witness(tg.origin(), r, witness)
        }
        Shape::Polytope(facets) => {
            if target == ModelKind::Hyperbolic
                && body.vertices().iter().any(|v| v.coords().norm() >= 1.0)
            {
                return Err(GeometryError::InvalidBody("body leaves the unit ball".into()));
            }
            let lifted = facets
                .iter()
                .map(|f| {
                    let p = f.plane();
                    let last = if target == ModelKind::Spherical { -p.offset() } else { p.offset() };
                    let normal = p.normal().clone().insert_row(n, last);
                    Hyperplane::central(tg, normal).map(HalfSpace::new)
                })
                .collect::<Result<Vec<_>>>()?;
            ConvexBody::polytope(tg, lifted, witness)
        }
    }
}

/// Chart distance from the origin to the line through `u` and `v`.
fn origin_to_line(u: &Vector, v: &Vector) -> f64 {
    let d = v - u;
    let t = -u.dot(&d) / d.norm_squared();
    (u + d * t).norm()
}

/// Relative residual of the chord identity for the projection of `u`, `v`:
/// `sin d * |(u,1)| |(v,1)| = |u - v| sqrt(1 + rho^2)` on the sphere and
/// `sinh d * sqrt(1-|u|^2) sqrt(1-|v|^2) = |u - v| sqrt(1 - rho^2)` on the
/// hyperboloid, with `rho` the distance from the origin to the chord's line.
/// For chords through the origin the root factor is 1.
pub fn chord_residual(u: &Point, v: &Point, target: ModelKind) -> Result<f64> {
    let (pu, pv) = (project(u, target)?, project(v, target)?);
    let d = dist(&pu, &pv)?;
    let (a, b) = (u.coords(), v.coords());
    let chord = (a - b).norm();
    if chord == 0.0 {
        return Err(GeometryError::CoincidentPoints);
    }
    let rho = origin_to_line(a, b);
    let (lhs, rhs) = match target {
        ModelKind::Euclidean => (d, chord),
        ModelKind::Spherical => (
            d.sin() * (1.0 + a.norm_squared()).sqrt() * (1.0 + b.norm_squared()).sqrt(),
            chord * (1.0 + rho * rho).sqrt(),
        ),
        ModelKind::Hyperbolic => (
            d.sinh() * (1.0 - a.norm_squared()).sqrt() * (1.0 - b.norm_squared()).sqrt(),
            chord * (1.0 - rho * rho).sqrt(),
        ),
    };
    Ok((lhs - rhs).abs() / rhs)
}

/// Relative change of the cross ratio of a chart quadruple under projection.
pub fn cross_ratio_residual(q: &CollinearQuadruple, target: ModelKind) -> Result<f64> {
    let lifted: Vec<Point> = q.points.iter().map(|p| project(p, target)).collect::<Result<_>>()?;
    let lq = CollinearQuadruple::new(lifted.try_into().expect("four points"))?;
    let (a, b) = (cross_ratio(q), cross_ratio(&lq));
    Ok((a - b).abs() / a)
}

/// `|H_lifted(P u, P v) - H_body(u, v)|`.
pub fn hilbert_isometry_residual(
    body: &ConvexBody,
    lifted: &ConvexBody,
    u: &Point,
    v: &Point,
) -> Result<f64> {
    let target = lifted.geometry().kind();
    let h0 = hilbert(body, u, v)?;
    let h1 = hilbert(lifted, &project(u, target)?, &project(v, target)?)?;
    Ok((h0 - h1).abs())
}

/// Pencil of four chart lines through `vertex` with two transversals, all
/// given by their chart covectors.
#[derive(Debug, Clone)]
pub struct ChartPencil {
    pub vertex: Point,
    /// Chart directions of the four lines.
    pub directions: [Vector; 4],
    pub transversals: [Vector; 2],
}

/// Transversal independence of the pencil's cross ratio after projecting to
/// `target` (which must be planar), together with agreement with the
/// Euclidean value in the chart.
pub fn pencil_projection_residual(p: &ChartPencil, target: ModelKind) -> Result<f64> {
    let g = Geometry::new(target, 2)?;
    let chart = Geometry::euclidean(2);
    let vertex = project(&p.vertex, target)?;
    let mut rays = Vec::with_capacity(4);
    for d in &p.directions {
        let q = Point::new(chart, p.vertex.coords() + d * 0.25)?;
        rays.push(unit_tangent(&vertex, &project(&q, target)?)?);
    }
    let pencil = Pencil {
        vertex: vertex.clone(),
        rays: rays.try_into().expect("four rays"),
    };
    let l1 = Line::from_covector(g, p.transversals[0].clone())?;
    let l2 = Line::from_covector(g, p.transversals[1].clone())?;
    let within = pencil_residual(&pencil, &l1, &l2, Some(&vertex))?;

    let chart_pencil = Pencil {
        vertex: p.vertex.clone(),
        rays: p
            .directions
            .clone()
            .map(|d| crate::spaces::TangentVector::projected(p.vertex.clone(), d.normalize())),
    };
    let cl = Line::from_covector(chart, p.transversals[0].clone())?;
    let tr = chart_pencil.trace(&cl, None)?;
    let euclid = weighted_cross_ratio([&tr[0], &tr[1], &tr[2], &tr[3]])?;
    let tt = pencil.trace(&l1, Some(&vertex))?;
    let lifted = weighted_cross_ratio([&tt[0], &tt[1], &tt[2], &tt[3]])?;
    Ok(within.max((euclid - lifted).abs() / euclid))
}

/// Worst residuals of one perspectivity configuration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PerspectivityReport {
    pub chord: f64,
    pub cross_ratio: f64,
    pub hilbert: f64,
    pub pencil: f64,
}

/// Inputs of [`perspectivity_checks`], all in the Euclidean chart.
#[derive(Debug, Clone)]
pub struct PerspectivityConfig {
    pub u: Point,
    pub v: Point,
    pub quadruple: CollinearQuadruple,
    pub body: ConvexBody,
    pub pair: (Point, Point),
    /// Only for planar configurations.
    pub pencil: Option<ChartPencil>,
}

pub fn perspectivity_checks(cfg: &PerspectivityConfig, target: ModelKind) -> Result<PerspectivityReport> {
    let lifted = lift_body(&cfg.body, target)?;
    Ok(PerspectivityReport {
        chord: chord_residual(&cfg.u, &cfg.v, target)?,
        cross_ratio: cross_ratio_residual(&cfg.quadruple, target)?,
        hilbert: hilbert_isometry_residual(&cfg.body, &lifted, &cfg.pair.0, &cfg.pair.1)?,
        pencil: match &cfg.pencil {
            Some(p) => pencil_projection_residual(p, target)?,
            None => 0.0,
        },
    })
}

/// Random element of the identity component of `O(n, 1)`: a spatial
/// rotation, a boost of rapidity up to `max_rapidity`, another rotation.
pub fn random_lorentz<R: Rng>(rng: &mut R, n: usize, max_rapidity: f64) -> DMatrix<f64> {
    let rotation = |rng: &mut R| -> DMatrix<f64> {
        let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let mut q = g.qr().q();
        if q.determinant() < 0.0 {
            q.column_mut(0).neg_mut();
        }
        let mut m = DMatrix::identity(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(&q);
        m
    };
    let phi = rng.random_range(-max_rapidity..max_rapidity);
    let mut boost = DMatrix::identity(n + 1, n + 1);
    boost[(0, 0)] = phi.cosh();
    boost[(n, n)] = phi.cosh();
    boost[(0, n)] = phi.sinh();
    boost[(n, 0)] = phi.sinh();
    rotation(rng) * boost * rotation(rng)
}

/// Image of a hyperbolic body under a Lorentz transformation.
pub fn lorentz_image(body: &ConvexBody, m: &DMatrix<f64>) -> Result<ConvexBody> {
    let g = body.geometry();
    if g.kind() != ModelKind::Hyperbolic {
        return Err(GeometryError::GeometryMismatch);
    }
    let map = |p: &Point| Point::project(g, m * p.coords());
    let witness = map(body.witness())?;
    match body.shape() {
        Shape::Ball { center, radius } => ConvexBody::ball_with_witness(map(center)?, *radius, witness),
        Shape::Polytope(facets) => {
            let f = facets
                .iter()
                .map(|f| Hyperplane::central(g, m * f.plane().normal()).map(HalfSpace::new))
                .collect::<Result<Vec<_>>>()?;
            ConvexBody::polytope(g, f, witness)
        }
    }
}

/// `|H(Lx, Ly) - H(x, y)|` for a Lorentz map `L` (which must preserve the
/// Hilbert metric of the transformed body).
pub fn lorentz_hilbert_residual(body: &ConvexBody, m: &DMatrix<f64>, x: &Point, y: &Point) -> Result<f64> {
    let g = body.geometry();
    let image = lorentz_image(body, m)?;
    let lx = Point::project(g, m * x.coords())?;
    let ly = Point::project(g, m * y.coords())?;
    Ok((hilbert(&image, &lx, &ly)? - hilbert(body, x, y)?).abs())
}

/// Relative change of a spherical cross ratio under `x -> Mx / |Mx|`.
pub fn linear_cross_ratio_residual(q: &CollinearQuadruple, m: &DMatrix<f64>) -> Result<f64> {
    let g = q.points[0].geometry();
    if g.kind() != ModelKind::Spherical {
        return Err(GeometryError::GeometryMismatch);
    }
    let image: Vec<Point> = q
        .points
        .iter()
        .map(|p| Point::project(g, m * p.coords()))
        .collect::<Result<_>>()?;
    // The image may leave every hemisphere; the sine-weighted ratio is still
    // defined, so skip the quadruple validation.
    let a = cross_ratio(q);
    let b = weighted_cross_ratio([&image[0], &image[1], &image[2], &image[3]])?;
    Ok((a - b).abs() / a)
}

/// Uniform direction in `R^dim`.
fn random_direction<R: Rng>(rng: &mut R, dim: usize) -> Vector {
    loop {
        let v = Vector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// Chart point at distance `U[0, radius]` from the origin.
pub fn random_chart_point<R: Rng>(rng: &mut R, dim: usize, radius: f64) -> Point {
    let r = rng.random_range(0.0..=radius);
    Point::new(Geometry::euclidean(dim), random_direction(rng, dim) * r).expect("finite")
}

/// Chart body inside the ball of radius 0.95: an origin-centred disc or a
/// bounded polytope with `max(dim + 1, 3)` to 8 facets.
pub fn random_chart_body<R: Rng>(rng: &mut R, dim: usize) -> ConvexBody {
    let g = Geometry::euclidean(dim);
    if rng.random_bool(0.25) {
        return ConvexBody::ball(g.origin(), rng.random_range(0.3..0.95)).expect("valid disc");
    }
    loop {
        let c = random_chart_point(rng, dim, 0.3);
        let k = rng.random_range((dim + 1).max(3)..=8);
        // A simplex of facets close to c keeps the body bounded and small.
        let near = if dim == 2 { 0.3 } else { 0.2 };
        let mut normals: Vec<(Vector, f64)> = simplex_directions(rng, dim)
            .into_iter()
            .map(|n| (n, rng.random_range(0.1..near)))
            .collect();
        while normals.len() < k {
            normals.push((random_direction(rng, dim), rng.random_range(0.1..0.5)));
        }
        let facets: Vec<HalfSpace> = normals
            .into_iter()
            .map(|(n, d)| {
                let offset = n.dot(c.coords()) + d;
                HalfSpace::new(Hyperplane::euclidean(g, -n, -offset).expect("unit normal"))
            })
            .collect();
        let Ok(body) = ConvexBody::polytope(g, facets, c) else { continue };
        if body.flags().bounded && body.vertices().iter().all(|v| v.coords().norm() < 0.95) {
            return body;
        }
    }
}

/// Four ordered points on a random chart line, within radius 0.85.
pub fn random_chart_quadruple<R: Rng>(rng: &mut R, dim: usize) -> CollinearQuadruple {
    let g = Geometry::euclidean(dim);
    loop {
        let p = random_chart_point(rng, dim, 0.4);
        let d = random_direction(rng, dim);
        let mut t: [f64; 4] = std::array::from_fn(|_| rng.random_range(-0.45..0.45));
        t.sort_by(f64::total_cmp);
        if t.windows(2).any(|w| w[1] - w[0] < 0.02) {
            continue;
        }
        let pts = t.map(|s| Point::new(g, p.coords() + &d * s).expect("finite"));
        if let Ok(q) = CollinearQuadruple::new(pts) {
            return q;
        }
    }
}

/// Planar pencil with its vertex within 0.3 of the origin and transversals at
/// distance 0.1 to 0.3 from it, so every trace point stays within 0.86.
pub fn random_chart_pencil<R: Rng>(rng: &mut R) -> ChartPencil {
    let vertex = random_chart_point(rng, 2, 0.3);
    let phi = rng.random_range(0.0..std::f64::consts::TAU);
    let offsets = loop {
        let mut t: [f64; 4] = std::array::from_fn(|_| rng.random_range(-0.8..0.8));
        t.sort_by(f64::total_cmp);
        if t.windows(2).all(|w| w[1] - w[0] >= 0.05) {
            break t;
        }
    };
    let unit = |a: f64| Vector::from_column_slice(&[a.cos(), a.sin()]);
    let transversal = |angle: f64, dist: f64| {
        let n = unit(angle);
        let c = n.dot(vertex.coords()) + dist;
        Vector::from_column_slice(&[n[0], n[1], -c])
    };
    let first = transversal(phi, rng.random_range(0.1..0.3));
    let tilt = rng.random_range(-0.2..0.2);
    let second = transversal(phi + tilt, rng.random_range(0.1..0.3));
    ChartPencil {
        directions: offsets.map(|t| unit(phi + t)),
        transversals: [first, second],
        vertex,
    }
}

/// Random chart configuration for [`perspectivity_checks`]; the pencil is
/// included for `dim = 2`.
pub fn random_perspectivity_config<R: Rng>(rng: &mut R, dim: usize) -> PerspectivityConfig {
    let (u, v) = loop {
        let u = random_chart_point(rng, dim, 0.9);
        let v = random_chart_point(rng, dim, 0.9);
        if (u.coords() - v.coords()).norm() > 1e-3 {
            break (u, v);
        }
    };
    let quadruple = random_chart_quadruple(rng, dim);
    let body = random_chart_body(rng, dim);
    let pair = (
        random_interior_point(rng, &body, 0.9),
        random_interior_point(rng, &body, 0.9),
    );
    let pencil = (dim == 2).then(|| random_chart_pencil(rng));
    PerspectivityConfig {
        u,
        v,
        quadruple,
        body,
        pair,
        pencil,
    }
}
