//! Planar trigonometry in the three geometries: sine rule, right triangles,
//! cevians, Menelaus, and cross ratios of pencils, each as a residual.
//!
//! Lines of the plane (`dim = 2`) are represented uniformly by a covector in
//! R^3: a point `p` is lifted to `(x, y, 1)` (Euclidean) or to its ambient
//! vector (curved), and lies on the line `l` iff `l . p = 0`.

use rand::Rng;

use crate::error::{GeometryError, Result};
use crate::sampling::{random_point_near, random_unit_tangent};
use crate::spaces::{cross3, dist, exp, unit_tangent, Geometry, ModelKind, Point, TangentVector, Vector};

/// Tolerance for incidence of a point with a line (relative).
pub const INCIDENCE_TOL: f64 = 1e-9;

fn lift(p: &Point) -> Vector {
    match p.geometry().kind() {
        ModelKind::Euclidean => Vector::from_column_slice(&[p.coords()[0], p.coords()[1], 1.0]),
        _ => p.coords().clone(),
    }
}

fn lift_direction(t: &TangentVector) -> Vector {
    match t.geometry().kind() {
        ModelKind::Euclidean => Vector::from_column_slice(&[t.vec()[0], t.vec()[1], 0.0]),
        _ => t.vec().clone(),
    }
}

fn require_planar(g: Geometry) -> Result<()> {
    if g.dim() != 2 {
        return Err(GeometryError::Unsupported("planar geometry (dim = 2) required".into()));
    }
    Ok(())
}

/// A complete geodesic of a planar geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    geometry: Geometry,
    covector: Vector,
}

impl Line {
    pub fn from_covector(geometry: Geometry, covector: Vector) -> Result<Self> {
        require_planar(geometry)?;
        let n = covector.norm();
        if covector.len() != 3 || !(n > 0.0) || !n.is_finite() {
            return Err(GeometryError::Degenerate("bad line covector".into()));
        }
        Ok(Self {
            geometry,
            covector: covector / n,
        })
    }

    /// The geodesic through two distinct points.
    pub fn through(p: &Point, q: &Point) -> Result<Self> {
        if p.geometry() != q.geometry() {
            return Err(GeometryError::GeometryMismatch);
        }
        let l = cross3(&lift(p), &lift(q));
        if l.norm() <= 1e-14 * lift(p).norm() * lift(q).norm() {
            return Err(GeometryError::CoincidentPoints);
        }
        Self::from_covector(p.geometry(), l)
    }

    /// The geodesic through `t.base()` with direction `t`.
    pub fn from_tangent(t: &TangentVector) -> Result<Self> {
        let l = cross3(&lift(t.base()), &lift_direction(t));
        if l.norm() == 0.0 {
            return Err(GeometryError::Degenerate("zero direction".into()));
        }
        Self::from_covector(t.geometry(), l)
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn covector(&self) -> &Vector {
        &self.covector
    }

    /// `|l . p| / |p|`: zero iff `p` is on the line.
    pub fn incidence_residual(&self, p: &Point) -> f64 {
        let x = lift(p);
        self.covector.dot(&x).abs() / x.norm()
    }

    /// Intersection point. On the sphere two antipodal points qualify and the
    /// one closer to `near` is returned (the north side if `near` is `None`).
    pub fn intersect(&self, other: &Line, near: Option<&Point>) -> Result<Point> {
        if self.geometry != other.geometry {
            return Err(GeometryError::GeometryMismatch);
        }
        let g = self.geometry;
        let k = cross3(&self.covector, &other.covector);
        if k.norm() <= 1e-14 {
            return Err(GeometryError::Degenerate("lines coincide".into()));
        }
        match g.kind() {
            ModelKind::Euclidean => {
                if k[2].abs() <= 1e-14 * k.norm() {
                    return Err(GeometryError::NoIntersection);
                }
                Point::new(g, Vector::from_column_slice(&[k[0] / k[2], k[1] / k[2]]))
            }
            ModelKind::Spherical => {
                let k = k.normalize();
                let sign = match near {
                    Some(p) => p.coords().dot(&k),
                    None => k[2],
                };
                Point::project(g, if sign < 0.0 { -k } else { k })
            }
            ModelKind::Hyperbolic => {
                let q = k[0] * k[0] + k[1] * k[1] - k[2] * k[2];
                if q >= -1e-14 * k.norm_squared() {
                    return Err(GeometryError::NoIntersection);
                }
                Point::project(g, if k[2] < 0.0 { -k } else { k })
            }
        }
    }
}

/// `w(a2 a4) / w(a3 a4) * w(a3 a1) / w(a2 a1)` for four points, without
/// checking collinearity.
pub(crate) fn weighted_cross_ratio(a: [&Point; 4]) -> Result<f64> {
    let g = a[0].geometry();
    let w = |p: &Point, q: &Point| -> Result<f64> {
        let d = dist(p, q)?;
        if d == 0.0 {
            return Err(GeometryError::CoincidentPoints);
        }
        Ok(g.weight(d))
    };
    Ok(w(a[1], a[3])? / w(a[2], a[3])? * w(a[2], a[0])? / w(a[1], a[0])?)
}

/// Triangle with derived sides and angles.
#[derive(Debug, Clone)]
pub struct Triangle {
    vertices: [Point; 3],
    sides: [f64; 3],
    angles: [f64; 3],
}

impl Triangle {
    pub fn new(a: Point, b: Point, c: Point) -> Result<Self> {
        let g = a.geometry();
        if b.geometry() != g || c.geometry() != g {
            return Err(GeometryError::GeometryMismatch);
        }
        let sides = [dist(&b, &c)?, dist(&c, &a)?, dist(&a, &b)?];
        if sides.iter().any(|&s| s <= 1e-9) {
            return Err(GeometryError::Degenerate("triangle has a vanishing side".into()));
        }
        if g.kind() == ModelKind::Spherical {
            let s = a.coords() + b.coords() + c.coords();
            if [&a, &b, &c].iter().any(|p| p.coords().dot(&s) <= 0.0) {
                return Err(GeometryError::HemisphereViolation);
            }
        }
        let angle = |p: &Point, q: &Point, r: &Point| -> Result<f64> {
            unit_tangent(p, q)?.angle_to(&unit_tangent(p, r)?)
        };
        let angles = [angle(&a, &b, &c)?, angle(&b, &c, &a)?, angle(&c, &a, &b)?];
        if angles.iter().any(|&t| t <= 1e-9 || t >= std::f64::consts::PI - 1e-9) {
            return Err(GeometryError::Degenerate("collinear vertices".into()));
        }
        Ok(Self {
            vertices: [a, b, c],
            sides,
            angles,
        })
    }

    pub fn geometry(&self) -> Geometry {
        self.vertices[0].geometry()
    }

    /// `A, B, C`.
    pub fn vertices(&self) -> &[Point; 3] {
        &self.vertices
    }

    /// `a, b, c`, opposite to `A, B, C`.
    pub fn sides(&self) -> [f64; 3] {
        self.sides
    }

    /// Interior angles at `A, B, C`.
    pub fn angles(&self) -> [f64; 3] {
        self.angles
    }

    /// Line through vertices `i` and `j`.
    fn side_line(&self, i: usize, j: usize) -> Result<Line> {
        Line::through(&self.vertices[i], &self.vertices[j])
    }

    fn centroid_hint(&self) -> Point {
        let g = self.geometry();
        let s = self.vertices.iter().fold(Vector::zeros(g.ambient_dim()), |acc, p| acc + p.coords());
        Point::project(g, s / 3.0).unwrap_or_else(|_| self.vertices[0].clone())
    }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Largest relative spread of `w(a)/sin A`, `w(b)/sin B`, `w(c)/sin C`.
pub fn sine_rule_residual(t: &Triangle) -> f64 {
    let g = t.geometry();
    let r: Vec<f64> = (0..3).map(|i| g.weight(t.sides[i]) / t.angles[i].sin()).collect();
    let hi = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = r.iter().copied().fold(f64::INFINITY, f64::min);
    relative(hi, lo)
}

/// Relative residual of `w(b) = w(c) sin B` for a triangle right-angled at `C`.
pub fn right_triangle_residual(t: &Triangle) -> Result<f64> {
    if (t.angles[2] - std::f64::consts::FRAC_PI_2).abs() > 1e-9 {
        return Err(GeometryError::Precondition("angle at C is not a right angle".into()));
    }
    let g = t.geometry();
    Ok(relative(g.weight(t.sides[1]), g.weight(t.sides[2]) * t.angles[1].sin()))
}

/// Relative residual of `w(DC)/w(BD) = (sin DAC / sin BAD) (sin B / sin C)`
/// for `D` on the line `BC`.
pub fn cevian_residual(t: &Triangle, d: &Point) -> Result<f64> {
    let [a, b, c] = &t.vertices;
    if t.side_line(1, 2)?.incidence_residual(d) > INCIDENCE_TOL {
        return Err(GeometryError::Precondition("D is not on line BC".into()));
    }
    let (bd, dc) = (dist(b, d)?, dist(d, c)?);
    if bd <= 1e-9 || dc <= 1e-9 {
        return Err(GeometryError::CoincidentPoints);
    }
    let g = t.geometry();
    let ad = unit_tangent(a, d)?;
    let dac = ad.angle_to(&unit_tangent(a, c)?)?;
    let bad = unit_tangent(a, b)?.angle_to(&ad)?;
    let lhs = g.weight(dc) / g.weight(bd);
    let rhs = dac.sin() / bad.sin() * t.angles[1].sin() / t.angles[2].sin();
    Ok(relative(lhs, rhs))
}

/// Points where `transversal` meets the side lines `BC`, `CA`, `AB`.
pub fn menelaus_points(t: &Triangle, transversal: &Line) -> Result<[Point; 3]> {
    if t.vertices.iter().any(|v| transversal.incidence_residual(v) <= INCIDENCE_TOL) {
        return Err(GeometryError::Degenerate("transversal passes through a vertex".into()));
    }
    let hint = t.centroid_hint();
    Ok([
        transversal.intersect(&t.side_line(1, 2)?, Some(&hint))?,
        transversal.intersect(&t.side_line(2, 0)?, Some(&hint))?,
        transversal.intersect(&t.side_line(0, 1)?, Some(&hint))?,
    ])
}

/// `(w(AC')/w(AB')) (w(BA')/w(BC')) (w(CB')/w(A'C))` for points `A'`, `B'`,
/// `C'` on the lines `BC`, `CA`, `AB`; equal to 1 iff they are aligned.
pub fn menelaus_product(t: &Triangle, a1: &Point, b1: &Point, c1: &Point) -> Result<f64> {
    let g = t.geometry();
    let [a, b, c] = &t.vertices;
    let w = |p: &Point, q: &Point| -> Result<f64> {
        let d = dist(p, q)?;
        if d <= 1e-12 {
            return Err(GeometryError::CoincidentPoints);
        }
        Ok(g.weight(d))
    };
    Ok(w(a, c1)? / w(a, b1)? * (w(b, a1)? / w(b, c1)?) * (w(c, b1)? / w(a1, c)?))
}

/// `|product - 1|` for the points cut out by `transversal`.
pub fn menelaus_residual(t: &Triangle, transversal: &Line) -> Result<f64> {
    let [a1, b1, c1] = menelaus_points(t, transversal)?;
    Ok((menelaus_product(t, &a1, &b1, &c1)? - 1.0).abs())
}

/// Four lines through a common vertex and two transversals.
#[derive(Debug, Clone)]
pub struct Pencil {
    pub vertex: Point,
    /// Unit directions of the four lines at the vertex.
    pub rays: [TangentVector; 4],
}

impl Pencil {
    pub fn lines(&self) -> Result<Vec<Line>> {
        self.rays.iter().map(Line::from_tangent).collect()
    }

    /// Trace of the pencil on a transversal.
    pub fn trace(&self, transversal: &Line, near: Option<&Point>) -> Result<[Point; 4]> {
        if transversal.incidence_residual(&self.vertex) <= INCIDENCE_TOL {
            return Err(GeometryError::Degenerate("transversal passes through the vertex".into()));
        }
        let lines = self.lines()?;
        let pts: Vec<Point> = lines
            .iter()
            .map(|l| transversal.intersect(l, near))
            .collect::<Result<_>>()?;
        Ok(pts.try_into().expect("four lines"))
    }

    /// `(sin A2AA4 / sin A3AA4) (sin A3AA1 / sin A2AA1)` from the angles
    /// between the lines.
    pub fn angle_cross_ratio(&self) -> Result<f64> {
        let s = |i: usize, j: usize| -> Result<f64> {
            Ok(self.rays[i].angle_to(&self.rays[j])?.sin().abs())
        };
        Ok(s(1, 3)? / s(2, 3)? * s(2, 0)? / s(1, 0)?)
    }
}

/// Relative deviation between the cross ratio of the trace on `first`, the
/// angle formula, and the cross ratio of the trace on `second`.
pub fn pencil_residual(pencil: &Pencil, first: &Line, second: &Line, near: Option<&Point>) -> Result<f64> {
    let cr = |l: &Line| -> Result<f64> {
        let t = pencil.trace(l, near)?;
        weighted_cross_ratio([&t[0], &t[1], &t[2], &t[3]])
    };
    let c1 = cr(first)?;
    let c2 = cr(second)?;
    Ok(relative(c1, pencil.angle_cross_ratio()?).max(relative(c1, c2)))
}

/// Side length bounds for well-conditioned random configurations.
pub fn side_range(g: Geometry) -> (f64, f64) {
    match g.kind() {
        ModelKind::Spherical => (0.1, 1.2),
        _ => (0.1, 3.0),
    }
}

/// Random triangle with all sides within [`side_range`] and all angles at
/// least 0.1.
pub fn random_triangle<R: Rng>(rng: &mut R, g: Geometry) -> Triangle {
    let (lo, hi) = side_range(g);
    loop {
        let a = random_point_near(rng, &g.origin(), 0.5);
        let xi = random_unit_tangent(rng, &a);
        let frame = a.tangent_frame();
        let (e0, e1) = (frame[0].vec(), frame[1].vec());
        let (p, q) = (xi.inner(&frame[0]), xi.inner(&frame[1]));
        let th: f64 = rng.random_range(0.2..std::f64::consts::PI - 0.2);
        let rot = TangentVector::projected(
            a.clone(),
            e0 * (p * th.cos() - q * th.sin()) + e1 * (p * th.sin() + q * th.cos()),
        );
        let b = exp(&a, &xi, rng.random_range(lo..hi)).expect("unit");
        let c = exp(&a, &rot.normalized().expect("unit"), rng.random_range(lo..hi)).expect("unit");
        let Ok(t) = Triangle::new(a, b, c) else { continue };
        let ok_sides = t.sides.iter().all(|&s| s >= lo && s <= hi);
        let ok_angles = t.angles.iter().all(|&x| x >= 0.1);
        if ok_sides && ok_angles {
            return t;
        }
    }
}

/// Right triangle with legs `a`, `b` at a random vertex `C`, returned as
/// `(A, B, C)` so the right angle is at `C`.
pub fn right_triangle(c: &Point, direction: &TangentVector, leg_a: f64, leg_b: f64) -> Result<Triangle> {
    let frame = c.tangent_frame();
    let (e0, e1) = (frame[0].vec(), frame[1].vec());
    // Frame components use the model's inner product (Minkowski on H^2).
    let (p, q) = (direction.inner(&frame[0]), direction.inner(&frame[1]));
    let perp = TangentVector::projected(c.clone(), e0 * (-q) + e1 * p).normalized()?;
    let b = exp(c, &direction.normalized()?, leg_a)?;
    let a = exp(c, &perp, leg_b)?;
    Triangle::new(a, b, c.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::rng_for;
    use std::f64::consts::FRAC_PI_2;

    fn v(c: &[f64]) -> Vector {
        Vector::from_column_slice(c)
    }

    #[test]
    fn euclidean_345() {
        let g = Geometry::euclidean(2);
        let t = Triangle::new(
            Point::new(g, v(&[0.0, 0.0])).unwrap(),
            Point::new(g, v(&[4.0, 0.0])).unwrap(),
            Point::new(g, v(&[4.0, 3.0])).unwrap(),
        )
        .unwrap();
        assert!(sine_rule_residual(&t) <= 1e-12);
        let r = g.weight(t.sides()[0]) / t.angles()[0].sin();
        assert!((r - 5.0).abs() < 1e-12);
    }

    #[test]
    fn octant_triangle() {
        let g = Geometry::spherical(2);
        let t = Triangle::new(
            Point::new(g, v(&[1.0, 0.0, 0.0])).unwrap(),
            Point::new(g, v(&[0.0, 1.0, 0.0])).unwrap(),
            Point::new(g, v(&[0.0, 0.0, 1.0])).unwrap(),
        )
        .unwrap();
        for a in t.angles() {
            assert!((a - FRAC_PI_2).abs() < 1e-15);
        }
        assert!(sine_rule_residual(&t) < 1e-15);
        assert!(right_triangle_residual(&t).unwrap() < 1e-15);
    }

    #[test]
    fn random_triangles_satisfy_identities() {
        let mut rng = rng_for(5, "trig-unit", 0);
        for g in [Geometry::euclidean(2), Geometry::spherical(2), Geometry::hyperbolic(2)] {
            for _ in 0..50 {
                let t = random_triangle(&mut rng, g);
                assert!(sine_rule_residual(&t) < 1e-10, "{g}");
                let [_, b, c] = t.vertices();
                let d = exp(b, &unit_tangent(b, c).unwrap(), t.sides()[0] * 0.37).unwrap();
                assert!(cevian_residual(&t, &d).unwrap() < 1e-10, "{g}");
                let beyond = exp(b, &unit_tangent(b, c).unwrap(), -0.3).unwrap();
                assert!(cevian_residual(&t, &beyond).unwrap() < 1e-10, "{g}");
            }
        }
    }

    #[test]
    fn right_triangles() {
        for g in [Geometry::euclidean(2), Geometry::spherical(2), Geometry::hyperbolic(2)] {
            let c = g.origin();
            let t = right_triangle(&c, &c.tangent_frame()[0], 0.7, 0.4).unwrap();
            assert!((t.angles()[2] - FRAC_PI_2).abs() < 1e-12);
            assert!(right_triangle_residual(&t).unwrap() < 1e-12, "{g}");
        }
        let g = Geometry::euclidean(2);
        let t = Triangle::new(
            Point::new(g, v(&[0.0, 0.0])).unwrap(),
            Point::new(g, v(&[2.0, 0.0])).unwrap(),
            Point::new(g, v(&[0.5, 1.0])).unwrap(),
        )
        .unwrap();
        assert!(right_triangle_residual(&t).is_err());
    }

    #[test]
    fn isosceles_midpoint_cevian() {
        let g = Geometry::hyperbolic(2);
        let o = g.origin();
        let f = o.tangent_frame();
        let a = exp(&o, &f[1], 0.8).unwrap();
        let b = exp(&o, &f[0], 0.5).unwrap();
        let c = exp(&o, &f[0], -0.5).unwrap();
        let t = Triangle::new(a, b, c).unwrap();
        assert!(cevian_residual(&t, &o).unwrap() < 1e-14);
    }

    #[test]
    fn menelaus_euclidean_and_converse() {
        let g = Geometry::euclidean(2);
        let p = |x: f64, y: f64| Point::new(g, v(&[x, y])).unwrap();
        let t = Triangle::new(p(0.0, 0.0), p(3.0, 0.0), p(1.0, 2.0)).unwrap();
        let l = Line::through(&p(-1.0, 0.5), &p(4.0, 1.2)).unwrap();
        assert!(menelaus_residual(&t, &l).unwrap() < 1e-12);
        let [a1, b1, c1] = menelaus_points(&t, &l).unwrap();
        let [_, _, c] = t.vertices();
        let moved = exp(&a1, &unit_tangent(&a1, c).unwrap(), 1e-3).unwrap();
        let prod = menelaus_product(&t, &moved, &b1, &c1).unwrap();
        assert!((prod - 1.0).abs() > 1e-6);
    }

    #[test]
    fn euclidean_pencil_transversal_independence() {
        let g = Geometry::euclidean(2);
        let o = g.origin();
        let rays = [0.1f64, 0.5, 0.9, 1.4].map(|th| {
            TangentVector::new(o.clone(), v(&[th.cos(), th.sin()])).unwrap()
        });
        let pencil = Pencil { vertex: o, rays };
        let p = |x: f64, y: f64| Point::new(g, v(&[x, y])).unwrap();
        let l1 = Line::through(&p(2.0, 0.0), &p(0.0, 3.0)).unwrap();
        let l2 = Line::through(&p(5.0, 0.0), &p(-1.0, 2.0)).unwrap();
        assert!(pencil_residual(&pencil, &l1, &l2, None).unwrap() < 1e-12);
    }

    #[test]
    fn symmetric_pencil_matches_angle_formula() {
        // Rays at k * theta and a transversal orthogonal to the bisector.
        let g = Geometry::euclidean(2);
        let o = g.origin();
        let th = 0.3f64;
        let rays = [1.0, 2.0, 3.0, 4.0].map(|k| {
            TangentVector::new(o.clone(), v(&[(k * th).cos(), (k * th).sin()])).unwrap()
        });
        let pencil = Pencil { vertex: o, rays };
        let bis = 2.5 * th;
        let l = Line::from_covector(g, v(&[bis.cos(), bis.sin(), -1.0])).unwrap();
        let tr = pencil.trace(&l, None).unwrap();
        let cr = weighted_cross_ratio([&tr[0], &tr[1], &tr[2], &tr[3]]).unwrap();
        let expected = (2.0 * th).sin() / th.sin() * (2.0 * th).sin() / th.sin();
        assert!((cr - expected).abs() < 1e-12);
        assert!((pencil.angle_cross_ratio().unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_ultraparallel_lines_do_not_meet() {
        let g = Geometry::hyperbolic(2);
        let l1 = Line::from_covector(g, v(&[1.0, 0.0, 0.5])).unwrap();
        let l2 = Line::from_covector(g, v(&[1.0, 0.0, -0.5])).unwrap();
        assert_eq!(l1.intersect(&l2, None), Err(GeometryError::NoIntersection));
        let l3 = Line::from_covector(g, v(&[0.0, 1.0, 0.0])).unwrap();
        let p = l1.intersect(&l3, None).unwrap();
        assert!(l1.incidence_residual(&p) < 1e-15 && l3.incidence_residual(&p) < 1e-15);
    }
}
