//! Convex bodies: finite intersections of open half-spaces, and metric balls.
//!
//! Every half-space is stored with its normal pointing into the body, so the
//! signed value `s(x)` of each facet is positive exactly on the open side.
//! In the curved models `s(x)` is then `sin d(x, pi)` or `sinh d(x, pi)`.

mod json;

pub use json::{BodyJson, BodyKind, HalfSpaceJson};

use nalgebra::DMatrix;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{GeometryError, Result};
use crate::spaces::{
    dist, direction_samples, unit_tangent, Geometry, Hyperplane, ModelKind, Point, TangentVector,
    Vector, UNIT_TOL,
};

/// Activity tolerance for facets at boundary points.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// Required interior margin of the witness point.
pub const WITNESS_TOL: f64 = 1e-10;
/// Safety margin below `pi/2` for the spherical Funk diameter condition.
pub const DIAMETER_MARGIN: f64 = 1e-6;

/// The open side `{x : s(x) > 0}` of an oriented hyperplane.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    plane: Hyperplane,
}

impl HalfSpace {
    pub fn new(plane: Hyperplane) -> Self {
        Self { plane }
    }

    /// Orients `plane` so that `interior` is on the open side.
    pub fn containing(plane: Hyperplane, interior: &Point) -> Result<Self> {
        let s = plane.signed_value(interior);
        if s == 0.0 {
            return Err(GeometryError::Degenerate(
                "reference point lies on the hyperplane".into(),
            ));
        }
        Ok(Self::new(if s > 0.0 { plane } else { plane.flipped() }))
    }

    pub fn plane(&self) -> &Hyperplane {
        &self.plane
    }

    pub fn value(&self, x: &Point) -> f64 {
        self.plane.signed_value(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Polytope(Vec<HalfSpace>),
    Ball { center: Point, radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BodyFlags {
    pub hemisphere_ok: bool,
    pub funk_diameter_ok: bool,
    pub bounded: bool,
}

/// First boundary point along a geodesic ray.
#[derive(Debug, Clone, PartialEq)]
pub struct RayHit {
    pub point: Point,
    /// Arc length from the ray origin to `point`.
    pub param: f64,
    /// Facets vanishing at `point` within [`BOUNDARY_TOL`]; empty for balls.
    pub facet_indices: Vec<usize>,
}

/// A validated open convex body. Immutable after construction.
#[derive(Debug, Clone)]
pub struct ConvexBody {
    geometry: Geometry,
    shape: Shape,
    witness: Point,
    flags: BodyFlags,
    vertices: Vec<Point>,
}

impl ConvexBody {
    pub fn polytope(geometry: Geometry, facets: Vec<HalfSpace>, witness: Point) -> Result<Self> {
        if facets.is_empty() {
            return Err(GeometryError::InvalidBody("no facets".into()));
        }
        if witness.geometry() != geometry
            || facets.iter().any(|f| f.plane.geometry() != geometry)
        {
            return Err(GeometryError::GeometryMismatch);
        }
        let mut body = Self {
            geometry,
            shape: Shape::Polytope(facets),
            witness,
            flags: BodyFlags {
                hemisphere_ok: true,
                funk_diameter_ok: true,
                bounded: true,
            },
            vertices: Vec::new(),
        };
        body.vertices = body.compute_vertices();
        body.flags = body.validate()?;
        Ok(body)
    }

    /// Regular planar polygon centred at the model origin whose sides are at
    /// distance `inradius` from the center.
    pub fn regular_polygon(geometry: Geometry, sides: usize, inradius: f64) -> Result<Self> {
        if geometry.dim() != 2 || sides < 3 {
            return Err(GeometryError::InvalidBody("need dim 2 and at least 3 sides".into()));
        }
        let o = geometry.origin();
        let frame = o.tangent_frame();
        let facets = (0..sides)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / sides as f64;
                let u = TangentVector::projected(
                    o.clone(),
                    frame[0].vec() * th.cos() + frame[1].vec() * th.sin(),
                );
                Ok(HalfSpace::new(Hyperplane::orthogonal_at(&u.velocity_at(inradius))?.flipped()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::polytope(geometry, facets, o)
    }

    /// Open metric ball; the center doubles as interior witness.
    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        let geometry = center.geometry();
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(GeometryError::InvalidBody(format!("bad radius {radius}")));
        }
        let mut body = Self {
            geometry,
            shape: Shape::Ball {
                center: center.clone(),
                radius,
            },
            witness: center,
            flags: BodyFlags {
                hemisphere_ok: true,
                funk_diameter_ok: true,
                bounded: true,
            },
            vertices: Vec::new(),
        };
        body.flags = body.validate()?;
        Ok(body)
    }

    /// Ball with an explicit interior witness (must lie inside).
    pub fn ball_with_witness(center: Point, radius: f64, witness: Point) -> Result<Self> {
        let mut body = Self::ball(center, radius)?;
        if witness.geometry() != body.geometry {
            return Err(GeometryError::GeometryMismatch);
        }
        let margin = body.margin(&witness);
        if margin < WITNESS_TOL {
            return Err(GeometryError::EmptyInterior {
                facet: 0,
                value: margin,
            });
        }
        body.witness = witness;
        Ok(body)
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Facet list; empty for balls.
    pub fn facets(&self) -> &[HalfSpace] {
        match &self.shape {
            Shape::Polytope(f) => f,
            Shape::Ball { .. } => &[],
        }
    }

    pub fn witness(&self) -> &Point {
        &self.witness
    }

    pub fn flags(&self) -> BodyFlags {
        self.flags
    }

    /// Vertices of a polytope (points where `dim` facets meet inside the
    /// closure). Empty for balls.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Recomputes the validation flags.
    ///
    /// Fails if the witness is not strictly inside or if a spherical body
    /// cannot be placed in an open hemisphere.
    pub fn validate(&self) -> Result<BodyFlags> {
        let g = self.geometry;
        match &self.shape {
            Shape::Ball { center, radius } => {
                if g.kind() == ModelKind::Spherical && *radius >= FRAC_PI_2 {
                    return Err(GeometryError::HemisphereViolation);
                }
                let margin = self.margin(&self.witness);
                if margin < WITNESS_TOL {
                    return Err(GeometryError::EmptyInterior {
                        facet: 0,
                        value: margin,
                    });
                }
                let _ = center;
                Ok(BodyFlags {
                    hemisphere_ok: true,
                    funk_diameter_ok: g.kind() != ModelKind::Spherical
                        || 2.0 * radius < FRAC_PI_2 - DIAMETER_MARGIN,
                    bounded: true,
                })
            }
            Shape::Polytope(facets) => {
                for (i, f) in facets.iter().enumerate() {
                    let v = f.value(&self.witness);
                    if !(v >= WITNESS_TOL) {
                        return Err(GeometryError::EmptyInterior { facet: i, value: v });
                    }
                }
                let count = if g.dim() == 2 { 360 } else { 600 };
                let mut exits = Vec::with_capacity(count);
                let mut all_exit = true;
                for xi in direction_samples(&self.witness, count) {
                    match self.ray_exit(&self.witness, &xi)? {
                        Some(hit) => exits.push(hit.point),
                        None => all_exit = false,
                    }
                }
                let bounded = match g.kind() {
                    ModelKind::Spherical => true,
                    ModelKind::Euclidean => all_exit && !self.has_recession_direction(),
                    ModelKind::Hyperbolic => all_exit,
                };
                let (hemisphere_ok, funk_diameter_ok) = if g.kind() == ModelKind::Spherical {
                    let hemisphere_ok = self.find_hemisphere(&exits).is_some();
                    if !hemisphere_ok {
                        return Err(GeometryError::HemisphereViolation);
                    }
                    (true, self.vertex_diameter() < FRAC_PI_2 - DIAMETER_MARGIN)
                } else {
                    (true, true)
                };
                Ok(BodyFlags {
                    hemisphere_ok,
                    funk_diameter_ok,
                    bounded,
                })
            }
        }
    }

    /// Interior margin: `min_i s_i(x)` for polytopes, `R - d(c, x)` for balls.
    pub fn margin(&self, x: &Point) -> f64 {
        match &self.shape {
            Shape::Polytope(facets) => facets
                .iter()
                .map(|f| f.value(x))
                .fold(f64::INFINITY, f64::min),
            Shape::Ball { center, radius } => match dist(center, x) {
                Ok(d) => radius - d,
                Err(_) => f64::NEG_INFINITY,
            },
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        x.geometry() == self.geometry && self.margin(x) > 0.0
    }

    /// First exit of the geodesic ray `t -> exp_x(t xi)`, `t > 0`, from the
    /// body, or `None` if the ray stays inside forever.
    pub fn ray_exit(&self, x: &Point, xi: &TangentVector) -> Result<Option<RayHit>> {
        if !self.contains(x) {
            return Err(GeometryError::OutsideBody);
        }
        let n = xi.norm();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(GeometryError::NonUnitTangent(n));
        }
        let param = match &self.shape {
            Shape::Polytope(facets) => facets
                .iter()
                .filter_map(|f| facet_crossing(self.geometry.kind(), f, x, xi))
                .fold(None, |acc: Option<f64>, t| Some(acc.map_or(t, |a| a.min(t)))),
            Shape::Ball { center, radius } => {
                Some(ball_crossing(self.geometry.kind(), center, *radius, x, xi))
            }
        };
        let Some(param) = param else {
            return Ok(None);
        };
        let point = xi.flow(param);
        let facet_indices = self
            .facets()
            .iter()
            .enumerate()
            .filter(|(_, f)| f.value(&point).abs() <= BOUNDARY_TOL)
            .map(|(i, _)| i)
            .collect();
        Ok(Some(RayHit {
            point,
            param,
            facet_indices,
        }))
    }

    /// Supporting hyperplanes at a boundary point, oriented into the body.
    pub fn supporting_at(&self, b: &Point) -> Result<Vec<Hyperplane>> {
        if b.geometry() != self.geometry {
            return Err(GeometryError::GeometryMismatch);
        }
        match &self.shape {
            Shape::Polytope(facets) => {
                let values: Vec<f64> = facets.iter().map(|f| f.value(b)).collect();
                let worst = values.iter().copied().fold(f64::INFINITY, f64::min);
                if worst < -BOUNDARY_TOL {
                    return Err(GeometryError::NotOnBoundary(-worst));
                }
                let active: Vec<Hyperplane> = facets
                    .iter()
                    .zip(&values)
                    .filter(|(_, v)| v.abs() <= BOUNDARY_TOL)
                    .map(|(f, _)| f.plane.clone())
                    .collect();
                if active.is_empty() {
                    return Err(GeometryError::NotOnBoundary(worst));
                }
                Ok(active)
            }
            Shape::Ball { center, radius } => {
                let d = dist(center, b)?;
                if (d - radius).abs() > BOUNDARY_TOL {
                    return Err(GeometryError::NotOnBoundary((d - radius).abs()));
                }
                let inward = unit_tangent(b, center)?;
                Ok(vec![Hyperplane::orthogonal_at(&inward)?])
            }
        }
    }

    /// Euclidean polytopes only: is there a nonzero direction along which no
    /// facet is ever crossed? Checks the candidate extreme rays of the
    /// recession cone.
    fn has_recession_direction(&self) -> bool {
        let normals: Vec<&Vector> = self.facets().iter().map(|f| f.plane.normal()).collect();
        let dim = self.geometry.dim();
        let mut candidates: Vec<Vector> = Vec::new();
        if dim == 2 {
            for a in &normals {
                candidates.push(Vector::from_column_slice(&[-a[1], a[0]]));
            }
        } else if dim == 3 {
            for (i, a) in normals.iter().enumerate() {
                for b in &normals[i + 1..] {
                    let c = crate::spaces::cross3(a, b);
                    if c.norm() > 1e-12 {
                        candidates.push(c);
                    }
                }
            }
            if normals.len() == 1 {
                let a = normals[0];
                let e = if a[0].abs() < 0.9 {
                    Vector::from_column_slice(&[1.0, 0.0, 0.0])
                } else {
                    Vector::from_column_slice(&[0.0, 1.0, 0.0])
                };
                candidates.push(crate::spaces::cross3(a, &e));
            }
        }
        candidates.into_iter().any(|c| {
            [1.0, -1.0].iter().any(|s| {
                let d = &c * *s;
                normals.iter().all(|a| a.dot(&d) >= -1e-12 * d.norm())
            })
        })
    }

    fn find_hemisphere(&self, boundary: &[Point]) -> Option<Vector> {
        let mut candidates = vec![self.witness.coords().clone()];
        let mut mean = Vector::zeros(self.geometry.ambient_dim());
        for p in boundary.iter().chain(&self.vertices) {
            mean += p.coords();
        }
        if mean.norm() > 0.0 {
            candidates.push(mean.normalize());
        }
        for f in self.facets() {
            candidates.push(f.plane.normal().clone());
        }
        candidates.into_iter().find(|p| {
            self.witness.coords().dot(p) > 0.0
                && boundary
                    .iter()
                    .chain(&self.vertices)
                    .all(|b| b.coords().dot(p) >= -1e-12)
        })
    }

    fn vertex_diameter(&self) -> f64 {
        if self.vertices.is_empty() {
            return PI;
        }
        let mut best: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                best = best.max(dist(a, b).unwrap_or(PI));
            }
        }
        best
    }

    fn compute_vertices(&self) -> Vec<Point> {
        let facets = self.facets();
        let g = self.geometry;
        let n = g.dim();
        if facets.len() < n {
            return Vec::new();
        }
        let mut out: Vec<Point> = Vec::new();
        for combo in combinations(facets.len(), n) {
            for p in intersect_planes(g, &combo.iter().map(|&i| &facets[i].plane).collect::<Vec<_>>())
            {
                let inside = facets.iter().all(|f| f.value(&p) >= -BOUNDARY_TOL);
                let dup = out
                    .iter()
                    .any(|q| (q.coords() - p.coords()).amax() < 1e-9);
                if inside && !dup {
                    out.push(p);
                }
            }
        }
        out
    }
}

/// Exit parameter of the geodesic ray through one facet, if it crosses it.
fn facet_crossing(kind: ModelKind, f: &HalfSpace, x: &Point, xi: &TangentVector) -> Option<f64> {
    let a = f.value(x);
    let b = f.plane.signed_derivative(xi);
    match kind {
        // s(t) = a + b t
        ModelKind::Euclidean => (b < 0.0).then(|| -a / b),
        // s(t) = a cosh t + b sinh t
        ModelKind::Hyperbolic => {
            (b < 0.0 && -b > a).then(|| 0.5 * ((-b + a) / (-b - a)).ln())
        }
        // s(t) = a cos t + b sin t: the only root in (0, pi) is where the ray
        // leaves; the next one at t + pi is the re-entry on the great circle.
        ModelKind::Spherical => Some(a.atan2(-b)),
    }
}

fn ball_crossing(kind: ModelKind, c: &Point, r: f64, x: &Point, xi: &TangentVector) -> f64 {
    let g = c.geometry();
    match kind {
        ModelKind::Euclidean => {
            let rel = x.coords() - c.coords();
            let beta = xi.vec().dot(&rel);
            let gamma = rel.norm_squared() - r * r;
            let root = (beta * beta - gamma).max(0.0).sqrt();
            if beta > 0.0 {
                -gamma / (beta + root)
            } else {
                root - beta
            }
        }
        ModelKind::Hyperbolic => {
            // -<c, cosh t x + sinh t xi> = cosh r, solved for u = e^t.
            let a = -g.pair(c.coords(), x.coords());
            let b = -g.pair(c.coords(), xi.vec());
            let cr = r.cosh();
            let disc = (cr * cr - (a * a - b * b)).max(0.0).sqrt();
            ((cr + disc) / (a + b)).ln()
        }
        ModelKind::Spherical => {
            // <c, cos t x + sin t xi> = cos r
            let a = c.coords().dot(x.coords());
            let b = c.coords().dot(xi.vec());
            let rho = a.hypot(b);
            b.atan2(a) + (r.cos() / rho).clamp(-1.0, 1.0).acos()
        }
    }
}

/// Points where the given `dim` hyperplanes meet (zero, one, or for the
/// sphere two antipodal points).
pub(crate) fn intersect_planes(g: Geometry, planes: &[&Hyperplane]) -> Vec<Point> {
    let n = g.dim();
    match g.kind() {
        ModelKind::Euclidean => {
            let a = DMatrix::from_fn(n, n, |i, j| planes[i].normal()[j]);
            let b = Vector::from_iterator(n, planes.iter().map(|p| p.offset()));
            let svd = a.clone().svd(false, false);
            let smin = svd.singular_values.min();
            if smin < 1e-10 {
                return Vec::new();
            }
            a.lu()
                .solve(&b)
                .and_then(|x| Point::new(g, x).ok())
                .into_iter()
                .collect()
        }
        _ => {
            // Covectors of the linear conditions <X, n> = 0, padded to a
            // square matrix so the SVD exposes the kernel.
            let m = n + 1;
            let mut a = DMatrix::zeros(m, m);
            for (i, p) in planes.iter().enumerate() {
                for j in 0..m {
                    let sign = if g.kind() == ModelKind::Hyperbolic && j == n {
                        -1.0
                    } else {
                        1.0
                    };
                    a[(i, j)] = sign * p.normal()[j];
                }
            }
            let svd = a.svd(false, true);
            let vt = svd.v_t.expect("v_t requested");
            let sv = &svd.singular_values;
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&i, &j| sv[i].partial_cmp(&sv[j]).unwrap());
            if sv[order[1]] < 1e-10 {
                return Vec::new();
            }
            let k = vt.row(order[0]).transpose();
            match g.kind() {
                ModelKind::Spherical => [1.0, -1.0]
                    .iter()
                    .filter_map(|s| Point::project(g, &k * *s).ok())
                    .collect(),
                _ => {
                    let k = if k[n] < 0.0 { -k } else { k };
                    Point::project(g, k).ok().into_iter().collect()
                }
            }
        }
    }
}

fn combinations(len: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            rec(i + 1, len, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, len, k, &mut Vec::with_capacity(k), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from_column_slice(c)
    }

    pub(crate) fn unit_square() -> ConvexBody {
        let g = Geometry::euclidean(2);
        let facets = [([-1.0, 0.0], -1.0), ([1.0, 0.0], -1.0), ([0.0, -1.0], -1.0), ([0.0, 1.0], -1.0)]
            .iter()
            .map(|(n, b)| HalfSpace::new(Hyperplane::euclidean(g, v(n), *b).unwrap()))
            .collect();
        ConvexBody::polytope(g, facets, Point::from_slice(g, &[0.0, 0.0]).unwrap()).unwrap()
    }

    #[test]
    fn square_validates_and_contains() {
        let sq = unit_square();
        assert!(sq.flags().bounded);
        let g = sq.geometry();
        assert!(sq.contains(&Point::from_slice(g, &[0.0, 0.0]).unwrap()));
        assert!(!sq.contains(&Point::from_slice(g, &[2.0, 0.0]).unwrap()));
        assert!(!sq.contains(&Point::from_slice(g, &[1.0, 0.0]).unwrap()));
        assert_eq!(sq.vertices().len(), 4);
    }

    #[test]
    fn square_ray_exit_and_supports() {
        let sq = unit_square();
        let g = sq.geometry();
        let o = Point::from_slice(g, &[0.0, 0.0]).unwrap();
        let xi = TangentVector::new(o.clone(), v(&[1.0, 0.0])).unwrap();
        let hit = sq.ray_exit(&o, &xi).unwrap().unwrap();
        assert_eq!(hit.param, 1.0);
        assert_eq!(hit.point.coords(), &v(&[1.0, 0.0]));
        assert_eq!(hit.facet_indices, vec![0]);

        let side = sq.supporting_at(&hit.point).unwrap();
        assert_eq!(side.len(), 1);
        let corner = Point::from_slice(g, &[1.0, 1.0]).unwrap();
        assert_eq!(sq.supporting_at(&corner).unwrap().len(), 2);
        assert!(matches!(sq.supporting_at(&o), Err(GeometryError::NotOnBoundary(_))));

        let outside = Point::from_slice(g, &[3.0, 0.0]).unwrap();
        let xo = TangentVector::new(outside.clone(), v(&[1.0, 0.0])).unwrap();
        assert_eq!(sq.ray_exit(&outside, &xo), Err(GeometryError::OutsideBody));
    }

    #[test]
    fn witness_outside_is_empty_interior() {
        let g = Geometry::euclidean(2);
        let f = HalfSpace::new(Hyperplane::euclidean(g, v(&[1.0, 0.0]), 1.0).unwrap());
        let err = ConvexBody::polytope(g, vec![f], Point::from_slice(g, &[0.0, 0.0]).unwrap());
        assert!(matches!(err, Err(GeometryError::EmptyInterior { facet: 0, .. })));
    }

    #[test]
    fn hyperbolic_half_plane_is_unbounded() {
        let g = Geometry::hyperbolic(2);
        let f = HalfSpace::new(Hyperplane::central(g, v(&[1.0, 0.0, 0.0])).unwrap());
        let w = Point::from_slice(g, &[0.5f64.sinh(), 0.0, 0.5f64.cosh()]).unwrap();
        let body = ConvexBody::polytope(g, vec![f], w.clone()).unwrap();
        assert!(!body.flags().bounded);
        let up = TangentVector::new(w.clone(), w.tangent_frame()[1].vec().clone()).unwrap();
        assert!(body.ray_exit(&w, &up).unwrap().is_none());
    }

    #[test]
    fn euclidean_wedge_is_unbounded() {
        let g = Geometry::euclidean(2);
        let facets = vec![
            HalfSpace::new(Hyperplane::euclidean(g, v(&[0.0, 1.0]), 0.0).unwrap()),
            HalfSpace::new(Hyperplane::euclidean(g, v(&[-1.0, 1.0]), 0.0).unwrap()),
        ];
        let w = Point::from_slice(g, &[-1.0, 2.0]).unwrap();
        let body = ConvexBody::polytope(g, facets, w).unwrap();
        assert!(!body.flags().bounded);
    }

    #[test]
    fn spherical_cap_flags() {
        let g = Geometry::spherical(2);
        let cap = ConvexBody::ball(g.origin(), PI / 5.0).unwrap();
        let f = cap.flags();
        assert!(f.hemisphere_ok && f.funk_diameter_ok && f.bounded);
        let wide = ConvexBody::ball(g.origin(), 1.0).unwrap();
        assert!(!wide.flags().funk_diameter_ok);
        assert_eq!(
            ConvexBody::ball(g.origin(), 2.0).unwrap_err(),
            GeometryError::HemisphereViolation
        );
    }

    #[test]
    fn regular_hyperbolic_triangle_boundedness() {
        let g = Geometry::hyperbolic(2);
        // Ideal when the inradius reaches ln(3)/2.
        assert!(ConvexBody::regular_polygon(g, 3, 0.5).unwrap().flags().bounded);
        assert!(!ConvexBody::regular_polygon(g, 3, 0.6).unwrap().flags().bounded);
        let sq = ConvexBody::regular_polygon(Geometry::euclidean(2), 4, 1.0).unwrap();
        assert_eq!(sq.vertices().len(), 4);
    }

    #[test]
    fn hyperbolic_ball_exit_is_radius() {
        let g = Geometry::hyperbolic(3);
        let c = g.origin();
        let ball = ConvexBody::ball(c.clone(), 1.7).unwrap();
        for xi in direction_samples(&c, 20) {
            let hit = ball.ray_exit(&c, &xi).unwrap().unwrap();
            assert!((hit.param - 1.7).abs() < 1e-13);
            assert!(hit.facet_indices.is_empty());
            assert!((dist(&c, &hit.point).unwrap() - 1.7).abs() < 1e-12);
        }
    }

    #[test]
    fn spherical_triangle_vertices() {
        let g = Geometry::spherical(2);
        // Octant triangle x, y, z > 0, shifted inward by a little.
        let facets: Vec<HalfSpace> = (0..3)
            .map(|i| {
                let mut n = Vector::zeros(3);
                n[i] = 1.0;
                HalfSpace::new(Hyperplane::central(g, n).unwrap())
            })
            .collect();
        let w = Point::project(g, v(&[1.0, 1.0, 1.0])).unwrap();
        let body = ConvexBody::polytope(g, facets, w).unwrap();
        assert_eq!(body.vertices().len(), 3);
        // Octant diameter is pi/2 exactly, so the Funk flag must be off.
        assert!(!body.flags().funk_diameter_ok);
        assert!(body.flags().hemisphere_ok);
    }
}
