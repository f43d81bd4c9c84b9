use super::{check_inside, finsler_norm};
use crate::bodies::ConvexBody;
use crate::error::{GeometryError, Result};
use crate::spaces::{dist, unit_tangent, Point};

pub const DEFAULT_SUBDIVISIONS: usize = 1024;

/// Piecewise-geodesic path through the body.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyPath {
    vertices: Vec<Point>,
    subdivisions: usize,
}

impl PolyPath {
    /// `subdivisions` is the number of trapezoid panels per segment.
    pub fn new(vertices: Vec<Point>, subdivisions: usize) -> Result<Self> {
        if vertices.is_empty() {
            return Err(GeometryError::Precondition("path needs a vertex".into()));
        }
        if subdivisions == 0 {
            return Err(GeometryError::Precondition("subdivisions must be positive".into()));
        }
        let g = vertices[0].geometry();
        if vertices.iter().any(|v| v.geometry() != g) {
            return Err(GeometryError::GeometryMismatch);
        }
        Ok(Self {
            vertices,
            subdivisions,
        })
    }

    pub fn segment(x: Point, y: Point, subdivisions: usize) -> Result<Self> {
        Self::new(vec![x, y], subdivisions)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn subdivisions(&self) -> usize {
        self.subdivisions
    }

    /// The same path with a different panel count.
    pub fn with_subdivisions(&self, subdivisions: usize) -> Result<Self> {
        Self::new(self.vertices.clone(), subdivisions)
    }

    /// Concatenation; the last vertex of `self` should equal the first of
    /// `other`, and a repeated vertex is dropped.
    pub fn concat(&self, other: &PolyPath) -> Result<Self> {
        let mut vertices = self.vertices.clone();
        let mut rest = other.vertices.iter();
        if let (Some(last), Some(first)) = (vertices.last(), other.vertices.first()) {
            if last.coords() == first.coords() {
                rest.next();
            }
        }
        vertices.extend(rest.cloned());
        Self::new(vertices, self.subdivisions)
    }
}

/// Finsler length of the path: trapezoid rule for the integral of
/// [`finsler_norm`] along each geodesic segment.
pub fn path_length_f3(body: &ConvexBody, path: &PolyPath) -> Result<f64> {
    for v in &path.vertices {
        check_inside(body, v)?;
    }
    let n = path.subdivisions;
    let mut total = 0.0;
    for pair in path.vertices.windows(2) {
        let (x, y) = (&pair[0], &pair[1]);
        let len = dist(x, y)?;
        if len == 0.0 {
            continue;
        }
        let xi = unit_tangent(x, y)?;
        let h = len / n as f64;
        let mut sum = 0.0;
        for k in 0..=n {
            let s = if k == n { len } else { k as f64 * h };
            let p = finsler_norm(body, &xi.velocity_at(s))?;
            sum += if k == 0 || k == n { 0.5 * p } else { p };
        }
        total += sum * h;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{hyperbolic_triangle, unit_disc, v};
    use super::super::funk_f1;
    use super::*;
    use crate::spaces::{exp, Geometry};

    #[test]
    fn trapezoid_converges_at_second_order() {
        let disc = unit_disc();
        let g = disc.geometry();
        let x = Point::new(g, v(&[0.1, -0.2])).unwrap();
        let y = Point::new(g, v(&[0.4, 0.3])).unwrap();
        let exact = funk_f1(&disc, &x, &y).unwrap();
        let err = |n| {
            let path = PolyPath::segment(x.clone(), y.clone(), n).unwrap();
            (path_length_f3(&disc, &path).unwrap() - exact).abs()
        };
        let order = (err(64) / err(128)).log2();
        assert!(order > 1.9, "order {order}");
        assert!(err(1 << 14) < 1e-8);
    }

    #[test]
    fn degenerate_path_has_zero_length() {
        let disc = unit_disc();
        let x = disc.geometry().origin();
        let path = PolyPath::new(vec![x.clone(), x], 8).unwrap();
        assert_eq!(path_length_f3(&disc, &path).unwrap(), 0.0);
    }

    #[test]
    fn collinear_segments_add_up() {
        let tri = hyperbolic_triangle(0.5);
        let g = Geometry::hyperbolic(2);
        let o = g.origin();
        let xi = o.tangent_frame()[0].clone();
        let x = exp(&o, &xi, -0.2).unwrap();
        let y = exp(&o, &xi, 0.1).unwrap();
        let z = exp(&o, &xi, 0.3).unwrap();
        let a = PolyPath::segment(x.clone(), y.clone(), 4096).unwrap();
        let b = PolyPath::segment(y, z.clone(), 4096).unwrap();
        let both = path_length_f3(&tri, &a.concat(&b).unwrap()).unwrap();
        let sum = path_length_f3(&tri, &a).unwrap() + path_length_f3(&tri, &b).unwrap();
        assert!((both - sum).abs() < 1e-14);
        assert!((both - funk_f1(&tri, &x, &z).unwrap()).abs() < 1e-6);
    }
}
