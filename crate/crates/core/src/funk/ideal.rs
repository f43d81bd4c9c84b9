//! Upper half-plane coordinates and the ideal triangle with vertices 0, 1, inf.

use super::funk_f1;
use crate::bodies::{ConvexBody, HalfSpace};
use crate::error::{GeometryError, Result};
use crate::spaces::{cross3, unit_tangent, Geometry, Hyperplane, Point, Vector};

/// Point `re + i im` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    pub re: f64,
    pub im: f64,
}

impl HalfPlanePoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return Err(GeometryError::InvalidPoint(format!(
                "half-plane point needs positive imaginary part, got {im}"
            )));
        }
        Ok(Self { re, im })
    }

    /// Half-plane distance `arccosh(1 + |p - q|^2 / (2 im p im q))`.
    pub fn dist(&self, other: &Self) -> f64 {
        let dx = self.re - other.re;
        let dy = self.im - other.im;
        let q = (dx * dx + dy * dy) / (4.0 * self.im * other.im);
        // arccosh(1 + 2q) = 2 asinh(sqrt(q))
        2.0 * q.sqrt().asinh()
    }
}

/// Isometry from the upper half-plane onto the hyperboloid in Minkowski 3-space.
pub fn halfplane_to_hyperboloid(p: HalfPlanePoint) -> Result<Point> {
    let HalfPlanePoint { re: a, im: b } = HalfPlanePoint::new(p.re, p.im)?;
    let r2 = a * a + b * b;
    Point::project(
        Geometry::hyperbolic(2),
        Vector::from_column_slice(&[a / b, (r2 - 1.0) / (2.0 * b), (r2 + 1.0) / (2.0 * b)]),
    )
}

/// Inverse of [`halfplane_to_hyperboloid`].
pub fn hyperboloid_to_halfplane(x: &Point) -> Result<HalfPlanePoint> {
    let g = x.geometry();
    if g != Geometry::hyperbolic(2) {
        return Err(GeometryError::GeometryMismatch);
    }
    let c = x.coords();
    let b = 1.0 / (c[2] - c[1]);
    HalfPlanePoint::new(c[0] * b, b)
}

/// Ideal boundary point `t` of the real axis (`None` for infinity), as a
/// null vector.
fn ideal_point(t: Option<f64>) -> Vector {
    match t {
        Some(t) => Vector::from_column_slice(&[t, 0.5 * (t * t - 1.0), 0.5 * (t * t + 1.0)]),
        None => Vector::from_column_slice(&[0.0, 1.0, 1.0]),
    }
}

/// Hyperbolic line through two ideal points.
fn line_through_ideal(p: Option<f64>, q: Option<f64>) -> Result<Hyperplane> {
    let l = cross3(&ideal_point(p), &ideal_point(q));
    // Covector to Minkowski normal.
    let n = Vector::from_column_slice(&[l[0], l[1], -l[2]]);
    Hyperplane::central(Geometry::hyperbolic(2), n)
}

/// The ideal triangle bounded by `Re = 0`, `Re = 1` and the semicircle over
/// `[0, 1]`, as a hyperboloid polytope with facets in that order.
pub fn ideal_triangle_body() -> ConvexBody {
    let witness = halfplane_to_hyperboloid(HalfPlanePoint { re: 0.5, im: 1.0 }).expect("valid");
    let facets = [(Some(0.0), None), (Some(1.0), None), (Some(0.0), Some(1.0))]
        .into_iter()
        .map(|(p, q)| {
            HalfSpace::containing(line_through_ideal(p, q).expect("spacelike"), &witness)
                .expect("witness off the line")
        })
        .collect();
    ConvexBody::polytope(Geometry::hyperbolic(2), facets, witness).expect("ideal triangle")
}

/// `|slope|` of the Euclidean segment from `p` to its hyperbolic foot
/// `(0, |p|)` on the imaginary axis.
fn foot_slope(p: HalfPlanePoint) -> f64 {
    let r = p.re.hypot(p.im);
    // (r - im) / re, written without cancellation.
    p.re / (r + p.im)
}

fn check_admissible(x1: HalfPlanePoint, x2: HalfPlanePoint) -> Result<(ConvexBody, Point, Point)> {
    let body = ideal_triangle_body();
    let p1 = halfplane_to_hyperboloid(x1)?;
    let p2 = halfplane_to_hyperboloid(x2)?;
    if !body.contains(&p1) || !body.contains(&p2) {
        return Err(GeometryError::OutsideBody);
    }
    Ok((body, p1, p2))
}

/// Closed-form Funk distance in the ideal triangle for pairs whose ray leaves
/// through the imaginary axis:
/// `log((1 - m2^2) / (1 - m1^2) * m1 / m2)`, with `m_i` the foot slopes.
/// Since `sinh d(x, Re = 0) = re / im = 2m / (1 - m^2)`, this is the ratio of
/// the two distances to that side.
pub fn ideal_triangle_funk(x1: HalfPlanePoint, x2: HalfPlanePoint) -> Result<f64> {
    let (body, p1, p2) = check_admissible(x1, x2)?;
    if x1 == x2 {
        return Ok(0.0);
    }
    let xi = unit_tangent(&p1, &p2)?;
    let hit = body.ray_exit(&p1, &xi)?;
    if !hit.is_some_and(|h| h.facet_indices.contains(&0)) {
        return Err(GeometryError::Precondition(
            "ray does not leave through the imaginary axis".into(),
        ));
    }
    let (m1, m2) = (foot_slope(x1), foot_slope(x2));
    Ok(((1.0 - m2 * m2) / (1.0 - m1 * m1) * m1 / m2).ln())
}

/// The expression `log((1 - m1^2) / (1 - m2^2) * m2 / m1)` exactly as it is
/// usually quoted; it equals `-F(x1, x2)`. Kept for comparison.
pub fn ideal_triangle_funk_as_printed(x1: HalfPlanePoint, x2: HalfPlanePoint) -> Result<f64> {
    ideal_triangle_funk(x1, x2)?;
    let (m1, m2) = (foot_slope(x1), foot_slope(x2));
    Ok(((1.0 - m1 * m1) / (1.0 - m2 * m2) * m2 / m1).ln())
}

/// [`funk_f1`] on the ideal triangle in half-plane coordinates.
pub fn ideal_triangle_f1(x1: HalfPlanePoint, x2: HalfPlanePoint) -> Result<f64> {
    let (body, p1, p2) = check_admissible(x1, x2)?;
    funk_f1(&body, &p1, &p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::dist;

    fn hp(re: f64, im: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(re, im).unwrap()
    }

    #[test]
    fn i_maps_to_vertex() {
        let p = halfplane_to_hyperboloid(hp(0.0, 1.0)).unwrap();
        assert_eq!(p.to_vec(), vec![0.0, 0.0, 1.0]);
        assert!(HalfPlanePoint::new(0.3, 0.0).is_err());
    }

    #[test]
    fn conversion_is_an_isometry() {
        let pts = [hp(0.3, 0.7), hp(-1.2, 2.5), hp(4.0, 0.05), hp(0.0, 1.0)];
        for p in pts {
            let back = hyperboloid_to_halfplane(&halfplane_to_hyperboloid(p).unwrap()).unwrap();
            assert!((back.re - p.re).abs() < 1e-12 && (back.im - p.im).abs() < 1e-12);
            for q in pts {
                let d = dist(
                    &halfplane_to_hyperboloid(p).unwrap(),
                    &halfplane_to_hyperboloid(q).unwrap(),
                )
                .unwrap();
                assert!((d - p.dist(&q)).abs() < 1e-10 * (1.0 + d));
            }
        }
    }

    #[test]
    fn facet_distances_match_half_plane() {
        let body = ideal_triangle_body();
        let x = hp(0.3, 0.9);
        let p = halfplane_to_hyperboloid(x).unwrap();
        // sinh of the distance to the imaginary axis is re / im.
        assert!((body.facets()[0].value(&p) - 0.3 / 0.9).abs() < 1e-14);
        assert!((body.facets()[1].value(&p) - 0.7 / 0.9).abs() < 1e-14);
    }

    #[test]
    fn closed_form_matches_f1_and_printed_form_is_negated() {
        let x1 = hp(0.6, 1.2);
        let x2 = hp(0.3, 1.5);
        let f1 = ideal_triangle_f1(x1, x2).unwrap();
        let closed = ideal_triangle_funk(x1, x2).unwrap();
        assert!(f1 > 0.0);
        assert!((closed - f1).abs() < 1e-12);
        assert!((ideal_triangle_funk_as_printed(x1, x2).unwrap() + f1).abs() < 1e-12);
        assert_eq!(ideal_triangle_funk(x1, x1).unwrap(), 0.0);
    }

    #[test]
    fn wrong_exit_side_is_rejected() {
        let err = ideal_triangle_funk(hp(0.3, 1.5), hp(0.6, 1.2));
        assert!(matches!(err, Err(GeometryError::Precondition(_))));
    }
}
