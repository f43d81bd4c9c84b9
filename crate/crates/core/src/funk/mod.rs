//! Funk and Hilbert metrics on convex bodies.
//!
//! Three equivalent descriptions of the Funk distance are implemented:
//! the boundary-ratio form [`funk_f1`], the supporting-hyperplane form
//! [`funk_f2`], and the Finsler length [`path_length_f3`] obtained by
//! integrating [`finsler_norm`] along a path.

mod convexity;
mod ideal;
mod path;

pub use convexity::{convexity_witness_search, second_difference, ConvexityWitness};
pub use ideal::{
    halfplane_to_hyperboloid, hyperboloid_to_halfplane, ideal_triangle_body, ideal_triangle_f1, ideal_triangle_funk,
    ideal_triangle_funk_as_printed, HalfPlanePoint,
};
pub use path::{path_length_f3, PolyPath, DEFAULT_SUBDIVISIONS};

use std::f64::consts::TAU;

use crate::bodies::{ConvexBody, Shape};
use crate::error::{GeometryError, Result};
use crate::spaces::{dist, unit_tangent, ModelKind, Point, TangentVector, Vector};

fn check_inside(body: &ConvexBody, x: &Point) -> Result<()> {
    if x.geometry() != body.geometry() {
        return Err(GeometryError::GeometryMismatch);
    }
    if !body.contains(x) {
        return Err(GeometryError::OutsideBody);
    }
    Ok(())
}

fn check_funk_pair(body: &ConvexBody, x: &Point, y: &Point) -> Result<()> {
    check_inside(body, x)?;
    check_inside(body, y)?;
    if !body.flags().funk_diameter_ok {
        return Err(GeometryError::DiameterTooLarge);
    }
    Ok(())
}

/// Funk distance `log(w(d(x,b)) / w(d(y,b)))`, where `b` is the point at which
/// the geodesic ray from `x` through `y` leaves the body and `w` is the
/// identity, `sin` or `sinh`. Zero when the ray never leaves.
pub fn funk_f1(body: &ConvexBody, x: &Point, y: &Point) -> Result<f64> {
    check_funk_pair(body, x, y)?;
    funk_unchecked(body, x, y)
}

/// [`funk_f1`] without the spherical diameter requirement (used by the
/// Hilbert metric, which only needs the body to lie in a hemisphere).
pub(crate) fn funk_unchecked(body: &ConvexBody, x: &Point, y: &Point) -> Result<f64> {
    let g = body.geometry();
    let dxy = dist(x, y)?;
    if dxy == 0.0 {
        return Ok(0.0);
    }
    let xi = unit_tangent(x, y)?;
    let Some(hit) = body.ray_exit(x, &xi)? else {
        return Ok(0.0);
    };
    let dyb = hit.param - dxy;
    if !(dyb > 0.0) {
        return Err(GeometryError::OutsideBody);
    }
    Ok((g.weight(hit.param) / g.weight(dyb)).ln())
}

/// Funk distance as a supremum over supporting hyperplanes: the largest
/// `log(w(d(x,pi)) / w(d(y,pi)))` over facets, or its closed form for balls,
/// clamped below at 0.
pub fn funk_f2(body: &ConvexBody, x: &Point, y: &Point) -> Result<f64> {
    check_funk_pair(body, x, y)?;
    if x.coords() == y.coords() {
        return Ok(0.0);
    }
    let best = match body.shape() {
        Shape::Polytope(facets) => facets
            .iter()
            .map(|f| (f.value(x) / f.value(y)).ln())
            .fold(f64::NEG_INFINITY, f64::max),
        Shape::Ball { center, radius } => ball_sup_log_ratio(center, *radius, x, y),
    };
    Ok(best.max(0.0))
}

/// Weighted distance to the supporting hyperplane of a ball at the boundary
/// point in direction `u` (unit, tangent at the center) is `P(x) + Q(x).u`.
fn ball_support_coefficients(center: &Point, radius: f64, x: &Point) -> (f64, Vector) {
    let g = center.geometry();
    let frame = center.tangent_frame();
    match g.kind() {
        ModelKind::Euclidean => {
            let rel = x.coords() - center.coords();
            (radius, -Vector::from_iterator(frame.len(), frame.iter().map(|e| e.vec().dot(&rel))))
        }
        ModelKind::Hyperbolic => {
            let p = -radius.sinh() * g.pair(x.coords(), center.coords());
            let c = radius.cosh();
            let q = frame.iter().map(|e| -c * g.pair(x.coords(), e.vec()));
            (p, Vector::from_iterator(frame.len(), q))
        }
        ModelKind::Spherical => {
            let p = radius.sin() * x.coords().dot(center.coords());
            let c = radius.cos();
            let q = frame.iter().map(|e| -c * x.coords().dot(e.vec()));
            (p, Vector::from_iterator(frame.len(), q))
        }
    }
}

/// `log max_u (Px + Qx.u) / (Py + Qy.u)` over unit `u`: the optimal ratio is
/// the largest root of a quadratic.
fn ball_sup_log_ratio(center: &Point, radius: f64, x: &Point, y: &Point) -> f64 {
    let (px, qx) = ball_support_coefficients(center, radius, x);
    let (py, qy) = ball_support_coefficients(center, radius, y);
    let a = py * py - qy.norm_squared();
    let b = px * py - qx.dot(&qy);
    let c = px * px - qx.norm_squared();
    let disc = (b * b - a * c).max(0.0).sqrt();
    // Largest root of a l^2 - 2 b l + c, in the form that avoids cancellation.
    let lambda = if b >= 0.0 { (b + disc) / a } else { c / (b - disc) };
    lambda.ln()
}

/// Finsler norm of the Funk metric at the base point of `xi`:
/// `max_pi cotw(d(x,pi)) <eta_pi(x), xi>` with `cotw` the logarithmic
/// derivative of the weight, and 0 along directions that never leave the body.
pub fn finsler_norm(body: &ConvexBody, xi: &TangentVector) -> Result<f64> {
    let x = xi.base();
    check_inside(body, x)?;
    let speed = xi.norm();
    if speed == 0.0 {
        return Ok(0.0);
    }
    let dir = xi.normalized()?;
    let Some(hit) = body.ray_exit(x, &dir)? else {
        return Ok(0.0);
    };
    Ok(match body.shape() {
        // The exit facet attains the maximum of -s'(x)[xi] / s(x).
        Shape::Polytope(facets) => facets
            .iter()
            .map(|f| -f.plane().signed_derivative(xi) / f.value(x))
            .fold(0.0, f64::max),
        Shape::Ball { .. } => speed * body.geometry().weight_log_derivative(hit.param),
    })
}

/// A sampled point of the indicatrix `{v : p(v) = 1}` in direction `theta`,
/// measured in the tangent frame at the base point.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatrixSample {
    pub theta: f64,
    /// `None` when the norm vanishes in this direction (the ray never exits).
    pub vector: Option<TangentVector>,
}

/// `count` equally spaced directions at `x`, each scaled to unit Finsler norm.
/// Planar bodies only.
pub fn indicatrix_sample(body: &ConvexBody, x: &Point, count: usize) -> Result<Vec<IndicatrixSample>> {
    check_inside(body, x)?;
    if body.geometry().dim() != 2 {
        return Err(GeometryError::Unsupported("indicatrix sampling needs dim = 2".into()));
    }
    if count < 3 {
        return Err(GeometryError::Precondition("count must be at least 3".into()));
    }
    let frame = x.tangent_frame();
    (0..count)
        .map(|k| {
            let theta = TAU * k as f64 / count as f64;
            let dir = TangentVector::projected(
                x.clone(),
                frame[0].vec() * theta.cos() + frame[1].vec() * theta.sin(),
            );
            let p = finsler_norm(body, &dir)?;
            let vector = (p > 0.0).then(|| dir.scaled(1.0 / p));
            Ok(IndicatrixSample { theta, vector })
        })
        .collect()
}

/// Hilbert distance `(F(x,y) + F(y,x)) / 2`. Spherical bodies need only lie
/// in an open hemisphere.
pub fn hilbert(body: &ConvexBody, x: &Point, y: &Point) -> Result<f64> {
    check_inside(body, x)?;
    check_inside(body, y)?;
    if !body.flags().hemisphere_ok {
        return Err(GeometryError::HemisphereViolation);
    }
    Ok(0.5 * (funk_unchecked(body, x, y)? + funk_unchecked(body, y, x)?))
}

/// `F(x,y) + F(y,z) - F(x,z)`; nonnegative by the triangle inequality and zero
/// when the two rays leave through a common supporting hyperplane.
pub fn additivity_defect(body: &ConvexBody, x: &Point, y: &Point, z: &Point) -> Result<f64> {
    Ok(funk_f1(body, x, y)? + funk_f1(body, y, z)? - funk_f1(body, x, z)?)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::bodies::{HalfSpace, Shape};
    use crate::spaces::{exp, Geometry, Hyperplane};

    pub(crate) fn v(c: &[f64]) -> Vector {
        Vector::from_column_slice(c)
    }

    pub(crate) fn unit_disc() -> ConvexBody {
        let g = Geometry::euclidean(2);
        ConvexBody::ball(g.origin(), 1.0).unwrap()
    }

    pub(crate) fn unit_square() -> ConvexBody {
        let g = Geometry::euclidean(2);
        let facets = [([-1.0, 0.0], -1.0), ([1.0, 0.0], -1.0), ([0.0, -1.0], -1.0), ([0.0, 1.0], -1.0)]
            .iter()
            .map(|(n, b)| HalfSpace::new(Hyperplane::euclidean(g, v(n), *b).unwrap()))
            .collect();
        ConvexBody::polytope(g, facets, g.origin()).unwrap()
    }

    pub(crate) fn hyperbolic_triangle(r: f64) -> ConvexBody {
        ConvexBody::regular_polygon(Geometry::hyperbolic(2), 3, r).unwrap()
    }

    fn pt(g: Geometry, c: &[f64]) -> Point {
        Point::project(g, v(c)).unwrap()
    }

    #[test]
    fn disc_radial_values() {
        let disc = unit_disc();
        let g = disc.geometry();
        let y = pt(g, &[0.5, 0.0]);
        assert!((funk_f1(&disc, &g.origin(), &y).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!((funk_f2(&disc, &g.origin(), &y).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!((hilbert(&disc, &g.origin(), &y).unwrap() - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert_eq!(funk_f1(&disc, &y, &y).unwrap(), 0.0);
        assert_eq!(funk_f2(&disc, &y, &y).unwrap(), 0.0);
    }

    #[test]
    fn curved_ball_radial_values() {
        for (g, r, d) in [(Geometry::hyperbolic(2), 1.3, 0.7), (Geometry::spherical(3), 0.6, 0.25)] {
            let ball = ConvexBody::ball(g.origin(), r).unwrap();
            let o = g.origin();
            let xi = &o.tangent_frame()[0];
            let y = exp(&o, xi, d).unwrap();
            let expected = (g.weight(r) / g.weight(r - d)).ln();
            assert!((funk_f1(&ball, &o, &y).unwrap() - expected).abs() < 1e-13);
            assert!((funk_f2(&ball, &o, &y).unwrap() - expected).abs() < 1e-13);
            // Towards the center from y: exits on the far side.
            let back = (g.weight(r + d) / g.weight(r)).ln();
            assert!((funk_f1(&ball, &y, &o).unwrap() - back).abs() < 1e-13);
            assert!((funk_f2(&ball, &y, &o).unwrap() - back).abs() < 1e-13);
        }
    }

    #[test]
    fn f2_on_square_uses_exit_facet() {
        let sq = unit_square();
        let g = sq.geometry();
        let x = pt(g, &[0.1, 0.2]);
        let y = pt(g, &[0.5, 0.3]);
        // Ray leaves through x = 1: ratio of distances to that side.
        let expected = (0.9f64 / 0.5).ln();
        assert!((funk_f1(&sq, &x, &y).unwrap() - expected).abs() < 1e-15);
        assert!((funk_f2(&sq, &x, &y).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn hyperbolic_triangle_f1_matches_f2() {
        let tri = hyperbolic_triangle(0.5);
        let g = tri.geometry();
        let pts = [pt(g, &[0.1, 0.2, 1.0]), pt(g, &[-0.2, 0.1, 1.0]), pt(g, &[0.1, -0.15, 1.0])];
        for x in &pts {
            for y in &pts {
                let f1 = funk_f1(&tri, x, y).unwrap();
                let f2 = funk_f2(&tri, x, y).unwrap();
                assert!((f1 - f2).abs() < 1e-12, "{f1} vs {f2} {:?} {:?}", x.to_vec(), y.to_vec());
            }
        }
    }

    #[test]
    fn ball_f2_off_center_matches_f1() {
        for g in [Geometry::euclidean(3), Geometry::hyperbolic(2), Geometry::spherical(2)] {
            let c = exp(&g.origin(), &g.origin().tangent_frame()[1], 0.2).unwrap();
            let ball = ConvexBody::ball(c, 0.7).unwrap();
            let o = g.origin();
            let f = o.tangent_frame();
            let x = exp(&o, &f[0], 0.3).unwrap();
            let y = exp(&o, &f[0], -0.25).unwrap();
            let f1 = funk_f1(&ball, &x, &y).unwrap();
            let f2 = funk_f2(&ball, &x, &y).unwrap();
            assert!((f1 - f2).abs() < 1e-12, "{g}: {f1} vs {f2}");
        }
    }

    #[test]
    fn unbounded_hyperbolic_ray_has_zero_f1_but_positive_f2() {
        // Sides at distance 1.5 are pairwise ultraparallel, so some rays
        // approach a side asymptotically without leaving.
        let wide = hyperbolic_triangle(1.5);
        assert!(!wide.flags().bounded);
        let g = wide.geometry();
        let x = pt(g, &[0.1, 0.2, 1.0]);
        let y = pt(g, &[-0.3, 0.1, 1.0]);
        assert_eq!(funk_f1(&wide, &x, &y).unwrap(), 0.0);
        assert!(funk_f2(&wide, &x, &y).unwrap() > 0.1);
    }

    #[test]
    fn finsler_norm_center_factors() {
        let cases = [
            (Geometry::euclidean(2), 1.0, 1.0),
            (Geometry::hyperbolic(2), 0.8, 1.0 / 0.8f64.tanh()),
            (Geometry::spherical(2), 0.5, 1.0 / 0.5f64.tan()),
        ];
        for (g, r, factor) in cases {
            let ball = ConvexBody::ball(g.origin(), r).unwrap();
            let xi = g.origin().tangent_frame()[1].scaled(2.5);
            let p = finsler_norm(&ball, &xi).unwrap();
            assert!((p - 2.5 * factor).abs() < 1e-12);
        }
    }

    #[test]
    fn finsler_norm_matches_eta_form() {
        use crate::spaces::{dist_to_hyperplane, eta};
        let tri = hyperbolic_triangle(0.5);
        let g = tri.geometry();
        let x = pt(g, &[0.2, -0.1, 1.0]);
        for xi in crate::spaces::direction_samples(&x, 16) {
            let p = finsler_norm(&tri, &xi).unwrap();
            let by_eta = tri
                .facets()
                .iter()
                .map(|f| {
                    let d = dist_to_hyperplane(&x, f.plane()).unwrap();
                    g.weight_log_derivative(d) * eta(&x, f.plane()).unwrap().inner(&xi)
                })
                .fold(0.0, f64::max);
            assert!((p - by_eta).abs() < 1e-12, "{p} vs {by_eta}");
        }
    }

    #[test]
    fn indicatrix_of_hyperbolic_ball_is_circle() {
        let g = Geometry::hyperbolic(2);
        let ball = ConvexBody::ball(g.origin(), 1.1).unwrap();
        for s in indicatrix_sample(&ball, &g.origin(), 12).unwrap() {
            let v = s.vector.unwrap();
            assert!((v.norm() - 1.1f64.tanh()).abs() < 1e-14);
        }
    }

    #[test]
    fn indicatrix_flags_unbounded_directions() {
        let g = Geometry::euclidean(2);
        let half = ConvexBody::polytope(
            g,
            vec![HalfSpace::new(Hyperplane::euclidean(g, v(&[1.0, 0.0]), -1.0).unwrap())],
            g.origin(),
        )
        .unwrap();
        let samples = indicatrix_sample(&half, &g.origin(), 4).unwrap();
        assert!(samples[0].vector.is_none());
        let left = samples[2].vector.as_ref().unwrap();
        assert!((left.vec()[0] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn spherical_funk_needs_small_diameter() {
        let g = Geometry::spherical(2);
        let wide = ConvexBody::ball(g.origin(), 1.0).unwrap();
        let y = pt(g, &[0.1, 0.0, 1.0]);
        assert_eq!(funk_f1(&wide, &g.origin(), &y), Err(GeometryError::DiameterTooLarge));
        assert!(hilbert(&wide, &g.origin(), &y).unwrap() > 0.0);
    }

    #[test]
    fn outside_points_are_rejected() {
        let disc = unit_disc();
        let g = disc.geometry();
        let out = pt(g, &[1.5, 0.0]);
        assert_eq!(funk_f1(&disc, &g.origin(), &out), Err(GeometryError::OutsideBody));
        assert_eq!(hilbert(&disc, &out, &g.origin()), Err(GeometryError::OutsideBody));
    }

    #[test]
    fn shared_facet_triple_is_additive() {
        let sq = unit_square();
        let g = sq.geometry();
        let x = pt(g, &[-0.5, 0.0]);
        let y = pt(g, &[0.0, 0.3]);
        let z = pt(g, &[0.4, -0.1]);
        assert!(additivity_defect(&sq, &x, &y, &z).unwrap().abs() < 1e-12);
        let disc = unit_disc();
        assert!(additivity_defect(&disc, &x, &y, &z).unwrap() > 1e-3);
        assert!(matches!(sq.shape(), Shape::Polytope(_)));
    }
}
