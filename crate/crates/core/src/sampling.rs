//! Seeded random geometry: points, directions, bodies.
//!
//! Every generator takes an explicit RNG so runs are reproducible; use
//! [`rng_for`] to derive an independent stream per sample.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::DMatrix;

use crate::bodies::{ConvexBody, HalfSpace};
use crate::error::Result;
use crate::spaces::{exp, Geometry, Hyperplane, ModelKind, Point, TangentVector, Vector};

/// Deterministic RNG for sample `index` of stream `stream` under `seed`.
pub fn rng_for(seed: u64, stream: &str, index: u64) -> ChaCha8Rng {
    // FNV-1a over the stream name keeps streams independent and stable.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in stream.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ h);
    rng.set_stream(index);
    rng
}

/// Uniform unit tangent vector at `x`.
pub fn random_unit_tangent<R: Rng>(rng: &mut R, x: &Point) -> TangentVector {
    let frame = x.tangent_frame();
    loop {
        let mut v = Vector::zeros(x.geometry().ambient_dim());
        for e in &frame {
            let c: f64 = rng.sample(StandardNormal);
            v += e.vec() * c;
        }
        if let Ok(t) = TangentVector::projected(x.clone(), v).normalized() {
            return t;
        }
    }
}

/// Point at distance `U[0, max_dist]` from `center` in a uniform direction.
pub fn random_point_near<R: Rng>(rng: &mut R, center: &Point, max_dist: f64) -> Point {
    let xi = random_unit_tangent(rng, center);
    let t = rng.random_range(0.0..=max_dist);
    exp(center, &xi, t).expect("unit tangent")
}

/// Interior point of `body`: a random fraction (at most `reach`) of the way
/// from the witness to the boundary in a random direction. Directions that
/// never exit are cut at distance 2.
pub fn random_interior_point<R: Rng>(rng: &mut R, body: &ConvexBody, reach: f64) -> Point {
    let w = body.witness();
    loop {
        let xi = random_unit_tangent(rng, w);
        let limit = match body.ray_exit(w, &xi).expect("witness inside") {
            Some(hit) => hit.param,
            None => 2.0,
        };
        let frac: f64 = rng.random_range(0.0..reach);
        let p = exp(w, &xi, frac * limit).expect("unit tangent");
        if body.contains(&p) {
            return p;
        }
    }
}

/// Range of radii per geometry that keeps spherical caps Funk-admissible.
fn radius_range(g: Geometry) -> (f64, f64) {
    match g.kind() {
        ModelKind::Euclidean => (0.5, 2.0),
        ModelKind::Hyperbolic => (0.3, 2.0),
        ModelKind::Spherical => (0.2, FRAC_PI_2 / 2.0 - 0.05),
    }
}

/// Random center near the model origin.
fn random_center<R: Rng>(rng: &mut R, g: Geometry) -> Point {
    let spread = if g.kind() == ModelKind::Spherical { 0.5 } else { 1.0 };
    random_point_near(rng, &g.origin(), spread)
}

pub fn random_ball<R: Rng>(rng: &mut R, g: Geometry) -> ConvexBody {
    let (lo, hi) = radius_range(g);
    let r = rng.random_range(lo..hi);
    ConvexBody::ball(random_center(rng, g), r).expect("valid ball")
}

/// Unit vectors of a randomly rotated regular simplex in `R^dim` (dim 2 or
/// 3): `dim + 1` directions no closed half-space contains.
pub fn simplex_directions<R: Rng>(rng: &mut R, dim: usize) -> Vec<Vector> {
    let base: Vec<Vector> = match dim {
        2 => (0..3)
            .map(|k| {
                let t = TAU * k as f64 / 3.0;
                Vector::from_column_slice(&[t.cos(), t.sin()])
            })
            .collect(),
        3 => [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
            .iter()
            .map(|c| Vector::from_column_slice(c) / 3f64.sqrt())
            .collect(),
        _ => unimplemented!("simplex directions for dim {dim}"),
    };
    let gauss = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let q = gauss.qr().q();
    base.iter().map(|v| &q * v).collect()
}

/// Facet distance ranges: `(simplex facets, extra facets)`. The simplex
/// bounds keep the body bounded (hyperbolic) and its diameter below pi/2
/// (spherical).
fn facet_distance_ranges(g: Geometry) -> ((f64, f64), (f64, f64)) {
    match (g.kind(), g.dim()) {
        (ModelKind::Spherical, 2) => ((0.15, 0.35), (0.15, 0.45)),
        (ModelKind::Spherical, _) => ((0.1, 0.22), (0.1, 0.4)),
        // Regular ideal triangle / tetrahedron inradii: 0.549 and 0.347.
        (ModelKind::Hyperbolic, 2) => ((0.15, 0.45), (0.15, 0.6)),
        (ModelKind::Hyperbolic, _) => ((0.1, 0.28), (0.1, 0.6)),
        (ModelKind::Euclidean, _) => ((0.5, 2.0), (0.5, 2.0)),
    }
}

/// Bounded polytope with `facets >= dim + 1` facets around a random center.
/// Each facet is orthogonal to a geodesic from the center: the first `dim + 1`
/// along a rotated regular simplex, the rest uniformly random. Resamples until
/// the body is bounded (and Funk-admissible on the sphere).
pub fn random_polytope<R: Rng>(rng: &mut R, g: Geometry, facets: usize) -> ConvexBody {
    let ((slo, shi), (lo, hi)) = facet_distance_ranges(g);
    loop {
        let c = random_center(rng, g);
        let frame = c.tangent_frame();
        let along = |coeffs: &Vector| {
            let v = frame.iter().zip(coeffs.iter()).fold(Vector::zeros(g.ambient_dim()), |acc, (e, s)| acc + e.vec() * *s);
            TangentVector::projected(c.clone(), v)
        };
        let mut dirs: Vec<(TangentVector, f64)> = simplex_directions(rng, g.dim())
            .iter()
            .map(|d| (along(d), rng.random_range(slo..shi)))
            .collect();
        while dirs.len() < facets {
            dirs.push((random_unit_tangent(rng, &c), rng.random_range(lo..hi)));
        }
        let halfspaces: Vec<HalfSpace> = dirs
            .iter()
            .map(|(xi, r)| {
                let plane = Hyperplane::orthogonal_at(&xi.velocity_at(*r)).expect("unit tangent");
                HalfSpace::new(plane.flipped())
            })
            .collect();
        if let Ok(body) = ConvexBody::polytope(g, halfspaces, c) {
            let f = body.flags();
            if f.bounded && f.funk_diameter_ok {
                return body;
            }
        }
    }
}

/// Ball or polytope with 3 to 8 facets (at least `dim + 1`), evenly mixed.
pub fn random_body<R: Rng>(rng: &mut R, g: Geometry) -> ConvexBody {
    if rng.random_bool(0.25) {
        random_ball(rng, g)
    } else {
        let k = rng.random_range((g.dim() + 1).max(3)..=8);
        random_polytope(rng, g, k)
    }
}

/// All three geometries in dimensions 2 and 3.
pub fn all_geometries() -> Vec<Geometry> {
    let mut out = Vec::new();
    for dim in [2, 3] {
        out.push(Geometry::euclidean(dim));
        out.push(Geometry::spherical(dim));
        out.push(Geometry::hyperbolic(dim));
    }
    out
}

/// Random point on the geodesic through `x` and `y`, at parameter `s` with
/// `x` at 0 and `y` at 1 (by arc length).
pub fn point_on_line(x: &Point, y: &Point, s: f64) -> Result<Point> {
    let d = crate::spaces::dist(x, y)?;
    let xi = crate::spaces::unit_tangent(x, y)?;
    exp(x, &xi, s * d)
}
