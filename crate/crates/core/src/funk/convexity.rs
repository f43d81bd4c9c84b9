use rayon::prelude::*;

use super::{check_inside, funk_f1};
use crate::bodies::ConvexBody;
use crate::error::{GeometryError, Result};
use crate::sampling::{random_interior_point, random_unit_tangent, rng_for};
use crate::spaces::{Point, TangentVector};

/// Central second difference `F(x, a(t-h)) - 2 F(x, a(t)) + F(x, a(t+h))` of
/// the Funk distance along the geodesic `a(s) = exp(s * alpha)`; the speed of
/// `a` is the length of `alpha`.
pub fn second_difference(
    body: &ConvexBody,
    x: &Point,
    alpha: &TangentVector,
    t: f64,
    h: f64,
) -> Result<f64> {
    check_inside(body, x)?;
    let pts = [alpha.flow(t - h), alpha.flow(t), alpha.flow(t + h)];
    for p in &pts {
        check_inside(body, p)?;
    }
    Ok(funk_f1(body, x, &pts[0])? - 2.0 * funk_f1(body, x, &pts[1])? + funk_f1(body, x, &pts[2])?)
}

/// Most negative scaled second difference found by a search.
#[derive(Debug, Clone)]
pub struct ConvexityWitness {
    pub x: Point,
    /// Unit-speed geodesic through the probe point `alpha.base()` at `t = 0`.
    pub alpha: TangentVector,
    pub h: f64,
    /// Second difference divided by `h^2`.
    pub scaled: f64,
}

/// Random restarts of `(x, alpha)` inside `body`, each probed at step `h`.
/// Restart `k` uses its own RNG stream so the result does not depend on
/// scheduling.
pub fn convexity_witness_search(
    body: &ConvexBody,
    restarts: usize,
    h: f64,
    seed: u64,
) -> Result<ConvexityWitness> {
    if restarts == 0 || !(h > 0.0) {
        return Err(GeometryError::Precondition("need restarts > 0 and h > 0".into()));
    }
    let found: Vec<ConvexityWitness> = (0..restarts)
        .into_par_iter()
        .filter_map(|k| {
            let mut rng = rng_for(seed, "convexity-witness", k as u64);
            let x = random_interior_point(&mut rng, body, 0.9);
            let y = random_interior_point(&mut rng, body, 0.9);
            let alpha = random_unit_tangent(&mut rng, &y);
            let sd = second_difference(body, &x, &alpha, 0.0, h).ok()?;
            Some(ConvexityWitness {
                x,
                alpha,
                h,
                scaled: sd / (h * h),
            })
        })
        .collect();
    found
        .into_iter()
        .min_by(|a, b| a.scaled.total_cmp(&b.scaled))
        .ok_or_else(|| GeometryError::Degenerate("no admissible configuration".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_body, rng_for};
    use crate::spaces::Geometry;

    #[test]
    fn euclidean_and_spherical_are_convex() {
        for g in [Geometry::euclidean(2), Geometry::spherical(2)] {
            let mut rng = rng_for(1, "sd-test", 0);
            for _ in 0..20 {
                let body = random_body(&mut rng, g);
                let w = convexity_witness_search(&body, 20, 1e-2, 3).unwrap();
                assert!(w.scaled >= -1e-8, "{g}: {}", w.scaled);
            }
        }
    }
}
