//! The cross-ratio / Menelaus chain behind the weak triangle inequality.
//!
//! For non-collinear `x, y, z` in a body, the lines `xy`, `yz`, `xz` meet the
//! boundary at `d, x, y, c`, at `f, y, z, e` and at `a, x, z, b`. Let `b'` be
//! where the chord `ce` crosses `xz`, `a'` where the line `df` crosses `xz`,
//! `p = ce ∩ df` and `g = py ∩ xz`. Projection from `p` carries `(x, y, c, d)`
//! to `(x, g, b', a')` and `(y, z, e, f)` to `(g, z, b', a')`; Menelaus on
//! `xyz` with transversal `d f a'` then collapses the product to
//! `w(xb')/w(zb')`, which dominates `w(xb)/w(zb)` because `b'` lies in the body.

use funkgeo::bodies::ConvexBody;
use funkgeo::funk::funk_f1;
use funkgeo::sampling::{random_body, random_interior_point, rng_for};
use funkgeo::spaces::{dist, unit_tangent, Geometry, Point};
use funkgeo::trig::{menelaus_product, Line, Triangle};

struct Chain {
    pencil_xy: f64,
    pencil_yz: f64,
    menelaus: f64,
    funk_sum: f64,
    defect: f64,
}

fn exit(body: &ConvexBody, from: &Point, toward: &Point) -> Point {
    body.ray_exit(from, &unit_tangent(from, toward).unwrap()).unwrap().unwrap().point
}

/// Residuals of the chain, or `None` when an auxiliary point is not a point
/// of the model (parallel or ultra-ideal intersections).
fn chain(body: &ConvexBody, x: &Point, y: &Point, z: &Point) -> Option<Chain> {
    let g = x.geometry();
    let w = |p: &Point, q: &Point| g.weight(dist(p, q).unwrap());
    let (c, d) = (exit(body, x, y), exit(body, y, x));
    let (e, f) = (exit(body, y, z), exit(body, z, y));
    let b = exit(body, x, z);
    let line = |p: &Point, q: &Point| Line::through(p, q).ok();

    let xz = line(x, z)?;
    let (ce, df) = (line(&c, &e)?, line(&d, &f)?);
    let b1 = ce.intersect(&xz, Some(x)).ok()?;
    let a1 = df.intersect(&xz, Some(x)).ok()?;
    let p = ce.intersect(&df, Some(x)).ok()?;
    let g1 = line(&p, y)?.intersect(&xz, Some(x)).ok()?;
    let tiny = |p: &Point, q: &Point| dist(p, q).map_or(true, |d| d < 1e-6 || g.weight(d).abs() < 1e-6);
    if [(&a1, x), (&a1, z), (&a1, &g1), (&b1, &g1), (&b1, z), (&p, y)].iter().any(|(p, q)| tiny(p, q)) {
        return None;
    }

    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
    let pencil_xy = rel(w(x, &c) / w(y, &c) * w(&d, y) / w(&d, x), w(x, &b1) / w(&g1, &b1) * w(&a1, &g1) / w(&a1, x));
    let pencil_yz = rel(w(y, &e) / w(z, &e) * w(&f, z) / w(&f, y), w(&g1, &b1) / w(z, &b1) * w(&a1, z) / w(&a1, &g1));
    let t = Triangle::new(x.clone(), y.clone(), z.clone()).ok()?;
    let menelaus = (menelaus_product(&t, &f, &a1, &d).ok()? - 1.0).abs();

    let lhs = (funk_f1(body, x, y).unwrap() + funk_f1(body, y, z).unwrap()).exp();
    let bound = w(x, &b1) / w(z, &b1);
    Some(Chain {
        pencil_xy,
        pencil_yz,
        menelaus,
        funk_sum: rel(lhs, bound),
        defect: bound.ln() - (w(x, &b) / w(z, &b)).ln(),
    })
}

#[test]
fn chain_identities_and_nonnegative_defect() {
    for g in [Geometry::euclidean(2), Geometry::spherical(2), Geometry::hyperbolic(2)] {
        let (mut valid, mut worst, mut defect) = (0, 0f64, f64::INFINITY);
        for i in 0..400 {
            let mut r = rng_for(5, &format!("chain.{g}"), i);
            let body = random_body(&mut r, g);
            let [x, y, z] = [0; 3].map(|_| random_interior_point(&mut r, &body, 0.9));
            let turn = unit_tangent(&y, &x).unwrap().angle_to(&unit_tangent(&y, &z).unwrap()).unwrap();
            if !(0.1..3.0).contains(&turn) {
                continue;
            }
            let Some(ch) = chain(&body, &x, &y, &z) else { continue };
            valid += 1;
            worst = worst.max(ch.pencil_xy).max(ch.pencil_yz).max(ch.menelaus).max(ch.funk_sum);
            defect = defect.min(ch.defect);
            // The chain's defect is exactly the additivity defect of F.
            let direct = funk_f1(&body, &x, &y).unwrap() + funk_f1(&body, &y, &z).unwrap() - funk_f1(&body, &x, &z).unwrap();
            assert!((direct - ch.defect).abs() <= 1e-9 * (1.0 + direct.abs()), "{g}: {direct} vs {}", ch.defect);
        }
        assert!(valid >= 100, "{g}: only {valid} usable configurations");
        assert!(worst <= 1e-9, "{g}: chain residual {worst:e}");
        assert!(defect >= -1e-12, "{g}: negative defect {defect:e}");
    }
}
