//! Model-space kernel for the three constant-curvature geometries.
//!
//! Points of the sphere `S^n` are unit vectors of `R^{n+1}`; points of
//! hyperbolic space `H^n` live on the upper sheet of the hyperboloid
//! `x_1^2 + ... + x_n^2 - x_{n+1}^2 = -1, x_{n+1} > 0`. The last ambient
//! coordinate is the timelike one. Euclidean points are plain `R^n` vectors.
//!
//! Hyperplanes are totally geodesic codimension-one subspaces: affine
//! `{a.x = b}` in `R^n`, and central `{<x, n> = 0}` in the curved models,
//! where the pairing is the form of the geometry.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

use crate::error::{GeometryError, Result};

pub type Vector = DVector<f64>;

/// Tolerance for the on-manifold and tangency constraints.
pub const MANIFOLD_TOL: f64 = 1e-12;
/// Clamp window for arccos / arccosh arguments.
pub const CLAMP_TOL: f64 = 1e-9;
/// Tolerance on the unit length of tangent directions fed to `exp`.
pub const UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Euclidean,
    Spherical,
    Hyperbolic,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModelKind::Euclidean => "euclidean",
            ModelKind::Spherical => "spherical",
            ModelKind::Hyperbolic => "hyperbolic",
        };
        f.write_str(s)
    }
}

/// A model geometry together with its intrinsic dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Geometry {
    kind: ModelKind,
    dim: usize,
}

impl Geometry {
    pub fn new(kind: ModelKind, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(GeometryError::Precondition(format!(
                "intrinsic dimension must be at least 2, got {dim}"
            )));
        }
        Ok(Self { kind, dim })
    }

    /// Panics if `dim < 2`.
    pub fn euclidean(dim: usize) -> Self {
        Self::new(ModelKind::Euclidean, dim).expect("dimension")
    }

    /// Panics if `dim < 2`.
    pub fn spherical(dim: usize) -> Self {
        Self::new(ModelKind::Spherical, dim).expect("dimension")
    }

    /// Panics if `dim < 2`.
    pub fn hyperbolic(dim: usize) -> Self {
        Self::new(ModelKind::Hyperbolic, dim).expect("dimension")
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        match self.kind {
            ModelKind::Euclidean => self.dim,
            _ => self.dim + 1,
        }
    }

    pub fn is_curved(&self) -> bool {
        self.kind != ModelKind::Euclidean
    }

    /// Ambient bilinear form without dimension checks.
    pub(crate) fn pair(&self, u: &Vector, v: &Vector) -> f64 {
        match self.kind {
            ModelKind::Hyperbolic => minkowski(u, v),
            _ => u.dot(v),
        }
    }

    /// Length weight of the geometry: `d`, `sin d` or `sinh d`.
    pub fn weight(&self, d: f64) -> f64 {
        match self.kind {
            ModelKind::Euclidean => d,
            ModelKind::Spherical => d.sin(),
            ModelKind::Hyperbolic => d.sinh(),
        }
    }

    /// Logarithmic derivative of the weight: `1/d`, `cot d` or `coth d`.
    pub fn weight_log_derivative(&self, d: f64) -> f64 {
        match self.kind {
            ModelKind::Euclidean => 1.0 / d,
            ModelKind::Spherical => d.cos() / d.sin(),
            ModelKind::Hyperbolic => d.cosh() / d.sinh(),
        }
    }

    /// Base point of the model: the Euclidean origin, the north pole, or the
    /// hyperboloid vertex.
    pub fn origin(&self) -> Point {
        let mut c = Vector::zeros(self.ambient_dim());
        if self.is_curved() {
            c[self.dim] = 1.0;
        }
        Point {
            geometry: *self,
            coords: c,
        }
    }

    fn check_len(&self, v: &Vector) -> Result<()> {
        if v.len() != self.ambient_dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.ambient_dim(),
                found: v.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.dim)
    }
}

/// Minkowski form `x_1 y_1 + ... + x_n y_n - x_{n+1} y_{n+1}`.
pub fn minkowski(u: &Vector, v: &Vector) -> f64 {
    let n = u.len() - 1;
    u.rows(0, n).dot(&v.rows(0, n)) - u[n] * v[n]
}

/// The ambient form of `g`: Euclidean dot product, or Minkowski for `H^n`.
pub fn form(g: &Geometry, u: &Vector, v: &Vector) -> Result<f64> {
    g.check_len(u)?;
    g.check_len(v)?;
    Ok(g.pair(u, v))
}

fn scale_of(v: &Vector) -> f64 {
    v.norm_squared().max(1.0)
}

/// A point of a model space in ambient coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    geometry: Geometry,
    coords: Vector,
}

impl Point {
    /// Validates the manifold constraint and snaps the coordinates back onto
    /// the manifold.
    pub fn new(geometry: Geometry, coords: Vector) -> Result<Self> {
        geometry.check_len(&coords)?;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::InvalidPoint("non-finite coordinate".into()));
        }
        match geometry.kind {
            ModelKind::Euclidean => {}
            ModelKind::Spherical => {
                let r = coords.norm_squared() - 1.0;
                if r.abs() > MANIFOLD_TOL * scale_of(&coords) {
                    return Err(GeometryError::InvalidPoint(format!(
                        "not on the unit sphere (|x|^2 - 1 = {r:e})"
                    )));
                }
            }
            ModelKind::Hyperbolic => {
                let r = minkowski(&coords, &coords) + 1.0;
                if r.abs() > MANIFOLD_TOL * scale_of(&coords) {
                    return Err(GeometryError::InvalidPoint(format!(
                        "not on the hyperboloid (<x,x> + 1 = {r:e})"
                    )));
                }
                if coords[geometry.dim] <= 0.0 {
                    return Err(GeometryError::InvalidPoint(
                        "hyperboloid point on the lower sheet".into(),
                    ));
                }
            }
        }
        Ok(Self::renormalized(geometry, coords))
    }

    pub fn from_slice(geometry: Geometry, coords: &[f64]) -> Result<Self> {
        Self::new(geometry, Vector::from_column_slice(coords))
    }

    /// Radially rescales an arbitrary ambient vector onto the manifold.
    ///
    /// Spherical input must be nonzero; hyperbolic input must be timelike
    /// with positive last coordinate.
    pub fn project(geometry: Geometry, coords: Vector) -> Result<Self> {
        geometry.check_len(&coords)?;
        match geometry.kind {
            ModelKind::Euclidean => {}
            ModelKind::Spherical => {
                if coords.norm() == 0.0 {
                    return Err(GeometryError::InvalidPoint("zero vector".into()));
                }
            }
            ModelKind::Hyperbolic => {
                if minkowski(&coords, &coords) >= 0.0 || coords[geometry.dim] <= 0.0 {
                    return Err(GeometryError::InvalidPoint(
                        "vector is not future timelike".into(),
                    ));
                }
            }
        }
        Ok(Self::renormalized(geometry, coords))
    }

    /// Divides by `sqrt(|<x,x>|)` with the form of the geometry.
    pub(crate) fn renormalized(geometry: Geometry, mut coords: Vector) -> Self {
        match geometry.kind {
            ModelKind::Euclidean => {}
            ModelKind::Spherical => {
                let n = coords.norm();
                coords /= n;
            }
            ModelKind::Hyperbolic => {
                let q = minkowski(&coords, &coords);
                coords /= (-q).sqrt();
            }
        }
        Self { geometry, coords }
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn coords(&self) -> &Vector {
        &self.coords
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.coords.iter().copied().collect()
    }

    /// Projects an ambient vector onto the tangent space at this point.
    pub fn tangent_projection(&self, v: &Vector) -> Vector {
        match self.geometry.kind {
            ModelKind::Euclidean => v.clone(),
            ModelKind::Spherical => v - &self.coords * self.coords.dot(v),
            ModelKind::Hyperbolic => v + &self.coords * minkowski(v, &self.coords),
        }
    }

    /// An orthonormal frame of the tangent space, built by Gram-Schmidt on the
    /// projected ambient basis.
    pub fn tangent_frame(&self) -> Vec<TangentVector> {
        let g = self.geometry;
        let mut frame: Vec<Vector> = Vec::with_capacity(g.dim);
        for k in 0..g.ambient_dim() {
            if frame.len() == g.dim {
                break;
            }
            let mut e = Vector::zeros(g.ambient_dim());
            e[k] = 1.0;
            let mut v = self.tangent_projection(&e);
            for f in &frame {
                let c = g.pair(&v, f);
                v -= f * c;
            }
            let n = g.pair(&v, &v).max(0.0).sqrt();
            if n > 1e-8 {
                frame.push(v / n);
            }
        }
        frame
            .into_iter()
            .map(|vec| TangentVector {
                base: self.clone(),
                vec,
            })
            .collect()
    }
}

/// A tangent vector in ambient coordinates together with its base point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: Point,
    vec: Vector,
}

impl TangentVector {
    pub fn new(base: Point, vec: Vector) -> Result<Self> {
        let g = base.geometry;
        g.check_len(&vec)?;
        if g.is_curved() {
            let r = g.pair(&base.coords, &vec);
            if r.abs() > MANIFOLD_TOL * scale_of(&base.coords).max(vec.norm()) {
                return Err(GeometryError::InvalidPoint(format!(
                    "vector is not tangent at its base (<x,v> = {r:e})"
                )));
            }
        }
        Ok(Self::projected(base, vec))
    }

    /// Projects `vec` onto the tangent space at `base`.
    pub fn projected(base: Point, vec: Vector) -> Self {
        let vec = base.tangent_projection(&vec);
        Self { base, vec }
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn vec(&self) -> &Vector {
        &self.vec
    }

    pub fn geometry(&self) -> Geometry {
        self.base.geometry
    }

    /// Riemannian inner product with another vector at the same base.
    pub fn inner(&self, other: &TangentVector) -> f64 {
        self.geometry().pair(&self.vec, &other.vec)
    }

    pub fn norm(&self) -> f64 {
        self.geometry().pair(&self.vec, &self.vec).max(0.0).sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            base: self.base.clone(),
            vec: &self.vec * s,
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(GeometryError::Degenerate("zero tangent vector".into()));
        }
        Ok(self.scaled(1.0 / n))
    }

    /// Angle in `[0, pi]` between two nonzero tangent vectors at one base.
    pub fn angle_to(&self, other: &TangentVector) -> Result<f64> {
        let u = self.normalized()?;
        let v = other.normalized()?;
        let c = u.inner(&v);
        let perp = &v.vec - &u.vec * c;
        let s = self.geometry().pair(&perp, &perp).max(0.0).sqrt();
        Ok(s.atan2(c))
    }

    /// Point reached after time `t` along the geodesic with this initial
    /// velocity (any speed).
    pub(crate) fn flow(&self, t: f64) -> Point {
        let g = self.geometry();
        let x = &self.base.coords;
        let speed = self.norm();
        let coords = match g.kind {
            ModelKind::Euclidean => x + &self.vec * t,
            _ if speed == 0.0 => x.clone(),
            ModelKind::Spherical => {
                let s = speed * t;
                x * s.cos() + &self.vec * (s.sin() / speed)
            }
            ModelKind::Hyperbolic => {
                let s = speed * t;
                x * s.cosh() + &self.vec * (s.sinh() / speed)
            }
        };
        Point::renormalized(g, coords)
    }

    /// Velocity at time `t` of the geodesic with this initial velocity,
    /// based at `flow(t)`.
    pub(crate) fn velocity_at(&self, t: f64) -> TangentVector {
        let g = self.geometry();
        let x = &self.base.coords;
        let speed = self.norm();
        let base = self.flow(t);
        let vec = match g.kind {
            ModelKind::Euclidean => self.vec.clone(),
            _ if speed == 0.0 => self.vec.clone(),
            ModelKind::Spherical => {
                let s = speed * t;
                x * (-s.sin() * speed) + &self.vec * s.cos()
            }
            ModelKind::Hyperbolic => {
                let s = speed * t;
                x * (s.sinh() * speed) + &self.vec * s.cosh()
            }
        };
        TangentVector::projected(base, vec)
    }
}

fn same_geometry(a: Geometry, b: Geometry) -> Result<()> {
    if a != b {
        return Err(GeometryError::GeometryMismatch);
    }
    Ok(())
}

/// Geodesic distance.
pub fn dist(x: &Point, y: &Point) -> Result<f64> {
    same_geometry(x.geometry, y.geometry)?;
    let g = x.geometry;
    let diff = &x.coords - &y.coords;
    match g.kind {
        ModelKind::Euclidean => Ok(diff.norm()),
        ModelKind::Spherical => {
            let c = x.coords.dot(&y.coords);
            if c.abs() > 1.0 + CLAMP_TOL {
                return Err(GeometryError::InvalidPoint(format!(
                    "arccos argument {c} out of range"
                )));
            }
            let sum = &x.coords + &y.coords;
            Ok(2.0 * diff.norm().atan2(sum.norm()))
        }
        ModelKind::Hyperbolic => {
            let c = -minkowski(&x.coords, &y.coords);
            if c < 1.0 - CLAMP_TOL {
                return Err(GeometryError::InvalidPoint(format!(
                    "arccosh argument {c} out of range"
                )));
            }
            if c < 2.0 {
                // 2 sinh(d/2) is the Minkowski length of the chord.
                let q = minkowski(&diff, &diff).max(0.0);
                Ok(2.0 * (q.sqrt() / 2.0).asinh())
            } else {
                Ok(c.acosh())
            }
        }
    }
}

/// Unit tangent at `x` of the arc-length geodesic from `x` to `y`.
pub fn unit_tangent(x: &Point, y: &Point) -> Result<TangentVector> {
    let d = dist(x, y)?;
    if d == 0.0 {
        return Err(GeometryError::CoincidentPoints);
    }
    if x.geometry.kind == ModelKind::Spherical && d >= PI - MANIFOLD_TOL {
        return Err(GeometryError::AntipodalPoints);
    }
    let v = TangentVector::projected(x.clone(), &y.coords - &x.coords);
    v.normalized().map_err(|_| GeometryError::CoincidentPoints)
}

/// `exp_x(t xi)` for a unit tangent `xi` at `x`, renormalized onto the manifold.
pub fn exp(x: &Point, xi: &TangentVector, t: f64) -> Result<Point> {
    same_geometry(x.geometry, xi.geometry())?;
    let off = (&x.coords - &xi.base.coords).amax();
    if off > UNIT_TOL * x.coords.amax().max(1.0) {
        return Err(GeometryError::BaseMismatch);
    }
    let n = xi.norm();
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(GeometryError::NonUnitTangent(n));
    }
    Ok(xi.flow(t))
}

/// An oriented totally geodesic hyperplane.
///
/// Euclidean: `{a.x = b}` with `|a| = 1`. Curved: `{<x, n> = 0}` with `n`
/// unit under the ambient form (spacelike for `H^n`). The sign of
/// [`Hyperplane::signed_value`] distinguishes the two sides.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    geometry: Geometry,
    normal: Vector,
    offset: f64,
}

impl Hyperplane {
    pub fn euclidean(geometry: Geometry, normal: Vector, offset: f64) -> Result<Self> {
        if geometry.is_curved() {
            return Err(GeometryError::InvalidHyperplane(
                "affine hyperplanes exist only in Euclidean space".into(),
            ));
        }
        geometry.check_len(&normal)?;
        let n = normal.norm();
        if n == 0.0 || !n.is_finite() || !offset.is_finite() {
            return Err(GeometryError::InvalidHyperplane("zero normal".into()));
        }
        Ok(Self {
            geometry,
            normal: normal / n,
            offset: offset / n,
        })
    }

    pub fn central(geometry: Geometry, normal: Vector) -> Result<Self> {
        if !geometry.is_curved() {
            return Err(GeometryError::InvalidHyperplane(
                "central hyperplanes need a curved geometry".into(),
            ));
        }
        geometry.check_len(&normal)?;
        let q = geometry.pair(&normal, &normal);
        if !q.is_finite() || q <= MANIFOLD_TOL * scale_of(&normal) {
            return Err(GeometryError::InvalidHyperplane(match geometry.kind {
                ModelKind::Hyperbolic => "normal is not spacelike".into(),
                _ => "zero normal".into(),
            }));
        }
        Ok(Self {
            geometry,
            normal: normal / q.sqrt(),
            offset: 0.0,
        })
    }

    /// Builds either kind of hyperplane from an ambient normal and an offset
    /// (the offset must be zero in curved geometries).
    pub fn with_normal(geometry: Geometry, normal: Vector, offset: f64) -> Result<Self> {
        if geometry.is_curved() {
            if offset != 0.0 {
                return Err(GeometryError::InvalidHyperplane(
                    "curved hyperplanes pass through the ambient origin; offset must be 0".into(),
                ));
            }
            Self::central(geometry, normal)
        } else {
            Self::euclidean(geometry, normal, offset)
        }
    }

    /// The hyperplane through `t.base()` orthogonal to `t`, oriented so that
    /// `t` points to its positive side.
    pub fn orthogonal_at(t: &TangentVector) -> Result<Self> {
        let g = t.geometry();
        let u = t.normalized()?;
        if g.is_curved() {
            Self::central(g, u.vec.clone())
        } else {
            let offset = u.vec.dot(&t.base.coords);
            Self::euclidean(g, u.vec.clone(), offset)
        }
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn flipped(&self) -> Self {
        Self {
            geometry: self.geometry,
            normal: -&self.normal,
            offset: -self.offset,
        }
    }

    /// `a.x - b` (Euclidean) or `<x, n>` (curved). Its absolute value is the
    /// weighted distance `w(d(x, pi))`.
    pub fn signed_value(&self, x: &Point) -> f64 {
        match self.geometry.kind {
            ModelKind::Euclidean => self.normal.dot(&x.coords) - self.offset,
            _ => self.geometry.pair(&x.coords, &self.normal),
        }
    }

    /// Signed rate of change of [`signed_value`](Self::signed_value) along `v`.
    pub(crate) fn signed_derivative(&self, v: &TangentVector) -> f64 {
        self.geometry.pair(&v.vec, &self.normal)
    }
}

/// Distance from `x` to the hyperplane.
pub fn dist_to_hyperplane(x: &Point, pi: &Hyperplane) -> Result<f64> {
    same_geometry(x.geometry, pi.geometry)?;
    let s = pi.signed_value(x).abs();
    Ok(match x.geometry.kind {
        ModelKind::Euclidean => s,
        ModelKind::Spherical => s.min(1.0).asin(),
        ModelKind::Hyperbolic => s.asinh(),
    })
}

/// Nearest point projection of `x` onto `pi`.
pub fn foot(x: &Point, pi: &Hyperplane) -> Result<Point> {
    same_geometry(x.geometry, pi.geometry)?;
    let s = pi.signed_value(x);
    let g = x.geometry;
    let moved = &x.coords - &pi.normal * s;
    match g.kind {
        ModelKind::Euclidean => Ok(Point::renormalized(g, moved)),
        ModelKind::Spherical => {
            if 1.0 - s.abs() <= MANIFOLD_TOL {
                return Err(GeometryError::AmbiguousFoot);
            }
            Ok(Point::renormalized(g, moved))
        }
        ModelKind::Hyperbolic => Ok(Point::renormalized(g, moved)),
    }
}

/// Unit tangent at `x` pointing along the perpendicular geodesic towards `pi`
/// (minus the gradient of `d(., pi)`).
pub fn eta(x: &Point, pi: &Hyperplane) -> Result<TangentVector> {
    same_geometry(x.geometry, pi.geometry)?;
    let s = pi.signed_value(x);
    if s == 0.0 {
        return Err(GeometryError::OnHyperplane);
    }
    if x.geometry.kind == ModelKind::Spherical && 1.0 - s.abs() <= MANIFOLD_TOL {
        return Err(GeometryError::AmbiguousFoot);
    }
    let toward = TangentVector::projected(x.clone(), &pi.normal * (-s.signum()));
    toward.normalized()
}

/// Deterministic, roughly uniform unit directions in the tangent space at `x`:
/// equally spaced angles for `n = 2`, a Fibonacci lattice for `n = 3`, and a
/// fixed quasi-random set otherwise.
pub fn direction_samples(x: &Point, count: usize) -> Vec<TangentVector> {
    let frame = x.tangent_frame();
    let n = frame.len();
    let combine = |coeffs: &[f64]| -> TangentVector {
        let mut v = Vector::zeros(x.geometry.ambient_dim());
        for (c, e) in coeffs.iter().zip(&frame) {
            v += e.vec() * *c;
        }
        TangentVector {
            base: x.clone(),
            vec: v,
        }
    };
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    (0..count)
        .map(|k| match n {
            2 => {
                let th = 2.0 * PI * k as f64 / count as f64;
                combine(&[th.cos(), th.sin()])
            }
            3 => {
                let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let th = 2.0 * PI * k as f64 / golden;
                combine(&[r * th.cos(), r * th.sin(), z])
            }
            _ => {
                // Halton-style radical inverses pushed through a Box-Muller map.
                let coeffs: Vec<f64> = (0..n)
                    .map(|j| {
                        let u1 = radical_inverse(k + 1, PRIMES[(2 * j) % PRIMES.len()]);
                        let u2 = radical_inverse(k + 1, PRIMES[(2 * j + 1) % PRIMES.len()]);
                        (-2.0 * u1.max(1e-300).ln()).sqrt() * (2.0 * PI * u2).cos()
                    })
                    .collect();
                combine(&coeffs)
            }
        })
        .filter_map(|t| t.normalized().ok())
        .collect()
}

const PRIMES: [usize; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Euclidean cross product of two 3-vectors.
pub(crate) fn cross3(a: &Vector, b: &Vector) -> Vector {
    Vector::from_column_slice(&[
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}
