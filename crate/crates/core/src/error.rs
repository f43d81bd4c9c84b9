//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, GeometryError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("objects belong to different geometries")]
    GeometryMismatch,

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("coincident points")]
    CoincidentPoints,

    #[error("antipodal points have no unique geodesic")]
    AntipodalPoints,

    #[error("tangent vector is not unit length (norm {0})")]
    NonUnitTangent(f64),

    #[error("tangent vector is not based at the given point")]
    BaseMismatch,

    #[error("invalid hyperplane: {0}")]
    InvalidHyperplane(String),

    #[error("nearest point projection is not unique (point is a pole of the hyperplane)")]
    AmbiguousFoot,

    #[error("point lies on the hyperplane")]
    OnHyperplane,

    #[error("empty interior: witness violates facet {facet} (signed value {value:e})")]
    EmptyInterior { facet: usize, value: f64 },

    #[error("spherical body is not contained in an open hemisphere")]
    HemisphereViolation,

    #[error("spherical body diameter is not below pi/2; the Funk metric is undefined")]
    DiameterTooLarge,

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("point lies outside the body")]
    OutsideBody,

    #[error("point is not on the boundary of the body (max violation {0:e})")]
    NotOnBoundary(f64),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("geodesics do not intersect")]
    NoIntersection,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
