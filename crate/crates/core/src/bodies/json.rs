//! On-disk body format.
//!
//! ```json
//! {"geometry":"euclidean","dim":2,"kind":"polytope",
//!  "halfspaces":[{"normal":[-1,0],"offset":-1}],"interior_point":[0,0]}
//! ```
//!
//! A half-space is the open set `{x : <x, normal> > offset}`, with the ambient
//! form of the geometry; `offset` is only meaningful for Euclidean bodies.
//! Curved points and normals are ambient vectors and are normalized on load.

use serde::{Deserialize, Serialize};

use super::{ConvexBody, HalfSpace, Shape};
use crate::error::{GeometryError, Result};
use crate::spaces::{Geometry, Hyperplane, ModelKind, Point, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyKind {
    Polytope,
    Ball,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpaceJson {
    pub normal: Vec<f64>,
    #[serde(default)]
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyJson {
    pub geometry: ModelKind,
    pub dim: usize,
    pub kind: BodyKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub halfspaces: Vec<HalfSpaceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interior_point: Option<Vec<f64>>,
}

fn load_point(g: Geometry, coords: &[f64], what: &str) -> Result<Point> {
    Point::project(g, Vector::from_column_slice(coords))
        .map_err(|e| GeometryError::InvalidBody(format!("{what}: {e}")))
}

impl BodyJson {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GeometryError::InvalidBody(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("body serializes")
    }

    /// Normalizes and validates into a [`ConvexBody`].
    pub fn build(&self) -> Result<ConvexBody> {
        let g = Geometry::new(self.geometry, self.dim)?;
        match self.kind {
            BodyKind::Polytope => {
                let w = self.interior_point.as_ref().ok_or_else(|| {
                    GeometryError::InvalidBody("polytope needs interior_point".into())
                })?;
                let witness = load_point(g, w, "interior_point")?;
                let facets = self
                    .halfspaces
                    .iter()
                    .map(|h| {
                        let n = Vector::from_column_slice(&h.normal);
                        let offset = if g.is_curved() { 0.0 } else { h.offset };
                        if g.is_curved() && h.offset != 0.0 {
                            return Err(GeometryError::InvalidBody(
                                "offset must be 0 for curved geometries".into(),
                            ));
                        }
                        Hyperplane::with_normal(g, n, offset).map(HalfSpace::new)
                    })
                    .collect::<Result<Vec<_>>>()?;
                ConvexBody::polytope(g, facets, witness)
            }
            BodyKind::Ball => {
                let c = self
                    .center
                    .as_ref()
                    .ok_or_else(|| GeometryError::InvalidBody("ball needs center".into()))?;
                let r = self
                    .radius
                    .ok_or_else(|| GeometryError::InvalidBody("ball needs radius".into()))?;
                let center = load_point(g, c, "center")?;
                match &self.interior_point {
                    Some(w) => {
                        ConvexBody::ball_with_witness(center, r, load_point(g, w, "interior_point")?)
                    }
                    None => ConvexBody::ball(center, r),
                }
            }
        }
    }

    pub fn from_body(body: &ConvexBody) -> Self {
        let g = body.geometry();
        let interior_point = Some(body.witness().to_vec());
        match body.shape() {
            Shape::Polytope(facets) => Self {
                geometry: g.kind(),
                dim: g.dim(),
                kind: BodyKind::Polytope,
                halfspaces: facets
                    .iter()
                    .map(|f| HalfSpaceJson {
                        normal: f.plane().normal().iter().copied().collect(),
                        offset: f.plane().offset(),
                    })
                    .collect(),
                center: None,
                radius: None,
                interior_point,
            },
            Shape::Ball { center, radius } => Self {
                geometry: g.kind(),
                dim: g.dim(),
                kind: BodyKind::Ball,
                halfspaces: Vec::new(),
                center: Some(center.to_vec()),
                radius: Some(*radius),
                interior_point,
            },
        }
    }
}

impl ConvexBody {
    pub fn from_json(text: &str) -> Result<Self> {
        BodyJson::from_json(text)?.build()
    }

    pub fn to_json(&self) -> String {
        BodyJson::from_body(self).to_json()
    }
}
