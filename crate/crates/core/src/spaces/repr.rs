//! JSON shapes for spaces and points.

use serde::{Deserialize, Serialize};

use super::graph::{Edge, GraphPoint};
use super::{MetricSpace, Point};
use crate::error::{Error, Result};

fn default_branches() -> usize {
    2
}

/// Wire form of a [`MetricSpace`], e.g. `{"kind": "sphere2", "radius": 1.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceDescriptor {
    Euclidean {
        dim: usize,
    },
    Circle {
        radius: f64,
    },
    Sphere2 {
        radius: f64,
        #[serde(default = "default_branches")]
        n_branches: usize,
    },
    FlatTorus {
        a: f64,
        b: f64,
    },
    FiniteGraph {
        vertices: Vec<String>,
        /// `[i, j, w]` triples.
        edges: Vec<(usize, usize, f64)>,
    },
}

impl TryFrom<SpaceDescriptor> for MetricSpace {
    type Error = Error;

    fn try_from(d: SpaceDescriptor) -> Result<Self> {
        match d {
            SpaceDescriptor::Euclidean { dim } => MetricSpace::euclidean(dim),
            SpaceDescriptor::Circle { radius } => MetricSpace::circle(radius),
            SpaceDescriptor::Sphere2 { radius, n_branches } => {
                MetricSpace::sphere2_with_branches(radius, n_branches)
            }
            SpaceDescriptor::FlatTorus { a, b } => MetricSpace::flat_torus(a, b),
            SpaceDescriptor::FiniteGraph { vertices, edges } => MetricSpace::finite_graph(
                vertices,
                edges
                    .into_iter()
                    .map(|(u, v, weight)| Edge { u, v, weight })
                    .collect(),
            ),
        }
    }
}

impl From<MetricSpace> for SpaceDescriptor {
    fn from(s: MetricSpace) -> Self {
        match s {
            MetricSpace::Euclidean { dim } => SpaceDescriptor::Euclidean { dim },
            MetricSpace::Circle { radius } => SpaceDescriptor::Circle { radius },
            MetricSpace::Sphere2 { radius, n_branches } => SpaceDescriptor::Sphere2 { radius, n_branches },
            MetricSpace::FlatTorus { a, b } => SpaceDescriptor::FlatTorus { a, b },
            MetricSpace::FiniteGraph(g) => SpaceDescriptor::FiniteGraph {
                vertices: g.labels().to_vec(),
                edges: g.edges().iter().map(|e| (e.u, e.v, e.weight)).collect(),
            },
        }
    }
}

/// Wire form of a [`Point`]; its meaning depends on the space it is read in.
///
/// Circle angles and graph vertex ids are scalars, Euclidean, sphere and
/// torus points are coordinate arrays, and points inside a graph edge are
/// `{"edge": k, "offset": s}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRepr {
    Scalar(f64),
    Coords(Vec<f64>),
    OnEdge { edge: usize, offset: f64 },
}

impl From<&Point> for PointRepr {
    fn from(p: &Point) -> Self {
        match p {
            Point::Euclidean(v) => PointRepr::Coords(v.clone()),
            Point::Circle(a) => PointRepr::Scalar(*a),
            Point::Sphere(v) => PointRepr::Coords(v.to_vec()),
            Point::Torus(v) => PointRepr::Coords(v.to_vec()),
            Point::Graph(GraphPoint::Vertex(i)) => PointRepr::Scalar(*i as f64),
            Point::Graph(GraphPoint::OnEdge { edge, offset }) => PointRepr::OnEdge {
                edge: *edge,
                offset: *offset,
            },
        }
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PointRepr::from(self).serialize(serializer)
    }
}

impl MetricSpace {
    /// Reads a point in this space from its wire form, canonicalizing it.
    pub fn point_from_repr(&self, repr: &PointRepr) -> Result<Point> {
        let shape_err = || Error::InvalidPoint {
            space: self.kind().into(),
            reason: format!("cannot read {repr:?} as a point"),
        };
        match (self, repr) {
            (MetricSpace::Euclidean { .. }, PointRepr::Scalar(x)) => self.euclidean_point(&[*x]),
            (MetricSpace::Euclidean { .. }, PointRepr::Coords(v)) => self.euclidean_point(v),
            (MetricSpace::Circle { .. }, PointRepr::Scalar(a)) => self.circle_point(*a),
            (MetricSpace::Sphere2 { .. }, PointRepr::Coords(v)) if v.len() == 3 => {
                self.sphere_point([v[0], v[1], v[2]])
            }
            (MetricSpace::FlatTorus { .. }, PointRepr::Coords(v)) if v.len() == 2 => {
                self.torus_point(v[0], v[1])
            }
            (MetricSpace::FiniteGraph(_), PointRepr::Scalar(i)) => {
                if i.fract() != 0.0 || *i < 0.0 {
                    return Err(shape_err());
                }
                self.vertex(*i as usize)
            }
            (MetricSpace::FiniteGraph(_), PointRepr::OnEdge { edge, offset }) => {
                self.edge_point(*edge, *offset)
            }
            _ => Err(shape_err()),
        }
    }
}
