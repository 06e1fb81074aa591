//! Geodesic metric spaces used as test beds.
//!
//! Five concrete families are supported: Euclidean space, a round circle, the
//! round 2-sphere, a flat 2-torus and weighted graphs (as metric graphs).
//! Every space value is immutable once built and every operation is a pure
//! function of its arguments.

mod convexity;
mod geodesic;
pub mod graph;
mod repr;

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use convexity::{
    busemann_sides, convexity_probe, convexity_probe_with, p_convexity_sides, ConvexityConfig, UniformModulus,
    CONVEXITY_TOL,
};
pub use geodesic::{GeodesicPath, PathShape};
pub use graph::{Edge, GraphMetric, GraphPoint};
pub use repr::{PointRepr, SpaceDescriptor};

/// Points closer than this are treated as equal.
pub const POINT_EPS: f64 = 1e-12;

/// Relative slack used to decide that two points are antipodal (at the cut
/// locus of each other).
pub const ANTIPODAL_TOL: f64 = 1e-9;

/// A point of one of the supported spaces.
///
/// Circle angles and torus coordinates are kept in `[0, period)`; sphere
/// points are unit vectors regardless of the sphere radius.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Euclidean(Vec<f64>),
    Circle(f64),
    Sphere([f64; 3]),
    Torus([f64; 2]),
    Graph(GraphPoint),
}

impl Point {
    pub fn kind(&self) -> &'static str {
        match self {
            Point::Euclidean(_) => "euclidean",
            Point::Circle(_) => "circle",
            Point::Sphere(_) => "sphere2",
            Point::Torus(_) => "flat_torus",
            Point::Graph(_) => "finite_graph",
        }
    }

    /// Flat coordinate vector, used for deterministic ordering of results.
    pub fn coords(&self) -> Vec<f64> {
        match self {
            Point::Euclidean(v) => v.clone(),
            Point::Circle(a) => vec![*a],
            Point::Sphere(v) => v.to_vec(),
            Point::Torus(v) => v.to_vec(),
            Point::Graph(GraphPoint::Vertex(i)) => vec![*i as f64, 0.0],
            Point::Graph(GraphPoint::OnEdge { edge, offset }) => vec![-1.0 - *edge as f64, *offset],
        }
    }

    pub fn lexicographic_cmp(&self, other: &Point) -> std::cmp::Ordering {
        let (a, b) = (self.coords(), other.coords());
        for (x, y) in a.iter().zip(&b) {
            match x.total_cmp(y) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        a.len().cmp(&b.len())
    }
}

/// A geodesic metric space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceDescriptor", into = "SpaceDescriptor")]
pub enum MetricSpace {
    Euclidean { dim: usize },
    Circle { radius: f64 },
    /// `n_branches` meridians are reported between antipodal points.
    Sphere2 { radius: f64, n_branches: usize },
    FlatTorus { a: f64, b: f64 },
    FiniteGraph(GraphMetric),
}

pub(crate) fn canonical_angle(theta: f64, period: f64) -> f64 {
    let r = theta.rem_euclid(period);
    if r >= period {
        0.0
    } else {
        r
    }
}

// signed shortest displacement from a to b on a circle of the given period, in [-period/2, period/2)
pub(crate) fn wrapped_delta(a: f64, b: f64, period: f64) -> f64 {
    let d = (b - a).rem_euclid(period);
    if d >= 0.5 * period {
        d - period
    } else {
        d
    }
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

pub(crate) fn normalize3(a: [f64; 3]) -> Option<[f64; 3]> {
    let n = norm3(&a);
    if n > 0.0 && n.is_finite() {
        Some([a[0] / n, a[1] / n, a[2] / n])
    } else {
        None
    }
}

/// Central angle between unit vectors, accurate near 0 and near pi.
pub(crate) fn sphere_angle(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    norm3(&cross3(a, b)).atan2(dot3(a, b))
}

/// Unit vector orthogonal to `x`, chosen deterministically.
pub(crate) fn orthogonal_unit(x: &[f64; 3]) -> [f64; 3] {
    let axis = if x[0].abs() <= x[1].abs() && x[0].abs() <= x[2].abs() {
        [1.0, 0.0, 0.0]
    } else if x[1].abs() <= x[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    normalize3(cross3(x, &axis)).expect("x is a unit vector")
}

impl MetricSpace {
    pub fn euclidean(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpace("euclidean dimension must be >= 1".into()));
        }
        Ok(MetricSpace::Euclidean { dim })
    }

    pub fn circle(radius: f64) -> Result<Self> {
        check_length("circle radius", radius)?;
        Ok(MetricSpace::Circle { radius })
    }

    pub fn sphere2(radius: f64) -> Result<Self> {
        Self::sphere2_with_branches(radius, 2)
    }

    pub fn sphere2_with_branches(radius: f64, n_branches: usize) -> Result<Self> {
        check_length("sphere radius", radius)?;
        if n_branches < 1 {
            return Err(Error::InvalidSpace("n_branches must be >= 1".into()));
        }
        Ok(MetricSpace::Sphere2 { radius, n_branches })
    }

    pub fn flat_torus(a: f64, b: f64) -> Result<Self> {
        check_length("torus period a", a)?;
        check_length("torus period b", b)?;
        Ok(MetricSpace::FlatTorus { a, b })
    }

    pub fn finite_graph(labels: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        Ok(MetricSpace::FiniteGraph(GraphMetric::new(labels, edges)?))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MetricSpace::Euclidean { .. } => "euclidean",
            MetricSpace::Circle { .. } => "circle",
            MetricSpace::Sphere2 { .. } => "sphere2",
            MetricSpace::FlatTorus { .. } => "flat_torus",
            MetricSpace::FiniteGraph(_) => "finite_graph",
        }
    }

    /// Dimension of the space as a manifold (1 for graphs).
    pub fn intrinsic_dim(&self) -> usize {
        match self {
            MetricSpace::Euclidean { dim } => *dim,
            MetricSpace::Circle { .. } | MetricSpace::FiniteGraph(_) => 1,
            MetricSpace::Sphere2 { .. } | MetricSpace::FlatTorus { .. } => 2,
        }
    }

    pub fn graph(&self) -> Option<&GraphMetric> {
        match self {
            MetricSpace::FiniteGraph(g) => Some(g),
            _ => None,
        }
    }

    // ---- point construction -------------------------------------------------

    pub fn euclidean_point(&self, coords: &[f64]) -> Result<Point> {
        let p = Point::Euclidean(coords.to_vec());
        self.validate(&p)?;
        Ok(p)
    }

    pub fn circle_point(&self, angle: f64) -> Result<Point> {
        self.expect_kind("circle")?;
        finite(angle, "circle")?;
        Ok(Point::Circle(canonical_angle(angle, TAU)))
    }

    /// Normalizes `v` onto the unit sphere.
    pub fn sphere_point(&self, v: [f64; 3]) -> Result<Point> {
        self.expect_kind("sphere2")?;
        if v.iter().all(|c| c.is_finite()) && (norm3(&v) - 1.0).abs() <= 1e-12 {
            return Ok(Point::Sphere(v));
        }
        let u = normalize3(v).ok_or_else(|| Error::InvalidPoint {
            space: "sphere2".into(),
            reason: "zero or non-finite vector".into(),
        })?;
        Ok(Point::Sphere(u))
    }

    pub fn torus_point(&self, u: f64, v: f64) -> Result<Point> {
        match *self {
            MetricSpace::FlatTorus { a, b } => {
                finite(u, "flat_torus")?;
                finite(v, "flat_torus")?;
                Ok(Point::Torus([canonical_angle(u, a), canonical_angle(v, b)]))
            }
            _ => Err(self.mismatch("flat_torus")),
        }
    }

    pub fn vertex(&self, v: usize) -> Result<Point> {
        let p = Point::Graph(GraphPoint::Vertex(v));
        self.validate(&p)?;
        Ok(p)
    }

    pub fn edge_point(&self, edge: usize, offset: f64) -> Result<Point> {
        match self {
            MetricSpace::FiniteGraph(g) => Ok(Point::Graph(g.edge_point(edge, offset)?)),
            _ => Err(self.mismatch("finite_graph")),
        }
    }

    fn expect_kind(&self, kind: &str) -> Result<()> {
        if self.kind() == kind {
            Ok(())
        } else {
            Err(self.mismatch(kind))
        }
    }

    fn mismatch(&self, found: &str) -> Error {
        Error::SpaceMismatch {
            expected: self.kind().into(),
            found: found.into(),
        }
    }

    /// Checks that `p` is a canonical point of this space.
    pub fn validate(&self, p: &Point) -> Result<()> {
        let bad = |reason: String| Error::InvalidPoint {
            space: self.kind().into(),
            reason,
        };
        match (self, p) {
            (MetricSpace::Euclidean { dim }, Point::Euclidean(v)) => {
                if v.len() != *dim {
                    return Err(bad(format!("expected {dim} coordinates, got {}", v.len())));
                }
                if v.iter().any(|c| !c.is_finite()) {
                    return Err(bad("non-finite coordinate".into()));
                }
                Ok(())
            }
            (MetricSpace::Circle { .. }, Point::Circle(a)) => {
                if a.is_finite() && (0.0..TAU).contains(a) {
                    Ok(())
                } else {
                    Err(bad(format!("angle {a} not in [0, 2pi)")))
                }
            }
            (MetricSpace::Sphere2 { .. }, Point::Sphere(v)) => {
                if (norm3(v) - 1.0).abs() <= 1e-12 {
                    Ok(())
                } else {
                    Err(bad(format!("|v| = {} is not 1 within 1e-12", norm3(v))))
                }
            }
            (MetricSpace::FlatTorus { a, b }, Point::Torus([u, v])) => {
                if (0.0..*a).contains(u) && (0.0..*b).contains(v) {
                    Ok(())
                } else {
                    Err(bad(format!("({u}, {v}) not in [0,{a}) x [0,{b})")))
                }
            }
            (MetricSpace::FiniteGraph(g), Point::Graph(gp)) => g.validate(gp),
            _ => Err(self.mismatch(p.kind())),
        }
    }

    // ---- metric -------------------------------------------------------------

    /// Distance between two points of this space.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(self.dist(x, y))
    }

    /// Distance without validation. Panics on mismatched point kinds.
    pub(crate) fn dist(&self, x: &Point, y: &Point) -> f64 {
        match (self, x, y) {
            (MetricSpace::Euclidean { .. }, Point::Euclidean(a), Point::Euclidean(b)) => {
                a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
            }
            (MetricSpace::Circle { radius }, Point::Circle(a), Point::Circle(b)) => {
                radius * wrapped_delta(*a, *b, TAU).abs()
            }
            (MetricSpace::Sphere2 { radius, .. }, Point::Sphere(a), Point::Sphere(b)) => {
                radius * sphere_angle(a, b)
            }
            (MetricSpace::FlatTorus { a, b }, Point::Torus(p), Point::Torus(q)) => {
                let du = wrapped_delta(p[0], q[0], *a);
                let dv = wrapped_delta(p[1], q[1], *b);
                du.hypot(dv)
            }
            (MetricSpace::FiniteGraph(g), Point::Graph(p), Point::Graph(q)) => g.distance(p, q),
            _ => panic!("point kinds {} / {} do not match space {}", x.kind(), y.kind(), self.kind()),
        }
    }

    /// Diameter of the space; `None` when unbounded.
    pub fn diameter(&self) -> Option<f64> {
        match *self {
            MetricSpace::Euclidean { .. } => None,
            MetricSpace::Circle { radius } => Some(PI * radius),
            MetricSpace::Sphere2 { radius, .. } => Some(PI * radius),
            MetricSpace::FlatTorus { a, b } => Some((0.5 * a).hypot(0.5 * b)),
            MetricSpace::FiniteGraph(ref g) => Some(g.diameter()),
        }
    }

    // ---- sampling -----------------------------------------------------------

    /// Draws a point from the space's reference distribution (uniform for
    /// compact spaces, uniform on `[-5, 5]^n` for Euclidean space, uniform by
    /// arc length on graphs).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            MetricSpace::Euclidean { dim } => {
                Point::Euclidean((0..*dim).map(|_| rng.random_range(-5.0..5.0)).collect())
            }
            MetricSpace::Circle { .. } => Point::Circle(canonical_angle(rng.random_range(0.0..TAU), TAU)),
            MetricSpace::Sphere2 { .. } => loop {
                let v = [
                    rng.sample::<f64, _>(StandardNormal),
                    rng.sample::<f64, _>(StandardNormal),
                    rng.sample::<f64, _>(StandardNormal),
                ];
                if let Some(u) = normalize3(v) {
                    break Point::Sphere(u);
                }
            },
            MetricSpace::FlatTorus { a, b } => Point::Torus([
                canonical_angle(rng.random_range(0.0..*a), *a),
                canonical_angle(rng.random_range(0.0..*b), *b),
            ]),
            MetricSpace::FiniteGraph(g) => {
                if g.edges().is_empty() {
                    return Point::Graph(GraphPoint::Vertex(0));
                }
                let mut target = rng.random_range(0.0..g.total_length());
                for (k, e) in g.edges().iter().enumerate() {
                    if target < e.weight {
                        return Point::Graph(graph::canonical_on_edge(k, e, target));
                    }
                    target -= e.weight;
                }
                Point::Graph(GraphPoint::Vertex(g.edges()[0].v))
            }
        }
    }

    /// Returns a point `y` with `0 < d(x, y) < eps`, if the space's sampler
    /// can produce one.
    ///
    /// Manifolds return the point at distance `eps / 2` along a fixed
    /// direction. Graphs only offer vertices, so an isolated vertex (no other
    /// vertex closer than `eps`) yields `None`.
    pub fn nearby_point(&self, x: &Point, eps: f64) -> Result<Option<Point>> {
        self.validate(x)?;
        if !(eps > 0.0) {
            return Ok(None);
        }
        let h = 0.5 * eps;
        let y = match (self, x) {
            (MetricSpace::Euclidean { .. }, Point::Euclidean(v)) => {
                let mut w = v.clone();
                w[0] += h;
                Point::Euclidean(w)
            }
            (MetricSpace::Circle { radius }, Point::Circle(a)) => {
                if h >= PI * radius {
                    return Ok(None);
                }
                Point::Circle(canonical_angle(a + h / radius, TAU))
            }
            (MetricSpace::Sphere2 { radius, .. }, Point::Sphere(v)) => {
                if h >= PI * radius {
                    return Ok(None);
                }
                let t = orthogonal_unit(v);
                let th = h / radius;
                let w = [
                    th.cos() * v[0] + th.sin() * t[0],
                    th.cos() * v[1] + th.sin() * t[1],
                    th.cos() * v[2] + th.sin() * t[2],
                ];
                Point::Sphere(normalize3(w).expect("rotation of a unit vector"))
            }
            (MetricSpace::FlatTorus { a, .. }, Point::Torus([u, v])) => {
                if h >= 0.5 * a {
                    return Ok(None);
                }
                self.torus_point(u + h, *v)?
            }
            (MetricSpace::FiniteGraph(g), Point::Graph(GraphPoint::Vertex(v))) => {
                return Ok(g
                    .nearest_other_vertex(*v)
                    .filter(|&(_, d)| d < eps)
                    .map(|(u, _)| Point::Graph(GraphPoint::Vertex(u))));
            }
            (MetricSpace::FiniteGraph(_), Point::Graph(_)) => return Ok(None),
            _ => unreachable!("validated above"),
        };
        let d = self.dist(x, &y);
        Ok((d > 0.0 && d < eps).then_some(y))
    }

    // ---- tangent-space operations (smooth spaces only) -----------------------

    /// Tangent vector at `x` pointing to `y` with length `d(x, y)`.
    ///
    /// At the cut locus one of the minimizing directions is returned. Graph
    /// spaces have no tangent structure and return `None`.
    pub fn log_map(&self, x: &Point, y: &Point) -> Option<Vec<f64>> {
        match (self, x, y) {
            (MetricSpace::Euclidean { .. }, Point::Euclidean(a), Point::Euclidean(b)) => {
                Some(a.iter().zip(b).map(|(p, q)| q - p).collect())
            }
            (MetricSpace::Circle { radius }, Point::Circle(a), Point::Circle(b)) => {
                Some(vec![radius * wrapped_delta(*a, *b, TAU)])
            }
            (MetricSpace::Sphere2 { radius, .. }, Point::Sphere(a), Point::Sphere(b)) => {
                let th = sphere_angle(a, b);
                let c = dot3(a, b);
                let perp = [b[0] - c * a[0], b[1] - c * a[1], b[2] - c * a[2]];
                let dir = normalize3(perp).unwrap_or_else(|| orthogonal_unit(a));
                Some(dir.iter().map(|d| d * th * radius).collect())
            }
            (MetricSpace::FlatTorus { a: pa, b: pb }, Point::Torus(p), Point::Torus(q)) => Some(vec![
                wrapped_delta(p[0], q[0], *pa),
                wrapped_delta(p[1], q[1], *pb),
            ]),
            _ => None,
        }
    }

    /// Follows the geodesic from `x` with initial velocity `v` for unit time.
    pub fn exp_map(&self, x: &Point, v: &[f64]) -> Option<Point> {
        match (self, x) {
            (MetricSpace::Euclidean { .. }, Point::Euclidean(a)) => {
                Some(Point::Euclidean(a.iter().zip(v).map(|(p, d)| p + d).collect()))
            }
            (MetricSpace::Circle { radius }, Point::Circle(a)) => {
                Some(Point::Circle(canonical_angle(a + v[0] / radius, TAU)))
            }
            (MetricSpace::Sphere2 { radius, .. }, Point::Sphere(a)) => {
                // project onto the tangent plane first
                let c = a[0] * v[0] + a[1] * v[1] + a[2] * v[2];
                let t = [v[0] - c * a[0], v[1] - c * a[1], v[2] - c * a[2]];
                let n = norm3(&t);
                if n == 0.0 {
                    return Some(x.clone());
                }
                let th = n / radius;
                let w = [
                    th.cos() * a[0] + th.sin() * t[0] / n,
                    th.cos() * a[1] + th.sin() * t[1] / n,
                    th.cos() * a[2] + th.sin() * t[2] / n,
                ];
                normalize3(w).map(Point::Sphere)
            }
            (MetricSpace::FlatTorus { a: pa, b: pb }, Point::Torus(p)) => Some(Point::Torus([
                canonical_angle(p[0] + v[0], *pa),
                canonical_angle(p[1] + v[1], *pb),
            ])),
            _ => None,
        }
    }
}

fn check_length(what: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSpace(format!("{what} must be positive and finite, got {x}")))
    }
}

fn finite(x: f64, space: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidPoint {
            space: space.into(),
            reason: format!("non-finite coordinate {x}"),
        })
    }
}
