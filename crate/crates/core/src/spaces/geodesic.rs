use std::f64::consts::{PI, TAU};

use super::graph::{canonical_on_edge, Edge, Leg};
use super::{
    canonical_angle, cross3, dot3, normalize3, orthogonal_unit, sphere_angle, wrapped_delta,
    MetricSpace, Point, ANTIPODAL_TOL, POINT_EPS,
};
use crate::error::{Error, Result};

/// How a geodesic is traced through its space.
#[derive(Debug, Clone, PartialEq)]
pub enum PathShape {
    Segment { from: Vec<f64>, delta: Vec<f64> },
    /// `sweep` is a signed angle; positive is counterclockwise.
    Arc { from: f64, sweep: f64 },
    GreatCircle { from: [f64; 3], dir: [f64; 3], angle: f64 },
    /// Straight line in the universal cover, `delta` is the chosen lift.
    TorusLine { from: [f64; 2], delta: [f64; 2], periods: [f64; 2] },
    GraphWalk { legs: Vec<Leg> },
}

/// A constant-speed minimizing geodesic `t in [0, 1] -> X`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPath {
    start: Point,
    end: Point,
    length: f64,
    branch_id: usize,
    shape: PathShape,
}

impl GeodesicPath {
    pub fn start(&self) -> &Point {
        &self.start
    }

    pub fn end(&self) -> &Point {
        &self.end
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn branch_id(&self) -> usize {
        self.branch_id
    }

    pub fn shape(&self) -> &PathShape {
        &self.shape
    }

    /// Point at parameter `t`, clamped to `[0, 1]`.
    pub fn at(&self, t: f64) -> Point {
        if t <= 0.0 {
            return self.start.clone();
        }
        if t >= 1.0 {
            return self.end.clone();
        }
        match &self.shape {
            PathShape::Segment { from, delta } => {
                Point::Euclidean(from.iter().zip(delta).map(|(a, d)| a + t * d).collect())
            }
            PathShape::Arc { from, sweep } => Point::Circle(canonical_angle(from + t * sweep, TAU)),
            PathShape::GreatCircle { from, dir, angle } => {
                let (s, c) = (t * angle).sin_cos();
                let v = [
                    c * from[0] + s * dir[0],
                    c * from[1] + s * dir[1],
                    c * from[2] + s * dir[2],
                ];
                Point::Sphere(normalize3(v).expect("unit combination"))
            }
            PathShape::TorusLine { from, delta, periods } => Point::Torus([
                canonical_angle(from[0] + t * delta[0], periods[0]),
                canonical_angle(from[1] + t * delta[1], periods[1]),
            ]),
            PathShape::GraphWalk { legs } => {
                let mut remaining = t * self.length;
                for (i, leg) in legs.iter().enumerate() {
                    let len = leg.length();
                    if remaining <= len || i + 1 == legs.len() {
                        let r = remaining.min(len);
                        let offset = if leg.to >= leg.from { leg.from + r } else { leg.from - r };
                        let e = Edge { u: leg.u, v: leg.v, weight: leg.weight };
                        return Point::Graph(canonical_on_edge(leg.edge, &e, offset));
                    }
                    remaining -= len;
                }
                self.end.clone()
            }
        }
    }
}

fn path(start: &Point, end: &Point, length: f64, branch_id: usize, shape: PathShape) -> GeodesicPath {
    GeodesicPath {
        start: start.clone(),
        end: end.clone(),
        length,
        branch_id,
        shape,
    }
}

// lifts of the displacement a -> b on a circle of the given period that are minimizing
fn minimizing_lifts(a: f64, b: f64, period: f64) -> Vec<f64> {
    let delta = wrapped_delta(a, b, period);
    if delta.abs() >= (1.0 - ANTIPODAL_TOL) * 0.5 * period {
        let ccw = (b - a).rem_euclid(period);
        vec![ccw, ccw - period]
    } else {
        vec![delta]
    }
}

impl MetricSpace {
    /// Every minimizing geodesic from `x` to `y`, up to this space's
    /// enumeration rule.
    ///
    /// Antipodal circle points have two arcs, flat tori up to four lifts,
    /// sphere antipodes `n_branches` equally spaced meridians, and graphs every
    /// shortest path up to a cap of 64.
    pub fn minimizing_geodesics(&self, x: &Point, y: &Point) -> Result<Vec<GeodesicPath>> {
        self.validate(x)?;
        self.validate(y)?;
        let d = self.dist(x, y);
        if d <= POINT_EPS {
            return Err(Error::CoincidentEndpoints);
        }
        let paths = match (self, x, y) {
            (MetricSpace::Euclidean { .. }, Point::Euclidean(a), Point::Euclidean(b)) => {
                let delta = a.iter().zip(b).map(|(p, q)| q - p).collect();
                vec![path(x, y, d, 0, PathShape::Segment { from: a.clone(), delta })]
            }
            (MetricSpace::Circle { radius }, Point::Circle(a), Point::Circle(b)) => minimizing_lifts(*a, *b, TAU)
                .into_iter()
                .enumerate()
                .map(|(k, sweep)| path(x, y, radius * sweep.abs(), k, PathShape::Arc { from: *a, sweep }))
                .collect(),
            (MetricSpace::Sphere2 { radius, n_branches }, Point::Sphere(a), Point::Sphere(b)) => {
                let angle = sphere_angle(a, b);
                if angle >= (1.0 - ANTIPODAL_TOL) * PI {
                    let e1 = orthogonal_unit(a);
                    let e2 = cross3(a, &e1);
                    (0..*n_branches)
                        .map(|k| {
                            let (s, c) = (TAU * k as f64 / *n_branches as f64).sin_cos();
                            let dir = [
                                c * e1[0] + s * e2[0],
                                c * e1[1] + s * e2[1],
                                c * e1[2] + s * e2[2],
                            ];
                            path(x, y, radius * angle, k, PathShape::GreatCircle { from: *a, dir, angle })
                        })
                        .collect()
                } else {
                    let c = dot3(a, b);
                    let dir = normalize3([b[0] - c * a[0], b[1] - c * a[1], b[2] - c * a[2]])
                        .unwrap_or_else(|| orthogonal_unit(a));
                    vec![path(x, y, d, 0, PathShape::GreatCircle { from: *a, dir, angle })]
                }
            }
            (MetricSpace::FlatTorus { a: pa, b: pb }, Point::Torus(p), Point::Torus(q)) => {
                let us = minimizing_lifts(p[0], q[0], *pa);
                let vs = minimizing_lifts(p[1], q[1], *pb);
                let mut out = Vec::new();
                for du in &us {
                    for dv in &vs {
                        let k = out.len();
                        out.push(path(
                            x,
                            y,
                            du.hypot(*dv),
                            k,
                            PathShape::TorusLine { from: *p, delta: [*du, *dv], periods: [*pa, *pb] },
                        ));
                    }
                }
                out
            }
            (MetricSpace::FiniteGraph(g), Point::Graph(p), Point::Graph(q)) => {
                let (length, routes) = g.shortest_paths(p, q);
                routes
                    .into_iter()
                    .enumerate()
                    .map(|(k, legs)| path(x, y, length, k, PathShape::GraphWalk { legs }))
                    .collect()
            }
            _ => unreachable!("validated above"),
        };
        Ok(paths)
    }

    /// Midpoint of `x` and `y` along the geodesic branch `branch`.
    pub fn midpoint(&self, x: &Point, y: &Point, branch: usize) -> Result<Point> {
        self.validate(x)?;
        self.validate(y)?;
        if self.dist(x, y) <= POINT_EPS {
            return if branch == 0 {
                Ok(x.clone())
            } else {
                Err(Error::InvalidBranch { branch, available: 1 })
            };
        }
        let paths = self.minimizing_geodesics(x, y)?;
        paths
            .get(branch)
            .map(|g| g.at(0.5))
            .ok_or(Error::InvalidBranch { branch, available: paths.len() })
    }

    /// All midpoints of `x` and `y`, one per enumerated geodesic branch.
    pub fn midpoints(&self, x: &Point, y: &Point) -> Result<Vec<Point>> {
        if self.distance(x, y)? <= POINT_EPS {
            return Ok(vec![x.clone()]);
        }
        Ok(self
            .minimizing_geodesics(x, y)?
            .iter()
            .map(|g| g.at(0.5))
            .collect())
    }
}
