//! Weighted graphs viewed as metric graphs.
//!
//! Vertices are joined by edges of positive length; points may sit at a vertex
//! or in the interior of an edge. Vertex-to-vertex distances come from one
//! Dijkstra run per source.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Hard cap on the number of shortest paths enumerated between two points.
pub const MAX_SHORTEST_PATHS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// A location on a metric graph.
///
/// `offset` is measured from `u` of the referenced edge and is kept strictly
/// inside `(0, weight)`; boundary offsets canonicalize to the vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphPoint {
    Vertex(usize),
    OnEdge { edge: usize, offset: f64 },
}

#[derive(Debug, Clone)]
pub struct GraphMetric {
    labels: Vec<String>,
    edges: Vec<Edge>,
    incident: Vec<Vec<usize>>,
    dist: Vec<Vec<f64>>,
}

impl PartialEq for GraphMetric {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.edges == other.edges
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry {
    dist: f64,
    vertex: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One straight stretch of a graph geodesic, contained in a single edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leg {
    pub edge: usize,
    pub u: usize,
    pub v: usize,
    pub from: f64,
    pub to: f64,
    pub weight: f64,
}

impl Leg {
    pub fn length(&self) -> f64 {
        (self.to - self.from).abs()
    }
}

impl GraphMetric {
    pub fn new(labels: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidSpace("finite_graph needs at least one vertex".into()));
        }
        let mut incident = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidSpace(format!(
                    "edge {k} references vertex outside 0..{n}"
                )));
            }
            if e.u == e.v {
                return Err(Error::InvalidSpace(format!("edge {k} is a self-loop")));
            }
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return Err(Error::InvalidSpace(format!(
                    "edge {k} weight must be strictly positive, got {}",
                    e.weight
                )));
            }
            incident[e.u].push(k);
            incident[e.v].push(k);
        }
        let mut graph = GraphMetric {
            labels,
            edges,
            incident,
            dist: Vec::new(),
        };
        graph.dist = (0..n).map(|s| graph.dijkstra(s)).collect();
        if graph.dist.iter().flatten().any(|d| !d.is_finite()) {
            return Err(Error::InvalidSpace("finite_graph must be connected".into()));
        }
        Ok(graph)
    }

    fn dijkstra(&self, source: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.labels.len()];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(HeapEntry { dist: 0.0, vertex: source });
        while let Some(HeapEntry { dist: d, vertex }) = heap.pop() {
            if d > dist[vertex] {
                continue;
            }
            for &k in &self.incident[vertex] {
                let e = self.edges[k];
                let next = if e.u == vertex { e.v } else { e.u };
                let nd = d + e.weight;
                if nd < dist[next] {
                    dist[next] = nd;
                    heap.push(HeapEntry { dist: nd, vertex: next });
                }
            }
        }
        dist
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn vertex_distance(&self, a: usize, b: usize) -> f64 {
        self.dist[a][b]
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Builds a canonical point on `edge` at `offset` from its `u` end.
    pub fn edge_point(&self, edge: usize, offset: f64) -> Result<GraphPoint> {
        let e = self.edges.get(edge).ok_or_else(|| Error::InvalidPoint {
            space: "finite_graph".into(),
            reason: format!("edge {edge} does not exist"),
        })?;
        if !offset.is_finite() || offset < -1e-12 || offset > e.weight + 1e-12 {
            return Err(Error::InvalidPoint {
                space: "finite_graph".into(),
                reason: format!("offset {offset} outside [0, {}]", e.weight),
            });
        }
        Ok(canonical_on_edge(edge, e, offset))
    }

    pub fn validate(&self, p: &GraphPoint) -> Result<()> {
        match *p {
            GraphPoint::Vertex(v) if v < self.n_vertices() => Ok(()),
            GraphPoint::Vertex(v) => Err(Error::InvalidPoint {
                space: "finite_graph".into(),
                reason: format!("vertex {v} does not exist"),
            }),
            GraphPoint::OnEdge { edge, offset } => {
                let e = self.edges.get(edge).ok_or_else(|| Error::InvalidPoint {
                    space: "finite_graph".into(),
                    reason: format!("edge {edge} does not exist"),
                })?;
                if offset > 0.0 && offset < e.weight {
                    Ok(())
                } else {
                    Err(Error::InvalidPoint {
                        space: "finite_graph".into(),
                        reason: format!("edge offset {offset} not strictly inside (0, {})", e.weight),
                    })
                }
            }
        }
    }

    /// Ways out of a point towards the vertex set: `(vertex, cost, leg)`.
    fn exits(&self, p: &GraphPoint) -> Vec<(usize, f64, Option<Leg>)> {
        match *p {
            GraphPoint::Vertex(v) => vec![(v, 0.0, None)],
            GraphPoint::OnEdge { edge, offset } => {
                let e = self.edges[edge];
                vec![
                    (
                        e.u,
                        offset,
                        Some(Leg { edge, u: e.u, v: e.v, from: offset, to: 0.0, weight: e.weight }),
                    ),
                    (
                        e.v,
                        e.weight - offset,
                        Some(Leg { edge, u: e.u, v: e.v, from: offset, to: e.weight, weight: e.weight }),
                    ),
                ]
            }
        }
    }

    pub fn distance(&self, x: &GraphPoint, y: &GraphPoint) -> f64 {
        let mut best = direct_same_edge(x, y).unwrap_or(f64::INFINITY);
        for (a, ca, _) in self.exits(x) {
            for (b, cb, _) in self.exits(y) {
                best = best.min(ca + self.dist[a][b] + cb);
            }
        }
        best
    }

    /// All shortest vertex sequences from `a` to `b`, capped at `cap`.
    fn vertex_paths(&self, a: usize, b: usize, cap: usize) -> Vec<Vec<usize>> {
        let tol = 1e-9 * self.dist[a][b].max(1.0);
        let mut out = Vec::new();
        let mut stack = vec![(a, Vec::<usize>::new())];
        while let Some((c, edges)) = stack.pop() {
            if out.len() >= cap {
                break;
            }
            if c == b {
                out.push(edges);
                continue;
            }
            // reversed so the lowest edge index is explored first
            for &k in self.incident[c].iter().rev() {
                let e = self.edges[k];
                let n = if e.u == c { e.v } else { e.u };
                if (self.dist[c][b] - e.weight - self.dist[n][b]).abs() <= tol {
                    let mut next = edges.clone();
                    next.push(k);
                    stack.push((n, next));
                }
            }
        }
        out
    }

    /// Every shortest path between two points as a list of legs, capped at
    /// [`MAX_SHORTEST_PATHS`].
    pub fn shortest_paths(&self, x: &GraphPoint, y: &GraphPoint) -> (f64, Vec<Vec<Leg>>) {
        let length = self.distance(x, y);
        let tol = 1e-9 * length.max(1.0);
        let mut routes: Vec<Vec<Leg>> = Vec::new();
        if let (GraphPoint::OnEdge { edge, offset: s }, GraphPoint::OnEdge { edge: e2, offset: t }) = (x, y) {
            if edge == e2 && (s - t).abs() <= length + tol {
                let e = self.edges[*edge];
                routes.push(vec![Leg { edge: *edge, u: e.u, v: e.v, from: *s, to: *t, weight: e.weight }]);
            }
        }
        for (a, ca, leg_x) in self.exits(x) {
            for (b, cb, leg_y) in self.exits(y) {
                if ca + self.dist[a][b] + cb > length + tol {
                    continue;
                }
                for path in self.vertex_paths(a, b, MAX_SHORTEST_PATHS) {
                    let mut legs = Vec::new();
                    if let Some(l) = leg_x {
                        legs.push(l);
                    }
                    let mut at = a;
                    for k in path {
                        let e = self.edges[k];
                        let (from, to, next) = if e.u == at {
                            (0.0, e.weight, e.v)
                        } else {
                            (e.weight, 0.0, e.u)
                        };
                        legs.push(Leg { edge: k, u: e.u, v: e.v, from, to, weight: e.weight });
                        at = next;
                    }
                    if let Some(l) = leg_y {
                        legs.push(Leg { from: l.to, to: l.from, ..l });
                    }
                    if !routes.contains(&legs) {
                        routes.push(legs);
                    }
                    if routes.len() >= MAX_SHORTEST_PATHS {
                        return (length, routes);
                    }
                }
            }
        }
        (length, routes)
    }

    /// Diameter of the metric graph, edge interiors included.
    pub fn diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for (i, e1) in self.edges.iter().enumerate() {
            best = best.max(0.5 * (e1.weight + self.dist[e1.u][e1.v]));
            for e2 in &self.edges[i + 1..] {
                best = best.max(self.edge_pair_diameter(e1, e2));
            }
        }
        best
    }

    // max over P in e1, Q in e2 of d(P, Q); concave piecewise linear in Q's offset
    fn edge_pair_diameter(&self, e1: &Edge, e2: &Edge) -> f64 {
        let d = &self.dist;
        let w2 = e2.weight;
        let a_of = |t: f64| (d[e1.u][e2.u] + t).min(d[e1.u][e2.v] + w2 - t);
        let b_of = |t: f64| (d[e1.v][e2.u] + t).min(d[e1.v][e2.v] + w2 - t);
        let ta = 0.5 * (d[e1.u][e2.v] + w2 - d[e1.u][e2.u]);
        let tb = 0.5 * (d[e1.v][e2.v] + w2 - d[e1.v][e2.u]);
        [0.0, w2, ta.clamp(0.0, w2), tb.clamp(0.0, w2)]
            .into_iter()
            .map(|t| 0.5 * (e1.weight + a_of(t) + b_of(t)))
            .fold(0.0, f64::max)
    }

    /// Vertex nearest to `v` other than itself.
    pub fn nearest_other_vertex(&self, v: usize) -> Option<(usize, f64)> {
        (0..self.n_vertices())
            .filter(|&u| u != v)
            .map(|u| (u, self.dist[v][u]))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
    }
}

pub(crate) fn canonical_on_edge(edge: usize, e: &Edge, offset: f64) -> GraphPoint {
    if offset <= 0.0 {
        GraphPoint::Vertex(e.u)
    } else if offset >= e.weight {
        GraphPoint::Vertex(e.v)
    } else {
        GraphPoint::OnEdge { edge, offset }
    }
}

fn direct_same_edge(x: &GraphPoint, y: &GraphPoint) -> Option<f64> {
    match (x, y) {
        (GraphPoint::OnEdge { edge: e1, offset: s }, GraphPoint::OnEdge { edge: e2, offset: t }) if e1 == e2 => {
            Some((s - t).abs())
        }
        _ => None,
    }
}
