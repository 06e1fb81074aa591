//! Minimizer searches behind [`super::project`].
//!
//! One-dimensional spaces (the line, the circle, graph edges) are split at
//! breakpoints where every distance term is affine, so the objective is
//! convex on each piece and a derivative bisection finds the exact piece
//! minimum. Surfaces use multistart from a grid followed by descent.

use std::f64::consts::{PI, TAU};

use super::{BarycenterConfig, Candidate, Certificate};
use crate::spaces::{canonical_angle, wrapped_delta, GraphMetric, GraphPoint, MetricSpace, Point};
use crate::transport::{cost_pow, dirac_cost_pow};

type Atoms = [(Point, f64)];

fn objective(s: &MetricSpace, x: &Point, atoms: &Atoms, p: f64) -> f64 {
    dirac_cost_pow(s, x, atoms, p)
}

fn stationary(slope: f64, cfg: &BarycenterConfig) -> Certificate {
    if slope <= cfg.stationarity_tol {
        Certificate::Stationary { slope }
    } else {
        Certificate::Uncertified { slope }
    }
}

/// `d/dd (w d^p)` for a distance term.
fn term_slope(w: f64, d: f64, p: f64) -> f64 {
    if p == 1.0 {
        w
    } else {
        w * p * cost_pow(d, p - 1.0)
    }
}

pub(super) fn weighted_mean(s: &MetricSpace, atoms: &Atoms) -> Candidate {
    let dim = atoms[0].0.coords().len();
    let mut m = vec![0.0; dim];
    for (x, w) in atoms {
        for (mi, xi) in m.iter_mut().zip(x.coords()) {
            *mi += w * xi;
        }
    }
    let point = Point::Euclidean(m);
    Candidate {
        fval: objective(s, &point, atoms, 2.0),
        point,
        certificate: Certificate::ClosedForm,
        local: true,
    }
}

fn sorted_line(atoms: &Atoms) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = atoms.iter().map(|(x, w)| (x.coords()[0], *w)).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v
}

/// Exact weighted median on the line. When some prefix carries exactly half
/// the mass, the whole gap to the next atom is optimal and the flag is set.
pub(super) fn weighted_median(s: &MetricSpace, atoms: &Atoms) -> (Vec<Candidate>, bool) {
    let line = sorted_line(atoms);
    let make = |v: f64, certificate| {
        let point = Point::Euclidean(vec![v]);
        Candidate {
            fval: objective(s, &point, atoms, 1.0),
            point,
            certificate,
            local: true,
        }
    };
    let mut cum = 0.0;
    for k in 0..line.len() {
        cum += line[k].1;
        if (cum - 0.5).abs() <= 1e-12 && k + 1 < line.len() {
            let (a, b) = (line[k].0, line[k + 1].0);
            let c = vec![
                make(a, Certificate::Atom),
                make(0.5 * (a + b), Certificate::Stationary { slope: 0.0 }),
                make(b, Certificate::Atom),
            ];
            return (c, true);
        }
        if cum > 0.5 {
            return (vec![make(line[k].0, Certificate::Atom)], false);
        }
    }
    (vec![make(line[line.len() - 1].0, Certificate::Atom)], false)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Side {
    Lo,
    Hi,
    Interior,
}

#[derive(Debug, Clone, Copy)]
struct PieceMin {
    s: f64,
    side: Side,
    slope: f64,
}

/// Minimum of a convex function on `[lo, hi]` given its derivative on the
/// open interval.
fn piece_min(df: impl Fn(f64) -> f64, lo: f64, hi: f64) -> PieceMin {
    let delta = (hi - lo) * 1e-10;
    let (a, b) = (lo + delta, hi - delta);
    if !(hi - lo > 0.0) || df(a) >= 0.0 {
        return PieceMin { s: lo, side: Side::Lo, slope: 0.0 };
    }
    if df(b) <= 0.0 {
        return PieceMin { s: hi, side: Side::Hi, slope: 0.0 };
    }
    let (mut l, mut h) = (a, b);
    for _ in 0..200 {
        let m = 0.5 * (l + h);
        if m <= l || m >= h {
            break;
        }
        if df(m) < 0.0 {
            l = m;
        } else {
            h = m;
        }
    }
    let s = 0.5 * (l + h);
    PieceMin {
        s,
        side: Side::Interior,
        slope: df(s).abs(),
    }
}

/// Local-minimum status of each piece result along a chain of pieces. A
/// piece end is a local minimizer when the neighbouring piece also pushes
/// towards it; `open_ends` says whether the outer ends of a linear chain are
/// walls the objective grows away from.
fn chain_locality(pieces: &[PieceMin], circular: bool, open_ends: bool) -> Vec<bool> {
    let n = pieces.len();
    (0..n)
        .map(|k| match pieces[k].side {
            Side::Interior => true,
            Side::Lo => {
                if k > 0 {
                    pieces[k - 1].side == Side::Hi
                } else if circular {
                    pieces[n - 1].side == Side::Hi
                } else {
                    open_ends
                }
            }
            Side::Hi => {
                if k + 1 < n {
                    pieces[k + 1].side == Side::Lo
                } else if circular {
                    pieces[0].side == Side::Lo
                } else {
                    open_ends
                }
            }
        })
        .collect()
}

fn piece_certificate(piece: &PieceMin, cfg: &BarycenterConfig) -> Certificate {
    match piece.side {
        Side::Interior => stationary(piece.slope, cfg),
        _ => Certificate::Boundary,
    }
}

fn breakpoints(mut b: Vec<f64>) -> Vec<f64> {
    b.sort_by(f64::total_cmp);
    b.dedup_by(|a, c| (*a - *c).abs() <= 1e-15);
    b
}

pub(super) fn line_segments(s: &MetricSpace, atoms: &Atoms, p: f64, cfg: &BarycenterConfig) -> Vec<Candidate> {
    let line = sorted_line(atoms);
    let cuts = breakpoints(line.iter().map(|a| a.0).collect());
    let df = |x: f64| -> f64 {
        line.iter()
            .map(|&(c, w)| term_slope(w, (x - c).abs(), p) * (x - c).signum())
            .sum()
    };
    let pieces: Vec<PieceMin> = cuts.windows(2).map(|c| piece_min(df, c[0], c[1])).collect();
    let local = chain_locality(&pieces, false, true);
    pieces
        .iter()
        .zip(local)
        .map(|(pc, local)| {
            let point = Point::Euclidean(vec![pc.s]);
            Candidate {
                fval: objective(s, &point, atoms, p),
                point,
                certificate: piece_certificate(pc, cfg),
                local,
            }
        })
        .collect()
}

pub(super) fn circle_segments(s: &MetricSpace, atoms: &Atoms, p: f64, cfg: &BarycenterConfig) -> Vec<Candidate> {
    let MetricSpace::Circle { radius } = *s else {
        unreachable!("circle search on a non-circle space")
    };
    let angles: Vec<(f64, f64)> = atoms.iter().map(|(x, w)| (x.coords()[0], *w)).collect();
    let cuts = breakpoints(
        angles
            .iter()
            .flat_map(|&(a, _)| [a, canonical_angle(a + PI, TAU)])
            .collect(),
    );
    let df = |th: f64| -> f64 {
        angles
            .iter()
            .map(|&(a, w)| {
                let delta = wrapped_delta(a, th, TAU);
                term_slope(w, radius * delta.abs(), p) * radius * delta.signum()
            })
            .sum()
    };
    let n = cuts.len();
    let pieces: Vec<PieceMin> = (0..n)
        .map(|k| {
            let hi = if k + 1 < n { cuts[k + 1] } else { cuts[0] + TAU };
            piece_min(df, cuts[k], hi)
        })
        .collect();
    let local = chain_locality(&pieces, true, false);
    pieces
        .iter()
        .zip(local)
        .map(|(pc, local)| {
            let point = Point::Circle(canonical_angle(pc.s, TAU));
            Candidate {
                fval: objective(s, &point, atoms, p),
                point,
                certificate: piece_certificate(pc, cfg),
                local,
            }
        })
        .collect()
}

/// Distance terms seen from a position `t` along edge `k`.
struct EdgeTerm {
    w: f64,
    via_u: f64,
    via_v: f64,
    on_edge: Option<f64>,
}

impl EdgeTerm {
    /// Distance and its derivative in `t`.
    fn eval(&self, t: f64, len: f64) -> (f64, f64) {
        let mut best = (t + self.via_u, 1.0);
        let back = len - t + self.via_v;
        if back < best.0 {
            best = (back, -1.0);
        }
        if let Some(o) = self.on_edge {
            let direct = (t - o).abs();
            if direct < best.0 {
                best = (direct, (t - o).signum());
            }
        }
        best
    }
}

pub(super) fn graph_edges(
    s: &MetricSpace,
    g: &GraphMetric,
    atoms: &Atoms,
    p: f64,
    cfg: &BarycenterConfig,
) -> Vec<Candidate> {
    let mut out = Vec::new();
    // a vertex is a local minimizer when no incident edge leads downhill
    let mut vertex_ok = vec![true; g.n_vertices()];
    for (k, e) in g.edges().iter().enumerate() {
        let terms: Vec<EdgeTerm> = atoms
            .iter()
            .map(|(y, w)| {
                let Point::Graph(gy) = y else {
                    unreachable!("graph measure holds graph points")
                };
                EdgeTerm {
                    w: *w,
                    via_u: g.distance(&GraphPoint::Vertex(e.u), gy),
                    via_v: g.distance(&GraphPoint::Vertex(e.v), gy),
                    on_edge: match *gy {
                        GraphPoint::OnEdge { edge, offset } if edge == k => Some(offset),
                        _ => None,
                    },
                }
            })
            .collect();
        let mut cuts = vec![0.0, e.weight];
        for t in &terms {
            let cross = 0.5 * (e.weight + t.via_v - t.via_u);
            if cross > 0.0 && cross < e.weight {
                cuts.push(cross);
            }
            if let Some(o) = t.on_edge {
                cuts.push(o);
            }
        }
        let cuts = breakpoints(cuts);
        let df = |t: f64| -> f64 {
            terms
                .iter()
                .map(|term| {
                    let (d, slope) = term.eval(t, e.weight);
                    term_slope(term.w, d, p) * slope
                })
                .sum()
        };
        let pieces: Vec<PieceMin> = cuts.windows(2).map(|c| piece_min(df, c[0], c[1])).collect();
        vertex_ok[e.u] &= pieces[0].side == Side::Lo;
        vertex_ok[e.v] &= pieces[pieces.len() - 1].side == Side::Hi;
        let local = chain_locality(&pieces, false, false);
        for (pc, local) in pieces.iter().zip(local) {
            let at_vertex = (pc.side == Side::Lo && pc.s == 0.0) || (pc.side == Side::Hi && pc.s == e.weight);
            if at_vertex {
                continue;
            }
            let gp = g.edge_point(k, pc.s).expect("piece minimum lies on the edge");
            let point = Point::Graph(gp);
            out.push(Candidate {
                fval: objective(s, &point, atoms, p),
                point,
                certificate: piece_certificate(pc, cfg),
                local,
            });
        }
    }
    for (v, ok) in vertex_ok.into_iter().enumerate() {
        let point = Point::Graph(GraphPoint::Vertex(v));
        out.push(Candidate {
            fval: objective(s, &point, atoms, p),
            point,
            certificate: Certificate::Boundary,
            local: ok,
        });
    }
    out
}

// ---- Euclidean multistart ---------------------------------------------------

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Objective, gradient and Hessian of `sum_i w_i |a - x_i|^p`.
fn euclid_derivs(a: &[f64], atoms: &[(Vec<f64>, f64)], p: f64) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut f = 0.0;
    let mut g = vec![0.0; n];
    let mut h = vec![vec![0.0; n]; n];
    for (x, w) in atoms {
        let r: Vec<f64> = a.iter().zip(x).map(|(ai, xi)| ai - xi).collect();
        let d = norm(&r);
        if d == 0.0 {
            continue;
        }
        f += w * cost_pow(d, p);
        let coef = w * p * d.powf(p - 2.0);
        for i in 0..n {
            g[i] += coef * r[i];
            for j in 0..n {
                let id = if i == j { 1.0 } else { 0.0 };
                h[i][j] += coef * (id + (p - 2.0) * r[i] * r[j] / (d * d));
            }
        }
    }
    (f, g, h)
}

fn euclid_value(a: &[f64], atoms: &[(Vec<f64>, f64)], p: f64) -> f64 {
    atoms
        .iter()
        .map(|(x, w)| {
            let d = a.iter().zip(x).map(|(ai, xi)| (ai - xi) * (ai - xi)).sum::<f64>().sqrt();
            w * cost_pow(d, p)
        })
        .sum()
}

/// Solves `m x = b` by Gaussian elimination with partial pivoting.
fn solve_linear(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[piv][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, piv);
        b.swap(c, piv);
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| m[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / m[r][r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Damped Newton descent; returns the final point and gradient norm.
fn newton(start: Vec<f64>, atoms: &[(Vec<f64>, f64)], p: f64, max_iter: usize) -> (Vec<f64>, f64) {
    let n = start.len();
    let mut a = start;
    for _ in 0..max_iter {
        let (f, g, mut h) = euclid_derivs(&a, atoms, p);
        let gn = norm(&g);
        if gn <= 1e-15 * (1.0 + f) {
            break;
        }
        let trace: f64 = (0..n).map(|i| h[i][i]).sum();
        for (i, row) in h.iter_mut().enumerate() {
            row[i] += 1e-12 * (trace / n as f64) + 1e-300;
        }
        let neg_g: Vec<f64> = g.iter().map(|x| -x).collect();
        let mut dir = solve_linear(h, neg_g.clone()).unwrap_or_else(|| neg_g.clone());
        let mut slope: f64 = dir.iter().zip(&g).map(|(d, gi)| d * gi).sum();
        if !(slope < 0.0) {
            dir = neg_g;
            slope = -gn * gn;
        }
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..80 {
            let trial: Vec<f64> = a.iter().zip(&dir).map(|(ai, di)| ai + t * di).collect();
            // near the optimum the value stalls at rounding level; a full
            // step that halves the gradient is still progress
            let accept = euclid_value(&trial, atoms, p) <= f + 1e-4 * t * slope
                || (t == 1.0 && norm(&euclid_derivs(&trial, atoms, p).1) <= 0.5 * gn);
            if accept {
                moved = trial != a;
                a = trial;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    let (_, g, _) = euclid_derivs(&a, atoms, p);
    let gn = norm(&g);
    (a, gn)
}

/// Indices of grid cells no larger than any axis neighbour. `wrap[k]` makes
/// axis `k` periodic.
fn grid_local_minima(values: &[f64], g: usize, dims: usize, wrap: &[bool]) -> Vec<usize> {
    let mut out = Vec::new();
    for idx in 0..values.len() {
        let mut coords = vec![0; dims];
        let mut r = idx;
        for c in coords.iter_mut() {
            *c = r % g;
            r /= g;
        }
        let mut is_min = true;
        'axes: for k in 0..dims {
            for step in [-1i64, 1] {
                let c = coords[k] as i64 + step;
                let c = if c < 0 || c >= g as i64 {
                    if wrap[k] {
                        c.rem_euclid(g as i64)
                    } else {
                        continue;
                    }
                } else {
                    c
                };
                let mut nb = coords.clone();
                nb[k] = c as usize;
                let nidx = nb.iter().rev().fold(0, |acc, &c| acc * g + c);
                if values[nidx] < values[idx] {
                    is_min = false;
                    break 'axes;
                }
            }
        }
        if is_min {
            out.push(idx);
        }
    }
    out
}

fn unflatten(idx: usize, g: usize, dims: usize) -> Vec<usize> {
    let mut r = idx;
    (0..dims)
        .map(|_| {
            let c = r % g;
            r /= g;
            c
        })
        .collect()
}

pub(super) fn euclidean_multistart(s: &MetricSpace, atoms: &Atoms, p: f64, cfg: &BarycenterConfig) -> Vec<Candidate> {
    let flat: Vec<(Vec<f64>, f64)> = atoms.iter().map(|(x, w)| (x.coords(), *w)).collect();
    let dim = flat[0].0.len();
    let mut starts: Vec<Vec<f64>> = Vec::new();
    let mut mean = vec![0.0; dim];
    for (x, w) in &flat {
        for (m, xi) in mean.iter_mut().zip(x) {
            *m += w * xi;
        }
    }
    starts.push(mean);
    if dim <= 2 {
        // the minimizers lie in the convex hull, hence in the bounding box
        let lo: Vec<f64> = (0..dim).map(|k| flat.iter().map(|a| a.0[k]).fold(f64::INFINITY, f64::min)).collect();
        let hi: Vec<f64> = (0..dim).map(|k| flat.iter().map(|a| a.0[k]).fold(f64::NEG_INFINITY, f64::max)).collect();
        let g = cfg.grid;
        let at = |cell: &[usize]| -> Vec<f64> {
            (0..dim)
                .map(|k| lo[k] + (hi[k] - lo[k]) * cell[k] as f64 / (g - 1) as f64)
                .collect()
        };
        let values: Vec<f64> = (0..g.pow(dim as u32))
            .map(|idx| euclid_value(&at(&unflatten(idx, g, dim)), &flat, p))
            .collect();
        for idx in grid_local_minima(&values, g, dim, &vec![false; dim]) {
            starts.push(at(&unflatten(idx, g, dim)));
        }
    }
    let mut out = Vec::new();
    for start in starts {
        let (a, slope) = newton(start, &flat, p, cfg.max_iter);
        let point = Point::Euclidean(a);
        let certificate = stationary(slope, cfg);
        out.push(Candidate {
            fval: objective(s, &point, atoms, p),
            local: matches!(certificate, Certificate::Stationary { .. }),
            point,
            certificate,
        });
    }
    for (k, (x, _)) in atoms.iter().enumerate() {
        let others: Vec<(Vec<f64>, f64)> = flat
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, a)| a.clone())
            .collect();
        let (_, g, _) = euclid_derivs(&flat[k].0, &others, p);
        out.push(atom_candidate(s, x, atoms, p, norm(&g), flat[k].1, cfg));
    }
    out
}

/// An atom is a local minimizer when the pull of the other atoms is
/// absorbed by its own subdifferential (its weight when `p = 1`).
fn atom_candidate(
    s: &MetricSpace,
    x: &Point,
    atoms: &Atoms,
    p: f64,
    pull: f64,
    weight: f64,
    cfg: &BarycenterConfig,
) -> Candidate {
    let allowance = if p == 1.0 { weight } else { 0.0 };
    let excess = (pull - allowance).max(0.0);
    let local = excess <= cfg.stationarity_tol;
    Candidate {
        fval: objective(s, x, atoms, p),
        point: x.clone(),
        certificate: if local {
            Certificate::Atom
        } else {
            Certificate::Uncertified { slope: excess }
        },
        local,
    }
}

// ---- sphere and torus -------------------------------------------------------

fn riemannian_grad(s: &MetricSpace, x: &Point, atoms: &Atoms, p: f64, unit: bool) -> Vec<f64> {
    let dim = if matches!(s, MetricSpace::Sphere2 { .. }) { 3 } else { 2 };
    let mut g = vec![0.0; dim];
    for (y, w) in atoms {
        let d = s.dist(x, y);
        if d <= 1e-15 {
            continue;
        }
        let v = s.log_map(x, y).expect("smooth space");
        let coef = if unit { -w / d } else { -w * p * d.powf(p - 2.0) };
        for (gi, vi) in g.iter_mut().zip(&v) {
            *gi += coef * vi;
        }
    }
    g
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Riemannian gradient descent with Barzilai-Borwein steps and Armijo
/// backtracking. Returns the final point and gradient norm.
fn descend(s: &MetricSpace, start: Point, atoms: &Atoms, p: f64, max_iter: usize) -> (Point, f64) {
    let max_step = match *s {
        MetricSpace::Sphere2 { radius, .. } => 0.5 * PI * radius,
        MetricSpace::FlatTorus { a, b } => 0.25 * a.min(b),
        _ => f64::INFINITY,
    };
    let mut x = start;
    let mut f = objective(s, &x, atoms, p);
    let mut g = riemannian_grad(s, &x, atoms, p, false);
    let mut alpha: f64 = 0.25;
    for _ in 0..max_iter {
        let gn = norm(&g);
        if gn <= 1e-14 * (1.0 + f) {
            break;
        }
        alpha = alpha.min(max_step / gn);
        let mut accepted = None;
        for _ in 0..60 {
            let step: Vec<f64> = g.iter().map(|gi| -alpha * gi).collect();
            let trial = s.exp_map(&x, &step).expect("smooth space");
            let ft = objective(s, &trial, atoms, p);
            if ft <= f - 1e-4 * alpha * gn * gn {
                accepted = Some((trial, ft, step));
                break;
            }
            alpha *= 0.5;
        }
        let Some((xn, fnew, step)) = accepted else {
            break;
        };
        let gnew = riemannian_grad(s, &xn, atoms, p, false);
        let y: Vec<f64> = gnew.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&step, &y);
        alpha = if sy > 0.0 { dot(&step, &step) / sy } else { 2.0 * alpha };
        x = xn;
        f = fnew;
        g = gnew;
    }
    let gn = norm(&riemannian_grad(s, &x, atoms, p, false));
    (x, gn)
}

pub(super) fn manifold_multistart(s: &MetricSpace, atoms: &Atoms, p: f64, cfg: &BarycenterConfig) -> Vec<Candidate> {
    let g = cfg.grid;
    let (grid, wrap): (Vec<Point>, [bool; 2]) = match *s {
        MetricSpace::Sphere2 { .. } => {
            let pts = (0..g * g)
                .map(|idx| {
                    let (i, j) = (idx % g, idx / g);
                    let th = PI * (i as f64 + 0.5) / g as f64;
                    let ph = TAU * j as f64 / g as f64;
                    Point::Sphere([th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()])
                })
                .collect();
            (pts, [false, true])
        }
        MetricSpace::FlatTorus { a, b } => {
            let pts = (0..g * g)
                .map(|idx| {
                    let (i, j) = (idx % g, idx / g);
                    Point::Torus([a * i as f64 / g as f64, b * j as f64 / g as f64])
                })
                .collect();
            (pts, [true, true])
        }
        _ => unreachable!("manifold search on a non-surface space"),
    };
    let values: Vec<f64> = grid.iter().map(|x| objective(s, x, atoms, p)).collect();
    let mut out = Vec::new();
    for idx in grid_local_minima(&values, g, 2, &wrap) {
        let (x, slope) = descend(s, grid[idx].clone(), atoms, p, cfg.max_iter);
        let certificate = stationary(slope, cfg);
        out.push(Candidate {
            fval: objective(s, &x, atoms, p),
            local: matches!(certificate, Certificate::Stationary { .. }),
            point: x,
            certificate,
        });
    }
    for (k, (x, w)) in atoms.iter().enumerate() {
        let others: Vec<(Point, f64)> = atoms
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, a)| a.clone())
            .collect();
        let pull = norm(&riemannian_grad(s, x, &others, p, p == 1.0));
        out.push(atom_candidate(s, x, atoms, p, pull, *w, cfg));
    }
    out
}
