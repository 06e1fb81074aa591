//! Transportation simplex on a dense cost matrix.
//!
//! The basis is a spanning tree of the bipartite row/column graph with
//! `m + n - 1` cells, started from the northwest corner. Pivots use the most
//! negative reduced cost and switch to Bland's rule after a run of degenerate
//! steps, which rules out cycling.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Relative size of the complementary-slackness residual accepted as optimal.
pub const CERTIFICATE_TOL: f64 = 1e-10;

const ENTER_TOL: f64 = 1e-13;
const DEGENERATE_RUN: usize = 50;

pub(crate) struct Solution {
    pub flow: Vec<Vec<f64>>,
    pub cost: f64,
}

struct Tree {
    m: usize,
    n: usize,
    basis: Vec<(usize, usize)>,
    flow: Vec<Vec<f64>>,
}

impl Tree {
    fn northwest(a: &[f64], b: &[f64]) -> Self {
        let (m, n) = (a.len(), b.len());
        let mut ra = a.to_vec();
        let mut rb = b.to_vec();
        let mut flow = vec![vec![0.0; n]; m];
        let mut basis = Vec::with_capacity(m + n - 1);
        let (mut i, mut j) = (0, 0);
        loop {
            let x = ra[i].min(rb[j]).max(0.0);
            flow[i][j] = x;
            basis.push((i, j));
            ra[i] -= x;
            rb[j] -= x;
            if i == m - 1 && j == n - 1 {
                break;
            }
            if (ra[i] <= rb[j] && i < m - 1) || j == n - 1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Tree { m, n, basis, flow }
    }

    /// Adjacency over nodes `0..m` (rows) and `m..m+n` (columns); each entry
    /// stores the neighbour and the basis index of the connecting cell.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.m + self.n];
        for (k, &(i, j)) in self.basis.iter().enumerate() {
            adj[i].push((self.m + j, k));
            adj[self.m + j].push((i, k));
        }
        adj
    }

    fn potentials(&self, cost: &[Vec<f64>], adj: &[Vec<(usize, usize)>]) -> (Vec<f64>, Vec<f64>) {
        let m = self.m;
        let mut pot = vec![f64::NAN; m + self.n];
        pot[0] = 0.0;
        let mut queue = VecDeque::from([0]);
        while let Some(node) = queue.pop_front() {
            for &(next, k) in &adj[node] {
                if pot[next].is_nan() {
                    let (i, j) = self.basis[k];
                    // c_ij = u_i + v_j
                    pot[next] = cost[i][j] - pot[node];
                    queue.push_back(next);
                }
            }
        }
        (pot[..m].to_vec(), pot[m..].to_vec())
    }

    /// Basis cells on the tree path from row `i` to column `j`, in order.
    fn path(&self, adj: &[Vec<(usize, usize)>], i: usize, j: usize) -> Vec<usize> {
        let target = self.m + j;
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.m + self.n];
        let mut seen = vec![false; self.m + self.n];
        seen[i] = true;
        let mut queue = VecDeque::from([i]);
        while let Some(node) = queue.pop_front() {
            if node == target {
                break;
            }
            for &(next, k) in &adj[node] {
                if !seen[next] {
                    seen[next] = true;
                    parent[next] = Some((node, k));
                    queue.push_back(next);
                }
            }
        }
        let mut cells = Vec::new();
        let mut node = target;
        while let Some((prev, k)) = parent[node] {
            cells.push(k);
            node = prev;
        }
        cells.reverse();
        cells
    }
}

/// Solves `min <C, P>` over couplings of `a` and `b`. Both marginals must be
/// positive and carry the same total mass.
pub(crate) fn solve(a: &[f64], b: &[f64], cost: &[Vec<f64>]) -> Result<Solution> {
    let (m, n) = (a.len(), b.len());
    if m == 0 || n == 0 {
        return Err(Error::Solver("empty marginal".into()));
    }
    let scale = cost
        .iter()
        .flatten()
        .fold(0.0f64, |acc, &c| acc.max(c.abs()))
        .max(f64::MIN_POSITIVE);
    let mut tree = Tree::northwest(a, b);
    let max_pivots = 50 * (m + n) * (m + n) + 1000;
    let mut degenerate = 0;
    let mut pivots = 0;
    loop {
        let adj = tree.adjacency();
        let (u, v) = tree.potentials(cost, &adj);
        let bland = degenerate >= DEGENERATE_RUN;
        let mut entering: Option<(usize, usize, f64)> = None;
        'scan: for i in 0..m {
            for j in 0..n {
                let r = cost[i][j] - u[i] - v[j];
                if r < -ENTER_TOL * scale {
                    if bland {
                        entering = Some((i, j, r));
                        break 'scan;
                    }
                    if entering.is_none_or(|(_, _, best)| r < best) {
                        entering = Some((i, j, r));
                    }
                }
            }
        }
        let Some((ei, ej, _)) = entering else {
            let residual = certificate_residual(&tree.flow, cost, &u, &v) / scale;
            if residual >= CERTIFICATE_TOL {
                return Err(Error::Solver(format!(
                    "optimality certificate failed: residual {residual:e}"
                )));
            }
            let total = (0..m)
                .map(|i| (0..n).map(|j| tree.flow[i][j] * cost[i][j]).sum::<f64>())
                .sum();
            return Ok(Solution {
                flow: tree.flow,
                cost: total,
            });
        };
        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::Solver(format!("no convergence after {max_pivots} pivots")));
        }

        // cycle: entering cell (+), then alternating - / + along the tree path
        let path = tree.path(&adj, ei, ej);
        let (theta, leaving) = path
            .iter()
            .step_by(2)
            .map(|&k| {
                let (i, j) = tree.basis[k];
                (tree.flow[i][j], i * n + j, k)
            })
            .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)))
            .map(|(f, _, k)| (f, k))
            .expect("a cycle has at least one donor cell");
        for (pos, &k) in path.iter().enumerate() {
            let (i, j) = tree.basis[k];
            if pos % 2 == 0 {
                tree.flow[i][j] = (tree.flow[i][j] - theta).max(0.0);
            } else {
                tree.flow[i][j] += theta;
            }
        }
        let (li, lj) = tree.basis[leaving];
        tree.flow[li][lj] = 0.0;
        tree.flow[ei][ej] = theta;
        tree.basis[leaving] = (ei, ej);
        degenerate = if theta == 0.0 { degenerate + 1 } else { 0 };
    }
}

/// Largest violation of dual feasibility (`c_ij - u_i - v_j >= 0`) or of
/// complementary slackness (`flow_ij > 0` implies equality).
fn certificate_residual(flow: &[Vec<f64>], cost: &[Vec<f64>], u: &[f64], v: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in cost.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            let r = c - u[i] - v[j];
            worst = worst.max(-r);
            if flow[i][j] > 0.0 {
                worst = worst.max(r.abs());
            }
        }
    }
    worst
}
