//! Persistence diagrams with bottleneck and p-Wasserstein matching distances,
//! and the shifted Kuratowski embedding of a metric space into diagram space.

mod assignment;
mod embedding;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use embedding::{embed, midpoint_diagram, EmbeddingDescriptor, EmbeddingSpec};

/// Ties between bottleneck threshold candidates closer than this are merged.
pub const CANDIDATE_TOL: f64 = 1e-12;

/// A finite multiset of `(birth, death)` points with `birth < death`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "DiagramRepr", into = "DiagramRepr")]
pub struct PersistenceDiagram {
    points: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    points: Vec<[f64; 2]>,
}

impl TryFrom<DiagramRepr> for PersistenceDiagram {
    type Error = Error;

    fn try_from(r: DiagramRepr) -> Result<Self> {
        PersistenceDiagram::new(r.points.into_iter().map(|[b, d]| (b, d)).collect())
    }
}

impl From<PersistenceDiagram> for DiagramRepr {
    fn from(d: PersistenceDiagram) -> Self {
        DiagramRepr {
            points: d.points.into_iter().map(|(b, d)| [b, d]).collect(),
        }
    }
}

impl PersistenceDiagram {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        for (i, &(b, d)) in points.iter().enumerate() {
            if !(b.is_finite() && d.is_finite()) {
                return Err(Error::InvalidDiagram(format!("point {i} ({b}, {d}) is not finite")));
            }
            if !(d > b) {
                return Err(Error::InvalidDiagram(format!(
                    "point {i} ({b}, {d}) is not strictly above the diagonal"
                )));
            }
        }
        Ok(PersistenceDiagram { points })
    }

    pub fn empty() -> Self {
        PersistenceDiagram::default()
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Sup-norm distance between two plane points.
pub fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

/// Sup-norm distance from a point to the diagonal.
pub fn diagonal_gap(a: (f64, f64)) -> f64 {
    0.5 * (a.1 - a.0)
}

/// Bijection between subsets of two diagrams; everything else is matched to
/// the diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PartialMatching {
    pub pairs: Vec<(usize, usize)>,
    pub unmatched1: Vec<usize>,
    pub unmatched2: Vec<usize>,
}

impl PartialMatching {
    /// Completes `pairs` with the unmatched index sets.
    pub fn from_pairs(mut pairs: Vec<(usize, usize)>, n1: usize, n2: usize) -> Self {
        pairs.sort_unstable();
        let mut seen1 = vec![false; n1];
        let mut seen2 = vec![false; n2];
        for &(i, j) in &pairs {
            if i < n1 {
                seen1[i] = true;
            }
            if j < n2 {
                seen2[j] = true;
            }
        }
        PartialMatching {
            pairs,
            unmatched1: (0..n1).filter(|&i| !seen1[i]).collect(),
            unmatched2: (0..n2).filter(|&j| !seen2[j]).collect(),
        }
    }

    pub fn validate(&self, n1: usize, n2: usize) -> Result<()> {
        let mut seen1 = vec![false; n1];
        let mut seen2 = vec![false; n2];
        let mark = |seen: &mut [bool], i: usize, side: u8| -> Result<()> {
            match seen.get_mut(i) {
                None => Err(Error::InvalidMatching(format!("index {i} out of range for diagram {side}"))),
                Some(true) => Err(Error::InvalidMatching(format!("index {i} of diagram {side} used twice"))),
                Some(s) => {
                    *s = true;
                    Ok(())
                }
            }
        };
        for &(i, j) in &self.pairs {
            mark(&mut seen1, i, 1)?;
            mark(&mut seen2, j, 2)?;
        }
        for &i in &self.unmatched1 {
            mark(&mut seen1, i, 1)?;
        }
        for &j in &self.unmatched2 {
            mark(&mut seen2, j, 2)?;
        }
        if let Some(i) = seen1.iter().position(|s| !s) {
            return Err(Error::InvalidMatching(format!("index {i} of diagram 1 not covered")));
        }
        if let Some(j) = seen2.iter().position(|s| !s) {
            return Err(Error::InvalidMatching(format!("index {j} of diagram 2 not covered")));
        }
        Ok(())
    }
}

fn check_order(p: f64) -> Result<()> {
    if p == f64::INFINITY || (p.is_finite() && p >= 1.0) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "p",
            reason: format!("must be >= 1 or infinite, got {p}"),
        })
    }
}

/// The p-cost of a partial matching; `p = f64::INFINITY` gives the
/// bottleneck cost.
pub fn matching_cost(
    d1: &PersistenceDiagram,
    d2: &PersistenceDiagram,
    m: &PartialMatching,
    p: f64,
) -> Result<f64> {
    check_order(p)?;
    m.validate(d1.len(), d2.len())?;
    let terms = m
        .pairs
        .iter()
        .map(|&(i, j)| linf(d1.points[i], d2.points[j]))
        .chain(m.unmatched1.iter().map(|&i| diagonal_gap(d1.points[i])))
        .chain(m.unmatched2.iter().map(|&j| diagonal_gap(d2.points[j])));
    Ok(if p.is_infinite() {
        terms.fold(0.0, f64::max)
    } else {
        terms.map(|t| t.powf(p)).sum::<f64>().powf(1.0 / p)
    })
}

/// Can every point be matched (to a partner or the diagonal) at cost `<= delta`?
/// Returns the matched pairs when it can.
fn feasible(d1: &PersistenceDiagram, d2: &PersistenceDiagram, delta: f64) -> Option<Vec<(usize, usize)>> {
    let (n1, n2) = (d1.len(), d2.len());
    // left: D1 points then diagonal copies of D2; right: D2 points then diagonal copies of D1
    let mut adj = vec![Vec::new(); n1 + n2];
    for (i, &a) in d1.points.iter().enumerate() {
        for (j, &b) in d2.points.iter().enumerate() {
            if linf(a, b) <= delta {
                adj[i].push(j);
            }
        }
        if diagonal_gap(a) <= delta {
            adj[i].push(n2 + i);
        }
    }
    for (j, &b) in d2.points.iter().enumerate() {
        if diagonal_gap(b) <= delta {
            adj[n1 + j].push(j);
        }
        adj[n1 + j].extend(n2..n2 + n1);
    }
    let m = assignment::hopcroft_karp(&adj, n1 + n2);
    if m.iter().any(Option::is_none) {
        return None;
    }
    Some(
        (0..n1)
            .filter_map(|i| m[i].filter(|&j| j < n2).map(|j| (i, j)))
            .collect(),
    )
}

/// Bottleneck distance by binary search over the candidate thresholds.
pub fn bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> (f64, PartialMatching) {
    let (n1, n2) = (d1.len(), d2.len());
    let mut cand = vec![0.0];
    for &a in &d1.points {
        cand.push(diagonal_gap(a));
        cand.extend(d2.points.iter().map(|&b| linf(a, b)));
    }
    cand.extend(d2.points.iter().map(|&b| diagonal_gap(b)));
    cand.sort_by(f64::total_cmp);
    // keep the largest value of each near-tie group so feasibility is never lost
    let mut thresholds: Vec<f64> = Vec::with_capacity(cand.len());
    for c in cand {
        match thresholds.last_mut() {
            Some(last) if c - *last <= CANDIDATE_TOL => *last = c,
            _ => thresholds.push(c),
        }
    }
    let (mut lo, mut hi) = (0, thresholds.len() - 1);
    let mut best = feasible(d1, d2, thresholds[hi]).expect("the largest candidate admits the empty matching");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match feasible(d1, d2, thresholds[mid]) {
            Some(pairs) => {
                best = pairs;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let m = PartialMatching::from_pairs(best, n1, n2);
    let value = matching_cost(d1, d2, &m, f64::INFINITY).expect("matching built from a valid assignment");
    (value, m)
}

/// p-Wasserstein distance between diagrams by optimal assignment on the
/// diagonal-augmented cost matrix.
pub fn wasserstein_diagram(
    d1: &PersistenceDiagram,
    d2: &PersistenceDiagram,
    p: f64,
) -> Result<(f64, PartialMatching)> {
    if p.is_infinite() && p > 0.0 {
        return Ok(bottleneck(d1, d2));
    }
    check_order(p)?;
    let (n1, n2) = (d1.len(), d2.len());
    let n = n1 + n2;
    let mut cost = vec![vec![0.0; n]; n];
    for (i, row) in cost.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            *c = match (i < n1, j < n2) {
                (true, true) => linf(d1.points[i], d2.points[j]).powf(p),
                (true, false) => diagonal_gap(d1.points[i]).powf(p),
                (false, true) => diagonal_gap(d2.points[j]).powf(p),
                (false, false) => 0.0,
            };
        }
    }
    let assign = assignment::hungarian(&cost);
    let pairs = (0..n1)
        .filter(|&i| assign[i] < n2)
        .map(|i| (i, assign[i]))
        .collect();
    let m = PartialMatching::from_pairs(pairs, n1, n2);
    let value = matching_cost(d1, d2, &m, p)?;
    Ok((value, m))
}
