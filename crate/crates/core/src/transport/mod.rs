//! Finitely supported probability measures and exact p-Wasserstein distances.

mod simplex;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_exponent, Error, Result};
use crate::spaces::{MetricSpace, Point, PointRepr, POINT_EPS};

pub use simplex::CERTIFICATE_TOL;

/// Total mass accepted before renormalization.
pub const MASS_TOL: f64 = 1e-9;

/// A probability measure with finitely many atoms on a metric space.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    space: Arc<MetricSpace>,
    atoms: Vec<(Point, f64)>,
}

impl DiscreteMeasure {
    /// Builds a measure, merging atoms closer than [`POINT_EPS`] and
    /// renormalizing weights that sum to one within [`MASS_TOL`].
    pub fn new(space: Arc<MetricSpace>, atoms: Vec<(Point, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        let mut merged: Vec<(Point, f64)> = Vec::with_capacity(atoms.len());
        for (x, w) in atoms {
            space.validate(&x)?;
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidMeasure(format!("weight {w} is not positive")));
            }
            match merged.iter_mut().find(|(y, _)| space.dist(&x, y) <= POINT_EPS) {
                Some(slot) => slot.1 += w,
                None => merged.push((x, w)),
            }
        }
        let total: f64 = merged.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        for a in &mut merged {
            a.1 /= total;
        }
        Ok(DiscreteMeasure { space, atoms: merged })
    }

    pub fn dirac(space: Arc<MetricSpace>, x: Point) -> Result<Self> {
        DiscreteMeasure::new(space, vec![(x, 1.0)])
    }

    /// `lambda * delta_x + (1 - lambda) * delta_y`.
    pub fn two_point(space: Arc<MetricSpace>, x: Point, y: Point, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::DegenerateMeasure(lambda));
        }
        DiscreteMeasure::new(space, vec![(x, lambda), (y, 1.0 - lambda)])
    }

    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    pub fn space_arc(&self) -> &Arc<MetricSpace> {
        &self.space
    }

    pub fn atoms(&self) -> &[(Point, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_dirac(&self) -> bool {
        self.atoms.len() == 1
    }

    pub fn descriptor(&self) -> MeasureDescriptor {
        MeasureDescriptor {
            space: Some((*self.space).clone()),
            atoms: self
                .atoms
                .iter()
                .map(|(x, w)| AtomRepr {
                    point: PointRepr::from(x),
                    weight: *w,
                })
                .collect(),
        }
    }

    /// Reads a measure from its wire form. The descriptor's own space takes
    /// precedence over `default_space`.
    pub fn from_descriptor(d: &MeasureDescriptor, default_space: Option<Arc<MetricSpace>>) -> Result<Self> {
        let space = match (&d.space, default_space) {
            (Some(s), _) => Arc::new(s.clone()),
            (None, Some(s)) => s,
            (None, None) => return Err(Error::InvalidMeasure("no space given".into())),
        };
        let atoms = d
            .atoms
            .iter()
            .map(|a| Ok((space.point_from_repr(&a.point)?, a.weight)))
            .collect::<Result<Vec<_>>>()?;
        DiscreteMeasure::new(space, atoms)
    }

    fn same_space(&self, other: &DiscreteMeasure) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                expected: self.space.kind().into(),
                found: other.space.kind().into(),
            })
        }
    }
}

impl PartialEq for DiscreteMeasure {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms && *self.space == *other.space
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomRepr {
    pub point: PointRepr,
    pub weight: f64,
}

/// Wire form `{"space": ..., "atoms": [{"point": ..., "weight": ...}]}`; the
/// space may be omitted when supplied separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<MetricSpace>,
    pub atoms: Vec<AtomRepr>,
}

/// An optimal coupling together with its transport cost.
#[derive(Debug, Clone)]
pub struct TransportPlan {
    pub source: DiscreteMeasure,
    pub target: DiscreteMeasure,
    /// `matrix[i][j]` is the mass moved from source atom `i` to target atom `j`.
    pub matrix: Vec<Vec<f64>>,
    pub p: f64,
    /// `sum_ij matrix[i][j] * d(x_i, y_j)^p`.
    pub cost: f64,
}

impl TransportPlan {
    /// Largest deviation of the row and column sums from the marginals.
    pub fn marginal_error(&self) -> f64 {
        let rows = self
            .source
            .atoms()
            .iter()
            .zip(&self.matrix)
            .map(|((_, w), row)| (row.iter().sum::<f64>() - w).abs());
        let cols = self
            .target
            .atoms()
            .iter()
            .enumerate()
            .map(|(j, (_, w))| (self.matrix.iter().map(|r| r[j]).sum::<f64>() - w).abs());
        rows.chain(cols).fold(0.0, f64::max)
    }
}

/// `d^p` with `0^p = 0`.
pub(crate) fn cost_pow(d: f64, p: f64) -> f64 {
    if d == 0.0 {
        0.0
    } else if p == 1.0 {
        d
    } else {
        d.powf(p)
    }
}

/// `sum_i w_i d(x, y_i)^p`, the p-th power of the Dirac transport cost.
pub(crate) fn dirac_cost_pow(space: &MetricSpace, x: &Point, atoms: &[(Point, f64)], p: f64) -> f64 {
    atoms.iter().map(|(y, w)| w * cost_pow(space.dist(x, y), p)).sum()
}

/// Exact `W_p(mu, nu)` and an optimal plan.
pub fn wasserstein_p(mu: &DiscreteMeasure, nu: &DiscreteMeasure, p: f64) -> Result<(f64, TransportPlan)> {
    check_exponent("p", p, 1.0, false)?;
    mu.same_space(nu)?;
    let s = mu.space();
    let cost: Vec<Vec<f64>> = mu
        .atoms
        .iter()
        .map(|(x, _)| nu.atoms.iter().map(|(y, _)| cost_pow(s.dist(x, y), p)).collect())
        .collect();
    let a: Vec<f64> = mu.atoms.iter().map(|a| a.1).collect();
    let b: Vec<f64> = nu.atoms.iter().map(|a| a.1).collect();
    let sol = simplex::solve(&a, &b, &cost)?;
    let cost_total = sol.cost.max(0.0);
    Ok((
        cost_total.powf(1.0 / p),
        TransportPlan {
            source: mu.clone(),
            target: nu.clone(),
            matrix: sol.flow,
            p,
            cost: cost_total,
        },
    ))
}

/// `W_p(delta_x, mu) = (sum_i w_i d(x, y_i)^p)^(1/p)`: a Dirac admits only
/// one coupling.
pub fn dirac_to_measure_cost(x: &Point, mu: &DiscreteMeasure, p: f64) -> Result<f64> {
    check_exponent("p", p, 1.0, false)?;
    mu.space().validate(x)?;
    Ok(dirac_cost_pow(mu.space(), x, &mu.atoms, p).powf(1.0 / p))
}

/// The displacement interpolation `sum_i w_i delta_{gamma_i(t)}` from
/// `delta_x` to `mu`, where `gamma_i` is the minimizing geodesic from `x` to
/// atom `i` selected by `branch_choices[i]` (branch 0 when omitted).
pub fn displacement_geodesic(
    x: &Point,
    mu: &DiscreteMeasure,
    t: f64,
    branch_choices: Option<&[usize]>,
) -> Result<DiscreteMeasure> {
    let s = mu.space();
    s.validate(x)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: format!("must lie in [0, 1], got {t}"),
        });
    }
    if let Some(c) = branch_choices {
        if c.len() != mu.len() {
            return Err(Error::InvalidParameter {
                name: "branch_choices",
                reason: format!("expected {} entries, got {}", mu.len(), c.len()),
            });
        }
    }
    let mut atoms = Vec::with_capacity(mu.len());
    for (i, (y, w)) in mu.atoms.iter().enumerate() {
        let branch = branch_choices.map_or(0, |c| c[i]);
        if s.dist(x, y) <= POINT_EPS {
            if branch != 0 {
                return Err(Error::InvalidBranch { branch, available: 1 });
            }
            atoms.push((x.clone(), *w));
            continue;
        }
        let paths = s.minimizing_geodesics(x, y)?;
        let path = paths.get(branch).ok_or(Error::InvalidBranch {
            branch,
            available: paths.len(),
        })?;
        atoms.push((path.at(t), *w));
    }
    DiscreteMeasure::new(mu.space.clone(), atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line() -> Arc<MetricSpace> {
        Arc::new(MetricSpace::euclidean(1).unwrap())
    }

    fn pt(s: &MetricSpace, x: f64) -> Point {
        s.euclidean_point(&[x]).unwrap()
    }

    fn random_measure(s: &Arc<MetricSpace>, rng: &mut ChaCha8Rng, k: usize) -> DiscreteMeasure {
        let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let atoms = raw.iter().map(|w| (s.sample(rng), w / total)).collect();
        DiscreteMeasure::new(s.clone(), atoms).unwrap()
    }

    /// Minimum over all vertices of the transport polytope: every spanning
    /// tree of the row/column graph determines a unique flow, and the
    /// nonnegative ones are exactly the extreme points.
    fn brute_force_cost(a: &[f64], b: &[f64], cost: &[Vec<f64>]) -> f64 {
        let (m, n) = (a.len(), b.len());
        let cells: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let k = m + n - 1;
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << cells.len()) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let chosen: Vec<(usize, usize)> = (0..cells.len())
                .filter(|&c| mask >> c & 1 == 1)
                .map(|c| cells[c])
                .collect();
            if let Some(flow) = tree_flow(a, b, &chosen) {
                if flow.iter().all(|&f| f >= -1e-14) {
                    let c: f64 = chosen.iter().zip(&flow).map(|(&(i, j), f)| f * cost[i][j]).sum();
                    best = best.min(c);
                }
            }
        }
        best
    }

    /// Solves the marginal equations on a candidate tree by peeling leaves;
    /// `None` if the cells do not form a spanning tree.
    fn tree_flow(a: &[f64], b: &[f64], cells: &[(usize, usize)]) -> Option<Vec<f64>> {
        let m = a.len();
        let mut need: Vec<f64> = a.iter().chain(b).copied().collect();
        let mut flow = vec![f64::NAN; cells.len()];
        let mut done = vec![false; cells.len()];
        for _ in 0..cells.len() {
            let mut degree = vec![0; need.len()];
            for (c, &(i, j)) in cells.iter().enumerate() {
                if !done[c] {
                    degree[i] += 1;
                    degree[m + j] += 1;
                }
            }
            let (c, leaf) = cells.iter().enumerate().find_map(|(c, &(i, j))| {
                if done[c] {
                    None
                } else if degree[i] == 1 {
                    Some((c, i))
                } else if degree[m + j] == 1 {
                    Some((c, m + j))
                } else {
                    None
                }
            })?;
            let (i, j) = cells[c];
            let other = if leaf == i { m + j } else { i };
            flow[c] = need[leaf];
            need[other] -= need[leaf];
            need[leaf] = 0.0;
            done[c] = true;
        }
        need.iter().all(|r| r.abs() < 1e-12).then_some(flow)
    }

    #[test]
    fn diracs_embed_isometrically() {
        let s = Arc::new(MetricSpace::sphere2(1.0).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (x, y) = (s.sample(&mut rng), s.sample(&mut rng));
            let d = s.dist(&x, &y);
            for p in [1.0, 1.5, 2.0, 3.0] {
                let mu = DiscreteMeasure::dirac(s.clone(), x.clone()).unwrap();
                let nu = DiscreteMeasure::dirac(s.clone(), y.clone()).unwrap();
                let (w, _) = wasserstein_p(&mu, &nu, p).unwrap();
                assert!((w - d).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn dirac_against_symmetric_pair() {
        let s = line();
        let mu = DiscreteMeasure::new(s.clone(), vec![(pt(&s, 0.0), 0.5), (pt(&s, 1.0), 0.5)]).unwrap();
        let nu = DiscreteMeasure::dirac(s.clone(), pt(&s, 0.5)).unwrap();
        let (w, plan) = wasserstein_p(&mu, &nu, 2.0).unwrap();
        assert!((w - 0.5).abs() < 1e-15);
        assert!(plan.marginal_error() < 1e-10);
    }

    #[test]
    fn dirac_closed_form_examples() {
        let s = Arc::new(MetricSpace::euclidean(2).unwrap());
        let p = |x: f64, y: f64| s.euclidean_point(&[x, y]).unwrap();
        let mu = DiscreteMeasure::new(
            s.clone(),
            vec![(p(1.0, 0.0), 1.0 / 3.0), (p(0.0, 1.0), 1.0 / 3.0), (p(1.0, 1.0), 1.0 / 3.0)],
        )
        .unwrap();
        let v = dirac_to_measure_cost(&p(0.0, 0.0), &mu, 1.0).unwrap();
        assert!((v - (2.0 + 2f64.sqrt()) / 3.0).abs() < 1e-15);

        // x = a: ((1 - lambda) d^p)^(1/p)
        let l = line();
        let (lambda, d, q) = (0.3, 2.5, 2.7);
        let two = DiscreteMeasure::two_point(l.clone(), pt(&l, 0.0), pt(&l, d), lambda).unwrap();
        let v = dirac_to_measure_cost(&pt(&l, 0.0), &two, q).unwrap();
        assert!((v - ((1.0 - lambda) * d.powf(q)).powf(1.0 / q)).abs() < 1e-14);
    }

    #[test]
    fn matches_extreme_point_enumeration() {
        let s = Arc::new(MetricSpace::euclidean(2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for case in 0..200 {
            let (m, n) = (1 + case % 4, 1 + (case / 4) % 4);
            let mu = random_measure(&s, &mut rng, m);
            let nu = random_measure(&s, &mut rng, n);
            let p = [1.0, 1.5, 2.0, 3.0][case % 4];
            let (w, plan) = wasserstein_p(&mu, &nu, p).unwrap();
            let a: Vec<f64> = mu.atoms().iter().map(|a| a.1).collect();
            let b: Vec<f64> = nu.atoms().iter().map(|a| a.1).collect();
            let cost: Vec<Vec<f64>> = mu
                .atoms()
                .iter()
                .map(|(x, _)| nu.atoms().iter().map(|(y, _)| s.dist(x, y).powf(p)).collect())
                .collect();
            let brute = brute_force_cost(&a, &b, &cost);
            assert!((plan.cost - brute).abs() <= 1e-10, "case {case}: {} vs {brute}", plan.cost);
            assert!((w - brute.powf(1.0 / p)).abs() <= 1e-10);
            assert!(plan.marginal_error() <= 1e-10);
        }
    }

    #[test]
    fn dirac_cost_agrees_with_solver() {
        let s = Arc::new(MetricSpace::circle(1.0).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let mu = random_measure(&s, &mut rng, 5);
            let x = s.sample(&mut rng);
            let d = DiscreteMeasure::dirac(s.clone(), x.clone()).unwrap();
            let (w, _) = wasserstein_p(&d, &mu, 2.0).unwrap();
            assert!((w - dirac_to_measure_cost(&x, &mu, 2.0).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn duplicates_merge_and_mass_is_checked() {
        let s = line();
        let mu = DiscreteMeasure::new(s.clone(), vec![(pt(&s, 1.0), 0.25), (pt(&s, 1.0), 0.75)]).unwrap();
        assert_eq!(mu.len(), 1);
        assert!(DiscreteMeasure::new(s.clone(), vec![(pt(&s, 1.0), 0.5)]).is_err());
        assert!(DiscreteMeasure::new(s.clone(), vec![(pt(&s, 1.0), -1.0), (pt(&s, 2.0), 2.0)]).is_err());
        assert!(matches!(
            DiscreteMeasure::two_point(s.clone(), pt(&s, 0.0), pt(&s, 1.0), 1.0),
            Err(Error::DegenerateMeasure(_))
        ));
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let a = DiscreteMeasure::dirac(line(), pt(&line(), 0.0)).unwrap();
        let c = Arc::new(MetricSpace::circle(1.0).unwrap());
        let b = DiscreteMeasure::dirac(c.clone(), c.circle_point(0.0).unwrap()).unwrap();
        assert!(matches!(wasserstein_p(&a, &b, 1.0), Err(Error::SpaceMismatch { .. })));
    }

    #[test]
    fn displacement_geodesic_examples() {
        let s = line();
        let mu = DiscreteMeasure::new(s.clone(), vec![(pt(&s, 2.0), 0.5), (pt(&s, 4.0), 0.5)]).unwrap();
        let x = pt(&s, 0.0);
        let half = displacement_geodesic(&x, &mu, 0.5, None).unwrap();
        let expected = DiscreteMeasure::new(s.clone(), vec![(pt(&s, 1.0), 0.5), (pt(&s, 2.0), 0.5)]).unwrap();
        assert_eq!(half, expected);
        assert_eq!(displacement_geodesic(&x, &mu, 0.0, None).unwrap().atoms(), &[(x.clone(), 1.0)]);
        assert_eq!(displacement_geodesic(&x, &mu, 1.0, None).unwrap(), mu);
        assert!(matches!(
            displacement_geodesic(&x, &mu, 0.5, Some(&[0, 1])),
            Err(Error::InvalidBranch { .. })
        ));
    }

    #[test]
    fn displacement_geodesic_splits_distance() {
        let s = Arc::new(MetricSpace::flat_torus(6.0, 4.0).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let mu = random_measure(&s, &mut rng, 3);
            let x = s.sample(&mut rng);
            let t: f64 = rng.random_range(0.0..1.0);
            let nu = displacement_geodesic(&x, &mu, t, None).unwrap();
            let total = dirac_to_measure_cost(&x, &mu, 2.0).unwrap();
            let dx = DiscreteMeasure::dirac(s.clone(), x.clone()).unwrap();
            let (head, _) = wasserstein_p(&dx, &nu, 2.0).unwrap();
            let (tail, _) = wasserstein_p(&nu, &mu, 2.0).unwrap();
            assert!((head - t * total).abs() <= 1e-8);
            assert!((tail - (1.0 - t) * total).abs() <= 1e-8);
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let s = Arc::new(MetricSpace::circle(1.0).unwrap());
        let mu = DiscreteMeasure::new(
            s.clone(),
            vec![(s.circle_point(0.5).unwrap(), 0.25), (s.circle_point(3.0).unwrap(), 0.75)],
        )
        .unwrap();
        let json = serde_json::to_string(&mu.descriptor()).unwrap();
        let back: MeasureDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(DiscreteMeasure::from_descriptor(&back, None).unwrap(), mu);
    }
}
