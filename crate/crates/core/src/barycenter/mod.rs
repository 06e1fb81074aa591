//! Metric projection of a measure onto the Dirac-embedded base space:
//! minimizers of `x -> W_p(delta_x, mu)`.

mod search;
mod submetry;

use serde::{Deserialize, Serialize};

use crate::error::{check_exponent, Error, Result};
use crate::report::MinimizerRecord;
use crate::spaces::{MetricSpace, Point, PointRepr};
use crate::transport::{dirac_cost_pow, DiscreteMeasure};

pub use submetry::{submetry_check, translate};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarycenterConfig {
    /// Minimizers closer than this are one cluster.
    pub cluster_sep: f64,
    /// Values within this of the global value count as minimal.
    pub tol_mult: f64,
    /// Grid points per intrinsic dimension for multistart screening.
    pub grid: usize,
    /// Refinement iterations per start.
    pub max_iter: usize,
    /// Largest slope accepted as a stationarity certificate.
    pub stationarity_tol: f64,
}

impl Default for BarycenterConfig {
    fn default() -> Self {
        BarycenterConfig {
            cluster_sep: 1e-4,
            tol_mult: 1e-7,
            grid: 32,
            max_iter: 200,
            stationarity_tol: 1e-7,
        }
    }
}

impl BarycenterConfig {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("cluster_sep", self.cluster_sep),
            ("tol_mult", self.tol_mult),
            ("stationarity_tol", self.stationarity_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("tolerance must be positive, got {v}"),
                });
            }
        }
        if self.grid < 2 {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: "needs at least 2 points per dimension".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BarycenterMethod {
    Dirac,
    ClosedFormTwoPoint,
    EuclideanMean,
    WeightedMedian,
    GridRefine,
    VertexEnumeration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BarycenterFlag {
    /// A continuum of minimizers; the listed points are representatives.
    FlatMinimum,
    /// Some minimizer could not be certified stationary.
    Uncertified,
}

/// Why a point is accepted as a local minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    ClosedForm,
    Atom,
    /// An end of a one-dimensional search interval or a graph vertex.
    Boundary,
    Stationary { slope: f64 },
    Uncertified { slope: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimizer {
    pub point: Point,
    /// `W_p(delta_point, mu)`.
    pub value: f64,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarycenterResult {
    /// One representative per cluster, ordered by value then coordinates.
    pub minimizers: Vec<Minimizer>,
    pub global_value: f64,
    pub multiplicity: usize,
    pub method: BarycenterMethod,
    pub flags: Vec<BarycenterFlag>,
    /// Value gap to the best local minimizer outside every minimizing
    /// cluster, if one was found.
    pub runner_up_gap: Option<f64>,
}

impl BarycenterResult {
    pub fn is_unique(&self) -> bool {
        self.multiplicity == 1 && !self.has_flag(BarycenterFlag::FlatMinimum)
    }

    pub fn has_flag(&self, f: BarycenterFlag) -> bool {
        self.flags.contains(&f)
    }

    pub fn summary(&self) -> BarycenterSummary {
        BarycenterSummary {
            global_value: self.global_value,
            minimizers: self
                .minimizers
                .iter()
                .map(|m| MinimizerRecord {
                    point: PointRepr::from(&m.point),
                    value: m.value,
                })
                .collect(),
            multiplicity: self.multiplicity,
            method: self.method,
            flags: self.flags.clone(),
            runner_up_gap: self.runner_up_gap,
        }
    }
}

/// Wire form of a [`BarycenterResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarycenterSummary {
    pub global_value: f64,
    pub minimizers: Vec<MinimizerRecord>,
    pub multiplicity: usize,
    pub method: BarycenterMethod,
    pub flags: Vec<BarycenterFlag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runner_up_gap: Option<f64>,
}

fn check_two_point(lambda: f64, p: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::DegenerateMeasure(lambda));
    }
    check_exponent("p", p, 1.0, true)
}

/// Minimizing parameter of `t -> lambda t^p + (1 - lambda)(1 - t)^p` on
/// `[0, 1]`: the position, measured from the atom of weight `lambda`, of the
/// barycenter of a two-point measure along any minimizing geodesic.
pub fn two_point_t0(lambda: f64, p: f64) -> Result<f64> {
    check_two_point(lambda, p)?;
    // (t / (1 - t))^(p - 1) = (1 - lambda) / lambda
    let r = (lambda / (1.0 - lambda)).powf(1.0 / (p - 1.0));
    Ok(1.0 / (1.0 + r))
}

/// `W_p(delta_{gamma(t0)}, mu)` for `mu = lambda delta_x + (1 - lambda) delta_y`
/// at distance `dist_xy`.
pub fn two_point_min_value(lambda: f64, p: f64, dist_xy: f64) -> Result<f64> {
    let t = two_point_t0(lambda, p)?;
    if !(dist_xy.is_finite() && dist_xy >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "dist_xy",
            reason: format!("must be a nonnegative distance, got {dist_xy}"),
        });
    }
    let scaled = lambda * t.powf(p) + (1.0 - lambda) * (1.0 - t).powf(p);
    Ok(dist_xy * scaled.powf(1.0 / p))
}

/// A point with its objective `sum_i w_i d(point, x_i)^p`.
#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub point: Point,
    pub fval: f64,
    pub certificate: Certificate,
    /// Known to be a local minimizer of the objective.
    pub local: bool,
}

/// All global minimizers of `x -> W_p(delta_x, mu)`.
pub fn project(mu: &DiscreteMeasure, p: f64, cfg: &BarycenterConfig) -> Result<BarycenterResult> {
    check_exponent("p", p, 1.0, false)?;
    cfg.validate()?;
    let s = mu.space();
    let atoms = mu.atoms();
    let mut flags = Vec::new();

    let (method, candidates) = if atoms.len() == 1 {
        let c = Candidate {
            point: atoms[0].0.clone(),
            fval: 0.0,
            certificate: Certificate::Atom,
            local: true,
        };
        (BarycenterMethod::Dirac, vec![c])
    } else if atoms.len() == 2 {
        let (c, flat) = two_point_candidates(s, atoms, p)?;
        if flat {
            flags.push(BarycenterFlag::FlatMinimum);
        }
        (BarycenterMethod::ClosedFormTwoPoint, c)
    } else {
        match s {
            MetricSpace::Euclidean { .. } if p == 2.0 => {
                (BarycenterMethod::EuclideanMean, vec![search::weighted_mean(s, atoms)])
            }
            MetricSpace::Euclidean { dim: 1 } if p == 1.0 => {
                let (c, flat) = search::weighted_median(s, atoms);
                if flat {
                    flags.push(BarycenterFlag::FlatMinimum);
                }
                (BarycenterMethod::WeightedMedian, c)
            }
            MetricSpace::Euclidean { dim: 1 } => (BarycenterMethod::GridRefine, search::line_segments(s, atoms, p, cfg)),
            MetricSpace::Euclidean { .. } => (BarycenterMethod::GridRefine, search::euclidean_multistart(s, atoms, p, cfg)),
            MetricSpace::Circle { .. } => (BarycenterMethod::GridRefine, search::circle_segments(s, atoms, p, cfg)),
            MetricSpace::Sphere2 { .. } | MetricSpace::FlatTorus { .. } => {
                (BarycenterMethod::GridRefine, search::manifold_multistart(s, atoms, p, cfg))
            }
            MetricSpace::FiniteGraph(g) => (BarycenterMethod::VertexEnumeration, search::graph_edges(s, g, atoms, p, cfg)),
        }
    };
    Ok(assemble(s, p, cfg, method, candidates, flags))
}

/// Closed-form minimizers of a two-atom measure, one per geodesic branch.
/// The flag reports the flat `p = 1`, `lambda = 1/2` case.
fn two_point_candidates(s: &MetricSpace, atoms: &[(Point, f64)], p: f64) -> Result<(Vec<Candidate>, bool)> {
    let (x, lambda) = (&atoms[0].0, atoms[0].1);
    let y = &atoms[1].0;
    let paths = s.minimizing_geodesics(x, y)?;
    let make = |point: Point, certificate| Candidate {
        fval: dirac_cost_pow(s, &point, atoms, p),
        point,
        certificate,
        local: true,
    };
    if p > 1.0 {
        let t0 = two_point_t0(lambda, p)?;
        let c = paths.iter().map(|g| make(g.at(t0), Certificate::ClosedForm)).collect();
        return Ok((c, false));
    }
    // p = 1: the objective is lambda s + (1 - lambda) r with s + r >= d
    let half = (lambda - 0.5).abs() <= 1e-15;
    if half {
        let mut c = vec![make(x.clone(), Certificate::ClosedForm)];
        c.extend(paths.iter().map(|g| make(g.at(0.5), Certificate::ClosedForm)));
        c.push(make(y.clone(), Certificate::ClosedForm));
        Ok((c, true))
    } else if lambda > 0.5 {
        Ok((vec![make(x.clone(), Certificate::Atom)], false))
    } else {
        Ok((vec![make(y.clone(), Certificate::Atom)], false))
    }
}

pub(crate) fn assemble(
    s: &MetricSpace,
    p: f64,
    cfg: &BarycenterConfig,
    method: BarycenterMethod,
    candidates: Vec<Candidate>,
    mut flags: Vec<BarycenterFlag>,
) -> BarycenterResult {
    let value = |c: &Candidate| c.fval.max(0.0).powf(1.0 / p);
    let mut ranked: Vec<(f64, Candidate)> = candidates.into_iter().map(|c| (value(&c), c)).collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.point.lexicographic_cmp(&b.1.point)));
    let global = ranked[0].0;

    let mut reps: Vec<Minimizer> = Vec::new();
    let mut runner_up: Option<f64> = None;
    for (v, c) in &ranked {
        let near_rep = reps.iter().any(|m| s.dist(&m.point, &c.point) <= cfg.cluster_sep);
        if *v <= global + cfg.tol_mult {
            if !near_rep {
                reps.push(Minimizer {
                    point: c.point.clone(),
                    value: *v,
                    certificate: c.certificate,
                });
            }
        } else if c.local && !near_rep && runner_up.is_none() {
            runner_up = Some(v - global);
        }
    }
    if reps
        .iter()
        .any(|m| matches!(m.certificate, Certificate::Uncertified { .. }))
    {
        flags.push(BarycenterFlag::Uncertified);
    }
    BarycenterResult {
        multiplicity: reps.len(),
        minimizers: reps,
        global_value: global,
        method,
        flags,
        runner_up_gap: runner_up,
    }
}
