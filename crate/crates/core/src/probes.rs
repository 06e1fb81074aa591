//! Reach probes: constructive witnesses for null reach and sampled evidence
//! for unique projections, each producing a replayable [`ProbeReport`].

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::barycenter::{
    project, submetry_check, two_point_min_value, BarycenterConfig, BarycenterFlag, BarycenterResult,
};
use crate::diagrams::{bottleneck, embed, midpoint_diagram, EmbeddingDescriptor, EmbeddingSpec};
use crate::error::{check_exponent, Error, Result};
use crate::orlicz::{
    is_interior, orlicz_distance_dirac, orlicz_project_two_point, orlicz_two_point_endpoint, GaugeDescriptor,
    OrliczCost,
};
use crate::report::{MinimizerRecord, ProbeReport, Witness};
use crate::spaces::{convexity_probe_with, ConvexityConfig};
use crate::spaces::{MetricSpace, Point, PointRepr};
use crate::transport::{wasserstein_p, DiscreteMeasure, MeasureDescriptor};

pub const DEFAULT_LAMBDAS: [f64; 5] = [0.5, 0.75, 0.9, 0.99, 0.999];

/// Equalities between a computed distance and its closed form.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Exact identities in the diagram and W_1 witnesses.
pub const EXACT_TOL: f64 = 1e-12;
/// Orlicz endpoint formula against bisection.
pub const ENDPOINT_TOL: f64 = 1e-10;
/// Distance between a computed barycenter and its known location.
pub const LOCATION_TOL: f64 = 1e-7;

/// Everything needed to run (or rerun) a probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "probe", rename_all = "kebab-case")]
pub enum ProbeSpec {
    W1NullReach {
        space: MetricSpace,
        x: PointRepr,
        eps: Vec<f64>,
    },
    MultiGeodesicNullReach {
        space: MetricSpace,
        x: PointRepr,
        y: PointRepr,
        p: f64,
        lambdas: Vec<f64>,
    },
    UniqueBarycenters {
        space: MetricSpace,
        p: f64,
        n_measures: usize,
        seed: u64,
    },
    DensityUnp {
        mu: MeasureDescriptor,
        x: PointRepr,
        p: f64,
        t_grid: Vec<f64>,
    },
    DgmNullReach {
        space: MetricSpace,
        embedding: EmbeddingDescriptor,
        x: PointRepr,
        eps: Vec<f64>,
    },
    OrliczNullReach {
        space: MetricSpace,
        x: PointRepr,
        y: PointRepr,
        gauge: GaugeDescriptor,
        lambdas: Vec<f64>,
    },
    Convexity {
        space: MetricSpace,
        #[serde(flatten)]
        config: ConvexityConfig,
    },
    Submetry {
        mu: MeasureDescriptor,
        r: f64,
        n_samples: usize,
        seed: u64,
    },
}

impl ProbeSpec {
    /// Kebab-case probe name, as used on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            ProbeSpec::W1NullReach { .. } => "w1-null-reach",
            ProbeSpec::MultiGeodesicNullReach { .. } => "multi-geodesic-null-reach",
            ProbeSpec::UniqueBarycenters { .. } => "unique-barycenters",
            ProbeSpec::DensityUnp { .. } => "density-unp",
            ProbeSpec::DgmNullReach { .. } => "dgm-null-reach",
            ProbeSpec::OrliczNullReach { .. } => "orlicz-null-reach",
            ProbeSpec::Convexity { .. } => "convexity",
            ProbeSpec::Submetry { .. } => "submetry",
        }
    }
}

/// Runs the probe described by `spec` and attaches `spec` to the report.
pub fn run_probe(spec: &ProbeSpec) -> Result<ProbeReport> {
    let arc = |s: &MetricSpace| Arc::new(s.clone());
    let mut report = match spec {
        ProbeSpec::W1NullReach { space, x, eps } => {
            let s = arc(space);
            let x = s.point_from_repr(x)?;
            probe_w1_null_reach(&s, &x, eps)?
        }
        ProbeSpec::MultiGeodesicNullReach { space, x, y, p, lambdas } => {
            let s = arc(space);
            let (x, y) = (s.point_from_repr(x)?, s.point_from_repr(y)?);
            probe_multi_geodesic_null_reach(&s, &x, &y, *p, lambdas)?
        }
        ProbeSpec::UniqueBarycenters { space, p, n_measures, seed } => {
            probe_unique_barycenters(&arc(space), *p, *n_measures, *seed)?
        }
        ProbeSpec::DensityUnp { mu, x, p, t_grid } => {
            let mu = DiscreteMeasure::from_descriptor(mu, None)?;
            let x = mu.space().point_from_repr(x)?;
            probe_density_unp(&mu, &x, *p, t_grid)?
        }
        ProbeSpec::DgmNullReach { space, embedding, x, eps } => {
            let s = arc(space);
            let spec = EmbeddingSpec::from_descriptor(embedding, s.clone())?;
            let x = s.point_from_repr(x)?;
            probe_dgm_null_reach(&spec, &x, eps)?
        }
        ProbeSpec::OrliczNullReach { space, x, y, gauge, lambdas } => {
            let s = arc(space);
            let (x, y) = (s.point_from_repr(x)?, s.point_from_repr(y)?);
            probe_orlicz_null_reach(&s, &x, &y, &OrliczCost::from_descriptor(*gauge)?, lambdas)?
        }
        ProbeSpec::Convexity { space, config } => convexity_probe_with(space, config)?,
        ProbeSpec::Submetry { mu, r, n_samples, seed } => {
            let mu = DiscreteMeasure::from_descriptor(mu, None)?;
            submetry_check(&mu, *r, *n_samples, *seed)?
        }
    };
    report.spec = Some(spec.clone());
    Ok(report)
}

/// Reruns the probe recorded in `report`.
pub fn replay(report: &ProbeReport) -> Result<ProbeReport> {
    let spec = report
        .spec
        .as_ref()
        .ok_or_else(|| Error::Precondition("report carries no probe spec to replay".into()))?;
    run_probe(spec)
}

fn minimizer_records(r: &BarycenterResult) -> Vec<MinimizerRecord> {
    r.summary().minimizers
}

/// Clusters counted as distinct barycenters; a flat minimum counts as many.
fn cluster_count(r: &BarycenterResult) -> usize {
    if r.has_flag(BarycenterFlag::FlatMinimum) {
        r.multiplicity.max(2)
    } else {
        r.multiplicity
    }
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn check_lambdas(lambdas: &[f64]) -> Result<Vec<f64>> {
    if let Some(&l) = lambdas.iter().find(|&&l| !(l > 0.0 && l < 1.0)) {
        return Err(Error::DegenerateMeasure(l));
    }
    if lambdas.is_empty() {
        return Err(Error::InvalidParameter {
            name: "lambdas",
            reason: "grid is empty".into(),
        });
    }
    Ok(sorted(lambdas))
}

fn check_eps(eps: &[f64]) -> Result<()> {
    if eps.is_empty() || eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::InvalidParameter {
            name: "eps",
            reason: format!("needs a nonempty list of positive scales, got {eps:?}"),
        });
    }
    Ok(())
}

/// `mu = (delta_x + delta_y) / 2` for `y` within `eps` of `x` has both `x`
/// and `y` as W_1 barycenters while lying within `eps` of `delta_x`.
pub fn probe_w1_null_reach(space: &Arc<MetricSpace>, x: &Point, eps_list: &[f64]) -> Result<ProbeReport> {
    check_eps(eps_list)?;
    space.validate(x)?;
    let mut report = ProbeReport::new("w1-null-reach", Some((**space).clone()));
    report.set_param("x", PointRepr::from(x));
    report.set_param("eps", eps_list);
    report.set_param("p", 1.0);
    let cfg = BarycenterConfig::default();
    let dx = DiscreteMeasure::dirac(space.clone(), x.clone())?;
    let mut realized = 0;
    for &eps in eps_list {
        let Some(y) = space.nearby_point(x, eps)? else {
            report.notes.push(format!("eps = {eps}: no point within eps of x, skipped"));
            continue;
        };
        realized += 1;
        let d = space.dist(x, &y);
        let mu = DiscreteMeasure::two_point(space.clone(), x.clone(), y.clone(), 0.5)?;
        let (w1, _) = wasserstein_p(&dx, &mu, 1.0)?;
        report.record("w1_equals_half_distance", (w1 - 0.5 * d).abs(), EXACT_TOL);
        report.record("w1_below_eps", w1 - eps, EXACT_TOL);
        let r = project(&mu, 1.0, &cfg)?;
        report.record_bool("multiplicity_at_least_2", cluster_count(&r) >= 2);
        // both endpoints attain the minimum
        for (name, z) in [("x_optimal", x), ("y_optimal", &y)] {
            let dz = DiscreteMeasure::dirac(space.clone(), z.clone())?;
            let (wz, _) = wasserstein_p(&dz, &mu, 1.0)?;
            report.record(name, (wz - r.global_value).abs(), EXACT_TOL);
        }
        report.witnesses.push(Witness {
            label: format!("eps={eps}"),
            measure: Some(mu.descriptor()),
            points: vec![PointRepr::from(x), PointRepr::from(&y)],
            minimizers: minimizer_records(&r),
            values: BTreeMap::from([
                ("eps".into(), eps),
                ("d_xy".into(), d),
                ("w1".into(), w1),
                ("multiplicity".into(), cluster_count(&r) as f64),
            ]),
            ..Witness::default()
        });
    }
    if realized == 0 {
        report.precondition_failed("x is isolated at every requested scale");
    }
    report.finalize();
    report.spec = Some(ProbeSpec::W1NullReach {
        space: (**space).clone(),
        x: PointRepr::from(x),
        eps: eps_list.to_vec(),
    });
    Ok(report)
}

/// Two-point measures `lambda delta_x + (1 - lambda) delta_y` with several
/// minimizing geodesics between `x` and `y` have several barycenters while
/// approaching `delta_x` as `lambda -> 1`.
pub fn probe_multi_geodesic_null_reach(
    space: &Arc<MetricSpace>,
    x: &Point,
    y: &Point,
    p: f64,
    lambdas: &[f64],
) -> Result<ProbeReport> {
    check_exponent("p", p, 1.0, true)?;
    let grid = check_lambdas(lambdas)?;
    let mut report = ProbeReport::new("multi-geodesic-null-reach", Some((**space).clone()));
    report.set_param("x", PointRepr::from(x));
    report.set_param("y", PointRepr::from(y));
    report.set_param("p", p);
    report.set_param("lambdas", &grid);
    report.spec = Some(ProbeSpec::MultiGeodesicNullReach {
        space: (**space).clone(),
        x: PointRepr::from(x),
        y: PointRepr::from(y),
        p,
        lambdas: lambdas.to_vec(),
    });
    let paths = space.minimizing_geodesics(x, y)?;
    report.set_param("n_branches", paths.len());
    if paths.len() < 2 {
        report.precondition_failed(format!("only {} minimizing geodesic between x and y", paths.len()));
        report.finalize();
        return Ok(report);
    }
    let d = space.dist(x, y);
    let dx = DiscreteMeasure::dirac(space.clone(), x.clone())?;
    let cfg = BarycenterConfig::default();
    let mut prev: Option<f64> = None;
    for &lambda in &grid {
        let mu = DiscreteMeasure::two_point(space.clone(), x.clone(), y.clone(), lambda)?;
        let r = project(&mu, p, &cfg)?;
        report.record_bool("multiplicity_at_least_2", cluster_count(&r) >= 2);
        let closed = two_point_min_value(lambda, p, d)?;
        report.record("barycenter_value_closed_form", (r.global_value - closed).abs(), CLOSED_FORM_TOL);
        let (w, _) = wasserstein_p(&mu, &dx, p)?;
        let expected = (1.0 - lambda).powf(1.0 / p) * d;
        report.record("endpoint_distance_closed_form", (w - expected).abs(), CLOSED_FORM_TOL);
        if let Some(prev) = prev {
            report.record_bool("endpoint_distance_strictly_decreasing", w < prev);
        }
        prev = Some(w);
        report.witnesses.push(Witness {
            label: format!("lambda={lambda}"),
            measure: Some(mu.descriptor()),
            minimizers: minimizer_records(&r),
            values: BTreeMap::from([
                ("lambda".into(), lambda),
                ("endpoint_distance".into(), w),
                ("barycenter_value".into(), r.global_value),
                ("multiplicity".into(), r.multiplicity as f64),
            ]),
            ..Witness::default()
        });
    }
    report.finalize();
    Ok(report)
}

fn weighted_mean(mu: &DiscreteMeasure) -> Vec<f64> {
    let dim = mu.atoms()[0].0.coords().len();
    let mut m = vec![0.0; dim];
    for (x, w) in mu.atoms() {
        for (mi, xi) in m.iter_mut().zip(x.coords()) {
            *mi += w * xi;
        }
    }
    m
}

/// Random measures of at most five atoms, with their number of barycenters.
pub fn probe_unique_barycenters(
    space: &Arc<MetricSpace>,
    p: f64,
    n_measures: usize,
    seed: u64,
) -> Result<ProbeReport> {
    check_exponent("p", p, 1.0, true)?;
    if !matches!(**space, MetricSpace::Euclidean { .. }) {
        return Err(Error::Precondition(format!(
            "unique barycenters are only asserted on Euclidean space, got {}",
            space.kind()
        )));
    }
    let mut report = ProbeReport::new("unique-barycenters", Some((**space).clone()));
    report.set_param("p", p);
    report.set_param("n_measures", n_measures);
    report.set_param("seed", seed);
    report.spec = Some(ProbeSpec::UniqueBarycenters {
        space: (**space).clone(),
        p,
        n_measures,
        seed,
    });
    let cfg = BarycenterConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut min_gap, mut max_gap) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut first_bad: Option<(DiscreteMeasure, BarycenterResult)> = None;
    for _ in 0..n_measures {
        let n = rng.random_range(1..=5);
        let raw: Vec<(Point, f64)> = (0..n)
            .map(|_| (space.sample(&mut rng), rng.random_range(0.05..1.0)))
            .collect();
        let total: f64 = raw.iter().map(|a| a.1).sum();
        let atoms = raw.into_iter().map(|(x, w)| (x, w / total)).collect();
        let mu = DiscreteMeasure::new(space.clone(), atoms)?;
        let r = project(&mu, p, &cfg)?;
        report.record_bool("unique", r.is_unique());
        report.record_bool("certified", !r.has_flag(BarycenterFlag::Uncertified));
        if p == 2.0 {
            let mean = Point::Euclidean(weighted_mean(&mu));
            report.record("equals_weighted_mean", space.dist(&r.minimizers[0].point, &mean), CLOSED_FORM_TOL);
        }
        if let Some(g) = r.runner_up_gap {
            min_gap = min_gap.min(g);
            max_gap = max_gap.max(g);
        }
        if first_bad.is_none() && !r.is_unique() {
            first_bad = Some((mu, r));
        }
    }
    let mut values = BTreeMap::from([("n_measures".into(), n_measures as f64)]);
    if min_gap.is_finite() {
        values.insert("min_runner_up_gap".into(), min_gap);
        values.insert("max_runner_up_gap".into(), max_gap);
    }
    report.witnesses.push(Witness {
        label: "summary".into(),
        values,
        ..Witness::default()
    });
    if let Some((mu, r)) = first_bad {
        report.witnesses.push(Witness {
            label: "non_unique".into(),
            measure: Some(mu.descriptor()),
            minimizers: minimizer_records(&r),
            ..Witness::default()
        });
    }
    report.notes.push(format!("sampled {n_measures} measures; no claim beyond the sample"));
    report.finalize();
    Ok(report)
}

/// Sliding `delta_x` toward `mu` along the displacement geodesic gives
/// measures whose barycenter is unique (and equal to `x`).
pub fn probe_density_unp(mu: &DiscreteMeasure, x: &Point, p: f64, t_grid: &[f64]) -> Result<ProbeReport> {
    check_exponent("p", p, 1.0, true)?;
    let s = mu.space();
    s.validate(x)?;
    if let Some(&t) = t_grid.iter().find(|&&t| !(t > 0.0 && t < 1.0)) {
        return Err(Error::InvalidParameter {
            name: "t_grid",
            reason: format!("times must lie in (0, 1), got {t}"),
        });
    }
    let cfg = BarycenterConfig::default();
    let base = project(mu, p, &cfg)?;
    let gap = crate::transport::dirac_to_measure_cost(x, mu, p)? - base.global_value;
    if gap > CLOSED_FORM_TOL {
        return Err(Error::Precondition(format!(
            "x is not a barycenter of mu: its value exceeds the minimum by {gap:e}"
        )));
    }
    let mut report = ProbeReport::new("density-unp", Some(s.clone()));
    report.set_param("x", PointRepr::from(x));
    report.set_param("p", p);
    report.set_param("t_grid", t_grid);
    report.spec = Some(ProbeSpec::DensityUnp {
        mu: mu.descriptor(),
        x: PointRepr::from(x),
        p,
        t_grid: t_grid.to_vec(),
    });
    report.record("x_is_barycenter", gap, CLOSED_FORM_TOL);
    for &t in t_grid {
        let nu = crate::transport::displacement_geodesic(x, mu, t, None)?;
        let r = project(&nu, p, &cfg)?;
        report.record_bool("unique", r.is_unique());
        let miss = s.dist(&r.minimizers[0].point, x);
        report.record("barycenter_is_x", miss, LOCATION_TOL);
        report.witnesses.push(Witness {
            label: format!("t={t}"),
            measure: Some(nu.descriptor()),
            minimizers: minimizer_records(&r),
            values: BTreeMap::from([("t".into(), t), ("distance_to_x".into(), miss)]),
            ..Witness::default()
        });
    }
    report.finalize();
    Ok(report)
}

/// The midpoint diagram between `embed(x)` and `embed(y)` projects onto
/// both, for `y` arbitrarily close to `x`.
pub fn probe_dgm_null_reach(spec: &EmbeddingSpec, x: &Point, eps_list: &[f64]) -> Result<ProbeReport> {
    check_eps(eps_list)?;
    let s = spec.space();
    s.validate(x)?;
    let mut report = ProbeReport::new("dgm-null-reach", Some(s.clone()));
    report.set_param("x", PointRepr::from(x));
    report.set_param("eps", eps_list);
    report.set_param("c", spec.c());
    report.set_param("n_landmarks", spec.landmarks().len());
    report.spec = Some(ProbeSpec::DgmNullReach {
        space: s.clone(),
        embedding: spec.descriptor(),
        x: PointRepr::from(x),
        eps: eps_list.to_vec(),
    });
    let ex = embed(x, spec)?;
    let landmark_diagrams = spec
        .landmarks()
        .iter()
        .map(|z| embed(z, spec))
        .collect::<Result<Vec<_>>>()?;
    let mut realized = 0;
    for &eps in eps_list {
        let Some(y) = s.nearby_point(x, eps)? else {
            report.notes.push(format!("eps = {eps}: no point within eps of x, skipped"));
            continue;
        };
        realized += 1;
        let d = s.dist(x, &y);
        let ey = embed(&y, spec)?;
        let mid = midpoint_diagram(x, &y, spec)?;
        let same_line = |a: &crate::diagrams::PersistenceDiagram| {
            let (v, m) = bottleneck(a, &mid);
            let ok = m.unmatched1.is_empty()
                && m.unmatched2.is_empty()
                && m.pairs.iter().all(|&(i, j)| a.points()[i].0 == mid.points()[j].0);
            (v, ok)
        };
        let (wx, okx) = same_line(&ex);
        let (wy, oky) = same_line(&ey);
        report.record("projection_x_at_half_distance", (wx - 0.5 * d).abs(), EXACT_TOL);
        report.record("projection_y_at_half_distance", (wy - 0.5 * d).abs(), EXACT_TOL);
        report.record_bool("vertical_line_pairing", okx && oky);
        let mut closest = f64::INFINITY;
        let mut attaining = 0;
        for e in &landmark_diagrams {
            let (w, ok) = same_line(e);
            report.record("no_closer_landmark", 0.5 * d - w, EXACT_TOL);
            report.record_bool("vertical_line_pairing", ok);
            closest = closest.min(w);
            if w <= 0.5 * d + 1e-9 {
                attaining += 1;
            }
        }
        report.witnesses.push(Witness {
            label: format!("eps={eps}"),
            diagram: Some(mid),
            points: vec![PointRepr::from(x), PointRepr::from(&y)],
            values: BTreeMap::from([
                ("eps".into(), eps),
                ("d_xy".into(), d),
                ("w_inf_x".into(), wx),
                ("w_inf_y".into(), wy),
                ("closest_landmark".into(), closest),
                ("landmarks_at_half_distance".into(), attaining as f64),
            ]),
            ..Witness::default()
        });
    }
    if realized == 0 {
        report.precondition_failed("x is isolated at every requested scale");
    }
    report.finalize();
    Ok(report)
}

/// Orlicz analogue of the multi-geodesic probe: interior barycenters on
/// every branch while the endpoint distance shrinks to zero.
pub fn probe_orlicz_null_reach(
    space: &Arc<MetricSpace>,
    x: &Point,
    y: &Point,
    cost: &OrliczCost,
    lambdas: &[f64],
) -> Result<ProbeReport> {
    let grid = check_lambdas(lambdas)?;
    let mut report = ProbeReport::new("orlicz-null-reach", Some((**space).clone()));
    report.set_param("x", PointRepr::from(x));
    report.set_param("y", PointRepr::from(y));
    report.set_param("gauge", cost.family());
    report.set_param("lambdas", &grid);
    report.spec = cost.descriptor().map(|gauge| ProbeSpec::OrliczNullReach {
        space: (**space).clone(),
        x: PointRepr::from(x),
        y: PointRepr::from(y),
        gauge,
        lambdas: lambdas.to_vec(),
    });
    let paths = space.minimizing_geodesics(x, y)?;
    report.set_param("n_branches", paths.len());
    if paths.len() < 2 {
        report.precondition_failed(format!("only {} minimizing geodesic between x and y", paths.len()));
    }
    match cost.non_identity_witness() {
        Some(t0) => report.set_param("gauge_witness_t0", t0),
        None => report.precondition_failed("gauge coincides with the identity: no t0 > 1 with phi(t0) != t0"),
    }
    if report.notes.is_empty() {
        let d = space.dist(x, y);
        let mut prev: Option<f64> = None;
        for &lambda in &grid {
            let mu = DiscreteMeasure::two_point(space.clone(), x.clone(), y.clone(), lambda)?;
            let r = orlicz_project_two_point(x, y, lambda, cost, space)?;
            report.record_bool("multiplicity_at_least_2", r.multiplicity >= 2);
            report.record_bool(
                "minimizers_interior",
                r.minimizers.iter().all(|m| is_interior(space, x, y, &m.point)),
            );
            let formula = orlicz_two_point_endpoint(lambda, d, cost)?;
            let direct = orlicz_distance_dirac(x, &mu, cost)?;
            report.record("endpoint_formula", (formula - direct).abs(), ENDPOINT_TOL);
            if let Some(prev) = prev {
                report.record_bool("endpoint_distance_strictly_decreasing", direct < prev);
            }
            prev = Some(direct);
            report.witnesses.push(Witness {
                label: format!("lambda={lambda}"),
                measure: Some(mu.descriptor()),
                minimizers: minimizer_records(&r),
                values: BTreeMap::from([
                    ("lambda".into(), lambda),
                    ("endpoint_distance".into(), direct),
                    ("endpoint_formula".into(), formula),
                    ("barycenter_value".into(), r.global_value),
                    ("multiplicity".into(), r.multiplicity as f64),
                ]),
                ..Witness::default()
            });
        }
    }
    report.finalize();
    Ok(report)
}

/// Probe specs reproducing the acceptance battery.
pub fn acceptance_battery(seed: u64) -> Result<Vec<ProbeSpec>> {
    use std::f64::consts::PI;
    let circle = MetricSpace::circle(1.0)?;
    let sphere = MetricSpace::sphere2(1.0)?;
    let line = MetricSpace::euclidean(1)?;
    let plane = MetricSpace::euclidean(2)?;
    let path = path_graph(11, 0.05)?;
    let eps = vec![1.0, 0.1, 0.01];
    let lambdas = vec![0.5, 0.9, 0.99];
    let north = PointRepr::Coords(vec![0.0, 0.0, 1.0]);
    let south = PointRepr::Coords(vec![0.0, 0.0, -1.0]);
    let mut specs = vec![
        ProbeSpec::W1NullReach { space: line.clone(), x: PointRepr::Scalar(0.0), eps: eps.clone() },
        ProbeSpec::W1NullReach { space: circle.clone(), x: PointRepr::Scalar(0.0), eps: eps.clone() },
        ProbeSpec::W1NullReach { space: path.clone(), x: PointRepr::Scalar(5.0), eps },
    ];
    for p in [2.0, 3.0] {
        specs.push(ProbeSpec::MultiGeodesicNullReach {
            space: circle.clone(),
            x: PointRepr::Scalar(0.0),
            y: PointRepr::Scalar(PI),
            p,
            lambdas: lambdas.clone(),
        });
        specs.push(ProbeSpec::MultiGeodesicNullReach {
            space: sphere.clone(),
            x: north.clone(),
            y: south.clone(),
            p,
            lambdas: lambdas.clone(),
        });
    }
    for (k, p) in [1.5, 2.0, 3.0].into_iter().enumerate() {
        specs.push(ProbeSpec::UniqueBarycenters { space: plane.clone(), p, n_measures: 1000, seed: seed + k as u64 });
    }
    let sym = DiscreteMeasure::two_point(
        Arc::new(plane.clone()),
        plane.euclidean_point(&[-1.0, 0.5])?,
        plane.euclidean_point(&[1.0, -0.5])?,
        0.5,
    )?;
    specs.push(ProbeSpec::DensityUnp {
        mu: sym.descriptor(),
        x: PointRepr::Coords(vec![0.0, 0.0]),
        p: 2.0,
        t_grid: (1..=9).map(|k| k as f64 / 10.0).collect(),
    });
    let landmarks = (0..64).map(|k| PointRepr::Scalar(2.0 * PI * k as f64 / 64.0)).collect();
    specs.push(ProbeSpec::DgmNullReach {
        space: circle.clone(),
        embedding: EmbeddingDescriptor { landmarks, c: None },
        x: PointRepr::Scalar(0.0),
        eps: vec![0.5, 0.1],
    });
    specs.push(ProbeSpec::DgmNullReach {
        space: path.clone(),
        embedding: EmbeddingDescriptor { landmarks: (0..11).map(|v| PointRepr::Scalar(v as f64)).collect(), c: None },
        x: PointRepr::Scalar(5.0),
        eps: vec![0.1],
    });
    for gauge in [GaugeDescriptor::Power { p: 2.0 }, GaugeDescriptor::ExpGauge { a: 1.5 }] {
        specs.push(ProbeSpec::OrliczNullReach {
            space: circle.clone(),
            x: PointRepr::Scalar(0.0),
            y: PointRepr::Scalar(PI),
            gauge,
            lambdas: vec![0.75, 0.9, 0.99],
        });
    }
    specs.push(ProbeSpec::Submetry {
        mu: DiscreteMeasure::new(
            Arc::new(plane.clone()),
            vec![
                (plane.euclidean_point(&[0.0, 0.0])?, 0.2),
                (plane.euclidean_point(&[1.0, 2.0])?, 0.5),
                (plane.euclidean_point(&[-1.0, 1.0])?, 0.3),
            ],
        )?
        .descriptor(),
        r: 1.0,
        n_samples: 200,
        seed,
    });
    for space in [plane, sphere] {
        specs.push(ProbeSpec::Convexity {
            space,
            config: ConvexityConfig { p: 2.0, n_triples: 10_000, seed, uniform: None },
        });
    }
    Ok(specs)
}

/// Path graph on `n` vertices with unit spacing `h`.
pub fn path_graph(n: usize, h: f64) -> Result<MetricSpace> {
    MetricSpace::finite_graph(
        (0..n).map(|i| format!("v{i}")).collect(),
        (1..n).map(|v| crate::spaces::Edge { u: v - 1, v, weight: h }).collect(),
    )
}
