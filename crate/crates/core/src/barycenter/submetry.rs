//! The order-2 projection on Euclidean space as a submetry: balls around a
//! measure map onto balls around its barycenter.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{project, BarycenterConfig};
use crate::error::{Error, Result};
use crate::report::{ProbeReport, Witness};
use crate::spaces::{MetricSpace, Point, PointRepr};
use crate::transport::{wasserstein_p, DiscreteMeasure};

pub const LIPSCHITZ_TOL: f64 = 1e-8;
pub const TRANSLATION_COST_TOL: f64 = 1e-10;
pub const TRANSLATION_PROJ_TOL: f64 = 1e-8;

const HISTOGRAM_EDGES: [f64; 6] = [1e-12, 1e-9, 1e-6, 1e-3, 1e-1, f64::INFINITY];

/// Pushforward of `mu` under `x -> x + v`.
pub fn translate(mu: &DiscreteMeasure, v: &[f64]) -> Result<DiscreteMeasure> {
    let atoms = mu
        .atoms()
        .iter()
        .map(|(x, w)| match x {
            Point::Euclidean(c) if c.len() == v.len() => {
                Ok((Point::Euclidean(c.iter().zip(v).map(|(a, b)| a + b).collect()), *w))
            }
            _ => Err(Error::Unsupported("translation needs Euclidean atoms of matching dimension".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    DiscreteMeasure::new(mu.space_arc().clone(), atoms)
}

fn random_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// A random measure near `mu`: atoms moved by at most `r`, some split.
fn perturb(mu: &DiscreteMeasure, r: f64, rng: &mut ChaCha8Rng) -> Result<DiscreteMeasure> {
    let dim = mu.space().intrinsic_dim();
    let mut atoms = Vec::new();
    for (x, w) in mu.atoms() {
        let pieces = if rng.random_bool(0.3) { 2 } else { 1 };
        let split = if pieces == 2 { rng.random_range(0.2..0.8) } else { 1.0 };
        for k in 0..pieces {
            let dir = random_direction(rng, dim);
            let len = r * rng.random_range(0.0f64..1.0);
            let c: Vec<f64> = x.coords().iter().zip(&dir).map(|(a, d)| a + len * d).collect();
            let share = if k == 0 { split } else { 1.0 - split };
            atoms.push((Point::Euclidean(c), w * share));
        }
    }
    DiscreteMeasure::new(mu.space_arc().clone(), atoms)
}

fn mean_of(mu: &DiscreteMeasure) -> Result<Point> {
    let r = project(mu, 2.0, &BarycenterConfig::default())?;
    Ok(r.minimizers[0].point.clone())
}

/// Samples the two halves of the submetry property for `proj_2` around
/// `mu`: 1-Lipschitz on the ball of radius `r`, and surjectivity onto the
/// ball around the barycenter via translated copies of `mu`.
pub fn submetry_check(mu: &DiscreteMeasure, r: f64, n_samples: usize, seed: u64) -> Result<ProbeReport> {
    let MetricSpace::Euclidean { dim } = *mu.space() else {
        return Err(Error::Unsupported(format!(
            "submetry check needs a Euclidean space, got {}",
            mu.space().kind()
        )));
    };
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidParameter {
            name: "r",
            reason: format!("must be positive, got {r}"),
        });
    }
    let mut report = ProbeReport::new("submetry", Some(mu.space().clone()));
    report.set_param("p", 2.0);
    report.set_param("r", r);
    report.set_param("n_samples", n_samples);
    report.set_param("seed", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s: &Arc<MetricSpace> = mu.space_arc();
    let center = mean_of(mu)?;
    let center_c = center.coords();

    let mut histogram = [0usize; HISTOGRAM_EDGES.len()];
    let mut drawn = 0;
    let mut attempts = 0;
    while drawn < n_samples && attempts < 20 * n_samples + 100 {
        attempts += 1;
        let nu = perturb(mu, r, &mut rng)?;
        let (w, _) = wasserstein_p(mu, &nu, 2.0)?;
        if w > r {
            continue;
        }
        drawn += 1;
        let d = s.dist(&center, &mean_of(&nu)?);
        report.record("lipschitz", d - w, LIPSCHITZ_TOL);
        let slack = w - d;
        let bin = HISTOGRAM_EDGES.iter().position(|&e| slack < e).unwrap_or(HISTOGRAM_EDGES.len() - 1);
        histogram[bin] += 1;
    }
    if drawn < n_samples {
        report.precondition_failed(format!("only {drawn} of {n_samples} measures drawn inside the ball"));
    }

    let mut worst_translation: Option<(f64, Point)> = None;
    for _ in 0..n_samples {
        let dir = random_direction(&mut rng, dim);
        let len = r * rng.random_range(0.0f64..1.0);
        let v: Vec<f64> = dir.iter().map(|d| len * d).collect();
        let b = Point::Euclidean(center_c.iter().zip(&v).map(|(c, d)| c + d).collect());
        let moved = translate(mu, &v)?;
        let (w, _) = wasserstein_p(mu, &moved, 2.0)?;
        let target = s.dist(&center, &b);
        report.record("translation_cost", w - target, TRANSLATION_COST_TOL);
        let miss = s.dist(&mean_of(&moved)?, &b);
        report.record("translation_projection", miss, TRANSLATION_PROJ_TOL);
        if worst_translation.as_ref().is_none_or(|(m, _)| miss > *m) {
            worst_translation = Some((miss, b));
        }
    }

    let mut values = BTreeMap::new();
    for (k, count) in histogram.iter().enumerate() {
        values.insert(format!("slack_below_{:e}", HISTOGRAM_EDGES[k]), *count as f64);
    }
    report.witnesses.push(Witness {
        label: "lipschitz_slack_histogram".into(),
        measure: Some(mu.descriptor()),
        points: vec![PointRepr::from(&center)],
        values,
        ..Witness::default()
    });
    if let Some((miss, b)) = worst_translation {
        report.witnesses.push(Witness {
            label: "worst_translation".into(),
            points: vec![PointRepr::from(&b)],
            values: BTreeMap::from([("projection_miss".to_string(), miss)]),
            ..Witness::default()
        });
    }
    report.finalize();
    Ok(report)
}
