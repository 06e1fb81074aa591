//! Sampled-triple checks of midpoint convexity conditions.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{MetricSpace, Point, PointRepr};
use crate::error::{check_exponent, Result};
use crate::report::{ProbeReport, Witness};

/// Slack allowed before an inequality counts as violated.
pub const CONVEXITY_TOL: f64 = 1e-9;

/// A user-supplied uniform-convexity modulus: `rho` is claimed to work for
/// the separation `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformModulus {
    pub eps: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityConfig {
    pub p: f64,
    pub n_triples: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform: Option<UniformModulus>,
}

fn power_mean(a: f64, b: f64, p: f64) -> f64 {
    (0.5 * a.powf(p) + 0.5 * b.powf(p)).powf(1.0 / p)
}

/// Both sides of `d(m(x,y), z) <= (d(x,z)^p / 2 + d(y,z)^p / 2)^(1/p)` for
/// the midpoint on geodesic branch `branch`.
pub fn p_convexity_sides(
    s: &MetricSpace,
    x: &Point,
    y: &Point,
    z: &Point,
    branch: usize,
    p: f64,
) -> Result<(f64, f64)> {
    let m = s.midpoint(x, y, branch)?;
    Ok((s.dist(&m, z), power_mean(s.dist(x, z), s.dist(y, z), p)))
}

/// Both sides of the Busemann condition `d(m(x,z), m(x,y)) <= d(z,y) / 2`.
pub fn busemann_sides(
    s: &MetricSpace,
    x: &Point,
    y: &Point,
    z: &Point,
    branch_xz: usize,
    branch_xy: usize,
) -> Result<(f64, f64)> {
    let mxz = s.midpoint(x, z, branch_xz)?;
    let mxy = s.midpoint(x, y, branch_xy)?;
    Ok((s.dist(&mxz, &mxy), 0.5 * s.dist(z, y)))
}

/// Samples triples and checks p-convexity and the Busemann condition for
/// every midpoint branch.
pub fn convexity_probe(s: &MetricSpace, p: f64, n_triples: usize, seed: u64) -> Result<ProbeReport> {
    convexity_probe_with(
        s,
        &ConvexityConfig {
            p,
            n_triples,
            seed,
            uniform: None,
        },
    )
}

struct Worst {
    excess: f64,
    points: [Point; 3],
    lhs: f64,
    rhs: f64,
}

fn track(worst: &mut Option<Worst>, excess: f64, points: [&Point; 3], lhs: f64, rhs: f64) {
    if worst.as_ref().is_none_or(|w| excess > w.excess) {
        *worst = Some(Worst {
            excess,
            points: [points[0].clone(), points[1].clone(), points[2].clone()],
            lhs,
            rhs,
        });
    }
}

pub fn convexity_probe_with(s: &MetricSpace, cfg: &ConvexityConfig) -> Result<ProbeReport> {
    check_exponent("p", cfg.p, 1.0, false)?;
    let mut report = ProbeReport::new("convexity", Some(s.clone()));
    report.set_param("p", cfg.p);
    report.set_param("n_triples", cfg.n_triples);
    report.set_param("seed", cfg.seed);
    if let Some(u) = cfg.uniform {
        report.set_param("uniform_eps", u.eps);
        report.set_param("uniform_rho", u.rho);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst_convex = None;
    let mut worst_busemann = None;
    let mut worst_uniform = None;
    for _ in 0..cfg.n_triples {
        let x = s.sample(&mut rng);
        let y = s.sample(&mut rng);
        let z = s.sample(&mut rng);
        let (dxz, dyz) = (s.dist(&x, &z), s.dist(&y, &z));
        let rhs = power_mean(dxz, dyz, cfg.p);
        for m in s.midpoints(&x, &y)? {
            let lhs = s.dist(&m, &z);
            report.record("p_convexity", lhs - rhs, CONVEXITY_TOL);
            track(&mut worst_convex, lhs - rhs, [&x, &y, &z], lhs, rhs);

            if let Some(u) = cfg.uniform {
                let dxy = s.dist(&x, &y);
                let separated = if cfg.p > 1.0 {
                    dxy > u.eps * rhs
                } else {
                    dxy > (dxz - dyz).abs() + u.eps * rhs
                };
                if separated {
                    let bound = (1.0 - u.rho) * rhs;
                    report.record("uniform_convexity", lhs - bound, CONVEXITY_TOL);
                    track(&mut worst_uniform, lhs - bound, [&x, &y, &z], lhs, bound);
                }
            }
        }
        let half_zy = 0.5 * s.dist(&z, &y);
        for mxz in s.midpoints(&x, &z)? {
            for mxy in s.midpoints(&x, &y)? {
                let lhs = s.dist(&mxz, &mxy);
                report.record("busemann", lhs - half_zy, CONVEXITY_TOL);
                track(&mut worst_busemann, lhs - half_zy, [&x, &y, &z], lhs, half_zy);
            }
        }
    }
    for (label, worst) in [
        ("worst_p_convexity", worst_convex),
        ("worst_busemann", worst_busemann),
        ("worst_uniform_convexity", worst_uniform),
    ] {
        if let Some(w) = worst {
            report.witnesses.push(Witness {
                label: label.into(),
                points: w.points.iter().map(PointRepr::from).collect(),
                values: BTreeMap::from([
                    ("lhs".to_string(), w.lhs),
                    ("rhs".to_string(), w.rhs),
                    ("slack".to_string(), w.rhs - w.lhs),
                ]),
                ..Witness::default()
            });
        }
    }
    report.finalize();
    Ok(report)
}
