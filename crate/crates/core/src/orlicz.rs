//! Orlicz-Wasserstein distance `W_phi` (with `psi = id`) between a Dirac mass
//! and a discrete measure.
//!
//! A Dirac admits a single coupling, so
//! `W_phi(delta_x, mu) = inf { t > 0 : sum_i w_i phi(d(x, y_i) / t) <= 1 }`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::barycenter::{assemble, BarycenterConfig, BarycenterMethod, BarycenterResult, Candidate, Certificate};
use crate::error::{check_exponent, Error, Result};
use crate::optimize::bisect;
use crate::spaces::{MetricSpace, Point, POINT_EPS};
use crate::transport::DiscreteMeasure;

/// Tolerance on `phi(1) = 1`, required for `x -> delta_x` to be isometric.
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// Tolerance on `phi(phi^-1(t)) = t`.
pub const INVERSE_TOL: f64 = 1e-10;

const MAX_DOUBLINGS: usize = 60;
const BISECTION_STEPS: usize = 200;

/// Wire form: `{"family": "power", "p": 2}` or `{"family": "exp_gauge", "a": 1.5}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GaugeDescriptor {
    Power { p: f64 },
    ExpGauge { a: f64 },
}

type GaugeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Gauge {
    Power(f64),
    Exp(f64),
    Custom { name: String, phi: GaugeFn },
}

/// A convex, strictly increasing gauge `phi` with `phi(0) = 0`, `phi(1) = 1`.
#[derive(Clone)]
pub struct OrliczCost {
    gauge: Gauge,
}

impl fmt::Debug for OrliczCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrliczCost({})", self.family())
    }
}

impl OrliczCost {
    /// `phi(t) = t^p`.
    pub fn power(p: f64) -> Result<Self> {
        check_exponent("p", p, 1.0, false).map_err(|e| Error::InvalidGauge(e.to_string()))?;
        Ok(OrliczCost { gauge: Gauge::Power(p) })
    }

    /// `phi(t) = (e^(a t) - 1) / (e^a - 1)`.
    pub fn exp_gauge(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidGauge(format!("exp_gauge needs a > 0, got {a}")));
        }
        Ok(OrliczCost { gauge: Gauge::Exp(a) })
    }

    /// A user gauge; its inverse is computed by bisection. The defining
    /// properties are checked on sample grids.
    pub fn custom(name: &str, phi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let cost = OrliczCost {
            gauge: Gauge::Custom {
                name: name.to_string(),
                phi: Arc::new(phi),
            },
        };
        cost.validate()?;
        Ok(cost)
    }

    pub fn from_descriptor(d: GaugeDescriptor) -> Result<Self> {
        match d {
            GaugeDescriptor::Power { p } => OrliczCost::power(p),
            GaugeDescriptor::ExpGauge { a } => OrliczCost::exp_gauge(a),
        }
    }

    /// `None` for custom gauges, which have no wire form.
    pub fn descriptor(&self) -> Option<GaugeDescriptor> {
        match self.gauge {
            Gauge::Power(p) => Some(GaugeDescriptor::Power { p }),
            Gauge::Exp(a) => Some(GaugeDescriptor::ExpGauge { a }),
            Gauge::Custom { .. } => None,
        }
    }

    pub fn family(&self) -> String {
        match &self.gauge {
            Gauge::Power(p) => format!("power({p})"),
            Gauge::Exp(a) => format!("exp_gauge({a})"),
            Gauge::Custom { name, .. } => format!("custom({name})"),
        }
    }

    pub fn phi(&self, t: f64) -> f64 {
        match &self.gauge {
            Gauge::Power(p) => t.powf(*p),
            Gauge::Exp(a) => (a * t).exp_m1() / a.exp_m1(),
            Gauge::Custom { phi, .. } => phi(t),
        }
    }

    pub fn phi_inverse(&self, t: f64) -> f64 {
        match &self.gauge {
            Gauge::Power(p) => t.powf(1.0 / p),
            Gauge::Exp(a) => (t * a.exp_m1()).ln_1p() / a,
            Gauge::Custom { phi, .. } => {
                if t <= 0.0 {
                    return 0.0;
                }
                let mut hi = 1.0;
                for _ in 0..MAX_DOUBLINGS {
                    if phi(hi) >= t {
                        break;
                    }
                    hi *= 2.0;
                }
                bisect(|s| phi(s) >= t, 0.0, hi, BISECTION_STEPS)
            }
        }
    }

    /// `phi'(t)`; a centered difference for custom gauges.
    pub fn phi_prime(&self, t: f64) -> f64 {
        match &self.gauge {
            Gauge::Power(p) => {
                if *p == 1.0 {
                    1.0
                } else {
                    p * t.powf(p - 1.0)
                }
            }
            Gauge::Exp(a) => a * (a * t).exp() / a.exp_m1(),
            Gauge::Custom { phi, .. } => {
                let h = 1e-6 * t.max(1.0);
                (phi(t + h) - phi((t - h).max(0.0))) / (t + h - (t - h).max(0.0))
            }
        }
    }

    /// Checks normalization, monotonicity, convexity and the inverse on
    /// sample grids.
    pub fn validate(&self) -> Result<()> {
        let one = self.phi(1.0);
        if (one - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidGauge(format!("phi(1) = {one}, expected 1")));
        }
        let grid: Vec<f64> = (0..=400).map(|k| k as f64 * 0.01).collect();
        let vals: Vec<f64> = grid.iter().map(|&t| self.phi(t)).collect();
        if vals[0].abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidGauge(format!("phi(0) = {}, expected 0", vals[0])));
        }
        for k in 1..vals.len() {
            if !(vals[k] > vals[k - 1]) {
                return Err(Error::InvalidGauge(format!("phi not strictly increasing near t = {}", grid[k])));
            }
            if k + 1 < vals.len() && vals[k + 1] - 2.0 * vals[k] + vals[k - 1] < -1e-10 {
                return Err(Error::InvalidGauge(format!("phi not convex near t = {}", grid[k])));
            }
        }
        for k in 1..=100 {
            let t = k as f64 * 0.1;
            let back = self.phi(self.phi_inverse(t));
            if (back - t).abs() > INVERSE_TOL * t.max(1.0) {
                return Err(Error::InvalidGauge(format!("phi(phi^-1({t})) = {back}")));
            }
        }
        Ok(())
    }

    /// Some `t0 > 1` with `phi(t0) != t0`, searched on a log grid over
    /// `(1, 1000]`.
    pub fn non_identity_witness(&self) -> Option<f64> {
        (1..=1000)
            .map(|k| 1000f64.powf(k as f64 / 1000.0))
            .find(|&t| (self.phi(t) - t).abs() > 1e-9 * t)
    }
}

/// `sum_i w_i phi(d_i / t)`.
pub fn orlicz_constraint_sum(dists: &[(f64, f64)], cost: &OrliczCost, t: f64) -> f64 {
    dists.iter().map(|&(d, w)| if d == 0.0 { 0.0 } else { w * cost.phi(d / t) }).sum()
}

/// The scale `t` solving the constraint for distance/weight pairs.
fn gauge_norm(dists: &[(f64, f64)], cost: &OrliczCost) -> Result<f64> {
    let dmax = dists.iter().map(|a| a.0).fold(0.0, f64::max);
    if dmax == 0.0 {
        return Ok(0.0);
    }
    let wmin = dists.iter().map(|a| a.1).fold(f64::INFINITY, f64::min);
    let feasible = |t: f64| orlicz_constraint_sum(dists, cost, t) <= 1.0;
    let mut lo = dmax / cost.phi_inverse(1.0 / wmin);
    let mut hi = dmax / cost.phi_inverse(1.0);
    if !(lo.is_finite() && lo > 0.0) {
        lo = dmax * f64::EPSILON;
    }
    if feasible(lo) {
        // the maximal term alone reaches 1 at lo, so lo is the infimum
        return Ok(lo);
    }
    let mut doublings = 0;
    while !feasible(hi) {
        if doublings == MAX_DOUBLINGS || !hi.is_finite() {
            return Err(Error::BracketNotFound(format!(
                "constraint still above 1 at t = {hi} for gauge {}",
                cost.family()
            )));
        }
        lo = hi;
        hi *= 2.0;
        doublings += 1;
    }
    Ok(bisect(feasible, lo, hi, BISECTION_STEPS))
}

/// `W_phi(delta_x, mu)` by monotone bisection on the scale.
pub fn orlicz_distance_dirac(x: &Point, mu: &DiscreteMeasure, cost: &OrliczCost) -> Result<f64> {
    let s = mu.space();
    s.validate(x)?;
    let dists: Vec<(f64, f64)> = mu.atoms().iter().map(|(y, w)| (s.dist(x, y), *w)).collect();
    gauge_norm(&dists, cost)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::DegenerateMeasure(lambda))
    }
}

/// `W_phi(delta_x, lambda delta_x + (1 - lambda) delta_y) = d / phi^-1(1 / (1 - lambda))`.
pub fn orlicz_two_point_endpoint(lambda: f64, dist_xy: f64, cost: &OrliczCost) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(dist_xy / cost.phi_inverse(1.0 / (1.0 - lambda)))
}

/// Arclength bound `S* = ell (1 / phi^-1(1/(1-lambda)) - (1-lambda)) / (2 lambda - 1)`
/// from the interior-minimizer argument for two-point measures.
///
/// Points of the geodesic at arclength beyond `S*` cannot beat the endpoint
/// `x`. The converse fails in general: for `phi(t) = t^2` the interior beats
/// `x` exactly up to `2 (1 - lambda) ell`, which equals `S*` only at
/// `lambda = 3/4`.
pub fn orlicz_two_point_threshold(lambda: f64, ell: f64, cost: &OrliczCost) -> Result<f64> {
    check_lambda(lambda)?;
    if lambda <= 0.5 {
        return Err(Error::OutOfRegime(format!("threshold needs lambda > 1/2, got {lambda}")));
    }
    let q = 1.0 - lambda;
    Ok(ell * (1.0 / cost.phi_inverse(1.0 / q) - q) / (2.0 * lambda - 1.0))
}

/// Minimizers of `z -> W_phi(delta_z, lambda delta_x + (1 - lambda) delta_y)`,
/// searched along every minimizing geodesic from `x` to `y`.
///
/// Along a geodesic the objective is the gauge norm of the affine pair
/// `(t ell, (1 - t) ell)`, hence convex in `t`; its derivative has the sign of
/// `lambda phi'(t ell / T) - (1 - lambda) phi'((1 - t) ell / T)`, which is
/// bisected.
pub fn orlicz_project_two_point(
    x: &Point,
    y: &Point,
    lambda: f64,
    cost: &OrliczCost,
    space: &Arc<MetricSpace>,
) -> Result<BarycenterResult> {
    check_lambda(lambda)?;
    let paths = space.minimizing_geodesics(x, y)?;
    let mu = DiscreteMeasure::two_point(space.clone(), x.clone(), y.clone(), lambda)?;
    let ell = space.dist(x, y);
    let norm_at = |t: f64| gauge_norm(&[(t * ell, lambda), ((1.0 - t) * ell, 1.0 - lambda)], cost);
    let slope_sign = |t: f64| -> Result<f64> {
        let big_t = norm_at(t)?;
        Ok(lambda * cost.phi_prime(t * ell / big_t) - (1.0 - lambda) * cost.phi_prime((1.0 - t) * ell / big_t))
    };
    // dT/dt = ell * slope_sign / (sum_i w_i phi'(d_i/T) d_i / T)
    let slope = |t: f64| -> Result<f64> {
        let big_t = norm_at(t)?;
        let (a, b) = (t * ell / big_t, (1.0 - t) * ell / big_t);
        let den = lambda * cost.phi_prime(a) * a + (1.0 - lambda) * cost.phi_prime(b) * b;
        Ok(ell * slope_sign(t)? / den)
    };

    let delta = 1e-12;
    let t_star = if slope_sign(delta)? >= 0.0 {
        0.0
    } else if slope_sign(1.0 - delta)? <= 0.0 {
        1.0
    } else {
        let mut err = None;
        let t = bisect(
            |t| match slope_sign(t) {
                Ok(v) => v >= 0.0,
                Err(e) => {
                    err = Some(e);
                    true
                }
            },
            delta,
            1.0 - delta,
            BISECTION_STEPS,
        );
        if let Some(e) = err {
            return Err(e);
        }
        t
    };

    let cfg = BarycenterConfig::default();
    let mut candidates = Vec::new();
    for g in &paths {
        let point = g.at(t_star);
        let certificate = if t_star == 0.0 || t_star == 1.0 {
            Certificate::Boundary
        } else {
            let slope = slope(t_star)?.abs();
            if slope <= cfg.stationarity_tol {
                Certificate::Stationary { slope }
            } else {
                Certificate::Uncertified { slope }
            }
        };
        candidates.push(Candidate {
            fval: orlicz_distance_dirac(&point, &mu, cost)?,
            point,
            certificate,
            local: true,
        });
    }
    Ok(assemble(space, 1.0, &cfg, BarycenterMethod::GridRefine, candidates, Vec::new()))
}

/// Whether `z` is strictly inside the geodesic segment(s) between `x` and `y`.
pub fn is_interior(space: &MetricSpace, x: &Point, y: &Point, z: &Point) -> bool {
    let (dx, dy) = (space.dist(x, z), space.dist(z, y));
    dx > POINT_EPS && dy > POINT_EPS && (dx + dy - space.dist(x, y)).abs() <= 1e-9
}
