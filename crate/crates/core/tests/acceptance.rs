//! Acceptance battery: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reachlab::barycenter::{submetry_check, two_point_min_value, two_point_t0};
use reachlab::diagrams::{
    bottleneck, embed, matching_cost, midpoint_diagram, wasserstein_diagram, EmbeddingSpec, PartialMatching,
    PersistenceDiagram,
};
use reachlab::orlicz::{orlicz_distance_dirac, orlicz_two_point_endpoint, orlicz_two_point_threshold, OrliczCost};
use reachlab::probes::{
    path_graph, probe_dgm_null_reach, probe_multi_geodesic_null_reach, probe_unique_barycenters,
    probe_w1_null_reach,
};
use reachlab::spaces::{convexity_probe, Edge};
use reachlab::transport::dirac_to_measure_cost;
use reachlab::{DiscreteMeasure, MetricSpace, Point, ProbeReport, Verdict};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn confirmed(r: &ProbeReport) -> Result<(), String> {
    ensure(r.verdict == Verdict::Confirmed, || {
        let bad: Vec<String> = r
            .checks
            .iter()
            .filter(|c| c.failed + c.marginal > 0)
            .map(|c| format!("{} worst excess {:e}", c.name, c.worst_excess))
            .collect();
        format!("{} on {:?}: {} ({}; notes {:?})", r.probe, r.space, r.verdict, bad.join(", "), r.notes)
    })
}

/// Argmin of `lambda t^p + (1 - lambda)(1 - t)^p` by bisection on the sign of
/// its (increasing) derivative.
fn numeric_t0(lambda: f64, p: f64) -> f64 {
    let df = |t: f64| lambda * t.powf(p - 1.0) - (1.0 - lambda) * (1.0 - t).powf(p - 1.0);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if df(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst_t: f64 = 0.0;
    let mut worst_branch: f64 = 0.0;
    let circle = Arc::new(MetricSpace::circle(1.0).map_err(|e| e.to_string())?);
    let (x, y) = (circle.circle_point(0.0).unwrap(), circle.circle_point(PI).unwrap());
    let paths = circle.minimizing_geodesics(&x, &y).map_err(|e| e.to_string())?;
    ensure(paths.len() == 2, || format!("expected 2 antipodal geodesics, got {}", paths.len()))?;
    for k in 0..1000 {
        let lambda = loop {
            let l: f64 = rng.random_range(0.0..1.0);
            if l > 0.0 {
                break l;
            }
        };
        let p = 5.0 - 4.0 * rng.random_range(0.0..1.0);
        let t0 = two_point_t0(lambda, p).map_err(|e| e.to_string())?;
        let err = (t0 - numeric_t0(lambda, p)).abs();
        worst_t = worst_t.max(err);
        ensure(err <= 1e-8, || format!("t0 off by {err:e} at lambda {lambda}, p {p}"))?;
        if k % 5 == 0 {
            let mu = DiscreteMeasure::two_point(circle.clone(), x.clone(), y.clone(), lambda).unwrap();
            let tn = numeric_t0(lambda, p);
            let vals: Vec<f64> = paths
                .iter()
                .map(|g| dirac_to_measure_cost(&g.at(tn), &mu, p).unwrap())
                .collect();
            let closed = two_point_min_value(lambda, p, PI).unwrap();
            let spread = (vals[0] - vals[1]).abs().max((vals[0] - closed).abs());
            worst_branch = worst_branch.max(spread);
            ensure(spread <= 1e-9, || format!("branch values {vals:?} vs {closed} at lambda {lambda}, p {p}"))?;
        }
    }
    Ok(format!("1000 (lambda, p): max |t0 - argmin| {worst_t:.1e}; 200 circle pairs: branch spread {worst_branch:.1e}"))
}

fn criterion_2() -> Outcome {
    let eps = [1.0, 0.1, 0.01];
    let line = Arc::new(MetricSpace::euclidean(1).unwrap());
    let circle = Arc::new(MetricSpace::circle(1.0).unwrap());
    let path = Arc::new(path_graph(11, 0.05).unwrap());
    let cases = [
        (line.clone(), line.euclidean_point(&[0.0]).unwrap()),
        (circle.clone(), circle.circle_point(0.0).unwrap()),
        (path.clone(), path.vertex(5).unwrap()),
    ];
    let mut realized = Vec::new();
    for (s, x) in &cases {
        let r = probe_w1_null_reach(s, x, &eps).map_err(|e| e.to_string())?;
        confirmed(&r)?;
        realized.push(format!("{} {}/3", s.kind(), r.witnesses.len()));
    }
    Ok(format!("eps realized: {}", realized.join(", ")))
}

fn criterion_3() -> Outcome {
    let lambdas = [0.5, 0.9, 0.99];
    let circle = Arc::new(MetricSpace::circle(1.0).unwrap());
    let sphere = Arc::new(MetricSpace::sphere2(1.0).unwrap());
    let mut pairs: Vec<(Arc<MetricSpace>, Point, Point)> = [0.0, 1.0, 4.5]
        .iter()
        .map(|&a| (circle.clone(), circle.circle_point(a).unwrap(), circle.circle_point(a + PI).unwrap()))
        .collect();
    pairs.push((sphere.clone(), sphere.sphere_point([0.0, 0.0, 1.0]).unwrap(), sphere.sphere_point([0.0, 0.0, -1.0]).unwrap()));
    let mut n = 0;
    let mut worst: f64 = 0.0;
    for (s, x, y) in &pairs {
        for p in [2.0, 3.0] {
            let r = probe_multi_geodesic_null_reach(s, x, y, p, &lambdas).map_err(|e| e.to_string())?;
            confirmed(&r)?;
            let d = s.distance(x, y).unwrap();
            for w in &r.witnesses {
                let l = w.values["lambda"];
                let err = (w.values["endpoint_distance"] - (1.0 - l).powf(1.0 / p) * d).abs();
                worst = worst.max(err);
                ensure(err <= 1e-9, || format!("W_p(mu, delta_x) off by {err:e}"))?;
                ensure(w.values["multiplicity"] >= 2.0, || "single barycenter cluster".into())?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} probes confirmed; max closed-form error {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let plane = Arc::new(MetricSpace::euclidean(2).unwrap());
    let mut parts = Vec::new();
    for (k, p) in [1.5, 2.0, 3.0].into_iter().enumerate() {
        let r = probe_unique_barycenters(&plane, p, 1000, 400 + k as u64).map_err(|e| e.to_string())?;
        confirmed(&r)?;
        let u = r.check("unique").ok_or("missing uniqueness check")?;
        ensure(u.passed == 1000, || format!("p {p}: {} of 1000 unique", u.passed))?;
        if p == 2.0 {
            let m = r.check("equals_weighted_mean").ok_or("missing mean check")?;
            ensure(m.worst_excess <= 1e-9, || format!("mean off by {:e}", m.worst_excess))?;
            parts.push(format!("p=2 mean error {:.1e}", m.worst_excess.max(0.0)));
        }
    }
    Ok(format!("3 x 1000 measures unique; {}", parts.join("")))
}

fn criterion_5() -> Outcome {
    let plane = Arc::new(MetricSpace::euclidean(2).unwrap());
    let pt = |x: f64, y: f64| plane.euclidean_point(&[x, y]).unwrap();
    let mu = DiscreteMeasure::new(
        plane.clone(),
        vec![(pt(0.0, 0.0), 0.2), (pt(1.0, 2.0), 0.5), (pt(-1.0, 1.0), 0.2), (pt(3.0, -0.5), 0.1)],
    )
    .unwrap();
    let r = submetry_check(&mu, 1.0, 200, 505).map_err(|e| e.to_string())?;
    confirmed(&r)?;
    let mut worst = f64::NEG_INFINITY;
    for name in ["lipschitz", "translation_cost", "translation_projection"] {
        let c = r.check(name).ok_or_else(|| format!("missing check {name}"))?;
        ensure(c.evaluated == 200, || format!("{name}: {} evaluations", c.evaluated))?;
        ensure(c.worst_excess <= 1e-8, || format!("{name}: excess {:e}", c.worst_excess))?;
        worst = worst.max(c.worst_excess);
    }
    Ok(format!("200 Lipschitz + 200 translation checks; worst excess {worst:.1e}"))
}

fn random_measure(s: &Arc<MetricSpace>, rng: &mut ChaCha8Rng, max_atoms: usize) -> DiscreteMeasure {
    let n = rng.random_range(1..=max_atoms);
    let raw: Vec<(Point, f64)> = (0..n).map(|_| (s.sample(rng), rng.random_range(0.05..1.0))).collect();
    let total: f64 = raw.iter().map(|a| a.1).sum();
    DiscreteMeasure::new(s.clone(), raw.into_iter().map(|(x, w)| (x, w / total)).collect()).unwrap()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let spaces = [
        Arc::new(MetricSpace::euclidean(2).unwrap()),
        Arc::new(MetricSpace::circle(1.0).unwrap()),
        Arc::new(MetricSpace::sphere2(1.0).unwrap()),
    ];
    let mut worst_power: f64 = 0.0;
    for k in 0..1000 {
        let s = &spaces[k % 3];
        let mu = random_measure(s, &mut rng, 5);
        let x = s.sample(&mut rng);
        let p = rng.random_range(1.0..4.0);
        let wt = orlicz_distance_dirac(&x, &mu, &OrliczCost::power(p).unwrap()).map_err(|e| e.to_string())?;
        let wp = dirac_to_measure_cost(&x, &mu, p).unwrap();
        let err = (wt - wp).abs();
        worst_power = worst_power.max(err);
        ensure(err <= 1e-9, || format!("power({p}) gauge {wt} vs W_p {wp}"))?;
    }

    let line = Arc::new(MetricSpace::euclidean(1).unwrap());
    let mut worst_endpoint: f64 = 0.0;
    for k in 0..200 {
        let cost = if k % 2 == 0 {
            OrliczCost::power(rng.random_range(1.0..4.0)).unwrap()
        } else {
            OrliczCost::exp_gauge(rng.random_range(0.2..3.0)).unwrap()
        };
        let lambda = rng.random_range(0.01..0.999);
        let d = rng.random_range(0.1..5.0);
        let (x, y) = (line.euclidean_point(&[0.0]).unwrap(), line.euclidean_point(&[d]).unwrap());
        let mu = DiscreteMeasure::two_point(line.clone(), x.clone(), y, lambda).unwrap();
        let formula = orlicz_two_point_endpoint(lambda, d, &cost).unwrap();
        let bisected = orlicz_distance_dirac(&x, &mu, &cost).unwrap();
        let err = (formula - bisected).abs();
        worst_endpoint = worst_endpoint.max(err);
        ensure(err <= 1e-10, || format!("{cost:?} lambda {lambda} d {d}: {formula} vs {bisected}"))?;
    }

    // S* at lambda = 3/4 for power(2) on a unit segment
    let cost = OrliczCost::power(2.0).unwrap();
    let s_star = orlicz_two_point_threshold(0.75, 1.0, &cost).unwrap();
    ensure((s_star - 0.5).abs() <= 1e-12, || format!("S* = {s_star}, expected 0.5"))?;
    let (x, y) = (line.euclidean_point(&[0.0]).unwrap(), line.euclidean_point(&[1.0]).unwrap());
    let mu = DiscreteMeasure::two_point(line.clone(), x.clone(), y.clone(), 0.75).unwrap();
    let at = |s: f64| orlicz_distance_dirac(&line.euclidean_point(&[s]).unwrap(), &mu, &cost).unwrap();
    let endpoints = at(0.0).min(at(1.0));
    let inside = at(0.99 * s_star);
    ensure(inside <= endpoints + 1e-9, || format!("gamma(0.99 S*) = {inside} vs endpoints {endpoints}"))?;
    ensure(inside < endpoints, || "interior point does not strictly beat the endpoints".into())?;
    Ok(format!(
        "power gauge = W_p max err {worst_power:.1e} (1000); endpoint formula max err {worst_endpoint:.1e} (200); \
         S* = {s_star}, interior margin {:.1e}",
        endpoints - inside
    ))
}

fn random_diagram(rng: &mut ChaCha8Rng, max_len: usize) -> PersistenceDiagram {
    let n = rng.random_range(0..=max_len);
    let pts = (0..n)
        .map(|_| {
            if rng.random_bool(0.5) {
                // lattice points make ties frequent
                let b = rng.random_range(0..6) as f64 * 0.5;
                (b, b + rng.random_range(1..6) as f64 * 0.25)
            } else {
                let b = rng.random_range(0.0..3.0);
                (b, b + rng.random_range(0.01..2.0))
            }
        })
        .collect();
    PersistenceDiagram::new(pts).unwrap()
}

fn brute_force(d1: &PersistenceDiagram, d2: &PersistenceDiagram, p: f64) -> f64 {
    fn go(
        i: usize,
        d1: &PersistenceDiagram,
        d2: &PersistenceDiagram,
        p: f64,
        used: &mut Vec<bool>,
        pairs: &mut Vec<(usize, usize)>,
        best: &mut f64,
    ) {
        if i == d1.len() {
            let m = PartialMatching::from_pairs(pairs.clone(), d1.len(), d2.len());
            *best = best.min(matching_cost(d1, d2, &m, p).unwrap());
            return;
        }
        go(i + 1, d1, d2, p, used, pairs, best);
        for j in 0..d2.len() {
            if !used[j] {
                used[j] = true;
                pairs.push((i, j));
                go(i + 1, d1, d2, p, used, pairs, best);
                pairs.pop();
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(0, d1, d2, p, &mut vec![false; d2.len()], &mut Vec::new(), &mut best);
    best
}

fn random_graph(rng: &mut ChaCha8Rng) -> Arc<MetricSpace> {
    let n = rng.random_range(3..9);
    let mut edges: Vec<Edge> = (1..n)
        .map(|v| Edge { u: rng.random_range(0..v), v, weight: rng.random_range(0.1..2.0) })
        .collect();
    for _ in 0..rng.random_range(0..5) {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        if u != v {
            edges.push(Edge { u, v, weight: rng.random_range(0.1..2.0) });
        }
    }
    Arc::new(MetricSpace::finite_graph((0..n).map(|i| format!("v{i}")).collect(), edges).unwrap())
}

/// Both projections of the midpoint diagram sit at `d/2` and no landmark is
/// closer; returns the largest deviation.
fn midpoint_witness(spec: &EmbeddingSpec, x: &Point, y: &Point) -> Result<f64, String> {
    let d = spec.space().distance(x, y).unwrap();
    let mid = midpoint_diagram(x, y, spec).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for z in [x, y] {
        let w = bottleneck(&embed(z, spec).unwrap(), &mid).0;
        worst = worst.max((w - 0.5 * d).abs());
        ensure(w <= 0.5 * d + 1e-9, || format!("projection at {w}, expected {}", 0.5 * d))?;
    }
    for z in spec.landmarks() {
        let w = bottleneck(&embed(z, spec).unwrap(), &mid).0;
        worst = worst.max(0.5 * d - w);
    }
    ensure(worst <= 1e-12, || format!("midpoint witness deviates by {worst:e}"))?;
    Ok(worst)
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut worst_bn: f64 = 0.0;
    let mut worst_wp: f64 = 0.0;
    for k in 0..1000 {
        let a = random_diagram(&mut rng, 5);
        let b = random_diagram(&mut rng, 5);
        let (v, m) = bottleneck(&a, &b);
        m.validate(a.len(), b.len()).map_err(|e| e.to_string())?;
        let bf = brute_force(&a, &b, f64::INFINITY);
        worst_bn = worst_bn.max((v - bf).abs());
        ensure((v - bf).abs() <= 1e-12, || format!("bottleneck {v} vs brute force {bf}"))?;
        let p = [1.0, 2.0, 3.0, 1.5][k % 4];
        let (v, _) = wasserstein_diagram(&a, &b, p).map_err(|e| e.to_string())?;
        let bf = brute_force(&a, &b, p);
        let err = (v - bf).abs() / bf.max(1.0);
        worst_wp = worst_wp.max(err);
        ensure(err <= 1e-12, || format!("w_{p} {v} vs brute force {bf}"))?;
    }

    let mut worst_iso: f64 = 0.0;
    let mut worst_mid: f64 = 0.0;
    for _ in 0..20 {
        let s = random_graph(&mut rng);
        let n = s.graph().unwrap().n_vertices();
        let verts: Vec<Point> = (0..n).map(|v| s.vertex(v).unwrap()).collect();
        let spec = EmbeddingSpec::new(s.clone(), verts.clone(), None).map_err(|e| e.to_string())?;
        let emb: Vec<PersistenceDiagram> = verts.iter().map(|x| embed(x, &spec).unwrap()).collect();
        for i in 0..n {
            for j in 0..n {
                let (w, m) = bottleneck(&emb[i], &emb[j]);
                let err = (w - s.distance(&verts[i], &verts[j]).unwrap()).abs();
                worst_iso = worst_iso.max(err);
                ensure(err <= 1e-12, || format!("embedding distorts a graph distance by {err:e}"))?;
                let same = m.pairs.len() == n
                    && m.pairs.iter().all(|&(a, b)| emb[i].points()[a].0 == emb[j].points()[b].0);
                ensure(same, || "optimal matching crosses vertical lines".into())?;
                if i < j {
                    worst_mid = worst_mid.max(midpoint_witness(&spec, &verts[i], &verts[j])?);
                }
            }
        }
        let r = probe_dgm_null_reach(&spec, &verts[0], &[2.0]).map_err(|e| e.to_string())?;
        if r.verdict != Verdict::Inconclusive {
            confirmed(&r)?;
        }
    }

    let circle = Arc::new(MetricSpace::circle(1.0).unwrap());
    let lm: Vec<Point> = (0..64).map(|k| circle.circle_point(2.0 * PI * k as f64 / 64.0).unwrap()).collect();
    let spec = EmbeddingSpec::new(circle.clone(), lm.clone(), None).map_err(|e| e.to_string())?;
    for (i, j) in [(0, 32), (0, 1), (5, 17), (10, 40)] {
        worst_mid = worst_mid.max(midpoint_witness(&spec, &lm[i], &lm[j])?);
    }
    let r = probe_dgm_null_reach(&spec, &lm[0], &[0.5, 0.1]).map_err(|e| e.to_string())?;
    confirmed(&r)?;
    Ok(format!(
        "1000 pairs: bottleneck err {worst_bn:.1e}, w_p rel err {worst_wp:.1e}; isometry err {worst_iso:.1e}; \
         midpoint witness err {worst_mid:.1e}"
    ))
}

fn criterion_8() -> Outcome {
    let plane = MetricSpace::euclidean(2).unwrap();
    let r = convexity_probe(&plane, 2.0, 10_000, 808).map_err(|e| e.to_string())?;
    confirmed(&r)?;
    for name in ["p_convexity", "busemann"] {
        let c = r.check(name).ok_or_else(|| format!("missing check {name}"))?;
        ensure(c.evaluated >= 10_000 && c.failed == 0, || format!("{name}: {c:?}"))?;
    }
    let sphere = MetricSpace::sphere2(1.0).unwrap();
    let r = convexity_probe(&sphere, 2.0, 10_000, 808).map_err(|e| e.to_string())?;
    let violations: usize = r.checks.iter().map(|c| c.failed).sum();
    ensure(violations > 0, || "no violation recorded on the sphere".into())?;
    ensure(!r.witnesses.is_empty(), || "violations recorded without a witness".into())?;
    Ok(format!(
        "plane: 2 x 10^4 triples clean; sphere: {violations} violations, verdict {}, {} witness(es)",
        r.verdict,
        r.witnesses.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("closed-form t0 and branch agreement", criterion_1),
        ("W1 null reach", criterion_2),
        ("multi-geodesic null reach", criterion_3),
        ("unique Euclidean barycenters", criterion_4),
        ("proj_2 submetry", criterion_5),
        ("Orlicz consistency and threshold", criterion_6),
        ("diagram matching, embedding and midpoint witness", criterion_7),
        ("convexity probes", criterion_8),
    ];
    let start = Instant::now();
    let results: Vec<(Outcome, f64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                scope.spawn(move || {
                    let t = Instant::now();
                    let out = std::panic::catch_unwind(f).unwrap_or_else(|e| {
                        let msg = e
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_default();
                        Err(format!("panicked: {msg}"))
                    });
                    (out, t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread")).collect()
    });
    let mut failed = 0;
    for (k, ((name, _), (out, secs))) in criteria.iter().zip(&results).enumerate() {
        match out {
            Ok(detail) => println!("criterion {}: PASS  {name} ({secs:.1}s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.1}s): {detail}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
