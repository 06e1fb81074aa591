//! Probe reports: serialization, replay and re-evaluation of witnesses.

use std::sync::Arc;

use reachlab::probes::{acceptance_battery, replay, run_probe, ProbeSpec};
use reachlab::transport::{dirac_to_measure_cost, wasserstein_p};
use reachlab::{DiscreteMeasure, PointRepr, ProbeReport, Verdict};

fn battery_reports() -> Vec<ProbeReport> {
    acceptance_battery(11)
        .unwrap()
        .iter()
        .map(|s| run_probe(s).unwrap())
        .collect()
}

#[test]
fn battery_reports_round_trip_and_replay() {
    for r in battery_reports() {
        let json = serde_json::to_string(&r).unwrap();
        let back: ProbeReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r, "{}", r.probe);
        let again = replay(&back).unwrap();
        assert_eq!(again, r, "{} replay differs", r.probe);
        assert_eq!(serde_json::to_string(&again).unwrap(), json);
    }
}

#[test]
fn battery_verdicts() {
    for r in battery_reports() {
        let sphere_convexity = r.probe == "convexity" && r.space.as_ref().is_some_and(|s| s.kind() == "sphere2");
        let expected = if sphere_convexity { Verdict::Violated } else { Verdict::Confirmed };
        assert_eq!(r.verdict, expected, "{}: {:?}", r.probe, r.checks);
    }
}

#[test]
fn witnesses_reevaluate() {
    let mut seen = 0;
    for r in battery_reports() {
        let p = match r.probe.as_str() {
            "w1-null-reach" => 1.0,
            "multi-geodesic-null-reach" | "density-unp" => r.parameters["p"].as_f64().unwrap(),
            _ => continue,
        };
        let space = Arc::new(r.space.clone().unwrap());
        for w in &r.witnesses {
            let Some(desc) = &w.measure else { continue };
            let mu = DiscreteMeasure::from_descriptor(desc, Some(space.clone())).unwrap();
            let s = mu.space_arc().clone();
            for m in &w.minimizers {
                let z = s.point_from_repr(&m.point).unwrap();
                let v = dirac_to_measure_cost(&z, &mu, p).unwrap();
                assert!((v - m.value).abs() <= 1e-12, "{} {}: {v} vs {}", r.probe, w.label, m.value);
                seen += 1;
            }
            if r.probe == "w1-null-reach" {
                let x = s.point_from_repr(&w.points[0]).unwrap();
                let y = s.point_from_repr(&w.points[1]).unwrap();
                assert!((s.distance(&x, &y).unwrap() - w.values["d_xy"]).abs() <= 1e-12);
                let dx = DiscreteMeasure::dirac(s.clone(), x).unwrap();
                let (w1, _) = wasserstein_p(&dx, &mu, 1.0).unwrap();
                assert!((w1 - w.values["w1"]).abs() <= 1e-12);
                assert!((w1 - 0.5 * w.values["d_xy"]).abs() <= 1e-12);
            }
            if r.probe == "multi-geodesic-null-reach" {
                let x: PointRepr = serde_json::from_value(r.parameters["x"].clone()).unwrap();
                let x = s.point_from_repr(&x).unwrap();
                let dx = DiscreteMeasure::dirac(s.clone(), x).unwrap();
                let (wp, _) = wasserstein_p(&mu, &dx, p).unwrap();
                assert!((wp - w.values["endpoint_distance"]).abs() <= 1e-12);
            }
        }
    }
    assert!(seen > 20);
}

#[test]
fn spec_names_match_reports() {
    for spec in acceptance_battery(3).unwrap() {
        if let ProbeSpec::UniqueBarycenters { .. } | ProbeSpec::Convexity { .. } = spec {
            continue;
        }
        assert_eq!(run_probe(&spec).unwrap().probe, spec.name());
    }
}
