//! Shifted Kuratowski embedding: landmark `k` contributes the point
//! `(2c(k-1), 2ck + d(x, x_k))`, one per vertical line.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::PersistenceDiagram;
use crate::error::{Error, Result};
use crate::spaces::{MetricSpace, Point, PointRepr, POINT_EPS};

/// Wire form: `{"landmarks": [...], "c": 5.0}` with `c` optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingDescriptor {
    pub landmarks: Vec<PointRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSpec {
    space: Arc<MetricSpace>,
    landmarks: Vec<Point>,
    c: f64,
}

impl EmbeddingSpec {
    /// Without `c`, uses `2 diam(landmarks) + 1`, raised to
    /// `2 diam(space) + 1` if that would not exceed a bounded space's diameter.
    pub fn new(space: Arc<MetricSpace>, landmarks: Vec<Point>, c: Option<f64>) -> Result<Self> {
        if landmarks.is_empty() {
            return Err(Error::InvalidEmbedding("at least one landmark is required".into()));
        }
        for x in &landmarks {
            space.validate(x)?;
        }
        let mut diam: f64 = 0.0;
        for (i, a) in landmarks.iter().enumerate() {
            for (j, b) in landmarks.iter().enumerate().skip(i + 1) {
                let d = space.dist(a, b);
                if d <= POINT_EPS {
                    return Err(Error::InvalidEmbedding(format!("landmarks {i} and {j} coincide")));
                }
                diam = diam.max(d);
            }
        }
        let space_diam = space.diameter();
        let c = match c {
            Some(c) => {
                if !(c.is_finite() && c > diam) {
                    return Err(Error::InvalidEmbedding(format!(
                        "c = {c} must exceed the landmark diameter {diam}"
                    )));
                }
                if let Some(sd) = space_diam.filter(|&sd| c <= sd) {
                    return Err(Error::InvalidEmbedding(format!("c = {c} must exceed the space diameter {sd}")));
                }
                c
            }
            None => {
                let c = 2.0 * diam + 1.0;
                match space_diam {
                    Some(sd) if c <= sd => 2.0 * sd + 1.0,
                    _ => c,
                }
            }
        };
        Ok(EmbeddingSpec { space, landmarks, c })
    }

    pub fn from_descriptor(d: &EmbeddingDescriptor, space: Arc<MetricSpace>) -> Result<Self> {
        let landmarks = d
            .landmarks
            .iter()
            .map(|r| space.point_from_repr(r))
            .collect::<Result<Vec<_>>>()?;
        EmbeddingSpec::new(space, landmarks, d.c)
    }

    pub fn descriptor(&self) -> EmbeddingDescriptor {
        EmbeddingDescriptor {
            landmarks: self.landmarks.iter().map(PointRepr::from).collect(),
            c: Some(self.c),
        }
    }

    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    pub fn landmarks(&self) -> &[Point] {
        &self.landmarks
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Birth coordinate of the `k`-th vertical line (0-based).
    pub fn line(&self, k: usize) -> f64 {
        2.0 * self.c * k as f64
    }

    fn diagram(&self, offset: impl Fn(&Point) -> f64) -> PersistenceDiagram {
        let points = self
            .landmarks
            .iter()
            .enumerate()
            .map(|(k, z)| (self.line(k), self.line(k + 1) + offset(z)))
            .collect();
        PersistenceDiagram::new(points).expect("deaths exceed births by at least 2c")
    }
}

pub fn embed(x: &Point, spec: &EmbeddingSpec) -> Result<PersistenceDiagram> {
    spec.space.validate(x)?;
    Ok(spec.diagram(|z| spec.space.dist(x, z)))
}

/// The diagram halfway between `embed(x)` and `embed(y)` on every line.
pub fn midpoint_diagram(x: &Point, y: &Point, spec: &EmbeddingSpec) -> Result<PersistenceDiagram> {
    spec.space.validate(x)?;
    spec.space.validate(y)?;
    if spec.space.dist(x, y) <= POINT_EPS {
        return Err(Error::CoincidentEndpoints);
    }
    Ok(spec.diagram(|z| 0.5 * (spec.space.dist(x, z) + spec.space.dist(y, z))))
}
