//! Wasserstein-type distances, barycenters and reach probes on small
//! geodesic metric spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`spaces`]: the metric spaces and their geodesics,
//! * [`transport`]: discrete measures and exact `W_p`,
//! * [`barycenter`]: metric projection of a measure onto the Dirac measures,
//! * [`orlicz`]: gauge-norm transport distances,
//! * [`diagrams`]: persistence diagrams and the Kuratowski-type embedding,
//! * [`probes`]: experiments producing [`report::ProbeReport`]s.

pub mod barycenter;
pub mod diagrams;
pub mod error;
pub mod optimize;
pub mod orlicz;
pub mod probes;
pub mod report;
pub mod spaces;
pub mod transport;

pub use error::{Error, Result};
pub use report::{ProbeReport, Verdict};
pub use spaces::{MetricSpace, Point, PointRepr};
pub use transport::DiscreteMeasure;
