//! Numerical geometry of the Heisenberg group, its Riemannian cone and the
//! Siegel domain: metrics, curvature, complex structures, explicit maps and
//! geodesics.

pub mod curvature;
pub mod error;
pub mod fd;
pub mod geodesics;
pub mod manifold;
pub mod maps;
pub mod metric;
pub mod sampling;
pub mod structures;
pub mod verify;

pub use error::{GeomError, Result};
pub use fd::FdConfig;
pub use geodesics::{GeodesicState, IntegratorConfig};
pub use manifold::{eval_frame, FrameId, Manifold, Point, Tangent, DOMAIN_GUARD};
pub use maps::{DistributionId, MapId};
pub use metric::{metric_matrix, AbProfile, MetricId};
pub use structures::{ComplexStructureId, DifferentialForm};
