//! Quantum and geometric discord of bipartite field states seen by an
//! inertial observer and a uniformly accelerated one.

pub mod closed_forms;
pub mod convergence;
pub mod correlations;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod optimize;
pub mod random;
pub mod states;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{BipartiteDims, Complex64, ComplexMatrix, DensityOperator, Subsystem};
pub use measurement::{BlochVector, ProjectorSet};
pub use states::{Statistics, SqueezingParam, TruncationPolicy, TruncationSpec};
pub use correlations::{DiscordResult, DiscordSide};
pub use optimize::OptimizerConfig;
pub use sweep::{RunConfig, SweepRecord};
