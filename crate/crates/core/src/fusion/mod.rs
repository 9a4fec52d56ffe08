//! Cross-sensor recursions and the matrix-weighted fusion of local estimates.

mod combine;
mod cross;
mod cross_smoother;
mod driver;

pub use combine::{fuse, FusedEstimate, FusionWeights};
pub use cross::{cross_filter_covariance, cross_filter_step, cross_predict, CrossRecord, CrossState};
pub use cross_smoother::{cross_smooth_step, CrossSmootherState, PairHistory};
pub use driver::{run_distributed, DistributedConfig, DistributedRun, FusionPlan, Replay};
