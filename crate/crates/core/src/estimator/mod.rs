//! Local filter, predictor and smoother driven by innovations.
//!
//! The recursions are generic over the processing dimension: the same code runs the
//! T_1, T_2 and full widely linear estimators, selected by the [`ModelBundle`].

mod bundle;
mod filter;
mod oracle;
mod result;
mod smoother;

pub use bundle::ModelBundle;
pub use filter::{filter_estimate, filter_step, predict, predict_from, run_filter, FilterRecord, FilterState};
pub use oracle::{batch_oracle, oracle_cross_covariance, oracle_gain};
pub use result::{EstimateKind, EstimateResult};
pub use smoother::{smooth, smooth_step, SmootherState};
