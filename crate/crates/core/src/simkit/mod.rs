//! Scenario simulation, Monte Carlo validation and timing.

mod montecarlo;
mod scenario;
mod timing;
mod trajectory;

pub use montecarlo::{mean_error_vs_horizon, run_monte_carlo, MeanErrorPoint, BiasPoint, MCReport, McOptions, McSeries, SeriesKind, SeriesPoint, PRECISION_LIMIT};
pub use scenario::{NoiseSpec, Scenario, ScenarioLabel, DEFAULT_SEED};
pub use timing::{fit_slope, timing_benchmark, TimingRow, TimingTable, Variant};
pub use trajectory::{simulate_trajectory, Simulator, Trajectory};
