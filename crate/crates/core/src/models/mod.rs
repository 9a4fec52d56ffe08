//! Widely factorizable signal models and their T_k restrictions.

mod constructors;
mod factorization;
mod wiener;

pub use constructors::{from_arma, from_markov, from_state_model, ArmaModel, CovarianceFn, StateModel, TransitionFn};
pub use factorization::{
    gamma_augmented, restrict, validate_k, AugmentedFactorization, FactorTable, MatrixFn, RealCovarianceSpec, RealKernel,
    TkFactorization,
};
pub use wiener::{wiener, wiener_example, wiener_with_scales, WienerParams, WienerPreset};
