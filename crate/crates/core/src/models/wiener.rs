//! Tessarine Wiener processes with `Γ_{x^r}(t,s) = 𝓦·min(t,s)`.

use super::factorization::{AugmentedFactorization, RealCovarianceSpec};
use crate::algebra::{AugmentationMap, TessMatrix};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Entries of the real increment covariance
/// `𝓦 = [[a1,0,a3,a4],[0,a2,a4,a3],[a3,a4,a1,0],[a4,a3,0,a2]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WienerParams {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

/// The two reference parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WienerPreset {
    T1,
    T2,
}

impl WienerPreset {
    pub fn params(self) -> WienerParams {
        match self {
            WienerPreset::T1 => WienerParams { a1: 7.6, a2: 7.6, a3: -2.0, a4: 0.0 },
            WienerPreset::T2 => WienerParams { a1: 5.6, a2: 2.0, a3: 0.6, a4: 1.2 },
        }
    }

    /// Processing dimension multiplier the preset is proper for.
    pub fn k(self) -> usize {
        match self {
            WienerPreset::T1 => 1,
            WienerPreset::T2 => 2,
        }
    }
}

impl WienerParams {
    pub fn matrix(&self) -> DMatrix<f64> {
        let WienerParams { a1, a2, a3, a4 } = *self;
        DMatrix::from_row_slice(4, 4, &[a1, 0.0, a3, a4, 0.0, a2, a4, a3, a3, a4, a1, 0.0, a4, a3, 0.0, a2])
    }

    /// Rejects non-finite entries and matrices that are not positive semidefinite.
    pub fn validate(&self) -> Result<()> {
        let w = self.matrix();
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("Wiener parameters must be finite".into()));
        }
        let scale = w.abs().max().max(1.0);
        let min_eig = w.symmetric_eigenvalues().min();
        if min_eig < -1e-12 * scale {
            return Err(Error::InvalidParameter(format!(
                "Wiener increment covariance is not positive semidefinite (smallest eigenvalue {min_eig})"
            )));
        }
        Ok(())
    }
}

/// `Ā(t) = 4𝓙𝓦𝓙^H`, `B̄(t) = t·I_4`, plus the real covariance `𝓦·min(t,s)`.
pub fn wiener(params: WienerParams, horizon: usize) -> Result<(AugmentedFactorization, RealCovarianceSpec)> {
    wiener_with_scales(params, &[1.0], horizon)
}

/// `n` mutually uncorrelated Wiener components, component `j` with increment covariance `scales[j]·𝓦`.
///
/// In real-stack order `Γ_{x^r}(t,s) = (𝓦 ⊗ diag(scales))·min(t,s)`.
pub fn wiener_with_scales(
    params: WienerParams,
    scales: &[f64],
    horizon: usize,
) -> Result<(AugmentedFactorization, RealCovarianceSpec)> {
    params.validate()?;
    if scales.is_empty() || scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::InvalidParameter("component scales must be positive".into()));
    }
    let n = scales.len();
    let w = params.matrix().kronecker(&DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(scales)));
    let a_bar = AugmentationMap::new(n).augmented_from_real(&w);
    let dim = 4 * n;
    let fact = AugmentedFactorization::new(
        n,
        dim,
        horizon,
        Arc::new(move |_| a_bar.clone()),
        Arc::new(move |t| TessMatrix::identity(dim).scale(t as f64)),
    )?;
    let real = RealCovarianceSpec::new(n, Arc::new(move |t, s| &w * (t.min(s) as f64)));
    Ok((fact, real))
}

pub fn wiener_example(preset: WienerPreset, horizon: usize) -> (AugmentedFactorization, RealCovarianceSpec) {
    wiener(preset.params(), horizon).expect("reference Wiener parameters are valid")
}
