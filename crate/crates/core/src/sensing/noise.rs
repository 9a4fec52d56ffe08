//! Additive sensor noise, white in time and possibly correlated across sensors.

use crate::algebra::{AugmentationMap, TessMatrix};
use crate::error::{Error, Result};
use crate::random::{gaussian_factor, standard_normal_vector};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

#[derive(Debug, Clone)]
enum Structure {
    /// `v^(α) = λ_α u` with `Γ_{u^r}` given.
    Common { lambdas: Vec<f64>, base: DMatrix<f64> },
    /// Joint real covariance of `[v^(1)r; …; v^(R)r]`.
    Joint { covariance: DMatrix<f64> },
}

/// Gaussian noise law; `R^{(αβ)}(t)` is time-constant.
#[derive(Debug, Clone)]
pub struct NoiseLaw {
    n: usize,
    sensors: usize,
    structure: Structure,
    factor: DMatrix<f64>,
    map: AugmentationMap,
}

fn check_psd(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if m.iter().any(|v| !v.is_finite()) || (m - m.transpose()).abs().max() > 1e-12 * m.abs().max().max(1.0) {
        return Err(Error::InvalidParameter(format!("{what} must be finite and symmetric")));
    }
    let min = m.clone().symmetric_eigenvalues().min();
    if min < -1e-12 * m.abs().max().max(1.0) {
        return Err(Error::InvalidParameter(format!("{what} is not positive semidefinite (eigenvalue {min})")));
    }
    Ok(())
}

impl NoiseLaw {
    /// Fully correlated sensors: `v^(α)(t) = λ_α u(t)`, `base = Γ_{u^r}` (`4n×4n`).
    pub fn common(lambdas: Vec<f64>, base: DMatrix<f64>) -> Result<Self> {
        if lambdas.is_empty() || base.nrows() % 4 != 0 || !base.is_square() || base.nrows() == 0 {
            return Err(Error::Dimension("common noise needs at least one scale and a 4n×4n base covariance".into()));
        }
        if let Some(l) = lambdas.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::InvalidParameter(format!("noise scale {l} must be positive")));
        }
        check_psd(&base, "noise base covariance")?;
        let n = base.nrows() / 4;
        let factor = gaussian_factor(&base);
        let sensors = lambdas.len();
        Ok(NoiseLaw { n, sensors, structure: Structure::Common { lambdas, base }, factor, map: AugmentationMap::new(n) })
    }

    /// General joint covariance over `sensors` blocks of size `4n`.
    pub fn joint(sensors: usize, covariance: DMatrix<f64>) -> Result<Self> {
        if sensors == 0 || !covariance.is_square() || covariance.nrows() % (4 * sensors) != 0 || covariance.nrows() == 0 {
            return Err(Error::Dimension("joint noise covariance must be 4nR×4nR".into()));
        }
        check_psd(&covariance, "joint noise covariance")?;
        let n = covariance.nrows() / (4 * sensors);
        let factor = gaussian_factor(&covariance);
        Ok(NoiseLaw { n, sensors, structure: Structure::Joint { covariance }, factor, map: AugmentationMap::new(n) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sensors(&self) -> usize {
        self.sensors
    }

    /// `E[v^{(α)r} v^{(β)rT}]`.
    pub fn real_cross(&self, alpha: usize, beta: usize) -> DMatrix<f64> {
        match &self.structure {
            Structure::Common { lambdas, base } => base * (lambdas[alpha] * lambdas[beta]),
            Structure::Joint { covariance } => {
                let m = 4 * self.n;
                covariance.view((alpha * m, beta * m), (m, m)).into_owned()
            }
        }
    }

    /// Augmented cross covariance `R̄^{(αβ)}`, `4n×4n`.
    pub fn augmented_cross(&self, alpha: usize, beta: usize) -> TessMatrix {
        self.map.augmented_from_real(&self.real_cross(alpha, beta))
    }

    /// One draw of the real-stacked noise of every sensor.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<DVector<f64>> {
        let z = standard_normal_vector(self.factor.ncols(), rng);
        let draw = &self.factor * z;
        match &self.structure {
            Structure::Common { lambdas, .. } => lambdas.iter().map(|l| &draw * *l).collect(),
            Structure::Joint { .. } => {
                let m = 4 * self.n;
                (0..self.sensors).map(|a| draw.rows(a * m, m).into_owned()).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Tessarine;

    fn base() -> DMatrix<f64> {
        DMatrix::from_row_slice(4, 4, &[6.0, 0.0, 4.0, 0.0, 0.0, 6.0, 0.0, 4.0, 4.0, 0.0, 6.0, 0.0, 0.0, 4.0, 0.0, 6.0])
    }

    #[test]
    fn reference_noise_is_t1_proper_with_known_variance() {
        let law = NoiseLaw::common(vec![0.2, 0.5, 0.6], base()).unwrap();
        let r = law.augmented_cross(1, 2);
        assert!((r.get(0, 0) - Tessarine::new(24.0, 0.0, 16.0, 0.0).scale(0.3)).abs_max() < 1e-12);
        for b in 1..4 {
            assert!(r.block(0, b, 1, 1).max_abs() < 1e-12);
        }
    }

    #[test]
    fn scales_must_be_positive() {
        assert!(NoiseLaw::common(vec![0.2, 0.0], base()).is_err());
    }

    #[test]
    fn joint_blocks() {
        let mut c = DMatrix::zeros(8, 8);
        c.view_mut((0, 0), (4, 4)).copy_from(&base());
        c.view_mut((4, 4), (4, 4)).copy_from(&(base() * 2.0));
        let law = NoiseLaw::joint(2, c).unwrap();
        assert_eq!(law.real_cross(1, 1), base() * 2.0);
        assert!(law.real_cross(0, 1).iter().all(|v| *v == 0.0));
    }
}
