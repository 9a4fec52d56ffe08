//! Direct solution of the normal equations on stacked observations.
//!
//! Independent of the recursions: only `Γ_{x_k}`, `H`, `Σ` and `R` enter.

use super::bundle::ModelBundle;
use super::result::EstimateResult;
use crate::algebra::{tess_solve_right, TessMatrix, TessVector};
use crate::error::{Error, Result};

/// `E[Y_a(s) Y_b^H(s)]` for the stacks `Y = [y^{(α)}(j)]` ordered time-major, `j = 1..=s`.
fn observation_gram(model: &ModelBundle, left: &[usize], right: &[usize], s: usize) -> Result<TessMatrix> {
    let mut grid = Vec::with_capacity(s * left.len());
    for i in 1..=s {
        for &a in left {
            let mut row = Vec::with_capacity(s * right.len());
            for j in 1..=s {
                let gx = model.gamma(i, j)?;
                for &b in right {
                    let mut blk = &(model.h(a, i)? * &gx) * &model.h(b, j)?.adjoint();
                    if i == j {
                        blk = &blk + model.r(a, b, i)?;
                        if a == b {
                            blk = &blk + model.sigma(a, i)?;
                        }
                    }
                    row.push(blk);
                }
            }
            grid.push(row);
        }
    }
    Ok(TessMatrix::from_blocks(&grid))
}

/// `E[x(t) Y^H(s)]`.
fn signal_observation(model: &ModelBundle, sensors: &[usize], t: usize, s: usize) -> Result<TessMatrix> {
    let mut blocks = Vec::with_capacity(s * sensors.len());
    for j in 1..=s {
        let gx = model.gamma(t, j)?;
        for &b in sensors {
            blocks.push(&gx * &model.h(b, j)?.adjoint());
        }
    }
    Ok(TessMatrix::hstack(&blocks))
}

/// Projection coefficients `K = Γ_{xY} Γ_Y^{-1}` of `x(t)` on the observations of `sensors` up to `s`.
pub fn oracle_gain(model: &ModelBundle, sensors: &[usize], t: usize, s: usize) -> Result<TessMatrix> {
    check_sensors(model, sensors)?;
    if s == 0 {
        return Ok(TessMatrix::zeros(model.d(), 0));
    }
    tess_solve_right(&signal_observation(model, sensors, t, s)?, &observation_gram(model, sensors, sensors, s)?)
}

fn check_sensors(model: &ModelBundle, sensors: &[usize]) -> Result<()> {
    if sensors.is_empty() {
        return Err(Error::InvalidParameter("the oracle needs at least one sensor".into()));
    }
    sensors.iter().try_for_each(|&a| model.check_sensor(a))
}

/// Stacks `ys[i][j-1] = y^{(sensors[i])}(j)` time-major for `j = 1..=s`.
fn stack(ys: &[&[TessVector]], s: usize) -> Result<TessVector> {
    let mut parts = Vec::with_capacity(s * ys.len());
    for j in 0..s {
        for y in ys {
            parts.push(
                y.get(j)
                    .ok_or_else(|| Error::MissingHistory(format!("oracle needs observations up to s={s}, got {}", y.len())))?
                    .clone(),
            );
        }
    }
    Ok(TessVector::stack(&parts))
}

/// MMSE estimates `x̂(t|s)` from the observations of `sensors` for every `(t, s)` target.
///
/// With one sensor this is the local estimator; with all sensors the centralized one.
pub fn batch_oracle(
    model: &ModelBundle,
    sensors: &[usize],
    ys: &[&[TessVector]],
    targets: &[(usize, usize)],
) -> Result<Vec<EstimateResult>> {
    check_sensors(model, sensors)?;
    if ys.len() != sensors.len() {
        return Err(Error::Dimension(format!("{} observation sequences for {} sensors", ys.len(), sensors.len())));
    }
    targets
        .iter()
        .map(|&(t, s)| {
            let k = oracle_gain(model, sensors, t, s)?;
            let gx = model.gamma(t, t)?;
            if s == 0 {
                return Ok(EstimateResult::new(t, s, TessVector::zeros(model.d()), gx));
            }
            let cross = signal_observation(model, sensors, t, s)?;
            let xhat = k.mul_vec(&stack(ys, s)?);
            let p = (&gx - &(&k * &cross.adjoint())).hermitian_part();
            Ok(EstimateResult::new(t, s, xhat, p))
        })
        .collect()
}

/// `E[x̂^{(α)}(t|s) x̂^{(β)H}(t|s)]` for the single-sensor projections.
pub fn oracle_cross_covariance(model: &ModelBundle, alpha: usize, beta: usize, t: usize, s: usize) -> Result<TessMatrix> {
    if s == 0 {
        return Ok(TessMatrix::zeros(model.d(), model.d()));
    }
    let ka = oracle_gain(model, &[alpha], t, s)?;
    let kb = oracle_gain(model, &[beta], t, s)?;
    Ok(&(&ka * &observation_gram(model, &[alpha], &[beta], s)?) * &kb.adjoint())
}
