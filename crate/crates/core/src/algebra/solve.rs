//! Linear solves over tessarine matrices via their two complex components.

use super::matrix::{CMatrix, TessMatrix};
use crate::error::{Component, Error, Result};

/// Condition estimates above this bound are treated as singular.
pub const CONDITION_LIMIT: f64 = 1.0 / (100.0 * f64::EPSILON);

fn norm1(m: &CMatrix) -> f64 {
    m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Inverse of one component with its 1-norm condition estimate.
fn checked_inverse(a: &CMatrix, component: Component) -> Result<CMatrix> {
    let singular = |condition| Error::Singular { component, condition };
    let inv = a.clone().lu().try_inverse().ok_or_else(|| singular(f64::INFINITY))?;
    let condition = norm1(a) * norm1(&inv);
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        return Err(singular(condition));
    }
    Ok(inv)
}

fn check_square(a: &TessMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("solve needs a square matrix, got {:?}", a.shape())));
    }
    Ok(())
}

/// Solves `A X = B`.
pub fn tess_solve(a: &TessMatrix, b: &TessMatrix) -> Result<TessMatrix> {
    check_square(a)?;
    if a.nrows() != b.nrows() {
        return Err(Error::Dimension(format!("solve: A is {:?} but B is {:?}", a.shape(), b.shape())));
    }
    if a.nrows() == 0 {
        return Ok(b.clone());
    }
    let (ap, am) = (a.plus(), a.minus());
    checked_inverse(ap, Component::Plus)?;
    checked_inverse(am, Component::Minus)?;
    let xp = ap.clone().lu().solve(b.plus()).ok_or(Error::Singular { component: Component::Plus, condition: f64::INFINITY })?;
    let xm = am.clone().lu().solve(b.minus()).ok_or(Error::Singular { component: Component::Minus, condition: f64::INFINITY })?;
    Ok(TessMatrix::from_components(xp, xm))
}

pub fn tess_inverse(a: &TessMatrix) -> Result<TessMatrix> {
    check_square(a)?;
    let p = checked_inverse(a.plus(), Component::Plus)?;
    let m = checked_inverse(a.minus(), Component::Minus)?;
    Ok(TessMatrix::from_components(p, m))
}

/// `X A^{-1}` computed as `(A^{-H} X^H)^H`.
pub fn tess_solve_right(x: &TessMatrix, a: &TessMatrix) -> Result<TessMatrix> {
    Ok(tess_solve(&a.adjoint(), &x.adjoint())?.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Tessarine;

    #[test]
    fn identity_solve_returns_rhs() {
        let b = TessMatrix::from_fn(3, 2, |i, j| Tessarine::new(i as f64, j as f64, 1.0, -0.5));
        assert_eq!(tess_solve(&TessMatrix::identity(3), &b).unwrap(), b);
    }

    #[test]
    fn zero_divisor_is_singular_in_minus_component() {
        let a = TessMatrix::scalar(Tessarine::new(1.0, 0.0, 1.0, 0.0));
        match tess_solve(&a, &TessMatrix::identity(1)) {
            Err(Error::Singular { component, .. }) => assert_eq!(component, Component::Minus),
            other => panic!("expected a singular error, got {other:?}"),
        }
    }

    #[test]
    fn near_singular_is_rejected() {
        let eps = 1e-17;
        let a = TessMatrix::from_rows(&[
            vec![Tessarine::ONE, Tessarine::ONE],
            vec![Tessarine::ONE, Tessarine::real(1.0 + eps)],
        ]);
        assert!(tess_solve(&a, &TessMatrix::identity(2)).is_err());
    }

    #[test]
    fn right_solve() {
        let a = TessMatrix::from_rows(&[
            vec![Tessarine::new(2.0, 0.1, 0.3, 0.0), Tessarine::new(0.0, 0.5, 0.0, 0.2)],
            vec![Tessarine::new(0.1, 0.0, -0.2, 0.0), Tessarine::new(3.0, 0.0, 0.5, -0.1)],
        ]);
        let x = TessMatrix::from_fn(1, 2, |_, j| Tessarine::new(1.0, j as f64, 0.0, 2.0));
        let y = tess_solve_right(&x, &a).unwrap();
        assert!((&y * &a).max_abs_diff(&x) < 1e-13);
    }
}
