//! Augmentation `x ↦ [x; x*; x^ι; x^κ]`, the star product and its augmented operator.

use super::matrix::{TessMatrix, TessVector};
use super::tessarine::{Conjugation, Tessarine};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Rows of the 4×4 map between real parts and the augmented vector.
const A_ROWS: [[Tessarine; 4]; 4] = [
    [Tessarine::ONE, Tessarine::IOTA, Tessarine::JOTA, Tessarine::KAPPA],
    [Tessarine::ONE, Tessarine::new(0.0, -1.0, 0.0, 0.0), Tessarine::JOTA, Tessarine::new(0.0, 0.0, 0.0, -1.0)],
    [Tessarine::ONE, Tessarine::IOTA, Tessarine::new(0.0, 0.0, -1.0, 0.0), Tessarine::new(0.0, 0.0, 0.0, -1.0)],
    [Tessarine::ONE, Tessarine::new(0.0, -1.0, 0.0, 0.0), Tessarine::new(0.0, 0.0, -1.0, 0.0), Tessarine::KAPPA],
];

/// The unitary map `𝓙_n = ½ 𝓐 ⊗ I_n` with `x̄ = 2 𝓙_n x^r`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentationMap {
    n: usize,
    matrix: TessMatrix,
}

impl AugmentationMap {
    pub fn new(n: usize) -> Self {
        let matrix = TessMatrix::from_fn(4 * n, 4 * n, |i, j| {
            if i % n == j % n {
                A_ROWS[i / n][j / n].scale(0.5)
            } else {
                Tessarine::ZERO
            }
        });
        AugmentationMap { n, matrix }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &TessMatrix {
        &self.matrix
    }

    /// `4 𝓙 M 𝓙^H` for a real `4n×4n` matrix, mapping `Γ_{x^r}` to `Γ_x̄`.
    pub fn augmented_from_real(&self, m: &DMatrix<f64>) -> TessMatrix {
        assert_eq!(m.shape(), (4 * self.n, 4 * self.n), "real matrix must be 4n×4n");
        (&(&self.matrix * &TessMatrix::from_real(m)) * &self.matrix.adjoint()).scale(4.0)
    }

    /// Inverse of [`AugmentationMap::augmented_from_real`]; returns the `r` part of `¼ 𝓙^H G 𝓙`.
    pub fn real_from_augmented(&self, g: &TessMatrix) -> DMatrix<f64> {
        let back = &(&self.matrix.adjoint() * g) * &self.matrix;
        back.part(super::Part::R) * 0.25
    }

    pub fn from_real_stack(&self, xr: &DVector<f64>) -> TessVector {
        (&self.matrix * &TessVector::from_fn(xr.len(), |i| Tessarine::real(xr[i]))).scale(2.0)
    }
}

/// `[x; x*; x^ι; x^κ]`.
pub fn augment(x: &TessVector) -> TessVector {
    TessVector::stack(&[
        x.clone(),
        x.conjugate(Conjugation::Star),
        x.conjugate(Conjugation::Iota),
        x.conjugate(Conjugation::Kappa),
    ])
}

/// Part-wise Hadamard product.
pub fn star_product(x: &TessVector, y: &TessVector) -> Result<TessVector> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!("star product of lengths {} and {}", x.len(), y.len())));
    }
    Ok(TessVector::from_fn(x.len(), |i| {
        let (a, b) = (x.get(i), y.get(i));
        Tessarine::new(a.r * b.r, a.i * b.i, a.j * b.j, a.k * b.k)
    }))
}

/// `D^x = 𝓙 diag(x^r) 𝓙^H`, so that `augment(x ⋆ y) = D^x · augment(y)`.
pub fn build_dx(x: &TessVector) -> TessMatrix {
    build_dx_from_real(&x.real_stack())
}

pub fn build_dx_from_real(xr: &DVector<f64>) -> TessMatrix {
    let j = AugmentationMap::new(xr.len() / 4);
    let d = TessMatrix::from_real(&DMatrix::from_diagonal(xr));
    &(j.matrix() * &d) * &j.matrix().adjoint()
}

/// Augmented transition for `x ↦ F1 x + F2 x* + F3 x^ι + F4 x^κ`.
pub fn widely_linear_block(f: &[TessMatrix; 4]) -> TessMatrix {
    use Conjugation::{Iota, Kappa, Star};
    let [f1, f2, f3, f4] = f;
    TessMatrix::from_blocks(&[
        vec![f1.clone(), f2.clone(), f3.clone(), f4.clone()],
        vec![f2.conjugate(Star), f1.conjugate(Star), f4.conjugate(Star), f3.conjugate(Star)],
        vec![f3.conjugate(Iota), f4.conjugate(Iota), f1.conjugate(Iota), f2.conjugate(Iota)],
        vec![f4.conjugate(Kappa), f3.conjugate(Kappa), f2.conjugate(Kappa), f1.conjugate(Kappa)],
    ])
}
