//! Tessarine arithmetic, conjugations, augmentation and linear solves.

mod augment;
mod matrix;
mod solve;
mod tessarine;

pub use augment::{augment, build_dx, build_dx_from_real, star_product, widely_linear_block, AugmentationMap};
pub use matrix::{CMatrix, CVector, TessMatrix, TessVector};
pub use solve::{tess_inverse, tess_solve, tess_solve_right, CONDITION_LIMIT};
pub use tessarine::{tmul, ComplexPair, Conjugation, Part, Tessarine};

/// `x` with the conjugation applied.
pub fn conjugate(x: Tessarine, kind: Conjugation) -> Tessarine {
    x.conjugate(kind)
}
