#![allow(dead_code)]

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use tessfusion::algebra::{AugmentationMap, Conjugation, Tessarine, TessMatrix, TessVector};
use tessfusion::estimator::ModelBundle;
use tessfusion::models::{restrict, AugmentedFactorization};
use tessfusion::sensing::EquivalentModel;

pub fn tess() -> impl Strategy<Value = Tessarine> {
    prop::array::uniform4(-10.0..10.0f64).prop_map(Tessarine::from_parts)
}

pub fn tess_vec(n: usize) -> impl Strategy<Value = TessVector> {
    prop::collection::vec(tess(), n).prop_map(|v| TessVector::from_slice(&v))
}

pub fn tess_mat(r: usize, c: usize) -> impl Strategy<Value = TessMatrix> {
    prop::collection::vec(tess(), r * c).prop_map(move |v| TessMatrix::from_fn(r, c, |i, j| v[i * c + j]))
}

/// Multiplication by a tessarine as a real 4×4 matrix acting on `(r, ι, ȷ, κ)`.
pub fn real_multiplier(f: Tessarine) -> nalgebra::DMatrix<f64> {
    let units = [Tessarine::ONE, Tessarine::IOTA, Tessarine::JOTA, Tessarine::KAPPA];
    nalgebra::DMatrix::from_fn(4, 4, |row, col| (f * units[col]).parts()[row])
}

/// `E[x̄(t) x̄^H(s)]` for scalar `x` from the real covariance, entry by entry through the unit table.
pub fn augmented_from_real_by_units(w: &nalgebra::DMatrix<f64>) -> TessMatrix {
    let units = [Tessarine::ONE, Tessarine::IOTA, Tessarine::JOTA, Tessarine::KAPPA];
    let conj = |u: usize, x: Tessarine| match u {
        0 => x,
        1 => x.conjugate(Conjugation::Star),
        2 => x.conjugate(Conjugation::Iota),
        _ => x.conjugate(Conjugation::Kappa),
    };
    TessMatrix::from_fn(4, 4, |u, v| {
        let mut acc = Tessarine::ZERO;
        for a in 0..4 {
            for b in 0..4 {
                acc += (conj(u, units[a]) * conj(v, units[b]).star()).scale(w[(a, b)]);
            }
        }
        acc
    })
}

pub fn rel_err_mat(a: &TessMatrix, b: &TessMatrix) -> f64 {
    let d = (a - b).norm();
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        d / s
    }
}

pub fn rel_err_vec(a: &TessVector, b: &TessVector) -> f64 {
    let d = (a - b).norm();
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        d / s
    }
}


pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gauss_tess(rng: &mut ChaCha8Rng) -> Tessarine {
    Tessarine::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gauss_mat(rng: &mut ChaCha8Rng, r: usize, c: usize) -> TessMatrix {
    TessMatrix::from_fn(r, c, |_, _| gauss_tess(rng))
}

pub fn gauss_vec(rng: &mut ChaCha8Rng, n: usize) -> TessVector {
    TessVector::from_fn(n, |_| gauss_tess(rng))
}

/// Improper signal from a random real state recursion `x^r(t+1) = F x^r(t) + w(t)` on `4n` channels.
pub fn random_signal(rng: &mut ChaCha8Rng, n: usize, horizon: usize) -> AugmentedFactorization {
    let m = 4 * n;
    let mut real = |r: usize, c: usize, s: f64| DMatrix::from_fn(r, c, |_, _| s * rng.sample::<f64, _>(StandardNormal));
    // Near-orthogonal F keeps Φ^{-T} bounded, so the factors A, B stay comparable to Γ.
    let f = real(m, m, 1.0).qr().q() * 0.95 + real(m, m, 0.05 / (m as f64).sqrt());
    let l = real(m, m, 1.0);
    let noise = &l * l.transpose() / m as f64 + DMatrix::identity(m, m) * 0.1;
    let mut phi = DMatrix::<f64>::identity(m, m);
    let mut cov = DMatrix::<f64>::identity(m, m);
    let map = AugmentationMap::new(n);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for _ in 0..=horizon {
        let phi_inv_t = phi.clone().try_inverse().expect("invertible transition").transpose();
        a.push(map.augmented_from_real(&phi).scale(0.5));
        b.push(map.augmented_from_real(&(&cov * phi_inv_t)).scale(0.5));
        cov = &f * &cov * f.transpose() + &noise;
        phi = &f * &phi;
    }
    AugmentedFactorization::from_vecs(n, a, b).unwrap()
}

/// Arbitrary observation model on `d = k·n` components: random `H`, `Σ = C C^H`, joint `R = D D^H`.
pub fn random_bundle(seed: u64, k: usize, n: usize, sensors: usize, horizon: usize) -> ModelBundle {
    let mut rng = rng(seed);
    let signal = restrict(&random_signal(&mut rng, n, horizon), k).unwrap();
    let d = k * n;
    let h: Vec<TessMatrix> = (0..sensors).map(|_| gauss_mat(&mut rng, d, d)).collect();
    let sigma = (0..sensors)
        .map(|_| {
            (0..=horizon)
                .map(|_| {
                    let c = gauss_mat(&mut rng, d, d).scale(0.5);
                    &c * &c.adjoint()
                })
                .collect()
        })
        .collect();
    let dj = gauss_mat(&mut rng, sensors * d, sensors * d + 1);
    let joint = &dj * &dj.adjoint();
    let r = (0..sensors).map(|a| (0..sensors).map(|b| joint.block(a * d, b * d, d, d)).collect()).collect();
    let obs = EquivalentModel::from_parts(k, n, h, sigma, r).unwrap();
    ModelBundle::new(signal, obs).unwrap()
}

/// Arbitrary data: the recursions and the oracle are linear maps of it.
pub fn random_observations(seed: u64, sensors: usize, d: usize, len: usize) -> Vec<Vec<TessVector>> {
    let mut rng = rng(seed);
    (0..sensors).map(|_| (0..len).map(|_| gauss_vec(&mut rng, d)).collect()).collect()
}
