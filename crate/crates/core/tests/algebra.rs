mod common;

use common::{tess, tess_mat, tess_vec};
use proptest::prelude::*;
use tessfusion::algebra::*;

fn close(a: Tessarine, b: Tessarine, scale: f64) -> bool {
    (a - b).abs_max() <= 1e-12 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn ring_laws(a in tess(), b in tess(), c in tess()) {
        let scale = a.abs_max() * b.abs_max() * c.abs_max() * 64.0;
        prop_assert_eq!(a * b, b * a);
        prop_assert!(close((a * b) * c, a * (b * c), scale));
        prop_assert!(close(a * (b + c), a * b + a * c, scale));
    }

    #[test]
    fn pair_homomorphism(a in tess(), b in tess()) {
        let (pa, pb) = (a.to_pair(), b.to_pair());
        let prod = (a * b).to_pair();
        let sum = (a + b).to_pair();
        let scale = a.abs_max() * b.abs_max() * 16.0;
        prop_assert!((prod.plus - (pa * pb).plus).norm() <= 1e-13 * scale.max(1.0));
        prop_assert!((prod.minus - (pa * pb).minus).norm() <= 1e-13 * scale.max(1.0));
        prop_assert!((sum.plus - (pa + pb).plus).norm() <= 1e-13 * scale.max(1.0));
        prop_assert!((sum.minus - (pa + pb).minus).norm() <= 1e-13 * scale.max(1.0));
    }

    #[test]
    fn pair_round_trip_is_exact_for_dyadic_parts(p in prop::array::uniform4(-1024i32..1024)) {
        let x = Tessarine::from_parts(p.map(|v| v as f64 / 8.0));
        prop_assert_eq!(Tessarine::from_pair(x.to_pair()), x);
    }

    #[test]
    fn conjugations_are_involutions(x in tess()) {
        for kind in Conjugation::ALL {
            prop_assert_eq!(conjugate(conjugate(x, kind), kind), x);
        }
        prop_assert_eq!(tmul(Tessarine::ONE, x), x);
    }

    #[test]
    fn conjugations_are_ring_automorphisms(a in tess(), b in tess()) {
        let scale = a.abs_max() * b.abs_max() * 16.0;
        for kind in Conjugation::ALL {
            prop_assert!(close((a * b).conjugate(kind), a.conjugate(kind) * b.conjugate(kind), scale));
        }
    }

    #[test]
    fn augment_matches_real_stack(x in tess_vec(3)) {
        let map = AugmentationMap::new(3);
        let via_map = map.from_real_stack(&x.real_stack());
        prop_assert!(augment(&x).max_abs_diff(&via_map) <= 1e-14 * x.max_abs().max(1.0));
    }

    #[test]
    fn star_product_matches_dx(x in tess_vec(2), y in tess_vec(2)) {
        let lhs = augment(&star_product(&x, &y).unwrap());
        let rhs = build_dx(&x).mul_vec(&augment(&y));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * (x.max_abs() * y.max_abs()).max(1.0));
    }

    #[test]
    fn ones_is_star_identity(x in tess_vec(4)) {
        let e = TessVector::from_slice(&[Tessarine::new(1.0, 1.0, 1.0, 1.0); 4]);
        prop_assert!(star_product(&e, &x).unwrap().max_abs_diff(&x) <= 1e-14 * x.max_abs().max(1.0));
    }

    #[test]
    fn adjoint_reverses_products(a in tess_mat(2, 3), b in tess_mat(3, 2)) {
        let lhs = (&a * &b).adjoint();
        let rhs = &b.adjoint() * &a.adjoint();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * 100.0 * 100.0);
    }

    #[test]
    fn solve_residual(a in tess_mat(4, 4), b in tess_mat(4, 2)) {
        let shifted = &a + &TessMatrix::identity(4).scale(60.0);
        let x = tess_solve(&shifted, &b).unwrap();
        prop_assert!((&shifted * &x - &b).norm() <= 1e-10 * b.norm());
    }
}

#[test]
fn augmentation_map_is_unitary() {
    for n in 1..=3 {
        let j = AugmentationMap::new(n);
        let g = &j.matrix().adjoint() * j.matrix();
        assert!(g.max_abs_diff(&TessMatrix::identity(4 * n)) <= 1e-14, "n={n}");
    }
}

#[test]
fn real_covariance_round_trip() {
    let w = nalgebra::DMatrix::from_fn(8, 8, |i, j| ((i * 3 + j * 5) % 7) as f64 + if i == j { 10.0 } else { 0.0 });
    let w = (&w + w.transpose()) * 0.5;
    let map = AugmentationMap::new(2);
    let back = map.real_from_augmented(&map.augmented_from_real(&w));
    assert!((back - w).abs().max() < 1e-12);
}

#[test]
fn augmented_covariance_agrees_with_unit_expansion() {
    let w = nalgebra::DMatrix::from_row_slice(
        4,
        4,
        &[5.6, 0.0, 0.6, 1.2, 0.0, 2.0, 1.2, 0.6, 0.6, 1.2, 5.6, 0.0, 1.2, 0.6, 0.0, 2.0],
    );
    let map = AugmentationMap::new(1);
    let got = map.augmented_from_real(&w);
    let want = common::augmented_from_real_by_units(&w);
    assert!(got.max_abs_diff(&want) < 1e-13);
}

#[test]
fn zero_divisor_solve_names_component() {
    let a = TessMatrix::scalar(Tessarine::new(1.0, 0.0, 1.0, 0.0));
    let err = tess_solve(&a, &TessMatrix::identity(1)).unwrap_err();
    assert!(err.is_singular());
    assert!(err.to_string().contains("minus"));
}
