mod common;

use common::{random_bundle, random_observations, rel_err_mat, rel_err_vec};
use proptest::prelude::*;
use tessfusion::algebra::{Tessarine, TessMatrix, TessVector};
use tessfusion::estimator::{
    batch_oracle, filter_step, predict, predict_from, run_filter, smooth, smooth_step, EstimateKind, FilterState, ModelBundle,
    SmootherState,
};
use tessfusion::models::{restrict, WienerPreset};
use tessfusion::sensing::EquivalentModel;
use tessfusion::simkit::Scenario;
use tessfusion::Error;

const TOL: f64 = 1e-8;

fn all_targets(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for s in 0..=n {
        for t in 1..=n {
            v.push((t, s));
        }
    }
    v
}

/// Every filter, predictor and smoother output of sensor `alpha` against the batch oracle.
fn check_against_oracle(model: &ModelBundle, ys: &[Vec<TessVector>], alpha: usize, n: usize) {
    let (state, filt) = run_filter(alpha, &ys[alpha][..n], model).unwrap();
    let targets = all_targets(n);
    let oracle = batch_oracle(model, &[alpha], &[&ys[alpha][..n]], &targets).unwrap();
    for (&(t, s), want) in targets.iter().zip(&oracle) {
        let got = match t.cmp(&s) {
            std::cmp::Ordering::Equal => filt[t - 1].clone(),
            std::cmp::Ordering::Greater => predict_from(&state, s, t, model).unwrap(),
            std::cmp::Ordering::Less => smooth(&state, t, s, model).unwrap(),
        };
        assert_eq!(got.kind, want.kind);
        let (ex, ep) = (rel_err_vec(&got.xhat, &want.xhat), rel_err_mat(&got.p, &want.p));
        assert!(ex < TOL && ep < TOL, "k={} sensor {alpha} ({t}|{s}): x {ex:e}, P {ep:e}", model.k());
        for w in got.p.diagonal() {
            assert!(w.r >= -1e-10);
        }
    }
}

#[test]
fn recursions_match_batch_oracle() {
    for k in [1, 2, 4] {
        for sensors in 1..=3 {
            let n = 6;
            let model = random_bundle(100 + 10 * k as u64 + sensors as u64, k, 1, sensors, n);
            let ys = random_observations(7 + sensors as u64, sensors, model.d(), n);
            for a in 0..sensors {
                check_against_oracle(&model, &ys, a, n);
            }
        }
    }
}

#[test]
fn recursions_match_batch_oracle_on_two_components() {
    let model = random_bundle(3, 2, 2, 2, 5);
    let ys = random_observations(4, 2, model.d(), 5);
    check_against_oracle(&model, &ys, 1, 5);
}

#[test]
fn reference_scenarios_match_batch_oracle() {
    for preset in [WienerPreset::T1, WienerPreset::T2] {
        let sc = Scenario::preset(preset);
        let model = ModelBundle::from_network(&sc.network(10).unwrap(), sc.k, 10).unwrap();
        let ys = random_observations(9, 3, model.d(), 5);
        for a in 0..3 {
            check_against_oracle(&model, &ys, a, 5);
        }
    }
}

#[test]
fn first_step_closed_form() {
    let model = random_bundle(21, 2, 1, 2, 3);
    let ys = random_observations(22, 2, 2, 1);
    let (state, est) = filter_step(FilterState::new(1, &model).unwrap(), &ys[1][0], &model).unwrap();
    let rec = state.record(1).unwrap();
    assert_eq!(rec.innovation, ys[1][0]);
    let (a, b, h) = (model.a(1).unwrap(), model.b(1).unwrap(), model.h(1, 1).unwrap());
    let omega = &(model.r(1, 1, 1).unwrap() + model.sigma(1, 1).unwrap()) + &(&(&(h * a) * &b.adjoint()) * &h.adjoint());
    assert!(rel_err_mat(&rec.omega, &omega) < 1e-13);
    assert!(rel_err_mat(&rec.j, &(&b.adjoint() * &h.adjoint())) < 1e-15);
    assert_eq!(est.kind, EstimateKind::Filter);
}

#[test]
fn uninformative_sensor_returns_prior() {
    let base = random_bundle(31, 1, 1, 1, 6);
    let d = base.d();
    let sigma = (0..=6).map(|t| base.sigma(0, t).unwrap().clone()).collect();
    let obs = EquivalentModel::from_parts(1, 1, vec![TessMatrix::zeros(d, d)], vec![sigma], vec![vec![base.r(0, 0, 1).unwrap().clone()]]).unwrap();
    let model = ModelBundle::new(base.signal().clone(), obs).unwrap();
    let ys = random_observations(32, 1, d, 6);
    let (state, ests) = run_filter(0, &ys[0], &model).unwrap();
    for e in &ests {
        assert_eq!(e.xhat.max_abs(), 0.0);
        let prior = (model.a(e.t).unwrap() * &model.b(e.t).unwrap().adjoint()).hermitian_part();
        assert_eq!(e.p, prior);
    }
    let p = predict(&state, 6, &model);
    assert!(matches!(p, Err(Error::TimeOrder(_))));
}

#[test]
fn prediction_from_origin_is_prior() {
    let model = random_bundle(41, 4, 1, 1, 5);
    let state = FilterState::new(0, &model).unwrap();
    for t in 1..=5 {
        let e = predict(&state, t, &model).unwrap();
        assert_eq!(e.xhat.max_abs(), 0.0);
        assert!(rel_err_mat(&e.p, &model.gamma(t, t).unwrap()) < 1e-14);
        assert_eq!(e.kind, EstimateKind::Prediction { lead: t });
    }
}

#[test]
fn orthogonal_innovation_leaves_smoother_unchanged() {
    // H(s) = 0 for s > t makes L(t,s) vanish.
    let base = random_bundle(51, 1, 1, 1, 4);
    let d = base.d();
    let sigma: Vec<TessMatrix> = (0..=4).map(|t| base.sigma(0, t).unwrap().clone()).collect();
    let r = base.r(0, 0, 1).unwrap().clone();
    let zero_h = EquivalentModel::from_parts(1, 1, vec![TessMatrix::zeros(d, d)], vec![sigma], vec![vec![r]]).unwrap();
    let model = ModelBundle::new(base.signal().clone(), zero_h).unwrap();
    let ys = random_observations(52, 1, d, 4);
    let (state, filt) = run_filter(0, &ys[0], &model).unwrap();
    let sm = smooth_step(SmootherState::new(&state, 2, &model).unwrap(), &state, &model).unwrap();
    assert!(sm.gain().unwrap().is_zero());
    assert_eq!(sm.estimate().xhat, filt[1].xhat);
    assert!(rel_err_mat(&sm.estimate().p, &filt[1].p) < 1e-15);
}

#[test]
fn time_order_and_history_errors() {
    let model = random_bundle(61, 1, 1, 2, 4);
    let ys = random_observations(62, 2, 1, 4);
    let (state, _) = run_filter(0, &ys[0][..2], &model).unwrap();
    assert!(matches!(predict_from(&state, 2, 2, &model), Err(Error::TimeOrder(_))));
    assert!(matches!(smooth(&state, 2, 2, &model), Err(Error::TimeOrder(_))));
    assert!(matches!(smooth(&state, 1, 3, &model), Err(Error::MissingHistory(_))));
    assert!(matches!(predict_from(&state, 1, 9, &model), Err(Error::OutOfHorizon { .. })));
    let (other, _) = run_filter(1, &ys[1][..2], &model).unwrap();
    let sm = SmootherState::new(&state, 1, &model).unwrap();
    assert!(matches!(smooth_step(sm, &other, &model), Err(Error::InvalidParameter(_))));
    let wrong = TessVector::zeros(3);
    assert!(matches!(filter_step(FilterState::new(0, &model).unwrap(), &wrong, &model), Err(Error::Dimension(_))));
    assert!(FilterState::new(5, &model).is_err());
}

#[test]
fn zero_divisor_innovation_is_a_named_error() {
    // Ω(1) = 1 + ȷ: invertible real diagonal, but the minus component vanishes.
    let base = random_bundle(71, 1, 1, 1, 2);
    let zero = TessMatrix::zeros(1, 1);
    let r = TessMatrix::scalar(Tessarine::new(1.0, 0.0, 1.0, 0.0));
    let obs = EquivalentModel::from_parts(1, 1, vec![zero.clone()], vec![vec![zero; 3]], vec![vec![r]]).unwrap();
    let model = ModelBundle::new(base.signal().clone(), obs).unwrap();
    let err = filter_step(FilterState::new(0, &model).unwrap(), &TessVector::zeros(1), &model).unwrap_err();
    match &err {
        Error::SingularInnovation { sensor: 0, t: 1, source } => assert!(matches!(**source, Error::Singular { .. })),
        other => panic!("{other:?}"),
    }
    assert!(err.to_string().contains("sensor 1") && err.to_string().contains("minus"));
}

#[test]
fn oracle_error_shrinks_with_more_data() {
    let model = random_bundle(81, 2, 1, 1, 8);
    let ys = random_observations(82, 1, 2, 8);
    let targets: Vec<(usize, usize)> = (0..=8).map(|s| (4, s)).collect();
    let est = batch_oracle(&model, &[0], &[&ys[0]], &targets).unwrap();
    for w in est.windows(2) {
        for i in 0..2 {
            assert!(w[1].p.get(i, i).r <= w[0].p.get(i, i).r + 1e-10);
        }
    }
    for e in &est {
        assert!(rel_err_mat(&e.p, &e.p.adjoint()) < 1e-10);
    }
}

#[test]
fn wl_and_reduced_estimators_coincide_under_properness() {
    for preset in [WienerPreset::T1, WienerPreset::T2] {
        let sc = Scenario::preset(preset);
        let net = sc.network(12).unwrap();
        let reduced = ModelBundle::from_network(&net, sc.k, 12).unwrap();
        let wl = ModelBundle::from_network(&net, 4, 12).unwrap();
        // Proper data: the reduced observation is the leading block of the augmented one.
        let wide = random_observations(91, 3, 1, 12)
            .into_iter()
            .map(|ys| ys.into_iter().map(|y| tessfusion::algebra::augment(&y)).collect::<Vec<_>>())
            .collect::<Vec<_>>();
        for a in 0..3 {
            let short: Vec<TessVector> = wide[a].iter().map(|y| y.head(sc.k)).collect();
            let (sr, fr) = run_filter(a, &short, &reduced).unwrap();
            let (sw, fw) = run_filter(a, &wide[a], &wl).unwrap();
            for t in 1..=12 {
                let (x, y) = (&fr[t - 1], &fw[t - 1]);
                assert!((x.xhat.get(0) - y.xhat.get(0)).abs_max() < 1e-8 * (1.0 + y.xhat.max_abs()));
                assert!((x.p.get(0, 0) - y.p.get(0, 0)).abs_max() < 1e-8 * y.p.max_abs());
            }
            let pr = predict_from(&sr, 5, 9, &reduced).unwrap();
            let pw = predict_from(&sw, 5, 9, &wl).unwrap();
            assert!((pr.p.get(0, 0) - pw.p.get(0, 0)).abs_max() < 1e-8 * pw.p.max_abs());
            let mr = smooth(&sr, 4, 9, &reduced).unwrap();
            let mw = smooth(&sw, 4, 9, &wl).unwrap();
            assert!((mr.xhat.get(0) - mw.xhat.get(0)).abs_max() < 1e-8 * (1.0 + mw.xhat.max_abs()));
            assert!((mr.p.get(0, 0) - mw.p.get(0, 0)).abs_max() < 1e-8 * mw.p.max_abs());
        }
    }
}

#[test]
fn restricted_factor_rank_is_compact() {
    let sc = Scenario::preset(WienerPreset::T1);
    let net = sc.network(3).unwrap();
    assert_eq!(restrict(net.signal(), 1).unwrap().rank(), 1);
    assert_eq!(restrict(net.signal(), 4).unwrap().rank(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn oracle_agreement_random_models(seed in 0u64..10_000, k in prop::sample::select(vec![1usize, 2, 4]), sensors in 1usize..=3) {
        let model = random_bundle(seed, k, 1, sensors, 5);
        let ys = random_observations(seed ^ 0xABCD, sensors, model.d(), 5);
        check_against_oracle(&model, &ys, sensors - 1, 5);
    }
}

#[test]
fn long_horizon_filter_keeps_q_hermitian() {
    // Skew parts of Q grow geometrically if left unprojected; T2 sensor 1 used to break down near t = 876.
    let sc = Scenario::preset(WienerPreset::T2);
    let n = 1000;
    let net = sc.network(n).unwrap();
    let traj = tessfusion::simkit::Simulator::new(&sc).unwrap().trajectory(0, n);
    for k in [2, 4] {
        let model = ModelBundle::from_network(&net, k, n).unwrap();
        let ys = traj.processed_observations(model.d());
        let (state, ests) = run_filter(0, &ys[0], &model).unwrap();
        let q = state.q_at(n).unwrap();
        assert_eq!(q, q.adjoint());
        assert!(ests.iter().all(|e| e.p.get(0, 0).r > 0.0));
    }
}
