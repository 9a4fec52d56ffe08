//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use common::{gauss_tess, random_bundle, random_observations, rel_err_mat, rel_err_vec, rng};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;
use tessfusion::algebra::{AugmentationMap, Tessarine, TessMatrix, TessVector};
use tessfusion::estimator::{batch_oracle, filter_step, oracle_cross_covariance, predict_from, run_filter, smooth, FilterState, ModelBundle};
use tessfusion::fusion::{fuse, run_distributed, DistributedConfig, DistributedRun, FusedEstimate, FusionPlan};
use tessfusion::models::WienerPreset;
use tessfusion::sensing::{verify_second_order_equivalence, ComponentFading, EquivalentModel, PartLaw};
use tessfusion::simkit::{run_monte_carlo, simulate_trajectory, timing_benchmark, McOptions, Scenario, SeriesKind};
use tessfusion::Error;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const PRESETS: [WienerPreset; 2] = [WienerPreset::T1, WienerPreset::T2];

fn algebra_laws() -> Check {
    let mut g = rng(1);
    let close = |a: Tessarine, b: Tessarine, scale: f64| (a - b).abs_max() <= 1e-12 * scale.max(1.0);
    let cases = 10_000;
    for case in 0..cases {
        let (a, b, c) = (gauss_tess(&mut g), gauss_tess(&mut g), gauss_tess(&mut g));
        let scale = 64.0 * a.abs_max() * b.abs_max() * c.abs_max().max(1.0);
        ensure(a * b == b * a, || format!("commutativity, case {case}"))?;
        ensure(close((a * b) * c, a * (b * c), scale), || format!("associativity, case {case}"))?;
        ensure(close(a * (b + c), a * b + a * c, scale), || format!("distributivity, case {case}"))?;
        let (pa, pb, pab) = (a.to_pair(), b.to_pair(), (a * b).to_pair());
        let hom = (pab.plus - pa.plus * pb.plus).norm().max((pab.minus - pa.minus * pb.minus).norm());
        ensure(hom <= 1e-12 * scale, || format!("pair homomorphism, case {case}: {hom:e}"))?;
    }
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        let j = AugmentationMap::new(n);
        worst = worst.max((&j.matrix().adjoint() * j.matrix()).max_abs_diff(&TessMatrix::identity(4 * n)));
    }
    ensure(worst <= 1e-14, || format!("unitarity defect {worst:e}"))?;
    Ok(format!("{cases} cases x 4 laws, unitarity defect {worst:e}"))
}

fn oracle_fused(model: &ModelBundle, ys: &[Vec<TessVector>], t: usize, s: usize) -> (TessVector, TessMatrix) {
    let r = model.sensors();
    let locals: Vec<TessVector> =
        (0..r).map(|a| batch_oracle(model, &[a], &[&ys[a][..s]], &[(t, s)]).unwrap().remove(0).xhat).collect();
    let blocks: Vec<Vec<TessMatrix>> =
        (0..r).map(|a| (0..r).map(|b| oracle_cross_covariance(model, a, b, t, s).unwrap()).collect()).collect();
    let f = fuse(t, s, &locals, &blocks, &model.gamma(t, t).unwrap()).unwrap();
    (f.xhat, f.p)
}

fn oracle_equivalence() -> Check {
    const TOL: f64 = 1e-8;
    const N: usize = 10;
    let (mut local, mut fused, mut worst) = (0, 0, 0.0_f64);
    for k in [1, 2, 4] {
        for sensors in 1..=3 {
            let model = random_bundle(1000 + 10 * k as u64 + sensors as u64, k, 1, sensors, N);
            let ys = random_observations(2000 + sensors as u64, sensors, model.d(), N);
            for a in 0..sensors {
                let (state, filt) = run_filter(a, &ys[a], &model).map_err(|e| e.to_string())?;
                let targets: Vec<(usize, usize)> = (0..=N).flat_map(|s| (1..=N).map(move |t| (t, s))).collect();
                let oracle = batch_oracle(&model, &[a], &[&ys[a][..]], &targets).map_err(|e| e.to_string())?;
                for (&(t, s), want) in targets.iter().zip(&oracle) {
                    let got = match t.cmp(&s) {
                        std::cmp::Ordering::Equal => filt[t - 1].clone(),
                        std::cmp::Ordering::Greater => predict_from(&state, s, t, &model).map_err(|e| e.to_string())?,
                        std::cmp::Ordering::Less => smooth(&state, t, s, &model).map_err(|e| e.to_string())?,
                    };
                    let err = rel_err_vec(&got.xhat, &want.xhat).max(rel_err_mat(&got.p, &want.p));
                    worst = worst.max(err);
                    ensure(err < TOL, || format!("k={k} R={sensors} sensor {} ({t}|{s}): {err:e}", a + 1))?;
                    local += 1;
                }
            }
            let cfg = DistributedConfig { steps: 5, leads: vec![1, 3, 5], lags: vec![1, 3, 5] };
            let run = run_distributed(&model, &ys, &cfg).map_err(|e| e.to_string())?;
            let all = run.filter.iter().chain(run.prediction.values().flatten()).chain(run.smoothing.values().flatten());
            for got in all {
                let (x, p) = oracle_fused(&model, &ys, got.t, got.s);
                let err = rel_err_vec(&got.xhat, &x).max(rel_err_mat(&got.p, &p));
                worst = worst.max(err);
                ensure(err < TOL, || format!("k={k} R={sensors} fused ({}|{}): {err:e}", got.t, got.s))?;
                fused += 1;
            }
        }
    }
    Ok(format!("{local} local and {fused} fused estimates, worst relative error {worst:e}"))
}

fn leading_gap(a: &FusedEstimate, b: &FusedEstimate, n: usize) -> f64 {
    let x = (&a.xhat.head(n) - &b.xhat.head(n)).max_abs() / (1.0 + b.xhat.head(n).max_abs());
    let p = (&a.p.block(0, 0, n, n) - &b.p.block(0, 0, n, n)).max_abs() / b.p.block(0, 0, n, n).max_abs();
    x.max(p)
}

fn reduction_matches_wl() -> Check {
    let mut worst: f64 = 0.0;
    for preset in PRESETS {
        let sc = Scenario::preset(preset);
        let cfg = DistributedConfig { steps: 50, leads: vec![1, 3, 5], lags: vec![1, 3, 5] };
        let horizon = cfg.horizon_needed();
        let net = sc.network(horizon).map_err(|e| e.to_string())?;
        let mut sim = sc.clone();
        sim.horizon = horizon;
        let traj = simulate_trajectory(&sim, 0).map_err(|e| e.to_string())?;
        let runs: Vec<DistributedRun> = [sc.k, 4]
            .iter()
            .map(|&k| {
                let model = ModelBundle::from_network(&net, k, horizon)?;
                run_distributed(&model, &traj.processed_observations(model.d()), &cfg)
            })
            .collect::<tessfusion::Result<_>>()
            .map_err(|e| e.to_string())?;
        let pairs = runs[0].filter.iter().zip(&runs[1].filter).chain(
            runs[0]
                .prediction
                .values()
                .chain(runs[0].smoothing.values())
                .flatten()
                .zip(runs[1].prediction.values().chain(runs[1].smoothing.values()).flatten()),
        );
        for (r, w) in pairs {
            let gap = leading_gap(r, w, 1);
            worst = worst.max(gap);
            ensure(gap <= 1e-8, || format!("{preset:?} ({}|{}): gap {gap:e}", r.t, r.s))?;
        }
    }
    Ok(format!("T1 and T2, N = 50, filter/prediction/smoothing; worst gap {worst:e}"))
}

fn theory(preset: WienerPreset) -> Result<DistributedRun, String> {
    let sc = Scenario::preset(preset);
    let cfg = DistributedConfig { steps: 100, leads: vec![1, 3, 5], lags: vec![1, 3, 5] };
    let horizon = cfg.horizon_needed();
    let model = ModelBundle::from_network(&sc.network(horizon).map_err(|e| e.to_string())?, sc.k, horizon)
        .map_err(|e| e.to_string())?;
    Ok(FusionPlan::new(&model, &cfg).map_err(|e| e.to_string())?.theory().clone())
}

fn variance_ordering() -> Check {
    let mut failures = Vec::new();
    for preset in PRESETS {
        let run = theory(preset)?;
        let v = |f: &FusedEstimate| f.error_variance(1);
        let mut bad = Vec::new();
        for t in 1..=100 {
            let chain = [
                v(&run.smoothing[&5][t - 1]),
                v(&run.smoothing[&3][t - 1]),
                v(&run.smoothing[&1][t - 1]),
                v(&run.filter[t - 1]),
                v(&run.prediction[&1][t - 1]),
                v(&run.prediction[&3][t - 1]),
                v(&run.prediction[&5][t - 1]),
            ];
            if let Some(i) = chain.windows(2).position(|w| w[0] > w[1] + 1e-10) {
                bad.push((t, i, chain[i], chain[i + 1]));
            }
        }
        if let Some(&(t, i, a, b)) = bad.first() {
            let names = ["smooth5", "smooth3", "smooth1", "filter", "pred1", "pred3", "pred5"];
            failures.push(format!(
                "{preset:?}: chain broken at {} of 100 t, first t={t}: {} = {a} > {} = {b}",
                bad.len(),
                names[i],
                names[i + 1]
            ));
        }
    }
    if failures.is_empty() {
        Ok("T1 and T2, t = 1..100, seven-term chain holds".into())
    } else {
        Err(failures.join("; "))
    }
}

fn fused_dominance() -> Check {
    for preset in PRESETS {
        let run = theory(preset)?;
        for t in 1..=100 {
            let d = run.filter[t - 1].error_variance(1);
            let best = run.local_filter.iter().map(|l| l[t - 1].error_variance(1)).fold(f64::INFINITY, f64::min);
            ensure(d <= best + 1e-10, || format!("{preset:?} t={t}: fused {d} > best local {best}"))?;
        }
    }
    Ok("T1 and T2, t = 1..100".into())
}

fn monte_carlo() -> Check {
    let mut detail = Vec::new();
    for preset in PRESETS {
        let sc = Scenario::preset(preset);
        let opts = McOptions { replications: 10_000, ..McOptions::from_scenario(&sc) };
        let rep = run_monte_carlo(&sc, &opts).map_err(|e| e.to_string())?;
        for t in [10, 50, 100] {
            let p = rep.point(SeriesKind::Filter, t).expect("point");
            ensure(p.relative_deviation.abs() <= 0.05, || format!("{preset:?} t={t}: relative deviation {}", p.relative_deviation))?;
            detail.push(format!("{preset:?} t={t} {:+.4}", p.relative_deviation));
        }
        let z = rep.bias.iter().map(|b| b.max_z).fold(0.0, f64::max);
        ensure(z <= 4.0, || format!("{preset:?}: bias z-score {z}"))?;
        detail.push(format!("{preset:?} max bias z {z:.2}"));
    }
    Ok(format!("M = 10^4: {}", detail.join(", ")))
}

fn second_order_equivalence() -> Check {
    let grid = [1, 3, 5, 7, 10];
    let mut detail = Vec::new();
    let mut failures = Vec::new();
    for preset in PRESETS {
        let sc = Scenario::preset(preset);
        let net = sc.network(10).map_err(|e| e.to_string())?;
        let rep = verify_second_order_equivalence(&net, sc.k, &grid, 100_000, sc.seed).map_err(|e| e.to_string())?;
        for (name, c) in [("Γ_y", &rep.observations), ("Γ_yx", &rep.signal_cross)] {
            detail.push(format!("{preset:?} {name}: {} stats, max z {:.2}", c.statistics, c.max_z));
            if !c.within(3.0, 1e-10) {
                failures.push(format!(
                    "{preset:?} {name}: {} of {} statistics beyond 3 SE (max z {:.2} at {}), exact deviation {:e}",
                    c.beyond_3se, c.statistics, c.max_z, c.worst, c.deterministic_deviation
                ));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("5x5 grid, M = 10^5: {}", detail.join("; ")))
    } else {
        Err(failures.join("; "))
    }
}

fn timing() -> Check {
    let t1 = Scenario::preset(WienerPreset::T1);
    let t2 = Scenario::preset(WienerPreset::T2);
    let big1 = timing_benchmark(&t1, &[1000], 5).map_err(|e| e.to_string())?;
    let big2 = timing_benchmark(&t2, &[1000], 5).map_err(|e| e.to_string())?;
    let grid: Vec<usize> = (50..=500).step_by(50).collect();
    let g1 = timing_benchmark(&t1, &grid, 5).map_err(|e| e.to_string())?;
    let g2 = timing_benchmark(&t2, &grid, 5).map_err(|e| e.to_string())?;
    let r1000 = big1.ratio(1000).expect("ratio");
    ensure(r1000 > 1.0, || format!("T1 ratio at N=1000 is {r1000}"))?;
    let listed = |t: &tessfusion::simkit::TimingTable| t.ratios.iter().map(|(n, r)| format!("{n}:{r:.2}")).collect::<Vec<_>>().join(" ");
    ensure(g1.slope >= 0.0, || format!("T1 ratio slope over 50..500 is {:.2e}; ratios {}", g1.slope, listed(&g1)))?;
    for ((n, a), (_, b)) in g1.ratios.iter().chain(&big1.ratios).zip(g2.ratios.iter().chain(&big2.ratios)) {
        ensure(a >= b, || format!("N={n}: T1 ratio {a} < T2 ratio {b}"))?;
    }
    Ok(format!(
        "T1 ratio at 1000: {r1000:.2} (T2 {:.2}); slope over 50..500: T1 {:.2e}, T2 {:.2e}; T1 ratios {}",
        big2.ratio(1000).expect("ratio"),
        g1.slope,
        g2.slope,
        listed(&g1)
    ))
}

fn degenerate_inputs() -> Check {
    // Ω(1) = 1 + ȷ has an invertible real part but a vanishing minus component.
    let base = random_bundle(71, 1, 1, 1, 2);
    let zero = TessMatrix::zeros(1, 1);
    let r = TessMatrix::scalar(Tessarine::new(1.0, 0.0, 1.0, 0.0));
    let obs = EquivalentModel::from_parts(1, 1, vec![zero.clone()], vec![vec![zero; 3]], vec![vec![r]]).map_err(|e| e.to_string())?;
    let model = ModelBundle::new(base.signal().clone(), obs).map_err(|e| e.to_string())?;
    match filter_step(FilterState::new(0, &model).unwrap(), &TessVector::zeros(1), &model) {
        Err(Error::SingularInnovation { sensor: 0, t: 1, .. }) => {}
        other => return Err(format!("zero-divisor Ω gave {:?}", other.map(|(_, e)| e.xhat))),
    }

    let mut sc = Scenario::preset(WienerPreset::T1);
    for law in &mut sc.sensors {
        law.components[0] = ComponentFading::tied(PartLaw::constant(0.7));
    }
    sc.noise.lambdas = vec![0.5, 0.5, 0.5];
    let model = ModelBundle::from_network(&sc.network(4).unwrap(), 1, 4).map_err(|e| e.to_string())?;
    let ys = random_observations(12, 3, 1, 4);
    match run_distributed(&model, &ys, &DistributedConfig::filter_only(4)) {
        Err(Error::SingularFusion { t: 1, s: 1, .. }) => {}
        other => return Err(format!("identical sensors gave {:?}", other.map(|r| r.filter.len()))),
    }

    let base = random_bundle(31, 2, 1, 1, 6);
    let d = base.d();
    let sigma = (0..=6).map(|t| base.sigma(0, t).unwrap().clone()).collect();
    let obs = EquivalentModel::from_parts(2, 1, vec![TessMatrix::zeros(d, d)], vec![sigma], vec![vec![base.r(0, 0, 1).unwrap().clone()]])
        .map_err(|e| e.to_string())?;
    let model = ModelBundle::new(base.signal().clone(), obs).map_err(|e| e.to_string())?;
    let (_, ests) = run_filter(0, &random_observations(32, 1, d, 6)[0], &model).map_err(|e| e.to_string())?;
    for e in &ests {
        let prior = (model.a(e.t).unwrap() * &model.b(e.t).unwrap().adjoint()).hermitian_part();
        ensure(e.xhat.max_abs() == 0.0 && e.p == prior, || format!("H = 0 at t={} departs from the prior", e.t))?;
    }
    Ok("SingularInnovation, SingularFusion{t:1,s:1}, exact prior under H = 0".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("algebra laws", algebra_laws),
        ("oracle equivalence", oracle_equivalence),
        ("dimension reduction matches WL", reduction_matches_wl),
        ("error variance ordering", variance_ordering),
        ("fused dominates locals", fused_dominance),
        ("Monte Carlo consistency", monte_carlo),
        ("second-order equivalence", second_order_equivalence),
        ("timing ratio", timing),
        ("degenerate inputs", degenerate_inputs),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("acceptance {} PASS  {name} ({secs:.1} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("acceptance {} FAIL  {name} ({secs:.1} s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
