use super::scenario::{Scenario, ScenarioLabel};
use super::trajectory::Simulator;
use crate::algebra::TessVector;
use crate::error::{Error, Result};
use crate::estimator::ModelBundle;
use crate::fusion::{DistributedConfig, FusionPlan};
use rayon::prelude::*;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Largest relative 95% half-width on the fused filter for which the run counts as precise.
pub const PRECISION_LIMIT: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McOptions {
    pub k: usize,
    pub steps: usize,
    pub leads: Vec<usize>,
    pub lags: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
}

impl McOptions {
    pub fn from_scenario(sc: &Scenario) -> Self {
        McOptions { k: sc.k, steps: sc.horizon, leads: Vec::new(), lags: Vec::new(), replications: sc.replications, seed: sc.seed }
    }

    fn config(&self) -> DistributedConfig {
        DistributedConfig { steps: self.steps, leads: self.leads.clone(), lags: self.lags.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeriesKind {
    Filter,
    /// `x̂_D(t+τ|t)`, reported at row `t`.
    Prediction(usize),
    /// `x̂_D(t|t+τ)`.
    Smoothing(usize),
    /// Local filter of a sensor (zero-based).
    LocalFilter(usize),
}

impl SeriesKind {
    pub fn label(&self) -> String {
        match self {
            SeriesKind::Filter => "filter".into(),
            SeriesKind::Prediction(l) => format!("prediction_{l}"),
            SeriesKind::Smoothing(l) => format!("smoothing_{l}"),
            SeriesKind::LocalFilter(a) => format!("local_filter_{}", a + 1),
        }
    }
}

/// Squared error `|x - x̂|²` summed over the four parts of the first `n` components.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub t: usize,
    /// Real part of the trace of the leading `n×n` block of `P`.
    pub theoretical: f64,
    pub empirical: f64,
    pub std_error: f64,
    pub relative_deviation: f64,
    /// `|empirical - theoretical| ≤ 1.96 SE`.
    pub within_band: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McSeries {
    pub kind: SeriesKind,
    pub points: Vec<SeriesPoint>,
}

/// Mean fused filtering error per real channel of the first `n` components.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasPoint {
    pub t: usize,
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
    /// `max |mean| / SE` over channels.
    pub max_z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MCReport {
    pub label: ScenarioLabel,
    pub k: usize,
    pub replications: usize,
    pub seed: u64,
    pub series: Vec<McSeries>,
    pub bias: Vec<BiasPoint>,
    /// Largest `1.96 SE / theoretical` of the fused filter.
    pub max_relative_band: f64,
    /// `max_relative_band ≤ PRECISION_LIMIT`; small runs report wide bands instead of failing.
    pub precision_sufficient: bool,
}

impl MCReport {
    pub fn series(&self, kind: SeriesKind) -> Option<&McSeries> {
        self.series.iter().find(|s| s.kind == kind)
    }

    pub fn point(&self, kind: SeriesKind, t: usize) -> Option<&SeriesPoint> {
        self.series(kind)?.points.iter().find(|p| p.t == t)
    }
}

fn squared_error(x: &TessVector, xhat: &TessVector) -> f64 {
    (0..x.len()).map(|i| (x.get(i) - xhat.get(i)).norm_sqr()).sum()
}

/// Per-replicate contributions, laid out `[series][t-1]` then bias `[t-1][channel]`.
struct Accumulator {
    sq: Vec<f64>,
    sq2: Vec<f64>,
    bias: Vec<f64>,
    bias2: Vec<f64>,
}

impl Accumulator {
    fn new(series: usize, steps: usize, channels: usize) -> Self {
        Accumulator {
            sq: vec![0.0; series * steps],
            sq2: vec![0.0; series * steps],
            bias: vec![0.0; steps * channels],
            bias2: vec![0.0; steps * channels],
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        for (a, b) in [(&mut self.sq, &other.sq), (&mut self.sq2, &other.sq2), (&mut self.bias, &other.bias), (&mut self.bias2, &other.bias2)] {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
    }
}

/// Local and fused estimators on simulated trajectories against their theoretical error pseudo-variances.
pub fn run_monte_carlo(sc: &Scenario, opts: &McOptions) -> Result<MCReport> {
    if opts.replications < 2 {
        return Err(Error::InvalidParameter("Monte Carlo needs at least two replications".into()));
    }
    let cfg = opts.config();
    cfg.validate()?;
    let horizon = cfg.horizon_needed();
    let net = sc.network(horizon)?;
    let model = ModelBundle::from_network(&net, opts.k, horizon)?;
    let plan = FusionPlan::new(&model, &cfg)?;
    let sim = Simulator::new(sc)?.with_seed(opts.seed);
    let (n, d, steps, sensors) = (model.n(), model.d(), opts.steps, model.sensors());
    let channels = 4 * n;

    let mut kinds = vec![SeriesKind::Filter];
    kinds.extend(opts.leads.iter().map(|&l| SeriesKind::Prediction(l)));
    kinds.extend(opts.lags.iter().map(|&l| SeriesKind::Smoothing(l)));
    kinds.extend((0..sensors).map(SeriesKind::LocalFilter));

    let replicate = |rep: usize, acc: &mut Accumulator| -> Result<()> {
        let traj = sim.trajectory(rep as u64, horizon);
        let ys = traj.processed_observations(d);
        let out = plan.apply(&ys)?;
        let x = |t: usize| traj.signal[t - 1].head(n);
        for (si, kind) in kinds.iter().enumerate() {
            for t in 1..=steps {
                let (target, est) = match kind {
                    SeriesKind::Filter => (t, &out.filter[t - 1]),
                    SeriesKind::Prediction(l) => (t + l, &out.prediction[l][t - 1]),
                    SeriesKind::Smoothing(l) => (t, &out.smoothing[l][t - 1]),
                    SeriesKind::LocalFilter(a) => (t, &out.local_filter[*a][t - 1]),
                };
                let e = squared_error(&x(target), &est.head(n));
                acc.sq[si * steps + t - 1] += e;
                acc.sq2[si * steps + t - 1] += e * e;
            }
        }
        for t in 1..=steps {
            let err = &x(t) - &out.filter[t - 1].head(n);
            for (c, v) in err.real_stack().iter().enumerate() {
                acc.bias[(t - 1) * channels + c] += v;
                acc.bias2[(t - 1) * channels + c] += v * v;
            }
        }
        Ok(())
    };

    const CHUNK: usize = 256;
    let chunks = opts.replications.div_ceil(CHUNK);
    let partials = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = Accumulator::new(kinds.len(), steps, channels);
            for rep in c * CHUNK..((c + 1) * CHUNK).min(opts.replications) {
                replicate(rep, &mut acc)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = Accumulator::new(kinds.len(), steps, channels);
    for p in &partials {
        total.merge(p);
    }

    let m = opts.replications as f64;
    let moments = |sum: f64, sum2: f64| {
        let mean = sum / m;
        let var = ((sum2 / m - mean * mean) * m / (m - 1.0)).max(0.0);
        (mean, (var / m).sqrt())
    };
    let theory = plan.theory();
    let series: Vec<McSeries> = kinds
        .iter()
        .enumerate()
        .map(|(si, kind)| {
            let points = (1..=steps)
                .map(|t| {
                    let theoretical = match kind {
                        SeriesKind::Filter => theory.filter[t - 1].error_variance(n),
                        SeriesKind::Prediction(l) => theory.prediction[l][t - 1].error_variance(n),
                        SeriesKind::Smoothing(l) => theory.smoothing[l][t - 1].error_variance(n),
                        SeriesKind::LocalFilter(a) => theory.local_filter[*a][t - 1].error_variance(n),
                    };
                    let (empirical, std_error) = moments(total.sq[si * steps + t - 1], total.sq2[si * steps + t - 1]);
                    SeriesPoint {
                        t,
                        theoretical,
                        empirical,
                        std_error,
                        relative_deviation: (empirical - theoretical) / theoretical,
                        within_band: (empirical - theoretical).abs() <= Z95 * std_error,
                    }
                })
                .collect();
            McSeries { kind: *kind, points }
        })
        .collect();
    let bias = (1..=steps)
        .map(|t| {
            let (mean, std_error): (Vec<f64>, Vec<f64>) = (0..channels)
                .map(|c| moments(total.bias[(t - 1) * channels + c], total.bias2[(t - 1) * channels + c]))
                .unzip();
            let max_z = mean.iter().zip(&std_error).map(|(mu, se)| if *se > 0.0 { mu.abs() / se } else { 0.0 }).fold(0.0, f64::max);
            BiasPoint { t, mean, std_error, max_z }
        })
        .collect();
    let max_relative_band =
        series[0].points.iter().map(|p| Z95 * p.std_error / p.theoretical).fold(0.0, f64::max);
    Ok(MCReport {
        label: sc.label,
        k: opts.k,
        replications: opts.replications,
        seed: opts.seed,
        series,
        bias,
        max_relative_band,
        precision_sufficient: max_relative_band <= PRECISION_LIMIT,
    })
}

/// Mean fused filtering error over `t = 1..=N` for one horizon `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanErrorPoint {
    pub steps: usize,
    /// `(1/N) Σ_t real tr P_D(t|t)` on the first `n` components.
    pub mean_variance: f64,
    /// `(1/N) Σ_t real tr P_D(t|t) / real tr Γ_x(t,t)`: error relative to signal power.
    pub mean_relative: f64,
}

/// Theoretical mean fused filtering error for each horizon of `grid`.
///
/// Fused filters are causal, so one pass over the longest horizon serves every prefix.
pub fn mean_error_vs_horizon(sc: &Scenario, k: usize, grid: &[usize]) -> Result<Vec<MeanErrorPoint>> {
    let longest = grid.iter().copied().max().ok_or_else(|| Error::InvalidParameter("empty horizon grid".into()))?;
    if grid.contains(&0) {
        return Err(Error::InvalidParameter("horizons must be ≥ 1".into()));
    }
    let net = sc.network(longest)?;
    let model = ModelBundle::from_network(&net, k, longest)?;
    let n = model.n();
    let plan = FusionPlan::new(&model, &DistributedConfig::filter_only(longest))?;
    let mut ps = Vec::with_capacity(longest);
    for f in &plan.theory().filter {
        let signal = net.signal().gamma(f.t, f.t)?.block(0, 0, n, n).trace().r;
        ps.push((f.error_variance(n), f.error_variance(n) / signal));
    }
    Ok(grid
        .iter()
        .map(|&steps| {
            let m = steps as f64;
            MeanErrorPoint {
                steps,
                mean_variance: ps[..steps].iter().map(|p| p.0).sum::<f64>() / m,
                mean_relative: ps[..steps].iter().map(|p| p.1).sum::<f64>() / m,
            }
        })
        .collect())
}
