use super::combine::{fuse, FusedEstimate};
use super::cross::{cross_filter_step, cross_predict, CrossState};
use super::cross_smoother::{cross_smooth_step, CrossSmootherState, PairHistory};
use crate::algebra::{TessMatrix, TessVector};
use crate::error::{Error, Result};
use crate::estimator::{predict_from, run_filter, smooth_step, EstimateResult, FilterState, ModelBundle, SmootherState};
use std::collections::BTreeMap;

/// Which distributed estimates to compute: filters for `t = 1..=steps`, predictions
/// `x̂_D(t+τ|t)` for each lead and smoothers `x̂_D(t|t+τ)` for each lag.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DistributedConfig {
    pub steps: usize,
    pub leads: Vec<usize>,
    pub lags: Vec<usize>,
}

impl DistributedConfig {
    pub fn filter_only(steps: usize) -> Self {
        DistributedConfig { steps, leads: Vec::new(), lags: Vec::new() }
    }

    pub fn max_lead(&self) -> usize {
        self.leads.iter().copied().max().unwrap_or(0)
    }

    pub fn max_lag(&self) -> usize {
        self.lags.iter().copied().max().unwrap_or(0)
    }

    /// Observations per sensor the run consumes.
    pub fn observations_needed(&self) -> usize {
        self.steps + self.max_lag()
    }

    /// Model horizon the run needs.
    pub fn horizon_needed(&self) -> usize {
        self.steps + self.max_lead().max(self.max_lag())
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::InvalidParameter("at least one filtering step is required".into()));
        }
        if self.leads.iter().chain(&self.lags).any(|&x| x == 0) {
            return Err(Error::InvalidParameter("prediction leads and smoothing lags must be at least 1".into()));
        }
        Ok(())
    }
}

/// Local and fused estimates of one distributed run.
#[derive(Debug, Clone)]
pub struct DistributedRun {
    pub config: DistributedConfig,
    /// `[α][t-1]`: `x̂^{(α)}(t|t)` for every processed observation.
    pub local_filter: Vec<Vec<EstimateResult>>,
    /// `[t-1]`: `x̂_D(t|t)`.
    pub filter: Vec<FusedEstimate>,
    /// lead `τ` → `[s-1]`: `x̂_D(s+τ|s)`.
    pub prediction: BTreeMap<usize, Vec<FusedEstimate>>,
    /// lag `τ` → `[t-1]`: `x̂_D(t|t+τ)`.
    pub smoothing: BTreeMap<usize, Vec<FusedEstimate>>,
    /// `[α][t-1]`: filter gain `G^{(α)}(t) = J Ω^{-1}`.
    pub local_gains: Vec<Vec<TessMatrix>>,
    /// `[α][t-1][j]`: smoother gain `L^{(α)}(t, t+1+j)`.
    pub smoother_gains: Vec<Vec<Vec<TessMatrix>>>,
}

fn symmetric_grid(r: usize, mut upper: impl FnMut(usize, usize) -> Result<TessMatrix>) -> Result<Vec<Vec<TessMatrix>>> {
    let mut grid: Vec<Vec<Option<TessMatrix>>> = vec![vec![None; r]; r];
    for a in 0..r {
        for b in a..r {
            let m = upper(a, b)?;
            if a != b {
                grid[b][a] = Some(m.adjoint());
            }
            grid[a][b] = Some(m);
        }
    }
    Ok(grid.into_iter().map(|row| row.into_iter().map(|m| m.expect("filled")).collect()).collect())
}

fn pair_index(r: usize, a: usize, b: usize) -> usize {
    // Row-major position of (a, b), a ≤ b, in the upper triangle.
    a * r - a * (a + 1) / 2 + b
}

/// Runs local filters, cross recursions, local and cross smoothers, and fuses at every requested point.
pub fn run_distributed(model: &ModelBundle, ys: &[Vec<TessVector>], config: &DistributedConfig) -> Result<DistributedRun> {
    config.validate()?;
    let r = model.sensors();
    if ys.len() != r {
        return Err(Error::Dimension(format!("{} observation sequences for {r} sensors", ys.len())));
    }
    let len = config.observations_needed();
    if let Some((a, y)) = ys.iter().enumerate().find(|(_, y)| y.len() < len) {
        return Err(Error::MissingHistory(format!("sensor {} has {} observations, the run needs {len}", a + 1, y.len())));
    }
    if config.horizon_needed() > model.horizon() {
        return Err(Error::OutOfHorizon { t: config.horizon_needed(), horizon: model.horizon() });
    }

    let mut filters: Vec<FilterState> = Vec::with_capacity(r);
    let mut local_filter = Vec::with_capacity(r);
    for (a, y) in ys.iter().enumerate() {
        let (state, est) = run_filter(a, &y[..len], model)?;
        filters.push(state);
        local_filter.push(est);
    }
    let mut cross = Vec::with_capacity(r * (r + 1) / 2);
    for a in 0..r {
        for b in a..r {
            let mut cs = CrossState::new(a, b, model)?;
            for _ in 0..len {
                cs = cross_filter_step(cs, &filters[a], &filters[b], model)?;
            }
            cross.push(cs);
        }
    }
    let cs = |a: usize, b: usize| &cross[pair_index(r, a, b)];

    let mut filter = Vec::with_capacity(config.steps);
    for t in 1..=config.steps {
        let a = model.a(t)?;
        let blocks = symmetric_grid(r, |x, y| Ok(&(a * &cs(x, y).q_at(t)?) * &a.adjoint()))?;
        let locals: Vec<TessVector> = (0..r).map(|x| local_filter[x][t - 1].xhat.clone()).collect();
        filter.push(fuse(t, t, &locals, &blocks, &model.gamma(t, t)?)?);
    }

    let mut prediction = BTreeMap::new();
    for &lead in &config.leads {
        let mut out = Vec::with_capacity(config.steps);
        for s in 1..=config.steps {
            let t = s + lead;
            let blocks = symmetric_grid(r, |x, y| cross_predict(cs(x, y), s, t, model))?;
            let locals = filters.iter().map(|f| Ok(predict_from(f, s, t, model)?.xhat)).collect::<Result<Vec<_>>>()?;
            out.push(fuse(t, s, &locals, &blocks, &model.gamma(t, t)?)?);
        }
        prediction.insert(lead, out);
    }

    let max_lag = config.max_lag();
    let mut smoothing: BTreeMap<usize, Vec<FusedEstimate>> = config.lags.iter().map(|&l| (l, Vec::new())).collect();
    let mut smoother_gains = vec![Vec::with_capacity(config.steps); r];
    if max_lag > 0 {
        for t in 1..=config.steps {
            let mut locals = filters.iter().map(|f| SmootherState::new(f, t, model)).collect::<Result<Vec<_>>>()?;
            let mut crosses = cross.iter().map(|c| CrossSmootherState::new(c, t, model)).collect::<Result<Vec<_>>>()?;
            let mut gains = vec![Vec::with_capacity(max_lag); r];
            let prior = model.gamma(t, t)?;
            for lag in 1..=max_lag {
                locals = locals.into_iter().zip(&filters).map(|(sm, f)| smooth_step(sm, f, model)).collect::<Result<_>>()?;
                for (g, sm) in gains.iter_mut().zip(&locals) {
                    g.push(sm.gain().expect("stepped smoother has a gain").clone());
                }
                let mut next = Vec::with_capacity(crosses.len());
                for (i, cx) in crosses.into_iter().enumerate() {
                    let (a, b) = cross[i].pair();
                    let pair = PairHistory { alpha: &filters[a], beta: &filters[b], cross: &cross[i] };
                    next.push(cross_smooth_step(cx, &locals[a], &locals[b], pair, model)?);
                }
                crosses = next;
                if let Some(out) = smoothing.get_mut(&lag) {
                    let blocks = symmetric_grid(r, |x, y| Ok(crosses[pair_index(r, x, y)].covariance().clone()))?;
                    let xs: Vec<TessVector> = locals.iter().map(|sm| sm.estimate().xhat.clone()).collect();
                    out.push(fuse(t, t + lag, &xs, &blocks, &prior)?);
                }
            }
            for (acc, g) in smoother_gains.iter_mut().zip(gains) {
                acc.push(g);
            }
        }
    }

    let local_gains = filters.iter().map(|f| f.history().iter().map(|rec| rec.gain.clone()).collect()).collect();
    Ok(DistributedRun { config: config.clone(), local_filter, filter, prediction, smoothing, local_gains, smoother_gains })
}

/// Fused estimates of one data set computed through precomputed gains and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    /// `[α][t-1]`: `x̂^{(α)}(t|t)`.
    pub local_filter: Vec<Vec<TessVector>>,
    pub filter: Vec<TessVector>,
    pub prediction: BTreeMap<usize, Vec<TessVector>>,
    pub smoothing: BTreeMap<usize, Vec<TessVector>>,
}

/// Gains and fusion weights do not depend on the data; a plan computes them once and
/// replays the linear estimators on many data sets.
#[derive(Debug, Clone)]
pub struct FusionPlan {
    theory: DistributedRun,
    a: Vec<TessMatrix>,
    ha: Vec<Vec<TessMatrix>>,
}

impl FusionPlan {
    pub fn new(model: &ModelBundle, config: &DistributedConfig) -> Result<Self> {
        let zeros = vec![vec![TessVector::zeros(model.d()); config.observations_needed()]; model.sensors()];
        let theory = run_distributed(model, &zeros, config)?;
        let a = (0..=config.horizon_needed()).map(|t| model.a(t).cloned()).collect::<Result<Vec<_>>>()?;
        let ha = (0..model.sensors())
            .map(|x| (1..=config.observations_needed()).map(|t| Ok(model.h(x, t)? * &a[t])).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(FusionPlan { theory, a, ha })
    }

    /// Error pseudo-variances and weights; the estimates in it correspond to zero data.
    pub fn theory(&self) -> &DistributedRun {
        &self.theory
    }

    pub fn config(&self) -> &DistributedConfig {
        &self.theory.config
    }

    pub fn apply(&self, ys: &[Vec<TessVector>]) -> Result<Replay> {
        let cfg = &self.theory.config;
        let len = cfg.observations_needed();
        let r = self.ha.len();
        if ys.len() != r || ys.iter().any(|y| y.len() < len) {
            return Err(Error::Dimension(format!("replay needs {r} sequences of at least {len} observations")));
        }
        let mut es = Vec::with_capacity(r);
        let mut innovations = Vec::with_capacity(r);
        let mut local_filter = Vec::with_capacity(r);
        for x in 0..r {
            let mut e = TessVector::zeros(self.a[0].ncols());
            let (mut ex, mut ix, mut fx) = (Vec::with_capacity(len), Vec::with_capacity(len), Vec::with_capacity(len));
            for t in 1..=len {
                let eps = &ys[x][t - 1] - &self.ha[x][t - 1].mul_vec(&e);
                e = &e + &self.theory.local_gains[x][t - 1].mul_vec(&eps);
                fx.push(self.a[t].mul_vec(&e));
                ex.push(e.clone());
                ix.push(eps);
            }
            es.push(ex);
            innovations.push(ix);
            local_filter.push(fx);
        }
        let filter = self
            .theory
            .filter
            .iter()
            .map(|f| f.weights.mul_vec(&TessVector::stack(&(0..r).map(|x| local_filter[x][f.t - 1].clone()).collect::<Vec<_>>())))
            .collect();
        let prediction = self
            .theory
            .prediction
            .iter()
            .map(|(&lead, fs)| {
                let v = fs
                    .iter()
                    .map(|f| {
                        let locals: Vec<TessVector> = (0..r).map(|x| self.a[f.t].mul_vec(&es[x][f.s - 1])).collect();
                        f.weights.mul_vec(&TessVector::stack(&locals))
                    })
                    .collect();
                (lead, v)
            })
            .collect();
        let smoothing = self
            .theory
            .smoothing
            .iter()
            .map(|(&lag, fs)| {
                let v = fs
                    .iter()
                    .map(|f| {
                        let locals: Vec<TessVector> = (0..r)
                            .map(|x| {
                                let mut xh = local_filter[x][f.t - 1].clone();
                                for j in 0..lag {
                                    xh = &xh + &self.theory.smoother_gains[x][f.t - 1][j].mul_vec(&innovations[x][f.t + j]);
                                }
                                xh
                            })
                            .collect();
                        f.weights.mul_vec(&TessVector::stack(&locals))
                    })
                    .collect();
                (lag, v)
            })
            .collect();
        Ok(Replay { local_filter, filter, prediction, smoothing })
    }
}
