use super::bundle::ModelBundle;
use super::filter::{filter_estimate, FilterState};
use super::result::EstimateResult;
use crate::algebra::TessMatrix;
use crate::error::{Error, Result};

/// Fixed-point smoother of `x(t)` given `y(1..=s)`.
#[derive(Debug, Clone)]
pub struct SmootherState {
    sensor: usize,
    t: usize,
    s: usize,
    /// `M(t,s) = E[x̂(t|s) e^H(s)]`, `d×p`.
    m: TessMatrix,
    /// `M(t,s-1)`; `None` at `s = t`.
    m_prev: Option<TessMatrix>,
    /// `L(t,s)` of the last step; `None` at `s = t`.
    gain: Option<TessMatrix>,
    estimate: EstimateResult,
}

impl SmootherState {
    /// Starts at `s = t` from the filter history, with `M(t,t) = A(t)Q(t)`.
    pub fn new(filter: &FilterState, t: usize, model: &ModelBundle) -> Result<Self> {
        if t == 0 || t > filter.t() {
            return Err(Error::MissingHistory(format!("smoother start t={t} needs a filter record (processed up to {})", filter.t())));
        }
        let m = model.a(t)? * &filter.q_at(t)?;
        Ok(SmootherState { sensor: filter.sensor(), t, s: t, m, m_prev: None, gain: None, estimate: filter_estimate(filter, t, model)? })
    }

    pub fn sensor(&self) -> usize {
        self.sensor
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn m(&self) -> &TessMatrix {
        &self.m
    }

    /// `M(t,s-1)`, present after the first step.
    pub fn m_prev(&self) -> Option<&TessMatrix> {
        self.m_prev.as_ref()
    }

    /// `L(t,s)` of the last step.
    pub fn gain(&self) -> Option<&TessMatrix> {
        self.gain.as_ref()
    }

    pub fn estimate(&self) -> &EstimateResult {
        &self.estimate
    }
}

/// Advances `s → s + 1` using the filter record of `s + 1`.
pub fn smooth_step(mut sm: SmootherState, filter: &FilterState, model: &ModelBundle) -> Result<SmootherState> {
    if filter.sensor() != sm.sensor {
        return Err(Error::InvalidParameter(format!(
            "smoother of sensor {} fed with filter of sensor {}",
            sm.sensor + 1,
            filter.sensor() + 1
        )));
    }
    let s = sm.s + 1;
    let rec = filter.record(s)?;
    let (a, h) = (model.a(s)?, model.h(sm.sensor, s)?);
    let cross = &(&(model.b(sm.t)? - &sm.m) * &a.adjoint()) * &h.adjoint();
    let l = &cross * &rec.omega_inv;
    sm.estimate.xhat = &sm.estimate.xhat + &l.mul_vec(&rec.innovation);
    sm.estimate.p = (&sm.estimate.p - &(&(&l * &rec.omega) * &l.adjoint())).hermitian_part();
    let m = &sm.m + &(&l * &rec.j.adjoint());
    sm.m_prev = Some(std::mem::replace(&mut sm.m, m));
    sm.s = s;
    sm.estimate = EstimateResult::new(sm.t, s, sm.estimate.xhat, sm.estimate.p);
    sm.gain = Some(l);
    Ok(sm)
}

/// `x̂(t|s)` for `s > t` by running the smoother from `s = t`.
pub fn smooth(filter: &FilterState, t: usize, s: usize, model: &ModelBundle) -> Result<EstimateResult> {
    if s <= t {
        return Err(Error::TimeOrder(format!("smoothing needs s > t, got t={t}, s={s}")));
    }
    let mut sm = SmootherState::new(filter, t, model)?;
    while sm.s < s {
        sm = smooth_step(sm, filter, model)?;
    }
    Ok(sm.estimate)
}
