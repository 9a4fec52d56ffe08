use super::cross::CrossState;
use crate::algebra::TessMatrix;
use crate::error::{Error, Result};
use crate::estimator::{FilterState, ModelBundle, SmootherState};

/// Histories of one sensor pair: both local filters and their cross recursion.
#[derive(Debug, Clone, Copy)]
pub struct PairHistory<'a> {
    pub alpha: &'a FilterState,
    pub beta: &'a FilterState,
    pub cross: &'a CrossState,
}

/// `𝒱^{(αβ)}(t,s) = E[x̂^{(α)}(t|s) x̂^{(β)H}(t|s)]` for a fixed `t` and running `s ≥ t`.
#[derive(Debug, Clone)]
pub struct CrossSmootherState {
    alpha: usize,
    beta: usize,
    t: usize,
    s: usize,
    /// `M^{(αβ)}(t,s) = E[x̂^{(α)}(t|s) e^{(β)H}(s)]`.
    m_ab: TessMatrix,
    m_ba: TessMatrix,
    /// `𝓛^{(αβ)}(t,s) = E[x̂^{(α)}(t|s-1) ε^{(β)H}(s)]` of the last step.
    l_ab: Option<TessMatrix>,
    v: TessMatrix,
}

impl CrossSmootherState {
    /// `M^{(αβ)}(t,t) = A(t) Q^{(αβ)}(t)` and `𝒱^{(αβ)}(t,t) = A(t) Q^{(αβ)}(t) A^H(t)`.
    pub fn new(cross: &CrossState, t: usize, model: &ModelBundle) -> Result<Self> {
        if t == 0 || t > cross.t() {
            return Err(Error::MissingHistory(format!("cross smoother start t={t} needs a cross record (processed up to {})", cross.t())));
        }
        let a = model.a(t)?;
        let q = cross.q_at(t)?;
        let (alpha, beta) = cross.pair();
        Ok(CrossSmootherState {
            alpha,
            beta,
            t,
            s: t,
            m_ab: a * &q,
            m_ba: a * &q.adjoint(),
            l_ab: None,
            v: &(a * &q) * &a.adjoint(),
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn covariance(&self) -> &TessMatrix {
        &self.v
    }

    pub fn m_ab(&self) -> &TessMatrix {
        &self.m_ab
    }

    pub fn m_ba(&self) -> &TessMatrix {
        &self.m_ba
    }

    pub fn l_ab(&self) -> Option<&TessMatrix> {
        self.l_ab.as_ref()
    }
}

/// Advances `s → s + 1`; `sa` and `sb` are the local smoothers of `x(t)` already advanced to `s + 1`.
pub fn cross_smooth_step(
    mut cx: CrossSmootherState,
    sa: &SmootherState,
    sb: &SmootherState,
    pair: PairHistory<'_>,
    model: &ModelBundle,
) -> Result<CrossSmootherState> {
    let s = cx.s + 1;
    if sa.sensor() != cx.alpha || sb.sensor() != cx.beta || pair.cross.pair() != (cx.alpha, cx.beta) {
        return Err(Error::InvalidParameter(format!("cross smoother of pair ({},{}) fed with other sensors", cx.alpha + 1, cx.beta + 1)));
    }
    if sa.t() != cx.t || sb.t() != cx.t || sa.s() != s || sb.s() != s {
        return Err(Error::TimeOrder(format!(
            "cross smoother at (t={}, s={s}) needs local smoothers at that point, got (t={}, s={}) and (t={}, s={})",
            cx.t,
            sa.t(),
            sa.s(),
            sb.t(),
            sb.s()
        )));
    }
    let missing = || Error::MissingHistory(format!("local smoother step to s={s} carries no gain"));
    let (la, lb) = (sa.gain().ok_or_else(missing)?, sb.gain().ok_or_else(missing)?);
    let (ma_prev, mb_prev) = (sa.m_prev().ok_or_else(missing)?, sb.m_prev().ok_or_else(missing)?);
    if cx.alpha == cx.beta {
        // 𝓛^{(αα)} = 0 and M^{(αα)} = M^{(α)}: only the local smoother's own update remains.
        let omega = &pair.alpha.record(s)?.omega;
        cx.v = &cx.v + &(&(la * omega) * &la.adjoint());
        cx.m_ab = sa.m().clone();
        cx.m_ba = sa.m().clone();
        cx.l_ab = Some(TessMatrix::zeros(la.nrows(), la.ncols()));
        cx.s = s;
        return Ok(cx);
    }
    let a_h = model.a(s)?.adjoint();
    let (ha, hb) = (model.h(cx.alpha, s)?, model.h(cx.beta, s)?);
    let rec = pair.cross.record(s)?;
    let (ga, gb) = (&pair.alpha.record(s)?.gain, &pair.beta.record(s)?.gain);
    let l_ab = &(&(ma_prev - &cx.m_ab) * &a_h) * &hb.adjoint();
    let l_ba = &(&(mb_prev - &cx.m_ba) * &a_h) * &ha.adjoint();
    let dv = &(&(la * &l_ba.adjoint()) + &(&l_ab * &lb.adjoint())) + &(&(la * &rec.omega_ab) * &lb.adjoint());
    cx.v = &cx.v + &dv;
    cx.m_ab = &(&cx.m_ab + &(&l_ab * &gb.adjoint())) + &(la * &rec.j_ba.adjoint());
    cx.m_ba = &(&cx.m_ba + &(&l_ba * &ga.adjoint())) + &(lb * &rec.j_ab.adjoint());
    cx.l_ab = Some(l_ab);
    cx.s = s;
    Ok(cx)
}
