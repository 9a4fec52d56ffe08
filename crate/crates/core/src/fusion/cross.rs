use crate::algebra::TessMatrix;
use crate::error::{Error, Result};
use crate::estimator::{FilterState, ModelBundle};

/// Cross quantities of one instant for the ordered pair `(α,β)` and its reverse.
#[derive(Debug, Clone)]
pub struct CrossRecord {
    pub t: usize,
    /// `J^{(αβ)}(t-1,t) = E[e^{(α)}(t-1) ε^{(β)H}(t)]`.
    pub lag_ab: TessMatrix,
    pub lag_ba: TessMatrix,
    /// `Ω^{(αβ)}(t) = E[ε^{(α)}(t) ε^{(β)H}(t)]`.
    pub omega_ab: TessMatrix,
    pub omega_ba: TessMatrix,
    /// `J^{(αβ)}(t) = E[e^{(α)}(t) ε^{(β)H}(t)]`.
    pub j_ab: TessMatrix,
    pub j_ba: TessMatrix,
    /// `Q^{(αβ)}(t) = E[e^{(α)}(t) e^{(β)H}(t)]`; `Q^{(βα)} = Q^{(αβ)H}`.
    pub q_ab: TessMatrix,
}

/// Cross-covariance recursion between the local filters of sensors `α` and `β`.
#[derive(Debug, Clone)]
pub struct CrossState {
    alpha: usize,
    beta: usize,
    t: usize,
    q_ab: TessMatrix,
    history: Vec<CrossRecord>,
}

impl CrossState {
    /// `Q^{(αβ)}(0) = 0`, `J^{(αβ)}(0,1) = 0`.
    pub fn new(alpha: usize, beta: usize, model: &ModelBundle) -> Result<Self> {
        model.check_sensor(alpha)?;
        model.check_sensor(beta)?;
        let p = model.p();
        Ok(CrossState { alpha, beta, t: 0, q_ab: TessMatrix::zeros(p, p), history: Vec::new() })
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.alpha, self.beta)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn q(&self) -> &TessMatrix {
        &self.q_ab
    }

    pub fn history(&self) -> &[CrossRecord] {
        &self.history
    }

    pub fn record(&self, t: usize) -> Result<&CrossRecord> {
        t.checked_sub(1).and_then(|i| self.history.get(i)).ok_or_else(|| {
            Error::MissingHistory(format!(
                "pair ({},{}) has no cross record for t={t} (processed up to {})",
                self.alpha + 1,
                self.beta + 1,
                self.t
            ))
        })
    }

    /// `Q^{(αβ)}(t)`, zero at `t = 0`.
    pub fn q_at(&self, t: usize) -> Result<TessMatrix> {
        if t == 0 {
            return Ok(TessMatrix::zeros(self.q_ab.nrows(), self.q_ab.ncols()));
        }
        Ok(self.record(t)?.q_ab.clone())
    }

    /// `𝒱^{(αβ)}(t,t) = A(t) Q^{(αβ)}(t) A^H(t)` at the current instant.
    pub fn covariance(&self, model: &ModelBundle) -> Result<TessMatrix> {
        let a = model.a(self.t)?;
        Ok(&(a * &self.q_ab) * &a.adjoint())
    }
}

fn check_filters(cs: &CrossState, fa: &FilterState, fb: &FilterState, t: usize) -> Result<()> {
    if fa.sensor() != cs.alpha || fb.sensor() != cs.beta {
        return Err(Error::InvalidParameter(format!(
            "pair ({},{}) fed with filters of sensors ({},{})",
            cs.alpha + 1,
            cs.beta + 1,
            fa.sensor() + 1,
            fb.sensor() + 1
        )));
    }
    if fa.t() < t || fb.t() < t {
        return Err(Error::MissingHistory(format!("cross step to t={t} needs both local filters at t={t}")));
    }
    Ok(())
}

/// Advances the pair to `t = cs.t() + 1`; both local filters must have processed `t`.
pub fn cross_filter_step(mut cs: CrossState, fa: &FilterState, fb: &FilterState, model: &ModelBundle) -> Result<CrossState> {
    let t = cs.t + 1;
    check_filters(&cs, fa, fb, t)?;
    let (alpha, beta) = (cs.alpha, cs.beta);
    let (ra, rb) = (fa.record(t)?, fb.record(t)?);
    if alpha == beta {
        // The pair is the local filter itself.
        let zero = TessMatrix::zeros(ra.j.nrows(), ra.j.ncols());
        let rec = CrossRecord {
            t,
            lag_ab: zero.clone(),
            lag_ba: zero,
            omega_ab: ra.omega.clone(),
            omega_ba: ra.omega.clone(),
            j_ab: ra.j.clone(),
            j_ba: ra.j.clone(),
            q_ab: ra.q.clone(),
        };
        cs.q_ab = ra.q.clone();
        cs.t = t;
        cs.history.push(rec);
        return Ok(cs);
    }
    let a = model.a(t)?;
    let a_h = a.adjoint();
    let (ha, hb) = (model.h(alpha, t)?, model.h(beta, t)?);
    let q_ba_prev = cs.q_ab.adjoint();
    let lag_ab = &(&(&fa.q_at(t - 1)? - &cs.q_ab) * &a_h) * &hb.adjoint();
    let lag_ba = &(&(&fb.q_at(t - 1)? - &q_ba_prev) * &a_h) * &ha.adjoint();
    let omega_ab = model.r(alpha, beta, t)? + &(&(ha * a) * &(&rb.j - &lag_ab));
    let omega_ba = model.r(beta, alpha, t)? + &(&(hb * a) * &(&ra.j - &lag_ba));
    let j_ab = &lag_ab + &(&ra.gain * &omega_ab);
    let j_ba = &lag_ba + &(&rb.gain * &omega_ba);
    let q_ab = &(&cs.q_ab + &(&ra.gain * &j_ba.adjoint())) + &(&lag_ab * &rb.gain.adjoint());
    cs.q_ab = q_ab.clone();
    cs.t = t;
    cs.history.push(CrossRecord { t, lag_ab, lag_ba, omega_ab, omega_ba, j_ab, j_ba, q_ab });
    Ok(cs)
}

/// `𝒱^{(αβ)}(t,s) = A(t) Q^{(αβ)}(s) A^H(t)` for `t > s`.
pub fn cross_predict(cs: &CrossState, s: usize, t: usize, model: &ModelBundle) -> Result<TessMatrix> {
    if t <= s {
        return Err(Error::TimeOrder(format!("cross prediction target t={t} must exceed s={s}")));
    }
    let a = model.a(t)?;
    Ok(&(a * &cs.q_at(s)?) * &a.adjoint())
}

/// `𝒱^{(αβ)}(t,t)` from the history.
pub fn cross_filter_covariance(cs: &CrossState, t: usize, model: &ModelBundle) -> Result<TessMatrix> {
    let a = model.a(t)?;
    Ok(&(a * &cs.q_at(t)?) * &a.adjoint())
}
