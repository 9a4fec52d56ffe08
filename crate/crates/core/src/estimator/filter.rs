use super::bundle::ModelBundle;
use super::result::EstimateResult;
use crate::algebra::{tess_inverse, TessMatrix, TessVector};
use crate::error::{Error, Result};

/// Quantities of one processed instant, kept for smoothing and fusion.
#[derive(Debug, Clone)]
pub struct FilterRecord {
    pub t: usize,
    /// `ε(t)`.
    pub innovation: TessVector,
    /// `Ω(t) = E[ε(t) ε^H(t)]`.
    pub omega: TessMatrix,
    pub omega_inv: TessMatrix,
    /// `Ω^{-1}(t) ε(t)`.
    pub omega_inv_innovation: TessVector,
    /// `J(t) = E[e(t) ε^H(t)]`, `p×d`.
    pub j: TessMatrix,
    /// `G(t) = J(t) Ω^{-1}(t)`.
    pub gain: TessMatrix,
    /// `e(t)` after the update.
    pub e: TessVector,
    /// `Q(t) = E[e(t) e^H(t)]` after the update.
    pub q: TessMatrix,
}

/// Local filter of one sensor after processing `y(1..=t)`.
#[derive(Debug, Clone)]
pub struct FilterState {
    sensor: usize,
    t: usize,
    e: TessVector,
    q: TessMatrix,
    history: Vec<FilterRecord>,
}

impl FilterState {
    /// `e(0) = 0_p`, `Q(0) = 0_{p×p}`.
    pub fn new(sensor: usize, model: &ModelBundle) -> Result<Self> {
        model.check_sensor(sensor)?;
        let p = model.p();
        Ok(FilterState { sensor, t: 0, e: TessVector::zeros(p), q: TessMatrix::zeros(p, p), history: Vec::new() })
    }

    pub fn sensor(&self) -> usize {
        self.sensor
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn e(&self) -> &TessVector {
        &self.e
    }

    pub fn q(&self) -> &TessMatrix {
        &self.q
    }

    pub fn history(&self) -> &[FilterRecord] {
        &self.history
    }

    /// Record of instant `t ≥ 1`.
    pub fn record(&self, t: usize) -> Result<&FilterRecord> {
        t.checked_sub(1).and_then(|i| self.history.get(i)).ok_or_else(|| {
            Error::MissingHistory(format!("sensor {} has no filter record for t={t} (processed up to {})", self.sensor + 1, self.t))
        })
    }

    /// `Q(t)`, with `Q(0) = 0`.
    pub fn q_at(&self, t: usize) -> Result<TessMatrix> {
        if t == 0 {
            return Ok(TessMatrix::zeros(self.q.nrows(), self.q.ncols()));
        }
        Ok(self.record(t)?.q.clone())
    }

    /// `e(t)`, with `e(0) = 0`.
    pub fn e_at(&self, t: usize) -> Result<TessVector> {
        if t == 0 {
            return Ok(TessVector::zeros(self.e.len()));
        }
        Ok(self.record(t)?.e.clone())
    }
}

fn check_innovation(omega: &TessMatrix, sensor: usize, t: usize) -> Result<()> {
    for (index, w) in omega.diagonal().into_iter().enumerate() {
        if !(w.r > 0.0) {
            return Err(Error::IndefiniteInnovation { sensor, t, index, value: w.r });
        }
    }
    Ok(())
}

/// `P = A(t)[B^H(t) - Q A^H(t)]`, Hermitian-symmetrized.
pub(crate) fn error_matrix(a: &TessMatrix, b: &TessMatrix, q: &TessMatrix) -> TessMatrix {
    (a * &(&b.adjoint() - &(q * &a.adjoint()))).hermitian_part()
}

/// One step of the local filter: consumes `y(t)` for `t = state.t() + 1`.
pub fn filter_step(mut state: FilterState, y: &TessVector, model: &ModelBundle) -> Result<(FilterState, EstimateResult)> {
    let (alpha, t) = (state.sensor, state.t + 1);
    if y.len() != model.d() {
        return Err(Error::Dimension(format!("observation has {} components, model dimension is {}", y.len(), model.d())));
    }
    let (a, b, h) = (model.a(t)?, model.b(t)?, model.h(alpha, t)?);
    let ha = h * a;
    let innovation = y - &ha.mul_vec(&state.e);
    let j = &(&b.adjoint() - &(&state.q * &a.adjoint())) * &h.adjoint();
    let omega = &(model.r(alpha, alpha, t)? + model.sigma(alpha, t)?) + &(&ha * &j);
    check_innovation(&omega, alpha, t)?;
    let omega_inv = tess_inverse(&omega).map_err(|e| Error::SingularInnovation { sensor: alpha, t, source: Box::new(e) })?;
    let gain = &j * &omega_inv;
    let omega_inv_innovation = omega_inv.mul_vec(&innovation);
    state.e = &state.e + &gain.mul_vec(&innovation);
    // Q is Hermitian; without projection its skew part grows geometrically on long horizons.
    state.q = (&state.q + &(&gain * &j.adjoint())).hermitian_part();
    state.t = t;
    let xhat = a.mul_vec(&state.e);
    let p = error_matrix(a, b, &state.q);
    state.history.push(FilterRecord {
        t,
        innovation,
        omega,
        omega_inv,
        omega_inv_innovation,
        j,
        gain,
        e: state.e.clone(),
        q: state.q.clone(),
    });
    Ok((state, EstimateResult::new(t, t, xhat, p)))
}

/// `x̂(t|s) = A(t)e(s)` and `P(t|s) = A(t)[B^H(t) - Q(s)A^H(t)]` for `t > s`, where `s = state.t()`.
pub fn predict(state: &FilterState, t: usize, model: &ModelBundle) -> Result<EstimateResult> {
    predict_from(state, state.t, t, model)
}

/// Prediction from any processed instant `s` of the filter history.
pub fn predict_from(state: &FilterState, s: usize, t: usize, model: &ModelBundle) -> Result<EstimateResult> {
    if t <= s {
        return Err(Error::TimeOrder(format!("prediction target t={t} must exceed s={s}")));
    }
    let (a, b) = (model.a(t)?, model.b(t)?);
    let (e, q) = (state.e_at(s)?, state.q_at(s)?);
    Ok(EstimateResult::new(t, s, a.mul_vec(&e), error_matrix(a, b, &q)))
}

/// Filter estimate `x̂(t|t)` recomputed from the history.
pub fn filter_estimate(state: &FilterState, t: usize, model: &ModelBundle) -> Result<EstimateResult> {
    let (a, b) = (model.a(t)?, model.b(t)?);
    let (e, q) = (state.e_at(t)?, state.q_at(t)?);
    Ok(EstimateResult::new(t, t, a.mul_vec(&e), error_matrix(a, b, &q)))
}

/// Runs the filter over `y(1..=N)`, returning the final state and every `x̂(t|t)`.
pub fn run_filter(sensor: usize, ys: &[TessVector], model: &ModelBundle) -> Result<(FilterState, Vec<EstimateResult>)> {
    let mut state = FilterState::new(sensor, model)?;
    let mut out = Vec::with_capacity(ys.len());
    for y in ys {
        let (next, est) = filter_step(state, y, model)?;
        state = next;
        out.push(est);
    }
    Ok((state, out))
}
