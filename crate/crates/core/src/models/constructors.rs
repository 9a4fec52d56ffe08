//! Factorizations built from state-space, wide-sense Markov and ARMA descriptions.

use super::factorization::AugmentedFactorization;
use crate::algebra::{tess_solve, widely_linear_block, TessMatrix};
use crate::error::{Error, Result};
use std::sync::Arc;

pub type TransitionFn = Arc<dyn Fn(usize) -> [TessMatrix; 4] + Send + Sync>;
pub type CovarianceFn = Arc<dyn Fn(usize) -> TessMatrix + Send + Sync>;

/// `x(t+1) = F1 x + F2 x* + F3 x^ι + F4 x^κ + w(t)`, with `w` white and uncorrelated with the past.
#[derive(Clone)]
pub struct StateModel {
    pub n: usize,
    pub transition: TransitionFn,
    /// `Γ_x̄(0)`, `4n×4n`.
    pub initial_covariance: TessMatrix,
    /// `Γ_w̄(t)`, `4n×4n`.
    pub noise_covariance: CovarianceFn,
}

fn singular_at(step: usize) -> impl FnOnce(Error) -> Error {
    move |e| Error::SingularModel { step, source: Box::new(e) }
}

/// `B = Γ Φ^{-H}` for Hermitian `Γ`, computed as `(Φ^{-1} Γ)^H`.
fn right_factor(gamma: &TessMatrix, phi: &TessMatrix, step: usize) -> Result<TessMatrix> {
    Ok(tess_solve(phi, gamma).map_err(singular_at(step))?.adjoint())
}

fn augmented(n: usize, a: Vec<TessMatrix>, b: Vec<TessMatrix>) -> Result<AugmentedFactorization> {
    AugmentedFactorization::from_vecs(n, a, b)
}

/// `Ā(t) = Φ(t,0)`, `B̄(t) = Γ_x̄(t) Φ^{-H}(t,0)` with `Φ(t,0) = F̄(t-1)⋯F̄(0)`.
pub fn from_state_model(m: &StateModel, horizon: usize) -> Result<AugmentedFactorization> {
    let dim = 4 * m.n;
    if m.initial_covariance.shape() != (dim, dim) {
        return Err(Error::Dimension(format!("initial covariance must be {dim}×{dim}")));
    }
    let mut phi = TessMatrix::identity(dim);
    let mut gamma = m.initial_covariance.clone();
    let (mut a, mut b) = (Vec::with_capacity(horizon + 1), Vec::with_capacity(horizon + 1));
    for t in 0..=horizon {
        b.push(right_factor(&gamma, &phi, t)?);
        a.push(phi.clone());
        if t == horizon {
            break;
        }
        let f = widely_linear_block(&(m.transition)(t));
        if f.shape() != (dim, dim) {
            return Err(Error::Dimension(format!("transition at t={t} is not {}×{}", m.n, m.n)));
        }
        gamma = (&(&(&f * &gamma) * &f.adjoint()) + &(m.noise_covariance)(t)).hermitian_part();
        phi = &f * &phi;
    }
    augmented(m.n, a, b)
}

/// Forward construction from the covariance `Γ_z̄(t,s)` of `z̄(t) = [x̄(t); …; x̄(t-p+1)]`.
///
/// `Ā(t) = 𝒱G(t)`, `B̄(t) = 𝒱Γ_z̄(t)G^{-H}(t)`, `G(t) = M(t-1)⋯M(0)`,
/// `M(k) = Γ_z̄(k+1,k)Γ_z̄^{-1}(k)`.
pub fn from_markov(
    gamma_z: &dyn Fn(usize, usize) -> TessMatrix,
    n: usize,
    order: usize,
    horizon: usize,
) -> Result<AugmentedFactorization> {
    if order == 0 {
        return Err(Error::InvalidParameter("Markov order must be at least 1".into()));
    }
    let dim = 4 * n * order;
    let rows = 4 * n;
    let mut g = TessMatrix::identity(dim);
    let (mut a, mut b) = (Vec::with_capacity(horizon + 1), Vec::with_capacity(horizon + 1));
    for t in 0..=horizon {
        let gz = gamma_z(t, t);
        if gz.shape() != (dim, dim) {
            return Err(Error::Dimension(format!("Γ_z̄ must be {dim}×{dim}")));
        }
        a.push(g.rows_range(0, rows));
        b.push(right_factor(&gz, &g, t)?.rows_range(0, rows));
        if t == horizon {
            break;
        }
        // M(t) = Γ_z̄(t+1,t) Γ_z̄(t)^{-1} = (Γ_z̄(t)^{-1} Γ_z̄(t+1,t)^H)^H.
        let step = tess_solve(&gz, &gamma_z(t + 1, t).adjoint()).map_err(singular_at(t))?.adjoint();
        g = &step * &g;
    }
    augmented(n, a, b)
}

/// `x̄(t) = Σ F̄_k x̄(t-k) + w̄(t) + Σ Ḡ_k w̄(t-k)`, zero before `t = 0`.
#[derive(Clone, Debug)]
pub struct ArmaModel {
    pub n: usize,
    pub ar: Vec<TessMatrix>,
    pub ma: Vec<TessMatrix>,
    /// `Γ_w̄`, `4n×4n`, constant in time.
    pub noise_covariance: TessMatrix,
    /// Covariance of the initial companion state; zero when absent.
    pub initial_state_covariance: Option<TessMatrix>,
}

impl ArmaModel {
    /// Number of `4n` blocks in the companion state, `max(p, q+1)`.
    pub fn state_blocks(&self) -> usize {
        self.ar.len().max(self.ma.len() + 1)
    }

    /// Companion transition and noise loading.
    ///
    /// State block `i` carries `Σ_{l>i} F̄_l x̄(t+i-l) + Ḡ_l w̄(t+i-l)`; block 0 is `x̄(t)`.
    pub fn companion(&self) -> (TessMatrix, TessMatrix) {
        let m = 4 * self.n;
        let r = self.state_blocks();
        let mut t = TessMatrix::zeros(m * r, m * r);
        let mut load = TessMatrix::zeros(m * r, m);
        load.set_block(0, 0, &TessMatrix::identity(m));
        for i in 0..r {
            if let Some(f) = self.ar.get(i) {
                t.set_block(i * m, 0, f);
            }
            if i + 1 < r {
                t.set_block(i * m, (i + 1) * m, &TessMatrix::identity(m));
            }
            if i > 0 {
                if let Some(g) = self.ma.get(i - 1) {
                    load.set_block(i * m, 0, g);
                }
            }
        }
        (t, load)
    }
}

/// `Ā(t) = 𝒱T^t`, `B̄(t) = 𝒱Γ_ξ(t)T^{-tH}` for the companion state `ξ` of the ARMA model.
pub fn from_arma(model: &ArmaModel, horizon: usize) -> Result<AugmentedFactorization> {
    let m = 4 * model.n;
    if model.ar.iter().chain(model.ma.iter()).chain([&model.noise_covariance]).any(|x| x.shape() != (m, m)) {
        return Err(Error::Dimension(format!("ARMA coefficients and noise covariance must be {m}×{m}")));
    }
    let (tr, load) = model.companion();
    let dim = tr.nrows();
    let q = &(&load * &model.noise_covariance) * &load.adjoint();
    let mut gamma = match &model.initial_state_covariance {
        Some(c) if c.shape() == (dim, dim) => c.clone(),
        Some(_) => return Err(Error::Dimension(format!("initial state covariance must be {dim}×{dim}"))),
        None => TessMatrix::zeros(dim, dim),
    };
    // Fail fast on a singular companion matrix even before powers are needed.
    tess_solve(&tr, &TessMatrix::identity(dim)).map_err(singular_at(0))?;
    let mut power = TessMatrix::identity(dim);
    let (mut a, mut b) = (Vec::with_capacity(horizon + 1), Vec::with_capacity(horizon + 1));
    for t in 0..=horizon {
        a.push(power.rows_range(0, m));
        b.push(right_factor(&gamma, &power, t)?.rows_range(0, m));
        gamma = (&(&(&tr * &gamma) * &tr.adjoint()) + &q).hermitian_part();
        power = &tr * &power;
    }
    augmented(model.n, a, b)
}
