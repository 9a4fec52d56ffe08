//! Second-order equivalent measurement models `z_k = H_k x_k + noise`.

use super::network::{check_properness, SensorNetwork};
use crate::algebra::{build_dx_from_real, AugmentationMap, Part, TessMatrix};
use crate::error::{Error, Result};
use crate::models::validate_k;
use nalgebra::DMatrix;

/// Per-sensor `H(t)`, `Σ(t)` and per-pair `R(t)` on `d = k·n` components.
///
/// Fading and noise laws are time-invariant, so `H` and `R` are stored once.
#[derive(Debug, Clone)]
pub struct EquivalentModel {
    k: usize,
    n: usize,
    horizon: usize,
    h: Vec<TessMatrix>,
    sigma: Vec<Vec<TessMatrix>>,
    r: Vec<Vec<TessMatrix>>,
}

impl EquivalentModel {
    /// `sigma[α]` holds `Σ^{(α)}(t)` for `t = 0..=horizon`; `r[α][β] = R^{(αβ)}`.
    pub fn from_parts(
        k: usize,
        n: usize,
        h: Vec<TessMatrix>,
        sigma: Vec<Vec<TessMatrix>>,
        r: Vec<Vec<TessMatrix>>,
    ) -> Result<Self> {
        validate_k(k)?;
        let d = k * n;
        let sensors = h.len();
        if sensors == 0 || sigma.len() != sensors || r.len() != sensors || r.iter().any(|row| row.len() != sensors) {
            return Err(Error::Dimension("equivalent model needs H, Σ and R for every sensor".into()));
        }
        let horizon = sigma[0].len().checked_sub(1).ok_or_else(|| Error::Dimension("empty Σ sequence".into()))?;
        let square = |m: &TessMatrix| m.shape() == (d, d);
        if !h.iter().all(square)
            || !sigma.iter().all(|s| s.len() == horizon + 1 && s.iter().all(square))
            || !r.iter().flatten().all(square)
        {
            return Err(Error::Dimension(format!("equivalent model matrices must be {d}×{d}")));
        }
        Ok(EquivalentModel { k, n, horizon, h, sigma, r })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.k * self.n
    }

    pub fn sensors(&self) -> usize {
        self.h.len()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    fn check(&self, t: usize) -> Result<()> {
        if t > self.horizon {
            return Err(Error::OutOfHorizon { t, horizon: self.horizon });
        }
        Ok(())
    }

    pub fn h(&self, sensor: usize, t: usize) -> Result<&TessMatrix> {
        self.check(t)?;
        Ok(&self.h[sensor])
    }

    pub fn sigma(&self, sensor: usize, t: usize) -> Result<&TessMatrix> {
        self.check(t)?;
        Ok(&self.sigma[sensor][t])
    }

    pub fn r(&self, alpha: usize, beta: usize, t: usize) -> Result<&TessMatrix> {
        self.check(t)?;
        Ok(&self.r[alpha][beta])
    }
}

/// `Π^{(α)} = E[D^{γ^{(α)}}] = 𝓙 diag(μ^r) 𝓙^H`.
pub fn wl_gain_mean(net: &SensorNetwork, sensor: usize, t: usize) -> TessMatrix {
    build_dx_from_real(&net.fading(sensor).mean_stack(t))
}

/// `Σ̄^{(α)}(t) = Δ^{(α)}(t,t) - Π Γ_x̄(t,t) Π^H` with `Δ = 4𝓙(E[γ^r γ^{rT}] ∘ Γ_{x^r}(t,t))𝓙^H`.
pub fn wl_sigma(net: &SensorNetwork, sensor: usize, t: usize) -> Result<TessMatrix> {
    let law = net.fading(sensor);
    let mu = law.mean_stack(t);
    let second = law.covariance_stack(t) + &mu * mu.transpose();
    let gx = net.real_covariance().gamma(t, t);
    let map = AugmentationMap::new(net.n());
    let delta = map.augmented_from_real(&second.component_mul(&gx));
    let pi = wl_gain_mean(net, sensor, t);
    let gbar = net.signal().gamma(t, t)?;
    Ok((&delta - &(&(&pi * &gbar) * &pi.adjoint())).hermitian_part())
}

/// Leading `d×d` block of `4𝓙((C_γ - diag C_γ) ∘ Γ_{x^r}(t,t))𝓙^H`: the contribution of
/// dependence between fading parts of one component, zero for independent parts.
fn coupling_correction(net: &SensorNetwork, sensor: usize, t: usize, d: usize) -> TessMatrix {
    let cov = net.fading(sensor).covariance_stack(t);
    let off = &cov - DMatrix::from_diagonal(&cov.diagonal());
    if off.iter().all(|v| *v == 0.0) {
        return TessMatrix::zeros(d, d);
    }
    let gx = net.real_covariance().gamma(t, t);
    AugmentationMap::new(net.n()).augmented_from_real(&off.component_mul(&gx)).block(0, 0, d, d)
}

fn check_horizon(net: &SensorNetwork, horizon: usize) -> Result<()> {
    if horizon > net.horizon() {
        return Err(Error::OutOfHorizon { t: horizon, horizon: net.horizon() });
    }
    Ok(())
}

/// Closed-form `H_k`, `Σ_k`, `R_k` for `k ∈ {1, 2}`; `k = 4` defers to [`build_wl_equivalent_model`].
pub fn build_equivalent_model(net: &SensorNetwork, k: usize, horizon: usize) -> Result<EquivalentModel> {
    validate_k(k)?;
    if k == 4 {
        return build_wl_equivalent_model(net, horizon);
    }
    check_horizon(net, horizon)?;
    check_properness(net, k).into_result()?;
    let n = net.n();
    let d = k * n;
    let mut hs = Vec::with_capacity(net.sensors());
    let mut sigmas = Vec::with_capacity(net.sensors());
    for alpha in 0..net.sensors() {
        let comps = &net.fading(alpha).components;
        let mut h = TessMatrix::zeros(d, d);
        for (i, c) in comps.iter().enumerate() {
            if k == 1 {
                h.set(i, i, c.mean(Part::R).into());
            } else {
                let (mr, mi) = (c.mean(Part::R), c.mean(Part::I));
                let (diag, off) = (0.5 * (mr + mi), 0.5 * (mr - mi));
                h.set(i, i, diag.into());
                h.set(i + n, i + n, diag.into());
                h.set(i, i + n, off.into());
                h.set(i + n, i, off.into());
            }
        }
        hs.push(h);
        let mut per_t = Vec::with_capacity(horizon + 1);
        for t in 0..=horizon {
            let ex2 = net.real_covariance().second_moments(t);
            let mut s = TessMatrix::zeros(d, d);
            for (i, c) in comps.iter().enumerate() {
                let e = |p: Part| ex2[p.index() * n + i];
                if k == 1 {
                    s.set(i, i, (4.0 * c.variance(Part::R) * e(Part::R)).into());
                } else {
                    let phi_r = 2.0 * c.variance(Part::R) * e(Part::R);
                    let phi_i = 2.0 * c.variance(Part::I) * e(Part::I);
                    s.set(i, i, (phi_r + phi_i).into());
                    s.set(i + n, i + n, (phi_r + phi_i).into());
                    s.set(i, i + n, (phi_r - phi_i).into());
                    s.set(i + n, i, (phi_r - phi_i).into());
                }
            }
            per_t.push(&s + &coupling_correction(net, alpha, t, d));
        }
        sigmas.push(per_t);
    }
    let r = (0..net.sensors())
        .map(|a| (0..net.sensors()).map(|b| net.noise().augmented_cross(a, b).block(0, 0, d, d)).collect())
        .collect();
    EquivalentModel::from_parts(k, n, hs, sigmas, r)
}

/// Full widely linear model on the augmented observation; needs no properness.
pub fn build_wl_equivalent_model(net: &SensorNetwork, horizon: usize) -> Result<EquivalentModel> {
    check_horizon(net, horizon)?;
    let hs = (0..net.sensors()).map(|a| wl_gain_mean(net, a, 1)).collect();
    let sigmas = (0..net.sensors())
        .map(|a| (0..=horizon).map(|t| wl_sigma(net, a, t)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let r = (0..net.sensors())
        .map(|a| (0..net.sensors()).map(|b| net.noise().augmented_cross(a, b)).collect())
        .collect();
    EquivalentModel::from_parts(4, net.n(), hs, sigmas, r)
}
