use super::scenario::Scenario;
use crate::algebra::{augment, star_product, TessVector};
use crate::error::Result;
use crate::random::{gaussian_factor, standard_normal_vector, substream, Source};
use crate::sensing::{FadingLaw, NoiseLaw};
use nalgebra::{DMatrix, DVector};

/// One realization over `t = 1..=len`; index `t - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub signal: Vec<TessVector>,
    /// `[α][t-1]`: `γ^{(α)}(t)`.
    pub gains: Vec<Vec<TessVector>>,
    pub noises: Vec<Vec<TessVector>>,
    /// `y^{(α)}(t) = γ^{(α)}(t) ⋆ x(t) + v^{(α)}(t)`.
    pub observations: Vec<Vec<TessVector>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.signal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signal.is_empty()
    }

    /// Observations as processed by a `T_k` estimator: the leading `d` entries of `ȳ^{(α)}(t)`.
    pub fn processed_observations(&self, d: usize) -> Vec<Vec<TessVector>> {
        self.observations.iter().map(|ys| ys.iter().map(|y| augment(y).head(d)).collect()).collect()
    }
}

/// Samples Wiener trajectories of a scenario with one substream per `(replicate, sensor, source)`.
#[derive(Debug, Clone)]
pub struct Simulator {
    seed: u64,
    increment_factor: DMatrix<f64>,
    noise: NoiseLaw,
    fading: Vec<FadingLaw>,
}

impl Simulator {
    pub fn new(sc: &Scenario) -> Result<Self> {
        sc.wiener.validate()?;
        Ok(Simulator {
            seed: sc.seed,
            increment_factor: gaussian_factor(&sc.wiener.matrix()),
            noise: sc.noise.law()?,
            fading: sc.sensors.clone(),
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Gaussian increments with covariance `𝓦` from `x(0) = 0`, so `Γ_{x^r}(t,s) = 𝓦 min(t,s)`.
    pub fn trajectory(&self, replicate: u64, len: usize) -> Trajectory {
        let mut srng = substream(self.seed, replicate, 0, Source::Signal);
        let mut xr = DVector::<f64>::zeros(4);
        let signal: Vec<TessVector> = (0..len)
            .map(|_| {
                xr += &self.increment_factor * standard_normal_vector(4, &mut srng);
                TessVector::from_real_stack(&xr)
            })
            .collect();
        let mut nrng = substream(self.seed, replicate, 0, Source::Noise);
        let mut noises = vec![Vec::with_capacity(len); self.fading.len()];
        for _ in 0..len {
            for (acc, v) in noises.iter_mut().zip(self.noise.sample(&mut nrng)) {
                acc.push(TessVector::from_real_stack(&v));
            }
        }
        let gains: Vec<Vec<TessVector>> = self
            .fading
            .iter()
            .enumerate()
            .map(|(a, law)| {
                let mut frng = substream(self.seed, replicate, a as u32 + 1, Source::Fading);
                (0..len).map(|_| TessVector::from_real_stack(&law.sample_stack(&mut frng))).collect()
            })
            .collect();
        let observations = gains
            .iter()
            .zip(&noises)
            .map(|(g, v)| {
                signal
                    .iter()
                    .zip(g.iter().zip(v))
                    .map(|(x, (g, v))| &star_product(g, x).expect("scalar signal and gains") + v)
                    .collect()
            })
            .collect();
        Trajectory { signal, gains, noises, observations }
    }
}

/// Trajectory `replicate` of the scenario over its horizon.
pub fn simulate_trajectory(sc: &Scenario, replicate: u64) -> Result<Trajectory> {
    Ok(Simulator::new(sc)?.trajectory(replicate, sc.horizon))
}
