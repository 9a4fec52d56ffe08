//! Scalar Wiener scenarios observed by fading sensors with correlated noise.

use crate::error::{Error, Result};
use crate::models::{restrict, validate_k, wiener, TkFactorization, WienerParams, WienerPreset};
use crate::sensing::{
    build_equivalent_model, check_properness, ComponentFading, EquivalentModel, FadingLaw, NoiseLaw, PartLaw,
    SensorNetwork,
};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScenarioLabel {
    T1,
    T2,
    Custom,
}

/// `v^{(α)}(t) = λ_α u(t)` with `Γ_{u^r} = base_covariance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub lambdas: Vec<f64>,
    pub base_covariance: [[f64; 4]; 4],
}

impl NoiseSpec {
    pub fn reference() -> Self {
        NoiseSpec {
            lambdas: vec![0.2, 0.5, 0.6],
            base_covariance: [[6.0, 0.0, 4.0, 0.0], [0.0, 6.0, 0.0, 4.0], [4.0, 0.0, 6.0, 0.0], [0.0, 4.0, 0.0, 6.0]],
        }
    }

    pub fn base_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(4, 4, |i, j| self.base_covariance[i][j])
    }

    pub fn law(&self) -> Result<NoiseLaw> {
        NoiseLaw::common(self.lambdas.clone(), self.base_matrix())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub label: ScenarioLabel,
    /// Reduced processing dimension the scenario is declared proper for.
    pub k: usize,
    pub wiener: WienerParams,
    pub noise: NoiseSpec,
    /// One fading law per sensor, each with a single component.
    pub sensors: Vec<FadingLaw>,
    pub horizon: usize,
    pub replications: usize,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 0x7E55_A21E;

fn uniform(a: f64, b: f64) -> PartLaw {
    PartLaw::Uniform { a, b }
}

fn pmf(probs: [f64; 3]) -> PartLaw {
    PartLaw::Discrete { values: vec![0.0, 0.5, 1.0], probs: probs.to_vec() }
}

fn single(c: ComponentFading) -> FadingLaw {
    FadingLaw { components: vec![c] }
}

impl Scenario {
    /// Reference three-sensor setting: continuous fading, discrete fading and missing measurements.
    pub fn preset(preset: WienerPreset) -> Self {
        let sensors = match preset {
            WienerPreset::T1 => vec![
                single(ComponentFading::tied(uniform(0.2, 0.8))),
                single(ComponentFading::tied(pmf([0.3, 0.2, 0.5]))),
                single(ComponentFading::tied(PartLaw::Bernoulli { p: 0.9 })),
            ],
            WienerPreset::T2 => vec![
                single(ComponentFading::paired(uniform(0.15, 0.45), uniform(0.1, 0.7))),
                single(ComponentFading::paired(pmf([0.3, 0.2, 0.5]), pmf([0.1, 0.6, 0.3]))),
                single(ComponentFading::paired(PartLaw::Bernoulli { p: 0.8 }, PartLaw::Bernoulli { p: 0.7 })),
            ],
        };
        Scenario {
            label: match preset {
                WienerPreset::T1 => ScenarioLabel::T1,
                WienerPreset::T2 => ScenarioLabel::T2,
            },
            k: preset.k(),
            wiener: preset.params(),
            noise: NoiseSpec::reference(),
            sensors,
            horizon: 100,
            replications: 10_000,
            seed: DEFAULT_SEED,
        }
    }

    /// Same moments per part, but every part drawn independently.
    pub fn with_independent_parts(mut self) -> Self {
        for law in &mut self.sensors {
            for c in &mut law.components {
                let laws = [0, 1, 2, 3].map(|p| c.sources[c.part_source[p]].clone());
                *c = ComponentFading::independent(laws);
            }
        }
        self
    }

    pub fn sensor_count(&self) -> usize {
        self.sensors.len()
    }

    pub fn validate(&self) -> Result<()> {
        validate_k(self.k)?;
        if self.horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be at least 1".into()));
        }
        if self.sensors.len() != self.noise.lambdas.len() {
            return Err(Error::Dimension(format!(
                "{} sensors but {} noise scales",
                self.sensors.len(),
                self.noise.lambdas.len()
            )));
        }
        for (a, s) in self.sensors.iter().enumerate() {
            s.validate().map_err(|e| Error::InvalidParameter(format!("sensor {}: {e}", a + 1)))?;
            if s.n() != 1 {
                return Err(Error::Dimension(format!("sensor {} must describe exactly one component", a + 1)));
            }
        }
        self.wiener.validate()?;
        check_properness(&self.network(self.horizon)?, self.k).into_result()
    }

    /// The sensor network over `0..=horizon`.
    pub fn network(&self, horizon: usize) -> Result<SensorNetwork> {
        let (signal, real) = wiener(self.wiener, horizon)?;
        SensorNetwork::new(signal, real, self.sensors.clone(), self.noise.law()?)
    }

    /// Factorization and equivalent model on `k·n` components over `0..=horizon`.
    pub fn model_parts(&self, k: usize, horizon: usize) -> Result<(TkFactorization, EquivalentModel)> {
        let net = self.network(horizon)?;
        let eq = build_equivalent_model(&net, k, horizon)?;
        Ok((restrict(net.signal(), k)?, eq))
    }
}
