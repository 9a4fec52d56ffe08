use crate::algebra::TessMatrix;
use crate::error::{Error, Result};
use crate::models::{restrict, TkFactorization};
use crate::sensing::{build_equivalent_model, EquivalentModel, SensorNetwork};

/// Signal factorization and equivalent observation model on a common `d = k·n` dimension.
#[derive(Debug, Clone)]
pub struct ModelBundle {
    signal: TkFactorization,
    observation: EquivalentModel,
    horizon: usize,
}

impl ModelBundle {
    pub fn new(signal: TkFactorization, observation: EquivalentModel) -> Result<Self> {
        if signal.k() != observation.k() || signal.n() != observation.n() {
            return Err(Error::Dimension(format!(
                "signal factorization is T_{} on {} components, observation model is T_{} on {}",
                signal.k(),
                signal.n(),
                observation.k(),
                observation.n()
            )));
        }
        let horizon = signal.horizon().min(observation.horizon());
        Ok(ModelBundle { signal, observation, horizon })
    }

    /// Restricted factorization plus equivalent model of a network, valid on `0..=horizon`.
    pub fn from_network(net: &SensorNetwork, k: usize, horizon: usize) -> Result<Self> {
        let observation = build_equivalent_model(net, k, horizon)?;
        ModelBundle::new(restrict(net.signal(), k)?, observation)
    }

    pub fn k(&self) -> usize {
        self.signal.k()
    }

    pub fn n(&self) -> usize {
        self.signal.n()
    }

    /// Processing dimension `d = k·n`.
    pub fn d(&self) -> usize {
        self.signal.dim()
    }

    /// Factor rank `p`.
    pub fn p(&self) -> usize {
        self.signal.rank()
    }

    pub fn sensors(&self) -> usize {
        self.observation.sensors()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn signal(&self) -> &TkFactorization {
        &self.signal
    }

    pub fn observation(&self) -> &EquivalentModel {
        &self.observation
    }

    pub(crate) fn check_time(&self, t: usize) -> Result<()> {
        if t > self.horizon {
            return Err(Error::OutOfHorizon { t, horizon: self.horizon });
        }
        Ok(())
    }

    pub(crate) fn check_sensor(&self, sensor: usize) -> Result<()> {
        if sensor >= self.sensors() {
            return Err(Error::InvalidParameter(format!("sensor index {sensor} with {} sensors", self.sensors())));
        }
        Ok(())
    }

    pub fn a(&self, t: usize) -> Result<&TessMatrix> {
        self.check_time(t)?;
        self.signal.a(t)
    }

    pub fn b(&self, t: usize) -> Result<&TessMatrix> {
        self.check_time(t)?;
        self.signal.b(t)
    }

    /// `Γ_{x_k}(t,s)`.
    pub fn gamma(&self, t: usize, s: usize) -> Result<TessMatrix> {
        self.check_time(t.max(s))?;
        self.signal.gamma(t, s)
    }

    pub fn h(&self, sensor: usize, t: usize) -> Result<&TessMatrix> {
        self.check_time(t)?;
        self.check_sensor(sensor)?;
        self.observation.h(sensor, t)
    }

    pub fn sigma(&self, sensor: usize, t: usize) -> Result<&TessMatrix> {
        self.check_time(t)?;
        self.check_sensor(sensor)?;
        self.observation.sigma(sensor, t)
    }

    pub fn r(&self, alpha: usize, beta: usize, t: usize) -> Result<&TessMatrix> {
        self.check_time(t)?;
        self.check_sensor(alpha)?;
        self.check_sensor(beta)?;
        self.observation.r(alpha, beta, t)
    }
}
