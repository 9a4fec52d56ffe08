//! Fading gain distributions.

use crate::algebra::Part;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Distribution of one real fading part; support must lie in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "lowercase")]
pub enum PartLaw {
    Uniform { a: f64, b: f64 },
    Discrete { values: Vec<f64>, probs: Vec<f64> },
    Bernoulli { p: f64 },
}

fn in_unit(v: f64) -> bool {
    (0.0..=1.0).contains(&v)
}

impl PartLaw {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match self {
            PartLaw::Uniform { a, b } => {
                if !(in_unit(*a) && in_unit(*b) && a <= b) {
                    return bad(format!("uniform[{a}, {b}] must satisfy 0 ≤ a ≤ b ≤ 1"));
                }
            }
            PartLaw::Discrete { values, probs } => {
                if values.is_empty() || values.len() != probs.len() {
                    return bad("discrete law needs equally many values and probabilities".into());
                }
                if let Some(v) = values.iter().find(|v| !in_unit(**v)) {
                    return bad(format!("discrete value {v} lies outside [0, 1]"));
                }
                if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
                    return bad("discrete probabilities must be nonnegative".into());
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return bad(format!("discrete probabilities sum to {total}, not 1"));
                }
            }
            PartLaw::Bernoulli { p } => {
                if !in_unit(*p) {
                    return bad(format!("Bernoulli probability {p} lies outside [0, 1]"));
                }
            }
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        match self {
            PartLaw::Uniform { a, b } => 0.5 * (a + b),
            PartLaw::Discrete { values, probs } => values.iter().zip(probs).map(|(v, p)| v * p).sum(),
            PartLaw::Bernoulli { p } => *p,
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            PartLaw::Uniform { a, b } => (b - a) * (b - a) / 12.0,
            PartLaw::Discrete { values, probs } => {
                let m = self.mean();
                values.iter().zip(probs).map(|(v, p)| p * (v - m) * (v - m)).sum()
            }
            PartLaw::Bernoulli { p } => p * (1.0 - p),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            PartLaw::Uniform { a, b } => a + (b - a) * rng.random::<f64>(),
            PartLaw::Discrete { values, probs } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (v, p) in values.iter().zip(probs) {
                    acc += p;
                    if u < acc {
                        return *v;
                    }
                }
                *values.last().expect("validated non-empty")
            }
            PartLaw::Bernoulli { p } => {
                if rng.random::<f64>() < *p {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// A point mass at `v`.
    pub fn constant(v: f64) -> Self {
        PartLaw::Discrete { values: vec![v], probs: vec![1.0] }
    }
}

/// Fading of one signal component: each part reads one of the `sources` draws.
///
/// Parts mapped to the same source are equal in every draw; distinct sources are independent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentFading {
    pub sources: Vec<PartLaw>,
    /// Source index for parts `r, ι, ȷ, κ`.
    pub part_source: [usize; 4],
}

impl ComponentFading {
    /// All four parts share one draw.
    pub fn tied(law: PartLaw) -> Self {
        ComponentFading { sources: vec![law], part_source: [0; 4] }
    }

    /// `γ_r = γ_ȷ` from `law_rj` and `γ_ι = γ_κ` from `law_ik`.
    pub fn paired(law_rj: PartLaw, law_ik: PartLaw) -> Self {
        ComponentFading { sources: vec![law_rj, law_ik], part_source: [0, 1, 0, 1] }
    }

    pub fn independent(laws: [PartLaw; 4]) -> Self {
        ComponentFading { sources: laws.to_vec(), part_source: [0, 1, 2, 3] }
    }

    pub fn validate(&self) -> Result<()> {
        for (p, &s) in self.part_source.iter().enumerate() {
            if s >= self.sources.len() {
                return Err(Error::InvalidParameter(format!(
                    "part {} refers to source {s} but only {} sources exist",
                    Part::ALL[p].symbol(),
                    self.sources.len()
                )));
            }
        }
        self.sources.iter().try_for_each(PartLaw::validate)
    }

    pub fn law(&self, part: Part) -> &PartLaw {
        &self.sources[self.part_source[part.index()]]
    }

    pub fn mean(&self, part: Part) -> f64 {
        self.law(part).mean()
    }

    pub fn variance(&self, part: Part) -> f64 {
        self.law(part).variance()
    }

    pub fn covariance(&self, a: Part, b: Part) -> f64 {
        if self.part_source[a.index()] == self.part_source[b.index()] {
            self.variance(a)
        } else {
            0.0
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 4] {
        let draws: Vec<f64> = self.sources.iter().map(|l| l.sample(rng)).collect();
        self.part_source.map(|s| draws[s])
    }
}

/// Fading law of one sensor over all `n` components; time-invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FadingLaw {
    pub components: Vec<ComponentFading>,
}

impl FadingLaw {
    pub fn new(components: Vec<ComponentFading>) -> Result<Self> {
        let law = FadingLaw { components };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidParameter("fading law has no components".into()));
        }
        self.components.iter().try_for_each(ComponentFading::validate)
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    /// Means of `γ^r` in real-stack order; `t` is accepted for time-varying extensions.
    pub fn mean_stack(&self, _t: usize) -> DVector<f64> {
        let n = self.n();
        DVector::from_fn(4 * n, |idx, _| self.components[idx % n].mean(Part::ALL[idx / n]))
    }

    /// Covariance of `γ^r` in real-stack order.
    pub fn covariance_stack(&self, _t: usize) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(4 * n, 4 * n, |a, b| {
            if a % n != b % n {
                0.0
            } else {
                self.components[a % n].covariance(Part::ALL[a / n], Part::ALL[b / n])
            }
        })
    }

    pub fn sample_stack<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        let n = self.n();
        let mut out = DVector::zeros(4 * n);
        for (j, c) in self.components.iter().enumerate() {
            for (p, v) in c.sample(rng).iter().enumerate() {
                out[p * n + j] = *v;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_moments() {
        let u = PartLaw::Uniform { a: 0.2, b: 0.8 };
        assert!((u.mean() - 0.5).abs() < 1e-15 && (u.variance() - 0.03).abs() < 1e-15);
        let d = PartLaw::Discrete { values: vec![0.0, 0.5, 1.0], probs: vec![0.3, 0.2, 0.5] };
        assert!((d.mean() - 0.6).abs() < 1e-15 && (d.variance() - 0.19).abs() < 1e-15);
        let b = PartLaw::Bernoulli { p: 0.9 };
        assert!((b.mean() - 0.9).abs() < 1e-15 && (b.variance() - 0.09).abs() < 1e-15);
    }

    #[test]
    fn support_outside_unit_interval_rejected() {
        assert!(PartLaw::Uniform { a: -0.1, b: 0.5 }.validate().is_err());
        assert!(PartLaw::Discrete { values: vec![0.5, 1.2], probs: vec![0.5, 0.5] }.validate().is_err());
        assert!(PartLaw::Discrete { values: vec![0.5], probs: vec![0.9] }.validate().is_err());
        assert!(PartLaw::Bernoulli { p: 1.5 }.validate().is_err());
    }

    #[test]
    fn tied_parts_are_equal() {
        let c = ComponentFading::tied(PartLaw::Uniform { a: 0.2, b: 0.8 });
        let mut rng = crate::random::substream(1, 0, 0, crate::random::Source::Fading);
        for _ in 0..100 {
            let s = c.sample(&mut rng);
            assert!(s.iter().all(|v| *v == s[0]));
        }
    }

    #[test]
    fn paired_layout() {
        let c = ComponentFading::paired(PartLaw::Bernoulli { p: 0.8 }, PartLaw::Bernoulli { p: 0.7 });
        assert_eq!(c.mean(Part::J), 0.8);
        assert_eq!(c.mean(Part::K), 0.7);
        assert_eq!(c.covariance(Part::R, Part::J), c.variance(Part::R));
        assert_eq!(c.covariance(Part::R, Part::I), 0.0);
    }
}
