//! Sensor networks and T_k-properness checks.

use super::equivalent::{wl_gain_mean, wl_sigma};
use super::laws::FadingLaw;
use super::noise::NoiseLaw;
use crate::algebra::{Part, TessMatrix};
use crate::error::{Error, Result};
use crate::models::{validate_k, AugmentedFactorization, RealCovarianceSpec};

/// `R` sensors observing one signal through fading gains and additive noise.
#[derive(Clone, Debug)]
pub struct SensorNetwork {
    signal: AugmentedFactorization,
    real: RealCovarianceSpec,
    fading: Vec<FadingLaw>,
    noise: NoiseLaw,
}

impl SensorNetwork {
    pub fn new(
        signal: AugmentedFactorization,
        real: RealCovarianceSpec,
        fading: Vec<FadingLaw>,
        noise: NoiseLaw,
    ) -> Result<Self> {
        let n = signal.n();
        if real.n() != n || noise.n() != n {
            return Err(Error::Dimension(format!(
                "signal has {n} components but real covariance has {} and noise has {}",
                real.n(),
                noise.n()
            )));
        }
        if fading.is_empty() || fading.len() != noise.sensors() {
            return Err(Error::Dimension(format!(
                "{} fading laws for {} noise channels",
                fading.len(),
                noise.sensors()
            )));
        }
        for (a, f) in fading.iter().enumerate() {
            f.validate()?;
            if f.n() != n {
                return Err(Error::Dimension(format!("sensor {} fading has {} components, expected {n}", a + 1, f.n())));
            }
        }
        Ok(SensorNetwork { signal, real, fading, noise })
    }

    pub fn n(&self) -> usize {
        self.signal.n()
    }

    pub fn sensors(&self) -> usize {
        self.fading.len()
    }

    pub fn horizon(&self) -> usize {
        self.signal.horizon()
    }

    pub fn signal(&self) -> &AugmentedFactorization {
        &self.signal
    }

    pub fn real_covariance(&self) -> &RealCovarianceSpec {
        &self.real
    }

    pub fn fading(&self, sensor: usize) -> &FadingLaw {
        &self.fading[sensor]
    }

    pub fn fading_laws(&self) -> &[FadingLaw] {
        &self.fading
    }

    pub fn noise(&self) -> &NoiseLaw {
        &self.noise
    }
}

/// Outcome of a properness check; `violations` lists failed conditions in check order.
#[derive(Debug, Clone, PartialEq)]
pub struct ProperReport {
    pub k: usize,
    pub violations: Vec<String>,
}

impl ProperReport {
    pub fn is_proper(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&str> {
        self.violations.first().map(String::as_str)
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.into_iter().next() {
            None => Ok(()),
            Some(v) => Err(Error::Properness(v)),
        }
    }
}

/// Largest entry of an augmented `4n×4n` matrix outside the T_k block pattern.
///
/// `k = 1` keeps the four diagonal `n×n` blocks, `k = 2` the two diagonal `2n×2n` blocks.
pub fn tk_pattern_excess(m: &TessMatrix, n: usize, k: usize) -> f64 {
    let group = |b: usize| if k == 1 { b } else { b / 2 };
    let mut worst = 0.0_f64;
    if k == 4 {
        return worst;
    }
    for bi in 0..4 {
        for bj in 0..4 {
            if group(bi) != group(bj) {
                worst = worst.max(m.block(bi * n, bj * n, n, n).max_abs());
            }
        }
    }
    worst
}

/// Times at which time-varying structure is sampled.
pub(crate) fn check_times(horizon: usize) -> Vec<usize> {
    let mut ts: Vec<usize> = (1..=horizon.min(6)).collect();
    for t in [horizon / 2, horizon] {
        if t >= 1 && !ts.contains(&t) {
            ts.push(t);
        }
    }
    ts
}

fn pattern_check(m: &TessMatrix, n: usize, k: usize, what: impl FnOnce() -> String) -> Option<String> {
    pattern_check_scaled(m, m.max_abs(), n, k, what)
}

/// `scale` bounds the magnitude of the terms `m` was computed from; round-off is judged against it.
fn pattern_check_scaled(m: &TessMatrix, scale: f64, n: usize, k: usize, what: impl FnOnce() -> String) -> Option<String> {
    let excess = tk_pattern_excess(m, n, k);
    let tol = 1e-9 * scale.max(m.max_abs()).max(f64::MIN_POSITIVE);
    (excess > tol).then(|| format!("{} is not T{k}-structured (off-pattern entry {excess:e})", what()))
}

fn moment_pairs(k: usize) -> &'static [(Part, Part)] {
    match k {
        1 => &[(Part::R, Part::I), (Part::R, Part::J), (Part::R, Part::K)],
        2 => &[(Part::R, Part::J), (Part::I, Part::K)],
        _ => &[],
    }
}

/// Checks joint T_k-properness of signal, noise and fading statistics.
pub fn check_properness(net: &SensorNetwork, k: usize) -> ProperReport {
    let mut violations = Vec::new();
    if let Err(e) = validate_k(k) {
        return ProperReport { k, violations: vec![e.to_string()] };
    }
    if k == 4 {
        return ProperReport { k, violations };
    }
    let n = net.n();
    for (alpha, law) in net.fading_laws().iter().enumerate() {
        for (j, comp) in law.components.iter().enumerate() {
            for &(a, b) in moment_pairs(k) {
                let (ma, mb) = (comp.mean(a), comp.mean(b));
                if (ma - mb).abs() > 1e-12 {
                    violations.push(format!(
                        "sensor {}, component {}: mean of part {} ({ma}) differs from mean of part {} ({mb})",
                        alpha + 1,
                        j + 1,
                        b.symbol(),
                        a.symbol()
                    ));
                }
                let (sa, sb) = (comp.variance(a).sqrt(), comp.variance(b).sqrt());
                if (sa - sb).abs() > 1e-12 {
                    violations.push(format!(
                        "sensor {}, component {}: standard deviation of part {} ({sb}) differs from that of part {} ({sa})",
                        alpha + 1,
                        j + 1,
                        b.symbol(),
                        a.symbol()
                    ));
                }
            }
        }
    }
    let times = check_times(net.horizon());
    'signal: for &t in &times {
        for &s in &times {
            match net.signal().gamma(t, s) {
                Ok(g) => {
                    if let Some(v) = pattern_check(&g, n, k, || format!("signal pseudo-autocorrelation at ({t},{s})")) {
                        violations.push(v);
                        break 'signal;
                    }
                }
                Err(e) => {
                    violations.push(e.to_string());
                    break 'signal;
                }
            }
        }
    }
    for alpha in 0..net.sensors() {
        for beta in 0..net.sensors() {
            let r = net.noise().augmented_cross(alpha, beta);
            if let Some(v) = pattern_check(&r, n, k, || format!("noise covariance of sensors ({},{})", alpha + 1, beta + 1)) {
                violations.push(v);
            }
        }
    }
    if violations.is_empty() {
        // Dependence between fading parts must not break the block pattern either.
        for alpha in 0..net.sensors() {
            if let Some(v) = pattern_check(&wl_gain_mean(net, alpha, 1), n, k, || format!("mean fading operator of sensor {}", alpha + 1)) {
                violations.push(v);
            }
            for &t in &times {
                let scale = net.signal().gamma(t, t).map(|g| g.max_abs()).unwrap_or(0.0);
                let found = match wl_sigma(net, alpha, t) {
                    Ok(sig) => pattern_check_scaled(&sig, scale, n, k, || format!("fading covariance term of sensor {} at t={t}", alpha + 1)),
                    Err(e) => Some(e.to_string()),
                };
                if let Some(v) = found {
                    violations.push(v);
                    break;
                }
            }
        }
    }
    ProperReport { k, violations }
}
