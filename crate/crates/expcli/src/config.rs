//! JSON experiment configuration: a scenario plus experiment defaults.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use tessfusion::models::WienerParams;
use tessfusion::sensing::{check_properness, ComponentFading, FadingLaw, PartLaw};
use tessfusion::simkit::{NoiseSpec, Scenario, ScenarioLabel, DEFAULT_SEED};

pub const SCHEMA_VERSION: u32 = 1;

/// Fading of a sensor's single component; parts sharing a law are equal in every draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "parts", rename_all = "lowercase", deny_unknown_fields)]
pub enum SensorSpec {
    Tied { law: PartLaw },
    /// `γ_r = γ_ȷ` and `γ_ι = γ_κ`.
    Paired { r_j: PartLaw, i_k: PartLaw },
    Independent { r: PartLaw, i: PartLaw, j: PartLaw, k: PartLaw },
}

impl SensorSpec {
    fn fading(&self) -> FadingLaw {
        let c = match self {
            SensorSpec::Tied { law } => ComponentFading::tied(law.clone()),
            SensorSpec::Paired { r_j, i_k } => ComponentFading::paired(r_j.clone(), i_k.clone()),
            SensorSpec::Independent { r, i, j, k } => ComponentFading::independent([r, i, j, k].map(Clone::clone)),
        };
        FadingLaw { components: vec![c] }
    }
}

/// `start:stop:step`, inclusive of `stop` when reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Grid {
    pub start: usize,
    pub stop: usize,
    pub step: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<usize> {
        (self.start..=self.stop).step_by(self.step).collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(format!("grid `{s}` must have the form start:stop:step"));
        };
        let num = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("grid `{s}`: `{v}` is not a non-negative integer"));
        let g = Grid { start: num(a)?, stop: num(b)?, step: num(c)? };
        if g.start == 0 || g.step == 0 || g.stop < g.start {
            return Err(format!("grid `{s}` needs 1 ≤ start ≤ stop and step ≥ 1"));
        }
        Ok(g)
    }
}

impl TryFrom<String> for Grid {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl From<Grid> for String {
    fn from(g: Grid) -> String {
        format!("{}:{}:{}", g.start, g.stop, g.step)
    }
}

fn default_replications() -> usize {
    10_000
}

fn default_taus() -> Vec<usize> {
    vec![1, 3, 5]
}

fn default_timing_runs() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentDefaults {
    /// Prediction leads and smoothing lags.
    #[serde(default = "default_taus")]
    pub taus: Vec<usize>,
    /// Horizons of `mean_vs_N`; defaults to `10:horizon:10`.
    #[serde(default)]
    pub mean_grid: Option<Grid>,
    /// Horizons of `timing` and `bench`; defaults to `50:500:50`.
    #[serde(default)]
    pub n_grid: Option<Grid>,
    #[serde(default = "default_timing_runs")]
    pub timing_runs: usize,
}

impl Default for ExperimentDefaults {
    fn default() -> Self {
        ExperimentDefaults { taus: default_taus(), mean_grid: None, n_grid: None, timing_runs: default_timing_runs() }
    }
}

/// On-disk configuration, schema version 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema_version: u32,
    #[serde(default = "custom_label")]
    pub label: ScenarioLabel,
    /// Processing dimension the scenario is declared proper for: 1, 2 or 4.
    pub k: usize,
    pub wiener: WienerParams,
    pub noise: NoiseSpec,
    /// One entry per sensor, in the order of `noise.lambdas`.
    pub sensors: Vec<Option<SensorSpec>>,
    pub horizon: usize,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub experiment: ExperimentDefaults,
}

fn custom_label() -> ScenarioLabel {
    ScenarioLabel::Custom
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ExperimentTag {
    Curves,
    CompareLocal,
    #[value(name = "mean_vs_N")]
    #[serde(rename = "mean_vs_N")]
    MeanVsN,
    Timing,
    Validate,
}

impl ExperimentTag {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentTag::Curves => "curves",
            ExperimentTag::CompareLocal => "compare_local",
            ExperimentTag::MeanVsN => "mean_vs_N",
            ExperimentTag::Timing => "timing",
            ExperimentTag::Validate => "validate",
        }
    }
}

/// Properness of the scenario for each reduced dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropernessSummary {
    pub t1: bool,
    pub t2: bool,
}

/// Fully resolved run: validated scenario, experiment choice and command-line overrides.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub config_path: PathBuf,
    pub tag: ExperimentTag,
    pub taus: Vec<usize>,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub jobs: Option<usize>,
    /// Processing dimension actually used.
    pub k: usize,
    pub mean_grid: Grid,
    pub n_grid: Grid,
    pub timing_runs: usize,
    pub scenario: Scenario,
    pub properness: PropernessSummary,
    /// Non-fatal findings, such as a requested `k` the scenario is not proper for.
    pub warnings: Vec<String>,
}

impl ExperimentConfig {
    /// SHA-256 of the canonical JSON of everything that determines the numerical output.
    pub fn hash(&self) -> String {
        let canonical = serde_json::json!({
            "tag": self.tag,
            "taus": self.taus,
            "seed": self.seed,
            "k": self.k,
            "mean_grid": self.mean_grid,
            "n_grid": self.n_grid,
            "timing_runs": self.timing_runs,
            "scenario": self.scenario,
        });
        hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
    }
}

/// Parsed and validated configuration file.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub path: PathBuf,
    pub file: ConfigFile,
    pub scenario: Scenario,
    pub properness: PropernessSummary,
}

/// Reads, schema-checks and validates a configuration; every error names the offending field or sensor.
pub fn parse_config(path: &Path) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let file: ConfigFile =
        serde_json::from_str(&text).with_context(|| format!("config {} does not match the schema", path.display()))?;
    let (scenario, properness) = build_scenario(&file).with_context(|| format!("invalid config {}", path.display()))?;
    Ok(LoadedConfig { path: path.to_path_buf(), file, scenario, properness })
}

fn build_scenario(file: &ConfigFile) -> Result<(Scenario, PropernessSummary)> {
    if file.schema_version != SCHEMA_VERSION {
        bail!("schema_version: expected {SCHEMA_VERSION}, found {}", file.schema_version);
    }
    if ![1, 2, 4].contains(&file.k) {
        bail!("k: must be 1, 2 or 4, found {}", file.k);
    }
    if file.horizon == 0 {
        bail!("horizon: must be at least 1");
    }
    if file.replications < 2 {
        bail!("replications: need at least 2, found {}", file.replications);
    }
    file.wiener.validate().context("wiener")?;
    let lambdas = &file.noise.lambdas;
    if lambdas.is_empty() {
        bail!("noise.lambdas: at least one sensor is required");
    }
    if let Some((a, l)) = lambdas.iter().enumerate().find(|(_, l)| !(l.is_finite() && **l > 0.0)) {
        bail!("noise.lambdas[{a}]: scale of sensor {} must be positive, found {l}", a + 1);
    }
    file.noise.law().context("noise.base_covariance")?;
    let mut sensors = Vec::with_capacity(lambdas.len());
    for a in 0..lambdas.len().max(file.sensors.len()) {
        let spec = match (file.sensors.get(a), lambdas.get(a)) {
            (Some(Some(spec)), Some(_)) => spec,
            (None | Some(None), _) => bail!("sensors[{a}]: missing fading block for sensor {}", a + 1),
            (Some(Some(_)), None) => {
                bail!("sensors[{a}]: sensor {} has a fading block but noise.lambdas has only {} entries", a + 1, lambdas.len())
            }
        };
        let law = spec.fading();
        law.validate().with_context(|| format!("sensors[{a}]: fading law of sensor {}", a + 1))?;
        sensors.push(law);
    }
    let scenario = Scenario {
        label: file.label,
        k: file.k,
        wiener: file.wiener,
        noise: file.noise.clone(),
        sensors,
        horizon: file.horizon,
        replications: file.replications,
        seed: file.seed.unwrap_or(DEFAULT_SEED),
    };
    let net = scenario.network(1)?;
    let properness = PropernessSummary { t1: check_properness(&net, 1).is_proper(), t2: check_properness(&net, 2).is_proper() };
    scenario.validate().with_context(|| format!("k: scenario is not T{}-proper", file.k))?;
    for &tau in &file.experiment.taus {
        if tau == 0 {
            bail!("experiment.taus: values must be ≥ 1");
        }
    }
    if file.experiment.timing_runs < 5 {
        bail!("experiment.timing_runs: need at least 5, found {}", file.experiment.timing_runs);
    }
    Ok((scenario, properness))
}

/// Command-line choices layered over a loaded configuration.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub k: Option<usize>,
    pub n_grid: Option<Grid>,
}

/// Environment variable that replaces the default output directory.
pub const OUT_DIR_ENV: &str = "TESSFUSION_OUT_DIR";

pub fn resolve(loaded: &LoadedConfig, tag: ExperimentTag, ov: &Overrides) -> Result<ExperimentConfig> {
    let mut scenario = loaded.scenario.clone();
    if let Some(seed) = ov.seed {
        scenario.seed = seed;
    }
    let mut warnings = Vec::new();
    let k = match ov.k {
        None => scenario.k,
        Some(k) if ![1, 2, 4].contains(&k) => bail!("--k must be 1, 2 or 4, found {k}"),
        Some(k) => {
            let proper = match k {
                1 => loaded.properness.t1,
                2 => loaded.properness.t2,
                _ => true,
            };
            if proper {
                k
            } else {
                warnings.push(format!(
                    "requested k={k} but the scenario is not T{k}-proper; running with its declared k={}",
                    scenario.k
                ));
                scenario.k
            }
        }
    };
    if let Some(j) = ov.jobs {
        if j == 0 {
            bail!("--jobs must be at least 1");
        }
    }
    let out_dir = ov
        .out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("tessfusion-out"));
    let ex = &loaded.file.experiment;
    let horizon = scenario.horizon;
    Ok(ExperimentConfig {
        config_path: loaded.path.clone(),
        tag,
        taus: ex.taus.clone(),
        out_dir,
        seed: scenario.seed,
        jobs: ov.jobs,
        k,
        mean_grid: ex.mean_grid.unwrap_or(Grid { start: 10.min(horizon), stop: horizon, step: 10 }),
        n_grid: ov.n_grid.or(ex.n_grid).unwrap_or(Grid { start: 50, stop: 500, step: 50 }),
        timing_runs: ex.timing_runs,
        scenario,
        properness: loaded.properness.clone(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!("50:500:50".parse::<Grid>().unwrap().values().len(), 10);
        assert_eq!("3:10:4".parse::<Grid>().unwrap().values(), vec![3, 7]);
        assert!("0:5:1".parse::<Grid>().is_err());
        assert!("5:1:1".parse::<Grid>().is_err());
        assert!("1:5".parse::<Grid>().is_err());
    }

    #[test]
    fn sensor_spec_round_trip() {
        let s = SensorSpec::Paired { r_j: PartLaw::Bernoulli { p: 0.8 }, i_k: PartLaw::Bernoulli { p: 0.7 } };
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<SensorSpec>(&json).unwrap(), s);
        assert_eq!(s.fading().components[0].part_source, [0, 1, 0, 1]);
    }
}
