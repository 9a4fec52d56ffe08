//! The five experiments, each producing plot-ready tables.

use crate::config::{ExperimentConfig, ExperimentTag};
use anyhow::{Context, Result};
use serde::Serialize;
use tessfusion::estimator::ModelBundle;
use tessfusion::fusion::{DistributedConfig, DistributedRun, FusionPlan};
use tessfusion::simkit::{mean_error_vs_horizon, run_monte_carlo, timing_benchmark, McOptions, SeriesKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtifactKind {
    /// Values computed by the estimator recursions.
    Theory,
    /// Sample statistics over simulated replicates.
    MonteCarlo,
    /// Wall-clock measurements; not reproducible byte for byte.
    Timing,
}

/// One CSV table; every row has one cell per column.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvArtifact {
    pub name: String,
    pub kind: ArtifactKind,
    pub columns: Vec<(String, String)>,
    pub rows: Vec<Vec<String>>,
}

impl CsvArtifact {
    fn new(name: &str, kind: ArtifactKind, columns: Vec<(String, String)>) -> Self {
        CsvArtifact { name: name.to_string(), kind, columns, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn header(&self) -> Vec<&str> {
        self.columns.iter().map(|(c, _)| c.as_str()).collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentOutput {
    pub artifacts: Vec<CsvArtifact>,
    pub notes: Vec<String>,
}

/// Shortest decimal that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x}")
}

fn col(name: impl Into<String>, description: impl Into<String>) -> (String, String) {
    (name.into(), description.into())
}

const T_COL: &str = "time index t";

fn theory_run(cfg: &ExperimentConfig, leads: Vec<usize>, lags: Vec<usize>) -> Result<(DistributedRun, usize)> {
    let dc = DistributedConfig { steps: cfg.scenario.horizon, leads, lags };
    let horizon = dc.horizon_needed();
    let net = cfg.scenario.network(horizon)?;
    let model = ModelBundle::from_network(&net, cfg.k, horizon)?;
    let plan = FusionPlan::new(&model, &dc)?;
    Ok((plan.theory().clone(), model.n()))
}

fn curves(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let (run, n) = theory_run(cfg, cfg.taus.clone(), cfg.taus.clone())?;
    let mut columns = vec![col("t", T_COL), col("P_filter", "Re tr P_D(t|t)")];
    columns.extend(cfg.taus.iter().map(|tau| col(format!("P_pred_{tau}"), format!("Re tr P_D(t+{tau}|t)"))));
    columns.extend(cfg.taus.iter().map(|tau| col(format!("P_smooth_{tau}"), format!("Re tr P_D(t|t+{tau})"))));
    let mut art = CsvArtifact::new("curves_theory.csv", ArtifactKind::Theory, columns);
    for t in 1..=cfg.scenario.horizon {
        let mut row = vec![t.to_string(), num(run.filter[t - 1].error_variance(n))];
        row.extend(cfg.taus.iter().map(|tau| num(run.prediction[tau][t - 1].error_variance(n))));
        row.extend(cfg.taus.iter().map(|tau| num(run.smoothing[tau][t - 1].error_variance(n))));
        art.push(row);
    }
    Ok(ExperimentOutput { artifacts: vec![art], notes: Vec::new() })
}

fn compare_local(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let (run, n) = theory_run(cfg, Vec::new(), Vec::new())?;
    let sensors = run.local_filter.len();
    let mut columns = vec![col("t", T_COL)];
    columns.extend((1..=sensors).map(|a| col(format!("P_local_{a}"), format!("Re tr P^({a})(t|t), local filter of sensor {a}"))));
    columns.push(col("P_distributed", "Re tr P_D(t|t)"));
    let mut art = CsvArtifact::new("compare_local_theory.csv", ArtifactKind::Theory, columns);
    for t in 1..=cfg.scenario.horizon {
        let mut row = vec![t.to_string()];
        row.extend(run.local_filter.iter().map(|l| num(l[t - 1].error_variance(n))));
        row.push(num(run.filter[t - 1].error_variance(n)));
        art.push(row);
    }
    Ok(ExperimentOutput { artifacts: vec![art], notes: Vec::new() })
}

fn mean_vs_n(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let grid = cfg.mean_grid.values();
    let points = mean_error_vs_horizon(&cfg.scenario, cfg.k, &grid)?;
    let columns = vec![
        col("N", "number of observations"),
        col("mean_P_filter", "mean over t = 1..N of Re tr P_D(t|t)"),
        col("mean_relative_P_filter", "mean over t = 1..N of Re tr P_D(t|t) / Re tr Gamma_x(t,t)"),
    ];
    let mut art = CsvArtifact::new("mean_vs_N_theory.csv", ArtifactKind::Theory, columns);
    for p in points {
        art.push(vec![p.steps.to_string(), num(p.mean_variance), num(p.mean_relative)]);
    }
    Ok(ExperimentOutput { artifacts: vec![art], notes: Vec::new() })
}

fn timing(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut sc = cfg.scenario.clone();
    sc.k = cfg.k;
    let table = timing_benchmark(&sc, &cfg.n_grid.values(), cfg.timing_runs)?;
    let mut times = CsvArtifact::new(
        "timing.csv",
        ArtifactKind::Timing,
        vec![
            col("variant", "Tk: reduced processing on k*n components; WL: widely linear on 4n"),
            col("N", "number of observations"),
            col("seconds", "median wall-clock seconds of the distributed filtering pass"),
        ],
    );
    for r in &table.rows {
        times.push(vec![r.variant.label().to_string(), r.steps.to_string(), num(r.seconds)]);
    }
    let mut ratios = CsvArtifact::new(
        "timing_ratio.csv",
        ArtifactKind::Timing,
        vec![col("N", "number of observations"), col("ratio_wl_over_tk", "WL seconds / Tk seconds")],
    );
    for (n, r) in &table.ratios {
        ratios.push(vec![n.to_string(), num(*r)]);
    }
    let notes = vec![
        format!("k = {}, {} runs per point", table.k, table.runs),
        format!("least-squares slope of the ratio over N: {}", num(table.slope)),
    ];
    Ok(ExperimentOutput { artifacts: vec![times, ratios], notes })
}

fn validate(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let opts = McOptions {
        k: cfg.k,
        steps: cfg.scenario.horizon,
        leads: cfg.taus.clone(),
        lags: cfg.taus.clone(),
        replications: cfg.scenario.replications,
        seed: cfg.seed,
    };
    let report = run_monte_carlo(&cfg.scenario, &opts)?;
    let series_col = || col("series", "filter, prediction_<lead>, smoothing_<lag> or local_filter_<sensor>");
    let mut theory = CsvArtifact::new(
        "validate_theory.csv",
        ArtifactKind::Theory,
        vec![series_col(), col("t", T_COL), col("theoretical", "Re tr of the error pseudo-covariance")],
    );
    let mut mc = CsvArtifact::new(
        "validate_mc.csv",
        ArtifactKind::MonteCarlo,
        vec![
            series_col(),
            col("t", T_COL),
            col("empirical", "mean squared error summed over the four real parts"),
            col("std_error", "standard error of the empirical mean"),
            col("relative_deviation", "(empirical - theoretical) / theoretical"),
            col("within_band_95", "1 when |empirical - theoretical| <= 1.96 std_error, else 0"),
        ],
    );
    for s in &report.series {
        let label = s.kind.label();
        for p in &s.points {
            theory.push(vec![label.clone(), p.t.to_string(), num(p.theoretical)]);
            mc.push(vec![
                label.clone(),
                p.t.to_string(),
                num(p.empirical),
                num(p.std_error),
                num(p.relative_deviation),
                u8::from(p.within_band).to_string(),
            ]);
        }
    }
    let mut bias = CsvArtifact::new(
        "validate_bias.csv",
        ArtifactKind::MonteCarlo,
        vec![
            col("t", T_COL),
            col("channel", "real part r, i, j or k of the first signal components"),
            col("mean_error", "sample mean of x(t) - x_D(t|t)"),
            col("std_error", "standard error of that mean"),
        ],
    );
    let n = report.bias.first().map_or(0, |b| b.mean.len() / 4);
    for b in &report.bias {
        for (c, (m, se)) in b.mean.iter().zip(&b.std_error).enumerate() {
            let channel = if n == 1 { ["r", "i", "j", "k"][c].to_string() } else { format!("{}{}", ["r", "i", "j", "k"][c / n], c % n + 1) };
            bias.push(vec![b.t.to_string(), channel, num(*m), num(*se)]);
        }
    }
    let filter = report.series(SeriesKind::Filter).expect("filter series");
    let outside = filter.points.iter().filter(|p| !p.within_band).count();
    let mut notes = vec![
        format!("{} replications, seed {}", report.replications, report.seed),
        format!("fused filter points outside the 95% band: {outside} of {}", filter.points.len()),
        format!("largest fused-filter bias z-score: {}", num(report.bias.iter().map(|b| b.max_z).fold(0.0, f64::max))),
    ];
    if !report.precision_sufficient {
        notes.push(format!(
            "insufficient precision: 95% half-width reaches {} of the theoretical value; increase replications",
            num(report.max_relative_band)
        ));
    }
    Ok(ExperimentOutput { artifacts: vec![theory, mc, bias], notes })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let out = match cfg.tag {
        ExperimentTag::Curves => curves(cfg),
        ExperimentTag::CompareLocal => compare_local(cfg),
        ExperimentTag::MeanVsN => mean_vs_n(cfg),
        ExperimentTag::Timing => timing(cfg),
        ExperimentTag::Validate => validate(cfg),
    };
    out.with_context(|| format!("experiment {} on {}", cfg.tag.name(), cfg.config_path.display()))
}
