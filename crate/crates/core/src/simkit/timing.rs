use super::scenario::Scenario;
use super::trajectory::Simulator;
use crate::error::{Error, Result};
use crate::estimator::ModelBundle;
use crate::fusion::{run_distributed, DistributedConfig};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// `T_k`-proper estimators on `d = k·n` components.
    Tk,
    /// Widely linear estimators on the full augmented vector, `d = 4n`.
    Wl,
}

impl Variant {
    pub fn label(&self) -> &'static str {
        match self {
            Variant::Tk => "Tk",
            Variant::Wl => "WL",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub variant: Variant,
    pub steps: usize,
    /// Median wall-clock seconds of one distributed filtering pass.
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingTable {
    pub k: usize,
    pub runs: usize,
    pub rows: Vec<TimingRow>,
    /// `(N, WL seconds / T_k seconds)` in grid order.
    pub ratios: Vec<(usize, f64)>,
    /// Least-squares slope of the ratio against `N`.
    pub slope: f64,
}

impl TimingTable {
    pub fn ratio(&self, steps: usize) -> Option<f64> {
        self.ratios.iter().find(|(n, _)| *n == steps).map(|(_, r)| *r)
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

/// Least-squares slope of `y` on `x`; zero without two distinct abscissae.
pub fn fit_slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let n = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return 0.0;
    }
    points.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx
}

/// Times the full distributed filtering pass of both variants on one shared data set,
/// `runs` times per grid point. Model construction is outside the timed region.
pub fn timing_benchmark(sc: &Scenario, grid: &[usize], runs: usize) -> Result<TimingTable> {
    if runs < 5 {
        return Err(Error::InvalidParameter(format!("timing needs at least 5 runs per point, got {runs}")));
    }
    if grid.is_empty() || grid.contains(&0) {
        return Err(Error::InvalidParameter("timing grid must be non-empty with N ≥ 1".into()));
    }
    let longest = *grid.iter().max().expect("non-empty grid");
    let net = sc.network(longest)?;
    let traj = Simulator::new(sc)?.trajectory(0, longest);
    let mut rows = Vec::with_capacity(2 * grid.len());
    let mut ratios = Vec::with_capacity(grid.len());
    for &steps in grid {
        let cfg = DistributedConfig::filter_only(steps);
        let variants = [(Variant::Tk, sc.k), (Variant::Wl, 4)];
        let inputs = variants
            .iter()
            .map(|&(_, k)| {
                let model = ModelBundle::from_network(&net, k, steps)?;
                let ys: Vec<_> = traj.processed_observations(model.d()).into_iter().map(|y| y[..steps].to_vec()).collect();
                Ok((model, ys))
            })
            .collect::<Result<Vec<_>>>()?;
        // Alternating the variants exposes both to the same machine drift.
        let mut times = [Vec::with_capacity(runs), Vec::with_capacity(runs)];
        for _ in 0..runs {
            for (slot, (model, ys)) in inputs.iter().enumerate() {
                let start = Instant::now();
                std::hint::black_box(run_distributed(model, ys, &cfg)?);
                times[slot].push(start.elapsed().as_secs_f64());
            }
        }
        let [tk, wl] = times.map(median);
        rows.push(TimingRow { variant: variants[0].0, steps, seconds: tk });
        rows.push(TimingRow { variant: variants[1].0, steps, seconds: wl });
        ratios.push((steps, wl / tk));
    }
    let slope = fit_slope(&ratios.iter().map(|&(n, r)| (n as f64, r)).collect::<Vec<_>>());
    Ok(TimingTable { k: sc.k, runs, rows, ratios, slope })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_line() {
        assert!((fit_slope(&[(1.0, 3.0), (2.0, 5.0), (4.0, 9.0)]) - 2.0).abs() < 1e-12);
        assert_eq!(fit_slope(&[(1.0, 3.0)]), 0.0);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
