//! Monte Carlo check that the equivalent model reproduces the second-order moments of `y_k`.

use super::equivalent::{build_equivalent_model, EquivalentModel};
use super::network::{check_properness, SensorNetwork};
use crate::algebra::{augment, star_product, TessMatrix, TessVector};
use crate::error::{Error, Result};
use crate::random::{gaussian_factor, standard_normal_vector, substream, Source};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

/// Agreement summary of a family of real-valued moment statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentComparison {
    /// Number of real statistics with positive standard error.
    pub statistics: usize,
    /// Largest `|empirical - analytic| / SE` over those statistics.
    pub max_z: f64,
    /// Statistics with `|empirical - analytic| > 3 SE`.
    pub beyond_3se: usize,
    /// Largest absolute deviation over all statistics.
    pub max_abs_deviation: f64,
    /// Largest absolute deviation among statistics that never varied across draws.
    pub deterministic_deviation: f64,
    /// Description of the statistic attaining `max_z`.
    pub worst: String,
}

impl MomentComparison {
    pub fn within(&self, se_multiple: f64, exact_tol: f64) -> bool {
        self.max_z <= se_multiple && self.deterministic_deviation <= exact_tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub k: usize,
    pub replications: usize,
    pub grid: Vec<usize>,
    /// `Γ_{y_k}^{(αβ)}(t,s)` against `Γ_{z_k}^{(αβ)}(t,s)`.
    pub observations: MomentComparison,
    /// `Γ_{y_k x_k}^{(α)}(t,s)` against `H^{(α)}(t) Γ_{x_k}(t,s)`.
    pub signal_cross: MomentComparison,
}

/// One entry of a second-moment matrix `E[a b^H]` between two sampled vectors.
#[derive(Debug, Clone)]
struct Stat {
    left: (usize, usize),
    right: (usize, usize),
    row: usize,
    col: usize,
    analytic: [f64; 4],
    label: String,
}

/// Moments of one replicate: observation and signal vectors at each grid node.
struct Draw {
    y: Vec<Vec<TessVector>>,
    x: Vec<TessVector>,
}

fn analytic_observation(model: &EquivalentModel, gx: &TessMatrix, a: usize, b: usize, same_time: bool, t: usize) -> Result<TessMatrix> {
    let mut g = &(model.h(a, t)? * gx) * &model.h(b, t)?.adjoint();
    if same_time {
        g = &g + model.r(a, b, t)?;
        if a == b {
            g = &g + model.sigma(a, t)?;
        }
    }
    Ok(g)
}

/// Checks `Γ_{y_k x_k} = Γ_{z_k x_k}` and `Γ_{y_k} = Γ_{z_k}` on `grid × grid` by simulation.
pub fn verify_second_order_equivalence(
    net: &SensorNetwork,
    k: usize,
    grid: &[usize],
    replications: usize,
    seed: u64,
) -> Result<EquivalenceReport> {
    check_properness(net, k).into_result()?;
    let mut grid: Vec<usize> = grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    if grid.is_empty() || grid[0] == 0 || replications < 2 {
        return Err(Error::InvalidParameter("grid times must be ≥ 1 and at least two replications are needed".into()));
    }
    let horizon = *grid.last().expect("non-empty grid");
    let model = build_equivalent_model(net, k, horizon)?;
    let (n, d, sensors) = (net.n(), model.dim(), net.sensors());
    let gx = |t: usize, s: usize| -> Result<TessMatrix> { Ok(net.signal().gamma(t, s)?.block(0, 0, d, d)) };

    let mut obs_stats = Vec::new();
    let mut cross_stats = Vec::new();
    for (ti, &t) in grid.iter().enumerate() {
        for (si, &s) in grid.iter().enumerate() {
            let g = gx(t, s)?;
            for a in 0..sensors {
                let hg = model.h(a, t)? * &g;
                for i in 0..d {
                    for j in 0..d {
                        cross_stats.push(Stat {
                            left: (a, ti),
                            right: (usize::MAX, si),
                            row: i,
                            col: j,
                            analytic: hg.get(i, j).parts(),
                            label: format!("Γ_yx sensor {} ({t},{s}) entry ({i},{j})", a + 1),
                        });
                    }
                }
                if si > ti {
                    continue;
                }
                for b in 0..sensors {
                    if si == ti && b < a {
                        continue;
                    }
                    let an = analytic_observation(&model, &g, a, b, si == ti, t)?;
                    for i in 0..d {
                        for j in 0..d {
                            if si == ti && a == b && j < i {
                                continue;
                            }
                            obs_stats.push(Stat {
                                left: (a, ti),
                                right: (b, si),
                                row: i,
                                col: j,
                                analytic: an.get(i, j).parts(),
                                label: format!("Γ_y sensors ({},{}) ({t},{s}) entry ({i},{j})", a + 1, b + 1),
                            });
                        }
                    }
                }
            }
        }
    }

    let m = 4 * n;
    let joint = DMatrix::from_fn(m * grid.len(), m * grid.len(), |r, c| {
        net.real_covariance().gamma(grid[r / m], grid[c / m])[(r % m, c % m)]
    });
    let factor = gaussian_factor(&joint);

    let draw = |rep: usize| -> Draw {
        let mut srng = substream(seed, rep as u64, 0, Source::Signal);
        let xr = &factor * standard_normal_vector(factor.ncols(), &mut srng);
        let xs: Vec<TessVector> =
            (0..grid.len()).map(|g| TessVector::from_real_stack(&xr.rows(g * m, m).into_owned())).collect();
        let mut nrng = substream(seed, rep as u64, 0, Source::Noise);
        let noises: Vec<Vec<DVector<f64>>> = (0..grid.len()).map(|_| net.noise().sample(&mut nrng)).collect();
        let y = (0..sensors)
            .map(|a| {
                let mut frng = substream(seed, rep as u64, a as u32 + 1, Source::Fading);
                (0..grid.len())
                    .map(|g| {
                        let gamma = TessVector::from_real_stack(&net.fading(a).sample_stack(&mut frng));
                        let v = TessVector::from_real_stack(&noises[g][a]);
                        let y = &star_product(&gamma, &xs[g]).expect("matching lengths") + &v;
                        augment(&y).head(d)
                    })
                    .collect()
            })
            .collect();
        let x = xs.iter().map(|x| augment(x).head(d)).collect();
        Draw { y, x }
    };

    let accumulate = |draw: &Draw, stats: &[Stat], sums: &mut [f64], squares: &mut [f64]| {
        for (idx, st) in stats.iter().enumerate() {
            let left = draw.y[st.left.0][st.left.1].get(st.row);
            let right = if st.right.0 == usize::MAX { draw.x[st.right.1].get(st.col) } else { draw.y[st.right.0][st.right.1].get(st.col) };
            let p = (left * right.star()).parts();
            for q in 0..4 {
                sums[4 * idx + q] += p[q];
                squares[4 * idx + q] += p[q] * p[q];
            }
        }
    };

    const CHUNK: usize = 2048;
    let chunks = replications.div_ceil(CHUNK);
    let (no, nc) = (4 * obs_stats.len(), 4 * cross_stats.len());
    let partials: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; 2 * (no + nc)];
            let (obs, cross) = acc.split_at_mut(2 * no);
            let (os, oq) = obs.split_at_mut(no);
            let (cs, cq) = cross.split_at_mut(nc);
            for rep in c * CHUNK..((c + 1) * CHUNK).min(replications) {
                let dr = draw(rep);
                accumulate(&dr, &obs_stats, os, oq);
                accumulate(&dr, &cross_stats, cs, cq);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; 2 * (no + nc)];
    for p in &partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    let (obs, cross) = total.split_at(2 * no);
    Ok(EquivalenceReport {
        k,
        replications,
        grid,
        observations: compare(&obs_stats, &obs[..no], &obs[no..], replications),
        signal_cross: compare(&cross_stats, &cross[..nc], &cross[nc..], replications),
    })
}

fn compare(stats: &[Stat], sums: &[f64], squares: &[f64], reps: usize) -> MomentComparison {
    let m = reps as f64;
    let mut out = MomentComparison {
        statistics: 0,
        max_z: 0.0,
        beyond_3se: 0,
        max_abs_deviation: 0.0,
        deterministic_deviation: 0.0,
        worst: String::new(),
    };
    for (idx, st) in stats.iter().enumerate() {
        for q in 0..4 {
            let mean = sums[4 * idx + q] / m;
            let var = (squares[4 * idx + q] / m - mean * mean).max(0.0) * m / (m - 1.0);
            let se = (var / m).sqrt();
            let dev = (mean - st.analytic[q]).abs();
            out.max_abs_deviation = out.max_abs_deviation.max(dev);
            if se <= 1e-14 * (1.0 + mean.abs()) {
                out.deterministic_deviation = out.deterministic_deviation.max(dev);
                continue;
            }
            out.statistics += 1;
            let z = dev / se;
            if z > 3.0 {
                out.beyond_3se += 1;
            }
            if z > out.max_z {
                out.max_z = z;
                out.worst = format!("{} part {}", st.label, ["r", "ι", "ȷ", "κ"][q]);
            }
        }
    }
    out
}
