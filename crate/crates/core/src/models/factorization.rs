//! Time-indexed factor pairs `(A(t), B(t))` with memoized evaluation.

use crate::algebra::{AugmentationMap, TessMatrix};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use std::fmt;
use std::sync::{Arc, OnceLock};

pub type MatrixFn = Arc<dyn Fn(usize) -> TessMatrix + Send + Sync>;
pub type RealKernel = Arc<dyn Fn(usize, usize) -> DMatrix<f64> + Send + Sync>;

/// Lazily evaluated `A(t)`, `B(t)` on `t ∈ {0,…,horizon}`; each value is computed at most once.
#[derive(Clone)]
pub struct FactorTable {
    rows: usize,
    cols: usize,
    horizon: usize,
    a: MatrixFn,
    b: MatrixFn,
    cache_a: Arc<[OnceLock<TessMatrix>]>,
    cache_b: Arc<[OnceLock<TessMatrix>]>,
}

fn empty_cache(horizon: usize) -> Arc<[OnceLock<TessMatrix>]> {
    (0..=horizon).map(|_| OnceLock::new()).collect()
}

impl FactorTable {
    pub fn new(rows: usize, cols: usize, horizon: usize, a: MatrixFn, b: MatrixFn) -> Result<Self> {
        let table = FactorTable { rows, cols, horizon, a, b, cache_a: empty_cache(horizon), cache_b: empty_cache(horizon) };
        for t in [0, horizon] {
            for m in [table.a(t)?, table.b(t)?] {
                if m.shape() != (rows, cols) {
                    return Err(Error::Dimension(format!(
                        "factor at t={t} is {:?}, expected {:?}",
                        m.shape(),
                        (rows, cols)
                    )));
                }
            }
        }
        Ok(table)
    }

    pub fn from_vecs(a: Vec<TessMatrix>, b: Vec<TessMatrix>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::Dimension(format!("factor tables of lengths {} and {}", a.len(), b.len())));
        }
        let (rows, cols) = a[0].shape();
        if a.iter().chain(b.iter()).any(|m| m.shape() != (rows, cols)) {
            return Err(Error::Dimension("factor tables have inconsistent shapes".into()));
        }
        let horizon = a.len() - 1;
        let cache = |v: Vec<TessMatrix>| -> Arc<[OnceLock<TessMatrix>]> { v.into_iter().map(OnceLock::from).collect() };
        let unreachable: MatrixFn = Arc::new(|t| panic!("factor table queried outside its horizon at t={t}"));
        Ok(FactorTable {
            rows,
            cols,
            horizon,
            a: unreachable.clone(),
            b: unreachable,
            cache_a: cache(a),
            cache_b: cache(b),
        })
    }

    fn check(&self, t: usize) -> Result<()> {
        if t > self.horizon {
            return Err(Error::OutOfHorizon { t, horizon: self.horizon });
        }
        Ok(())
    }

    pub fn a(&self, t: usize) -> Result<&TessMatrix> {
        self.check(t)?;
        Ok(self.cache_a[t].get_or_init(|| (self.a)(t)))
    }

    pub fn b(&self, t: usize) -> Result<&TessMatrix> {
        self.check(t)?;
        Ok(self.cache_b[t].get_or_init(|| (self.b)(t)))
    }

    /// `A(t)B^H(s)` for `t ≥ s`, else `B(t)A^H(s)`.
    pub fn gamma(&self, t: usize, s: usize) -> Result<TessMatrix> {
        if t >= s {
            Ok(self.a(t)? * &self.b(s)?.adjoint())
        } else {
            Ok(self.b(t)? * &self.a(s)?.adjoint())
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn rank(&self) -> usize {
        self.cols
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }
}

impl fmt::Debug for FactorTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FactorTable")
            .field("rows", &self.rows)
            .field("rank", &self.cols)
            .field("horizon", &self.horizon)
            .finish()
    }
}

/// Factorization `Γ_x̄(t,s) = Ā(t)B̄^H(s)` (`t ≥ s`) of an augmented signal with `n` components.
#[derive(Clone, Debug)]
pub struct AugmentedFactorization {
    n: usize,
    table: FactorTable,
}

impl AugmentedFactorization {
    pub fn new(n: usize, p: usize, horizon: usize, a: MatrixFn, b: MatrixFn) -> Result<Self> {
        Ok(AugmentedFactorization { n, table: FactorTable::new(4 * n, p, horizon, a, b)? })
    }

    pub fn from_vecs(n: usize, a: Vec<TessMatrix>, b: Vec<TessMatrix>) -> Result<Self> {
        let table = FactorTable::from_vecs(a, b)?;
        if table.rows() != 4 * n {
            return Err(Error::Dimension(format!("augmented factor has {} rows, expected {}", table.rows(), 4 * n)));
        }
        Ok(AugmentedFactorization { n, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.table.rank()
    }

    pub fn horizon(&self) -> usize {
        self.table.horizon()
    }

    pub fn a(&self, t: usize) -> Result<&TessMatrix> {
        self.table.a(t)
    }

    pub fn b(&self, t: usize) -> Result<&TessMatrix> {
        self.table.b(t)
    }

    pub fn gamma(&self, t: usize, s: usize) -> Result<TessMatrix> {
        self.table.gamma(t, s)
    }

    pub fn table(&self) -> &FactorTable {
        &self.table
    }
}

/// `Γ_x̄(t,s)` assembled from the factors.
pub fn gamma_augmented(f: &AugmentedFactorization, t: usize, s: usize) -> Result<TessMatrix> {
    f.gamma(t, s)
}

/// Factorization of the `k·n` leading components `x_k`; `k = 4` is the full augmented vector.
#[derive(Clone, Debug)]
pub struct TkFactorization {
    k: usize,
    n: usize,
    table: FactorTable,
}

impl TkFactorization {
    pub fn new(k: usize, n: usize, table: FactorTable) -> Result<Self> {
        validate_k(k)?;
        if table.rows() != k * n {
            return Err(Error::Dimension(format!("T_{k} factor has {} rows, expected {}", table.rows(), k * n)));
        }
        Ok(TkFactorization { k, n, table })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Processing dimension `k·n`.
    pub fn dim(&self) -> usize {
        self.k * self.n
    }

    pub fn rank(&self) -> usize {
        self.table.rank()
    }

    pub fn horizon(&self) -> usize {
        self.table.horizon()
    }

    pub fn a(&self, t: usize) -> Result<&TessMatrix> {
        self.table.a(t)
    }

    pub fn b(&self, t: usize) -> Result<&TessMatrix> {
        self.table.b(t)
    }

    pub fn gamma(&self, t: usize, s: usize) -> Result<TessMatrix> {
        self.table.gamma(t, s)
    }
}

pub fn validate_k(k: usize) -> Result<()> {
    match k {
        1 | 2 | 4 => Ok(()),
        _ => Err(Error::InvalidParameter(format!("k must be 1, 2 or 4, got {k}"))),
    }
}

/// Keeps the top `k·n` rows of both factors.
///
/// For `k < 4`, factor columns that vanish identically over the horizon in either factor
/// contribute nothing to `Γ_{x_k}` and are dropped, which yields the compact rank.
pub fn restrict(f: &AugmentedFactorization, k: usize) -> Result<TkFactorization> {
    validate_k(k)?;
    if k == 4 {
        return TkFactorization::new(4, f.n(), f.table().clone());
    }
    let rows = k * f.n();
    let horizon = f.horizon();
    let mut a = Vec::with_capacity(horizon + 1);
    let mut b = Vec::with_capacity(horizon + 1);
    for t in 0..=horizon {
        a.push(f.a(t)?.rows_range(0, rows));
        b.push(f.b(t)?.rows_range(0, rows));
    }
    let scale = a.iter().chain(b.iter()).fold(0.0_f64, |m, x| m.max(x.max_abs()));
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let column_vanishes = |ms: &[TessMatrix], c: usize| ms.iter().all(|m| m.columns_range(c, 1).max_abs() <= tol);
    let keep: Vec<usize> = (0..f.rank()).filter(|&c| !column_vanishes(&a, c) && !column_vanishes(&b, c)).collect();
    let select = |m: &TessMatrix| TessMatrix::hstack(&keep.iter().map(|&c| m.columns_range(c, 1)).collect::<Vec<_>>());
    let (a, b) = if keep.is_empty() {
        (vec![TessMatrix::zeros(rows, 1); horizon + 1], vec![TessMatrix::zeros(rows, 1); horizon + 1])
    } else {
        (a.iter().map(select).collect(), b.iter().map(select).collect())
    };
    TkFactorization::new(k, f.n(), FactorTable::from_vecs(a, b)?)
}

/// Real covariance `Γ_{x^r}(t,s)` of the stacked real parts.
#[derive(Clone)]
pub struct RealCovarianceSpec {
    n: usize,
    kernel: RealKernel,
}

impl RealCovarianceSpec {
    pub fn new(n: usize, kernel: RealKernel) -> Self {
        RealCovarianceSpec { n, kernel }
    }

    /// Real covariance implied by an augmented factorization through `Γ_x̄ = 4𝓙Γ_{x^r}𝓙^H`.
    pub fn from_augmented(f: &AugmentedFactorization) -> Self {
        let f = f.clone();
        let map = AugmentationMap::new(f.n());
        RealCovarianceSpec::new(
            f.n(),
            Arc::new(move |t, s| {
                let g = f.gamma(t, s).expect("real covariance queried outside the factorization horizon");
                map.real_from_augmented(&g)
            }),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self, t: usize, s: usize) -> DMatrix<f64> {
        (self.kernel)(t, s)
    }

    /// `E[x_{j,ν}²(t)]` in real-stack order.
    pub fn second_moments(&self, t: usize) -> Vec<f64> {
        self.gamma(t, t).diagonal().iter().copied().collect()
    }
}

impl fmt::Debug for RealCovarianceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealCovarianceSpec").field("n", &self.n).finish()
    }
}
