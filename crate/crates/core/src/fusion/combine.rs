use crate::algebra::{tess_solve_right, TessMatrix, TessVector};
use crate::error::{Error, Result};
use crate::estimator::EstimateKind;

/// Matrix-weighted combination `x̂_D(t|s) = 𝓗 [x̂^{(1)}; …; x̂^{(R)}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FusedEstimate {
    pub t: usize,
    pub s: usize,
    pub kind: EstimateKind,
    pub xhat: TessVector,
    pub p: TessMatrix,
    /// `𝓗 = 𝓞 𝓥^{-1}`, `d × R·d`.
    pub weights: TessMatrix,
}

impl FusedEstimate {
    pub fn signal_estimate(&self, n: usize) -> TessVector {
        self.xhat.head(n)
    }

    pub fn signal_error(&self, n: usize) -> TessMatrix {
        self.p.block(0, 0, n, n)
    }

    pub fn error_variance(&self, n: usize) -> f64 {
        self.p.leading_trace_re(n)
    }
}

/// Data-free part of the fusion: `𝓗` and `P_D`.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionWeights {
    pub t: usize,
    pub s: usize,
    pub weights: TessMatrix,
    pub p: TessMatrix,
}

impl FusionWeights {
    /// `𝓥 = [𝒱^{(αβ)}]`, `𝓞 = [𝒱^{(11)}, …, 𝒱^{(RR)}]`, `P_D = A(t)B^H(t) - 𝓗 𝓞^H`.
    pub fn new(t: usize, s: usize, blocks: &[Vec<TessMatrix>], prior: &TessMatrix) -> Result<Self> {
        let r = blocks.len();
        if r == 0 || blocks.iter().any(|row| row.len() != r) {
            return Err(Error::Dimension("fusion needs an R×R grid of cross-covariance blocks".into()));
        }
        let o = TessMatrix::hstack(&(0..r).map(|a| blocks[a][a].clone()).collect::<Vec<_>>());
        let v = TessMatrix::from_blocks(blocks);
        let weights = tess_solve_right(&o, &v).map_err(|e| Error::SingularFusion { t, s, source: Box::new(e) })?;
        let p = (prior - &(&weights * &o.adjoint())).hermitian_part();
        Ok(FusionWeights { t, s, weights, p })
    }

    pub fn apply(&self, locals: &[TessVector]) -> Result<TessVector> {
        let stacked = TessVector::stack(locals);
        if stacked.len() != self.weights.ncols() {
            return Err(Error::Dimension(format!(
                "fusion weights take {} components, local estimates provide {}",
                self.weights.ncols(),
                stacked.len()
            )));
        }
        Ok(self.weights.mul_vec(&stacked))
    }
}

/// Fuses the local estimates `x̂^{(α)}(t|s)` given all blocks `𝒱^{(αβ)}(t,s)` and `A(t)B^H(t)`.
pub fn fuse(t: usize, s: usize, locals: &[TessVector], blocks: &[Vec<TessMatrix>], prior: &TessMatrix) -> Result<FusedEstimate> {
    if locals.len() != blocks.len() {
        return Err(Error::Dimension(format!("{} local estimates for {} blocks", locals.len(), blocks.len())));
    }
    let w = FusionWeights::new(t, s, blocks, prior)?;
    let xhat = w.apply(locals)?;
    Ok(FusedEstimate { t, s, kind: EstimateKind::for_times(t, s), xhat, p: w.p, weights: w.weights })
}
