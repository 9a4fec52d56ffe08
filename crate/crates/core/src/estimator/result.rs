use crate::algebra::{TessMatrix, TessVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimateKind {
    Filter,
    /// `x̂(t|s)` with `t = s + lead`.
    Prediction { lead: usize },
    /// `x̂(t|s)` with `s = t + lag`.
    Smoothing { lag: usize },
}

impl EstimateKind {
    pub fn for_times(t: usize, s: usize) -> Self {
        use std::cmp::Ordering::*;
        match t.cmp(&s) {
            Equal => EstimateKind::Filter,
            Greater => EstimateKind::Prediction { lead: t - s },
            Less => EstimateKind::Smoothing { lag: s - t },
        }
    }
}

/// `x̂_k(t|s)` and its error pseudo-variance `P_k(t|s)`, both on `d` components.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub t: usize,
    pub s: usize,
    pub kind: EstimateKind,
    pub xhat: TessVector,
    pub p: TessMatrix,
}

impl EstimateResult {
    pub fn new(t: usize, s: usize, xhat: TessVector, p: TessMatrix) -> Self {
        EstimateResult { t, s, kind: EstimateKind::for_times(t, s), xhat, p }
    }

    /// Estimate of the signal itself: the first `n` components.
    pub fn signal_estimate(&self, n: usize) -> TessVector {
        self.xhat.head(n)
    }

    /// Leading `n×n` block of `P`.
    pub fn signal_error(&self, n: usize) -> TessMatrix {
        self.p.block(0, 0, n, n)
    }

    /// Real part of the trace of the leading `n×n` block of `P`.
    pub fn error_variance(&self, n: usize) -> f64 {
        self.p.leading_trace_re(n)
    }
}
