//! Tessarine vectors and matrices stored as pairs of complex arrays.
//!
//! Every product, sum and Hermitian transpose acts independently on the `plus`
//! and `minus` components, so a tessarine matrix algebra is two complex ones.

use super::tessarine::{ComplexPair, Conjugation, Part, Tessarine};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct TessMatrix {
    plus: CMatrix,
    minus: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TessVector {
    plus: CVector,
    minus: CVector,
}

fn conj_mat(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

fn conj_vec(v: &CVector) -> CVector {
    v.map(|z| z.conj())
}

fn split_parts(p: Complex64, m: Complex64) -> [f64; 4] {
    Tessarine::from_pair(ComplexPair::new(p, m)).parts()
}

impl TessMatrix {
    /// Panics if the two components have different shapes.
    pub fn from_components(plus: CMatrix, minus: CMatrix) -> Self {
        assert_eq!(plus.shape(), minus.shape(), "component shapes differ");
        TessMatrix { plus, minus }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        TessMatrix { plus: CMatrix::zeros(rows, cols), minus: CMatrix::zeros(rows, cols) }
    }

    pub fn identity(n: usize) -> Self {
        TessMatrix { plus: CMatrix::identity(n, n), minus: CMatrix::identity(n, n) }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Tessarine) -> Self {
        let mut m = TessMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Row-major construction; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Tessarine>]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == nc), "ragged rows");
        TessMatrix::from_fn(nr, nc, |i, j| rows[i][j])
    }

    pub fn from_real(m: &DMatrix<f64>) -> Self {
        let c = m.map(|v| Complex64::new(v, 0.0));
        TessMatrix { plus: c.clone(), minus: c }
    }

    pub fn from_diagonal(d: &[Tessarine]) -> Self {
        let n = d.len();
        TessMatrix::from_fn(n, n, |i, j| if i == j { d[i] } else { Tessarine::ZERO })
    }

    pub fn scalar(t: Tessarine) -> Self {
        TessMatrix::from_diagonal(&[t])
    }

    pub fn plus(&self) -> &CMatrix {
        &self.plus
    }

    pub fn minus(&self) -> &CMatrix {
        &self.minus
    }

    pub fn into_components(self) -> (CMatrix, CMatrix) {
        (self.plus, self.minus)
    }

    pub fn nrows(&self) -> usize {
        self.plus.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.plus.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.plus.shape()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> Tessarine {
        Tessarine::from_pair(ComplexPair::new(self.plus[(i, j)], self.minus[(i, j)]))
    }

    pub fn set(&mut self, i: usize, j: usize, t: Tessarine) {
        let p = t.to_pair();
        self.plus[(i, j)] = p.plus;
        self.minus[(i, j)] = p.minus;
    }

    /// Tessarine conjugate transpose.
    pub fn adjoint(&self) -> Self {
        TessMatrix { plus: self.plus.adjoint(), minus: self.minus.adjoint() }
    }

    pub fn transpose(&self) -> Self {
        TessMatrix { plus: self.plus.transpose(), minus: self.minus.transpose() }
    }

    /// Entrywise conjugation.
    pub fn conjugate(&self, kind: Conjugation) -> Self {
        match kind {
            Conjugation::Star => TessMatrix { plus: conj_mat(&self.plus), minus: conj_mat(&self.minus) },
            Conjugation::Iota => TessMatrix { plus: self.minus.clone(), minus: self.plus.clone() },
            Conjugation::Kappa => TessMatrix { plus: conj_mat(&self.minus), minus: conj_mat(&self.plus) },
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        TessMatrix { plus: &self.plus * Complex64::new(c, 0.0), minus: &self.minus * Complex64::new(c, 0.0) }
    }

    pub fn scale_by(&self, t: Tessarine) -> Self {
        let p = t.to_pair();
        TessMatrix { plus: &self.plus * p.plus, minus: &self.minus * p.minus }
    }

    pub fn mul_vec(&self, v: &TessVector) -> TessVector {
        TessVector { plus: &self.plus * &v.plus, minus: &self.minus * &v.minus }
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        TessMatrix {
            plus: self.plus.view((r0, c0), (nr, nc)).into_owned(),
            minus: self.minus.view((r0, c0), (nr, nc)).into_owned(),
        }
    }

    pub fn rows_range(&self, r0: usize, nr: usize) -> Self {
        self.block(r0, 0, nr, self.ncols())
    }

    pub fn columns_range(&self, c0: usize, nc: usize) -> Self {
        self.block(0, c0, self.nrows(), nc)
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &TessMatrix) {
        let (nr, nc) = b.shape();
        self.plus.view_mut((r0, c0), (nr, nc)).copy_from(&b.plus);
        self.minus.view_mut((r0, c0), (nr, nc)).copy_from(&b.minus);
    }

    /// Assembles a matrix from a rectangular grid of equally sized blocks per row/column.
    pub fn from_blocks(grid: &[Vec<TessMatrix>]) -> Self {
        let row_heights: Vec<usize> = grid.iter().map(|r| r[0].nrows()).collect();
        let col_widths: Vec<usize> = grid[0].iter().map(TessMatrix::ncols).collect();
        let mut out = TessMatrix::zeros(row_heights.iter().sum(), col_widths.iter().sum());
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            assert_eq!(row.len(), col_widths.len(), "ragged block grid");
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                assert_eq!(b.shape(), (row_heights[bi], col_widths[bj]), "block shape mismatch");
                out.set_block(r0, c0, b);
                c0 += col_widths[bj];
            }
            r0 += row_heights[bi];
        }
        out
    }

    pub fn hstack(blocks: &[TessMatrix]) -> Self {
        TessMatrix::from_blocks(&[blocks.to_vec()])
    }

    pub fn vstack(blocks: &[TessMatrix]) -> Self {
        let grid: Vec<Vec<TessMatrix>> = blocks.iter().map(|b| vec![b.clone()]).collect();
        TessMatrix::from_blocks(&grid)
    }

    pub fn block_diag(blocks: &[TessMatrix]) -> Self {
        let nr: usize = blocks.iter().map(TessMatrix::nrows).sum();
        let nc: usize = blocks.iter().map(TessMatrix::ncols).sum();
        let mut out = TessMatrix::zeros(nr, nc);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.nrows();
            c0 += b.ncols();
        }
        out
    }

    /// The real matrix of one part.
    pub fn part(&self, p: Part) -> DMatrix<f64> {
        DMatrix::from_fn(self.nrows(), self.ncols(), |i, j| {
            split_parts(self.plus[(i, j)], self.minus[(i, j)])[p.index()]
        })
    }

    /// Real part of the trace of the leading `n×n` block.
    pub fn leading_trace_re(&self, n: usize) -> f64 {
        (0..n).map(|i| self.get(i, i).r).sum()
    }

    pub fn trace(&self) -> Tessarine {
        Tessarine::from_pair(ComplexPair::new(self.plus.trace(), self.minus.trace()))
    }

    /// Square root of the sum of squared real parts of all entries.
    pub fn norm(&self) -> f64 {
        ((self.plus.norm_squared() + self.minus.norm_squared()) * 0.5).sqrt()
    }

    /// Largest absolute real part over all entries.
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0_f64;
        for (p, q) in self.plus.iter().zip(self.minus.iter()) {
            for v in split_parts(*p, *q) {
                m = m.max(v.abs());
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &TessMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        (self - other).max_abs()
    }

    /// `(M + M^H)/2`.
    pub fn hermitian_part(&self) -> Self {
        TessMatrix {
            plus: (&self.plus + self.plus.adjoint()) * Complex64::new(0.5, 0.0),
            minus: (&self.minus + self.minus.adjoint()) * Complex64::new(0.5, 0.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.plus.iter().chain(self.minus.iter()).all(|z| *z == C_ZERO)
    }

    pub fn column(&self, j: usize) -> TessVector {
        TessVector { plus: self.plus.column(j).into_owned(), minus: self.minus.column(j).into_owned() }
    }

    pub fn diagonal(&self) -> Vec<Tessarine> {
        (0..self.nrows().min(self.ncols())).map(|i| self.get(i, i)).collect()
    }
}

impl TessVector {
    pub fn from_components(plus: CVector, minus: CVector) -> Self {
        assert_eq!(plus.len(), minus.len(), "component lengths differ");
        TessVector { plus, minus }
    }

    pub fn zeros(n: usize) -> Self {
        TessVector { plus: CVector::zeros(n), minus: CVector::zeros(n) }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> Tessarine) -> Self {
        let mut v = TessVector::zeros(n);
        for i in 0..n {
            v.set(i, f(i));
        }
        v
    }

    pub fn from_slice(xs: &[Tessarine]) -> Self {
        TessVector::from_fn(xs.len(), |i| xs[i])
    }

    /// Inverse of [`TessVector::real_stack`]: input is `[x_r; x_ι; x_ȷ; x_κ]`.
    pub fn from_real_stack(xr: &DVector<f64>) -> Self {
        assert_eq!(xr.len() % 4, 0, "real stack length must be a multiple of 4");
        let n = xr.len() / 4;
        TessVector::from_fn(n, |i| Tessarine::new(xr[i], xr[n + i], xr[2 * n + i], xr[3 * n + i]))
    }

    pub fn plus(&self) -> &CVector {
        &self.plus
    }

    pub fn minus(&self) -> &CVector {
        &self.minus
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    pub fn get(&self, i: usize) -> Tessarine {
        Tessarine::from_pair(ComplexPair::new(self.plus[i], self.minus[i]))
    }

    pub fn set(&mut self, i: usize, t: Tessarine) {
        let p = t.to_pair();
        self.plus[i] = p.plus;
        self.minus[i] = p.minus;
    }

    pub fn to_vec(&self) -> Vec<Tessarine> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// The real vector `[x_r; x_ι; x_ȷ; x_κ]` of length `4n`.
    pub fn real_stack(&self) -> DVector<f64> {
        let n = self.len();
        let mut out = DVector::zeros(4 * n);
        for i in 0..n {
            let p = self.get(i).parts();
            for (q, v) in p.iter().enumerate() {
                out[q * n + i] = *v;
            }
        }
        out
    }

    pub fn conjugate(&self, kind: Conjugation) -> Self {
        match kind {
            Conjugation::Star => TessVector { plus: conj_vec(&self.plus), minus: conj_vec(&self.minus) },
            Conjugation::Iota => TessVector { plus: self.minus.clone(), minus: self.plus.clone() },
            Conjugation::Kappa => TessVector { plus: conj_vec(&self.minus), minus: conj_vec(&self.plus) },
        }
    }

    pub fn head(&self, n: usize) -> Self {
        self.segment(0, n)
    }

    pub fn segment(&self, start: usize, n: usize) -> Self {
        TessVector { plus: self.plus.rows(start, n).into_owned(), minus: self.minus.rows(start, n).into_owned() }
    }

    pub fn stack(parts: &[TessVector]) -> Self {
        let n: usize = parts.iter().map(TessVector::len).sum();
        let mut out = TessVector::zeros(n);
        let mut o = 0;
        for p in parts {
            out.plus.rows_mut(o, p.len()).copy_from(&p.plus);
            out.minus.rows_mut(o, p.len()).copy_from(&p.minus);
            o += p.len();
        }
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        TessVector { plus: &self.plus * Complex64::new(c, 0.0), minus: &self.minus * Complex64::new(c, 0.0) }
    }

    /// Column matrix view of the vector.
    pub fn to_matrix(&self) -> TessMatrix {
        TessMatrix::from_components(
            CMatrix::from_column_slice(self.len(), 1, self.plus.as_slice()),
            CMatrix::from_column_slice(self.len(), 1, self.minus.as_slice()),
        )
    }

    /// `self · other^H`.
    pub fn outer(&self, other: &TessVector) -> TessMatrix {
        TessMatrix::from_components(&self.plus * other.plus.adjoint(), &self.minus * other.minus.adjoint())
    }

    /// Sum of squared real parts over all entries.
    pub fn norm_sqr(&self) -> f64 {
        (self.plus.norm_squared() + self.minus.norm_squared()) * 0.5
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.to_vec().iter().fold(0.0_f64, |m, t| m.max(t.abs_max()))
    }

    pub fn max_abs_diff(&self, other: &TessVector) -> f64 {
        (self - other).max_abs()
    }
}

macro_rules! forward_binop {
    ($ty:ident, $tr:ident, $method:ident) => {
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, o: $ty) -> $ty {
                (&self).$method(&o)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, o: &$ty) -> $ty {
                (&self).$method(o)
            }
        }
        impl $tr<$ty> for &$ty {
            type Output = $ty;
            fn $method(self, o: $ty) -> $ty {
                self.$method(&o)
            }
        }
    };
}

impl Add<&TessMatrix> for &TessMatrix {
    type Output = TessMatrix;
    fn add(self, o: &TessMatrix) -> TessMatrix {
        TessMatrix { plus: &self.plus + &o.plus, minus: &self.minus + &o.minus }
    }
}

impl Sub<&TessMatrix> for &TessMatrix {
    type Output = TessMatrix;
    fn sub(self, o: &TessMatrix) -> TessMatrix {
        TessMatrix { plus: &self.plus - &o.plus, minus: &self.minus - &o.minus }
    }
}

impl Mul<&TessMatrix> for &TessMatrix {
    type Output = TessMatrix;
    fn mul(self, o: &TessMatrix) -> TessMatrix {
        TessMatrix { plus: &self.plus * &o.plus, minus: &self.minus * &o.minus }
    }
}

impl Mul<&TessVector> for &TessMatrix {
    type Output = TessVector;
    fn mul(self, v: &TessVector) -> TessVector {
        self.mul_vec(v)
    }
}

impl Mul<TessVector> for &TessMatrix {
    type Output = TessVector;
    fn mul(self, v: TessVector) -> TessVector {
        self.mul_vec(&v)
    }
}

impl Neg for &TessMatrix {
    type Output = TessMatrix;
    fn neg(self) -> TessMatrix {
        self.scale(-1.0)
    }
}

impl Add<&TessVector> for &TessVector {
    type Output = TessVector;
    fn add(self, o: &TessVector) -> TessVector {
        TessVector { plus: &self.plus + &o.plus, minus: &self.minus + &o.minus }
    }
}

impl Sub<&TessVector> for &TessVector {
    type Output = TessVector;
    fn sub(self, o: &TessVector) -> TessVector {
        TessVector { plus: &self.plus - &o.plus, minus: &self.minus - &o.minus }
    }
}

forward_binop!(TessMatrix, Add, add);
forward_binop!(TessMatrix, Sub, sub);
forward_binop!(TessMatrix, Mul, mul);
forward_binop!(TessVector, Add, add);
forward_binop!(TessVector, Sub, sub);
