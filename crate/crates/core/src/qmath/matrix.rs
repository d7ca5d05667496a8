use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::validation("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::validation(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::validation("matrix entries must be finite"));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Square matrix from nested rows of complex entries.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        Self::from_fn(n, m, |r, c| rows[r][c])
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
    }

    /// Diagonal matrix.
    pub fn diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &z) in d.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> C64 {
        debug_assert_eq!(self.cols, other.rows);
        debug_assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.dagger()) <= tol
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::validation(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self * other)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let (r2, c2) = (other.rows, other.cols);
        let rows = self.rows * r2;
        let cols = self.cols * c2;
        let mut data = vec![ZERO; rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..r2 {
                    let row = i * r2 + k;
                    for l in 0..c2 {
                        data[row * cols + j * c2 + l] = a * other[(k, l)];
                    }
                }
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

/// Kronecker product of two matrices.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Kronecker product of a non-empty sequence, left to right.
pub fn tensor_all<'a>(mats: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    let mut it = mats.into_iter();
    let first = it.next().expect("tensor_all needs at least one factor").clone();
    it.fold(first, |acc, m| acc.kron(m))
}

/// Unitary permutation of tensor factors.
///
/// `dims[s]` is the dimension of subsystem `s` in the source ordering. The
/// returned `P` maps a product `|i_0⟩⊗…⊗|i_{n-1}⟩` to the product whose
/// `j`-th factor is `|i_{perm[j]}⟩`, so `P (A_0⊗…⊗A_{n-1}) P†` equals
/// `A_{perm[0]}⊗…⊗A_{perm[n-1]}`.
pub fn subsystem_permutation(dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix> {
    let n = dims.len();
    if perm.len() != n {
        return Err(Error::validation("permutation length must match subsystem count"));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::validation("not a permutation"));
        }
        seen[p] = true;
    }
    let total: usize = dims.iter().product();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut out = ComplexMatrix::zeros(total, total);
    let mut digits = vec![0usize; n];
    for src in 0..total {
        let mut rem = src;
        for s in (0..n).rev() {
            digits[s] = rem % dims[s];
            rem /= dims[s];
        }
        let mut dst = 0;
        for (j, &p) in perm.iter().enumerate() {
            dst = dst * new_dims[j] + digits[p];
        }
        out[(dst, src)] = ONE;
    }
    Ok(out)
}

/// Applies [`subsystem_permutation`] by conjugation.
pub fn permute_subsystems(
    op: &ComplexMatrix,
    dims: &[usize],
    perm: &[usize],
) -> Result<ComplexMatrix> {
    let p = subsystem_permutation(dims, perm)?;
    if op.rows() != p.rows() || op.cols() != p.cols() {
        return Err(Error::validation("operator dimension does not match subsystem dims"));
    }
    Ok(&(&p * op) * &p.dagger())
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::pauli;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    // Element-by-element oracle: (A⊗B)[(i*p+k),(j*q+l)] = A[i,j]·B[k,l].
    fn kron_oracle(a: &ComplexMatrix, b: &ComplexMatrix) -> Vec<Vec<C64>> {
        let (p, q) = (b.rows(), b.cols());
        let mut out = vec![vec![ZERO; a.cols() * q]; a.rows() * p];
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                for k in 0..p {
                    for l in 0..q {
                        out[i * p + k][j * q + l] = a[(i, j)] * b[(k, l)];
                    }
                }
            }
        }
        out
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn sigma3_tensor_sigma3_diagonal() {
        let z = pauli(3);
        let zz = tensor(z.matrix(), z.matrix());
        let diag: Vec<f64> = (0..4).map(|i| zz[(i, i)].re).collect();
        assert_eq!(diag, vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn sigma1_tensor_sigma2_matches_oracle() {
        let (x, y) = (pauli(1), pauli(2));
        let got = tensor(x.matrix(), y.matrix());
        let want = kron_oracle(x.matrix(), y.matrix());
        for r in 0..4 {
            for col in 0..4 {
                assert_eq!(got[(r, col)], want[r][col], "entry ({r},{col})");
            }
        }
    }

    #[test]
    fn rectangular_kron_shape() {
        let a = ComplexMatrix::from_fn(2, 3, |r, col| c(r as f64, col as f64));
        let b = ComplexMatrix::from_fn(3, 1, |r, _| c(1.0 + r as f64, 0.0));
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (6, 3));
        let want = kron_oracle(&a, &b);
        for r in 0..6 {
            for col in 0..3 {
                assert_eq!(k[(r, col)], want[r][col]);
            }
        }
    }

    #[test]
    fn rejects_bad_shapes_and_nan() {
        assert!(ComplexMatrix::new(2, 2, vec![ZERO; 3]).is_err());
        assert!(ComplexMatrix::new(0, 2, vec![]).is_err());
        assert!(ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexMatrix::new(1, 1, vec![c(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn permutation_reorders_product_factors() {
        let a = pauli(1).matrix().clone();
        let b = pauli(2).matrix().clone();
        let c3 = ComplexMatrix::from_fn(3, 3, |r, col| c((r * 3 + col) as f64, r as f64 - col as f64));
        let abc = tensor_all([&a, &b, &c3]);
        let got = permute_subsystems(&abc, &[2, 2, 3], &[2, 0, 1]).unwrap();
        let want = tensor_all([&c3, &a, &b]);
        assert!(got.approx_eq(&want, 1e-12));
        let swapped = permute_subsystems(&abc, &[2, 2, 3], &[1, 0, 2]).unwrap();
        assert!(swapped.approx_eq(&tensor_all([&b, &a, &c3]), 1e-12));
    }

    #[test]
    fn permutation_is_unitary_and_rejects_non_permutations() {
        let p = subsystem_permutation(&[2, 3, 2], &[1, 2, 0]).unwrap();
        assert!((&p * &p.dagger()).approx_eq(&ComplexMatrix::identity(12), 0.0));
        assert!(subsystem_permutation(&[2, 2], &[0, 0]).is_err());
        assert!(subsystem_permutation(&[2, 2], &[0]).is_err());
    }

    #[test]
    fn trace_product_matches_product_trace() {
        let a = ComplexMatrix::from_fn(3, 3, |r, col| c(r as f64 + 0.5, col as f64 - 1.0));
        let b = ComplexMatrix::from_fn(3, 3, |r, col| c((r * col) as f64, 1.0));
        assert!((a.trace_product(&b) - (&a * &b).trace()).norm() < 1e-12);
    }
}
