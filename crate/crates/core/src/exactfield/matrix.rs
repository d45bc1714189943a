use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Field, LinAlgError};

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Build from row-major data; entries are reduced mod `p`.
    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length");
        let p = field.p();
        let data = data.into_iter().map(|x| x % p).collect();
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % field.p());
            }
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Signed integer rows, reduced mod `p`. `cols` is needed when `rows` is empty.
    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>], cols: usize) -> Result<Self, LinAlgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinAlgError::DimensionMismatch {
                    expected: (rows.len(), cols),
                    found: (rows.len(), row.len()),
                });
            }
            data.extend(row.iter().map(|&x| field.from_i64(x)));
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_rows(field: Field, rows: &[Vec<u64>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols);
            data.extend(row.iter().map(|&x| x % field.p()));
        }
        Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<u64>]) -> Self {
        Matrix::from_fn(field, rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn column_vector(field: Field, v: &[u64]) -> Self {
        Matrix::from_vec(field, v.len(), 1, v.to_vec())
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v % self.field.p();
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch {
                expected: (self.cols, other.cols),
                found: other.shape(),
            });
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = (*d + a * b) % f.p();
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        if self.shape() != other.shape() {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let f = self.field;
        let c = c % f.p();
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: u64, other: &Matrix) {
        assert_eq!(self.shape(), other.shape(), "add_scaled shape");
        let f = self.field;
        let c = c % f.p();
        if c == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = (*a + c * b) % f.p();
        }
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "mul_vec length");
        let p = self.field.p();
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a * b) % p)
            })
            .collect()
    }

    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        assert!(!parts.is_empty());
        let rows = parts[0].rows;
        let field = parts[0].field;
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "hstack row mismatch");
            for i in 0..rows {
                for j in 0..m.cols {
                    out.data[i * cols + off + j] = m.get(i, j);
                }
            }
            off += m.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        assert!(!parts.is_empty());
        let cols = parts[0].cols;
        let field = parts[0].field;
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn block_diag(field: Field, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            for i in 0..m.rows {
                for j in 0..m.cols {
                    out.data[(r0 + i) * cols + c0 + j] = m.get(i, j);
                }
            }
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    /// Copy `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j);
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, idx.len(), self.cols, |i, j| self.get(idx[i], j))
    }

    pub fn trace(&self) -> u64 {
        assert!(self.is_square());
        (0..self.rows).fold(0, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    pub fn pow(&self, mut exp: u64) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Gauss-Jordan elimination with first-nonzero pivoting.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c));
            m.scale_row(r, inv);
            for i in 0..m.rows {
                if i != r {
                    let factor = m.get(i, c);
                    if factor != 0 {
                        m.sub_row_multiple(i, r, factor);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Columns form a basis of the null space, one per free column in increasing order.
    pub fn kernel_basis(&self) -> Matrix {
        let Rref { reduced, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let f = self.field;
        let mut k = Matrix::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, f.neg(reduced.get(i, fc)));
            }
        }
        k
    }

    /// Columns of `self` at the pivot positions: a basis of the column space.
    pub fn image_basis(&self) -> Matrix {
        let pivots = self.rref().pivots;
        self.select_columns(&pivots)
    }

    pub fn solve(&self, b: &[u64]) -> Result<Vec<u64>, LinAlgError> {
        Solver::new(self).solve(b)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = Matrix::hstack(&[self, &Matrix::identity(self.field, n)]);
        let r = aug.rref();
        if r.pivots.len() < n || r.pivots[n - 1] >= n {
            return None;
        }
        Some(r.reduced.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: u64) {
        let f = self.field;
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = f.mul(self.data[idx], c);
        }
    }

    /// row[i] -= factor * row[r]
    fn sub_row_multiple(&mut self, i: usize, r: usize, factor: u64) {
        let f = self.field;
        let nf = f.neg(factor);
        for j in 0..self.cols {
            let v = self.data[r * self.cols + j];
            if v != 0 {
                let idx = i * self.cols + j;
                self.data[idx] = (self.data[idx] + nf * v) % f.p();
            }
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{}[", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &'a Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &'a Matrix) -> Matrix {
        self.checked_add(rhs).expect("matrix sum dimension mismatch")
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &'a Matrix) -> Matrix {
        let mut out = self.clone();
        out.add_scaled(self.field.neg(1), rhs);
        out
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(self.field.neg(1))
    }
}

/// Precomputed elimination for repeated solves of `A x = b` with a fixed `A`.
#[derive(Clone, Debug)]
pub struct Solver {
    field: Field,
    cols: usize,
    transform: Matrix,
    pivots: Vec<usize>,
}

impl Solver {
    pub fn new(a: &Matrix) -> Self {
        let f = a.field;
        let aug = Matrix::hstack(&[a, &Matrix::identity(f, a.rows)]);
        let r = aug.rref();
        let pivots: Vec<usize> = r.pivots.iter().copied().filter(|&c| c < a.cols).collect();
        let transform = r.reduced.block(0, a.cols, a.rows, a.rows);
        Solver {
            field: f,
            cols: a.cols,
            transform,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, b: &[u64]) -> Result<Vec<u64>, LinAlgError> {
        if b.len() != self.transform.rows() {
            return Err(LinAlgError::DimensionMismatch {
                expected: (self.transform.rows(), 1),
                found: (b.len(), 1),
            });
        }
        let c = self.transform.mul_vec(b);
        if c[self.pivots.len()..].iter().any(|&x| x != 0) {
            return Err(LinAlgError::NoSolution);
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in self.pivots.iter().enumerate() {
            x[pc] = c[i] % self.field.p();
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = Matrix::identity(f(101), 3);
        let r = id.rref();
        assert_eq!(r.reduced, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        let z = Matrix::zeros(f(101), 2, 4);
        let r = z.rref();
        assert!(r.reduced.is_zero());
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_all_ones_over_f2() {
        let m = Matrix::from_rows(f(2), &[vec![1, 1], vec![1, 1]], 2);
        let r = m.rref();
        assert_eq!(r.reduced, Matrix::from_rows(f(2), &[vec![1, 1], vec![0, 0]], 2));
        assert_eq!(r.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(f(7), 3).kernel_basis().cols(), 0);
        let k = Matrix::zeros(f(7), 3, 3).kernel_basis();
        assert_eq!(k, Matrix::identity(f(7), 3));
        // Brute force over all 25 vectors of F_5^2: the kernel of [1 2] is the line through (3,1).
        let m = Matrix::from_rows(f(5), &[vec![1, 2]], 2);
        let brute: Vec<(u64, u64)> = (0..5)
            .flat_map(|a| (0..5).map(move |b| (a, b)))
            .filter(|&(a, b)| (a + 2 * b) % 5 == 0)
            .collect();
        assert_eq!(brute, vec![(0, 0), (1, 2), (2, 4), (3, 1), (4, 3)]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![3, 1]);
    }

    #[test]
    fn solve_and_inverse() {
        let fl = f(11);
        let a = Matrix::from_rows(fl, &[vec![2, 1], vec![1, 3]], 2);
        let x = a.solve(&[1, 2]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![1, 2]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        let s = Matrix::from_rows(fl, &[vec![1, 2], vec![2, 4]], 2);
        assert!(s.inverse().is_none());
        assert_eq!(s.solve(&[1, 0]), Err(LinAlgError::NoSolution));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let fl = f(5);
        let a = Matrix::from_rows(fl, &[vec![1, 1], vec![0, 1]], 2);
        assert_eq!(a.pow(5), Matrix::identity(fl, 2));
        assert_eq!(a.pow(3), &(&a * &a) * &a);
    }
}
