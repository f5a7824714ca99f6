//! Dense row-major matrices over any [`Scalar`].

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl<S> Matrix<S> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn try_from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("rows have different lengths".into()));
        }
        Ok(Self::from_rows(rows))
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn map<T>(&self, f: impl FnMut(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| S::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn diagonal(values: &[S]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i].clone() } else { S::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn check_same_shape(&self, o: &Self) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_same_shape(o)?;
        Ok(self.add(o))
    }

    /// Panics on shape mismatch.
    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add_ref(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub_ref(b)).collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|a| a.mul_ref(k))
    }

    /// `self - λ·I`.
    pub fn shifted(&self, lambda: &S) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = m[(i, i)].sub_ref(lambda);
        }
        m
    }

    pub fn try_matmul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(self.matmul(o))
    }

    /// Zero entries of `self` are skipped, which matters for the sparse
    /// Kronecker realizations.
    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let v = out[(i, j)].add_ref(&a.mul_ref(b));
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.matmul(self);
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.conj_transpose()
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &Self) -> Self {
        Self::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            let a = &self[(i / o.rows, j / o.cols)];
            if a.is_zero() {
                S::zero()
            } else {
                a.mul_ref(&o[(i % o.rows, j % o.cols)])
            }
        })
    }

    /// Block diagonal `diag(self, o)`.
    pub fn direct_sum(&self, o: &Self) -> Self {
        Self::from_fn(self.rows + o.rows, self.cols + o.cols, |i, j| {
            match (i < self.rows, j < self.cols) {
                (true, true) => self[(i, j)].clone(),
                (false, false) => o[(i - self.rows, j - self.cols)].clone(),
                _ => S::zero(),
            }
        })
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// `[self | o]`.
    pub fn hcat(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows, "row count mismatch");
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                o[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc.add_ref(&self[(i, i)]))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.modulus().powi(2)).sum::<f64>().sqrt()
    }

    /// Gauss–Jordan inverse. Exact matrices pivot on the first nonzero
    /// entry, approximate ones on the largest modulus.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = if S::EXACT {
                (c..n).find(|&i| !a[(i, c)].is_zero())
            } else {
                (c..n)
                    .filter(|&i| !a[(i, c)].is_zero())
                    .max_by(|&x, &y| a[(x, c)].modulus().total_cmp(&a[(y, c)].modulus()))
            };
            let p = p.ok_or(Error::Singular)?;
            a.swap_rows(c, p);
            inv.swap_rows(c, p);
            let pinv = S::one() / a[(c, c)].clone();
            for j in 0..n {
                a[(c, j)] = a[(c, j)].mul_ref(&pinv);
                inv[(c, j)] = inv[(c, j)].mul_ref(&pinv);
            }
            for i in 0..n {
                if i == c || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in 0..n {
                    if !a[(c, j)].is_zero() {
                        a[(i, j)] = a[(i, j)].sub_ref(&f.mul_ref(&a[(c, j)]));
                    }
                    if !inv[(c, j)].is_zero() {
                        inv[(i, j)] = inv[(i, j)].sub_ref(&f.mul_ref(&inv[(c, j)]));
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Row-major vectorization.
    pub fn vec(&self) -> Vec<S> {
        self.data.clone()
    }

    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        self.map(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::GaussRat;

    fn ex(rows: &[&[i64]]) -> Matrix<GaussRat> {
        Matrix::from_fn(rows.len(), rows[0].len(), |i, j| GaussRat::int(rows[i][j]))
    }

    #[test]
    fn inverse_of_unipotent() {
        let m = ex(&[&[1, 1], &[0, 1]]);
        assert_eq!(m.inverse().unwrap(), ex(&[&[1, -1], &[0, 1]]));
        assert!(ex(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn kron_with_identity_is_block_diagonal() {
        let a = ex(&[&[1, 2], &[3, 4]]);
        let k = Matrix::<GaussRat>::identity(2).kron(&a);
        assert_eq!(k, a.direct_sum(&a));
    }

    #[test]
    fn pow_and_trace() {
        let j = ex(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert!(!j.pow(2).is_zero());
        assert!(j.pow(3).is_zero());
        assert_eq!(ex(&[&[2, 1], &[0, 5]]).trace(), GaussRat::int(7));
    }
}
