//! The scalar abstraction every matrix algorithm is written against.
//!
//! Exact Gaussian rationals decide ranks by fraction-free elimination;
//! floating point complex numbers decide them by singular-value
//! thresholding against a [`ToleranceFrame`].

use std::fmt::Debug;
use std::ops::Neg;

use nalgebra::{DMatrix, DVector, RealField};
use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Float, Num, One, Zero};

use crate::error::{Error, Result};
use crate::gauss::GaussRat;
use crate::matrix::Matrix;
use crate::value::{ComplexValue, ToleranceFrame};

/// Range and kernel bases of a square matrix.
#[derive(Clone, Debug)]
pub struct RangeKernel<S> {
    pub rank: usize,
    /// `n × rank`, columns span the range.
    pub range: Matrix<S>,
    /// `n × (n - rank)`, columns span the kernel.
    pub kernel: Matrix<S>,
}

pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + Send + Sync + 'static {
    /// Zero tests are decisions rather than thresholds.
    const EXACT: bool;

    fn conj(&self) -> Self;
    fn from_gauss(v: &GaussRat) -> Self;
    fn to_value(&self) -> ComplexValue;
    fn modulus(&self) -> f64;

    fn add_ref(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.clone() - rhs.clone()
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }

    fn rank(m: &Matrix<Self>, tf: &ToleranceFrame) -> Result<usize>;

    /// Rank with singular values measured against `max(σ_max, floor)`
    /// instead of `σ_max` alone. Exact ranks ignore the floor.
    fn rank_with_floor(m: &Matrix<Self>, floor: f64, tf: &ToleranceFrame) -> Result<usize> {
        let _ = floor;
        Self::rank(m, tf)
    }

    /// Range and kernel bases of a square matrix.
    fn range_kernel(m: &Matrix<Self>, tf: &ToleranceFrame) -> Result<RangeKernel<Self>>;

    /// Coefficients `c` with `cols · c = target`, assuming the system is
    /// consistent and `cols` has full column rank.
    fn solve_in_span(cols: &Matrix<Self>, target: &[Self], tf: &ToleranceFrame) -> Result<Vec<Self>>;
}

// ---------------------------------------------------------------- exact

impl Scalar for GaussRat {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        GaussRat::conj(self)
    }
    fn from_gauss(v: &GaussRat) -> Self {
        v.clone()
    }
    fn to_value(&self) -> ComplexValue {
        ComplexValue::Exact(self.clone())
    }
    fn modulus(&self) -> f64 {
        self.modulus_f64()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn rank(m: &Matrix<Self>, _tf: &ToleranceFrame) -> Result<usize> {
        Ok(bareiss_rank(m))
    }

    fn range_kernel(m: &Matrix<Self>, _tf: &ToleranceFrame) -> Result<RangeKernel<Self>> {
        let n = m.rows();
        let (rref, pivots) = rref(m);
        let rank = pivots.len();
        let range = Matrix::from_fn(n, rank, |i, k| m[(i, pivots[k])].clone());
        let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
        let mut kernel = Matrix::zeros(m.cols(), free.len());
        for (k, &f) in free.iter().enumerate() {
            kernel[(f, k)] = GaussRat::one();
            for (row, &p) in pivots.iter().enumerate() {
                kernel[(p, k)] = -rref[(row, f)].clone();
            }
        }
        Ok(RangeKernel { rank, range, kernel })
    }

    fn solve_in_span(cols: &Matrix<Self>, target: &[Self], _tf: &ToleranceFrame) -> Result<Vec<Self>> {
        let k = cols.cols();
        let aug = Matrix::from_fn(cols.rows(), k + 1, |i, j| {
            if j < k {
                cols[(i, j)].clone()
            } else {
                target[i].clone()
            }
        });
        let (r, pivots) = rref(&aug);
        if pivots.contains(&k) {
            return Err(Error::Dimension("target is not in the span".into()));
        }
        let mut out = vec![GaussRat::zero(); k];
        for (row, &p) in pivots.iter().enumerate() {
            out[p] = r[(row, k)].clone();
        }
        Ok(out)
    }
}

/// Reduced row echelon form over `ℚ(i)`; returns the pivot columns.
pub(crate) fn rref(m: &Matrix<GaussRat>) -> (Matrix<GaussRat>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a[(r, c)].recip();
        for j in c..cols {
            let v = &a[(r, j)] * &inv;
            a[(r, j)] = v;
        }
        for i in 0..rows {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)].clone();
                for j in c..cols {
                    if a[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &a[(i, j)] - &(&f * &a[(r, j)]);
                    a[(i, j)] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Gaussian integer `re + im·i`.
#[derive(Clone, Debug, PartialEq)]
struct GInt(BigInt, BigInt);

impl GInt {
    fn is_zero(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }
    fn mul(&self, o: &GInt) -> GInt {
        GInt(&self.0 * &o.0 - &self.1 * &o.1, &self.0 * &o.1 + &self.1 * &o.0)
    }
    fn sub(&self, o: &GInt) -> GInt {
        GInt(&self.0 - &o.0, &self.1 - &o.1)
    }
    /// Division known to be exact in `ℤ[i]`.
    fn div_exact(&self, d: &GInt) -> GInt {
        let n = &d.0 * &d.0 + &d.1 * &d.1;
        let re = &self.0 * &d.0 + &self.1 * &d.1;
        let im = &self.1 * &d.0 - &self.0 * &d.1;
        debug_assert!((&re % &n).is_zero() && (&im % &n).is_zero(), "inexact Bareiss step");
        GInt(re / &n, im / n)
    }
}

/// Rank by fraction-free (Bareiss) elimination over `ℤ[i]`, after clearing
/// each row's denominators.
pub(crate) fn bareiss_rank(m: &Matrix<GaussRat>) -> usize {
    use num_integer::Integer;
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<GInt>> = (0..rows)
        .map(|i| {
            let l = (0..cols).fold(BigInt::one(), |acc, j| acc.lcm(m[(i, j)].parts().2));
            (0..cols)
                .map(|j| {
                    let (re, im, den) = m[(i, j)].parts();
                    let k = &l / den;
                    GInt(re * &k, im * &k)
                })
                .collect()
        })
        .collect();
    let mut prev = GInt(BigInt::one(), BigInt::zero());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in r + 1..rows {
            let lead = a[i][c].clone();
            for j in c + 1..cols {
                let num = a[i][j].mul(&pivot).sub(&lead.mul(&a[r][j]));
                a[i][j] = num.div_exact(&prev);
            }
            a[i][c] = GInt(BigInt::zero(), BigInt::zero());
        }
        prev = pivot;
        r += 1;
    }
    r
}

// ---------------------------------------------------------------- approximate

fn to_f64<F: Float>(x: F) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `[[Re, -Im], [Im, Re]]`. Complex SVD in nalgebra can return singular
/// vectors that do not reconstruct the input, so every decomposition goes
/// through this real matrix instead; each singular value appears twice.
fn real_embedding<F>(m: &Matrix<Complex<F>>) -> DMatrix<F>
where
    F: RealField + Float,
{
    let (r, c) = (m.rows(), m.cols());
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = m[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Real SVD with a bounded number of sweeps.
fn svd<F>(m: DMatrix<F>, vectors: bool) -> Result<nalgebra::SVD<F, nalgebra::Dyn, nalgebra::Dyn>>
where
    F: Float + RealField + Debug,
{
    let n = m.nrows().max(m.ncols());
    m.try_svd(vectors, vectors, F::default_epsilon() * F::from(5.0).expect("small constant"), 200 * n.max(1))
        .ok_or(Error::Ambiguous {
            context: "singular value iteration (no convergence)",
            value: f64::NAN,
            threshold: 0.0,
        })
}

/// Singular values of the complex matrix, descending.
fn complex_singular_values(sv: &[f64]) -> Vec<f64> {
    sv.iter().step_by(2).copied().collect()
}

/// `dim` orthonormal complex vectors spanning the complex span of the real
/// columns `[x; y] ↦ x + iy` (a subspace closed under multiplication by
/// `i`), by Gram–Schmidt picking the largest residual each round.
fn complexify<F>(cols: &[DVector<F>], n: usize, dim: usize) -> Matrix<Complex<F>>
where
    F: RealField + Float,
{
    let mut cands: Vec<Vec<Complex<F>>> = cols
        .iter()
        .map(|v| (0..n).map(|i| Complex::new(v[i], v[n + i])).collect())
        .collect();
    let norm = |v: &[Complex<F>]| Float::sqrt(v.iter().fold(F::zero(), |a, z| a + z.norm_sqr()));
    let mut out: Vec<Vec<Complex<F>>> = Vec::with_capacity(dim);
    while out.len() < dim && !cands.is_empty() {
        let best = (0..cands.len())
            .max_by(|&a, &b| norm(&cands[a]).partial_cmp(&norm(&cands[b])).unwrap_or(std::cmp::Ordering::Equal))
            .expect("nonempty");
        let v = cands.swap_remove(best);
        let nv = Complex::new(norm(&v), F::zero());
        let q: Vec<Complex<F>> = v.iter().map(|z| *z / nv).collect();
        for c in &mut cands {
            let d = q.iter().zip(c.iter()).fold(Complex::new(F::zero(), F::zero()), |a, (x, y)| a + x.conj() * y);
            for (ci, qi) in c.iter_mut().zip(&q) {
                *ci = *ci - d * qi;
            }
        }
        out.push(q);
    }
    Matrix::from_fn(n, out.len(), |i, k| out[k][i])
}

/// Singular values sorted descending, with the ambiguity check applied.
fn decided_rank(singular: &[f64], tf: &ToleranceFrame, context: &'static str) -> Result<usize> {
    decided_rank_from(singular, 0.0, tf, context)
}

fn decided_rank_from(singular: &[f64], floor: f64, tf: &ToleranceFrame, context: &'static str) -> Result<usize> {
    let smax = singular.iter().cloned().fold(floor, f64::max);
    if smax == 0.0 {
        return Ok(0);
    }
    let mut rank = 0;
    for &s in singular {
        let rel = s / smax;
        if rel > tf.eps_rank / 10.0 && rel < tf.eps_rank * 10.0 {
            return Err(Error::Ambiguous {
                context,
                value: rel,
                threshold: tf.eps_rank,
            });
        }
        if rel >= tf.eps_rank * 10.0 {
            rank += 1;
        }
    }
    Ok(rank)
}

impl<F> Scalar for Complex<F>
where
    F: RealField + Float + Send + Sync + 'static,
{
    const EXACT: bool = false;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_gauss(v: &GaussRat) -> Self {
        let (a, b) = v.to_f64_pair();
        Complex::new(F::from(a).unwrap_or_else(F::nan), F::from(b).unwrap_or_else(F::nan))
    }
    fn to_value(&self) -> ComplexValue {
        ComplexValue::Approx(num_complex::Complex64::new(to_f64(self.re), to_f64(self.im)))
    }
    fn modulus(&self) -> f64 {
        to_f64(self.norm())
    }

    fn rank(m: &Matrix<Self>, tf: &ToleranceFrame) -> Result<usize> {
        if m.rows() == 0 || m.cols() == 0 {
            return Ok(0);
        }
        let sv: Vec<f64> = svd(real_embedding(m), false)?.singular_values.iter().map(|s| to_f64(*s)).collect();
        let sv = complex_singular_values(&sv);
        decided_rank(&sv, tf, "rank decision")
    }

    fn rank_with_floor(m: &Matrix<Self>, floor: f64, tf: &ToleranceFrame) -> Result<usize> {
        if m.rows() == 0 || m.cols() == 0 {
            return Ok(0);
        }
        let sv: Vec<f64> = svd(real_embedding(m), false)?.singular_values.iter().map(|s| to_f64(*s)).collect();
        let sv = complex_singular_values(&sv);
        decided_rank_from(&sv, floor, tf, "rank decision")
    }

    fn range_kernel(m: &Matrix<Self>, tf: &ToleranceFrame) -> Result<RangeKernel<Self>> {
        let n = m.rows();
        if n == 0 {
            return Ok(RangeKernel {
                rank: 0,
                range: Matrix::zeros(0, 0),
                kernel: Matrix::zeros(0, 0),
            });
        }
        let svd = svd(real_embedding(m), true)?;
        let sv: Vec<f64> = svd.singular_values.iter().map(|s| to_f64(*s)).collect();
        let rank = decided_rank(&complex_singular_values(&sv), tf, "range/kernel split")?;
        // nalgebra sorts singular values descending
        let u = svd.u.as_ref().expect("requested U");
        let vt = svd.v_t.as_ref().expect("requested V^T");
        let range_cols: Vec<DVector<F>> = (0..2 * rank).map(|k| u.column(k).into_owned()).collect();
        let kernel_cols: Vec<DVector<F>> = (2 * rank..2 * n).map(|k| vt.row(k).transpose()).collect();
        let range = complexify(&range_cols, n, rank);
        let kernel = complexify(&kernel_cols, n, n - rank);
        Ok(RangeKernel { rank, range, kernel })
    }

    fn solve_in_span(cols: &Matrix<Self>, target: &[Self], tf: &ToleranceFrame) -> Result<Vec<Self>> {
        let a = real_embedding(cols);
        let k = cols.cols();
        let b = DVector::from_iterator(
            2 * target.len(),
            target.iter().map(|z| z.re).chain(target.iter().map(|z| z.im)),
        );
        let eps = F::from(tf.eps_rank).unwrap_or_else(F::epsilon);
        let svd = svd(a, true)?;
        let smax = svd.singular_values.iter().cloned().fold(F::zero(), Float::max);
        let xr = svd
            .solve(&b, eps * smax)
            .map_err(|e| Error::Dimension(e.to_string()))?;
        Ok((0..k).map(|j| Complex::new(xr[j], xr[k + j])).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn ex(rows: &[&[i64]]) -> Matrix<GaussRat> {
        Matrix::from_fn(rows.len(), rows[0].len(), |i, j| GaussRat::int(rows[i][j]))
    }

    #[test]
    fn bareiss_agrees_with_rref() {
        let m = ex(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(bareiss_rank(&m), 2);
        assert_eq!(rref(&m).1.len(), 2);
        let z = ex(&[&[0, 0], &[0, 0]]);
        assert_eq!(bareiss_rank(&z), 0);
    }

    #[test]
    fn bareiss_handles_gaussian_entries() {
        // rows proportional by i
        let i = GaussRat::i();
        let m = Matrix::from_rows(vec![
            vec![GaussRat::int(1), GaussRat::ratio(1, 2)],
            vec![i.clone(), &i * &GaussRat::ratio(1, 2)],
        ]);
        assert_eq!(bareiss_rank(&m), 1);
    }

    #[test]
    fn exact_range_kernel_is_complementary() {
        let m = ex(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 2]]);
        let rk = GaussRat::range_kernel(&m, &ToleranceFrame::default()).unwrap();
        assert_eq!(rk.rank, 2);
        assert!(m.matmul(&rk.kernel).is_zero());
    }

    #[test]
    fn approx_rank_flags_ambiguity() {
        let tf = ToleranceFrame::default();
        let m = Matrix::from_rows(vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1e-9, 0.0)],
        ]);
        assert!(matches!(Complex64::rank(&m, &tf), Err(Error::Ambiguous { .. })));
        let m2 = Matrix::from_rows(vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1e-14, 0.0)],
        ]);
        assert_eq!(Complex64::rank(&m2, &tf).unwrap(), 1);
    }

    #[test]
    fn approx_range_of_a_complex_projection() {
        let c = Complex64::new;
        let p = Matrix::from_rows(vec![
            vec![c(4.4663076264939805e-1, -2.9262443779645109e-1), c(2.1711210678098469e-1, 4.0723446992151946e-1)],
            vec![c(2.7951796376797622e-1, -6.6815083741792480e-1), c(5.5336923735060206e-1, 2.9262443779645109e-1)],
        ]);
        let rk = Complex64::range_kernel(&p, &ToleranceFrame::default()).unwrap();
        assert_eq!(rk.rank, 1);
        assert!(p.matmul(&rk.range).sub(&rk.range).frobenius_norm() < 1e-12);
        assert!(p.matmul(&rk.kernel).frobenius_norm() < 1e-12);
    }

    #[test]
    fn approx_range_is_invariant_for_rank_two() {
        // nalgebra's complex SVD reconstructs this one only to 3e-3
        let c = Complex64::new;
        let a = Matrix::from_rows(vec![
            vec![c(2.9827495438292534e-1, 2.9816488169598171e-2), c(-1.8938666304142213e-1, -8.7822717224170704e-2), c(2.0625555573380489e-1, 9.5594426203685745e-2)],
            vec![c(-3.0533751197666953e-1, 3.9792808368932248e-1), c(8.6509555366942592e-1, 6.3449816104161894e-2), c(1.4689274605289768e-1, -6.9124635447517013e-2)],
            vec![c(5.8068688705663829e-1, 2.4560487644706364e-2), c(1.5000576316879460e-1, 8.5676825294848991e-2), c(8.3662949194764835e-1, -9.3266304273759981e-2)],
        ]);
        let tf = ToleranceFrame::default();
        let rk = Complex64::range_kernel(&a, &tf).unwrap();
        assert_eq!(rk.rank, 2);
        let basis = rk.range.hcat(&rk.kernel);
        let t = basis.inverse().unwrap().matmul(&a).matmul(&basis);
        assert!(t[(2, 0)].norm() + t[(2, 1)].norm() < 1e-12);
        assert!(a.matmul(&rk.kernel).frobenius_norm() < 1e-12);
    }
}
