//! Matrix calculus: minimal polynomials, ascent and descent by rank
//! stabilization, Drazin inverses, eigenvalue clusters and pole orders.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gauss::GaussRat;
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::value::{ComplexValue, ToleranceFrame};
use crate::{ApproxMatrix, ExactMatrix};

// ---------------------------------------------------------------- generic

/// Ranks of `A^0, A^1, …` until two consecutive ranks agree (at most
/// `n + 1` entries).
pub fn power_ranks<S: Scalar>(a: &Matrix<S>, tf: &ToleranceFrame) -> Result<Vec<usize>> {
    power_ranks_with_floor(a, 0.0, tf)
}

/// As [`power_ranks`], but the rank of `A^k` is judged against at least
/// `floor·‖A‖^(k-1)`, so a matrix that is small only relative to some outer
/// scale is not mistaken for a well-conditioned one.
pub fn power_ranks_with_floor<S: Scalar>(a: &Matrix<S>, floor: f64, tf: &ToleranceFrame) -> Result<Vec<usize>> {
    let n = a.rows();
    let mut ranks = vec![n];
    let norm = a.frobenius_norm();
    let mut p = Matrix::identity(n);
    for k in 0..n {
        p = p.matmul(a);
        let r = S::rank_with_floor(&p, floor * norm.powi(k as i32), tf)?;
        let done = r == *ranks.last().expect("nonempty");
        ranks.push(r);
        if done {
            break;
        }
    }
    Ok(ranks)
}

/// Ascent and descent of `M - λ`. Kernels grow and ranges shrink with the
/// power, so either stabilizes exactly when the rank does. Approximate
/// ranks are taken relative to at least `|λ|`: for `M ≈ λ` the shifted
/// matrix is pure noise.
pub fn ascent_descent<S: Scalar>(m: &Matrix<S>, lambda: &S, tf: &ToleranceFrame) -> Result<(usize, usize)> {
    if !m.is_square() {
        return Err(Error::Dimension("ascent of a non-square matrix".into()));
    }
    let ranks = power_ranks_with_floor(&m.shifted(lambda), lambda.modulus(), tf)?;
    let kernel_dims: Vec<usize> = ranks.iter().map(|r| m.rows() - r).collect();
    let ascent = kernel_dims.windows(2).position(|w| w[0] == w[1]).unwrap_or(m.rows());
    let descent = ranks.windows(2).position(|w| w[0] == w[1]).unwrap_or(m.rows());
    Ok((ascent, descent))
}

/// Drazin inverse and index by the core-nilpotent split at 0.
pub fn drazin_inverse<S: Scalar>(m: &Matrix<S>, tf: &ToleranceFrame) -> Result<(Matrix<S>, usize)> {
    let (k, _) = ascent_descent(m, &S::zero(), tf)?;
    if k == 0 {
        return Ok((m.inverse()?, 0));
    }
    let n = m.rows();
    let rk = S::range_kernel(&m.pow(k as u32), tf)?;
    let r = rk.rank;
    if r == 0 {
        return Ok((Matrix::zeros(n, n), k));
    }
    let basis = rk.range.hcat(&rk.kernel);
    let binv = basis.inverse()?;
    let core = binv.matmul(m).matmul(&basis).submatrix(0, 0, r, r);
    let core_inv = core.inverse()?;
    let block = core_inv.direct_sum(&Matrix::zeros(n - r, n - r));
    Ok((basis.matmul(&block).matmul(&binv), k))
}

/// Monic annihilating polynomial of least degree, by searching for the
/// first power of `M` that depends linearly on the lower ones.
pub fn minimal_polynomial<S: Scalar>(m: &Matrix<S>, tf: &ToleranceFrame) -> Result<Polynomial<S>> {
    if !m.is_square() {
        return Err(Error::Dimension("minimal polynomial of a non-square matrix".into()));
    }
    let n = m.rows();
    let mut vecs: Vec<Vec<S>> = vec![Matrix::<S>::identity(n).vec()];
    let mut p = Matrix::identity(n);
    for k in 1..=n {
        p = p.matmul(m);
        let target = p.vec();
        let cols = columns(&vecs);
        let with = columns(&vecs.iter().cloned().chain([target.clone()]).collect::<Vec<_>>());
        if S::rank(&with, tf)? == k {
            let c = S::solve_in_span(&cols, &target, tf)?;
            let mut coeffs: Vec<S> = c.into_iter().map(|x| -x).collect();
            coeffs.push(S::one());
            return Ok(Polynomial::new(coeffs));
        }
        vecs.push(target);
    }
    // Cayley–Hamilton: unreachable in exact arithmetic
    Err(Error::Ambiguous {
        context: "minimal polynomial dependence search",
        value: f64::NAN,
        threshold: tf.eps_rank,
    })
}

fn columns<S: Scalar>(vecs: &[Vec<S>]) -> Matrix<S> {
    let rows = vecs.first().map_or(0, Vec::len);
    Matrix::from_fn(rows, vecs.len(), |i, j| vecs[j][i].clone())
}

/// Characteristic polynomial `det(xI - M)` by Faddeev–LeVerrier.
pub fn characteristic_polynomial<S: Scalar>(m: &Matrix<S>) -> Polynomial<S> {
    let n = m.rows();
    let mut c = vec![S::zero(); n + 1];
    c[n] = S::one();
    let mut mk = Matrix::<S>::zeros(n, n);
    for k in 1..=n {
        mk = m.matmul(&mk).add(&Matrix::identity(n).scale(&c[n - k + 1]));
        let tr = m.matmul(&mk).trace();
        c[n - k] = -(tr / S::from_gauss(&GaussRat::int(k as i64)));
    }
    Polynomial::new(c)
}

// ---------------------------------------------------------------- exact / approx spectra

/// Eigenvalues with algebraic multiplicity, sorted by `(re, im)`. Fails
/// when the characteristic polynomial does not split over `ℚ(i)`.
pub fn exact_eigenvalues(m: &ExactMatrix) -> Result<Vec<(GaussRat, usize)>> {
    let chi = characteristic_polynomial(m);
    if chi.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let (roots, rest) = chi.gaussian_roots();
    if rest > 0 {
        return Err(Error::IrrationalSpectrum { poly: chi.to_string() });
    }
    Ok(roots)
}

/// Numeric eigenvalues merged by single linkage at `eps_cluster`; each
/// cluster is represented by its mean.
pub fn approx_eigen_clusters(m: &ApproxMatrix, tf: &ToleranceFrame) -> Result<Vec<(Complex64, usize)>> {
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let d = DMatrix::from_fn(n, n, |i, j| m[(i, j)]);
    let ev: Vec<Complex64> = d
        .clone()
        .try_schur(f64::EPSILON, 200 * n)
        .and_then(|s| s.eigenvalues())
        .map(|v| v.iter().cloned().collect())
        .ok_or(Error::Ambiguous {
            context: "eigenvalue computation",
            value: f64::NAN,
            threshold: tf.eps_cluster,
        })?;
    if ev.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidValue("non-finite eigenvalue".into()));
    }
    // union-find over the "within eps_cluster" graph
    let mut parent: Vec<usize> = (0..ev.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..ev.len() {
        for j in i + 1..ev.len() {
            if (ev[i] - ev[j]).norm() <= tf.eps_cluster {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut clusters: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..ev.len() {
        let root = find(&mut parent, i);
        match clusters.iter_mut().find(|c| c.0 == root) {
            Some(c) => {
                c.1 += ev[i];
                c.2 += 1;
            }
            None => clusters.push((root, ev[i], 1)),
        }
    }
    let mut out: Vec<(Complex64, usize)> = clusters
        .into_iter()
        .map(|(_, s, k)| (s / k as f64, k))
        .collect();
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    Ok(out)
}

// ---------------------------------------------------------------- presentations

/// Jordan data with an exact similarity `S`; the operator is `S J S⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanPresentation {
    eigen_data: Vec<(GaussRat, Vec<usize>)>,
    similarity: ExactMatrix,
    similarity_inv: ExactMatrix,
}

impl JordanPresentation {
    /// `similarity = None` means the identity.
    pub fn new(eigen_data: Vec<(GaussRat, Vec<usize>)>, similarity: Option<ExactMatrix>) -> Result<Self> {
        let n: usize = eigen_data.iter().flat_map(|(_, b)| b.iter()).sum();
        if eigen_data.iter().any(|(_, b)| b.is_empty() || b.contains(&0)) {
            return Err(Error::InvalidBlock("Jordan block sizes must be at least 1".into()));
        }
        for (i, (l, _)) in eigen_data.iter().enumerate() {
            if eigen_data[..i].iter().any(|(m, _)| m == l) {
                return Err(Error::InvalidBlock(format!("eigenvalue {l} listed twice")));
            }
        }
        let similarity = similarity.unwrap_or_else(|| Matrix::identity(n));
        if !similarity.is_square() || similarity.rows() != n {
            return Err(Error::InvalidBlock(format!(
                "similarity is {}x{} but the blocks have total size {n}",
                similarity.rows(),
                similarity.cols()
            )));
        }
        let similarity_inv = similarity
            .inverse()
            .map_err(|_| Error::InvalidBlock("similarity is singular".into()))?;
        Ok(JordanPresentation {
            eigen_data,
            similarity,
            similarity_inv,
        })
    }

    pub fn eigen_data(&self) -> &[(GaussRat, Vec<usize>)] {
        &self.eigen_data
    }

    pub fn similarity(&self) -> &ExactMatrix {
        &self.similarity
    }

    pub fn dim(&self) -> usize {
        self.similarity.rows()
    }

    /// Largest block at `λ`, 0 if `λ` is not an eigenvalue.
    pub fn largest_block(&self, lambda: &GaussRat) -> usize {
        self.eigen_data
            .iter()
            .find(|(l, _)| l == lambda)
            .and_then(|(_, b)| b.iter().max().copied())
            .unwrap_or(0)
    }

    /// Eigenvalues with algebraic multiplicities, sorted by `(re, im)`.
    pub fn eigenvalues(&self) -> Vec<(GaussRat, usize)> {
        let mut v: Vec<(GaussRat, usize)> = self
            .eigen_data
            .iter()
            .map(|(l, b)| (l.clone(), b.iter().sum()))
            .collect();
        v.sort();
        v
    }

    fn block_diag(&self, mut block: impl FnMut(&GaussRat, usize) -> ExactMatrix) -> ExactMatrix {
        let mut out = Matrix::zeros(0, 0);
        for (l, sizes) in &self.eigen_data {
            for &s in sizes {
                out = out.direct_sum(&block(l, s));
            }
        }
        out
    }

    pub fn jordan_matrix(&self) -> ExactMatrix {
        self.block_diag(|l, s| jordan_block(l, s))
    }

    pub fn to_matrix(&self) -> ExactMatrix {
        self.similarity
            .matmul(&self.jordan_matrix())
            .matmul(&self.similarity_inv)
    }

    pub fn minimal_polynomial(&self) -> Polynomial<GaussRat> {
        let mut eig: Vec<&(GaussRat, Vec<usize>)> = self.eigen_data.iter().collect();
        eig.sort_by(|a, b| a.0.cmp(&b.0));
        eig.iter().fold(Polynomial::one(), |acc, (l, b)| {
            let s = *b.iter().max().expect("nonempty");
            acc.mul(&Polynomial::linear_root(l).pow(s as u32))
        })
    }

    /// `S J^D S⁻¹` with the blockwise Drazin inverse of `J`.
    pub fn drazin_inverse(&self) -> (ExactMatrix, usize) {
        let jd = self.block_diag(|l, s| {
            if l.is_zero() {
                Matrix::zeros(s, s)
            } else {
                let inv = l.recip();
                Matrix::from_fn(s, s, |i, j| {
                    if j < i {
                        GaussRat::zero()
                    } else {
                        let d = (j - i) as u64;
                        let mag = inv.pow(d + 1);
                        if d % 2 == 1 { -mag } else { mag }
                    }
                })
            }
        });
        let index = self.largest_block(&GaussRat::zero());
        (self.similarity.matmul(&jd).matmul(&self.similarity_inv), index)
    }

    /// `(S J S⁻¹)* = (S⁻¹)* P J̄ P S*` where `P` reverses each block, so the
    /// adjoint is presented by conjugate eigenvalues and similarity `(S⁻¹)* P`.
    pub fn adjoint(&self) -> Self {
        let p = self.block_diag(|_, s| Matrix::from_fn(s, s, |i, j| if i + j + 1 == s { GaussRat::one() } else { GaussRat::zero() }));
        JordanPresentation {
            eigen_data: self.eigen_data.iter().map(|(l, b)| (l.conj(), b.clone())).collect(),
            similarity: self.similarity_inv.conj_transpose().matmul(&p),
            similarity_inv: p.matmul(&self.similarity.conj_transpose()),
        }
    }

    /// `T + μ` keeps the presentation.
    pub fn shifted_by(&self, mu: &GaussRat) -> Self {
        JordanPresentation {
            eigen_data: self.eigen_data.iter().map(|(l, b)| (l + mu, b.clone())).collect(),
            similarity: self.similarity.clone(),
            similarity_inv: self.similarity_inv.clone(),
        }
    }
}

pub fn jordan_block(lambda: &GaussRat, s: usize) -> ExactMatrix {
    Matrix::from_fn(s, s, |i, j| {
        if i == j {
            lambda.clone()
        } else if j == i + 1 {
            GaussRat::one()
        } else {
            GaussRat::zero()
        }
    })
}

// ---------------------------------------------------------------- uniform front end

/// A matrix operand: raw exact, raw approximate, or presented.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixBlock {
    Exact(ExactMatrix),
    Approx(ApproxMatrix),
    Presented(JordanPresentation),
}

/// A polynomial in either arithmetic mode.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPolynomial {
    Exact(Polynomial<GaussRat>),
    Approx(Polynomial<Complex64>),
}

impl AnyPolynomial {
    pub fn degree(&self) -> Option<usize> {
        match self {
            AnyPolynomial::Exact(p) => p.degree(),
            AnyPolynomial::Approx(p) => p.degree(),
        }
    }

    pub fn as_exact(&self) -> Option<&Polynomial<GaussRat>> {
        match self {
            AnyPolynomial::Exact(p) => Some(p),
            AnyPolynomial::Approx(_) => None,
        }
    }

    pub fn to_approx(&self) -> Polynomial<Complex64> {
        match self {
            AnyPolynomial::Exact(p) => p.map(<Complex64 as Scalar>::from_gauss),
            AnyPolynomial::Approx(p) => p.clone(),
        }
    }

    pub fn eval(&self, z: &ComplexValue) -> ComplexValue {
        match (self, z) {
            (AnyPolynomial::Exact(p), ComplexValue::Exact(g)) => ComplexValue::Exact(p.eval(g)),
            _ => ComplexValue::Approx(self.to_approx().eval(&z.to_complex64())),
        }
    }
}

impl fmt::Display for AnyPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyPolynomial::Exact(p) => write!(f, "{p}"),
            AnyPolynomial::Approx(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for AnyPolynomial {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        s.collect_str(self)
    }
}

/// Drazin inverse together with the least admissible power.
#[derive(Clone, Debug, PartialEq)]
pub struct DrazinResult {
    /// `Exact` or `Approx`, never `Presented`.
    pub inverse: MatrixBlock,
    pub index: usize,
}

pub fn to_approx_matrix(m: &ExactMatrix) -> ApproxMatrix {
    m.map(<Complex64 as Scalar>::from_gauss)
}

impl MatrixBlock {
    pub fn dim(&self) -> usize {
        match self {
            MatrixBlock::Exact(m) => m.rows(),
            MatrixBlock::Approx(m) => m.rows(),
            MatrixBlock::Presented(p) => p.dim(),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, MatrixBlock::Approx(_))
    }

    /// The explicit matrix in exact mode; `None` for approximate input.
    pub fn to_exact(&self) -> Option<ExactMatrix> {
        match self {
            MatrixBlock::Exact(m) => Some(m.clone()),
            MatrixBlock::Approx(_) => None,
            MatrixBlock::Presented(p) => Some(p.to_matrix()),
        }
    }

    pub fn to_approx(&self) -> ApproxMatrix {
        match self {
            MatrixBlock::Approx(m) => m.clone(),
            other => to_approx_matrix(&other.to_exact().expect("exact block")),
        }
    }

    /// Raw form: presentations are expanded.
    pub fn raw(&self) -> MatrixBlock {
        match self {
            MatrixBlock::Presented(p) => MatrixBlock::Exact(p.to_matrix()),
            other => other.clone(),
        }
    }

    pub fn minimal_polynomial(&self, tf: &ToleranceFrame) -> Result<AnyPolynomial> {
        match self {
            MatrixBlock::Exact(m) => Ok(AnyPolynomial::Exact(minimal_polynomial(m, tf)?)),
            MatrixBlock::Presented(p) => Ok(AnyPolynomial::Exact(p.minimal_polynomial())),
            MatrixBlock::Approx(m) => {
                // scale to unit norm so the power vectors stay comparable
                let s = m.frobenius_norm();
                if s == 0.0 {
                    return Ok(AnyPolynomial::Approx(Polynomial::x()));
                }
                let q = minimal_polynomial(&m.scale(&Complex64::new(1.0 / s, 0.0)), tf)?;
                let d = q.degree().unwrap_or(0);
                let coeffs = q
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * s.powi((d - k) as i32))
                    .collect();
                Ok(AnyPolynomial::Approx(Polynomial::new(coeffs)))
            }
        }
    }

    pub fn ascent_descent(&self, lambda: &ComplexValue, tf: &ToleranceFrame) -> Result<(usize, usize)> {
        match (self, lambda) {
            (MatrixBlock::Approx(m), l) => ascent_descent(m, &l.to_complex64(), tf),
            (b, ComplexValue::Exact(l)) => ascent_descent(&b.to_exact().expect("exact"), l, tf),
            (b, ComplexValue::Approx(l)) => ascent_descent(&b.to_approx(), l, tf),
        }
    }

    pub fn drazin_inverse(&self, tf: &ToleranceFrame) -> Result<DrazinResult> {
        match self {
            MatrixBlock::Exact(m) => {
                let (x, index) = drazin_inverse(m, tf)?;
                Ok(DrazinResult {
                    inverse: MatrixBlock::Exact(x),
                    index,
                })
            }
            MatrixBlock::Approx(m) => {
                let (x, index) = drazin_inverse(m, tf)?;
                Ok(DrazinResult {
                    inverse: MatrixBlock::Approx(x),
                    index,
                })
            }
            MatrixBlock::Presented(p) => {
                let (x, index) = p.drazin_inverse();
                Ok(DrazinResult {
                    inverse: MatrixBlock::Exact(x),
                    index,
                })
            }
        }
    }

    /// Eigenvalues with algebraic multiplicities, sorted by `(re, im)`.
    pub fn eigen_clusters(&self, tf: &ToleranceFrame) -> Result<Vec<(ComplexValue, usize)>> {
        let wrap = |v: Vec<(GaussRat, usize)>| v.into_iter().map(|(l, k)| (ComplexValue::Exact(l), k)).collect();
        match self {
            MatrixBlock::Exact(m) => Ok(wrap(exact_eigenvalues(m)?)),
            MatrixBlock::Presented(p) => Ok(wrap(p.eigenvalues())),
            MatrixBlock::Approx(m) => Ok(approx_eigen_clusters(m, tf)?
                .into_iter()
                .map(|(z, k)| (ComplexValue::Approx(z), k))
                .collect()),
        }
    }

    /// Every eigenvalue with its pole order (the ascent there), sorted by
    /// `(re, im)`.
    pub fn poles(&self, tf: &ToleranceFrame) -> Result<Vec<(ComplexValue, u32)>> {
        if let MatrixBlock::Presented(p) = self {
            return Ok(p
                .eigenvalues()
                .into_iter()
                .map(|(l, _)| {
                    let s = p.largest_block(&l) as u32;
                    (ComplexValue::Exact(l), s)
                })
                .collect());
        }
        let mut out = Vec::new();
        for (l, _) in self.eigen_clusters(tf)? {
            let (a, _) = self.ascent_descent(&l, tf)?;
            out.push((l, a as u32));
        }
        Ok(out)
    }

    pub fn conj_transpose(&self) -> MatrixBlock {
        match self {
            MatrixBlock::Approx(m) => MatrixBlock::Approx(m.conj_transpose()),
            other => MatrixBlock::Exact(other.to_exact().expect("exact").conj_transpose()),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        match self {
            MatrixBlock::Approx(m) => m.is_hermitian(),
            other => other.to_exact().expect("exact").is_hermitian(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(rows: &[&[i64]]) -> ExactMatrix {
        Matrix::from_fn(rows.len(), rows[0].len(), |i, j| GaussRat::int(rows[i][j]))
    }

    fn tf() -> ToleranceFrame {
        ToleranceFrame::default()
    }

    #[test]
    fn ascent_of_nilpotent_block() {
        let j3 = jordan_block(&GaussRat::zero(), 3);
        assert_eq!(ascent_descent(&j3, &GaussRat::zero(), &tf()).unwrap(), (3, 3));
        assert_eq!(ascent_descent(&ex(&[&[1, 1], &[0, 1]]), &GaussRat::zero(), &tf()).unwrap(), (0, 0));
        let d = Matrix::diagonal(&[0, 1, 1, 1].map(GaussRat::int));
        assert_eq!(ascent_descent(&d, &GaussRat::zero(), &tf()).unwrap(), (1, 1));
    }

    #[test]
    fn drazin_of_examples() {
        let (x, k) = drazin_inverse(&ex(&[&[1, 1], &[0, 1]]), &tf()).unwrap();
        assert_eq!((x, k), (ex(&[&[1, -1], &[0, 1]]), 0));
        let m = jordan_block(&GaussRat::zero(), 2).direct_sum(&ex(&[&[2]]));
        let (x, k) = drazin_inverse(&m, &tf()).unwrap();
        let want = Matrix::<GaussRat>::zeros(2, 2).direct_sum(&Matrix::from_rows(vec![vec![GaussRat::ratio(1, 2)]]));
        assert_eq!((x, k), (want, 2));
        let d = Matrix::diagonal(&[0, 1, 1, 1].map(GaussRat::int));
        assert_eq!(drazin_inverse(&d, &tf()).unwrap(), (d.clone(), 1));
    }

    #[test]
    fn minimal_polynomials() {
        let id = Matrix::<GaussRat>::identity(2);
        assert_eq!(minimal_polynomial(&id, &tf()).unwrap().to_string(), "x - 1");
        let p = JordanPresentation::new(vec![(GaussRat::zero(), vec![3])], None).unwrap();
        assert_eq!(p.minimal_polynomial().to_string(), "x^3");
        let p = JordanPresentation::new(
            vec![(GaussRat::zero(), vec![2]), (GaussRat::int(2), vec![1])],
            None,
        )
        .unwrap();
        assert_eq!(p.minimal_polynomial().to_string(), "x^3 - 2x^2");
        assert!(p.minimal_polynomial().eval_matrix(&p.to_matrix()).is_zero());
        assert_eq!(minimal_polynomial(&p.to_matrix(), &tf()).unwrap(), p.minimal_polynomial());
    }

    #[test]
    fn eigenvalues_exact_and_irrational() {
        let r = exact_eigenvalues(&Matrix::diagonal(&[1, 1, 2].map(GaussRat::int))).unwrap();
        assert_eq!(r, vec![(GaussRat::int(1), 2), (GaussRat::int(2), 1)]);
        let r = exact_eigenvalues(&ex(&[&[0, 1], &[-1, 0]])).unwrap();
        assert_eq!(r, vec![(-GaussRat::i(), 1), (GaussRat::i(), 1)]);
        assert!(matches!(
            exact_eigenvalues(&ex(&[&[0, 2], &[1, 0]])),
            Err(Error::IrrationalSpectrum { .. })
        ));
    }

    #[test]
    fn approx_clusters_merge_repeated_eigenvalues() {
        let m = to_approx_matrix(&Matrix::diagonal(&[1, 1, 2].map(GaussRat::int)));
        let c = approx_eigen_clusters(&m, &tf()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, 2);
        assert!((c[1].0 - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn merged_cluster_near_a_multiple_of_identity_is_a_simple_pole() {
        let m = Matrix::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(1.00001, 0.0)]);
        let loose = ToleranceFrame::uniform(1e-4).unwrap();
        let l = Complex64::new(1.000005, 0.0);
        assert_eq!(ascent_descent(&m, &l, &loose).unwrap(), (1, 1));
        assert_eq!(ascent_descent(&m, &Complex64::new(1.0, 0.0), &tf()).unwrap(), (1, 1));
    }

    #[test]
    fn presented_drazin_matches_raw() {
        let s = ex(&[&[1, 2, 0], &[0, 1, 0], &[1, 0, 1]]);
        let p = JordanPresentation::new(
            vec![(GaussRat::zero(), vec![2]), (GaussRat::int(3), vec![1])],
            Some(s),
        )
        .unwrap();
        let (x, k) = p.drazin_inverse();
        assert_eq!(drazin_inverse(&p.to_matrix(), &tf()).unwrap(), (x, k));
        assert_eq!(k, 2);
    }

    #[test]
    fn poles_are_sorted_with_orders() {
        let p = MatrixBlock::Presented(
            JordanPresentation::new(vec![(GaussRat::int(2), vec![1]), (GaussRat::zero(), vec![2])], None).unwrap(),
        );
        let want = vec![(ComplexValue::int(0), 2), (ComplexValue::int(2), 1)];
        assert_eq!(p.poles(&tf()).unwrap(), want);
        assert_eq!(p.raw().poles(&tf()).unwrap(), want);
    }

    #[test]
    fn presented_adjoint_is_the_conjugate_transpose() {
        let s = ex(&[&[1, 2, 0], &[0, 1, 0], &[1, 0, 1]]).add(&Matrix::from_fn(3, 3, |i, j| if i == 0 && j == 2 { GaussRat::i() } else { GaussRat::zero() }));
        let p = JordanPresentation::new(
            vec![(GaussRat::from_parts(1, 2, 1, 1), vec![2]), (GaussRat::int(3), vec![1])],
            Some(s),
        )
        .unwrap();
        let a = p.adjoint();
        assert_eq!(a.to_matrix(), p.to_matrix().conj_transpose());
        assert_eq!(a.adjoint().to_matrix(), p.to_matrix());
    }
}
