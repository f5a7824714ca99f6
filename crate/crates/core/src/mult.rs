//! Left and right multiplication `L_a(X) = aX`, `R_a(X) = Xa` on the
//! `n²`-dimensional space of `n×n` matrices.
//!
//! Coordinates are the matrix units `E_ij` in row-major order, so
//! `vec(X)[i·n + j] = X_ij`. Then `L_a = a ⊗ I` and `R_a = I ⊗ aᵀ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ascent_descent, MatrixBlock};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::value::{ComplexValue, ToleranceFrame};

/// Exact realizations are limited to `n ≤ 6`.
pub const MAX_EXACT_DIM: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct MultRealization<S> {
    pub base: Matrix<S>,
    pub left: Matrix<S>,
    pub right: Matrix<S>,
}

pub fn realize<S: Scalar>(a: &Matrix<S>) -> Result<MultRealization<S>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("realizing a {}x{} matrix", a.rows(), a.cols())));
    }
    if S::EXACT && a.rows() > MAX_EXACT_DIM {
        return Err(Error::Dimension(format!(
            "exact realizations need n ≤ {MAX_EXACT_DIM}, got {}",
            a.rows()
        )));
    }
    let id = Matrix::identity(a.rows());
    Ok(MultRealization {
        base: a.clone(),
        left: a.kron(&id),
        right: id.kron(&a.transpose()),
    })
}

/// Ascent and descent of one operator at one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AscDsc {
    pub ascent: usize,
    pub descent: usize,
}

impl From<(usize, usize)> for AscDsc {
    fn from((ascent, descent): (usize, usize)) -> Self {
        AscDsc { ascent, descent }
    }
}

/// The comparisons at one eigenvalue `λ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointDuality {
    pub lambda: ComplexValue,
    /// `L_a - λ`.
    pub left: AscDsc,
    /// `R_{a*} - λ̄`.
    pub right_adjoint: AscDsc,
    /// For hermitian `a` and real `λ`: `R_a - λ` and `a - λ`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right: Option<AscDsc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<AscDsc>,
}

impl PointDuality {
    /// `d(L_a-λ) = d(R_{a*}-λ̄)` and `a(L_a-λ) = a(R_{a*}-λ̄)`.
    pub fn adjoint_law(&self) -> bool {
        self.left == self.right_adjoint
    }

    /// Ascents and descents of `L_a-λ`, `R_a-λ`, `a-λ` agree (vacuous when
    /// not applicable).
    pub fn hermitian_law(&self) -> bool {
        match (&self.right, &self.base) {
            (Some(r), Some(b)) => self.left == *r && *r == *b,
            _ => true,
        }
    }
}

/// Pointwise duality data for `a`, serialized as `mult_duality`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityReport {
    pub hermitian: bool,
    pub points: Vec<PointDuality>,
    /// Drazin index of `a` and of `L_a` at 0.
    pub index_at_0: (usize, usize),
}

impl DualityReport {
    /// Human-readable descriptions of every failed comparison.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in &self.points {
            if !p.adjoint_law() {
                out.push(format!(
                    "at {}: L_a - λ has (a, d) = ({}, {}) but R_a* - conj λ has ({}, {})",
                    p.lambda, p.left.ascent, p.left.descent, p.right_adjoint.ascent, p.right_adjoint.descent
                ));
            }
            if !p.hermitian_law() {
                out.push(format!("at {}: ascent/descent of L_a, R_a, a differ: {:?} {:?} {:?}", p.lambda, p.left, p.right, p.base));
            }
        }
        if self.index_at_0.0 != self.index_at_0.1 {
            out.push(format!("index at 0: a has {}, L_a has {}", self.index_at_0.0, self.index_at_0.1));
        }
        out
    }

    pub fn holds(&self) -> bool {
        self.violations().is_empty()
    }
}

fn report_for<S: Scalar>(
    a: &Matrix<S>,
    eigen: &[ComplexValue],
    to_s: impl Fn(&ComplexValue) -> S,
    hermitian: bool,
    tf: &ToleranceFrame,
) -> Result<DualityReport> {
    let ra = realize(a)?;
    let rs = realize(&a.conj_transpose())?;
    let mut points = Vec::with_capacity(eigen.len());
    for l in eigen {
        let s = to_s(l);
        let sc = s.conj();
        let left: AscDsc = ascent_descent(&ra.left, &s, tf)?.into();
        let right_adjoint = ascent_descent(&rs.right, &sc, tf)?.into();
        let (right, base) = if hermitian && l.is_real_within(tf.eps_set) {
            (
                Some(ascent_descent(&ra.right, &s, tf)?.into()),
                Some(ascent_descent(a, &s, tf)?.into()),
            )
        } else {
            (None, None)
        };
        points.push(PointDuality {
            lambda: l.clone(),
            left,
            right_adjoint,
            right,
            base,
        });
    }
    let index_at_0 = (ascent_descent(a, &S::zero(), tf)?.0, ascent_descent(&ra.left, &S::zero(), tf)?.0);
    Ok(DualityReport {
        hermitian,
        points,
        index_at_0,
    })
}

/// Compares ascents and descents of `L_a`, `R_{a*}` (and for hermitian
/// `a` also `R_a`, `a`) at every eigenvalue of `a`.
pub fn duality_report(a: &MatrixBlock, tf: &ToleranceFrame) -> Result<DualityReport> {
    let eigen: Vec<ComplexValue> = a.eigen_clusters(tf)?.into_iter().map(|(l, _)| l).collect();
    let hermitian = a.is_hermitian();
    match a.to_exact() {
        Some(m) => report_for(
            &m,
            &eigen,
            |l| l.as_exact().expect("exact eigenvalue").clone(),
            hermitian,
            tf,
        ),
        None => report_for(&a.to_approx(), &eigen, ComplexValue::to_complex64, hermitian, tf),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::GaussRat;
    use crate::linalg::exact_eigenvalues;
    use crate::ExactMatrix;

    fn ex(rows: &[&[i64]]) -> ExactMatrix {
        Matrix::from_fn(rows.len(), rows[0].len(), |i, j| GaussRat::int(rows[i][j]))
    }

    fn tf() -> ToleranceFrame {
        ToleranceFrame::default()
    }

    #[test]
    fn realizations_act_by_multiplication() {
        let a = ex(&[&[1, 2], &[3, 4]]);
        let r = realize(&a).unwrap();
        for k in 0..4 {
            let x = Matrix::from_fn(2, 2, |i, j| GaussRat::int(i64::from(i * 2 + j == k)));
            let lx = Matrix::from_rows(vec![x.vec()]).transpose();
            assert_eq!(r.left.matmul(&lx).vec(), a.matmul(&x).vec());
            assert_eq!(r.right.matmul(&lx).vec(), x.matmul(&a).vec());
        }
        assert_eq!(r.left.matmul(&r.right), r.right.matmul(&r.left));
    }

    #[test]
    fn identity_and_diagonal() {
        let r = realize(&ExactMatrix::identity(2)).unwrap();
        assert_eq!(r.left, ExactMatrix::identity(4));
        assert_eq!(r.right, ExactMatrix::identity(4));
        let d = realize(&ExactMatrix::diagonal(&[GaussRat::int(1), GaussRat::int(2)])).unwrap();
        let eig = exact_eigenvalues(&d.left).unwrap();
        assert_eq!(eig, vec![(GaussRat::int(1), 2), (GaussRat::int(2), 2)]);
    }

    #[test]
    fn nilpotent_realizations_square_to_zero() {
        let r = realize(&ex(&[&[0, 1], &[0, 0]])).unwrap();
        assert!(r.left.pow(2).is_zero());
        assert!(r.right.pow(2).is_zero());
        let rep = duality_report(&MatrixBlock::Exact(ex(&[&[0, 1], &[0, 0]])), &tf()).unwrap();
        assert_eq!(rep.points[0].left.descent, 2);
        assert_eq!(rep.points[0].right_adjoint.descent, 2);
        assert!(rep.holds());
    }

    #[test]
    fn hermitian_three_way_agreement() {
        let rep = duality_report(&MatrixBlock::Exact(ex(&[&[0, 0], &[0, 1]])), &tf()).unwrap();
        assert!(rep.hermitian);
        let p0 = &rep.points[0];
        assert_eq!(p0.lambda, ComplexValue::int(0));
        assert_eq!(p0.left.ascent, 1);
        assert_eq!(p0.right.unwrap().ascent, 1);
        assert_eq!(p0.base.unwrap().ascent, 1);
        assert!(rep.holds());
    }

    #[test]
    fn invertible_has_nothing_at_zero() {
        let rep = duality_report(&MatrixBlock::Exact(ex(&[&[2, 1], &[0, 3]])), &tf()).unwrap();
        assert_eq!(rep.index_at_0, (0, 0));
        assert!(rep.holds());
    }

    #[test]
    fn serializes_with_stable_keys() {
        let rep = duality_report(&MatrixBlock::Exact(ex(&[&[0, 1], &[0, 0]])), &tf()).unwrap();
        let s = serde_json::to_string(&rep).unwrap();
        assert!(s.starts_with(r#"{"hermitian":false,"points":[{"lambda":"0","left":{"ascent":2,"descent":2}"#));
    }
}
