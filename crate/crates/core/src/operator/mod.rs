//! Finitely presented operators: direct sums of matrix, diagonal and
//! weighted-shift blocks, closed under a restricted set of combinators.

pub mod diagonal;
pub mod profile;
pub mod shift;

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gauss::GaussRat;
use crate::linalg::{AnyPolynomial, JordanPresentation, MatrixBlock};
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::value::{ComplexValue, ToleranceFrame};

pub use diagonal::{Component, ComponentKind, DiagonalBlock};
pub use profile::{spectral_profile, PoleSet, SpectralProfile};
pub use shift::{ShiftBlock, Weights};

use diagonal::BinOp;

#[derive(Clone, Debug, PartialEq)]
pub enum Block {
    Matrix(MatrixBlock),
    Diagonal(DiagonalBlock),
    Shift(ShiftBlock),
}

fn incompatible(a: &impl fmt::Display, b: &impl fmt::Display, reason: &str) -> Error {
    Error::Incompatible {
        left: a.to_string(),
        right: b.to_string(),
        reason: reason.to_string(),
    }
}

fn approx_poly(p: &Polynomial<GaussRat>) -> Polynomial<Complex64> {
    p.map(<Complex64 as Scalar>::from_gauss)
}

impl Block {
    /// `c` when the block is the scalar diagonal `c·I`.
    pub fn as_scalar(&self) -> Option<&GaussRat> {
        match self {
            Block::Diagonal(d) => d.as_scalar(),
            _ => None,
        }
    }

    /// `T + λ`.
    pub fn shift_by(&self, lambda: &GaussRat) -> Result<Block> {
        match self {
            Block::Matrix(MatrixBlock::Presented(p)) => Ok(Block::Matrix(MatrixBlock::Presented(p.shifted_by(lambda)))),
            _ => self.map(&Polynomial::new(vec![lambda.clone(), GaussRat::one()])),
        }
    }

    pub fn map(&self, p: &Polynomial<GaussRat>) -> Result<Block> {
        Ok(match self {
            Block::Matrix(MatrixBlock::Approx(m)) => Block::Matrix(MatrixBlock::Approx(approx_poly(p).eval_matrix(m))),
            Block::Matrix(m) => Block::Matrix(MatrixBlock::Exact(p.eval_matrix(&m.to_exact().expect("exact")))),
            Block::Diagonal(d) => Block::Diagonal(d.map(p)?),
            Block::Shift(s) => Block::Shift(s.map(p)),
        })
    }

    /// Hilbert adjoint.
    pub fn adjoint(&self) -> Block {
        match self {
            Block::Matrix(MatrixBlock::Presented(p)) => Block::Matrix(MatrixBlock::Presented(p.adjoint())),
            Block::Matrix(m) => Block::Matrix(m.conj_transpose()),
            Block::Diagonal(d) => Block::Diagonal(d.conj()),
            Block::Shift(s) => Block::Shift(s.adjoint()),
        }
    }

    fn binary(&self, o: &Block, op: BinOp) -> Result<Block> {
        let scalar_poly = |c: &GaussRat| match op {
            BinOp::Add => Polynomial::new(vec![c.clone(), GaussRat::one()]),
            BinOp::Mul => Polynomial::monomial(c.clone(), 1),
        };
        match (self, o) {
            (Block::Diagonal(a), Block::Diagonal(b)) => {
                if let Some(d) = a.combine(b, op) {
                    return Ok(Block::Diagonal(d));
                }
            }
            _ => {}
        }
        if let Some(c) = self.as_scalar() {
            return match op {
                BinOp::Add => o.shift_by(c),
                BinOp::Mul => o.map(&scalar_poly(c)),
            };
        }
        if let Some(c) = o.as_scalar() {
            return match op {
                BinOp::Add => self.shift_by(c),
                BinOp::Mul => self.map(&scalar_poly(c)),
            };
        }
        match (self, o) {
            (Block::Matrix(a), Block::Matrix(b)) => {
                if a.dim() != b.dim() {
                    return Err(incompatible(self, o, "matrix sizes differ"));
                }
                let m = match (a.to_exact(), b.to_exact()) {
                    (Some(x), Some(y)) => MatrixBlock::Exact(match op {
                        BinOp::Add => x.add(&y),
                        BinOp::Mul => x.matmul(&y),
                    }),
                    _ => {
                        let (x, y) = (a.to_approx(), b.to_approx());
                        MatrixBlock::Approx(match op {
                            BinOp::Add => x.add(&y),
                            BinOp::Mul => x.matmul(&y),
                        })
                    }
                };
                Ok(Block::Matrix(m))
            }
            (Block::Diagonal(_), Block::Diagonal(_)) => {
                Err(incompatible(self, o, "diagonal index structures differ"))
            }
            (Block::Shift(a), Block::Shift(b)) => match op {
                BinOp::Add => a.add(b),
                BinOp::Mul => a.mul(b),
            }
            .map(Block::Shift)
            .ok_or_else(|| incompatible(self, o, "different base shifts")),
            _ => Err(incompatible(self, o, "different block kinds")),
        }
    }

    pub fn add(&self, o: &Block) -> Result<Block> {
        self.binary(o, BinOp::Add)
    }

    pub fn mul(&self, o: &Block) -> Result<Block> {
        self.binary(o, BinOp::Mul)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Block::Matrix(m) => match m.to_exact() {
                Some(x) => x.is_zero(),
                None => m.to_approx().is_zero(),
            },
            Block::Diagonal(d) => d.finite_values().is_some_and(|v| v.iter().all(Zero::is_zero)),
            Block::Shift(s) => s.transform().is_zero(),
        }
    }

    /// Some power has finite-dimensional range.
    pub fn finite_rank_power(&self) -> bool {
        match self {
            Block::Matrix(_) => true,
            Block::Diagonal(d) => d.finitely_supported(),
            Block::Shift(s) => s.finite_rank_power(),
        }
    }

    /// Real diagonal values or a hermitian matrix.
    pub fn is_hermitian(&self) -> bool {
        match self {
            Block::Matrix(m) => m.is_hermitian(),
            Block::Diagonal(d) => d.is_real(),
            Block::Shift(s) => s.is_scalar() && s.mu().is_real(),
        }
    }

    /// Minimal polynomial, or `None` when no nonzero polynomial annihilates
    /// the block.
    pub fn minimal_polynomial(&self, tf: &ToleranceFrame) -> Result<Option<AnyPolynomial>> {
        Ok(match self {
            Block::Matrix(m) => Some(m.minimal_polynomial(tf)?),
            Block::Diagonal(d) => d.finite_values().map(|vals| {
                AnyPolynomial::Exact(vals.iter().fold(Polynomial::one(), |acc, v| acc.mul(&Polynomial::linear_root(v))))
            }),
            Block::Shift(s) => s
                .nil_order()
                .map(|k| AnyPolynomial::Exact(Polynomial::linear_root(&s.mu()).pow(k))),
        })
    }

    /// Roots of the minimal polynomial with multiplicities.
    fn minimal_roots(&self, tf: &ToleranceFrame) -> Result<Option<Vec<(ComplexValue, u32)>>> {
        Ok(match self {
            Block::Matrix(m) => Some(match m.poles(tf) {
                Err(Error::IrrationalSpectrum { .. }) => MatrixBlock::Approx(m.to_approx()).poles(tf)?,
                r => r?,
            }),
            Block::Diagonal(d) => d
                .finite_values()
                .map(|v| v.into_iter().map(|z| (ComplexValue::Exact(z), 1)).collect()),
            Block::Shift(s) => s.nil_order().map(|k| vec![(ComplexValue::Exact(s.mu()), k)]),
        })
    }

    /// `P(T) = 0`. Approximate checks allow `√eps_set` relative to the
    /// size of the terms of `P(T)`.
    pub fn annihilated_by(&self, p: &AnyPolynomial, tf: &ToleranceFrame) -> bool {
        let tol = tf.eps_set.sqrt();
        match (self, p) {
            (Block::Matrix(m), AnyPolynomial::Exact(q)) if m.is_exact() => {
                q.eval_matrix(&m.to_exact().expect("exact")).is_zero()
            }
            (Block::Matrix(m), _) => {
                let a = m.to_approx();
                let q = p.to_approx();
                let norm = a.frobenius_norm();
                let scale: f64 = q
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c.norm() * (1.0 + norm).powi(k as i32))
                    .sum();
                q.eval_matrix(&a).frobenius_norm() <= tol * scale.max(1.0)
            }
            (Block::Diagonal(d), AnyPolynomial::Exact(q)) => d.annihilated_by(q),
            (Block::Diagonal(d), AnyPolynomial::Approx(q)) => d.finite_values().is_some_and(|vals| {
                vals.iter().all(|v| {
                    let z = <Complex64 as Scalar>::from_gauss(v);
                    let scale: f64 = q.coeffs().iter().enumerate().map(|(k, c)| c.norm() * (1.0 + z.norm()).powi(k as i32)).sum();
                    q.eval(&z).norm() <= tol * scale.max(1.0)
                })
            }),
            (Block::Shift(s), AnyPolynomial::Exact(q)) => s.annihilated_by(q),
            (Block::Shift(s), AnyPolynomial::Approx(q)) => {
                // P(p(S)) = Σ P⁽ⁱ⁾(μ)/i! (p(S) - μ)ⁱ, and (p(S) - μ)ⁱ ≠ 0 below the order
                let Some(k) = s.nil_order() else {
                    return q.is_zero();
                };
                let mu = <Complex64 as Scalar>::from_gauss(&s.mu());
                let mut d = q.clone();
                let mut fact = 1.0;
                for i in 0..k {
                    if i > 0 {
                        fact *= f64::from(i);
                    }
                    if d.eval(&mu).norm() / fact > tol {
                        return false;
                    }
                    d = d.derivative();
                }
                true
            }
        }
    }

    pub fn dsl(&self) -> String {
        match self {
            Block::Matrix(m) => matrix_dsl(m),
            Block::Diagonal(d) => d.to_string(),
            Block::Shift(s) => s.dsl(),
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dsl())
    }
}

fn rows_dsl<S>(m: &Matrix<S>, show: impl Fn(&S) -> String) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let r: Vec<String> = m.row(i).iter().map(&show).collect();
            format!("[{}]", r.join(", "))
        })
        .collect();
    format!("matrix [{}]", rows.join(", "))
}

pub fn matrix_dsl(m: &MatrixBlock) -> String {
    match m {
        MatrixBlock::Exact(x) => rows_dsl(x, ToString::to_string),
        MatrixBlock::Approx(x) => rows_dsl(x, |z| ComplexValue::Approx(*z).to_string()),
        MatrixBlock::Presented(p) => {
            let eig: Vec<String> = p
                .eigen_data()
                .iter()
                .map(|(l, b)| {
                    let s: Vec<String> = b.iter().map(ToString::to_string).collect();
                    format!("{l}: [{}]", s.join(", "))
                })
                .collect();
            format!("jordan {{{}}} sim {}", eig.join(", "), rows_dsl(p.similarity(), ToString::to_string))
        }
    }
}

/// An operator expression. Evaluation ([`OperatorDesc::blocks`]) flattens
/// it into a list of blocks acting on orthogonal summands.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorDesc {
    Block(Block),
    DirectSum(Vec<OperatorDesc>),
    Add(Box<OperatorDesc>, Box<OperatorDesc>),
    Mul(Box<OperatorDesc>, Box<OperatorDesc>),
    /// `T + λ`.
    ScalarShift(Box<OperatorDesc>, GaussRat),
    Adjoint(Box<OperatorDesc>),
    Poly(Box<OperatorDesc>, Polynomial<GaussRat>),
}

/// The combinators accepted by [`combine`].
#[derive(Clone, Debug, PartialEq)]
pub enum CombineKind {
    DirectSum,
    Add,
    Mul,
    ScalarShift(GaussRat),
    Adjoint,
    Poly(Polynomial<GaussRat>),
}

impl From<Block> for OperatorDesc {
    fn from(b: Block) -> Self {
        OperatorDesc::Block(b)
    }
}

impl From<MatrixBlock> for OperatorDesc {
    fn from(m: MatrixBlock) -> Self {
        OperatorDesc::Block(Block::Matrix(m))
    }
}

impl From<DiagonalBlock> for OperatorDesc {
    fn from(d: DiagonalBlock) -> Self {
        OperatorDesc::Block(Block::Diagonal(d))
    }
}

impl From<ShiftBlock> for OperatorDesc {
    fn from(s: ShiftBlock) -> Self {
        OperatorDesc::Block(Block::Shift(s))
    }
}

impl From<JordanPresentation> for OperatorDesc {
    fn from(p: JordanPresentation) -> Self {
        OperatorDesc::Block(Block::Matrix(MatrixBlock::Presented(p)))
    }
}

impl OperatorDesc {
    pub fn dsum(parts: Vec<OperatorDesc>) -> Self {
        OperatorDesc::DirectSum(parts)
    }

    pub fn add(a: OperatorDesc, b: OperatorDesc) -> Self {
        OperatorDesc::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: OperatorDesc, b: OperatorDesc) -> Self {
        OperatorDesc::Mul(Box::new(a), Box::new(b))
    }

    pub fn shift_by(a: OperatorDesc, lambda: GaussRat) -> Self {
        OperatorDesc::ScalarShift(Box::new(a), lambda)
    }

    pub fn adjoint(a: OperatorDesc) -> Self {
        OperatorDesc::Adjoint(Box::new(a))
    }

    pub fn poly(a: OperatorDesc, p: Polynomial<GaussRat>) -> Self {
        OperatorDesc::Poly(Box::new(a), p)
    }

    /// The summands of the evaluated operator.
    pub fn blocks(&self) -> Result<Vec<Block>> {
        match self {
            OperatorDesc::Block(b) => Ok(vec![b.clone()]),
            OperatorDesc::DirectSum(parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidBlock("empty direct sum".into()));
                }
                let mut out = Vec::new();
                for p in parts {
                    out.extend(p.blocks()?);
                }
                Ok(out)
            }
            OperatorDesc::Add(a, b) => pairwise(a, b, Block::add),
            OperatorDesc::Mul(a, b) => pairwise(a, b, Block::mul),
            OperatorDesc::ScalarShift(a, l) => a.blocks()?.iter().map(|b| b.shift_by(l)).collect(),
            OperatorDesc::Adjoint(a) => Ok(a.blocks()?.iter().map(Block::adjoint).collect()),
            OperatorDesc::Poly(a, p) => a.blocks()?.iter().map(|b| b.map(p)).collect(),
        }
    }

    /// Flattened form: one block, or a direct sum of blocks.
    pub fn normalize(&self) -> Result<OperatorDesc> {
        Ok(from_blocks(self.blocks()?))
    }

    /// Every block is hermitian.
    pub fn is_hermitian(&self) -> Result<bool> {
        Ok(self.blocks()?.iter().all(Block::is_hermitian))
    }
}

pub fn from_blocks(mut blocks: Vec<Block>) -> OperatorDesc {
    if blocks.len() == 1 {
        OperatorDesc::Block(blocks.pop().expect("one block"))
    } else {
        OperatorDesc::DirectSum(blocks.into_iter().map(OperatorDesc::Block).collect())
    }
}

fn pairwise(
    a: &OperatorDesc,
    b: &OperatorDesc,
    f: impl Fn(&Block, &Block) -> Result<Block>,
) -> Result<Vec<Block>> {
    let (la, lb) = (a.blocks()?, b.blocks()?);
    if la.len() == lb.len() {
        return la.iter().zip(&lb).map(|(x, y)| f(x, y)).collect();
    }
    if la.len() == 1 && la[0].as_scalar().is_some() {
        return lb.iter().map(|y| f(&la[0], y)).collect();
    }
    if lb.len() == 1 && lb[0].as_scalar().is_some() {
        return la.iter().map(|x| f(x, &lb[0])).collect();
    }
    Err(incompatible(
        a,
        b,
        &format!("direct sums of {} and {} blocks", la.len(), lb.len()),
    ))
}

impl fmt::Display for OperatorDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorDesc::Block(b) => write!(f, "{b}"),
            OperatorDesc::DirectSum(parts) => {
                let s: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "dsum({})", s.join(", "))
            }
            OperatorDesc::Add(a, b) => write!(f, "add({a}, {b})"),
            OperatorDesc::Mul(a, b) => write!(f, "mul({a}, {b})"),
            OperatorDesc::ScalarShift(a, l) => write!(f, "shiftby({a}, {l})"),
            OperatorDesc::Adjoint(a) => write!(f, "adj({a})"),
            OperatorDesc::Poly(a, p) => write!(f, "poly({a}, {p})"),
        }
    }
}

/// Applies a combinator and returns the normalized result.
pub fn combine(kind: CombineKind, mut operands: Vec<OperatorDesc>) -> Result<OperatorDesc> {
    let arity = |n: usize, operands: &[OperatorDesc]| {
        if operands.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidBlock(format!("{kind:?} takes {n} operand(s), got {}", operands.len())))
        }
    };
    let node = match &kind {
        CombineKind::DirectSum => OperatorDesc::DirectSum(operands),
        CombineKind::Add | CombineKind::Mul => {
            arity(2, &operands)?;
            let b = operands.pop().expect("two");
            let a = operands.pop().expect("two");
            if kind == CombineKind::Add {
                OperatorDesc::add(a, b)
            } else {
                OperatorDesc::mul(a, b)
            }
        }
        CombineKind::ScalarShift(l) => {
            arity(1, &operands)?;
            OperatorDesc::shift_by(operands.pop().expect("one"), l.clone())
        }
        CombineKind::Adjoint => {
            arity(1, &operands)?;
            OperatorDesc::adjoint(operands.pop().expect("one"))
        }
        CombineKind::Poly(p) => {
            arity(1, &operands)?;
            OperatorDesc::poly(operands.pop().expect("one"), p.clone())
        }
    };
    node.normalize()
}

/// `op + f` for a commuting `f` with a finite-rank power. Blocks must be
/// aligned one to one; zero blocks of `f` are skipped.
pub fn perturb_finite_rank(op: &OperatorDesc, f: &OperatorDesc, tf: &ToleranceFrame) -> Result<OperatorDesc> {
    let fb = f.blocks()?;
    let ob = op.blocks()?;
    if fb.iter().all(Block::is_zero) {
        return Ok(from_blocks(ob));
    }
    if let Some(b) = fb.iter().find(|b| !b.finite_rank_power()) {
        return Err(Error::NotFiniteRank(b.to_string()));
    }
    if fb.len() != ob.len() {
        return Err(Error::NonCommuting(format!(
            "{f} is not aligned with the {} block(s) of {op}",
            ob.len()
        )));
    }
    let mut out = Vec::with_capacity(ob.len());
    for (t, p) in ob.iter().zip(&fb) {
        if p.is_zero() {
            out.push(t.clone());
            continue;
        }
        let commutes = match (t, p) {
            (Block::Matrix(a), Block::Matrix(b)) if a.dim() == b.dim() => match (a.to_exact(), b.to_exact()) {
                (Some(x), Some(y)) => x.matmul(&y) == y.matmul(&x),
                _ => {
                    let (x, y) = (a.to_approx(), b.to_approx());
                    let c = x.matmul(&y).sub(&y.matmul(&x)).frobenius_norm();
                    c <= tf.eps_set * (1.0 + x.frobenius_norm() * y.frobenius_norm())
                }
            },
            (Block::Diagonal(_), Block::Diagonal(_)) => true,
            (Block::Shift(a), Block::Shift(b)) => a.add(b).is_some(),
            _ => false,
        };
        if !commutes {
            return Err(Error::NonCommuting(format!("{p} against {t}")));
        }
        out.push(t.add(p)?);
    }
    Ok(from_blocks(out))
}

/// Whether some nonzero polynomial annihilates `op`, with the minimal one.
pub fn is_algebraic(op: &OperatorDesc, tf: &ToleranceFrame) -> Result<(bool, Option<AnyPolynomial>)> {
    let blocks = op.blocks()?;
    let mut polys = Vec::with_capacity(blocks.len());
    for b in &blocks {
        match b.minimal_polynomial(tf)? {
            Some(p) => polys.push(p),
            None => return Ok((false, None)),
        }
    }
    if let Some(exact) = polys.iter().map(AnyPolynomial::as_exact).collect::<Option<Vec<_>>>() {
        let p = exact.into_iter().fold(Polynomial::one(), |acc, q| acc.lcm(q));
        return Ok((true, Some(AnyPolynomial::Exact(p))));
    }
    // approximate: merge root clusters, keeping the largest multiplicity
    let mut roots: Vec<(ComplexValue, u32)> = Vec::new();
    for b in &blocks {
        for (z, k) in b.minimal_roots(tf)?.expect("algebraic block") {
            match roots.iter_mut().find(|(w, _)| w.close_to(&z, tf.eps_cluster)) {
                Some(r) => r.1 = r.1.max(k),
                None => roots.push((z, k)),
            }
        }
    }
    roots.sort_by(|a, b| a.0.lex_cmp(&b.0));
    let p = roots.iter().fold(Polynomial::one(), |acc, (z, k)| {
        acc.mul(&Polynomial::linear_root(&z.to_complex64()).pow(*k))
    });
    Ok((true, Some(AnyPolynomial::Approx(p))))
}

/// `P(op) = 0`, block by block.
pub fn annihilates(op: &OperatorDesc, p: &AnyPolynomial, tf: &ToleranceFrame) -> Result<bool> {
    Ok(op.blocks()?.iter().all(|b| b.annihilated_by(p, tf)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::Sequence;
    use crate::spectra::Multiplicity;

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    fn tf() -> ToleranceFrame {
        ToleranceFrame::default()
    }

    fn diag(parts: &[(&str, Option<u64>)]) -> OperatorDesc {
        let comps = parts
            .iter()
            .map(|(v, m)| {
                let m = m.map_or(Multiplicity::Infinite, Multiplicity::Finite);
                Component::constant(g(v), m).unwrap()
            })
            .collect();
        DiagonalBlock::new(comps).unwrap().into()
    }

    fn harmonic() -> OperatorDesc {
        DiagonalBlock::new(vec![Component::family(Sequence::harmonic(g("1"), 1).unwrap())])
            .unwrap()
            .into()
    }

    fn nilpotent2() -> OperatorDesc {
        JordanPresentation::new(vec![(g("0"), vec![2])], None).unwrap().into()
    }

    #[test]
    fn identity_is_neutral() {
        let st = diag(&[("0", Some(1)), ("1", None)]);
        let r = combine(CombineKind::Mul, vec![st.clone(), diag(&[("1", None)])]).unwrap();
        assert_eq!(r, st);
    }

    #[test]
    fn adjoint_conjugates_and_is_involutive() {
        let d = diag(&[("1i", None)]);
        assert_eq!(combine(CombineKind::Adjoint, vec![d.clone()]).unwrap(), diag(&[("-1i", None)]));
        let op = OperatorDesc::dsum(vec![d, nilpotent2()]);
        let twice = OperatorDesc::adjoint(OperatorDesc::adjoint(op.clone()));
        let a = twice.blocks().unwrap();
        let b = op.blocks().unwrap();
        assert_eq!(a[0], b[0]);
        let (Block::Matrix(x), Block::Matrix(y)) = (&a[1], &b[1]) else { panic!() };
        assert_eq!(x.to_exact(), y.to_exact());
    }

    #[test]
    fn polynomial_maps_diagonal_values() {
        let sq = combine(CombineKind::Poly(Polynomial::monomial(g("1"), 2)), vec![harmonic()]).unwrap();
        let want: OperatorDesc = DiagonalBlock::new(vec![Component::family(Sequence::harmonic(g("1"), 2).unwrap())])
            .unwrap()
            .into();
        assert_eq!(sq, want);
    }

    #[test]
    fn incompatible_operands_are_named() {
        let e = combine(CombineKind::Add, vec![harmonic(), nilpotent2()]).unwrap_err();
        match e {
            Error::Incompatible { left, right, .. } => {
                assert!(left.starts_with("diag"));
                assert!(right.starts_with("jordan"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn finite_rank_perturbations() {
        let f: OperatorDesc = DiagonalBlock::new(vec![Component::list(vec![g("0"), g("5"), g("0")]).unwrap()])
            .unwrap()
            .into();
        let p = perturb_finite_rank(&harmonic(), &f, &tf()).unwrap();
        let Block::Diagonal(d) = &p.blocks().unwrap()[0] else { panic!() };
        assert_eq!(d.components()[0].value(1), g("11/2"));

        let zero: OperatorDesc = MatrixBlock::Exact(Matrix::zeros(2, 2)).into();
        assert_eq!(perturb_finite_rank(&nilpotent2(), &zero, &tf()).unwrap(), nilpotent2());

        let m: OperatorDesc = MatrixBlock::Exact(Matrix::identity(2)).into();
        assert!(matches!(
            perturb_finite_rank(&diag(&[("0", None)]), &m, &tf()),
            Err(Error::NonCommuting(_))
        ));
        assert!(matches!(
            perturb_finite_rank(&diag(&[("0", None)]), &diag(&[("1", None)]), &tf()),
            Err(Error::NotFiniteRank(_))
        ));
        let swap: OperatorDesc = MatrixBlock::Exact(Matrix::from_fn(2, 2, |i, j| if i != j { g("1") } else { g("0") })).into();
        assert!(matches!(perturb_finite_rank(&nilpotent2(), &swap, &tf()), Err(Error::NonCommuting(_))));
    }

    #[test]
    fn algebraic_operators_and_their_annihilators() {
        let d = diag(&[("0", None), ("1", None)]);
        let (yes, p) = is_algebraic(&d, &tf()).unwrap();
        assert!(yes);
        assert_eq!(p.as_ref().unwrap().to_string(), "x^2 - x");
        assert!(!is_algebraic(&harmonic(), &tf()).unwrap().0);
        let sum = OperatorDesc::dsum(vec![d, nilpotent2()]);
        let (_, p) = is_algebraic(&sum, &tf()).unwrap();
        let p = p.unwrap();
        assert_eq!(p.to_string(), "x^3 - x^2");
        assert!(annihilates(&sum, &p, &tf()).unwrap());
        let x2 = AnyPolynomial::Exact(Polynomial::monomial(g("1"), 2));
        assert!(!annihilates(&sum, &x2, &tf()).unwrap());
    }

    #[test]
    fn approximate_annihilators() {
        let a: OperatorDesc = MatrixBlock::Approx(Matrix::from_fn(2, 2, |i, j| {
            Complex64::new(if i == j { 0.5 } else if j == i + 1 { 1.0 } else { 0.0 }, 0.0)
        }))
        .into();
        let sum = OperatorDesc::dsum(vec![a, diag(&[("1/2", None)])]);
        let (yes, p) = is_algebraic(&sum, &tf()).unwrap();
        assert!(yes);
        let p = p.unwrap();
        assert_eq!(p.degree(), Some(2));
        assert!(annihilates(&sum, &p, &tf()).unwrap());
    }

    #[test]
    fn dsl_display_round_trips_textually() {
        let op = OperatorDesc::dsum(vec![diag(&[("0", Some(1)), ("1", None)]), nilpotent2()]);
        assert_eq!(
            op.to_string(),
            "dsum(diag { 0: 1, 1: inf }, jordan {0: [2]} sim matrix [[1, 0], [0, 1]])"
        );
    }
}
