//! Weighted shifts `S eᵢ = wᵢ eᵢ₊₁` and polynomials in them.
//!
//! A block is `p(S)` or `p(S*)` for a fixed base shift. With weights
//! tending to 0 the infinite shift is quasinilpotent and injective with
//! non-closed range; the truncated shift of size `m` is nilpotent of order
//! exactly `m` (all weights positive).

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gauss::GaussRat;
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::ExactMatrix;

#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    /// `c·qⁱ`, `c > 0`, `0 < q < 1`.
    Geometric(GaussRat, GaussRat),
    /// `c/(i+1)ᵖ`, `c > 0`, `p ≥ 1`.
    Harmonic(GaussRat, u32),
    /// Explicit positive weights, the last one repeated. Only allowed for
    /// truncated shifts.
    List(Vec<GaussRat>),
}

fn positive(x: &GaussRat) -> bool {
    x.is_real() && x.re().is_positive()
}

impl Weights {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            Weights::Geometric(c, q) => positive(c) && positive(q) && q.re() < One::one(),
            Weights::Harmonic(c, p) => positive(c) && *p >= 1,
            Weights::List(v) => !v.is_empty() && v.iter().all(positive),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidBlock(format!("shift weights {self} must be positive and tend to 0")))
        }
    }

    pub fn weight(&self, i: u64) -> GaussRat {
        match self {
            Weights::Geometric(c, q) => c * &q.pow(i),
            Weights::Harmonic(c, p) => c * &GaussRat::ratio(1, i as i64 + 1).pow(u64::from(*p)),
            Weights::List(v) => v.get(i as usize).unwrap_or_else(|| v.last().expect("nonempty")).clone(),
        }
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weights::Geometric(c, q) => write!(f, "geometric({c}, {q})"),
            Weights::Harmonic(c, p) => write!(f, "harmonic({c}, {p})"),
            Weights::List(v) => {
                let s: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "list({})", s.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftBlock {
    weights: Weights,
    nilpotent: Option<u32>,
    adjoint: bool,
    transform: Polynomial<GaussRat>,
}

impl ShiftBlock {
    pub fn new(weights: Weights, nilpotent: Option<u32>) -> Result<Self> {
        weights.validate()?;
        match nilpotent {
            Some(0) => return Err(Error::InvalidBlock("nilpotent order must be at least 1".into())),
            None if matches!(weights, Weights::List(_)) => {
                return Err(Error::InvalidBlock(
                    "list weights need a nilpotent order; an eventually constant shift has a disk as spectrum".into(),
                ))
            }
            _ => {}
        }
        Ok(ShiftBlock {
            weights,
            nilpotent,
            adjoint: false,
            transform: Polynomial::x(),
        })
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn nilpotent(&self) -> Option<u32> {
        self.nilpotent
    }

    pub fn is_adjoint(&self) -> bool {
        self.adjoint
    }

    /// `p` in `p(S)`.
    pub fn transform(&self) -> &Polynomial<GaussRat> {
        &self.transform
    }

    /// The only spectral value, `p(0)`.
    pub fn mu(&self) -> GaussRat {
        self.transform.coeff(0)
    }

    fn same_base(&self, o: &Self) -> bool {
        self.weights == o.weights && self.nilpotent == o.nilpotent && self.adjoint == o.adjoint
    }

    fn with_transform(&self, t: Polynomial<GaussRat>) -> Self {
        ShiftBlock {
            transform: t,
            ..self.clone()
        }
    }

    /// `p(S) - μ` as a power series in `S`: its valuation `j`, or `None`
    /// when `p(S) = μ`. Truncated shifts reduce `j ≥ m` to `None`.
    pub fn valuation(&self) -> Option<usize> {
        let q = self.transform.sub(&Polynomial::constant(self.mu()));
        if q.is_zero() {
            return None;
        }
        let j = q.valuation();
        match self.nilpotent {
            Some(m) if j >= m as usize => None,
            _ => Some(j),
        }
    }

    /// Order of `μ` as a pole when the block is algebraic: the nilpotency
    /// order of `p(S) - μ`, or 1 when that operator is 0.
    pub fn nil_order(&self) -> Option<u32> {
        match (self.valuation(), self.nilpotent) {
            (None, _) => Some(1),
            (Some(j), Some(m)) => Some(m.div_ceil(j as u32)),
            (Some(_), None) => None,
        }
    }

    /// `p(S) = μ` for a scalar `μ`.
    pub fn is_scalar(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn adjoint(&self) -> Self {
        ShiftBlock {
            adjoint: !self.adjoint,
            transform: self.transform.conj(),
            ..self.clone()
        }
    }

    pub fn map(&self, p: &Polynomial<GaussRat>) -> Self {
        self.with_transform(p.compose(&self.transform))
    }

    pub fn add(&self, o: &Self) -> Option<Self> {
        self.same_base(o).then(|| self.with_transform(self.transform.add(&o.transform)))
    }

    pub fn mul(&self, o: &Self) -> Option<Self> {
        self.same_base(o).then(|| self.with_transform(self.transform.mul(&o.transform)))
    }

    /// `P(p(S)) = 0`.
    pub fn annihilated_by(&self, p: &Polynomial<GaussRat>) -> bool {
        let q = p.compose(&self.transform);
        match self.nilpotent {
            Some(m) => q.is_zero() || q.valuation() >= m as usize,
            None => q.is_zero(),
        }
    }

    /// Some power has finite rank.
    pub fn finite_rank_power(&self) -> bool {
        self.nilpotent.is_some() || self.transform.is_zero()
    }

    /// The `m×m` matrix of a truncated block.
    pub fn to_matrix(&self) -> Option<ExactMatrix> {
        let m = self.nilpotent? as usize;
        let s = Matrix::from_fn(m, m, |i, j| {
            if i == j + 1 {
                self.weights.weight(j as u64)
            } else {
                GaussRat::zero()
            }
        });
        let s = if self.adjoint { s.conj_transpose() } else { s };
        Some(self.transform.eval_matrix(&s))
    }

    /// DSL form `poly(adj(shift {..}), p)`.
    pub fn dsl(&self) -> String {
        let nil = self.nilpotent.map_or("none".to_string(), |m| m.to_string());
        let mut s = format!("shift {{ weights: {}, nilpotent: {nil} }}", self.weights);
        if self.adjoint {
            s = format!("adj({s})");
        }
        if self.transform != Polynomial::x() {
            s = format!("poly({s}, {})", self.transform);
        }
        s
    }
}

impl fmt::Display for ShiftBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dsl())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    #[test]
    fn list_weights_need_truncation() {
        assert!(ShiftBlock::new(Weights::List(vec![g("1")]), None).is_err());
        assert!(ShiftBlock::new(Weights::List(vec![g("1")]), Some(3)).is_ok());
        assert!(ShiftBlock::new(Weights::Geometric(g("1"), g("2")), None).is_err());
        assert!(ShiftBlock::new(Weights::Harmonic(g("-1"), 1), None).is_err());
    }

    #[test]
    fn nilpotency_of_polynomials_in_a_truncated_shift() {
        let s = ShiftBlock::new(Weights::Harmonic(g("1"), 1), Some(5)).unwrap();
        assert_eq!(s.nil_order(), Some(5));
        // S² + 3: order ⌈5/2⌉ around μ = 3
        let t = s.map(&Polynomial::new(vec![g("3"), g("0"), g("1")]));
        assert_eq!(t.mu(), g("3"));
        assert_eq!(t.nil_order(), Some(3));
        let m = t.to_matrix().unwrap().shifted(&g("3"));
        assert!(!m.pow(2).is_zero());
        assert!(m.pow(3).is_zero());
        assert!(t.annihilated_by(&Polynomial::linear_root(&g("3")).pow(3)));
        assert!(!t.annihilated_by(&Polynomial::linear_root(&g("3")).pow(2)));
    }

    #[test]
    fn infinite_shift_is_not_algebraic() {
        let s = ShiftBlock::new(Weights::Geometric(g("1"), g("1/2")), None).unwrap();
        assert_eq!(s.nil_order(), None);
        assert!(!s.finite_rank_power());
        let z = s.map(&Polynomial::constant(g("2")));
        assert_eq!(z.nil_order(), Some(1));
        assert!(z.annihilated_by(&Polynomial::linear_root(&g("2"))));
    }

    #[test]
    fn adjoint_is_an_involution() {
        let s = ShiftBlock::new(Weights::Geometric(g("1"), g("1/2")), Some(3))
            .unwrap()
            .map(&Polynomial::new(vec![g("1i"), g("2")]));
        assert_eq!(s.adjoint().adjoint(), s);
        assert_eq!(s.adjoint().mu(), g("-1i"));
        let a = s.adjoint().to_matrix().unwrap();
        assert_eq!(a, s.to_matrix().unwrap().conj_transpose());
        assert!(s.add(&s.adjoint()).is_none());
    }
}
