//! Closed-form convergent sequences: the building blocks of infinite
//! spectral sets and of diagonal operators.
//!
//! Every sequence is indexed from 0. A geometric sequence is an
//! exponential sum `Σ cⱼ rⱼⁱ`; a harmonic one is `H(1/(i+1))` for a
//! polynomial `H`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gauss::GaussRat;
use crate::poly::Polynomial;

/// `Σ cⱼ rⱼⁱ`. Ratio 1 carries the constant part (the limit); every other
/// ratio is nonzero with modulus below 1. Terms are sorted by ratio and
/// have nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpSum {
    terms: Vec<(GaussRat, GaussRat)>,
}

impl ExpSum {
    /// Validates ratios and merges equal ones.
    pub fn new(terms: Vec<(GaussRat, GaussRat)>) -> Result<Self> {
        for (r, _) in &terms {
            if r.is_zero() {
                return Err(Error::InvalidValue("geometric ratio must be nonzero".into()));
            }
            if !r.is_one() && r.norm_sqr() >= BigRational::one() {
                return Err(Error::InvalidValue(format!(
                    "geometric ratio {r} must have modulus below 1"
                )));
            }
        }
        Ok(Self::canonical(terms))
    }

    fn canonical(mut terms: Vec<(GaussRat, GaussRat)>) -> Self {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(GaussRat, GaussRat)> = Vec::with_capacity(terms.len());
        for (r, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == r => last.1 = &last.1 + &c,
                _ => out.push((r, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        ExpSum { terms: out }
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::canonical(vec![(GaussRat::one(), c)])
    }

    /// `c·qⁱ`.
    pub fn geometric(c: GaussRat, q: GaussRat) -> Result<Self> {
        Self::new(vec![(q, c)])
    }

    /// `(ratio, coefficient)` pairs.
    pub fn terms(&self) -> &[(GaussRat, GaussRat)] {
        &self.terms
    }

    pub fn limit(&self) -> GaussRat {
        self.terms
            .iter()
            .find(|(r, _)| r.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(GaussRat::zero)
    }

    fn moving(&self) -> impl Iterator<Item = &(GaussRat, GaussRat)> {
        self.terms.iter().filter(|(r, _)| !r.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.moving().next().is_none()
    }

    pub fn term(&self, i: u64) -> GaussRat {
        self.terms
            .iter()
            .fold(GaussRat::zero(), |acc, (r, c)| &acc + &(c * &r.pow(i)))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::canonical(self.terms.iter().chain(&o.terms).cloned().collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut t = Vec::new();
        for (r1, c1) in &self.terms {
            for (r2, c2) in &o.terms {
                t.push((r1 * r2, c1 * c2));
            }
        }
        Self::canonical(t)
    }

    pub fn conj(&self) -> Self {
        Self::canonical(self.terms.iter().map(|(r, c)| (r.conj(), c.conj())).collect())
    }

    /// `p(s)` term-wise.
    pub fn compose(&self, p: &Polynomial<GaussRat>) -> Self {
        p.coeffs().iter().rev().fold(Self::constant(GaussRat::zero()), |acc, c| {
            acc.mul(self).add(&Self::constant(c.clone()))
        })
    }

    fn bound_parts(&self) -> (BigRational, BigRational) {
        let b: BigRational = self.moving().map(|(_, c)| c.l1_norm()).sum();
        let rho2 = self
            .moving()
            .map(|(r, _)| r.norm_sqr())
            .max()
            .unwrap_or_else(BigRational::zero);
        (b.clone() * b, rho2)
    }

    /// Indices `i` with `sᵢ = z`, or `None` when undecided.
    fn indices_of(&self, z: &GaussRat) -> Option<Vec<u64>> {
        let lim = self.limit();
        let moving: Vec<&(GaussRat, GaussRat)> = self.moving().collect();
        if z == &lim {
            return match moving.as_slice() {
                [] => None,
                [_] => Some(Vec::new()),
                [(r1, c1), (r2, c2)] => solve_power(&(r1 / r2), &-(c2 / c1)),
                _ => None,
            };
        }
        let d2 = (z - &lim).norm_sqr();
        let (b2, rho2) = self.bound_parts();
        let mut out = Vec::new();
        let mut rho_pow = BigRational::one();
        let mut i = 0u64;
        while &b2 * &rho_pow >= d2 {
            if &self.term(i) == z {
                out.push(i);
            }
            i += 1;
            rho_pow *= &rho2;
        }
        Some(out)
    }

    /// Upper bound on `|sᵢ - L|²`.
    fn deviation_bound_sq(&self, i: u64) -> BigRational {
        let (b2, rho2) = self.bound_parts();
        b2 * pow_rat(&rho2, i)
    }
}

fn pow_rat(x: &BigRational, e: u64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// All `i ≥ 0` with `tⁱ = w`, or `None` when `|t| = 1` makes the search
/// unbounded.
fn solve_power(t: &GaussRat, w: &GaussRat) -> Option<Vec<u64>> {
    let t2 = t.norm_sqr();
    let w2 = w.norm_sqr();
    if t2.is_one() {
        if t.pow(4).is_one() {
            // periodic solutions
            let hits: Vec<u64> = (0..4).filter(|k| &t.pow(*k) == w).collect();
            return if hits.is_empty() { Some(hits) } else { None };
        }
        return if w.is_one() { Some(vec![0]) } else { None };
    }
    let shrinking = t2 < BigRational::one();
    let mut p = GaussRat::one();
    let mut p2 = BigRational::one();
    let mut out = Vec::new();
    let mut i = 0u64;
    loop {
        if (shrinking && p2 < w2) || (!shrinking && p2 > w2) {
            return Some(out);
        }
        if &p == w {
            out.push(i);
        }
        p = &p * t;
        p2 *= &t2;
        i += 1;
    }
}

/// The fixed dense enumeration of `[0, 1] ∩ ℚ`: `0, 1, 1/2, 1/3, 2/3, 1/4,
/// 3/4, …`.
pub fn dense_point(i: u64) -> BigRational {
    if i < 2 {
        return BigRational::from_integer(BigInt::from(i));
    }
    let mut k = 2u64;
    for q in 2u64.. {
        for p in 1..q {
            if p.gcd(&q) == 1 {
                if k == i {
                    return BigRational::new(p.into(), q.into());
                }
                k += 1;
            }
        }
    }
    unreachable!()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Sequence {
    Geometric(ExpSum),
    /// `H(1/(i+1))`.
    Harmonic(Polynomial<GaussRat>),
}

impl Sequence {
    /// `c·qⁱ`, requires `c ≠ 0` and `0 < |q| < 1`.
    pub fn geometric(c: GaussRat, q: GaussRat) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidValue("geometric family needs a nonzero coefficient".into()));
        }
        if q.is_one() {
            return Err(Error::InvalidValue("geometric ratio must have modulus below 1".into()));
        }
        Ok(Sequence::Geometric(ExpSum::geometric(c, q)?))
    }

    /// `c/nᵖ` for `n ≥ 1`, requires `c ≠ 0` and `p ≥ 1`.
    pub fn harmonic(c: GaussRat, p: u32) -> Result<Self> {
        if c.is_zero() || p == 0 {
            return Err(Error::InvalidValue("harmonic family needs c ≠ 0 and p ≥ 1".into()));
        }
        Ok(Sequence::Harmonic(Polynomial::monomial(c, p as usize)))
    }

    pub fn term(&self, i: u64) -> GaussRat {
        match self {
            Sequence::Geometric(e) => e.term(i),
            Sequence::Harmonic(h) => h.eval(&GaussRat::ratio(1, i as i64 + 1)),
        }
    }

    pub fn limit(&self) -> GaussRat {
        match self {
            Sequence::Geometric(e) => e.limit(),
            Sequence::Harmonic(h) => h.coeff(0),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Sequence::Geometric(e) => e.is_constant(),
            Sequence::Harmonic(h) => h.is_constant(),
        }
    }

    /// Sufficient for every term being real.
    pub fn is_real(&self) -> bool {
        match self {
            Sequence::Geometric(e) => e.terms().iter().all(|(r, c)| r.is_real() && c.is_real()),
            Sequence::Harmonic(h) => h.is_real(),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Sequence::Geometric(e) => Sequence::Geometric(e.conj()),
            Sequence::Harmonic(h) => Sequence::Harmonic(h.conj()),
        }
    }

    pub fn compose(&self, p: &Polynomial<GaussRat>) -> Self {
        match self {
            Sequence::Geometric(e) => Sequence::Geometric(e.compose(p)),
            Sequence::Harmonic(h) => Sequence::Harmonic(p.compose(h)),
        }
    }

    pub fn add_const(&self, c: &GaussRat) -> Self {
        self.compose(&Polynomial::new(vec![c.clone(), GaussRat::one()]))
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        self.compose(&Polynomial::monomial(c.clone(), 1))
    }

    /// Term-wise sum; `None` for different kinds.
    pub fn add(&self, o: &Self) -> Option<Self> {
        match (self, o) {
            (Sequence::Geometric(a), Sequence::Geometric(b)) => Some(Sequence::Geometric(a.add(b))),
            (Sequence::Harmonic(a), Sequence::Harmonic(b)) => Some(Sequence::Harmonic(a.add(b))),
            _ => None,
        }
    }

    /// Term-wise product; `None` for different kinds.
    pub fn mul(&self, o: &Self) -> Option<Self> {
        match (self, o) {
            (Sequence::Geometric(a), Sequence::Geometric(b)) => Some(Sequence::Geometric(a.mul(b))),
            (Sequence::Harmonic(a), Sequence::Harmonic(b)) => Some(Sequence::Harmonic(a.mul(b))),
            _ => None,
        }
    }

    /// Indices `i` with `sᵢ = z`, or `None` when undecided.
    pub fn indices_of(&self, z: &GaussRat) -> Option<Vec<u64>> {
        match self {
            Sequence::Geometric(e) => e.indices_of(z),
            Sequence::Harmonic(h) => {
                let q = h.sub(&Polynomial::constant(z.clone()));
                if q.is_zero() {
                    return None;
                }
                if q.degree() == Some(0) {
                    return Some(Vec::new());
                }
                let mut out: Vec<u64> = q
                    .gaussian_roots()
                    .0
                    .into_iter()
                    .filter_map(|(x, _)| {
                        let x = x.re_if_real()?;
                        if !x.is_positive() || !x.numer().is_one() {
                            return None;
                        }
                        let n: u64 = x.denom().try_into().ok()?;
                        Some(n - 1)
                    })
                    .collect();
                out.sort_unstable();
                Some(out)
            }
        }
    }

    /// Upper bound on `|sᵢ - L|²`, decreasing in `i`.
    pub fn deviation_bound_sq(&self, i: u64) -> BigRational {
        match self {
            Sequence::Geometric(e) => e.deviation_bound_sq(i),
            Sequence::Harmonic(h) => {
                let a: BigRational = h.coeffs().iter().skip(1).map(GaussRat::l1_norm).sum();
                let n = BigRational::from_integer(BigInt::from(i + 1));
                (a.clone() * a) / (n.clone() * n)
            }
        }
    }

    /// Least `N` with `|sᵢ - L| < δ` for every `i ≥ N`, if below `cap`.
    pub fn tail_start(&self, delta: &BigRational, cap: u64) -> Option<u64> {
        let d2 = delta * delta;
        (0..cap).find(|&i| self.deviation_bound_sq(i) < d2)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sequence::Geometric(e) => {
                let mut first = true;
                for (r, c) in e.terms() {
                    if !first {
                        f.write_str(" + ")?;
                    }
                    first = false;
                    if r.is_one() {
                        write!(f, "({c})")?;
                    } else {
                        write!(f, "({c})·({r})^n")?;
                    }
                }
                if first {
                    f.write_str("0")?;
                }
                Ok(())
            }
            Sequence::Harmonic(h) => write!(f, "H(1/n), H(x) = {h}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    #[test]
    fn geometric_membership_is_exact() {
        let s = Sequence::geometric(g("1"), g("1/2")).unwrap();
        assert_eq!(s.indices_of(&g("1/8")), Some(vec![3]));
        assert_eq!(s.indices_of(&g("1/3")), Some(vec![]));
        assert_eq!(s.indices_of(&g("0")), Some(vec![]));
        assert_eq!(s.indices_of(&g("-1/8")), Some(vec![]));
    }

    #[test]
    fn harmonic_membership_is_exact() {
        let s = Sequence::harmonic(g("1"), 2).unwrap();
        assert_eq!(s.indices_of(&g("1/9")), Some(vec![2]));
        assert_eq!(s.indices_of(&g("1/8")), Some(vec![]));
        assert_eq!(s.indices_of(&g("0")), Some(vec![]));
    }

    #[test]
    fn cancelling_sums_become_constant() {
        let a = Sequence::geometric(g("1"), g("1/2")).unwrap();
        let b = Sequence::geometric(g("-1"), g("1/2")).unwrap();
        assert!(a.add(&b).unwrap().is_constant());
    }

    #[test]
    fn alternating_sum_hits_limit_periodically() {
        // (1/2)ⁱ + (-1/2)ⁱ vanishes at every odd index
        let a = Sequence::geometric(g("1"), g("1/2")).unwrap();
        let b = Sequence::geometric(g("1"), g("-1/2")).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.term(3), GaussRat::zero());
        assert_eq!(s.indices_of(&GaussRat::zero()), None);
        assert_eq!(s.indices_of(&g("1/2")), Some(vec![2]));
    }

    #[test]
    fn composition_matches_termwise_evaluation() {
        let p = Polynomial::new(vec![g("1"), g("0"), g("2+1i")]);
        for s in [
            Sequence::geometric(g("1+1i"), g("1/3")).unwrap(),
            Sequence::harmonic(g("2"), 1).unwrap(),
        ] {
            let t = s.compose(&p);
            for i in 0..6 {
                assert_eq!(t.term(i), p.eval(&s.term(i)));
            }
            assert_eq!(t.limit(), p.eval(&s.limit()));
        }
    }

    #[test]
    fn deviation_bounds_hold() {
        for s in [
            Sequence::geometric(g("3-1i"), g("-1/2+1/3i")).unwrap(),
            Sequence::harmonic(g("5/2"), 1).unwrap().add_const(&g("1")),
        ] {
            for i in 0..20 {
                let d = (&s.term(i) - &s.limit()).norm_sqr();
                assert!(d <= s.deviation_bound_sq(i));
            }
        }
    }

    #[test]
    fn dense_enumeration_prefix() {
        let want = ["0", "1", "1/2", "1/3", "2/3", "1/4", "3/4", "1/5"];
        for (i, w) in want.iter().enumerate() {
            assert_eq!(GaussRat::real(dense_point(i as u64)).to_string(), *w);
        }
    }
}
