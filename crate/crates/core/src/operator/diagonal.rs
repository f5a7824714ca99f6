//! Diagonal operators on `ℓ²`, given as a finite list of components.
//!
//! Each component occupies its own block of basis vectors, indexed from 0:
//! a constant value repeated finitely or infinitely often, a convergent
//! family, or a dense enumeration `R(tᵢ)` with `tᵢ` running through
//! [`dense_point`]. Finitely many entries may be overridden.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gauss::GaussRat;
use crate::poly::Polynomial;
use crate::sequence::{dense_point, Sequence};
use crate::spectra::{Family, Multiplicity, Segment, SpectralPoint, SpectralSet};
use crate::value::{ComplexValue, ToleranceFrame};

#[derive(Clone, Debug, PartialEq)]
pub enum ComponentKind {
    /// A value repeated `Finite(k)` (k ≥ 1) or infinitely many times.
    Const(GaussRat, Multiplicity),
    /// A non-constant convergent family.
    Family(Sequence),
    /// `R(tᵢ)` for a non-constant real polynomial `R`.
    Dense(Polynomial<GaussRat>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    kind: ComponentKind,
    overrides: BTreeMap<u64, GaussRat>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum BinOp {
    Add,
    Mul,
}

impl BinOp {
    fn apply(self, a: &GaussRat, b: &GaussRat) -> GaussRat {
        match self {
            BinOp::Add => a + b,
            BinOp::Mul => a * b,
        }
    }
}

impl Component {
    pub fn constant(v: GaussRat, m: Multiplicity) -> Result<Self> {
        if m == Multiplicity::Finite(0) {
            return Err(Error::InvalidBlock("multiplicity must be at least 1".into()));
        }
        Ok(Component {
            kind: ComponentKind::Const(v, m),
            overrides: BTreeMap::new(),
        })
    }

    pub fn family(seq: Sequence) -> Self {
        Self::from_kind(ComponentKind::Family(seq), BTreeMap::new())
    }

    /// The dense enumeration of `[lo, hi]`, requires `lo < hi`.
    pub fn dense(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidBlock(format!("dense range needs lo < hi, got [{lo}, {hi}]")));
        }
        let r = Polynomial::new(vec![GaussRat::real(lo.clone()), GaussRat::real(hi - lo)]);
        Ok(Self::from_kind(ComponentKind::Dense(r), BTreeMap::new()))
    }

    /// `z₁, …, z_k` followed by `z_k` forever.
    pub fn list(values: Vec<GaussRat>) -> Result<Self> {
        let last = values
            .last()
            .cloned()
            .ok_or_else(|| Error::InvalidBlock("empty list".into()))?;
        let overrides = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i as u64, v))
            .collect();
        Ok(Self::from_kind(ComponentKind::Const(last, Multiplicity::Infinite), overrides))
    }

    /// Collapses constant families and dense ranges and drops overrides
    /// that agree with the base term.
    fn from_kind(kind: ComponentKind, overrides: BTreeMap<u64, GaussRat>) -> Self {
        let kind = match kind {
            ComponentKind::Family(s) if s.is_constant() => ComponentKind::Const(s.limit(), Multiplicity::Infinite),
            ComponentKind::Dense(r) if r.is_constant() => ComponentKind::Const(r.coeff(0), Multiplicity::Infinite),
            k => k,
        };
        let mut c = Component {
            kind,
            overrides: BTreeMap::new(),
        };
        for (i, v) in overrides {
            if c.base(i) != v {
                c.overrides.insert(i, v);
            }
        }
        c
    }

    pub fn kind(&self) -> &ComponentKind {
        &self.kind
    }

    pub fn overrides(&self) -> &BTreeMap<u64, GaussRat> {
        &self.overrides
    }

    pub fn len(&self) -> Multiplicity {
        match &self.kind {
            ComponentKind::Const(_, m) => *m,
            _ => Multiplicity::Infinite,
        }
    }

    fn base(&self, i: u64) -> GaussRat {
        match &self.kind {
            ComponentKind::Const(v, _) => v.clone(),
            ComponentKind::Family(s) => s.term(i),
            ComponentKind::Dense(r) => r.eval(&GaussRat::real(dense_point(i))),
        }
    }

    pub fn value(&self, i: u64) -> GaussRat {
        self.overrides.get(&i).cloned().unwrap_or_else(|| self.base(i))
    }

    /// Replaces entry `i`.
    pub fn with_override(&self, i: u64, v: GaussRat) -> Result<Self> {
        if let Multiplicity::Finite(k) = self.len() {
            if i >= k {
                return Err(Error::InvalidBlock(format!("index {i} outside a component of length {k}")));
            }
        }
        let mut o = self.overrides.clone();
        o.insert(i, v);
        Ok(Self::from_kind(self.kind.clone(), o))
    }

    fn check_overrides(&self) -> Result<()> {
        if let Multiplicity::Finite(k) = self.len() {
            if let Some(i) = self.overrides.keys().find(|i| **i >= k) {
                return Err(Error::InvalidBlock(format!("index {i} outside a component of length {k}")));
            }
        }
        Ok(())
    }

    pub fn map(&self, p: &Polynomial<GaussRat>) -> Result<Self> {
        let kind = match &self.kind {
            ComponentKind::Const(v, m) => ComponentKind::Const(p.eval(v), *m),
            ComponentKind::Family(s) => ComponentKind::Family(s.compose(p)),
            ComponentKind::Dense(r) => {
                let q = p.compose(r);
                if !q.is_real() {
                    return Err(Error::Unrepresentable(
                        "a dense real range mapped off the real axis".into(),
                    ));
                }
                ComponentKind::Dense(q)
            }
        };
        let overrides = self.overrides.iter().map(|(i, v)| (*i, p.eval(v))).collect();
        Ok(Self::from_kind(kind, overrides))
    }

    pub fn conj(&self) -> Self {
        let kind = match &self.kind {
            ComponentKind::Const(v, m) => ComponentKind::Const(v.conj(), *m),
            ComponentKind::Family(s) => ComponentKind::Family(s.conj()),
            ComponentKind::Dense(r) => ComponentKind::Dense(r.clone()),
        };
        let overrides = self.overrides.iter().map(|(i, v)| (*i, v.conj())).collect();
        Self::from_kind(kind, overrides)
    }

    pub(crate) fn combine(&self, o: &Self, op: BinOp) -> Option<Self> {
        use ComponentKind::{Const, Dense, Family};
        let as_poly = |c: &GaussRat| Polynomial::constant(c.clone());
        let lift = |p: &Polynomial<GaussRat>, c: &GaussRat| match op {
            BinOp::Add => p.add(&as_poly(c)),
            BinOp::Mul => p.scale(c),
        };
        let kind = match (&self.kind, &o.kind) {
            (Const(a, m), Const(b, n)) if m == n => Const(op.apply(a, b), *m),
            (Const(c, Multiplicity::Infinite), Family(s)) | (Family(s), Const(c, Multiplicity::Infinite)) => {
                Family(match op {
                    BinOp::Add => s.add_const(c),
                    BinOp::Mul => s.scale(c),
                })
            }
            (Const(c, Multiplicity::Infinite), Dense(r)) | (Dense(r), Const(c, Multiplicity::Infinite)) => {
                Dense(lift(r, c))
            }
            (Family(a), Family(b)) => Family(match op {
                BinOp::Add => a.add(b)?,
                BinOp::Mul => a.mul(b)?,
            }),
            (Dense(a), Dense(b)) => Dense(match op {
                BinOp::Add => a.add(b),
                BinOp::Mul => a.mul(b),
            }),
            _ => return None,
        };
        let overrides = self
            .overrides
            .keys()
            .chain(o.overrides.keys())
            .map(|&i| (i, op.apply(&self.value(i), &o.value(i))))
            .collect();
        Some(Self::from_kind(kind, overrides))
    }

    fn values_set(&self) -> Result<SpectralSet> {
        let mut points = Vec::new();
        let mut families = Vec::new();
        let mut segments = Vec::new();
        let skip = self.overrides.keys().copied().collect();
        match &self.kind {
            ComponentKind::Const(v, m) => {
                let left = match m {
                    Multiplicity::Finite(k) => Multiplicity::Finite(k - self.overrides.len() as u64),
                    Multiplicity::Infinite => Multiplicity::Infinite,
                };
                if left != Multiplicity::Finite(0) {
                    points.push(SpectralPoint::attained(ComplexValue::Exact(v.clone()), left));
                }
            }
            ComponentKind::Family(s) => families.push(Family::with_skip(s.clone(), skip)?),
            ComponentKind::Dense(r) => {
                let (lo, hi) = r.real_range(&BigRational::zero(), &BigRational::one())?;
                segments.push(Segment::new(lo, hi)?);
            }
        }
        for v in self.overrides.values() {
            points.push(SpectralPoint::attained(ComplexValue::Exact(v.clone()), Multiplicity::Finite(1)));
        }
        Ok(SpectralSet::from_parts(points, families, segments))
    }

    /// Distinct values when there are finitely many.
    fn finite_values(&self) -> Option<Vec<GaussRat>> {
        let ComponentKind::Const(v, m) = &self.kind else {
            return None;
        };
        let mut out: Vec<GaussRat> = self.overrides.values().cloned().collect();
        let covered = matches!(m, Multiplicity::Finite(k) if *k == self.overrides.len() as u64);
        if !covered {
            out.push(v.clone());
        }
        Some(out)
    }

    /// Some power has finite rank, i.e. only finitely many nonzero entries.
    fn finitely_supported(&self) -> bool {
        match &self.kind {
            ComponentKind::Const(v, m) => v.is_zero() || *m != Multiplicity::Infinite,
            _ => false,
        }
    }
}

/// A diagonal operator with at least one component.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalBlock {
    components: Vec<Component>,
}

impl DiagonalBlock {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidBlock("a diagonal block needs at least one component".into()));
        }
        for c in &components {
            c.check_overrides()?;
            if let ComponentKind::Dense(r) = &c.kind {
                if !r.is_real() {
                    return Err(Error::InvalidBlock("dense ranges must be real".into()));
                }
            }
        }
        Ok(DiagonalBlock { components })
    }

    /// `c·I`.
    pub fn scalar(c: GaussRat) -> Self {
        DiagonalBlock {
            components: vec![Component {
                kind: ComponentKind::Const(c, Multiplicity::Infinite),
                overrides: BTreeMap::new(),
            }],
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// `Some(c)` for `c·I`.
    pub fn as_scalar(&self) -> Option<&GaussRat> {
        match self.components.as_slice() {
            [Component {
                kind: ComponentKind::Const(c, Multiplicity::Infinite),
                overrides,
            }] if overrides.is_empty() => Some(c),
            _ => None,
        }
    }

    /// Finite dimension of the underlying space, if any.
    pub fn dim(&self) -> Option<u64> {
        self.components.iter().try_fold(0u64, |acc, c| match c.len() {
            Multiplicity::Finite(k) => Some(acc + k),
            Multiplicity::Infinite => None,
        })
    }

    pub fn map(&self, p: &Polynomial<GaussRat>) -> Result<Self> {
        Ok(DiagonalBlock {
            components: self.components.iter().map(|c| c.map(p)).collect::<Result<_>>()?,
        })
    }

    pub fn conj(&self) -> Self {
        DiagonalBlock {
            components: self.components.iter().map(Component::conj).collect(),
        }
    }

    /// Term-wise combination; `None` unless the index structures agree.
    pub(crate) fn combine(&self, o: &Self, op: BinOp) -> Option<Self> {
        if self.components.len() != o.components.len() {
            return None;
        }
        let components = self
            .components
            .iter()
            .zip(&o.components)
            .map(|(a, b)| a.combine(b, op))
            .collect::<Option<Vec<_>>>()?;
        Some(DiagonalBlock { components })
    }

    /// The set of diagonal entries (not closed).
    pub fn values(&self, tf: &ToleranceFrame) -> Result<SpectralSet> {
        let sets = self.components.iter().map(Component::values_set).collect::<Result<Vec<_>>>()?;
        Ok(SpectralSet::union_all(&sets, tf))
    }

    /// Distinct entries when finitely many, sorted.
    pub fn finite_values(&self) -> Option<Vec<GaussRat>> {
        let mut out: Vec<GaussRat> = Vec::new();
        for c in &self.components {
            for v in c.finite_values()? {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out.sort();
        Some(out)
    }

    pub fn finitely_supported(&self) -> bool {
        self.components.iter().all(Component::finitely_supported)
    }

    pub fn is_real(&self) -> bool {
        self.components.iter().all(|c| {
            let base = match &c.kind {
                ComponentKind::Const(v, _) => v.is_real(),
                ComponentKind::Family(s) => s.is_real(),
                ComponentKind::Dense(_) => true,
            };
            base && c.overrides.values().all(GaussRat::is_real)
        })
    }

    /// Whether `p` vanishes at every entry.
    pub fn annihilated_by(&self, p: &Polynomial<GaussRat>) -> bool {
        if p.is_zero() {
            return true;
        }
        match self.finite_values() {
            Some(vals) => vals.iter().all(|v| p.eval(v).is_zero()),
            None => false,
        }
    }

    /// DSL form when every component has one.
    pub fn dsl(&self) -> Option<String> {
        let parts = self.components.iter().map(component_dsl).collect::<Option<Vec<_>>>()?;
        Some(format!("diag {{ {} }}", parts.join(", ")))
    }
}

fn component_dsl(c: &Component) -> Option<String> {
    match &c.kind {
        ComponentKind::Const(v, m) => {
            if c.overrides.is_empty() {
                return Some(format!("{v}: {m}"));
            }
            if *m != Multiplicity::Infinite {
                return None;
            }
            let n = c.overrides.keys().max().copied().unwrap_or(0) + 1;
            let vals: Vec<String> = (0..=n).map(|i| c.value(i).to_string()).collect();
            Some(format!("seq list({}) -> {v}", vals.join(", ")))
        }
        _ if !c.overrides.is_empty() => None,
        ComponentKind::Family(Sequence::Geometric(e)) => match e.terms() {
            [(q, coef)] if !q.is_one() => Some(format!("seq geometric({coef}, {q}) -> 0")),
            _ => None,
        },
        ComponentKind::Family(Sequence::Harmonic(h)) => {
            let nz: Vec<(usize, &GaussRat)> = h.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            match nz.as_slice() {
                [(p, coef)] if *p > 0 => Some(format!("seq harmonic({coef}, {p}) -> 0")),
                _ => None,
            }
        }
        ComponentKind::Dense(r) => {
            if r.degree() != Some(1) {
                return None;
            }
            let lo = r.coeff(0);
            let hi = &lo + &r.coeff(1);
            (lo < hi).then(|| format!("dense [{lo}, {hi}]"))
        }
    }
}

impl fmt::Display for DiagonalBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.dsl() {
            return f.write_str(&s);
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                let mut s = match &c.kind {
                    ComponentKind::Const(v, m) => format!("{v}: {m}"),
                    ComponentKind::Family(seq) => format!("seq {{{seq}}} -> {}", seq.limit()),
                    ComponentKind::Dense(r) => format!("dense R(t), R(t) = {}", r.to_string().replace('x', "t")),
                };
                if !c.overrides.is_empty() {
                    let o: Vec<String> = c.overrides.iter().map(|(i, v)| format!("#{i} = {v}")).collect();
                    s.push_str(&format!(" with {}", o.join(", ")));
                }
                s
            })
            .collect();
        write!(f, "diag {{ {} }}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    #[test]
    fn list_components_become_overrides() {
        let c = Component::list(vec![g("0"), g("5"), g("0")]).unwrap();
        assert_eq!(c.kind, ComponentKind::Const(g("0"), Multiplicity::Infinite));
        assert_eq!(c.overrides.len(), 1);
        assert_eq!(c.value(1), g("5"));
        assert_eq!(c.value(7), g("0"));
    }

    #[test]
    fn termwise_sum_with_a_finite_perturbation() {
        let h = Component::family(Sequence::harmonic(g("1"), 1).unwrap());
        let f = Component::list(vec![g("0"), g("5"), g("0")]).unwrap();
        let s = h.combine(&f, BinOp::Add).unwrap();
        assert_eq!(s.value(1), g("11/2"));
        assert_eq!(s.value(2), g("1/3"));
    }

    #[test]
    fn incompatible_kinds_do_not_combine() {
        let h = Component::family(Sequence::harmonic(g("1"), 1).unwrap());
        let q = Component::family(Sequence::geometric(g("1"), g("1/2")).unwrap());
        assert!(h.combine(&q, BinOp::Mul).is_none());
        let a = Component::constant(g("1"), Multiplicity::Finite(2)).unwrap();
        let b = Component::constant(g("1"), Multiplicity::Finite(3)).unwrap();
        assert!(a.combine(&b, BinOp::Add).is_none());
    }

    #[test]
    fn dense_values_close_to_a_segment() {
        let d = DiagonalBlock::new(vec![Component::dense(BigRational::zero(), BigRational::one()).unwrap()]).unwrap();
        let v = d.values(&ToleranceFrame::default()).unwrap();
        assert_eq!(v.segments().len(), 1);
        let sq = d.map(&Polynomial::new(vec![g("-1"), g("0"), g("4")])).unwrap();
        let v = sq.values(&ToleranceFrame::default()).unwrap();
        assert_eq!(v.segments()[0].lo(), &BigRational::from_integer((-1).into()));
        assert_eq!(v.segments()[0].hi(), &BigRational::from_integer(3.into()));
    }

    #[test]
    fn dsl_forms() {
        let d = DiagonalBlock::new(vec![
            Component::constant(g("0"), Multiplicity::Finite(1)).unwrap(),
            Component::constant(g("1"), Multiplicity::Infinite).unwrap(),
        ])
        .unwrap();
        assert_eq!(d.to_string(), "diag { 0: 1, 1: inf }");
        assert_eq!(d.finite_values(), Some(vec![g("0"), g("1")]));
    }
}
