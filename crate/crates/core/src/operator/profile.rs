//! Spectral profiles by structural rules.
//!
//! Matrix blocks: every eigenvalue is a pole, its order the largest
//! Jordan block, and all regularity spectra are empty.
//!
//! Diagonal blocks `D = diag(dᵢ)`: `σ` is the closure of the values. `D`
//! is normal, so isolated points are poles of order 1 and `N((D-λ)ⁿ) =
//! N(D-λ)`, giving `σ_asc = ∅`. At an accumulation point `λ` the range of
//! `(D-λ)ⁿ` is not closed and strictly decreases with `n`, so `λ` lies in
//! `σ_dsc`, `σ_LD` and `σ_RD`; elsewhere `D-λ` is Drazin invertible.
//! Hence `σ_DR = σ_dsc = σ_LD = σ_RD = acc σ` and `IES = ∅`.
//!
//! Shift blocks `p(S)`, `μ = p(0)`, `p - μ` of valuation `j`: `σ = {μ}`.
//! A truncated shift of size `m` gives a pole of order `⌈m/j⌉`. For the
//! infinite shift `p(S) - μ = Sʲu(S)` with `u(S)` invertible, so it is
//! injective with non-closed, strictly decreasing ranges: `μ` is in
//! `IES`, `σ_DR`, `σ_dsc`, `σ_LD` and `σ_RD` but not in `σ_asc`. For
//! `p(S*)` the kernels grow as well, so `μ ∈ σ_asc` too.
//!
//! Direct sums: `σ` is the union, `σ_DR` the union of the summands' `σ_DR`
//! (equivalently `acc σ ∪ IES`), `IES` the summands' `IES` points that do
//! not accumulate, `Π = iso σ ∖ IES` with the largest summand order, and
//! the regularity spectra are unions.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{AnyPolynomial, MatrixBlock};
use crate::spectra::{Family, Multiplicity, SpectralPoint, SpectralSet, Truth};
use crate::value::{ComplexValue, ToleranceFrame};

use super::{is_algebraic, Block, OperatorDesc};

/// The poles of the resolvent with their orders. Points carry explicit
/// orders; members of a family are simple poles.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleSet {
    set: SpectralSet,
    orders: Vec<(ComplexValue, u32)>,
}

impl PoleSet {
    pub fn set(&self) -> &SpectralSet {
        &self.set
    }

    /// `(point, order)` for the point components, sorted by `(re, im)`.
    pub fn orders(&self) -> &[(ComplexValue, u32)] {
        &self.orders
    }

    /// Order at `z`, `None` if `z` is not a pole.
    pub fn order_at(&self, z: &ComplexValue, tf: &ToleranceFrame) -> Result<Option<u32>> {
        if let Some((_, k)) = self.orders.iter().find(|(w, _)| w.close_to(z, tf.eps_set)) {
            return Ok(Some(*k));
        }
        match self.set.contains(z, tf) {
            Truth::Yes => Ok(Some(1)),
            Truth::No => Ok(None),
            Truth::Unknown => Err(Error::Undecided(format!("whether {z} is a pole"))),
        }
    }

    /// The poles away from `z`.
    pub fn without(&self, z: &ComplexValue, tf: &ToleranceFrame) -> Result<PoleSet> {
        Ok(PoleSet {
            set: self.set.without_points(std::slice::from_ref(z), tf)?,
            orders: self.orders.iter().filter(|(w, _)| !w.close_to(z, tf.eps_set)).cloned().collect(),
        })
    }

    /// Same points with the same orders.
    pub fn matches(&self, o: &PoleSet, tf: &ToleranceFrame) -> Result<bool> {
        match self.set.equals(&o.set, tf) {
            Truth::No => return Ok(false),
            Truth::Unknown => return Err(Error::Undecided(format!("{} against {}", self.set, o.set))),
            Truth::Yes => {}
        }
        for (z, _) in self.orders.iter().chain(&o.orders) {
            if self.order_at(z, tf)? != o.order_at(z, tf)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Serialize)]
struct PointPole<'a> {
    point: &'a ComplexValue,
    order: u32,
}

#[derive(Serialize)]
struct FamilyPole<'a> {
    family: &'a Family,
    order: u32,
}

impl Serialize for PoleSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(None)?;
        for (point, order) in &self.orders {
            seq.serialize_element(&PointPole { point, order: *order })?;
        }
        for family in self.set.families() {
            seq.serialize_element(&FamilyPole { family, order: 1 })?;
        }
        seq.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Algebraic {
    pub flag: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_poly: Option<AnyPolynomial>,
}

/// Everything the rule system knows about one operator. Field order is the
/// JSON key order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralProfile {
    pub sigma: SpectralSet,
    pub iso: SpectralSet,
    pub acc: SpectralSet,
    pub poles: PoleSet,
    pub drazin_spectrum: SpectralSet,
    pub ies: SpectralSet,
    pub asc_spectrum: SpectralSet,
    pub dsc_spectrum: SpectralSet,
    pub ld_spectrum: SpectralSet,
    pub rd_spectrum: SpectralSet,
    pub countable: bool,
    pub algebraic: Algebraic,
    pub meromorphic: bool,
    /// `None` when 0 is in the Drazin spectrum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drazin_index_at_0: Option<u32>,
}

/// The per-block data the direct-sum rules need.
struct Parts {
    sigma: SpectralSet,
    ies: Vec<ComplexValue>,
    orders: Vec<(ComplexValue, u32)>,
    asc: SpectralSet,
    dsc: SpectralSet,
    ld: SpectralSet,
    rd: SpectralSet,
}

fn matrix_parts(m: &MatrixBlock, tf: &ToleranceFrame) -> Result<Parts> {
    let clusters = m.eigen_clusters(tf)?;
    let mut points = Vec::with_capacity(clusters.len());
    let mut orders = Vec::with_capacity(clusters.len());
    for (l, k) in clusters {
        let order = match (m, &l) {
            (MatrixBlock::Presented(p), ComplexValue::Exact(g)) => p.largest_block(g),
            _ => m.ascent_descent(&l, tf)?.0,
        };
        points.push(SpectralPoint::attained(l.clone(), Multiplicity::Finite(k as u64)));
        orders.push((l, order as u32));
    }
    Ok(Parts {
        sigma: SpectralSet::from_parts(points, Vec::new(), Vec::new()).normalize(tf),
        ies: Vec::new(),
        orders,
        asc: SpectralSet::empty(),
        dsc: SpectralSet::empty(),
        ld: SpectralSet::empty(),
        rd: SpectralSet::empty(),
    })
}

fn block_parts(b: &Block, tf: &ToleranceFrame) -> Result<Parts> {
    match b {
        Block::Matrix(m) => matrix_parts(m, tf),
        Block::Diagonal(d) => {
            let sigma = d.values(tf)?.closure(tf);
            let acc = sigma.acc(tf);
            let orders = sigma.iso(tf).points().iter().map(|p| (p.value.clone(), 1)).collect();
            Ok(Parts {
                ies: Vec::new(),
                orders,
                asc: SpectralSet::empty(),
                dsc: acc.clone(),
                ld: acc.clone(),
                rd: acc,
                sigma,
            })
        }
        Block::Shift(s) => {
            let mu = ComplexValue::Exact(s.mu());
            let mult = s.nilpotent().map_or(Multiplicity::Infinite, |m| Multiplicity::Finite(u64::from(m)));
            let sigma = SpectralSet::from_parts(vec![SpectralPoint::attained(mu.clone(), mult)], Vec::new(), Vec::new());
            let at_mu = SpectralSet::from_values([mu.clone()]);
            Ok(match s.nil_order() {
                Some(k) => Parts {
                    sigma,
                    ies: Vec::new(),
                    orders: vec![(mu, k)],
                    asc: SpectralSet::empty(),
                    dsc: SpectralSet::empty(),
                    ld: SpectralSet::empty(),
                    rd: SpectralSet::empty(),
                },
                None => Parts {
                    sigma,
                    ies: vec![mu],
                    orders: Vec::new(),
                    asc: if s.is_adjoint() { at_mu.clone() } else { SpectralSet::empty() },
                    dsc: at_mu.clone(),
                    ld: at_mu.clone(),
                    rd: at_mu,
                },
            })
        }
    }
}

fn decide(t: Truth, what: impl FnOnce() -> String) -> Result<bool> {
    match t {
        Truth::Yes => Ok(true),
        Truth::No => Ok(false),
        Truth::Unknown => Err(Error::Undecided(what())),
    }
}

/// The full profile of `op`.
pub fn spectral_profile(op: &OperatorDesc, tf: &ToleranceFrame) -> Result<SpectralProfile> {
    let blocks = op.blocks()?;
    let parts = blocks.iter().map(|b| block_parts(b, tf)).collect::<Result<Vec<_>>>()?;
    let union = |f: fn(&Parts) -> &SpectralSet| SpectralSet::union_all(parts.iter().map(f), tf);

    let sigma = union(|p| &p.sigma);
    let acc = sigma.acc(tf);
    let iso = sigma.iso(tf);

    let mut ies_points: Vec<ComplexValue> = Vec::new();
    for z in parts.iter().flat_map(|p| &p.ies) {
        if !decide(acc.contains(z, tf), || format!("whether {z} accumulates"))?
            && !ies_points.iter().any(|w| w.close_to(z, tf.eps_set))
        {
            ies_points.push(z.clone());
        }
    }
    let ies = SpectralSet::from_values(ies_points.iter().cloned()).normalize(tf);
    let drazin_spectrum = acc.union(&ies, tf);
    let pole_set = iso.without_points(&ies_points, tf)?;

    let mut orders: Vec<(ComplexValue, u32)> = Vec::new();
    for (z, k) in parts.iter().flat_map(|p| &p.orders) {
        if !decide(pole_set.contains(z, tf), || format!("whether {z} is a pole"))? {
            continue;
        }
        match orders.iter_mut().find(|(w, _)| w.close_to(z, tf.eps_set)) {
            Some(o) => o.1 = o.1.max(*k),
            None => orders.push((z.clone(), *k)),
        }
    }
    // explicit orders only for the point components of Π
    orders.retain(|(z, _)| pole_set.points().iter().any(|p| p.value.close_to(z, tf.eps_set)));
    orders.sort_by(|a, b| a.0.lex_cmp(&b.0));
    let poles = PoleSet { set: pole_set, orders };

    let (flag, min_poly) = is_algebraic(op, tf)?;

    let zero = ComplexValue::zero();
    let meromorphic = if !sigma.segments().is_empty() {
        false
    } else {
        let rest = sigma.without_points(std::slice::from_ref(&zero), tf)?;
        decide(rest.subset_of(poles.set(), tf), || format!("whether {sigma} minus 0 consists of poles"))?
    };
    let drazin_index_at_0 = if decide(drazin_spectrum.contains(&zero, tf), || "whether 0 is in the Drazin spectrum".into())? {
        None
    } else {
        Some(poles.order_at(&zero, tf)?.unwrap_or(0))
    };

    Ok(SpectralProfile {
        countable: sigma.is_countable(),
        asc_spectrum: union(|p| &p.asc),
        dsc_spectrum: union(|p| &p.dsc),
        ld_spectrum: union(|p| &p.ld),
        rd_spectrum: union(|p| &p.rd),
        sigma,
        iso,
        acc,
        poles,
        drazin_spectrum,
        ies,
        algebraic: Algebraic { flag, min_poly },
        meromorphic,
        drazin_index_at_0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::GaussRat;
    use crate::linalg::JordanPresentation;
    use crate::operator::{Component, DiagonalBlock, ShiftBlock, Weights};
    use crate::sequence::Sequence;
    use crate::spectra::SetRelation;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    fn v(s: &str) -> ComplexValue {
        s.parse().unwrap()
    }

    fn tf() -> ToleranceFrame {
        ToleranceFrame::default()
    }

    fn pts(vals: &[&str]) -> SpectralSet {
        SpectralSet::from_values(vals.iter().map(|s| v(s)))
    }

    fn eq(a: &SpectralSet, b: &SpectralSet) -> bool {
        a.relation(b, &tf()) == SetRelation::Equal
    }

    fn family(seq: Sequence) -> OperatorDesc {
        DiagonalBlock::new(vec![Component::family(seq)]).unwrap().into()
    }

    #[test]
    fn harmonic_diagonal() {
        let d = family(Sequence::harmonic(g("1"), 1).unwrap());
        let p = spectral_profile(&d, &tf()).unwrap();
        assert!(eq(&p.drazin_spectrum, &pts(&["0"])));
        assert!(p.ies.is_empty());
        assert_eq!(p.poles.order_at(&v("1/7"), &tf()).unwrap(), Some(1));
        assert_eq!(p.poles.order_at(&v("0"), &tf()).unwrap(), None);
        assert!(p.meromorphic);
        assert!(!p.algebraic.flag);
        assert_eq!(p.drazin_index_at_0, None);
    }

    #[test]
    fn shifted_harmonic_diagonal_is_not_meromorphic() {
        let d = family(Sequence::harmonic(g("1"), 1).unwrap().add_const(&g("1")));
        let p = spectral_profile(&d, &tf()).unwrap();
        assert!(eq(&p.drazin_spectrum, &pts(&["1"])));
        assert!(!p.meromorphic);
        assert_eq!(p.drazin_index_at_0, Some(0));
    }

    #[test]
    fn quasinilpotent_shift_has_an_isolated_essential_point() {
        let s: OperatorDesc = ShiftBlock::new(Weights::Harmonic(g("1"), 1), None).unwrap().into();
        let p = spectral_profile(&s, &tf()).unwrap();
        assert!(eq(&p.sigma, &pts(&["0"])));
        assert!(p.poles.set().is_empty());
        assert!(eq(&p.ies, &pts(&["0"])));
        assert!(eq(&p.drazin_spectrum, &pts(&["0"])));
        assert!(p.meromorphic);
        assert!(p.asc_spectrum.is_empty());
        let a = spectral_profile(&OperatorDesc::adjoint(s), &tf()).unwrap();
        assert!(eq(&a.asc_spectrum, &pts(&["0"])));
    }

    #[test]
    fn nilpotent_block_plus_identity() {
        let j: OperatorDesc = JordanPresentation::new(vec![(g("0"), vec![2])], None).unwrap().into();
        let one: OperatorDesc = DiagonalBlock::scalar(g("1")).into();
        let p = spectral_profile(&OperatorDesc::dsum(vec![j, one]), &tf()).unwrap();
        assert!(eq(&p.sigma, &pts(&["0", "1"])));
        assert_eq!(p.poles.orders(), &[(v("0"), 2), (v("1"), 1)]);
        assert!(p.drazin_spectrum.is_empty());
        assert_eq!(p.drazin_index_at_0, Some(2));
        assert!(p.algebraic.flag);
    }

    #[test]
    fn shift_fixture() {
        let st: OperatorDesc = DiagonalBlock::new(vec![
            Component::constant(g("0"), Multiplicity::Finite(1)).unwrap(),
            Component::constant(g("1"), Multiplicity::Infinite).unwrap(),
        ])
        .unwrap()
        .into();
        let ts: OperatorDesc = DiagonalBlock::scalar(g("1")).into();
        let a = spectral_profile(&st, &tf()).unwrap();
        let b = spectral_profile(&ts, &tf()).unwrap();
        assert_eq!(a.poles.orders(), &[(v("0"), 1), (v("1"), 1)]);
        assert_eq!(b.poles.orders(), &[(v("1"), 1)]);
        assert!(a.drazin_spectrum.is_empty() && b.drazin_spectrum.is_empty());
        let zero = v("0");
        assert!(a.poles.without(&zero, &tf()).unwrap().matches(&b.poles.without(&zero, &tf()).unwrap(), &tf()).unwrap());
        let json = serde_json::to_string(&a.poles).unwrap();
        assert_eq!(json, r#"[{"point":"0","order":1},{"point":"1","order":1}]"#);
    }

    #[test]
    fn ies_is_absorbed_by_accumulation() {
        let s: OperatorDesc = ShiftBlock::new(Weights::Geometric(g("1"), g("1/2")), None).unwrap().into();
        let d = family(Sequence::geometric(g("1"), g("1/3")).unwrap());
        let p = spectral_profile(&OperatorDesc::dsum(vec![s, d]), &tf()).unwrap();
        assert!(p.ies.is_empty());
        assert!(eq(&p.drazin_spectrum, &pts(&["0"])));
    }

    #[test]
    fn segments_are_uncountable_and_never_poles() {
        let d: OperatorDesc = DiagonalBlock::new(vec![
            Component::dense(BigRational::zero(), BigRational::one()).unwrap(),
            Component::constant(g("2"), Multiplicity::Finite(1)).unwrap(),
        ])
        .unwrap()
        .into();
        let p = spectral_profile(&d, &tf()).unwrap();
        assert!(!p.countable);
        assert!(!p.meromorphic);
        assert_eq!(p.poles.orders(), &[(v("2"), 1)]);
        assert!(eq(&p.ld_spectrum, &p.drazin_spectrum));
    }
}
