//! Symbolic subsets of `ℂ`: finite points, convergent sequence families
//! and real segments.
//!
//! Sets are never sampled. Membership in a family is decided in closed
//! form, and questions that cannot be settled that way come back as
//! [`Truth::Unknown`] instead of a guess.
//!
//! No component has planar interior, so every representable set equals
//! its own boundary.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gauss::GaussRat;
use crate::poly::Polynomial;
use crate::sequence::Sequence;
use crate::value::{ComplexValue, ToleranceFrame};

/// Upper limit on terms inspected by any tail or witness search.
const SEARCH_CAP: u64 = 20_000;
const WITNESS_TERMS: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truth {
    Yes,
    No,
    Unknown,
}

impl Truth {
    pub fn from_bool(b: bool) -> Self {
        if b { Truth::Yes } else { Truth::No }
    }

    pub fn is_yes(self) -> bool {
        self == Truth::Yes
    }

    pub fn not(self) -> Self {
        match self {
            Truth::Yes => Truth::No,
            Truth::No => Truth::Yes,
            Truth::Unknown => Truth::Unknown,
        }
    }

    /// Yes iff every item is Yes; No as soon as one is No.
    pub fn all(items: impl IntoIterator<Item = Truth>) -> Truth {
        let mut out = Truth::Yes;
        for t in items {
            match t {
                Truth::No => return Truth::No,
                Truth::Unknown => out = Truth::Unknown,
                Truth::Yes => {}
            }
        }
        out
    }

    /// Yes as soon as one item is Yes; No iff every item is No.
    pub fn any(items: impl IntoIterator<Item = Truth>) -> Truth {
        Truth::all(items.into_iter().map(Truth::not)).not()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub fn add(self, o: Self) -> Self {
        match (self, o) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a + b),
            _ => Multiplicity::Infinite,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(k) => write!(f, "{k}"),
            Multiplicity::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(k) => s.serialize_u64(*k),
            Multiplicity::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPoint {
    pub value: ComplexValue,
    /// False for points that only enter as limits.
    pub attained: bool,
    pub multiplicity: Multiplicity,
}

impl SpectralPoint {
    pub fn attained(value: ComplexValue, multiplicity: Multiplicity) -> Self {
        SpectralPoint {
            value,
            attained: true,
            multiplicity,
        }
    }

    pub fn limit(value: ComplexValue) -> Self {
        SpectralPoint {
            value,
            attained: false,
            multiplicity: Multiplicity::Finite(0),
        }
    }
}

/// A closed real interval `[lo, hi]` with `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    lo: BigRational,
    hi: BigRational,
}

impl Segment {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidValue(format!("segment needs lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Segment { lo, hi })
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn contains_exact(&self, z: &GaussRat) -> bool {
        z.re_if_real().is_some_and(|x| self.lo <= x && x <= self.hi)
    }

    pub fn contains(&self, z: &ComplexValue, eps: f64) -> bool {
        match z {
            ComplexValue::Exact(g) => self.contains_exact(g),
            ComplexValue::Approx(c) => {
                let (lo, hi) = (to_f64(&self.lo), to_f64(&self.hi));
                c.im.abs() <= eps && c.re >= lo - eps && c.re <= hi + eps
            }
        }
    }

    pub fn contains_segment(&self, o: &Segment) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn overlaps(&self, o: &Segment) -> bool {
        self.lo.clone().max(o.lo.clone()) <= self.hi.clone().min(o.hi.clone())
    }

    /// Largest `δ` with the real `δ`-neighbourhood of `x` inside, for `x`
    /// in the open interior.
    fn interior_margin(&self, x: &GaussRat) -> Option<BigRational> {
        let x = x.re_if_real()?;
        (self.lo < x && x < self.hi).then(|| (&x - &self.lo).min(&self.hi - &x))
    }

    /// A lower bound on the distance from `z` to the segment, when `z`
    /// lies outside.
    fn gap_to(&self, z: &GaussRat) -> Option<BigRational> {
        let (re, im) = (z.re(), z.im());
        let dre = if re < self.lo {
            &self.lo - &re
        } else if re > self.hi {
            &re - &self.hi
        } else {
            BigRational::zero()
        };
        let d = dre.max(im.abs());
        (!d.is_zero()).then_some(d)
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A region removed from a family.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    Point(ComplexValue),
    Segment(Segment),
}

impl Region {
    fn contains(&self, z: &ComplexValue, eps: f64) -> bool {
        match self {
            Region::Point(p) => p.close_to(z, eps),
            Region::Segment(s) => s.contains(z, eps),
        }
    }

    fn covers(&self, o: &Region, eps: f64) -> bool {
        match (self, o) {
            (Region::Point(a), Region::Point(b)) => a.close_to(b, eps),
            (Region::Segment(s), Region::Point(p)) => s.contains(p, eps),
            (Region::Segment(a), Region::Segment(b)) => a.contains_segment(b),
            (Region::Point(_), Region::Segment(_)) => false,
        }
    }

    fn conj(&self) -> Self {
        match self {
            Region::Point(p) => Region::Point(p.conj()),
            Region::Segment(s) => Region::Segment(s.clone()),
        }
    }
}

/// The members `sᵢ` of a sequence, minus skipped indices and excluded
/// regions. The limit belongs to the family only if some term equals it.
#[derive(Clone, Debug, PartialEq)]
pub struct Family {
    seq: Sequence,
    skip: BTreeSet<u64>,
    excluded: Vec<Region>,
}

impl Family {
    /// Fails on eventually constant sequences, which are points.
    pub fn new(seq: Sequence) -> Result<Self> {
        Self::with_skip(seq, BTreeSet::new())
    }

    pub fn with_skip(seq: Sequence, skip: BTreeSet<u64>) -> Result<Self> {
        if seq.is_constant() {
            return Err(Error::InvalidValue(format!("constant sequence {seq} is not a family")));
        }
        Ok(Family {
            seq,
            skip,
            excluded: Vec::new(),
        })
    }

    pub fn sequence(&self) -> &Sequence {
        &self.seq
    }

    pub fn skipped(&self) -> &BTreeSet<u64> {
        &self.skip
    }

    pub fn excluded(&self) -> &[Region] {
        &self.excluded
    }

    pub fn limit(&self) -> GaussRat {
        self.seq.limit()
    }

    fn excludes(&self, z: &ComplexValue, eps: f64) -> bool {
        self.excluded.iter().any(|r| r.contains(z, eps))
    }

    fn live(&self, i: u64, eps: f64) -> Option<GaussRat> {
        if self.skip.contains(&i) {
            return None;
        }
        let t = self.seq.term(i);
        (!self.excludes(&ComplexValue::Exact(t.clone()), eps)).then_some(t)
    }

    pub fn member(&self, z: &ComplexValue, tf: &ToleranceFrame) -> Truth {
        let eps = tf.eps_set;
        if self.excludes(z, eps) {
            return Truth::No;
        }
        match z {
            ComplexValue::Exact(g) => match self.seq.indices_of(g) {
                None => Truth::Unknown,
                Some(idx) => Truth::from_bool(idx.iter().any(|i| !self.skip.contains(i))),
            },
            ComplexValue::Approx(c) => self.member_approx(*c, eps),
        }
    }

    fn member_approx(&self, z: Complex64, eps: f64) -> Truth {
        let (lr, li) = self.limit().to_f64_pair();
        let d = (z - Complex64::new(lr, li)).norm();
        if d <= eps {
            return Truth::Unknown;
        }
        let mut hits: Vec<GaussRat> = Vec::new();
        for i in 0..SEARCH_CAP {
            let bound = to_f64(&self.seq.deviation_bound_sq(i)).sqrt();
            if bound < d - eps {
                return match hits.len() {
                    0 => Truth::No,
                    1 => Truth::Yes,
                    _ => Truth::Unknown,
                };
            }
            if let Some(t) = self.live(i, eps) {
                let (tr, ti) = t.to_f64_pair();
                if (Complex64::new(tr, ti) - z).norm() <= eps && !hits.contains(&t) {
                    hits.push(t);
                }
            }
        }
        Truth::Unknown
    }

    pub fn conj(&self) -> Self {
        Family {
            seq: self.seq.conj(),
            skip: self.skip.clone(),
            excluded: self.excluded.iter().map(Region::conj).collect(),
        }
    }

    /// Adds an exclusion unless the family provably misses the region.
    fn exclude(&mut self, r: Region, tf: &ToleranceFrame) {
        let relevant = match &r {
            Region::Point(p) => self.member(p, tf) != Truth::No,
            Region::Segment(s) => self.meets_segment(s, tf) != Truth::No,
        };
        if relevant && !self.excluded.iter().any(|e| e.covers(&r, tf.eps_set)) {
            self.excluded.push(r);
        }
    }

    fn meets_segment(&self, s: &Segment, tf: &ToleranceFrame) -> Truth {
        let eps = tf.eps_set;
        if self.excluded.iter().any(|e| e.covers(&Region::Segment(s.clone()), eps)) {
            return Truth::No;
        }
        let lim = self.limit();
        if self.seq.is_real() && s.interior_margin(&lim).is_some() {
            return Truth::Yes;
        }
        let Some(gap) = s.gap_to(&lim) else {
            return Truth::Unknown;
        };
        let Some(n) = self.seq.tail_start(&gap, SEARCH_CAP) else {
            return Truth::Unknown;
        };
        Truth::from_bool((0..n).any(|i| self.live(i, eps).is_some_and(|t| s.contains_exact(&t))))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetRelation {
    Equal,
    Subset,
    Superset,
    Incomparable,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SpectralSet {
    points: Vec<SpectralPoint>,
    families: Vec<Family>,
    segments: Vec<Segment>,
}

impl SpectralSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Attained points of multiplicity 1, not yet normalized.
    pub fn from_values(values: impl IntoIterator<Item = ComplexValue>) -> Self {
        SpectralSet {
            points: values
                .into_iter()
                .map(|v| SpectralPoint::attained(v, Multiplicity::Finite(1)))
                .collect(),
            ..Self::default()
        }
    }

    pub fn from_parts(points: Vec<SpectralPoint>, families: Vec<Family>, segments: Vec<Segment>) -> Self {
        SpectralSet {
            points,
            families,
            segments,
        }
    }

    pub fn points(&self) -> &[SpectralPoint] {
        &self.points
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.families.is_empty() && self.segments.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.families.is_empty() && self.segments.is_empty()
    }

    pub fn is_countable(&self) -> bool {
        self.segments.is_empty()
    }

    /// Every representable set has empty planar interior, so it is its own
    /// boundary.
    pub fn boundary(&self) -> SpectralSet {
        self.clone()
    }

    pub fn point_values(&self) -> Vec<ComplexValue> {
        self.points.iter().map(|p| p.value.clone()).collect()
    }

    /// Merges segments, absorbs points covered by segments or families,
    /// merges duplicate points and sorts.
    pub fn normalize(&self, tf: &ToleranceFrame) -> SpectralSet {
        let eps = tf.eps_set;
        let mut segs = self.segments.clone();
        segs.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
        let mut merged: Vec<Segment> = Vec::new();
        for s in segs {
            match merged.last_mut() {
                Some(last) if s.lo <= last.hi => {
                    if s.hi > last.hi {
                        last.hi = s.hi;
                    }
                }
                _ => merged.push(s),
            }
        }
        let mut families: Vec<Family> = Vec::new();
        for f in &self.families {
            if !families.contains(f) {
                families.push(f.clone());
            }
        }
        families.sort_by_cached_key(|f| (f.limit(), f.seq.to_string()));

        let mut points: Vec<SpectralPoint> = Vec::new();
        for p in &self.points {
            if merged.iter().any(|s| s.contains(&p.value, eps)) {
                continue;
            }
            if families.iter().any(|f| f.member(&p.value, tf).is_yes()) {
                continue;
            }
            match points.iter_mut().find(|q| q.value.close_to(&p.value, eps)) {
                Some(q) => {
                    q.attained |= p.attained;
                    q.multiplicity = q.multiplicity.add(p.multiplicity);
                    if !q.value.is_exact() && p.value.is_exact() {
                        q.value = p.value.clone();
                    }
                }
                None => points.push(p.clone()),
            }
        }
        points.sort_by(|a, b| a.value.lex_cmp(&b.value));
        SpectralSet {
            points,
            families,
            segments: merged,
        }
    }

    pub fn union(&self, o: &SpectralSet, tf: &ToleranceFrame) -> SpectralSet {
        let mut s = self.clone();
        s.points.extend(o.points.iter().cloned());
        s.families.extend(o.families.iter().cloned());
        s.segments.extend(o.segments.iter().cloned());
        s.normalize(tf)
    }

    pub fn union_all<'a>(sets: impl IntoIterator<Item = &'a SpectralSet>, tf: &ToleranceFrame) -> SpectralSet {
        let mut s = SpectralSet::empty();
        for t in sets {
            s.points.extend(t.points.iter().cloned());
            s.families.extend(t.families.iter().cloned());
            s.segments.extend(t.segments.iter().cloned());
        }
        s.normalize(tf)
    }

    /// Adds every family limit as a non-attained point.
    pub fn closure(&self, tf: &ToleranceFrame) -> SpectralSet {
        let mut s = self.clone();
        for f in &self.families {
            s.points.push(SpectralPoint::limit(ComplexValue::Exact(f.limit())));
        }
        s.normalize(tf)
    }

    fn limit_values(&self) -> Vec<ComplexValue> {
        self.families.iter().map(|f| ComplexValue::Exact(f.limit())).collect()
    }

    /// Accumulation points: family limits and segments. Expects a
    /// normalized set.
    pub fn acc(&self, tf: &ToleranceFrame) -> SpectralSet {
        let eps = tf.eps_set;
        let points = self
            .limit_values()
            .into_iter()
            .map(|l| match self.points.iter().find(|p| p.value.close_to(&l, eps)) {
                Some(p) => p.clone(),
                None => SpectralPoint::limit(l),
            })
            .collect();
        SpectralSet {
            points,
            families: Vec::new(),
            segments: self.segments.clone(),
        }
        .normalize(tf)
    }

    /// Isolated points: points that are not limits, and family members
    /// away from limits and segments. Expects a normalized set.
    pub fn iso(&self, tf: &ToleranceFrame) -> SpectralSet {
        let eps = tf.eps_set;
        let limits = self.limit_values();
        let points = self
            .points
            .iter()
            .filter(|p| !limits.iter().any(|l| l.close_to(&p.value, eps)))
            .cloned()
            .collect();
        let families = self
            .families
            .iter()
            .map(|f| {
                let mut f = f.clone();
                for l in &limits {
                    f.exclude(Region::Point(l.clone()), tf);
                }
                for s in &self.segments {
                    f.exclude(Region::Segment(s.clone()), tf);
                }
                f
            })
            .collect();
        SpectralSet {
            points,
            families,
            segments: Vec::new(),
        }
        .normalize(tf)
    }

    /// Removes finitely many points. Points inside a segment cannot be
    /// removed while staying in the class.
    pub fn without_points(&self, remove: &[ComplexValue], tf: &ToleranceFrame) -> Result<SpectralSet> {
        let eps = tf.eps_set;
        if let Some(z) = remove.iter().find(|z| self.segments.iter().any(|s| s.contains(z, eps))) {
            return Err(Error::Unrepresentable(format!("removing {z} from a segment")));
        }
        let mut s = self.clone();
        s.points.retain(|p| !remove.iter().any(|z| z.close_to(&p.value, eps)));
        for f in &mut s.families {
            for z in remove {
                f.exclude(Region::Point(z.clone()), tf);
            }
        }
        Ok(s.normalize(tf))
    }

    pub fn conjugate(&self) -> SpectralSet {
        let mut points: Vec<SpectralPoint> = self
            .points
            .iter()
            .map(|p| SpectralPoint {
                value: p.value.conj(),
                ..p.clone()
            })
            .collect();
        points.sort_by(|a, b| a.value.lex_cmp(&b.value));
        let mut families: Vec<Family> = self.families.iter().map(Family::conj).collect();
        families.sort_by_cached_key(|f| (f.limit(), f.seq.to_string()));
        SpectralSet {
            points,
            families,
            segments: self.segments.clone(),
        }
    }

    /// Image under a polynomial. Families must carry no exclusions, and
    /// segments need a real polynomial with rational extremes.
    pub fn map_poly(&self, p: &Polynomial<GaussRat>, tf: &ToleranceFrame) -> Result<SpectralSet> {
        let mut out = SpectralSet::empty();
        for pt in &self.points {
            let value = match &pt.value {
                ComplexValue::Exact(g) => ComplexValue::Exact(p.eval(g)),
                ComplexValue::Approx(c) => {
                    let q = p.map(<Complex64 as crate::scalar::Scalar>::from_gauss);
                    ComplexValue::approx(q.eval(c).re, q.eval(c).im)?
                }
            };
            out.points.push(SpectralPoint { value, ..pt.clone() });
        }
        for f in &self.families {
            if !f.excluded.is_empty() {
                return Err(Error::Unrepresentable(
                    "image of a family with excluded regions".into(),
                ));
            }
            let seq = f.seq.compose(p);
            if seq.is_constant() {
                out.points.push(SpectralPoint::attained(
                    ComplexValue::Exact(seq.limit()),
                    Multiplicity::Infinite,
                ));
            } else {
                out.families.push(Family::with_skip(seq, f.skip.clone())?);
            }
        }
        for s in &self.segments {
            let (lo, hi) = image_of_segment(p, s)?;
            if lo == hi {
                out.points.push(SpectralPoint::attained(
                    ComplexValue::Exact(GaussRat::real(lo)),
                    Multiplicity::Infinite,
                ));
            } else {
                out.segments.push(Segment::new(lo, hi)?);
            }
        }
        Ok(out.normalize(tf))
    }

    /// Every component on the real axis (approximate points within
    /// `eps_set`).
    pub fn is_real(&self, tf: &ToleranceFrame) -> bool {
        self.points.iter().all(|p| p.value.is_real_within(tf.eps_set))
            && self.families.iter().all(|f| f.seq.is_real())
    }

    pub fn contains(&self, z: &ComplexValue, tf: &ToleranceFrame) -> Truth {
        let eps = tf.eps_set;
        let near: Vec<&ComplexValue> = self
            .points
            .iter()
            .map(|p| &p.value)
            .filter(|v| v.close_to(z, eps))
            .collect();
        if let Some(first) = near.first() {
            // two distinct candidates within reach: refuse to guess
            if !z.is_exact() && near.iter().any(|v| v != first) {
                return Truth::Unknown;
            }
            return Truth::Yes;
        }
        if self.segments.iter().any(|s| s.contains(z, eps)) {
            return Truth::Yes;
        }
        Truth::any(self.families.iter().map(|f| f.member(z, tf)))
    }

    pub fn subset_of(&self, o: &SpectralSet, tf: &ToleranceFrame) -> Truth {
        let points = self.points.iter().map(|p| o.contains(&p.value, tf));
        let segments = self
            .segments
            .iter()
            .map(|s| Truth::from_bool(o.segments.iter().any(|t| t.contains_segment(s))));
        let families = self.families.iter().map(|f| family_subset(f, o, tf));
        Truth::all(points.chain(segments).chain(families))
    }

    pub fn equals(&self, o: &SpectralSet, tf: &ToleranceFrame) -> Truth {
        Truth::all([self.subset_of(o, tf), o.subset_of(self, tf)])
    }

    /// Undecided containments count as failures, so `Incomparable` is the
    /// answer whenever anything is left open.
    pub fn relation(&self, o: &SpectralSet, tf: &ToleranceFrame) -> SetRelation {
        match (self.subset_of(o, tf).is_yes(), o.subset_of(self, tf).is_yes()) {
            (true, true) => SetRelation::Equal,
            (true, false) => SetRelation::Subset,
            (false, true) => SetRelation::Superset,
            (false, false) => SetRelation::Incomparable,
        }
    }

    pub fn intersects(&self, o: &SpectralSet, tf: &ToleranceFrame) -> Truth {
        let mut items: Vec<Truth> = Vec::new();
        items.extend(self.points.iter().map(|p| o.contains(&p.value, tf)));
        items.extend(o.points.iter().map(|p| self.contains(&p.value, tf)));
        for s in &self.segments {
            items.extend(o.segments.iter().map(|t| Truth::from_bool(s.overlaps(t))));
            items.extend(o.families.iter().map(|f| f.meets_segment(s, tf)));
        }
        for f in &self.families {
            items.extend(o.segments.iter().map(|s| f.meets_segment(s, tf)));
            items.extend(o.families.iter().map(|g| families_meet(f, g, tf)));
        }
        Truth::any(items)
    }
}

fn image_of_segment(p: &Polynomial<GaussRat>, s: &Segment) -> Result<(BigRational, BigRational)> {
    p.real_range(&s.lo, &s.hi)
}

/// Whether the members of `f` all lie in `b`.
fn family_subset(f: &Family, b: &SpectralSet, tf: &ToleranceFrame) -> Truth {
    let eps = tf.eps_set;
    // the same sequence in `b`, possibly with fewer members
    for g in b.families.iter().filter(|g| g.seq == f.seq) {
        let skipped = g
            .skip
            .difference(&f.skip)
            .map(|&i| match f.live(i, eps) {
                Some(t) => b.contains(&ComplexValue::Exact(t), tf),
                None => Truth::Yes,
            });
        let regions = g.excluded.iter().map(|r| {
            if f.excluded.iter().any(|e| e.covers(r, eps)) {
                return Truth::Yes;
            }
            match r {
                Region::Point(p) => match f.member(p, tf) {
                    Truth::No => Truth::Yes,
                    _ => b.contains(p, tf),
                },
                Region::Segment(s) => {
                    if b.segments.iter().any(|t| t.contains_segment(s)) {
                        Truth::Yes
                    } else {
                        f.meets_segment(s, tf).not()
                    }
                }
            }
        });
        if Truth::all(skipped.chain(regions)).is_yes() {
            return Truth::Yes;
        }
    }
    // a real family converging into the interior of a segment of `b`
    let lim = f.limit();
    if f.seq.is_real() {
        for s in &b.segments {
            if let Some(delta) = s.interior_margin(&lim) {
                if let Some(n) = f.seq.tail_start(&delta, SEARCH_CAP) {
                    let head = (0..n).filter_map(|i| f.live(i, eps)).map(|t| b.contains(&ComplexValue::Exact(t), tf));
                    if Truth::all(head).is_yes() {
                        return Truth::Yes;
                    }
                }
            }
        }
    }
    if f.skip.is_empty() && f.excluded.is_empty() {
        for g in b.families.iter().filter(|g| g.skip.is_empty() && g.excluded.is_empty()) {
            if single_term_subset(&f.seq, &g.seq) {
                return Truth::Yes;
            }
        }
    }
    // a member outside `b` settles it
    let witness = (0..WITNESS_TERMS).filter_map(|i| f.live(i, eps));
    for t in witness {
        if b.contains(&ComplexValue::Exact(t), tf) == Truth::No {
            return Truth::No;
        }
    }
    Truth::Unknown
}

/// `L + b·rⁱ ⊆ L + c·sʲ` or `b·rⁱ ⊆ c/nᵖ`, decided in closed form.
fn single_term_subset(f: &Sequence, g: &Sequence) -> bool {
    use crate::sequence::Sequence::{Geometric, Harmonic};
    let Geometric(fe) = f else { return false };
    let moving: Vec<&(GaussRat, GaussRat)> = fe.terms().iter().filter(|(r, _)| !r.is_one()).collect();
    let [(r, b)] = moving.as_slice() else { return false };
    match g {
        Geometric(ge) => {
            if ge.limit() != fe.limit() {
                return false;
            }
            let gm: Vec<&(GaussRat, GaussRat)> = ge.terms().iter().filter(|(s, _)| !s.is_one()).collect();
            let [(s, _)] = gm.as_slice() else { return false };
            // L + b ∈ g and r = s^k for some k ≥ 1
            let starts = g.indices_of(&(&fe.limit() + b)).unwrap_or_default();
            if starts.is_empty() {
                return false;
            }
            let r2 = r.norm_sqr();
            let mut p = s.clone();
            while p.norm_sqr() >= r2 {
                if &p == r {
                    return true;
                }
                p = &p * s;
            }
            false
        }
        Harmonic(h) => {
            if !fe.limit().is_zero() || !h.coeff(0).is_zero() {
                return false;
            }
            let nz: Vec<(usize, &GaussRat)> = h.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            let [(p, c)] = nz.as_slice() else { return false };
            // b·rⁱ = c/nᵢᵖ for all i iff c/b and 1/r are p-th powers of
            // positive integers
            is_int_pth_power(&(*c / b), *p as u32) && is_int_pth_power(&r.recip(), *p as u32)
        }
    }
}

fn is_int_pth_power(x: &GaussRat, p: u32) -> bool {
    let Some(q) = x.re_if_real() else { return false };
    if !q.is_integer() || !q.is_positive() {
        return false;
    }
    let n = q.to_integer();
    let root = n.nth_root(p);
    num_traits::pow(root, p as usize) == n
}

fn families_meet(f: &Family, g: &Family, tf: &ToleranceFrame) -> Truth {
    let eps = tf.eps_set;
    let (lf, lg) = (f.limit(), g.limit());
    if lf == lg {
        if f.seq == g.seq && f.excluded.is_empty() && g.excluded.is_empty() {
            return Truth::Yes;
        }
        return Truth::Unknown;
    }
    let diff = &lf - &lg;
    let half = diff.re().abs().max(diff.im().abs()) / BigRational::from_integer(2.into());
    let (Some(nf), Some(ng)) = (f.seq.tail_start(&half, SEARCH_CAP), g.seq.tail_start(&half, SEARCH_CAP)) else {
        return Truth::Unknown;
    };
    let a = (0..nf).filter_map(|i| f.live(i, eps)).map(|t| g.member(&ComplexValue::Exact(t), tf));
    let b = (0..ng).filter_map(|i| g.live(i, eps)).map(|t| f.member(&ComplexValue::Exact(t), tf));
    Truth::any(a.chain(b))
}

// ---------------------------------------------------------------- output

impl fmt::Display for SpectralSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.points.iter().map(|p| p.value.to_string()).collect();
        for fam in &self.families {
            let mut s = format!("{{{}}}→{}", fam.seq, fam.limit());
            if !fam.skip.is_empty() {
                let idx: Vec<String> = fam.skip.iter().map(u64::to_string).collect();
                s.push_str(&format!(" skipping [{}]", idx.join(",")));
            }
            if !fam.excluded.is_empty() {
                let ex: Vec<String> = fam
                    .excluded
                    .iter()
                    .map(|r| match r {
                        Region::Point(p) => p.to_string(),
                        Region::Segment(s) => format!("[{}, {}]", s.lo, s.hi),
                    })
                    .collect();
                s.push_str(&format!(" minus {{{}}}", ex.join(", ")));
            }
            parts.push(s);
        }
        for s in &self.segments {
            parts.push(format!("[{}, {}]", s.lo, s.hi));
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ComponentOut<'a> {
    Point {
        value: &'a ComplexValue,
        attained: bool,
        multiplicity: Multiplicity,
    },
    Geometric {
        terms: Vec<TermOut>,
        limit: String,
        #[serde(skip_serializing_if = "Vec::is_empty")]
        skip: Vec<u64>,
        #[serde(skip_serializing_if = "Vec::is_empty")]
        excluded: Vec<String>,
    },
    Harmonic {
        /// `H` in `H(1/n)`.
        polynomial: String,
        limit: String,
        #[serde(skip_serializing_if = "Vec::is_empty")]
        skip: Vec<u64>,
        #[serde(skip_serializing_if = "Vec::is_empty")]
        excluded: Vec<String>,
    },
    Segment {
        lo: String,
        hi: String,
    },
}

#[derive(Serialize)]
struct TermOut {
    coefficient: String,
    ratio: String,
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let skip: Vec<u64> = self.skip.iter().copied().collect();
        let excluded: Vec<String> = self
            .excluded
            .iter()
            .map(|r| match r {
                Region::Point(p) => p.to_string(),
                Region::Segment(s) => format!("[{}, {}]", s.lo, s.hi),
            })
            .collect();
        let limit = self.limit().to_string();
        let c = match &self.seq {
            Sequence::Geometric(e) => ComponentOut::Geometric {
                terms: e
                    .terms()
                    .iter()
                    .map(|(r, c)| TermOut {
                        coefficient: c.to_string(),
                        ratio: r.to_string(),
                    })
                    .collect(),
                limit,
                skip,
                excluded,
            },
            Sequence::Harmonic(h) => ComponentOut::Harmonic {
                polynomial: h.to_string(),
                limit,
                skip,
                excluded,
            },
        };
        c.serialize(s)
    }
}

impl Serialize for SpectralSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(None)?;
        for p in &self.points {
            seq.serialize_element(&ComponentOut::Point {
                value: &p.value,
                attained: p.attained,
                multiplicity: p.multiplicity,
            })?;
        }
        for f in &self.families {
            seq.serialize_element(f)?;
        }
        for sg in &self.segments {
            seq.serialize_element(&ComponentOut::Segment {
                lo: GaussRat::real(sg.lo.clone()).to_string(),
                hi: GaussRat::real(sg.hi.clone()).to_string(),
            })?;
        }
        seq.end()
    }
}
