//! Univariate polynomials over a [`Scalar`], plus the exact root and range
//! machinery the spectral calculus needs over `ℚ(i)`.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gauss::GaussRat;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Coefficients low to high; trailing zeros are always trimmed, so the
/// zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![S::zero(), S::one()])
    }

    pub fn monomial(c: S, k: usize) -> Self {
        let mut v = vec![S::zero(); k];
        v.push(c);
        Self::new(v)
    }

    /// `x - r`.
    pub fn linear_root(r: &S) -> Self {
        Self::new(vec![-r.clone(), S::one()])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc.mul_ref(x).add_ref(c))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).add_ref(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).sub_ref(&o.coeff(k))).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul_ref(k)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(inner).add(&Self::constant(c.clone())))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul_ref(&S::from_gauss(&GaussRat::int(k as i64))))
                .collect(),
        )
    }

    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(Scalar::conj).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = S::one() / l.clone();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d.leading().expect("division by the zero polynomial").clone();
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![S::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = rem[k + dd].clone() / dl.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].sub_ref(&c.mul_ref(dc));
                }
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (Self::new(q), Self::new(rem))
    }

    /// Monic greatest common divisor; meaningful in exact arithmetic.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(o);
        self.mul(o).div_rem(&g).0.monic()
    }

    /// Multiplicity of `r` as a root (0 if not a root); panics on the zero
    /// polynomial.
    pub fn root_multiplicity(&self, r: &S) -> usize {
        assert!(!self.is_zero(), "every value is a root of the zero polynomial");
        let lin = Self::linear_root(r);
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, rem) = p.div_rem(&lin);
            if !rem.is_zero() {
                return m;
            }
            m += 1;
            p = q;
        }
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix<S>) -> Matrix<S> {
        let n = m.rows();
        self.coeffs.iter().rev().fold(Matrix::zeros(n, n), |acc, c| {
            acc.matmul(m).add(&Matrix::identity(n).scale(c))
        })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }
}

// ---------------------------------------------------------------- display

fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    k: usize,
    negative: bool,
    mag: &str,
    unit: bool,
) -> fmt::Result {
    match (first, negative) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    if !(unit && k > 0) {
        f.write_str(mag)?;
    }
    match k {
        0 => Ok(()),
        1 => f.write_str("x"),
        _ => write!(f, "x^{k}"),
    }
}

impl fmt::Display for Polynomial<GaussRat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if c.is_real() {
                let r = c.re();
                let neg = r.is_negative();
                let mag = GaussRat::real(r.abs());
                write_term(f, first, k, neg, &mag.to_string(), mag.is_one())?;
            } else {
                write_term(f, first, k, false, &format!("({c})"), false)?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial<Complex64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let v = crate::value::ComplexValue::Approx(*c);
            write_term(f, first, k, false, &format!("({v})"), false)?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for Polynomial<GaussRat> {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        s.collect_str(self)
    }
}

impl Serialize for Polynomial<Complex64> {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        s.collect_str(self)
    }
}

// ---------------------------------------------------------------- exact roots

impl Polynomial<GaussRat> {
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussRat::is_real)
    }

    /// Square-free part, monic.
    pub fn squarefree(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Order of vanishing at zero.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// All roots in `ℚ(i)` with multiplicities, sorted lexicographically,
    /// together with the total degree left unexplained (roots outside
    /// `ℚ(i)`). Panics on the zero polynomial.
    pub fn gaussian_roots(&self) -> (Vec<(GaussRat, usize)>, usize) {
        assert!(!self.is_zero(), "roots of the zero polynomial");
        let deg = self.degree().unwrap_or(0);
        let mut roots: Vec<GaussRat> = Vec::new();
        let v = self.valuation();
        if v > 0 {
            roots.push(GaussRat::zero());
        }
        let stripped = Self::new(self.coeffs[v..].to_vec());
        if stripped.degree().unwrap_or(0) > 0 {
            let sqf = stripped.squarefree();
            for r in sqf.candidate_roots() {
                if !roots.contains(&r) && sqf.eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
        roots.sort();
        let mut out = Vec::with_capacity(roots.len());
        let mut found = 0;
        for r in roots {
            let m = self.root_multiplicity(&r);
            found += m;
            out.push((r, m));
        }
        (out, deg - found)
    }

    /// Exact candidates derived from floating point roots of a square-free
    /// polynomial; every candidate still has to be verified by evaluation.
    fn candidate_roots(&self) -> Vec<GaussRat> {
        let d = self.degree().unwrap_or(0);
        if d == 0 {
            return Vec::new();
        }
        if d == 1 {
            return vec![-(&self.coeffs[0] / &self.coeffs[1])];
        }
        // clear denominators: lead·r is a Gaussian integer for every root r
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.parts().2));
        let integral: Vec<GaussRat> = self.coeffs.iter().map(|c| c.scale_int(&l)).collect();
        let lead = integral.last().expect("nonzero").clone();
        let mut out = Vec::new();
        for z in numeric_roots(&self.map(|c| <Complex64 as Scalar>::from_gauss(c))) {
            let (lr, li) = lead.to_f64_pair();
            let w = Complex64::new(lr, li) * z;
            if let Some(g) = GaussRat::round_from(w.re, w.im) {
                for (dr, di) in [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)] {
                    let cand = &(&g + &GaussRat::gaussian_int(dr, di)) / &lead;
                    out.push(cand);
                }
            }
            if let (Some(re), Some(im)) = (best_rational(z.re), best_rational(z.im)) {
                out.push(GaussRat::new(re, im));
            }
        }
        out
    }

    /// Real coefficients required. Number of distinct real roots in the
    /// open interval `(lo, hi)`, by a Sturm sequence.
    pub fn count_real_roots_open(&self, lo: &BigRational, hi: &BigRational) -> usize {
        assert!(self.is_real(), "Sturm count needs real coefficients");
        if self.is_zero() {
            return 0;
        }
        let mut p = self.squarefree();
        // endpoint roots would break the sign-change count
        for e in [lo, hi] {
            let lin = Self::linear_root(&GaussRat::real(e.clone()));
            while p.degree().unwrap_or(0) > 0 && p.eval(&GaussRat::real(e.clone())).is_zero() {
                p = p.div_rem(&lin).0;
            }
        }
        if p.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let mut seq = vec![p.clone(), p.derivative()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&GaussRat::int(-1)));
        }
        let changes = |x: &BigRational| {
            let xv = GaussRat::real(x.clone());
            let signs: Vec<i8> = seq
                .iter()
                .map(|q| {
                    let v = q.eval(&xv).re();
                    if v.is_positive() {
                        1
                    } else if v.is_negative() {
                        -1
                    } else {
                        0
                    }
                })
                .filter(|s| *s != 0)
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        changes(lo) - changes(hi)
    }

    /// Exact image `[min, max]` of `[lo, hi]` under a real polynomial.
    /// Fails when an extremum sits at an irrational critical point.
    pub fn real_range(&self, lo: &BigRational, hi: &BigRational) -> Result<(BigRational, BigRational)> {
        if !self.is_real() {
            return Err(Error::Unrepresentable(format!(
                "{self} maps the real axis off itself"
            )));
        }
        let mut pts = vec![lo.clone(), hi.clone()];
        let d = self.derivative();
        if !d.is_zero() && d.degree().unwrap_or(0) > 0 {
            let inside: Vec<BigRational> = d
                .gaussian_roots()
                .0
                .into_iter()
                .filter(|(r, _)| r.is_real())
                .map(|(r, _)| r.re())
                .filter(|r| r > lo && r < hi)
                .collect();
            if d.count_real_roots_open(lo, hi) != inside.len() {
                return Err(Error::Unrepresentable(format!(
                    "{self} has an irrational critical point in [{lo}, {hi}]"
                )));
            }
            pts.extend(inside);
        }
        let vals: Vec<BigRational> = pts
            .iter()
            .map(|x| self.eval(&GaussRat::real(x.clone())).re())
            .collect();
        let min = vals.iter().min().expect("nonempty").clone();
        let max = vals.iter().max().expect("nonempty").clone();
        Ok((min, max))
    }
}

/// Best rational approximation with a bounded denominator, by continued
/// fractions.
fn best_rational(x: f64) -> Option<BigRational> {
    const MAX_DEN: i128 = 1 << 24;
    if !x.is_finite() || x.abs() > 1e15 {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        let ai = a as i128;
        let (p2, q2) = (ai * p1 + p0, ai * q1 + q0);
        if q2 > MAX_DEN {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)))
}

/// Simultaneous iteration on a monic polynomial, for companion matrices
/// the QR iteration stalls on (e.g. `x⁴ + c`).
fn durand_kerner(monic: &[Complex64]) -> Vec<Complex64> {
    let d = monic.len() - 1;
    let radius = 1.0 + monic[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32) * (radius / seed.norm().powi(k as i32))).collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c);
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let den = (0..d).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            if den.norm() == 0.0 {
                continue;
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    z
}

/// Floating point roots through the companion matrix, polished by Newton.
pub fn numeric_roots(p: &Polynomial<Complex64>) -> Vec<Complex64> {
    let Some(d) = p.degree() else {
        return Vec::new();
    };
    if d == 0 {
        return Vec::new();
    }
    let lead = p.coeffs[d];
    let monic: Vec<Complex64> = p.coeffs.iter().map(|c| c / lead).collect();
    if d == 1 {
        return vec![-monic[0]];
    }
    let comp = DMatrix::from_fn(d, d, |i, j| {
        if i == 0 {
            -monic[d - 1 - j]
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let ev: Vec<Complex64> = match comp.try_schur(f64::EPSILON, 200 * d).and_then(|s| s.eigenvalues()) {
        Some(v) => v.iter().cloned().collect(),
        None => durand_kerner(&monic),
    };
    let dp = p.derivative();
    ev.into_iter()
        .map(|mut z| {
            for _ in 0..4 {
                let fz = p.eval(&z);
                let dz = dp.eval(&z);
                if dz.norm() == 0.0 {
                    break;
                }
                let step = fz / dz;
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                z -= step;
            }
            z
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[&str]) -> Polynomial<GaussRat> {
        Polynomial::new(cs.iter().map(|s| s.parse().unwrap()).collect())
    }

    #[test]
    fn trims_and_degrees() {
        assert_eq!(p(&["1", "0", "0"]).degree(), Some(0));
        assert!(p(&["0"]).is_zero());
        assert_eq!(Polynomial::<GaussRat>::zero().degree(), None);
    }

    #[test]
    fn gaussian_roots_with_multiplicity() {
        // x²(x-2)(x²+1)
        let q = p(&["0", "0", "-2", "1"]).mul(&p(&["1", "0", "1"]));
        let (roots, rest) = q.gaussian_roots();
        assert_eq!(rest, 0);
        let want: Vec<(GaussRat, usize)> = vec![
            ("0-1i".parse().unwrap(), 1),
            ("0".parse().unwrap(), 2),
            ("0+1i".parse().unwrap(), 1),
            ("2".parse().unwrap(), 1),
        ];
        assert_eq!(roots, want);
    }

    #[test]
    fn roots_of_a_binomial_quartic() {
        // QR on this companion matrix stalls
        let (roots, rest) = p(&["1/16", "0", "0", "0", "7/6"]).gaussian_roots();
        assert!(roots.is_empty());
        assert_eq!(rest, 4);
        let z = numeric_roots(&p(&["1", "0", "0", "0", "1"]).map(|c| <Complex64 as Scalar>::from_gauss(c)));
        assert_eq!(z.len(), 4);
        assert!(z.iter().all(|w| (w.powu(4) + 1.0).norm() < 1e-9));
    }

    #[test]
    fn irrational_roots_are_reported_as_residual_degree() {
        let (roots, rest) = p(&["-2", "0", "1"]).gaussian_roots();
        assert!(roots.is_empty());
        assert_eq!(rest, 2);
    }

    #[test]
    fn rational_roots_with_large_denominators() {
        let r1: GaussRat = "3/7+2/5i".parse().unwrap();
        let r2: GaussRat = "-11/13".parse().unwrap();
        let q = Polynomial::linear_root(&r1)
            .pow(3)
            .mul(&Polynomial::linear_root(&r2));
        let (roots, rest) = q.gaussian_roots();
        assert_eq!(rest, 0);
        assert!(roots.contains(&(r1, 3)));
        assert!(roots.contains(&(r2, 1)));
    }

    #[test]
    fn sturm_counts_distinct_roots() {
        // (x-1)²(x-3)(x²-2)
        let q = p(&["-1", "1"]).pow(2).mul(&p(&["-3", "1"])).mul(&p(&["-2", "0", "1"]));
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(q.count_real_roots_open(&r(0, 1), &r(4, 1)), 3);
        assert_eq!(q.count_real_roots_open(&r(-2, 1), &r(0, 1)), 1);
        assert_eq!(q.count_real_roots_open(&r(1, 1), &r(3, 1)), 1);
    }

    #[test]
    fn real_range_uses_rational_critical_points() {
        let r = |a: i64| BigRational::from_integer(a.into());
        // x² on [-1, 2] → [0, 4]
        assert_eq!(p(&["0", "0", "1"]).real_range(&r(-1), &r(2)).unwrap(), (r(0), r(4)));
        // x³ - 2x has critical points ±√(2/3)
        assert!(p(&["0", "-2", "0", "1"]).real_range(&r(-1), &r(1)).is_err());
        // monotone cubic is fine even with irrational critical points outside
        assert!(p(&["0", "-2", "0", "1"]).real_range(&r(1), &r(2)).is_ok());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&["1", "-2", "1"]).to_string(), "x^2 - 2x + 1");
        assert_eq!(p(&["0", "1/2+1i"]).to_string(), "(1/2+1i)x");
        assert_eq!(p(&["-1"]).to_string(), "-1");
    }

    #[test]
    fn lcm_and_gcd() {
        let a = p(&["0", "0", "1"]); // x²
        let b = p(&["0", "-2", "1"]); // x(x-2)
        assert_eq!(a.gcd(&b), p(&["0", "1"]));
        assert_eq!(a.lcm(&b), p(&["0", "0", "-2", "1"]));
    }
}
