//! Exact Gaussian rationals, the field `ℚ(i)`.
//!
//! Values are stored over a common positive denominator with
//! `gcd(re, im, den) = 1`, so structural equality is numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseValueError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    re: BigInt,
    im: BigInt,
    den: BigInt,
}

impl GaussRat {
    fn reduced(mut re: BigInt, mut im: BigInt, mut den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            re = -re;
            im = -im;
            den = -den;
        }
        if re.is_zero() && im.is_zero() {
            return Self::zero();
        }
        if !den.is_one() {
            let g = re.gcd(&im).gcd(&den);
            if !g.is_one() {
                re /= &g;
                im /= &g;
                den /= &g;
            }
        }
        GaussRat { re, im, den }
    }

    pub fn new(re: BigRational, im: BigRational) -> Self {
        let den = re.denom().lcm(im.denom());
        let a = re.numer() * (&den / re.denom());
        let b = im.numer() * (&den / im.denom());
        Self::reduced(a, b, den)
    }

    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self::new(
            BigRational::new(re_num.into(), re_den.into()),
            BigRational::new(im_num.into(), im_den.into()),
        )
    }

    pub fn real(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::reduced(num.into(), BigInt::zero(), den.into())
    }

    pub fn int(v: i64) -> Self {
        Self::reduced(v.into(), BigInt::zero(), BigInt::one())
    }

    pub fn gaussian_int(re: i64, im: i64) -> Self {
        Self::reduced(re.into(), im.into(), BigInt::one())
    }

    pub fn i() -> Self {
        Self::gaussian_int(0, 1)
    }

    pub fn re(&self) -> BigRational {
        BigRational::new(self.re.clone(), self.den.clone())
    }

    pub fn im(&self) -> BigRational {
        BigRational::new(self.im.clone(), self.den.clone())
    }

    /// Numerators over the common denominator.
    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.re, &self.im, &self.den)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The real part when the imaginary part vanishes.
    pub fn re_if_real(&self) -> Option<BigRational> {
        self.is_real().then(|| self.re())
    }

    pub fn is_gaussian_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -&self.im,
            den: self.den.clone(),
        }
    }

    /// `|z|²`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        BigRational::new(
            &self.re * &self.re + &self.im * &self.im,
            &self.den * &self.den,
        )
    }

    /// Upper bound on `|z|`: `|re| + |im|`.
    pub fn l1_norm(&self) -> BigRational {
        BigRational::new(self.re.abs() + self.im.abs(), self.den.clone())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        let n = &self.re * &self.re + &self.im * &self.im;
        Self::reduced(&self.re * &self.den, -&self.im * &self.den, n)
    }

    pub fn pow(&self, exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        Self::reduced(&self.re * k, &self.im * k, self.den.clone())
    }

    /// Nearest Gaussian integer to a floating point value.
    pub fn round_from(re: f64, im: f64) -> Option<Self> {
        if !re.is_finite() || !im.is_finite() {
            return None;
        }
        let r = BigInt::from_f64_checked(re.round())?;
        let i = BigInt::from_f64_checked(im.round())?;
        Some(Self::reduced(r, i, BigInt::one()))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (ratio_to_f64(&self.re, &self.den), ratio_to_f64(&self.im, &self.den))
    }

    pub fn modulus_f64(&self) -> f64 {
        let (a, b) = self.to_f64_pair();
        a.hypot(b)
    }
}

trait FromF64Checked: Sized {
    fn from_f64_checked(v: f64) -> Option<Self>;
}

impl FromF64Checked for BigInt {
    fn from_f64_checked(v: f64) -> Option<Self> {
        num_traits::FromPrimitive::from_f64(v)
    }
}

fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => BigRational::new(n.clone(), d.clone()).to_f64().unwrap_or(f64::NAN),
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat {
            re: BigInt::zero(),
            im: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat {
            re: BigInt::one(),
            im: BigInt::zero(),
            den: BigInt::one(),
        }
    }
}

impl Ord for GaussRat {
    fn cmp(&self, other: &Self) -> Ordering {
        let a = &self.re * &other.den;
        let b = &other.re * &self.den;
        a.cmp(&b).then_with(|| (&self.im * &other.den).cmp(&(&other.im * &self.den)))
    }
}

impl PartialOrd for GaussRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return GaussRat::reduced(&self.re + &rhs.re, &self.im + &rhs.im, self.den.clone());
        }
        GaussRat::reduced(
            &self.re * &rhs.den + &rhs.re * &self.den,
            &self.im * &rhs.den + &rhs.im * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return GaussRat::reduced(&self.re - &rhs.re, &self.im - &rhs.im, self.den.clone());
        }
        GaussRat::reduced(
            &self.re * &rhs.den - &rhs.re * &self.den,
            &self.im * &rhs.den - &rhs.im * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        if self.is_zero() || rhs.is_zero() {
            return GaussRat::zero();
        }
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::reduced(&self.re * &rhs.re, BigInt::zero(), &self.den * &rhs.den);
        }
        GaussRat::reduced(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Div<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn div(self, rhs: &GaussRat) -> GaussRat {
        assert!(!rhs.is_zero(), "division by zero");
        if self.is_zero() {
            return GaussRat::zero();
        }
        let n = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        // (a + bi)(c - di)·d₂ / (d₁·(c² + d²))
        let re = &self.re * &rhs.re + &self.im * &rhs.im;
        let im = &self.im * &rhs.re - &self.re * &rhs.im;
        GaussRat::reduced(re * &rhs.den, im * &rhs.den, &self.den * n)
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat {
            re: -&self.re,
            im: -&self.im,
            den: self.den.clone(),
        }
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat {
            re: -self.re,
            im: -self.im,
            den: self.den,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $m(self, rhs: GaussRat) -> GaussRat { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $m(self, rhs: &GaussRat) -> GaussRat { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl num_traits::Num for GaussRat {
    type FromStrRadixErr = ParseValueError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(ParseValueError::new(s, "only radix 10 is supported"));
        }
        s.parse()
    }
}

impl num_traits::Inv for GaussRat {
    type Output = GaussRat;
    fn inv(self) -> GaussRat {
        self.recip()
    }
}

impl std::ops::Rem for GaussRat {
    type Output = GaussRat;
    /// Field remainder: always zero for a nonzero divisor.
    fn rem(self, rhs: GaussRat) -> GaussRat {
        assert!(!rhs.is_zero(), "remainder by zero");
        GaussRat::zero()
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&GaussRat> for GaussRat {
    fn sub_assign(&mut self, rhs: &GaussRat) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&GaussRat> for GaussRat {
    fn mul_assign(&mut self, rhs: &GaussRat) {
        *self = &*self * rhs;
    }
}

impl From<i64> for GaussRat {
    fn from(v: i64) -> Self {
        GaussRat::int(v)
    }
}

impl From<BigRational> for GaussRat {
    fn from(v: BigRational) -> Self {
        GaussRat::real(v)
    }
}

pub(crate) fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    /// `p/q+r/si`; the real part is always written, the imaginary part only
    /// when nonzero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rational(&self.re(), f)?;
        if !self.im.is_zero() {
            let im = self.im();
            f.write_str(if im.is_negative() { "-" } else { "+" })?;
            fmt_rational(&im.abs(), f)?;
            f.write_str("i")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `[-]p[/q]` into a rational; returns the rest of the input.
fn parse_rational_prefix(s: &str) -> Option<(BigRational, &str)> {
    let bytes = s.as_bytes();
    let mut i = 0;
    let neg = if bytes.first() == Some(&b'-') {
        i += 1;
        true
    } else {
        if bytes.first() == Some(&b'+') {
            i += 1;
        }
        false
    };
    let start = i;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i == start {
        return None;
    }
    let num: BigInt = s[start..i].parse().ok()?;
    let mut den = BigInt::one();
    if i < bytes.len() && bytes[i] == b'/' {
        let ds = i + 1;
        let mut j = ds;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        if j == ds {
            return None;
        }
        den = s[ds..j].parse().ok()?;
        if den.is_zero() {
            return None;
        }
        i = j;
    }
    let num = if neg { -num } else { num };
    Some((BigRational::new(num, den), &s[i..]))
}

impl FromStr for GaussRat {
    type Err = ParseValueError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |why: &str| ParseValueError::new(text, why);
        if s == "i" || s == "+i" {
            return Ok(GaussRat::i());
        }
        if s == "-i" {
            return Ok(-GaussRat::i());
        }
        let (first, rest) = parse_rational_prefix(&s).ok_or_else(|| bad("expected a rational"))?;
        if rest.is_empty() {
            return Ok(GaussRat::real(first));
        }
        if rest == "i" {
            return Ok(GaussRat::new(BigRational::zero(), first));
        }
        let (second, tail) =
            parse_rational_prefix(rest).ok_or_else(|| bad("expected an imaginary part"))?;
        if !(rest.starts_with('+') || rest.starts_with('-')) || tail != "i" {
            return Err(bad("imaginary part must look like +r/si"));
        }
        Ok(GaussRat::new(first, second))
    }
}

impl Serialize for GaussRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = g("1/2+1/3i");
        let b = g("-2/5+3i");
        let p = &a * &b;
        assert_eq!(&p / &b, a);
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(g("0+1i").pow(2), GaussRat::int(-1));
        assert_eq!(g("2").recip(), g("1/2"));
        assert_eq!(g("1+1i").recip(), g("1/2-1/2i"));
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "1", "-3/4", "1/2+3/4i", "0-1i", "-5/7-2/3i", "0+1i"] {
            assert_eq!(g(s).to_string(), s);
        }
        assert_eq!(g("i"), GaussRat::i());
        assert_eq!(g("2i"), GaussRat::gaussian_int(0, 2));
    }

    #[test]
    fn canonical_form_makes_equality_structural() {
        assert_eq!(g("2/4+2/4i"), g("1/2+1/2i"));
        assert_eq!(GaussRat::from_parts(3, -6, 0, 1), g("-1/2"));
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "1/0", "abc", "1+2", "1+i2"] {
            assert!(s.parse::<GaussRat>().is_err(), "{s}");
        }
    }

    #[test]
    fn ordering_is_lexicographic() {
        let mut v = vec![g("1"), g("0+1i"), g("0-1i"), g("-1/2")];
        v.sort();
        assert_eq!(v, vec![g("-1/2"), g("0-1i"), g("0+1i"), g("1")]);
    }
}
