//! Scalars as they appear in spectral sets, and the tolerance frame that
//! governs every floating point decision.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, ParseValueError, Result};
use crate::gauss::GaussRat;

/// A point of `ℂ`, either exact or a finite floating point approximation.
#[derive(Clone, PartialEq)]
pub enum ComplexValue {
    Exact(GaussRat),
    Approx(Complex64),
}

impl ComplexValue {
    pub fn approx(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(ComplexValue::Approx(Complex64::new(re, im)))
        } else {
            Err(Error::InvalidValue(format!("non-finite approximate value {re}+{im}i")))
        }
    }

    pub fn int(v: i64) -> Self {
        ComplexValue::Exact(GaussRat::int(v))
    }

    pub fn zero() -> Self {
        ComplexValue::Exact(GaussRat::zero())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ComplexValue::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&GaussRat> {
        match self {
            ComplexValue::Exact(g) => Some(g),
            ComplexValue::Approx(_) => None,
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        match self {
            ComplexValue::Exact(g) => {
                let (a, b) = g.to_f64_pair();
                Complex64::new(a, b)
            }
            ComplexValue::Approx(c) => *c,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            ComplexValue::Exact(g) => ComplexValue::Exact(g.conj()),
            ComplexValue::Approx(c) => ComplexValue::Approx(c.conj()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ComplexValue::Exact(g) => g.is_zero(),
            ComplexValue::Approx(c) => c.is_zero(),
        }
    }

    /// Exact values must have zero imaginary part; approximate ones may
    /// deviate by `eps`.
    pub fn is_real_within(&self, eps: f64) -> bool {
        match self {
            ComplexValue::Exact(g) => g.is_real(),
            ComplexValue::Approx(c) => c.im.abs() <= eps,
        }
    }

    pub fn distance(&self, other: &ComplexValue) -> f64 {
        (self.to_complex64() - other.to_complex64()).norm()
    }

    /// Exact pairs compare exactly; any approximate side compares within `eps`.
    pub fn close_to(&self, other: &ComplexValue, eps: f64) -> bool {
        match (self, other) {
            (ComplexValue::Exact(a), ComplexValue::Exact(b)) => a == b,
            _ => self.distance(other) <= eps,
        }
    }

    /// Lexicographic by `(re, im)`; exact pairs are compared exactly.
    pub fn lex_cmp(&self, other: &ComplexValue) -> Ordering {
        match (self, other) {
            (ComplexValue::Exact(a), ComplexValue::Exact(b)) => a.cmp(b),
            _ => {
                let a = self.to_complex64();
                let b = other.to_complex64();
                a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
            }
        }
    }
}

impl From<GaussRat> for ComplexValue {
    fn from(g: GaussRat) -> Self {
        ComplexValue::Exact(g)
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexValue::Exact(g) => write!(f, "{g}"),
            // 17 significant digits
            ComplexValue::Approx(c) => {
                write!(f, "{:.16e}", c.re)?;
                if c.im != 0.0 {
                    if c.im.is_sign_negative() {
                        write!(f, "-{:.16e}i", -c.im)?;
                    } else {
                        write!(f, "+{:.16e}i", c.im)?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_approx(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                let re: f64 = body[..k].parse().ok()?;
                let im: f64 = body[k..].parse().ok()?;
                return Some(Complex64::new(re, im));
            }
        }
        let im: f64 = body.parse().ok()?;
        return Some(Complex64::new(0.0, im));
    }
    s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0))
}

impl FromStr for ComplexValue {
    type Err = ParseValueError;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if let Ok(g) = s.parse::<GaussRat>() {
            return Ok(ComplexValue::Exact(g));
        }
        match parse_approx(s) {
            Some(c) if c.re.is_finite() && c.im.is_finite() => Ok(ComplexValue::Approx(c)),
            _ => Err(ParseValueError::new(s, "neither an exact nor a finite decimal value")),
        }
    }
}

impl Serialize for ComplexValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ComplexValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Thresholds for every floating point decision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceFrame {
    /// Rank threshold, relative to the largest singular value.
    pub eps_rank: f64,
    /// Eigenvalue clustering radius.
    pub eps_cluster: f64,
    /// Set-equality radius.
    pub eps_set: f64,
}

impl ToleranceFrame {
    pub fn new(eps_rank: f64, eps_cluster: f64, eps_set: f64) -> Result<Self> {
        for (name, v) in [("eps_rank", eps_rank), ("eps_cluster", eps_cluster), ("eps_set", eps_set)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidTolerance(format!("{name} must be positive, got {v}")));
            }
        }
        if eps_set < eps_cluster {
            return Err(Error::InvalidTolerance(format!(
                "eps_set ({eps_set}) must not be below eps_cluster ({eps_cluster})"
            )));
        }
        Ok(ToleranceFrame {
            eps_rank,
            eps_cluster,
            eps_set,
        })
    }

    /// All three thresholds set to `eps`.
    pub fn uniform(eps: f64) -> Result<Self> {
        Self::new(eps, eps, eps)
    }
}

impl Default for ToleranceFrame {
    fn default() -> Self {
        ToleranceFrame {
            eps_rank: 1e-9,
            eps_cluster: 1e-7,
            eps_set: 1e-7,
        }
    }
}
