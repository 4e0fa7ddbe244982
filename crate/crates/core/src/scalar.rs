//! Exact scalars over the rationals and prime fields.
//!
//! A [`Scalar`] carries its field with it, so mixing elements of different
//! fields is detected at the operation rather than silently producing garbage.
//! The operator impls (`+`, `*`, ...) panic on a field mismatch; the `try_*`
//! methods report it as an error instead.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest prime modulus accepted. Products of two residues must fit in `u128`
/// comfortably and trial division must stay cheap.
pub const MAX_MODULUS: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{n} = {a}·{b} is not prime")]
    Composite { n: u64, a: u64, b: u64 },
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported maximum {MAX_MODULUS}")]
    ModulusTooLarge(u64),
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(Field, Field),
    #[error("inversion of zero")]
    InverseOfZero,
    #[error("field has only {size} elements, {requested} distinct values requested")]
    TooSmall { size: u64, requested: usize },
    #[error("cannot parse scalar {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("{value} has a denominator divisible by {p}")]
    NotReducible { value: String, p: u64 },
}

/// The base field: the rationals or a prime field GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

/// Serialized form of a field: `{"kind":"Q"}` or `{"kind":"GF","p":7}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldDescriptor {
    Q,
    GF { p: u64 },
}

fn smallest_factor(n: u64) -> Option<u64> {
    if n < 4 {
        return None;
    }
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let mut f = 3u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return Some(f);
        }
        f += 2;
    }
    None
}

impl Field {
    pub fn rationals() -> Self {
        Field::Rationals
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p < 2 {
            return Err(FieldError::NotPrime(p));
        }
        if p > MAX_MODULUS {
            return Err(FieldError::ModulusTooLarge(p));
        }
        match smallest_factor(p) {
            Some(a) => Err(FieldError::Composite { n: p, a, b: p / a }),
            None => Ok(Field::Prime(p)),
        }
    }

    pub fn from_descriptor(desc: FieldDescriptor) -> Result<Self, FieldError> {
        match desc {
            FieldDescriptor::Q => Ok(Field::Rationals),
            FieldDescriptor::GF { p } => Field::prime(p),
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        match *self {
            Field::Rationals => FieldDescriptor::Q,
            Field::Prime(p) => FieldDescriptor::GF { p },
        }
    }

    /// `None` for the rationals (infinite), `Some(p)` for GF(p).
    pub fn cardinality(&self) -> Option<u64> {
        match *self {
            Field::Rationals => None,
            Field::Prime(p) => Some(p),
        }
    }

    /// Whether the field has at least `n` elements.
    pub fn has_at_least(&self, n: u64) -> bool {
        self.cardinality().is_none_or(|c| c >= n)
    }

    pub fn zero(&self) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Rational(BigRational::zero()),
            Field::Prime(p) => Scalar::Residue { value: 0, p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Residue {
                value: v.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    /// Maps an exact rational into this field. Fails over GF(p) when the
    /// denominator vanishes mod p.
    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar, FieldError> {
        match *self {
            Field::Rationals => Ok(Scalar::Rational(r.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| -> u64 {
                    let mut m = x % &pb;
                    if m.is_negative() {
                        m += &pb;
                    }
                    m.to_u64().expect("residue fits in u64")
                };
                let num = self.residue(reduce(r.numer()));
                let den = reduce(r.denom());
                if den == 0 {
                    return Err(FieldError::NotReducible {
                        value: r.to_string(),
                        p,
                    });
                }
                Ok(num.mul(&self.residue(den).inv()?))
            }
        }
    }

    fn residue(&self, value: u64) -> Scalar {
        match *self {
            Field::Prime(p) => Scalar::Residue {
                value: value % p,
                p,
            },
            Field::Rationals => self.from_i64(value as i64),
        }
    }

    /// Parses `"num/den"`, `"n"` (rationals) or a residue (prime fields,
    /// reduced mod p; fractions are accepted when the denominator is invertible).
    pub fn parse(&self, text: &str) -> Result<Scalar, FieldError> {
        let r = parse_rational(text)?;
        self.from_rational(&r)
    }

    /// The first `count` elements 0, 1, 2, … of the field.
    pub fn distinct_scalars(&self, count: usize) -> Result<Vec<Scalar>, FieldError> {
        if let Some(size) = self.cardinality() {
            if (count as u64) > size {
                return Err(FieldError::TooSmall {
                    size,
                    requested: count,
                });
            }
        }
        Ok((0..count).map(|i| self.from_i64(i as i64)).collect())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for Field {
    type Err = FieldError;

    /// Accepts `Q` or `GF:p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rationals);
        }
        let parse_err = || FieldError::Parse {
            text: s.to_string(),
            reason: "expected Q or GF:p".into(),
        };
        let rest = s
            .strip_prefix("GF:")
            .or_else(|| s.strip_prefix("gf:"))
            .ok_or_else(parse_err)?;
        let p: u64 = rest.parse().map_err(|_| parse_err())?;
        Field::prime(p)
    }
}

pub fn parse_rational(text: &str) -> Result<BigRational, FieldError> {
    let t = text.trim();
    let err = |reason: &str| FieldError::Parse {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err("bad numerator"))?;
            let d: BigInt = d.trim().parse().map_err(|_| err("bad denominator"))?;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = t.parse().map_err(|_| err("not an integer or fraction"))?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// An exact field element. Rationals are always in lowest terms with a
/// positive denominator; residues lie in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, p: u64 },
}

fn mod_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    let m = p as u128;
    let mut acc = 1u128 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Residue { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    fn check(&self, other: &Scalar) -> Result<(), FieldError> {
        let (a, b) = (self.field(), other.field());
        if a == b {
            Ok(())
        } else {
            Err(FieldError::Mismatch(a, b))
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, p } => Scalar::Residue {
                value: (p - value) % p,
                p: *p,
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::InverseOfZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Residue { value, p } => Scalar::Residue {
                value: mod_pow(*value, p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(num_traits::pow(a.clone(), exp as usize)),
            Scalar::Residue { value, p } => Scalar::Residue {
                value: mod_pow(*value, exp as u64, *p),
                p: *p,
            },
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.try_add(other).expect("scalar field mismatch")
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.try_sub(other).expect("scalar field mismatch")
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.try_mul(other).expect("scalar field mismatch")
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.try_div(other).expect("scalar division failed")
    }

    /// Serialized text: `"num/den"` (or `"n"` for integers) over Q, the
    /// residue over GF(p).
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Rational(r) => serde_json::Value::String(r.to_string()),
            Scalar::Residue { value, .. } => serde_json::Value::from(*value),
        }
    }

    /// Inverse of [`Scalar::to_json`]. Also accepts JSON integers for rationals
    /// and strings for residues.
    pub fn from_json(field: Field, v: &serde_json::Value) -> Result<Scalar, FieldError> {
        match v {
            serde_json::Value::String(s) => field.parse(s),
            serde_json::Value::Number(n) => field.parse(&n.to_string()),
            other => Err(FieldError::Parse {
                text: other.to_string(),
                reason: "expected a string or integer".into(),
            }),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::add(self, rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::sub(self, rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::mul(self, rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = Scalar::add(self, rhs);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Scalar {
        Field::Rationals.parse(s).unwrap()
    }

    #[test]
    fn field_make() {
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rationals);
        assert_eq!(Field::prime(7).unwrap(), Field::Prime(7));
        let err = Field::prime(6).unwrap_err();
        assert_eq!(err.to_string(), "6 = 2·3 is not prime");
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(91).is_err());
        assert_eq!("GF:13".parse::<Field>().unwrap(), Field::Prime(13));
    }

    #[test]
    fn descriptor_json() {
        let d: FieldDescriptor = serde_json::from_str(r#"{"kind":"GF","p":7}"#).unwrap();
        assert_eq!(Field::from_descriptor(d).unwrap(), Field::Prime(7));
        let q: FieldDescriptor = serde_json::from_str(r#"{"kind":"Q"}"#).unwrap();
        assert_eq!(q, FieldDescriptor::Q);
        assert_eq!(
            serde_json::to_string(&Field::Prime(5).descriptor()).unwrap(),
            r#"{"kind":"GF","p":5}"#
        );
        let bad: FieldDescriptor = serde_json::from_str(r#"{"kind":"GF","p":9}"#).unwrap();
        assert!(Field::from_descriptor(bad).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(q("1/2").add(&q("1/3")), q("5/6"));
        let f7 = Field::Prime(7);
        assert_eq!(f7.from_i64(3).mul(&f7.from_i64(5)), f7.one());
        assert_eq!(q("0").inv(), Err(FieldError::InverseOfZero));
        assert_eq!(f7.zero().inv(), Err(FieldError::InverseOfZero));
        assert!(matches!(
            q("1").try_add(&f7.one()),
            Err(FieldError::Mismatch(..))
        ));
    }

    #[test]
    fn canonical_form() {
        assert_eq!(q("2/4"), q("1/2"));
        assert_eq!(q("-3/-6"), q("1/2"));
        assert_eq!(q("3/-6").to_json(), serde_json::json!("-1/2"));
        assert_eq!(Field::Prime(5).from_i64(-1).to_json(), serde_json::json!(4));
        assert_eq!(
            Field::Prime(5).parse("1/2").unwrap(),
            Field::Prime(5).from_i64(3)
        );
        assert!(Field::Prime(5).parse("1/5").is_err());
    }

    #[test]
    fn distinct_scalars() {
        let qs = Field::Rationals.distinct_scalars(5).unwrap();
        assert_eq!(
            qs,
            (0..5)
                .map(|i| Field::Rationals.from_i64(i))
                .collect::<Vec<_>>()
        );
        let f7 = Field::Prime(7).distinct_scalars(7).unwrap();
        assert_eq!(f7.len(), 7);
        for (i, a) in f7.iter().enumerate() {
            for b in &f7[i + 1..] {
                assert_ne!(a, b);
            }
        }
        let err = Field::Prime(3).distinct_scalars(4).unwrap_err();
        assert!(err.to_string().contains("field has only 3 elements"));
    }
}
