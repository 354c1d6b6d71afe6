//! Exact scalars: arbitrary-precision rationals and prime fields.
//!
//! Every scalar carries the field it lives in; mixing fields is a programming
//! error and panics in arithmetic, while user-facing entry points validate
//! fields up front and return [`FieldError`] instead. Rationals are kept
//! reduced by construction, prime-field values reduced mod `p`, so `==` is
//! exact structural equality in both cases.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::fmt;
use thiserror::Error;

/// Coefficient field: `Q` or `F_p` for a prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse {text:?} as an element of {field}")]
    Parse { field: FieldSpec, text: String },
    #[error("scalar of {found} used where {expected} was required")]
    Mismatch { expected: FieldSpec, found: FieldSpec },
    #[error("unknown field spec {0:?} (expected \"rational\" or \"fp:<prime>\")")]
    UnknownSpec(String),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// Validated prime-field constructor.
    pub fn prime(p: u64) -> Result<FieldSpec, FieldError> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    /// Parses `"rational"` or `"fp:<p>"`.
    pub fn from_name(name: &str) -> Result<FieldSpec, FieldError> {
        if name == "rational" {
            return Ok(FieldSpec::Rational);
        }
        if let Some(p) = name.strip_prefix("fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| FieldError::UnknownSpec(name.to_string()))?;
            return FieldSpec::prime(p);
        }
        Err(FieldError::UnknownSpec(name.to_string()))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Fp { value: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let r = n.rem_euclid(*p as i64) as u64;
                Scalar::Fp { value: r, modulus: *p }
            }
        }
    }

    /// Parses the canonical string form: `"p/q"` or `"n"` for rationals,
    /// `"r mod p"` (or a bare residue) for prime fields.
    pub fn parse(&self, text: &str) -> Result<Scalar, FieldError> {
        let fail = || FieldError::Parse { field: *self, text: text.to_string() };
        let text = text.trim();
        match self {
            FieldSpec::Rational => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n.trim(), Some(d.trim())),
                    None => (text, None),
                };
                let n: BigInt = num.parse().map_err(|_| fail())?;
                let d: BigInt = match den {
                    Some(d) => d.parse().map_err(|_| fail())?,
                    None => BigInt::one(),
                };
                if d.is_zero() {
                    return Err(fail());
                }
                Ok(Scalar::Rational(BigRational::new(n, d)))
            }
            FieldSpec::Prime(p) => {
                let residue = match text.split_once(" mod ") {
                    Some((r, m)) => {
                        let m: u64 = m.trim().parse().map_err(|_| fail())?;
                        if m != *p {
                            return Err(fail());
                        }
                        r.trim()
                    }
                    None => text,
                };
                let r: i64 = residue.parse().map_err(|_| fail())?;
                Ok(self.from_i64(r))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            FieldSpec::Rational => "rational".to_string(),
            FieldSpec::Prime(p) => format!("fp:{p}"),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// An exact field element tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Fp { value: u64, modulus: u64 },
}

fn fp_add(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Inverse mod p by extended Euclid; `a` must be nonzero mod the prime `p`.
fn fp_inv(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "inverse of a non-unit mod {p}");
    t0.rem_euclid(p as i128) as u64
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Fp { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    fn expect_same(&self, other: &Scalar) {
        assert_eq!(
            self.field(),
            other.field(),
            "scalar arithmetic across distinct fields"
        );
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.expect_same(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, .. }) => {
                Scalar::Fp { value: fp_add(*a, *b, *p), modulus: *p }
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.expect_same(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, .. }) => {
                Scalar::Fp { value: fp_mul(*a, *b, *p), modulus: *p }
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: fp_inv(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self.mul(&i))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { value, modulus } => write!(f, "{value} mod {modulus}"),
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_stays_reduced() {
        let f = FieldSpec::Rational;
        let half = f.parse("1/2").unwrap();
        let third = f.parse("1/3").unwrap();
        let sum = half.add(&third);
        assert_eq!(sum.to_string(), "5/6");
        assert_eq!(f.parse("2/4").unwrap(), half);
        assert_eq!(half.mul(&f.from_i64(2)), f.one());
        assert_eq!(f.parse("-3/6").unwrap().to_string(), "-1/2");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldSpec::prime(5).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(4);
        assert_eq!(a.add(&b).to_string(), "2 mod 5");
        assert_eq!(a.mul(&b).to_string(), "2 mod 5");
        assert_eq!(a.inv().unwrap(), f.from_i64(2)); // 3*2 = 6 = 1 mod 5
        assert_eq!(f.from_i64(-1), f.from_i64(4));
        // Every nonzero element has a two-sided inverse.
        for v in 1..5 {
            let s = f.from_i64(v);
            assert!(s.mul(&s.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn primality_is_enforced() {
        assert_eq!(FieldSpec::prime(6), Err(FieldError::NotPrime(6)));
        assert_eq!(FieldSpec::prime(1), Err(FieldError::NotPrime(1)));
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(97).is_ok());
        assert!(FieldSpec::from_name("fp:9").is_err());
    }

    #[test]
    fn parse_round_trips() {
        let q = FieldSpec::Rational;
        for text in ["0", "7", "-7", "22/7", "-22/7"] {
            let s = q.parse(text).unwrap();
            assert_eq!(s.to_string(), text);
        }
        let f5 = FieldSpec::prime(5).unwrap();
        let s = f5.parse("3 mod 5").unwrap();
        assert_eq!(s.to_string(), "3 mod 5");
        assert_eq!(f5.parse("8").unwrap(), f5.from_i64(3));
        assert!(f5.parse("3 mod 7").is_err());
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn field_names_round_trip() {
        for f in [FieldSpec::Rational, FieldSpec::Prime(5)] {
            assert_eq!(FieldSpec::from_name(&f.name()).unwrap(), f);
        }
    }
}
