//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! Every [`Scalar`] carries enough information to do arithmetic on its own
//! (a prime-field element remembers its modulus), so the usual operator
//! traits work without a field context. Combining elements of different
//! fields is a programming error and panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("unrecognised field descriptor `{0}` (expected `q` or `fp:P`)")]
    BadDescriptor(String),
    #[error("malformed scalar `{0}`")]
    BadScalar(String),
    #[error("scalar `{value}` cannot be mapped into {field}")]
    NotRepresentable { value: String, field: String },
}

/// The coefficient field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExactField {
    Rationals,
    Prime(u64),
}

impl ExactField {
    /// Prime field `F_p`; rejects composite or tiny moduli.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(ExactField::Prime(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            ExactField::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            ExactField::Prime(p) => Scalar::Fp { v: (v.rem_euclid(p as i64)) as u64, p },
        }
    }

    /// Maps a rational number into this field. Fails for `F_p` when the
    /// denominator is divisible by `p`.
    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar, FieldError> {
        match *self {
            ExactField::Rationals => Ok(Scalar::Q(r.clone())),
            ExactField::Prime(p) => {
                let pb = BigInt::from(p);
                let num = r.numer().mod_floor(&pb).to_u64().unwrap_or(0);
                let den = r.denom().mod_floor(&pb).to_u64().unwrap_or(0);
                if den == 0 {
                    return Err(FieldError::NotRepresentable {
                        value: r.to_string(),
                        field: self.to_string(),
                    });
                }
                Ok(Scalar::Fp { v: mul_mod(num, inv_mod(den, p), p), p })
            }
        }
    }

    /// Parses a serialized scalar: `"a"`, `"-a"` or `"a/b"` with integer
    /// `a`, `b`. Over `F_p` the value is reduced modulo `p`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, FieldError> {
        let r = parse_rational(s)?;
        self.from_rational(&r)
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            ExactField::Rationals => 0,
            ExactField::Prime(p) => p,
        }
    }

    /// Whether `s` lives in this field.
    pub fn owns(&self, s: &Scalar) -> bool {
        match (self, s) {
            (ExactField::Rationals, Scalar::Q(_)) => true,
            (ExactField::Prime(p), Scalar::Fp { p: q, .. }) => p == q,
            _ => false,
        }
    }
}

impl fmt::Display for ExactField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactField::Rationals => write!(f, "q"),
            ExactField::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for ExactField {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if t == "q" || t == "rationals" {
            return Ok(ExactField::Rationals);
        }
        if let Some(rest) = t.strip_prefix("fp:") {
            let p: u64 = rest.parse().map_err(|_| FieldError::BadDescriptor(s.to_string()))?;
            return ExactField::prime(p);
        }
        Err(FieldError::BadDescriptor(s.to_string()))
    }
}

/// An element of an [`ExactField`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> ExactField {
        match self {
            Scalar::Q(_) => ExactField::Rationals,
            Scalar::Fp { p, .. } => ExactField::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(r) => Scalar::Q(r.recip()),
            Scalar::Fp { v, p } => Scalar::Fp { v: inv_mod(*v, *p), p: *p },
        })
    }

    /// Whether the value is an integer (always true in `F_p`).
    pub fn is_integral(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_integer(),
            Scalar::Fp { .. } => true,
        }
    }

    /// Re-expresses the scalar in another field where that is a ring map
    /// (identity, or `Q -> F_p` on values with invertible denominator).
    pub fn convert(&self, target: ExactField) -> Result<Scalar, FieldError> {
        match (self, target) {
            (Scalar::Q(r), _) => target.from_rational(r),
            (Scalar::Fp { p, .. }, ExactField::Prime(q)) if *p == q => Ok(self.clone()),
            _ => Err(FieldError::NotRepresentable { value: self.to_string(), field: target.to_string() }),
        }
    }

    /// Canonical string form: `a`, `-a`, `a/b` over `Q`; `v` in `[0, p)` over `F_p`.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }

    /// Size proxy used by pivot selection: bit length of numerator plus
    /// denominator over `Q`, zero over `F_p`.
    pub fn height(&self) -> u64 {
        match self {
            Scalar::Q(r) => r.numer().bits() + r.denom().bits(),
            Scalar::Fp { .. } => 0,
        }
    }

    fn same_field(&self, other: &Scalar) {
        match (self, other) {
            (Scalar::Q(_), Scalar::Q(_)) => {}
            (Scalar::Fp { p, .. }, Scalar::Fp { p: q, .. }) if p == q => {}
            _ => panic!("mixed scalar fields: {:?} and {:?}", self.field(), other.field()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(_) => write!(f, "{self}"),
            Scalar::Fp { v, p } => write!(f, "{v} (mod {p})"),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used only for canonical sorting; it is not the field order.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => a.cmp(b),
            (Scalar::Fp { v: a, p: pa }, Scalar::Fp { v: b, p: pb }) => (pa, a).cmp(&(pb, b)),
            (Scalar::Q(_), Scalar::Fp { .. }) => Ordering::Less,
            (Scalar::Fp { .. }, Scalar::Q(_)) => Ordering::Greater,
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.same_field(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp { v: add_mod(*a, *b, *p), p: *p },
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.same_field(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => {
                Scalar::Fp { v: add_mod(*a, *p - *b, *p), p: *p }
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.same_field(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp { v: mul_mod(*a, *b, *p), p: *p },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp { v: if *v == 0 { 0 } else { p - v }, p: *p },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    let t = s.trim();
    let bad = || FieldError::BadScalar(s.to_string());
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = n.parse().map_err(|_| bad())?;
    let den: BigInt = d.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_descriptors() {
        assert_eq!("q".parse::<ExactField>().unwrap(), ExactField::Rationals);
        assert_eq!("fp:7".parse::<ExactField>().unwrap(), ExactField::Prime(7));
        assert_eq!("fp:9".parse::<ExactField>(), Err(FieldError::NotPrime(9)));
        assert!("gf4".parse::<ExactField>().is_err());
    }

    #[test]
    fn rational_arithmetic_is_normalized() {
        let q = ExactField::Rationals;
        let a = q.parse_scalar("2/4").unwrap();
        let b = q.parse_scalar("1/2").unwrap();
        assert_eq!(a, b);
        assert_eq!((&a + &b).to_string(), "1");
        assert_eq!((&a - &q.one()).to_string(), "-1/2");
        assert_eq!(a.inv().unwrap().to_string(), "2");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = ExactField::Prime(7);
        let a = f.from_i64(3);
        assert_eq!((&a * &a.inv().unwrap()), f.one());
        assert_eq!(f.from_i64(-1).to_string(), "6");
        assert_eq!(f.parse_scalar("1/2").unwrap().to_string(), "4");
        assert!(f.parse_scalar("1/7").is_err());
        assert_eq!(-&f.zero(), f.zero());
    }

    #[test]
    #[should_panic(expected = "mixed scalar fields")]
    fn mixing_fields_panics() {
        let _ = &ExactField::Rationals.one() + &ExactField::Prime(5).one();
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(10007));
    }
}
