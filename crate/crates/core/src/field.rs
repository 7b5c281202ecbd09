//! Exact coefficient fields: prime fields GF(p) and the rationals.
//!
//! A [`Coeff`] always carries enough information to know which field it lives
//! in, so arithmetic never needs a separate context. Mixing coefficients from
//! different fields is a programming error and panics.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted for GF(p).
pub const MAX_PRIME: u32 = (1 << 31) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Prime(u32),
    Rational,
}

impl Default for Field {
    fn default() -> Self {
        Field::Prime(2)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = p as u64;
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn gf(p: u32) -> Result<Field> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidField(format!("GF({p}): modulus must be a prime below 2^31")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Coeff {
        match *self {
            Field::Prime(p) => Coeff::Mod { value: 0, modulus: p },
            Field::Rational => Coeff::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        match *self {
            Field::Prime(p) => Coeff::Mod { value: v.rem_euclid(p as i64) as u32, modulus: p },
            Field::Rational => Coeff::Rational(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// Reduces a rational into this field. Fails when the denominator is not
    /// invertible modulo p.
    pub fn from_rational(&self, q: &BigRational) -> Result<Coeff> {
        match *self {
            Field::Rational => Ok(Coeff::Rational(q.clone())),
            Field::Prime(p) => {
                let pm = BigInt::from(p);
                let reduce = |x: &BigInt| -> u32 {
                    let r = x % &pm;
                    let r = if r.is_negative() { r + &pm } else { r };
                    u32::try_from(r).expect("residue below modulus")
                };
                let num = self.coeff_of_raw(reduce(q.numer()));
                let den = self.coeff_of_raw(reduce(q.denom()));
                let inv = den.inv().ok_or_else(|| Error::InvalidField(format!("{q} has no image in GF({p})")))?;
                Ok(num * inv)
            }
        }
    }

    fn coeff_of_raw(&self, value: u32) -> Coeff {
        match *self {
            Field::Prime(p) => Coeff::Mod { value, modulus: p },
            Field::Rational => Coeff::Rational(BigRational::from_integer(BigInt::from(value))),
        }
    }

    /// Parses a coefficient literal: an integer or a fraction `n/d`.
    pub fn parse_coeff(&self, s: &str) -> Result<Coeff> {
        let s = s.trim();
        let bad = || Error::InvalidField(format!("bad coefficient literal `{s}`"));
        let q = if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            BigRational::new(n, d)
        } else {
            BigRational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)
        };
        self.from_rational(&q)
    }

    /// All elements of a prime field, in residue order. `None` for the rationals.
    pub fn elements(&self) -> Option<Vec<Coeff>> {
        match *self {
            Field::Prime(p) => Some((0..p).map(|v| self.coeff_of_raw(v)).collect()),
            Field::Rational => None,
        }
    }

    pub fn characteristic(&self) -> u32 {
        match *self {
            Field::Prime(p) => p,
            Field::Rational => 0,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "GF({p})"),
            Field::Rational => write!(f, "Q"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let t = s.trim();
        if t == "Q" || t.eq_ignore_ascii_case("rational") || t.eq_ignore_ascii_case("rationals") {
            return Ok(Field::Rational);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("GF"))
            .ok_or_else(|| Error::InvalidField(format!("unknown field `{t}`")))?;
        let p: u32 = inner.parse().map_err(|_| Error::InvalidField(format!("unknown field `{t}`")))?;
        Field::gf(p)
    }
}

/// A single field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Mod { value: u32, modulus: u32 },
    Rational(BigRational),
}

impl Coeff {
    pub fn field(&self) -> Field {
        match self {
            Coeff::Mod { modulus, .. } => Field::Prime(*modulus),
            Coeff::Rational(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Mod { value, .. } => *value == 0,
            Coeff::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Mod { value, .. } => *value == 1,
            Coeff::Rational(q) => q.is_one(),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Coeff::Mod { value, modulus } => {
                // Fermat: a^(p-2)
                let p = *modulus as u64;
                let mut base = *value as u64;
                let mut exp = p - 2;
                let mut acc = 1u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    exp >>= 1;
                }
                Coeff::Mod { value: acc as u32, modulus: *modulus }
            }
            Coeff::Rational(q) => Coeff::Rational(q.recip()),
        })
    }

    /// Integer representative when the value is an integer (always for GF(p)).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Coeff::Mod { value, .. } => Some(*value as i64),
            Coeff::Rational(q) if q.is_integer() => i64::try_from(q.to_integer()).ok(),
            Coeff::Rational(_) => None,
        }
    }
}

fn same_modulus(a: u32, b: u32) -> u64 {
    assert_eq!(a, b, "coefficients from different fields");
    a as u64
}

impl Add<&Coeff> for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Mod { value: a, modulus: p }, Coeff::Mod { value: b, modulus: q }) => {
                let m = same_modulus(*p, *q);
                Coeff::Mod { value: ((*a as u64 + *b as u64) % m) as u32, modulus: *p }
            }
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a + b),
            _ => panic!("coefficients from different fields"),
        }
    }
}

impl Mul<&Coeff> for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Mod { value: a, modulus: p }, Coeff::Mod { value: b, modulus: q }) => {
                let m = same_modulus(*p, *q);
                Coeff::Mod { value: ((*a as u64 * *b as u64) % m) as u32, modulus: *p }
            }
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a * b),
            _ => panic!("coefficients from different fields"),
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Mod { value, modulus } => {
                Coeff::Mod { value: if *value == 0 { 0 } else { modulus - value }, modulus: *modulus }
            }
            Coeff::Rational(q) => Coeff::Rational(-q),
        }
    }
}

impl Sub<&Coeff> for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Coeff> for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: Coeff) -> Coeff {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Coeff> for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: &Coeff) -> Coeff {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, rhs: &Coeff) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Coeff> for Coeff {
    fn sub_assign(&mut self, rhs: &Coeff) {
        *self = &*self - rhs;
    }
}

/// Prints GF(p) values as canonical residues and rationals as `n` or `n/d`.
impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Mod { value, .. } => write!(f, "{value}"),
            Coeff::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}
