use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default prime for randomized checks.
pub const DEFAULT_PRIME: u64 = 10007;

/// The coefficient field of a scalar, matrix or polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Prime field `F_p`. `p` must be prime and below `2^32` so products fit in 64 bits.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
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
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::ModP {
                residue: v.rem_euclid(p as i64) as u64,
                prime: p,
            },
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match *self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::ModP {
                    residue: r.to_u64().expect("residue below p"),
                    prime: p,
                }
            }
        }
    }

    /// `num/den` in this field; fails when `den` vanishes in the field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        let inv = d.inv().ok_or(match self {
            Field::Rational => Error::DivisionByZero,
            Field::Prime(p) => Error::UnluckyPrime(*p),
        })?;
        Ok(&self.from_i64(num) * &inv)
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Field::Rational)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// An exact field element.
///
/// Rationals are kept in lowest terms with positive denominator (normalized on every
/// operation); residues lie in `[0, p)`. The arithmetic operators panic when the operands
/// live in different fields; use the `try_*` methods to get an error instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    ModP { residue: u64, prime: u64 },
}

impl Scalar {
    pub fn rational(num: i64, den: i64) -> Result<Self> {
        Field::Rational.from_ratio(num, den)
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::ModP { prime, .. } => Field::Prime(*prime),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::ModP { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::ModP { residue, .. } => *residue == 1,
        }
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field(), other.field()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        let inv = other.inv().ok_or(Error::DivisionByZero)?;
        Ok(self.mul_unchecked(&inv))
    }

    fn add_unchecked(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::ModP { residue: a, prime }, Scalar::ModP { residue: b, .. }) => {
                let s = a + b;
                Scalar::ModP {
                    residue: if s >= *prime { s - prime } else { s },
                    prime: *prime,
                }
            }
            _ => panic!("{}", Error::FieldMismatch(self.field(), other.field())),
        }
    }

    fn mul_unchecked(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::ModP { residue: a, prime }, Scalar::ModP { residue: b, prime: q })
                if prime == q =>
            {
                Scalar::ModP {
                    residue: a * b % prime,
                    prime: *prime,
                }
            }
            _ => panic!("{}", Error::FieldMismatch(self.field(), other.field())),
        }
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::ModP { residue, prime } => Scalar::ModP {
                residue: if *residue == 0 { 0 } else { prime - residue },
                prime: *prime,
            },
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::ModP { residue, prime } => Scalar::ModP {
                residue: pow_mod(*residue, prime - 2, *prime),
                prime: *prime,
            },
        })
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
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

    /// Maps the scalar into `target`. Rationals reduce modulo `p` (error if `p` divides the
    /// denominator); residues only map into their own field or lift to their canonical
    /// representative in `[0, p)` when `target` is the rationals.
    pub fn to_field(&self, target: Field) -> Result<Scalar> {
        match (self, target) {
            (Scalar::Rational(r), Field::Prime(p)) => {
                let num = target.from_bigint(r.numer());
                let den = target.from_bigint(r.denom());
                let inv = den.inv().ok_or(Error::UnluckyPrime(p))?;
                Ok(&num * &inv)
            }
            (Scalar::ModP { residue, .. }, Field::Rational) => {
                Ok(Field::Rational.from_i64(*residue as i64))
            }
            _ if self.field() == target => Ok(self.clone()),
            _ => Err(Error::FieldMismatch(self.field(), target)),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::ModP { .. } => None,
        }
    }

    /// Integer value if the scalar is an integral rational fitting in `i64`, or a residue.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rational(r) if r.is_integer() => r.numer().to_i64(),
            Scalar::Rational(_) => None,
            Scalar::ModP { residue, .. } => Some(*residue as i64),
        }
    }

    /// True for a negative rational; residues are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::ModP { .. } => false,
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Deterministic primality test by trial division (adequate below `2^32`).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::ModP { residue, .. } => write!(f, "{residue}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_unchecked(rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.add_unchecked(&rhs.neg_ref())
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_unchecked(rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = self.add_unchecked(rhs);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = self.add_unchecked(&rhs.neg_ref());
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = self.mul_unchecked(rhs);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced() {
        let a = Scalar::rational(2, 4).unwrap();
        let b = Scalar::rational(-3, -6).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "1/2");
        let c = Scalar::rational(1, -3).unwrap();
        assert_eq!(c.to_string(), "-1/3");
        assert_eq!((&a + &c).to_string(), "1/6");
    }

    #[test]
    fn modp_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(-1);
        assert_eq!(a, f.from_i64(6));
        assert_eq!((&a * &a).to_i64(), Some(1));
        let inv3 = f.from_i64(3).inv().unwrap();
        assert_eq!((&inv3 * &f.from_i64(3)), f.one());
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = Field::Rational.one();
        let b = Field::prime(11).unwrap().one();
        let c = Field::prime(13).unwrap().one();
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch(..))));
        assert!(matches!(b.try_mul(&c), Err(Error::FieldMismatch(..))));
        assert!(Field::prime(12).is_err());
    }

    #[test]
    fn reduction_mod_p() {
        let f = Field::prime(10007).unwrap();
        let half = Scalar::rational(1, 2).unwrap().to_field(f).unwrap();
        assert_eq!(&half * &f.from_i64(2), f.one());
        let bad = Scalar::rational(1, 10007).unwrap();
        assert_eq!(bad.to_field(f), Err(Error::UnluckyPrime(10007)));
    }

    #[test]
    fn primes() {
        assert!(is_prime(10007));
        assert!(is_prime(32003));
        assert_eq!(next_prime(10007), 10009);
        assert!(!is_prime(1));
    }
}
