//! Exact scalars: arbitrary-precision rationals and prime-field residues.
//!
//! A [`Field`] is the arithmetic context; a [`Scalar`] is raw data tagged
//! with enough information to detect cross-field mixing at API boundaries.
//! All arithmetic is exact — there is no floating point anywhere in the
//! engine.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::Serialize;
use std::fmt;

/// The ground field: ℚ or 𝔽p for a prime p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Field {
    Rationals,
    Prime(u64),
}

/// An element of a [`Field`]. Rationals are kept reduced with positive
/// denominator (the representation `BigRational` maintains); residues lie
/// in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, prime: u64 },
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

impl Field {
    /// Prime field constructor; rejects composite moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        self.from_integer(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_integer(1)
    }

    pub fn from_integer(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => {
                let p = *p;
                let r = n.rem_euclid(p as i64) as u64;
                Scalar::Residue { value: r, prime: p }
            }
        }
    }

    /// `n/d` in this field. In 𝔽p the denominator is inverted mod p.
    pub fn from_ratio(&self, n: i64, d: i64) -> Result<Scalar> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        match self {
            Field::Rationals => Ok(Scalar::Rational(BigRational::new(
                BigInt::from(n),
                BigInt::from(d),
            ))),
            Field::Prime(_) => self.div(&self.from_integer(n), &self.from_integer(d)),
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        matches!(
            (self, s),
            (Field::Rationals, Scalar::Rational(_)),
        ) || matches!((self, s), (Field::Prime(p), Scalar::Residue { prime, .. }) if p == prime)
    }

    fn expect(&self, s: &Scalar) {
        debug_assert!(self.contains(s), "scalar {s} does not belong to {self}");
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.expect(a);
        self.expect(b);
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (Scalar::Residue { value: x, prime: p }, Scalar::Residue { value: y, .. }) => {
                Scalar::Residue {
                    value: ((*x as u128 + *y as u128) % *p as u128) as u64,
                    prime: *p,
                }
            }
            _ => unreachable!("mixed-field scalars past the boundary check"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.expect(a);
        match a {
            Scalar::Rational(x) => Scalar::Rational(-x),
            Scalar::Residue { value, prime } => Scalar::Residue {
                value: if *value == 0 { 0 } else { prime - value },
                prime: *prime,
            },
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.expect(a);
        self.expect(b);
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (Scalar::Residue { value: x, prime: p }, Scalar::Residue { value: y, .. }) => {
                Scalar::Residue {
                    value: ((*x as u128 * *y as u128) % *p as u128) as u64,
                    prime: *p,
                }
            }
            _ => unreachable!("mixed-field scalars past the boundary check"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        self.expect(a);
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match a {
            Scalar::Rational(x) => Scalar::Rational(x.recip()),
            Scalar::Residue { value, prime } => {
                // extended Euclid on (value, prime)
                let (mut r0, mut r1) = (*value as i128, *prime as i128);
                let (mut s0, mut s1) = (1i128, 0i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                debug_assert_eq!(r0, 1);
                Scalar::Residue {
                    value: s0.rem_euclid(*prime as i128) as u64,
                    prime: *prime,
                }
            }
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Raise −1 to the given exponent; the workhorse of every Koszul sign.
    pub fn sign(&self, exponent: i64) -> Scalar {
        if exponent.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_integer(-1)
        }
    }
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(x) => x.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(x) => x.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Residue { prime, .. } => Field::Prime(*prime),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp {p}"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else if x.is_negative() {
                    write!(f, "-{}/{}", x.numer().abs(), x.denom())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(Field::prime(2).is_ok());
        assert!(Field::prime(5).is_ok());
        assert!(Field::prime(97).is_ok());
        assert!(matches!(Field::prime(1), Err(Error::NotPrime(1))));
        assert!(matches!(Field::prime(91), Err(Error::NotPrime(91))));
    }

    #[test]
    fn fp_arithmetic() {
        let f = Field::prime(5).unwrap();
        let two = f.from_integer(2);
        let three = f.from_integer(3);
        assert!(f.mul(&two, &three).is_one());
        assert_eq!(f.add(&two, &three), f.zero());
        assert_eq!(f.inv(&two).unwrap(), three);
        assert_eq!(f.from_integer(-1), f.from_integer(4));
    }

    #[test]
    fn rational_reduction() {
        let f = Field::Rationals;
        let a = f.from_ratio(2, 4).unwrap();
        let b = f.from_ratio(1, 2).unwrap();
        assert_eq!(a, b);
        let c = f.from_ratio(1, -2).unwrap();
        assert_eq!(f.add(&b, &c), f.zero());
        assert_eq!(format!("{}", c), "-1/2");
        assert_eq!(format!("{}", f.from_integer(7)), "7");
    }

    #[test]
    fn field_membership() {
        let q = Field::Rationals;
        let f5 = Field::prime(5).unwrap();
        assert!(q.contains(&q.one()));
        assert!(!q.contains(&f5.one()));
        assert!(!f5.contains(&Field::prime(7).unwrap().one()));
    }

    #[test]
    fn koszul_sign() {
        let q = Field::Rationals;
        assert!(q.sign(0).is_one());
        assert!(q.sign(2).is_one());
        assert_eq!(q.sign(1), q.from_integer(-1));
        assert_eq!(q.sign(-3), q.from_integer(-1));
    }
}
