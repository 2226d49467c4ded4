//! The prime coefficient field: `GF(p)` for a prime `p`, or the rationals.
//!
//! Scalars do not carry their field; every operation takes the
//! [`PrimeField`] context. Rational arithmetic uses arbitrary-precision
//! normalized fractions, so intermediate swell is accepted but results
//! are exact.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A prime base field. `ch == 0` means the rationals, `ch == p` means `GF(p)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PrimeField {
    ch: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn rationals() -> Self {
        PrimeField { ch: 0 }
    }

    pub fn gf(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PrimeField { ch: p })
        } else {
            Err(Error::InvalidCharacteristic(p))
        }
    }

    /// 0 for the rationals, p for GF(p).
    pub fn characteristic(&self) -> u64 {
        self.ch
    }

    pub fn zero(&self) -> Scalar {
        match self.ch {
            0 => Scalar::Q(BigRational::zero()),
            _ => Scalar::F(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self.ch {
            0 => Scalar::Q(BigRational::one()),
            _ => Scalar::F(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self.ch {
            0 => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            p => {
                let r = n.rem_euclid(p as i64) as u64;
                Scalar::F(r)
            }
        }
    }

    /// All field elements, in a fixed order. Only for finite fields.
    pub fn elements(&self) -> Vec<Scalar> {
        assert!(self.ch != 0, "the rationals are not enumerable");
        (0..self.ch).map(Scalar::F).collect()
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ch {
            0 => write!(f, "QQ"),
            p => write!(f, "GF({p})"),
        }
    }
}

/// An element of a [`PrimeField`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Scalar {
    /// Residue mod p; always reduced to `0..p`.
    F(u64),
    /// A normalized rational.
    Q(BigRational),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::F(v) => *v == 0,
            Scalar::Q(r) => r.is_zero(),
        }
    }

    pub fn add(&self, rhs: &Scalar, k: &PrimeField) -> Scalar {
        match (self, rhs) {
            (Scalar::F(a), Scalar::F(b)) => Scalar::F(addmod(*a, *b, k.ch)),
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn sub(&self, rhs: &Scalar, k: &PrimeField) -> Scalar {
        self.add(&rhs.neg(k), k)
    }

    pub fn neg(&self, k: &PrimeField) -> Scalar {
        match self {
            Scalar::F(0) => Scalar::F(0),
            Scalar::F(a) => Scalar::F(k.ch - a),
            Scalar::Q(a) => Scalar::Q(-a),
        }
    }

    pub fn mul(&self, rhs: &Scalar, k: &PrimeField) -> Scalar {
        match (self, rhs) {
            (Scalar::F(a), Scalar::F(b)) => {
                Scalar::F(((*a as u128 * *b as u128) % k.ch as u128) as u64)
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn inv(&self, k: &PrimeField) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::NoSolution);
        }
        Ok(match self {
            Scalar::F(a) => Scalar::F(invmod(*a, k.ch)),
            Scalar::Q(a) => Scalar::Q(a.recip()),
        })
    }

    pub fn div(&self, rhs: &Scalar, k: &PrimeField) -> Result<Scalar> {
        Ok(self.mul(&rhs.inv(k)?, k))
    }

    /// Exact rational from a numerator/denominator pair (rationals only).
    pub fn ratio(num: i64, den: i64) -> Scalar {
        assert!(den != 0);
        Scalar::Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Parse from the decimal form used in config files: "3", "-2/7".
    pub fn parse(s: &str, k: &PrimeField) -> Result<Scalar> {
        let bad = || Error::Internal("unparseable scalar".to_string());
        match k.ch {
            0 => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::Q(BigRational::new(n, d)))
            }
            _ => {
                let v: i64 = s.parse().map_err(|_| bad())?;
                Ok(k.from_i64(v))
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::F(v) => write!(f, "{v}"),
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

fn invmod(a: u64, p: u64) -> u64 {
    // extended Euclid on i128
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert!(r == 1, "not invertible mod p");
    t.rem_euclid(p as i128) as u64
}

/// Magnitude proxy used by tests and display utilities.
pub fn scalar_to_string(s: &Scalar) -> String {
    s.to_string()
}
