//! Dense univariate polynomials over the prime field, just enough for
//! defining polynomials of field extensions: arithmetic, evaluation and
//! the irreducibility tests the field constructor needs.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{PrimeField, Scalar};

/// Coefficients in ascending degree order; no trailing zeros except for
/// the zero polynomial, which is an empty vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    pub k: PrimeField,
    pub coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(k: PrimeField, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { k, coeffs }
    }

    pub fn zero(k: PrimeField) -> Self {
        Poly { k, coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&self.k.one())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let k = self.k;
        let mut acc = k.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x, &k).add(c, &k);
        }
        acc
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        let k = self.k;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(k);
        }
        let mut out = vec![k.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b, &k), &k);
            }
        }
        Poly::new(k, out)
    }

    /// Remainder of self divided by a monic divisor.
    pub fn rem_monic(&self, div: &Poly) -> Poly {
        assert!(div.is_monic(), "divisor must be monic");
        let k = self.k;
        let d = div.degree();
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let lead = r.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let off = r.len() - d;
            for (j, c) in div.coeffs[..d].iter().enumerate() {
                r[off + j] = r[off + j].sub(&lead.mul(c, &k), &k);
            }
        }
        Poly::new(k, r)
    }
}

/// Exhaustive irreducibility test for monic polynomials.
///
/// Over GF(p): trial division by every monic polynomial of degree up to
/// deg/2. Over the rationals: rational-root test plus, in degree 4, a
/// search for monic quadratic factors; degrees above 4 are rejected.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    if !f.is_monic() {
        return Err(Error::NotAField("defining polynomial must be monic".to_string()));
    }
    let d = f.degree();
    if d == 0 {
        return Err(Error::NotAField("constant polynomial".to_string()));
    }
    if d == 1 {
        return Ok(true);
    }
    match f.k.characteristic() {
        0 => rational_irreducible(f),
        p => {
            // guard against absurd enumeration sizes; the kernel only
            // needs small p and degree <= 4
            let half = d / 2;
            let count = (p as u128).pow(half as u32);
            if count > 1_000_000 {
                return Err(Error::DegreeCap(format!(
                    "irreducibility enumeration of {count} divisors"
                )));
            }
            for deg in 1..=half {
                let mut divisor = vec![f.k.zero(); deg + 1];
                divisor[deg] = f.k.one();
                if trial_divide(f, &mut divisor, 0) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

fn trial_divide(f: &Poly, divisor: &mut Vec<Scalar>, pos: usize) -> bool {
    let deg = divisor.len() - 1;
    if pos == deg {
        let g = Poly::new(f.k, divisor.clone());
        return f.rem_monic(&g).is_zero();
    }
    for c in f.k.elements() {
        divisor[pos] = c;
        if trial_divide(f, divisor, pos + 1) {
            return true;
        }
    }
    false
}

fn rational_irreducible(f: &Poly) -> Result<bool> {
    let d = f.degree();
    if d > 4 {
        return Err(Error::NotAField(
            "irreducibility over the rationals is only decided up to degree 4".to_string(),
        ));
    }
    if has_rational_root(f) {
        return Ok(false);
    }
    if d <= 3 {
        // no root and degree <= 3 means irreducible
        return Ok(true);
    }
    Ok(!has_quadratic_factor(f))
}

fn rat(c: &Scalar) -> BigRational {
    match c {
        Scalar::Q(r) => r.clone(),
        Scalar::F(_) => unreachable!("rational routine on GF(p) scalar"),
    }
}

fn has_rational_root(f: &Poly) -> bool {
    // clear denominators, then p/q with p | a0, q | lead
    let denoms: BigInt = f
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(&rat(c).denom().clone()));
    let ints: Vec<BigInt> = f
        .coeffs
        .iter()
        .map(|c| {
            let r = rat(c) * BigRational::from_integer(denoms.clone());
            r.to_integer()
        })
        .collect();
    let a0 = ints[0].clone();
    let lead = ints.last().unwrap().clone();
    if a0.is_zero() {
        return true; // x divides
    }
    for p in divisors(&a0.abs()) {
        for q in divisors(&lead.abs()) {
            for sign in [1i32, -1] {
                let cand = BigRational::new(p.clone() * BigInt::from(sign), q.clone());
                let x = Scalar::Q(cand);
                if f.eval(&x).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // n is a nonzero non-negative integer of desk-scale size
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let e = n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

/// Degree-4 check: x^4+ax^3+bx^2+cx+e = (x^2+px+q)(x^2+rx+s) with rational
/// coefficients. After the substitution x -> y/m clearing denominators,
/// Gauss's lemma makes any monic quadratic factor integral, so q and s run
/// over integer divisor pairs of the constant term.
fn has_quadratic_factor(f: &Poly) -> bool {
    // normalize to monic integer coefficients via x = y / m
    let m: BigInt = f.coeffs[..4]
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(&rat(c).denom().clone()));
    // coefficients of y^i in m^4 f(y/m): a_i * m^(4-i)
    let int_coeff = |i: usize| -> BigInt {
        let scale = num_traits::pow::pow(m.clone(), 4 - i);
        (rat(&f.coeffs[i]) * BigRational::from_integer(scale)).to_integer()
    };
    let e = int_coeff(0);
    let c = int_coeff(1);
    let b = int_coeff(2);
    let a = int_coeff(3);
    if e.is_zero() {
        return true; // handled by root test, but be safe
    }
    let mut qs_pairs = Vec::new();
    for q in divisors(&e.abs()) {
        if (e.clone() % &q).is_zero() {
            let s = e.clone() / &q;
            qs_pairs.push((q.clone(), s.clone()));
            qs_pairs.push((-q.clone(), -s));
        }
    }
    for (q, s) in qs_pairs {
        // p + r = a, p r = b - q - s, p s + q r = c
        let sum = a.clone();
        let prod = b.clone() - &q - &s;
        // p, r are integer roots of t^2 - sum t + prod
        let disc = sum.clone() * &sum - BigInt::from(4) * &prod;
        if disc.is_negative() {
            continue;
        }
        let root = disc.sqrt();
        if &root * &root != disc {
            continue;
        }
        for pick in [&root, &(-root.clone())] {
            let two_p = sum.clone() + pick;
            if (two_p.clone() % 2) != BigInt::zero() {
                continue;
            }
            let p: BigInt = two_p / 2;
            let r = sum.clone() - &p;
            if p.clone() * &s + q.clone() * &r == c {
                return true;
            }
        }
    }
    false
}
