//! Field extensions of the prime field, with elements as coefficient
//! vectors over a monic irreducible defining polynomial.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::{is_irreducible, Poly};
use crate::scalar::{PrimeField, Scalar};

/// Elements are length-`degree` coefficient vectors in the power basis
/// `1, x, ..., x^(d-1)`.
pub type FieldElement = Vec<Scalar>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtensionField {
    base: PrimeField,
    defining: Poly,
}

impl ExtensionField {
    /// `char` is 0 for the rationals or a prime; `poly` is the monic
    /// defining polynomial in ascending coefficient order.
    pub fn new(char_: u64, poly_coeffs: Vec<Scalar>) -> Result<Self> {
        let base = if char_ == 0 {
            PrimeField::rationals()
        } else {
            PrimeField::gf(char_)?
        };
        let poly = Poly::new(base, poly_coeffs);
        if poly.degree() < 1 {
            return Err(Error::NotAField("defining polynomial must have degree >= 1".to_string()));
        }
        if !poly.is_monic() {
            return Err(Error::NotAField("defining polynomial must be monic".to_string()));
        }
        if !is_irreducible(&poly)? {
            return Err(Error::NotAField(format!(
                "defining polynomial of degree {} is reducible",
                poly.degree()
            )));
        }
        Ok(ExtensionField { base, defining: poly })
    }

    /// The prime field itself, as a degree-1 extension.
    pub fn prime(char_: u64) -> Result<Self> {
        let base = if char_ == 0 {
            PrimeField::rationals()
        } else {
            PrimeField::gf(char_)?
        };
        let poly = Poly::new(base, vec![base.zero(), base.one()]); // x
        Ok(ExtensionField { base, defining: poly })
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.defining.degree()
    }

    pub fn defining_polynomial(&self) -> &Poly {
        &self.defining
    }

    pub fn zero(&self) -> FieldElement {
        vec![self.base.zero(); self.degree()]
    }

    pub fn one(&self) -> FieldElement {
        let mut e = self.zero();
        e[0] = self.base.one();
        e
    }

    /// The class of x (for degree 1 this is an element of the base).
    pub fn generator(&self) -> FieldElement {
        let mut e = self.zero();
        if self.degree() > 1 {
            e[1] = self.base.one();
        } else {
            // x = -c0 in k[x]/(x + c0)
            e[0] = self.defining.coeffs[0].neg(&self.base);
        }
        e
    }

    pub fn embed(&self, c: &Scalar) -> FieldElement {
        let mut e = self.zero();
        e[0] = c.clone();
        e
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a.iter().zip(b).map(|(x, y)| x.add(y, &self.base)).collect()
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a.iter().zip(b).map(|(x, y)| x.sub(y, &self.base)).collect()
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        a.iter().map(|x| x.neg(&self.base)).collect()
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let pa = Poly::new(self.base, a.clone());
        let pb = Poly::new(self.base, b.clone());
        let mut r = pa.mul(&pb).rem_monic(&self.defining).coeffs;
        r.resize(self.degree(), self.base.zero());
        r
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(a) {
            return Err(Error::NoSolution);
        }
        // solve (mult by a) v = 1 in the regular representation
        let m = self.mult_matrix(a);
        m.solve(&self.one())
    }

    /// k-linear matrix of left multiplication by `a` in the power basis.
    pub fn mult_matrix(&self, a: &FieldElement) -> Matrix {
        let d = self.degree();
        let mut out = Matrix::zeros(self.base, d, d);
        let mut basis_elt = self.one();
        for j in 0..d {
            let col = self.mul(a, &basis_elt);
            for i in 0..d {
                *out.at_mut(i, j) = col[i].clone();
            }
            // shift to the next power basis vector
            if j + 1 < d {
                basis_elt = self.mul(&basis_elt, &self.generator_raw());
            }
        }
        out
    }

    // x as a vector even in degree 1 representations
    fn generator_raw(&self) -> FieldElement {
        self.generator()
    }

    /// Trace of the regular representation of `a`, an element of the base.
    pub fn trace(&self, a: &FieldElement) -> Scalar {
        let m = self.mult_matrix(a);
        let mut t = self.base.zero();
        for i in 0..self.degree() {
            t = t.add(m.at(i, i), &self.base);
        }
        t
    }

    /// Gram matrix of the trace form (a, b) -> tr(ab) on the power basis.
    pub fn trace_gram(&self) -> Matrix {
        let d = self.degree();
        let mut pow = Vec::with_capacity(d);
        let mut b = self.one();
        for _ in 0..d {
            pow.push(b.clone());
            b = self.mul(&b, &self.generator_raw());
        }
        Matrix::from_fn(self.base, d, d, |i, j| self.trace(&self.mul(&pow[i], &pow[j])))
    }

    /// All field elements (finite fields only).
    pub fn elements(&self) -> Vec<FieldElement> {
        let p = self.base.characteristic();
        assert!(p != 0, "cannot enumerate an infinite field");
        let d = self.degree();
        let mut out = Vec::new();
        let total = (p as usize).pow(d as u32);
        for mut idx in 0..total {
            let mut e = self.zero();
            for c in e.iter_mut() {
                *c = Scalar::F((idx % p as usize) as u64);
                idx /= p as usize;
            }
            out.push(e);
        }
        out
    }

    /// Power basis as field elements.
    pub fn basis(&self) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.degree());
        let mut b = self.one();
        for _ in 0..self.degree() {
            out.push(b.clone());
            b = self.mul(&b, &self.generator_raw());
        }
        out
    }
}
