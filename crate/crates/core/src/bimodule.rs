//! Bimodules over a pair of field extensions with a common prime field,
//! their left/right duals, tensor products over the acting field, and
//! hom-space / isomorphism-witness machinery.
//!
//! A bimodule is stored as a k-vector space together with the matrices of
//! the two generator actions; actions of arbitrary field elements are
//! recovered by evaluating coefficient polynomials at the generator
//! matrices.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{ExtensionField, FieldElement};
use crate::matrix::{Matrix, Quotient, Subspace};
use crate::scalar::{PrimeField, Scalar};

/// A (D_left, D_right)-bimodule, finite dimensional over the common prime
/// field k.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bimodule {
    left: ExtensionField,
    right: ExtensionField,
    dim_k: usize,
    /// Action of the left field's generator.
    lgen: Matrix,
    /// Action of the right field's generator.
    rgen: Matrix,
}

/// Evaluate the coefficient vector `d` (a field element in the power
/// basis) at the generator-action matrix, Horner style.
pub(crate) fn action_poly(gen: &Matrix, d: &FieldElement, k: PrimeField) -> Matrix {
    let n = gen.rows();
    let mut acc = Matrix::zeros(k, n, n);
    for c in d.iter().rev() {
        acc = acc.mul(gen);
        for i in 0..n {
            let v = acc.at(i, i).add(c, &k);
            *acc.at_mut(i, i) = v;
        }
    }
    acc
}

/// Kronecker product of coordinate vectors; index of x (x) y is i*|y| + j.
pub fn vec_kron(k: &PrimeField, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.mul(y, k));
        }
    }
    out
}

pub(crate) fn unit_vec(k: PrimeField, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![k.zero(); n];
    v[i] = k.one();
    v
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Side {
    Left,
    Right,
}

impl Bimodule {
    pub fn new(
        left: ExtensionField,
        right: ExtensionField,
        lgen: Matrix,
        rgen: Matrix,
    ) -> Result<Self> {
        let k = left.base();
        if right.base() != k || lgen.k != k || rgen.k != k {
            return Err(Error::FieldMismatch(
                "bimodule fields must share the prime field".to_string(),
            ));
        }
        let dim = lgen.rows();
        if lgen.cols() != dim || rgen.rows() != dim || rgen.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: rgen.rows(),
            });
        }
        // generator actions must satisfy the defining polynomials and
        // commute with each other
        let lp = action_poly(&lgen, &left.defining_polynomial().coeffs, k);
        let rp = action_poly(&rgen, &right.defining_polynomial().coeffs, k);
        if !lp.is_zero() || !rp.is_zero() {
            return Err(Error::Internal(
                "generator action does not satisfy the defining polynomial".to_string(),
            ));
        }
        if lgen.mul(&rgen) != rgen.mul(&lgen) {
            return Err(Error::Internal(
                "left and right actions do not commute".to_string(),
            ));
        }
        if dim % left.degree() != 0 || dim % right.degree() != 0 {
            return Err(Error::DimensionMismatch {
                expected: left.degree() * right.degree(),
                got: dim,
            });
        }
        Ok(Bimodule {
            left,
            right,
            dim_k: dim,
            lgen,
            rgen,
        })
    }

    /// D as the regular (D, D)-bimodule.
    pub fn regular(f: &ExtensionField) -> Self {
        let g = f.mult_matrix(&f.generator());
        Bimodule {
            left: f.clone(),
            right: f.clone(),
            dim_k: f.degree(),
            lgen: g.clone(),
            rgen: g,
        }
    }

    /// D as a (D, k)-bimodule by restricting scalars to the prime field.
    pub fn scalar_restriction(f: &ExtensionField) -> Result<Self> {
        let prime = ExtensionField::prime(f.base().characteristic())?;
        let d = f.degree();
        Bimodule::new(
            f.clone(),
            prime,
            f.mult_matrix(&f.generator()),
            Matrix::zeros(f.base(), d, d),
        )
    }

    /// k^n as a (k, k)-bimodule.
    pub fn kronecker(k: PrimeField, n: usize) -> Result<Self> {
        let prime = ExtensionField::prime(k.characteristic())?;
        Bimodule::new(
            prime.clone(),
            prime,
            Matrix::zeros(k, n, n),
            Matrix::zeros(k, n, n),
        )
    }

    pub fn base(&self) -> PrimeField {
        self.left.base()
    }

    pub fn left_field(&self) -> &ExtensionField {
        &self.left
    }

    pub fn right_field(&self) -> &ExtensionField {
        &self.right
    }

    pub fn dim_k(&self) -> usize {
        self.dim_k
    }

    pub fn dim_left(&self) -> usize {
        self.dim_k / self.left.degree()
    }

    pub fn dim_right(&self) -> usize {
        self.dim_k / self.right.degree()
    }

    pub fn lgen(&self) -> &Matrix {
        &self.lgen
    }

    pub fn rgen(&self) -> &Matrix {
        &self.rgen
    }

    /// Matrix of the k-linear action of a left-field element.
    pub fn left_action(&self, d: &FieldElement) -> Matrix {
        action_poly(&self.lgen, d, self.base())
    }

    /// Matrix of the k-linear action of a right-field element.
    pub fn right_action(&self, d: &FieldElement) -> Matrix {
        action_poly(&self.rgen, d, self.base())
    }

    fn side_field(&self, side: Side) -> &ExtensionField {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    fn side_gen(&self, side: Side) -> &Matrix {
        match side {
            Side::Left => &self.lgen,
            Side::Right => &self.rgen,
        }
    }

    /// Free basis over the field acting on the right.
    pub fn right_basis(&self) -> Vec<Vec<Scalar>> {
        self.basis_over(Side::Right)
    }

    /// Free basis over the field acting on the left.
    pub fn left_basis(&self) -> Vec<Vec<Scalar>> {
        self.basis_over(Side::Left)
    }

    /// Greedy free basis over the field acting on the given side. The
    /// result is deterministic: standard basis vectors are taken in order
    /// whenever they are independent from the span so far.
    fn basis_over(&self, side: Side) -> Vec<Vec<Scalar>> {
        let k = self.base();
        let deg = self.side_field(side).degree();
        let gen = self.side_gen(side);
        // powers of the generator action
        let mut pows = vec![Matrix::identity(k, self.dim_k)];
        for l in 1..deg {
            pows.push(pows[l - 1].mul(gen));
        }
        let mut basis: Vec<Vec<Scalar>> = Vec::new();
        let mut span: Vec<Vec<Scalar>> = Vec::new();
        let mut sub = Subspace::from_span(k, self.dim_k, &[]);
        for i in 0..self.dim_k {
            let e = unit_vec(k, self.dim_k, i);
            if sub.contains(&e) {
                continue;
            }
            for p in &pows {
                span.push(p.mul_vec(&e));
            }
            basis.push(e);
            sub = Subspace::from_span(k, self.dim_k, &span);
        }
        assert_eq!(
            basis.len() * deg,
            self.dim_k,
            "bimodule is not free over the acting field"
        );
        basis
    }

    /// Expansion matrix for the chosen basis: coordinates of m in the
    /// flattened (basis index, power) grid, so that
    /// m = sum_{j,l} c[j*deg + l] * (x^l acting on b_j).
    fn expand_matrix(&self, side: Side, basis: &[Vec<Scalar>]) -> Matrix {
        let k = self.base();
        let deg = self.side_field(side).degree();
        let gen = self.side_gen(side);
        let mut cols = Matrix::zeros(k, self.dim_k, self.dim_k);
        for (j, b) in basis.iter().enumerate() {
            let mut v = b.clone();
            for l in 0..deg {
                for i in 0..self.dim_k {
                    *cols.at_mut(i, j * deg + l) = v[i].clone();
                }
                if l + 1 < deg {
                    v = gen.mul_vec(&v);
                }
            }
        }
        cols.inverse().expect("free basis expansion is invertible")
    }

    /// Right dual M^* = Hom(M_D, D), a (D, E)-bimodule for M an
    /// (E, D)-bimodule. Functionals are stored by their values on the
    /// chosen right D-basis of M.
    pub fn right_dual(&self) -> Result<Dual> {
        self.dual(Side::Right)
    }

    /// Left dual ^*M = Hom(_E M, E), a (D, E)-bimodule for M an
    /// (E, D)-bimodule, by values on the chosen left E-basis.
    pub fn left_dual(&self) -> Result<Dual> {
        self.dual(Side::Left)
    }

    fn dual(&self, side: Side) -> Result<Dual> {
        let k = self.base();
        let field = self.side_field(side).clone(); // codomain of functionals
        let deg = field.degree();
        let basis = self.basis_over(side);
        let r = basis.len();
        let expand = self.expand_matrix(side, &basis);
        let dim = r * deg;

        // the codomain field acts blockwise by multiplication
        let blockwise = {
            let mm = field.mult_matrix(&field.generator());
            let mut out = Matrix::zeros(k, dim, dim);
            for j in 0..r {
                for a in 0..deg {
                    for b in 0..deg {
                        *out.at_mut(j * deg + a, j * deg + b) = mm.at(a, b).clone();
                    }
                }
            }
            out
        };
        // the other field acts through the twist d . b_j = sum_i b_i c_i
        let twisted = {
            let other_gen = self.side_gen(match side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            });
            let mut out = Matrix::zeros(k, dim, dim);
            for (j, b) in basis.iter().enumerate() {
                let moved = other_gen.mul_vec(b);
                let c = expand.mul_vec(&moved);
                for i in 0..r {
                    let ci: FieldElement = c[i * deg..(i + 1) * deg].to_vec();
                    let mm = field.mult_matrix(&ci);
                    for a in 0..deg {
                        for bb in 0..deg {
                            *out.at_mut(j * deg + a, i * deg + bb) = mm.at(a, bb).clone();
                        }
                    }
                }
            }
            out
        };
        let (lf, rf, lgen, rgen) = match side {
            // (d . delta)(b) = d delta(b), (delta . e)(b) = delta(e b)
            Side::Right => (
                self.right.clone(),
                self.left.clone(),
                blockwise,
                twisted,
            ),
            // (d . gamma)(b) = gamma(b d), (gamma . e)(b) = gamma(b) e
            Side::Left => (
                self.right.clone(),
                self.left.clone(),
                twisted,
                blockwise,
            ),
        };
        let bim = Bimodule::new(lf, rf, lgen, rgen)?;
        Ok(Dual {
            bim,
            basis,
            expand,
            field,
        })
    }
}

/// A dual bimodule together with the data needed to evaluate functionals
/// on elements of the source bimodule.
#[derive(Clone, Debug)]
pub struct Dual {
    /// The dual as a bimodule in its own right.
    pub bim: Bimodule,
    /// The chosen free basis of the source bimodule.
    pub basis: Vec<Vec<Scalar>>,
    /// k-coordinates of the source -> (basis index, power) coefficients.
    pub expand: Matrix,
    /// Codomain of the functionals.
    pub field: ExtensionField,
}

impl Dual {
    /// Evaluate the functional with coordinates `delta` on the source
    /// element `m`; the result lives in the codomain field.
    pub fn eval(&self, delta: &[Scalar], m: &[Scalar]) -> FieldElement {
        let deg = self.field.degree();
        let c = self.expand.mul_vec(m);
        let mut acc = self.field.zero();
        for j in 0..self.basis.len() {
            let vj: FieldElement = delta[j * deg..(j + 1) * deg].to_vec();
            let cj: FieldElement = c[j * deg..(j + 1) * deg].to_vec();
            acc = self.field.add(&acc, &self.field.mul(&vj, &cj));
        }
        acc
    }

    /// Coordinates of the functional m -> values, i.e. the dual-basis
    /// functional of basis vector `j`.
    pub fn delta_basis(&self, j: usize) -> Vec<Scalar> {
        let deg = self.field.degree();
        unit_vec(self.bim.base(), self.basis.len() * deg, j * deg)
    }
}

/// Transpose of a bimodule map through duals: for f : X -> Y, the map
/// Y-dual -> X-dual sending delta to delta . f. Both duals must be taken
/// on the same side with the same codomain field.
pub fn dual_map(f: &Matrix, dx: &Dual, dy: &Dual) -> Matrix {
    assert_eq!(dx.field, dy.field);
    let field = &dx.field;
    let deg = field.degree();
    let k = dx.bim.base();
    let (rx, ry) = (dx.basis.len(), dy.basis.len());
    let mut out = Matrix::zeros(k, rx * deg, ry * deg);
    for (j, b) in dx.basis.iter().enumerate() {
        let c = dy.expand.mul_vec(&f.mul_vec(b));
        for i in 0..ry {
            let ci: FieldElement = c[i * deg..(i + 1) * deg].to_vec();
            let mm = field.mult_matrix(&ci);
            for a in 0..deg {
                for bb in 0..deg {
                    *out.at_mut(j * deg + a, i * deg + bb) = mm.at(a, bb).clone();
                }
            }
        }
    }
    out
}

/// Tensor product over the middle field, as a quotient of the k-tensor
/// product with an explicit projection and section.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub bim: Bimodule,
    /// dim_k(X) * dim_k(Y) -> dim of the tensor product.
    pub proj: Matrix,
    /// Section of `proj`.
    pub lift: Matrix,
}

pub fn tensor_over(x: &Bimodule, y: &Bimodule) -> Result<TensorProduct> {
    if x.right_field() != y.left_field() {
        return Err(Error::FieldMismatch(
            "tensor factors must share the middle field".to_string(),
        ));
    }
    let k = x.base();
    let (dx, dy) = (x.dim_k(), y.dim_k());
    let ix = Matrix::identity(k, dx);
    let iy = Matrix::identity(k, dy);
    // balancing relations are generated by the field generator:
    // (v . t) (x) w - v (x) (t . w)
    let bal = x.rgen().kronecker(&iy).sub(&ix.kronecker(y.lgen()));
    let span: Vec<Vec<Scalar>> = (0..bal.cols()).map(|j| bal.col(j)).collect();
    let quot = Quotient::by_span(k, dx * dy, &span);
    let proj = quot.projection_matrix();
    let lift = quot.lift_matrix();
    let lgen = proj.mul(&x.lgen().kronecker(&iy)).mul(&lift);
    let rgen = proj.mul(&ix.kronecker(y.rgen())).mul(&lift);
    let deg = x.right_field().degree();
    if quot.dim() * deg != dx * dy {
        return Err(Error::Internal(
            "tensor product has unexpected dimension".to_string(),
        ));
    }
    let bim = Bimodule::new(x.left_field().clone(), y.right_field().clone(), lgen, rgen)?;
    Ok(TensorProduct { bim, proj, lift })
}

/// Is f (as a k-matrix) a map of bimodules X -> Y?
pub fn is_bimodule_map(f: &Matrix, x: &Bimodule, y: &Bimodule) -> bool {
    x.left_field() == y.left_field()
        && x.right_field() == y.right_field()
        && f.rows() == y.dim_k()
        && f.cols() == x.dim_k()
        && f.mul(x.lgen()) == y.lgen().mul(f)
        && f.mul(x.rgen()) == y.rgen().mul(f)
}

/// k-basis of the space of bimodule maps X -> Y.
pub fn hom_bimodule(x: &Bimodule, y: &Bimodule) -> Vec<Matrix> {
    let k = x.base();
    let (dx, dy) = (x.dim_k(), y.dim_k());
    let ix = Matrix::identity(k, dx);
    let iy = Matrix::identity(k, dy);
    // vec is column-major: vec(A F B) = (B^T (x) A) vec(F)
    let c1 = x
        .lgen()
        .transpose()
        .kronecker(&iy)
        .sub(&ix.transpose().kronecker(y.lgen()));
    let c2 = x
        .rgen()
        .transpose()
        .kronecker(&iy)
        .sub(&ix.transpose().kronecker(y.rgen()));
    let constraints = c1.vstack(&c2);
    constraints
        .kernel_basis()
        .into_iter()
        .map(|v| Matrix::from_fn(k, dy, dx, |i, j| v[j * dy + i].clone()))
        .collect()
}

/// Search for an isomorphism of bimodules: over a small finite field all
/// combinations of the hom basis are tried; otherwise random small
/// coefficients drawn from a seeded generator.
pub fn find_bimodule_iso(x: &Bimodule, y: &Bimodule, seed: u64) -> Option<Matrix> {
    if x.dim_k() != y.dim_k() || x.left_field() != y.left_field() || x.right_field() != y.right_field()
    {
        return None;
    }
    let k = x.base();
    if x.dim_k() == 0 {
        return Some(Matrix::zeros(k, 0, 0));
    }
    let homs = hom_bimodule(x, y);
    if homs.is_empty() {
        return None;
    }
    for h in &homs {
        if h.inverse().is_ok() {
            return Some(h.clone());
        }
    }
    let combine = |coeffs: &[Scalar]| -> Matrix {
        let mut acc = Matrix::zeros(k, y.dim_k(), x.dim_k());
        for (c, h) in coeffs.iter().zip(&homs) {
            if !c.is_zero() {
                acc = acc.add(&h.scale(c));
            }
        }
        acc
    };
    let p = k.characteristic();
    let r = homs.len();
    if p != 0 && (p as u128).pow(r as u32) <= 200_000 {
        // exhaustive search over coefficient tuples
        let total = (p as usize).pow(r as u32);
        for mut idx in 0..total {
            let mut coeffs = Vec::with_capacity(r);
            for _ in 0..r {
                coeffs.push(k.from_i64((idx % p as usize) as i64));
                idx /= p as usize;
            }
            let cand = combine(&coeffs);
            if cand.inverse().is_ok() {
                return Some(cand);
            }
        }
        None
    } else {
        // the invertible locus is Zariski open, so random small
        // coefficients find a witness quickly whenever one exists
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..500 {
            let coeffs: Vec<Scalar> = (0..r)
                .map(|_| {
                    let c: i64 = rng.gen_range(-9..=9);
                    k.from_i64(c)
                })
                .collect();
            let cand = combine(&coeffs);
            if cand.inverse().is_ok() {
                return Some(cand);
            }
        }
        None
    }
}

/// The trace-pairing witness M -> M^**: the value of the image of m on a
/// functional delta is the unique a with tr(x a) = tr(delta(x m)) for all
/// x in the left field. Requires the trace form of the left field to be
/// nondegenerate; the result is verified to be a bimodule isomorphism.
pub fn make_double_dual_witness(m: &Bimodule, d1: &Dual, d2: &Dual) -> Result<Matrix> {
    let k = m.base();
    let e = m.left_field(); // D_0
    let d = m.right_field(); // D_1
    let deg0 = e.degree();
    let gram = e.trace_gram();
    let gram_inv = gram.inverse().map_err(|_| Error::TraceFormDegenerate)?;
    // power-basis action matrices of the left field on M
    let mut pows = vec![Matrix::identity(k, m.dim_k())];
    for l in 1..deg0 {
        pows.push(pows[l - 1].mul(m.lgen()));
    }
    let r2 = d2.basis.len(); // rank of M^* over D_0
    let mut phi = Matrix::zeros(k, r2 * deg0, m.dim_k());
    for col in 0..m.dim_k() {
        let mv = unit_vec(k, m.dim_k(), col);
        for (j, delta) in d2.basis.iter().enumerate() {
            let mut t = Vec::with_capacity(deg0);
            for p in &pows {
                let val = d1.eval(delta, &p.mul_vec(&mv)); // element of D_1
                t.push(d.trace(&val));
            }
            let u = gram_inv.mul_vec(&t);
            for (l, c) in u.into_iter().enumerate() {
                *phi.at_mut(j * deg0 + l, col) = c;
            }
        }
    }
    if !is_bimodule_map(&phi, m, &d2.bim) || phi.inverse().is_err() {
        return Err(Error::NoSymmetricDualsWitness);
    }
    Ok(phi)
}
