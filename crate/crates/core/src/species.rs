//! The bimodule species attached to M and its category of right modules.
//!
//! A right module is a triple (X_0, X_1, rho) with X_i a module over the
//! field at vertex i and rho : X_0 (x)_{D_0} M -> X_1 a D_1-linear
//! structure map, stored on the flat k-tensor X_0 (x)_k M. The species
//! algebra is hereditary, so homological algebra reduces to the two-term
//! map sigma(f_0, f_1) = rho_Y (f_0 (x) id) - f_1 rho_X: its kernel
//! computes Hom, its cokernel Ext^1.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bimodule::{action_poly, Bimodule};
use crate::error::{Error, Result};
use crate::field::{ExtensionField, FieldElement};
use crate::matrix::{Matrix, Quotient, Subspace};
use crate::scalar::Scalar;

/// A finite-dimensional module over a field extension, stored as a
/// k-space with the generator action.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DModule {
    pub field: ExtensionField,
    pub gen: Matrix,
}

impl DModule {
    pub fn new(field: ExtensionField, gen: Matrix) -> Result<Self> {
        let k = field.base();
        if gen.k != k || gen.rows() != gen.cols() {
            return Err(Error::FieldMismatch("module action over wrong field".to_string()));
        }
        if !action_poly(&gen, &field.defining_polynomial().coeffs, k).is_zero() {
            return Err(Error::Internal(
                "module action does not satisfy the defining polynomial".to_string(),
            ));
        }
        if gen.rows() % field.degree() != 0 {
            return Err(Error::DimensionMismatch {
                expected: field.degree(),
                got: gen.rows(),
            });
        }
        Ok(DModule { field, gen })
    }

    pub fn zero(field: ExtensionField) -> Self {
        let k = field.base();
        DModule {
            field,
            gen: Matrix::zeros(k, 0, 0),
        }
    }

    /// Free module of the given rank.
    pub fn free(field: ExtensionField, rank: usize) -> Self {
        let k = field.base();
        let d = field.degree();
        let mm = field.mult_matrix(&field.generator());
        let mut gen = Matrix::zeros(k, rank * d, rank * d);
        for b in 0..rank {
            for i in 0..d {
                for j in 0..d {
                    *gen.at_mut(b * d + i, b * d + j) = mm.at(i, j).clone();
                }
            }
        }
        DModule { field, gen }
    }

    pub fn dim_k(&self) -> usize {
        self.gen.rows()
    }

    pub fn dim_d(&self) -> usize {
        self.dim_k() / self.field.degree()
    }

    pub fn action(&self, d: &FieldElement) -> Matrix {
        action_poly(&self.gen, d, self.field.base())
    }

    /// k-basis of the space of D-linear maps.
    pub fn hom_basis(x: &DModule, y: &DModule) -> Vec<Matrix> {
        let k = x.field.base();
        let (dx, dy) = (x.dim_k(), y.dim_k());
        if dx == 0 || dy == 0 {
            return Vec::new();
        }
        let c = x
            .gen
            .transpose()
            .kronecker(&Matrix::identity(k, dy))
            .sub(&Matrix::identity(k, dx).kronecker(&y.gen));
        c.kernel_basis()
            .into_iter()
            .map(|v| Matrix::from_fn(k, dy, dx, |i, j| v[j * dy + i].clone()))
            .collect()
    }

    /// The submodule spanned (over D) by the given k-vectors, with its
    /// basis as columns of the inclusion.
    pub fn submodule(&self, span: &[Vec<Scalar>]) -> (DModule, Matrix) {
        let k = self.field.base();
        let deg = self.field.degree();
        let mut closed = Vec::new();
        for v in span {
            let mut w = v.clone();
            for _ in 0..deg {
                closed.push(w.clone());
                w = self.gen.mul_vec(&w);
            }
        }
        let sub = Subspace::from_span(k, self.dim_k(), &closed);
        let basis = sub.basis_vectors();
        let r = basis.len();
        let mut gen = Matrix::zeros(k, r, r);
        for (c, b) in basis.iter().enumerate() {
            let coords = sub
                .coords(&self.gen.mul_vec(b))
                .expect("submodule closed under the action");
            for (rr, s) in coords.into_iter().enumerate() {
                *gen.at_mut(rr, c) = s;
            }
        }
        let mut incl = Matrix::zeros(k, self.dim_k(), r);
        for (c, b) in basis.iter().enumerate() {
            for (rr, s) in b.iter().enumerate() {
                *incl.at_mut(rr, c) = s.clone();
            }
        }
        (
            DModule {
                field: self.field.clone(),
                gen,
            },
            incl,
        )
    }
}

/// A right module over the species of M.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpeciesModule {
    pub m0: DModule,
    pub m1: DModule,
    /// Structure map on the flat tensor: dim X_1 x (dim X_0 * dim M).
    pub rho: Matrix,
}

/// A morphism of species modules.
pub type Morphism = (Matrix, Matrix);

impl SpeciesModule {
    pub fn new(m0: DModule, m1: DModule, rho: Matrix, m: &Bimodule) -> Result<Self> {
        let k = m.base();
        let (d0, d1, dm) = (m0.dim_k(), m1.dim_k(), m.dim_k());
        if rho.rows() != d1 || rho.cols() != d0 * dm {
            return Err(Error::DimensionMismatch {
                expected: d0 * dm,
                got: rho.cols(),
            });
        }
        let i0 = Matrix::identity(k, d0);
        let im = Matrix::identity(k, dm);
        // balanced over D_0 and D_1-linear
        let bal = m0.gen.kronecker(&im).sub(&i0.kronecker(m.lgen()));
        if !rho.mul(&bal).is_zero() {
            return Err(Error::Internal("structure map is not balanced".to_string()));
        }
        if rho.mul(&i0.kronecker(m.rgen())) != m1.gen.mul(&rho) {
            return Err(Error::Internal(
                "structure map is not linear over the second vertex".to_string(),
            ));
        }
        Ok(SpeciesModule { m0, m1, rho })
    }

    pub fn zero(m: &Bimodule) -> Self {
        let k = m.base();
        SpeciesModule {
            m0: DModule::zero(m.left_field().clone()),
            m1: DModule::zero(m.right_field().clone()),
            rho: Matrix::zeros(k, 0, 0),
        }
    }

    /// The projective e_0 A = (D_0, M, mult).
    pub fn projective0(m: &Bimodule) -> Self {
        let k = m.base();
        let m0 = DModule::free(m.left_field().clone(), 1);
        let m1 = DModule {
            field: m.right_field().clone(),
            gen: m.rgen().clone(),
        };
        // rho : D_0 (x) M -> M is the left action
        let deg = m.left_field().degree();
        let dm = m.dim_k();
        let mut rho = Matrix::zeros(k, dm, deg * dm);
        let mut pow = Matrix::identity(k, dm);
        for l in 0..deg {
            for c in 0..dm {
                for r in 0..dm {
                    *rho.at_mut(r, l * dm + c) = pow.at(r, c).clone();
                }
            }
            if l + 1 < deg {
                pow = pow.mul(m.lgen());
            }
        }
        SpeciesModule { m0, m1, rho }
    }

    /// The projective e_1 A = (0, D_1, 0).
    pub fn projective1(m: &Bimodule) -> Self {
        let k = m.base();
        SpeciesModule {
            m0: DModule::zero(m.left_field().clone()),
            m1: DModule::free(m.right_field().clone(), 1),
            rho: Matrix::zeros(k, m.right_field().degree(), 0),
        }
    }

    /// The simple at vertex 0.
    pub fn simple0(m: &Bimodule) -> Self {
        let k = m.base();
        SpeciesModule {
            m0: DModule::free(m.left_field().clone(), 1),
            m1: DModule::zero(m.right_field().clone()),
            rho: Matrix::zeros(k, 0, m.left_field().degree() * m.dim_k()),
        }
    }

    /// The simple at vertex 1 (equal to e_1 A).
    pub fn simple1(m: &Bimodule) -> Self {
        Self::projective1(m)
    }

    pub fn dim_k(&self) -> usize {
        self.m0.dim_k() + self.m1.dim_k()
    }

    /// Dimensions over (D_0, D_1).
    pub fn dim_vector(&self) -> (usize, usize) {
        (self.m0.dim_d(), self.m1.dim_d())
    }

    pub fn is_zero(&self) -> bool {
        self.dim_k() == 0
    }

    pub fn direct_sum(&self, other: &SpeciesModule) -> SpeciesModule {
        let k = self.m0.field.base();
        let block = |a: &Matrix, b: &Matrix| -> Matrix {
            let z1 = Matrix::zeros(k, a.rows(), b.cols());
            let z2 = Matrix::zeros(k, b.rows(), a.cols());
            a.hstack(&z1).vstack(&z2.hstack(b))
        };
        let m0 = DModule {
            field: self.m0.field.clone(),
            gen: block(&self.m0.gen, &other.m0.gen),
        };
        let m1 = DModule {
            field: self.m1.field.clone(),
            gen: block(&self.m1.gen, &other.m1.gen),
        };
        // rho acts blockwise, but the flat tensor interleaves: columns of
        // the sum are indexed by ((x0 ⊕ y0) basis, M basis)
        let dm = if self.rho.cols() == 0 && other.rho.cols() == 0 {
            0
        } else if self.m0.dim_k() > 0 {
            self.rho.cols() / self.m0.dim_k()
        } else if other.m0.dim_k() > 0 {
            other.rho.cols() / other.m0.dim_k()
        } else {
            0
        };
        let d0s = self.m0.dim_k();
        let d0 = d0s + other.m0.dim_k();
        let rows = self.m1.dim_k() + other.m1.dim_k();
        let mut rho = Matrix::zeros(k, rows, d0 * dm);
        for c0 in 0..d0 {
            for cm in 0..dm {
                if c0 < d0s {
                    for r in 0..self.m1.dim_k() {
                        *rho.at_mut(r, c0 * dm + cm) = self.rho.at(r, c0 * dm + cm).clone();
                    }
                } else {
                    let cc = c0 - d0s;
                    for r in 0..other.m1.dim_k() {
                        *rho.at_mut(self.m1.dim_k() + r, c0 * dm + cm) =
                            other.rho.at(r, cc * dm + cm).clone();
                    }
                }
            }
        }
        SpeciesModule { m0, m1, rho }
    }
}

/// The operator sending vec(f0) to vec(rho_y . (f0 (x) id_M)), both
/// column-major.
fn rho_pull_operator(rho_y: &Matrix, d_x0: usize, d_y0: usize, d_m: usize, d_y1: usize) -> Matrix {
    let k = rho_y.k;
    let mut op = Matrix::zeros(k, d_y1 * d_x0 * d_m, d_y0 * d_x0);
    for r in 0..d_y1 {
        for a in 0..d_y0 {
            for cm in 0..d_m {
                let coeff = rho_y.at(r, a * d_m + cm).clone();
                if coeff.is_zero() {
                    continue;
                }
                for c0 in 0..d_x0 {
                    let row = (c0 * d_m + cm) * d_y1 + r;
                    let col = c0 * d_y0 + a;
                    let cur = op.at(row, col).add(&coeff, &k);
                    *op.at_mut(row, col) = cur;
                }
            }
        }
    }
    op
}

/// The operator sending vec(f1) to vec(f1 . rho_x), column-major.
fn rho_push_operator(rho_x: &Matrix, d_x1: usize, d_y1: usize) -> Matrix {
    let k = rho_x.k;
    let cols_flat = rho_x.cols();
    let mut op = Matrix::zeros(k, d_y1 * cols_flat, d_y1 * d_x1);
    for b in 0..d_x1 {
        for c in 0..cols_flat {
            let coeff = rho_x.at(b, c).clone();
            if coeff.is_zero() {
                continue;
            }
            for r in 0..d_y1 {
                let row = c * d_y1 + r;
                let col = b * d_y1 + r;
                let cur = op.at(row, col).add(&coeff, &k);
                *op.at_mut(row, col) = cur;
            }
        }
    }
    op
}

fn unvec(k: crate::scalar::PrimeField, rows: usize, cols: usize, v: &[Scalar]) -> Matrix {
    Matrix::from_fn(k, rows, cols, |i, j| v[j * rows + i].clone())
}

/// When rho_X is surjective, f_1 is determined by f_0 through a section,
/// so Hom(X, Y) embeds into the f_0 candidates cut out by D_0-linearity
/// and by rho_Y killing (f_0 (x) 1)(ker rho_X). This keeps the system at
/// dim X_0 * dim Y_0 unknowns, which matters for large modules where the
/// full two-component system does not fit in memory.
fn hom_space_reduced(m: &Bimodule, x: &SpeciesModule, y: &SpeciesModule) -> Option<Vec<Morphism>> {
    let k = m.base();
    let (dx0, dx1) = (x.m0.dim_k(), x.m1.dim_k());
    let (dy0, dy1) = (y.m0.dim_k(), y.m1.dim_k());
    let dm = m.dim_k();
    let n0 = dy0 * dx0;
    // a right inverse exists iff rho_X is surjective
    let sec = x.rho.solve_matrix(&Matrix::identity(k, dx1)).ok()?;
    let kerw = x.rho.kernel_basis();
    let lin0 = x
        .m0
        .gen
        .transpose()
        .kronecker(&Matrix::identity(k, dy0))
        .sub(&Matrix::identity(k, dx0).kronecker(&y.m0.gen));
    let mut sys = Matrix::zeros(k, lin0.rows() + kerw.len() * dy1, n0);
    for i in 0..lin0.rows() {
        for j in 0..n0 {
            *sys.at_mut(i, j) = lin0.at(i, j).clone();
        }
    }
    let mut row = lin0.rows();
    for w in &kerw {
        for r in 0..dy1 {
            for a in 0..dx0 {
                for b in 0..dy0 {
                    let mut c = k.zero();
                    for t in 0..dm {
                        let wa = &w[a * dm + t];
                        if wa.is_zero() {
                            continue;
                        }
                        c = c.add(&wa.mul(y.rho.at(r, b * dm + t), &k), &k);
                    }
                    *sys.at_mut(row, a * dy0 + b) = c;
                }
            }
            row += 1;
        }
    }
    let im = Matrix::identity(k, dm);
    Some(
        sys.kernel_basis()
            .into_iter()
            .map(|v| {
                let f0 = unvec(k, dy0, dx0, &v);
                let f1 = y.rho.mul(&f0.kronecker(&im)).mul(&sec);
                debug_assert!(is_morphism(m, x, y, &(f0.clone(), f1.clone())));
                (f0, f1)
            })
            .collect(),
    )
}

/// k-basis of Hom(X, Y) in the module category.
pub fn hom_space(m: &Bimodule, x: &SpeciesModule, y: &SpeciesModule) -> Vec<Morphism> {
    let k = m.base();
    let (dx0, dx1) = (x.m0.dim_k(), x.m1.dim_k());
    let (dy0, dy1) = (y.m0.dim_k(), y.m1.dim_k());
    let dm = m.dim_k();
    let n0 = dy0 * dx0;
    let n1 = dy1 * dx1;
    if n0 + n1 == 0 {
        return Vec::new();
    }
    if n0 + n1 > 4096 {
        if let Some(basis) = hom_space_reduced(m, x, y) {
            return basis;
        }
    }
    // linearity constraints at both vertices
    let lin0 = x
        .m0
        .gen
        .transpose()
        .kronecker(&Matrix::identity(k, dy0))
        .sub(&Matrix::identity(k, dx0).kronecker(&y.m0.gen));
    let lin1 = x
        .m1
        .gen
        .transpose()
        .kronecker(&Matrix::identity(k, dy1))
        .sub(&Matrix::identity(k, dx1).kronecker(&y.m1.gen));
    // intertwining with the structure maps
    let pull = rho_pull_operator(&y.rho, dx0, dy0, dm, dy1);
    let push = rho_push_operator(&x.rho, dx1, dy1);
    let rows_top = lin0.rows();
    let rows_mid = lin1.rows();
    let rows_bot = pull.rows();
    let mut sys = Matrix::zeros(k, rows_top + rows_mid + rows_bot, n0 + n1);
    for i in 0..rows_top {
        for j in 0..n0 {
            *sys.at_mut(i, j) = lin0.at(i, j).clone();
        }
    }
    for i in 0..rows_mid {
        for j in 0..n1 {
            *sys.at_mut(rows_top + i, n0 + j) = lin1.at(i, j).clone();
        }
    }
    for i in 0..rows_bot {
        for j in 0..n0 {
            *sys.at_mut(rows_top + rows_mid + i, j) = pull.at(i, j).clone();
        }
        for j in 0..n1 {
            *sys.at_mut(rows_top + rows_mid + i, n0 + j) = push.at(i, j).neg(&k);
        }
    }
    sys.kernel_basis()
        .into_iter()
        .map(|v| {
            let f0 = unvec(k, dy0, dx0, &v[..n0]);
            let f1 = unvec(k, dy1, dx1, &v[n0..]);
            (f0, f1)
        })
        .collect()
}

/// Ext^1(X, Y) presented as a quotient of the space E of candidate
/// cocycles (D_1-linear balanced maps X_0 (x) M -> Y_1) by the image of
/// sigma.
#[derive(Clone, Debug)]
pub struct Ext1 {
    /// Basis of E, each a matrix dim Y_1 x (dim X_0 * dim M).
    pub e_basis: Vec<Matrix>,
    /// Columns are the vectorized basis elements; used to take coordinates.
    stack: Matrix,
    pub quot: Quotient,
}

impl Ext1 {
    pub fn dim_k(&self) -> usize {
        self.quot.dim()
    }

    /// Coordinates of a cocycle in the E-basis.
    pub fn e_coords(&self, cocycle: &Matrix) -> Result<Vec<Scalar>> {
        let rows = cocycle.rows();
        let mut v = Vec::with_capacity(rows * cocycle.cols());
        for j in 0..cocycle.cols() {
            for i in 0..rows {
                v.push(cocycle.at(i, j).clone());
            }
        }
        if self.e_basis.is_empty() {
            return if v.iter().all(|c| c.is_zero()) {
                Ok(Vec::new())
            } else {
                Err(Error::NoSolution)
            };
        }
        self.stack.solve(&v)
    }

    /// The class of a cocycle in Ext^1.
    pub fn class_of(&self, cocycle: &Matrix) -> Result<Vec<Scalar>> {
        Ok(self.quot.project(&self.e_coords(cocycle)?))
    }

    /// A cocycle representing the given class.
    pub fn representative(&self, class: &[Scalar]) -> Matrix {
        let coords = self.quot.lift(class);
        let k = self.stack.k;
        let (rows, cols) = if let Some(b) = self.e_basis.first() {
            (b.rows(), b.cols())
        } else {
            (0, 0)
        };
        let mut acc = Matrix::zeros(k, rows, cols);
        for (c, b) in coords.iter().zip(&self.e_basis) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }
}

pub fn ext1(m: &Bimodule, x: &SpeciesModule, y: &SpeciesModule) -> Ext1 {
    let k = m.base();
    let dx0 = x.m0.dim_k();
    let dy1 = y.m1.dim_k();
    let dm = m.dim_k();
    let flat = dx0 * dm;
    // E: D_1-linear balanced maps on the flat tensor
    let e_basis: Vec<Matrix> = if dy1 == 0 || flat == 0 {
        Vec::new()
    } else {
        let i0 = Matrix::identity(k, dx0);
        let im = Matrix::identity(k, dm);
        let bal = x.m0.gen.kronecker(&im).sub(&i0.kronecker(m.lgen()));
        // c . bal = 0  and  c . (I (x) rgen) = gen_y1 . c, vectorized
        // column-major via vec(c A) = (A^T (x) I) vec(c)
        let idy = Matrix::identity(k, dy1);
        let c1 = bal.transpose().kronecker(&idy);
        let tw = i0.kronecker(m.rgen());
        let c2 = tw
            .transpose()
            .kronecker(&idy)
            .sub(&Matrix::identity(k, flat).kronecker(&y.m1.gen));
        let sys = c1.vstack(&c2);
        sys.kernel_basis()
            .into_iter()
            .map(|v| unvec(k, dy1, flat, &v))
            .collect()
    };
    let e_dim = e_basis.len();
    let stack = {
        let mut s = Matrix::zeros(k, dy1 * flat, e_dim);
        for (c, b) in e_basis.iter().enumerate() {
            for j in 0..flat {
                for i in 0..dy1 {
                    *s.at_mut(j * dy1 + i, c) = b.at(i, j).clone();
                }
            }
        }
        s
    };
    // image of sigma over the hom spaces at the two vertices
    let h0 = DModule::hom_basis(&x.m0, &y.m0);
    let h1 = DModule::hom_basis(&x.m1, &y.m1);
    let mut span = Vec::new();
    let coords_of = |c: &Matrix| -> Vec<Scalar> {
        let mut v = Vec::with_capacity(dy1 * flat);
        for j in 0..flat {
            for i in 0..dy1 {
                v.push(c.at(i, j).clone());
            }
        }
        stack.solve(&v).expect("sigma image lies in E")
    };
    if e_dim > 0 {
        let im = Matrix::identity(k, dm);
        for f0 in &h0 {
            let c = y.rho.mul(&f0.kronecker(&im));
            span.push(coords_of(&c));
        }
        for f1 in &h1 {
            let c = f1.mul(&x.rho);
            span.push(coords_of(&c));
        }
    }
    let quot = Quotient::by_span(k, e_dim, &span);
    Ext1 {
        e_basis,
        stack,
        quot,
    }
}

/// Kernel of a morphism, with its inclusion.
pub fn kernel(m: &Bimodule, x: &SpeciesModule, _y: &SpeciesModule, f: &Morphism) -> (SpeciesModule, Morphism) {
    let k = m.base();
    let k0 = Subspace::from_span(k, x.m0.dim_k(), &f.0.kernel_basis());
    let k1 = Subspace::from_span(k, x.m1.dim_k(), &f.1.kernel_basis());
    submodule_on_subspaces(m, x, &k0, &k1)
}

/// Build the submodule structure on a pair of action-stable subspaces.
fn submodule_on_subspaces(
    m: &Bimodule,
    x: &SpeciesModule,
    s0: &Subspace,
    s1: &Subspace,
) -> (SpeciesModule, Morphism) {
    let k = m.base();
    let dm = m.dim_k();
    let basis0 = s0.basis_vectors();
    let basis1 = s1.basis_vectors();
    let (r0, r1) = (basis0.len(), basis1.len());
    let coords = |s: &Subspace, v: &[Scalar]| -> Vec<Scalar> {
        s.coords(v).expect("subspace is action stable")
    };
    let gen_on = |s: &Subspace, basis: &[Vec<Scalar>], gen: &Matrix| -> Matrix {
        let mut out = Matrix::zeros(k, basis.len(), basis.len());
        for (c, b) in basis.iter().enumerate() {
            for (r, v) in coords(s, &gen.mul_vec(b)).into_iter().enumerate() {
                *out.at_mut(r, c) = v;
            }
        }
        out
    };
    let m0 = DModule {
        field: x.m0.field.clone(),
        gen: gen_on(s0, &basis0, &x.m0.gen),
    };
    let m1 = DModule {
        field: x.m1.field.clone(),
        gen: gen_on(s1, &basis1, &x.m1.gen),
    };
    let mut rho = Matrix::zeros(k, r1, r0 * dm);
    for (c0, b) in basis0.iter().enumerate() {
        for cm in 0..dm {
            let mut flat = vec![k.zero(); x.m0.dim_k() * dm];
            for (i, s) in b.iter().enumerate() {
                flat[i * dm + cm] = s.clone();
            }
            let img = x.rho.mul_vec(&flat);
            for (r, v) in coords(s1, &img).into_iter().enumerate() {
                *rho.at_mut(r, c0 * dm + cm) = v;
            }
        }
    }
    let incl0 = Matrix::from_fn(k, x.m0.dim_k(), r0, |i, j| basis0[j][i].clone());
    let incl1 = Matrix::from_fn(k, x.m1.dim_k(), r1, |i, j| basis1[j][i].clone());
    (SpeciesModule { m0, m1, rho }, (incl0, incl1))
}

/// Cokernel of a morphism, with its projection.
pub fn cokernel(m: &Bimodule, _x: &SpeciesModule, y: &SpeciesModule, f: &Morphism) -> (SpeciesModule, Morphism) {
    let k = m.base();
    let dm = m.dim_k();
    let q0 = Quotient::by_span(k, y.m0.dim_k(), &columns(&f.0));
    let q1 = Quotient::by_span(k, y.m1.dim_k(), &columns(&f.1));
    let p0 = q0.projection_matrix();
    let p1 = q1.projection_matrix();
    let l0 = q0.lift_matrix();
    let l1 = q1.lift_matrix();
    let m0 = DModule {
        field: y.m0.field.clone(),
        gen: p0.mul(&y.m0.gen).mul(&l0),
    };
    let m1 = DModule {
        field: y.m1.field.clone(),
        gen: p1.mul(&y.m1.gen).mul(&l1),
    };
    // induced structure map on representatives
    let rho = p1.mul(&y.rho).mul(&l0.kronecker(&Matrix::identity(k, dm)));
    (SpeciesModule { m0, m1, rho }, (p0, p1))
}

fn columns(m: &Matrix) -> Vec<Vec<Scalar>> {
    (0..m.cols()).map(|j| m.col(j)).collect()
}

/// Coordinates of a morphism in a k-basis of its hom space.
pub fn morphism_coords(
    k: crate::scalar::PrimeField,
    basis: &[Morphism],
    f: &Morphism,
) -> Result<Vec<Scalar>> {
    let vecm = |g: &Morphism| -> Vec<Scalar> {
        let mut v = Vec::new();
        for mat in [&g.0, &g.1] {
            for j in 0..mat.cols() {
                for i in 0..mat.rows() {
                    v.push(mat.at(i, j).clone());
                }
            }
        }
        v
    };
    let target = vecm(f);
    if basis.is_empty() {
        return if target.iter().all(|c| c.is_zero()) {
            Ok(Vec::new())
        } else {
            Err(Error::NoSolution)
        };
    }
    let mut sys = Matrix::zeros(k, target.len(), basis.len());
    for (c, b) in basis.iter().enumerate() {
        for (r, s) in vecm(b).into_iter().enumerate() {
            *sys.at_mut(r, c) = s;
        }
    }
    sys.solve(&target)
}

/// Middle term of the extension of X by Y classified by the cocycle
/// c : X_0 (x) M -> Y_1, so that 0 -> Y -> E -> X -> 0.
pub fn extension_module(
    m: &Bimodule,
    x: &SpeciesModule,
    y: &SpeciesModule,
    cocycle: &Matrix,
) -> Result<SpeciesModule> {
    let k = m.base();
    let dm = m.dim_k();
    let sum = y.direct_sum(x);
    let (dy0, dy1) = (y.m0.dim_k(), y.m1.dim_k());
    let dx0 = x.m0.dim_k();
    let mut rho = sum.rho.clone();
    // add the off-diagonal block Y_1 <- X_0 (x) M
    for c0 in 0..dx0 {
        for cm in 0..dm {
            for r in 0..dy1 {
                let cur = rho
                    .at(r, (dy0 + c0) * dm + cm)
                    .add(cocycle.at(r, c0 * dm + cm), &k);
                *rho.at_mut(r, (dy0 + c0) * dm + cm) = cur;
            }
        }
    }
    SpeciesModule::new(sum.m0, sum.m1, rho, m)
}

/// Transport the module structure through a random invertible k-linear
/// basis change at both vertices; the result is isomorphic to the input
/// but presented in scrambled coordinates.
pub fn random_basis_change(m: &Bimodule, x: &SpeciesModule, seed: u64) -> SpeciesModule {
    let k = m.base();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_invertible = |n: usize| -> Matrix {
        loop {
            let g = Matrix::from_fn(k, n, n, |_, _| {
                if k.characteristic() == 0 {
                    k.from_i64(rng.gen_range(-5..=5))
                } else {
                    k.from_i64(rng.gen_range(0..k.characteristic() as i64))
                }
            });
            if n == 0 || g.inverse().is_ok() {
                return g;
            }
        }
    };
    let g0 = random_invertible(x.m0.dim_k());
    let g1 = random_invertible(x.m1.dim_k());
    let g0i = if x.m0.dim_k() == 0 { g0.clone() } else { g0.inverse().unwrap() };
    let g1i = if x.m1.dim_k() == 0 { g1.clone() } else { g1.inverse().unwrap() };
    let m0 = DModule {
        field: x.m0.field.clone(),
        gen: g0.mul(&x.m0.gen).mul(&g0i),
    };
    let m1 = DModule {
        field: x.m1.field.clone(),
        gen: g1.mul(&x.m1.gen).mul(&g1i),
    };
    let rho = g1
        .mul(&x.rho)
        .mul(&g0i.kronecker(&Matrix::identity(k, m.dim_k())));
    SpeciesModule { m0, m1, rho }
}

/// Does the pair of component maps define a morphism X -> Y?
pub fn is_morphism(m: &Bimodule, x: &SpeciesModule, y: &SpeciesModule, f: &Morphism) -> bool {
    let im = Matrix::identity(m.base(), m.dim_k());
    f.0.mul(&x.m0.gen) == y.m0.gen.mul(&f.0)
        && f.1.mul(&x.m1.gen) == y.m1.gen.mul(&f.1)
        && f.1.mul(&x.rho) == y.rho.mul(&f.0.kronecker(&im))
}

/// Search for an isomorphism X -> Y; mirrors the bimodule-level witness
/// search (exhaustive over small finite fields, seeded small coefficients
/// otherwise).
pub fn find_isomorphism(
    m: &Bimodule,
    x: &SpeciesModule,
    y: &SpeciesModule,
    seed: u64,
) -> Option<Morphism> {
    if x.m0.dim_k() != y.m0.dim_k() || x.m1.dim_k() != y.m1.dim_k() {
        return None;
    }
    if x.is_zero() {
        let k = m.base();
        return Some((Matrix::zeros(k, 0, 0), Matrix::zeros(k, 0, 0)));
    }
    let homs = hom_space(m, x, y);
    if homs.is_empty() {
        return None;
    }
    let k = m.base();
    let invertible = |f: &Morphism| -> bool {
        (f.0.rows() == 0 || f.0.inverse().is_ok()) && (f.1.rows() == 0 || f.1.inverse().is_ok())
    };
    for h in &homs {
        if invertible(h) {
            return Some(h.clone());
        }
    }
    let combine = |coeffs: &[Scalar]| -> Morphism {
        let mut f0 = Matrix::zeros(k, y.m0.dim_k(), x.m0.dim_k());
        let mut f1 = Matrix::zeros(k, y.m1.dim_k(), x.m1.dim_k());
        for (c, h) in coeffs.iter().zip(&homs) {
            if !c.is_zero() {
                f0 = f0.add(&h.0.scale(c));
                f1 = f1.add(&h.1.scale(c));
            }
        }
        (f0, f1)
    };
    let p = k.characteristic();
    let r = homs.len();
    if p != 0 && (p as u128).pow(r as u32) <= 200_000 {
        let total = (p as usize).pow(r as u32);
        for mut idx in 0..total {
            let mut coeffs = Vec::with_capacity(r);
            for _ in 0..r {
                coeffs.push(k.from_i64((idx % p as usize) as i64));
                idx /= p as usize;
            }
            let cand = combine(&coeffs);
            if invertible(&cand) {
                return Some(cand);
            }
        }
        None
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..500 {
            let coeffs: Vec<Scalar> = (0..r)
                .map(|_| k.from_i64(rng.gen_range(-9..=9)))
                .collect();
            let cand = combine(&coeffs);
            if invertible(&cand) {
                return Some(cand);
            }
        }
        None
    }
}

/// Is the endomorphism (as the pair of component matrices) nilpotent?
fn is_nilpotent(f: &Morphism) -> bool {
    let n = f.0.rows() + f.1.rows();
    let mut p0 = f.0.clone();
    let mut p1 = f.1.clone();
    for _ in 0..n {
        if p0.is_zero() && p1.is_zero() {
            return true;
        }
        p0 = p0.mul(&f.0);
        p1 = p1.mul(&f.1);
    }
    p0.is_zero() && p1.is_zero()
}

/// Indecomposability via the local-endomorphism-ring criterion. Over a
/// small finite field the endomorphism ring is searched exhaustively for
/// nontrivial idempotents; over the rationals Fitting's lemma is applied
/// to seeded random endomorphisms (an element that is neither invertible
/// nor nilpotent splits the module).
pub fn is_indecomposable(m: &Bimodule, x: &SpeciesModule, seed: u64) -> bool {
    if x.is_zero() {
        return false;
    }
    let ends = hom_space(m, x, x);
    if ends.len() == 1 {
        return true;
    }
    let k = m.base();
    let invertible = |f: &Morphism| -> bool {
        (f.0.rows() == 0 || f.0.inverse().is_ok()) && (f.1.rows() == 0 || f.1.inverse().is_ok())
    };
    let combine = |coeffs: &[Scalar]| -> Morphism {
        let mut f0 = Matrix::zeros(k, x.m0.dim_k(), x.m0.dim_k());
        let mut f1 = Matrix::zeros(k, x.m1.dim_k(), x.m1.dim_k());
        for (c, h) in coeffs.iter().zip(&ends) {
            if !c.is_zero() {
                f0 = f0.add(&h.0.scale(c));
                f1 = f1.add(&h.1.scale(c));
            }
        }
        (f0, f1)
    };
    let p = k.characteristic();
    let r = ends.len();
    if p != 0 && (p as u128).pow(r as u32) <= 1 << 20 {
        // look for a nontrivial idempotent
        let total = (p as usize).pow(r as u32);
        for mut idx in 1..total {
            let mut coeffs = Vec::with_capacity(r);
            for _ in 0..r {
                coeffs.push(k.from_i64((idx % p as usize) as i64));
                idx /= p as usize;
            }
            let e = combine(&coeffs);
            let zero0 = e.0.is_zero() && e.1.is_zero();
            let ident = e.0.is_identity() && e.1.is_identity();
            if !zero0 && !ident && e.0.mul(&e.0) == e.0 && e.1.mul(&e.1) == e.1 {
                return false;
            }
        }
        true
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let coeffs: Vec<Scalar> = (0..r)
                .map(|_| k.from_i64(rng.gen_range(-9..=9)))
                .collect();
            let f = combine(&coeffs);
            if !invertible(&f) && !is_nilpotent(&f) {
                return false;
            }
        }
        true
    }
}

/// Try to split off a copy of `l` from `x`: returns the retraction data
/// and the complement if some section splits.
pub fn split_off(
    m: &Bimodule,
    x: &SpeciesModule,
    l: &SpeciesModule,
    seed: u64,
) -> Option<SpeciesModule> {
    if l.is_zero() || l.dim_k() > x.dim_k() {
        return None;
    }
    let k = m.base();
    let sections = hom_space(m, l, x);
    if sections.is_empty() {
        return None;
    }
    let try_section = |s: &Morphism| -> Option<SpeciesModule> {
        // solve r . s = id linearly in r over Hom(X, L)
        let retr = hom_space(m, x, l);
        if retr.is_empty() {
            return None;
        }
        // coefficient system: sum_i c_i (r_i . s) = id on both components
        let n = l.m0.dim_k() * l.m0.dim_k() + l.m1.dim_k() * l.m1.dim_k();
        let mut sys = Matrix::zeros(k, n, retr.len());
        let mut rhs = Vec::with_capacity(n);
        for (ci, r) in retr.iter().enumerate() {
            let c0 = r.0.mul(&s.0);
            let c1 = r.1.mul(&s.1);
            let mut row = 0usize;
            for j in 0..l.m0.dim_k() {
                for i in 0..l.m0.dim_k() {
                    *sys.at_mut(row, ci) = c0.at(i, j).clone();
                    row += 1;
                }
            }
            for j in 0..l.m1.dim_k() {
                for i in 0..l.m1.dim_k() {
                    *sys.at_mut(row, ci) = c1.at(i, j).clone();
                    row += 1;
                }
            }
        }
        for j in 0..l.m0.dim_k() {
            for i in 0..l.m0.dim_k() {
                rhs.push(if i == j { k.one() } else { k.zero() });
            }
        }
        for j in 0..l.m1.dim_k() {
            for i in 0..l.m1.dim_k() {
                rhs.push(if i == j { k.one() } else { k.zero() });
            }
        }
        let sol = sys.solve(&rhs).ok()?;
        let mut r0 = Matrix::zeros(k, l.m0.dim_k(), x.m0.dim_k());
        let mut r1 = Matrix::zeros(k, l.m1.dim_k(), x.m1.dim_k());
        for (c, r) in sol.iter().zip(&retr) {
            if !c.is_zero() {
                r0 = r0.add(&r.0.scale(c));
                r1 = r1.add(&r.1.scale(c));
            }
        }
        // complement is the kernel of the idempotent s . r
        let p0 = s.0.mul(&r0);
        let p1 = s.1.mul(&r1);
        let k0 = Subspace::from_span(k, x.m0.dim_k(), &p0.kernel_basis());
        let k1 = Subspace::from_span(k, x.m1.dim_k(), &p1.kernel_basis());
        let (comp, _) = submodule_on_subspaces(m, x, &k0, &k1);
        Some(comp)
    };
    // try basis sections first, then seeded random combinations
    for s in &sections {
        if let Some(c) = try_section(s) {
            return Some(c);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let coeffs: Vec<Scalar> = (0..sections.len())
            .map(|_| k.from_i64(rng.gen_range(-5..=5)))
            .collect();
        let mut s0 = Matrix::zeros(k, x.m0.dim_k(), l.m0.dim_k());
        let mut s1 = Matrix::zeros(k, x.m1.dim_k(), l.m1.dim_k());
        for (c, h) in coeffs.iter().zip(&sections) {
            if !c.is_zero() {
                s0 = s0.add(&h.0.scale(c));
                s1 = s1.add(&h.1.scale(c));
            }
        }
        if let Some(c) = try_section(&(s0, s1)) {
            return Some(c);
        }
    }
    None
}

/// Decompose `x` against a list of candidate indecomposables: returns the
/// multiplicity of each candidate and the undecomposed remainder.
pub fn decompose_against_list(
    m: &Bimodule,
    x: &SpeciesModule,
    candidates: &[SpeciesModule],
    seed: u64,
) -> (Vec<usize>, SpeciesModule) {
    let mut counts = vec![0usize; candidates.len()];
    let mut rest = x.clone();
    let mut progress = true;
    while progress && !rest.is_zero() {
        progress = false;
        for (i, l) in candidates.iter().enumerate() {
            if let Some(comp) = split_off(m, &rest, l, seed.wrapping_add(i as u64)) {
                counts[i] += 1;
                rest = comp;
                progress = true;
                break;
            }
        }
    }
    (counts, rest)
}
