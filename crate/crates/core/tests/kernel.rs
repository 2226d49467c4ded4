//! Exact-arithmetic kernel: scalars, polynomials, field extensions and
//! dense linear algebra.

use ncsym_core::field::ExtensionField;
use ncsym_core::matrix::{Matrix, Quotient, Subspace};
use ncsym_core::poly::{is_irreducible, Poly};
use ncsym_core::scalar::{PrimeField, Scalar};
use proptest::prelude::*;

fn gf(p: u64) -> PrimeField {
    PrimeField::gf(p).unwrap()
}

#[test]
fn prime_field_rejects_composites() {
    assert!(PrimeField::gf(1).is_err());
    assert!(PrimeField::gf(4).is_err());
    assert!(PrimeField::gf(91).is_err());
    assert!(PrimeField::gf(7).is_ok());
}

#[test]
fn scalar_parse_roundtrip() {
    let q = PrimeField::rationals();
    assert_eq!(Scalar::parse("-2/7", &q).unwrap(), Scalar::ratio(-2, 7));
    assert_eq!(Scalar::parse("3", &q).unwrap(), Scalar::ratio(3, 1));
    assert!(Scalar::parse("1/0", &q).is_err());
    let f = gf(5);
    assert_eq!(Scalar::parse("-1", &f).unwrap(), Scalar::F(4));
}

#[test]
fn x2_plus_1_reducible_over_gf2() {
    // (x+1)^2 = x^2 + 1 in characteristic 2
    let k = gf(2);
    let f = Poly::new(k, vec![k.one(), k.zero(), k.one()]);
    assert!(!is_irreducible(&f).unwrap());
    assert!(ExtensionField::new(2, vec![k.one(), k.zero(), k.one()]).is_err());
}

#[test]
fn gf16_arithmetic() {
    // GF(16) = GF(2)[x]/(x^4 + x + 1)
    let k = gf(2);
    let f = ExtensionField::new(2, vec![k.one(), k.one(), k.zero(), k.zero(), k.one()]).unwrap();
    assert_eq!(f.degree(), 4);
    let g = f.generator();
    // x has multiplicative order 15
    let mut pow = f.one();
    let mut order = 0;
    loop {
        pow = f.mul(&pow, &g);
        order += 1;
        if pow == f.one() {
            break;
        }
        assert!(order < 20);
    }
    assert_eq!(order, 15);
    // every nonzero element is invertible
    for a in f.elements() {
        if f.is_zero(&a) {
            assert!(f.inv(&a).is_err());
        } else {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), f.one());
        }
    }
}

#[test]
fn traces() {
    // GF(4)/GF(2): tr(1) = 2 * 1 = 0
    let k = gf(2);
    let f4 = ExtensionField::new(2, vec![k.one(), k.one(), k.one()]).unwrap();
    assert!(f4.trace(&f4.one()).is_zero());
    // but the trace form is still nondegenerate (separable extension)
    assert_eq!(f4.trace_gram().rank(), 2);

    // Q(sqrt 2): tr(1) = 2, tr(sqrt 2) = 0
    let q = PrimeField::rationals();
    let f = ExtensionField::new(0, vec![q.from_i64(-2), q.zero(), q.one()]).unwrap();
    assert_eq!(f.trace(&f.one()), q.from_i64(2));
    assert!(f.trace(&f.generator()).is_zero());
    assert_eq!(f.trace_gram().rank(), 2);

    // Q(2^(1/4)) via x^4 - 2, irreducible by the quadratic-factor search
    let f = ExtensionField::new(
        0,
        vec![q.from_i64(-2), q.zero(), q.zero(), q.zero(), q.one()],
    )
    .unwrap();
    assert_eq!(f.degree(), 4);
    assert_eq!(f.trace(&f.one()), q.from_i64(4));
    assert!(f.trace(&f.generator()).is_zero());
}

#[test]
fn degree4_factorizations_over_q() {
    let q = PrimeField::rationals();
    // x^4 + 4 = (x^2+2x+2)(x^2-2x+2): no rational root, but reducible
    let f = Poly::new(
        q,
        vec![q.from_i64(4), q.zero(), q.zero(), q.zero(), q.one()],
    );
    assert!(!is_irreducible(&f).unwrap());
    // x^4 + 1 is irreducible over Q
    let f = Poly::new(
        q,
        vec![q.one(), q.zero(), q.zero(), q.zero(), q.one()],
    );
    assert!(is_irreducible(&f).unwrap());
    // x^4 - x^2 + 1 (cyclotomic, degree 12) is irreducible
    let f = Poly::new(
        q,
        vec![q.one(), q.zero(), q.from_i64(-1), q.zero(), q.one()],
    );
    assert!(is_irreducible(&f).unwrap());
}

#[test]
fn solve_and_inverse() {
    let k = gf(7);
    let a = Matrix::from_rows(
        k,
        vec![
            vec![k.from_i64(1), k.from_i64(2)],
            vec![k.from_i64(3), k.from_i64(5)],
        ],
    );
    let inv = a.inverse().unwrap();
    assert!(a.mul(&inv).is_identity());
    assert!(inv.mul(&a).is_identity());

    // inconsistent system
    let b = Matrix::from_rows(
        k,
        vec![
            vec![k.one(), k.one()],
            vec![k.one(), k.one()],
        ],
    );
    assert!(b.solve(&[k.zero(), k.one()]).is_err());
    assert!(b.inverse().is_err());
}

#[test]
fn quotient_projection_section() {
    let k = gf(5);
    // quotient of k^3 by span{(1,2,0)}
    let q = Quotient::by_span(k, 3, &[vec![k.one(), k.from_i64(2), k.zero()]]);
    assert_eq!(q.dim(), 2);
    let p = q.projection_matrix();
    let l = q.lift_matrix();
    assert!(p.mul(&l).is_identity());
    // the killed vector projects to zero
    let z = q.project(&[k.one(), k.from_i64(2), k.zero()]);
    assert!(z.iter().all(|c| c.is_zero()));
}

fn arb_gf7_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(0i64..7, rows * cols).prop_map(move |v| {
        let k = gf(7);
        Matrix::from_fn(k, rows, cols, |i, j| k.from_i64(v[i * cols + j]))
    })
}

proptest! {
    #[test]
    fn rank_nullity(a in arb_gf7_matrix(4, 6)) {
        let rank = a.rank();
        let nullity = a.kernel_basis().len();
        prop_assert_eq!(rank + nullity, 6);
        for v in a.kernel_basis() {
            prop_assert!(a.mul_vec(&v).iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn image_matches_rank(a in arb_gf7_matrix(5, 4)) {
        let img = a.image_basis();
        prop_assert_eq!(img.len(), a.rank());
        let sub = Subspace::from_span(a.k, 5, &img);
        prop_assert_eq!(sub.dim(), a.rank());
        // each column lies in the image
        for j in 0..4 {
            prop_assert!(sub.contains(&a.col(j)));
        }
    }

    #[test]
    fn solve_solves(a in arb_gf7_matrix(4, 4), x in proptest::collection::vec(0i64..7, 4)) {
        let k = a.k;
        let xv: Vec<Scalar> = x.iter().map(|&c| k.from_i64(c)).collect();
        let b = a.mul_vec(&xv);
        // some solution must exist (xv is one)
        let sol = a.solve(&b).unwrap();
        prop_assert_eq!(a.mul_vec(&sol), b);
    }

    #[test]
    fn transpose_involutive_and_product(a in arb_gf7_matrix(3, 4), b in arb_gf7_matrix(4, 2)) {
        prop_assert_eq!(a.transpose().transpose(), a.clone());
        prop_assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
    }

    #[test]
    fn kronecker_mixed_product(a in arb_gf7_matrix(2, 3), b in arb_gf7_matrix(3, 2),
                               c in arb_gf7_matrix(2, 2), d in arb_gf7_matrix(2, 3)) {
        // (A (x) C)(B (x) D) = AB (x) CD
        let lhs = a.kronecker(&c).mul(&b.kronecker(&d));
        let rhs = a.mul(&b).kronecker(&c.mul(&d));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn field_axioms_gf49(xa in 0i64..49, xb in 0i64..49, xc in 0i64..49) {
        // GF(49) = GF(7)[x]/(x^2 + 1); x^2 = -1 works since -1 is not a square mod 7
        let k = gf(7);
        let f = ExtensionField::new(7, vec![k.one(), k.zero(), k.one()]).unwrap();
        let lift = |n: i64| vec![k.from_i64(n % 7), k.from_i64(n / 7)];
        let (a, b, c) = (lift(xa), lift(xb), lift(xc));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(
            f.mul(&a, &f.add(&b, &c)),
            f.add(&f.mul(&a, &b), &f.mul(&a, &c))
        );
        if !f.is_zero(&a) {
            let inv = f.inv(&a).unwrap();
            prop_assert_eq!(f.mul(&a, &inv), f.one());
        }
    }

    #[test]
    fn trace_is_linear_gf16(xa in 0i64..16, xb in 0i64..16) {
        let k = gf(2);
        let f = ExtensionField::new(2, vec![k.one(), k.one(), k.zero(), k.zero(), k.one()]).unwrap();
        let lift = |mut n: i64| {
            let mut e = f.zero();
            for c in e.iter_mut() {
                *c = k.from_i64(n % 2);
                n /= 2;
            }
            e
        };
        let (a, b) = (lift(xa), lift(xb));
        let lhs = f.trace(&f.add(&a, &b));
        let rhs = f.trace(&a).add(&f.trace(&b), &k);
        prop_assert_eq!(lhs, rhs);
    }
}
