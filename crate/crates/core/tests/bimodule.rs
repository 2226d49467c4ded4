use ncsym_core::bimodule::{
    dual_map, find_bimodule_iso, hom_bimodule, is_bimodule_map, make_double_dual_witness,
    tensor_over, Bimodule,
};
use ncsym_core::field::ExtensionField;
use ncsym_core::matrix::Matrix;
use ncsym_core::scalar::PrimeField;

fn gf16() -> ExtensionField {
    let k = PrimeField::gf(2).unwrap();
    ExtensionField::new(2, vec![k.one(), k.one(), k.zero(), k.zero(), k.one()]).unwrap()
}

fn quartic_q() -> ExtensionField {
    // Q(2^(1/4))
    let q = PrimeField::rationals();
    ExtensionField::new(
        0,
        vec![q.from_i64(-2), q.zero(), q.zero(), q.zero(), q.one()],
    )
    .unwrap()
}

#[test]
fn kronecker_duals_and_witness() {
    let k = PrimeField::gf(7).unwrap();
    let m = Bimodule::kronecker(k, 2).unwrap();
    assert_eq!((m.dim_left(), m.dim_right()), (2, 2));
    let d1 = m.right_dual().unwrap();
    assert_eq!(d1.bim.dim_k(), 2);
    let d2 = d1.bim.right_dual().unwrap();
    let w = make_double_dual_witness(&m, &d1, &d2).unwrap();
    assert!(is_bimodule_map(&w, &m, &d2.bim));
    assert!(w.inverse().is_ok());
    // and an isomorphism is also found by search
    assert!(find_bimodule_iso(&m, &d2.bim, 1).is_some());
}

#[test]
fn field_extension_bimodule_shapes() {
    let f = gf16();
    let m = Bimodule::scalar_restriction(&f).unwrap();
    assert_eq!(m.dim_k(), 4);
    assert_eq!((m.dim_left(), m.dim_right()), (1, 4));
    let d1 = m.right_dual().unwrap();
    // M^* is a (GF(2), GF(16))-bimodule of the same k-dimension
    assert_eq!(d1.bim.dim_k(), 4);
    assert_eq!(d1.bim.left_field().degree(), 1);
    assert_eq!(d1.bim.right_field().degree(), 4);
    assert_eq!((d1.bim.dim_left(), d1.bim.dim_right()), (4, 1));
    let d2 = d1.bim.right_dual().unwrap();
    let w = make_double_dual_witness(&m, &d1, &d2).unwrap();
    assert!(is_bimodule_map(&w, &m, &d2.bim));
}

#[test]
fn rational_quartic_witness() {
    let f = quartic_q();
    let m = Bimodule::scalar_restriction(&f).unwrap();
    let d1 = m.right_dual().unwrap();
    let d2 = d1.bim.right_dual().unwrap();
    let w = make_double_dual_witness(&m, &d1, &d2).unwrap();
    assert!(w.inverse().is_ok());
    assert!(find_bimodule_iso(&m, &d2.bim, 7).is_some());
}

#[test]
fn dual_pairing_is_dual() {
    let f = gf16();
    let m = Bimodule::scalar_restriction(&f).unwrap();
    for d in [m.right_dual().unwrap(), m.left_dual().unwrap()] {
        for i in 0..d.basis.len() {
            for j in 0..d.basis.len() {
                let v = d.eval(&d.delta_basis(i), &d.basis[j]);
                if i == j {
                    assert_eq!(v, d.field.one());
                } else {
                    assert!(d.field.is_zero(&v));
                }
            }
        }
    }
}

#[test]
fn endomorphisms_of_regular_bimodule() {
    let f = gf16();
    let r = Bimodule::regular(&f);
    // End of D as a (D, D)-bimodule is D itself: k-dimension 4
    assert_eq!(hom_bimodule(&r, &r).len(), 4);
    // while End of the restricted (D, k)-bimodule is also D
    let m = Bimodule::scalar_restriction(&f).unwrap();
    assert_eq!(hom_bimodule(&m, &m).len(), 4);
}

#[test]
fn tensor_with_regular_is_identity_on_dims() {
    let f = gf16();
    let r = Bimodule::regular(&f);
    let m = Bimodule::scalar_restriction(&f).unwrap();
    let t = tensor_over(&r, &m).unwrap();
    assert_eq!(t.bim.dim_k(), 4);
    assert!(find_bimodule_iso(&t.bim, &m, 3).is_some());
    // M (x)_{GF(2)} M^* has k-dimension 16; M^* (x)_{GF(16)} M has 4
    let d1 = m.right_dual().unwrap();
    let a = tensor_over(&m, &d1.bim).unwrap();
    assert_eq!(a.bim.dim_k(), 16);
    let b = tensor_over(&d1.bim, &m).unwrap();
    assert_eq!(b.bim.dim_k(), 4);
    // projection composed with section is the identity
    assert!(a.proj.mul(&a.lift).is_identity());
}

#[test]
fn dual_map_of_identity() {
    let f = quartic_q();
    let m = Bimodule::scalar_restriction(&f).unwrap();
    let d = m.right_dual().unwrap();
    let id = Matrix::identity(m.base(), m.dim_k());
    let t = dual_map(&id, &d, &d);
    assert!(t.is_identity());
}

#[test]
fn dual_map_is_contravariant_bimodule_map() {
    let k = PrimeField::gf(5).unwrap();
    let m = Bimodule::kronecker(k, 3).unwrap();
    // any k-linear endomorphism is a bimodule map here
    let f = Matrix::from_fn(k, 3, 3, |i, j| k.from_i64((2 * i + j) as i64));
    assert!(is_bimodule_map(&f, &m, &m));
    let d = m.right_dual().unwrap();
    let ft = dual_map(&f, &d, &d);
    assert!(is_bimodule_map(&ft, &d.bim, &d.bim));
    // contravariance: (fg)^t = g^t f^t
    let g = Matrix::from_fn(k, 3, 3, |i, j| k.from_i64((i * j + 1) as i64));
    let fg = f.mul(&g);
    assert_eq!(dual_map(&fg, &d, &d), dual_map(&g, &d, &d).mul(&dual_map(&f, &d, &d)));
}
