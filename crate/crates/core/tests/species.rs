use ncsym_core::bimodule::Bimodule;
use ncsym_core::field::ExtensionField;
use ncsym_core::matrix::Matrix;
use ncsym_core::scalar::{PrimeField, Scalar};
use ncsym_core::species::{
    cokernel, decompose_against_list, ext1, find_isomorphism, hom_space, is_indecomposable,
    kernel, DModule, SpeciesModule,
};

fn kron(p: u64, n: usize) -> Bimodule {
    Bimodule::kronecker(PrimeField::gf(p).unwrap(), n).unwrap()
}

fn gf16_bim() -> Bimodule {
    let k = PrimeField::gf(2).unwrap();
    let f = ExtensionField::new(2, vec![k.one(), k.one(), k.zero(), k.zero(), k.one()]).unwrap();
    Bimodule::scalar_restriction(&f).unwrap()
}

/// The Kronecker regular module R_lambda = (k, k, [1 lambda]).
fn regular_module(m: &Bimodule, lambda: i64) -> SpeciesModule {
    let k = m.base();
    let prime = m.left_field().clone();
    let m0 = DModule::free(prime.clone(), 1);
    let m1 = DModule::free(m.right_field().clone(), 1);
    let n = m.dim_k();
    let mut rho = Matrix::zeros(k, 1, n);
    *rho.at_mut(0, 0) = k.one();
    if n > 1 {
        *rho.at_mut(0, 1) = k.from_i64(lambda);
    }
    SpeciesModule::new(m0, m1, rho, m).unwrap()
}

#[test]
fn hom_dimensions_of_projectives() {
    let m = kron(7, 2);
    let p0 = SpeciesModule::projective0(&m);
    let p1 = SpeciesModule::projective1(&m);
    // Hom(e_i A, X) = X_i
    assert_eq!(hom_space(&m, &p0, &p0).len(), 1);
    assert_eq!(hom_space(&m, &p1, &p1).len(), 1);
    assert_eq!(hom_space(&m, &p0, &p1).len(), 0);
    assert_eq!(hom_space(&m, &p1, &p0).len(), 2); // = dim_k M

    let m = gf16_bim();
    let p0 = SpeciesModule::projective0(&m);
    let p1 = SpeciesModule::projective1(&m);
    assert_eq!(hom_space(&m, &p0, &p0).len(), 4); // End = D_0 = GF(16)
    assert_eq!(hom_space(&m, &p1, &p1).len(), 1); // End = D_1 = GF(2)
    assert_eq!(hom_space(&m, &p1, &p0).len(), 4); // (e_0 A)_1 = M
}

#[test]
fn projectives_have_no_ext() {
    for m in [kron(7, 2), gf16_bim()] {
        let p0 = SpeciesModule::projective0(&m);
        let p1 = SpeciesModule::projective1(&m);
        let s0 = SpeciesModule::simple0(&m);
        for x in [&p0, &p1] {
            for y in [&p0, &p1, &s0] {
                assert_eq!(ext1(&m, x, y).dim_k(), 0);
            }
        }
    }
}

#[test]
fn ext_between_simples() {
    let m = kron(7, 3);
    let s0 = SpeciesModule::simple0(&m);
    let s1 = SpeciesModule::simple1(&m);
    assert_eq!(ext1(&m, &s0, &s1).dim_k(), 3);
    assert_eq!(ext1(&m, &s1, &s0).dim_k(), 0);
    assert_eq!(hom_space(&m, &s0, &s1).len(), 0);

    let m = gf16_bim();
    let s0 = SpeciesModule::simple0(&m);
    let s1 = SpeciesModule::simple1(&m);
    assert_eq!(ext1(&m, &s0, &s1).dim_k(), 4);
    assert_eq!(ext1(&m, &s1, &s0).dim_k(), 0);
}

#[test]
fn euler_form_matches_dimension_data() {
    // <X, Y> = sum_i dim Hom_{D_i}(X_i, Y_i) - dim Hom_{D_1}(X_0 (x) M, Y_1)
    let m = kron(5, 2);
    let mods = [
        SpeciesModule::projective0(&m),
        SpeciesModule::projective1(&m),
        SpeciesModule::simple0(&m),
        regular_module(&m, 0),
        regular_module(&m, 1),
    ];
    for x in &mods {
        for y in &mods {
            let hom = hom_space(&m, x, y).len();
            let ext = ext1(&m, x, y).dim_k();
            let (x0, x1) = (x.m0.dim_k(), x.m1.dim_k());
            let (y0, y1) = (y.m0.dim_k(), y.m1.dim_k());
            let euler = (x0 * y0 + x1 * y1) as i64 - (x0 * m.dim_k() * y1) as i64;
            assert_eq!(hom as i64 - ext as i64, euler);
        }
    }
}

#[test]
fn regular_kronecker_modules() {
    let m = kron(7, 2);
    let r0 = regular_module(&m, 0);
    let r1 = regular_module(&m, 1);
    // distinct points of the tube: orthogonal, each with End = k, Ext = k
    assert_eq!(hom_space(&m, &r0, &r0).len(), 1);
    assert_eq!(ext1(&m, &r0, &r0).dim_k(), 1);
    assert_eq!(hom_space(&m, &r0, &r1).len(), 0);
    assert_eq!(ext1(&m, &r0, &r1).dim_k(), 0);
    assert!(is_indecomposable(&m, &r0, 11));
    assert!(find_isomorphism(&m, &r0, &r1, 5).is_none());
    assert!(find_isomorphism(&m, &r0, &r0, 5).is_some());
}

#[test]
fn kernels_and_cokernels() {
    let m = kron(7, 2);
    let p0 = SpeciesModule::projective0(&m);
    let p1 = SpeciesModule::projective1(&m);
    // a nonzero map e_1 A -> e_0 A is injective with regular-ish cokernel
    let f = hom_space(&m, &p1, &p0)[0].clone();
    let (ker, _) = kernel(&m, &p1, &p0, &f);
    assert!(ker.is_zero());
    let (coker, _) = cokernel(&m, &p1, &p0, &f);
    assert_eq!(coker.dim_vector(), (1, 1));

    // the zero map has everything as kernel / cokernel
    let k = m.base();
    let z = (
        Matrix::zeros(k, p0.m0.dim_k(), p1.m0.dim_k()),
        Matrix::zeros(k, p0.m1.dim_k(), p1.m1.dim_k()),
    );
    let (ker, _) = kernel(&m, &p1, &p0, &z);
    assert_eq!(ker.dim_k(), p1.dim_k());
}

#[test]
fn indecomposables_and_splitting() {
    let m = gf16_bim();
    let p0 = SpeciesModule::projective0(&m);
    let p1 = SpeciesModule::projective1(&m);
    assert!(is_indecomposable(&m, &p0, 1));
    assert!(is_indecomposable(&m, &p1, 1));
    let sum = p0.direct_sum(&p1).direct_sum(&p1);
    assert!(!is_indecomposable(&m, &sum, 1));
    let (counts, rest) = decompose_against_list(&m, &sum, &[p0.clone(), p1.clone()], 9);
    assert_eq!(counts, vec![1, 2]);
    assert!(rest.is_zero());
}

#[test]
fn splitting_over_the_rationals() {
    let m = Bimodule::kronecker(PrimeField::rationals(), 2).unwrap();
    let p0 = SpeciesModule::projective0(&m);
    let s0 = SpeciesModule::simple0(&m);
    let sum = p0.direct_sum(&s0);
    assert!(is_indecomposable(&m, &p0, 3));
    assert!(!is_indecomposable(&m, &sum, 3));
    let (counts, rest) = decompose_against_list(&m, &sum, &[s0.clone(), p0.clone()], 3);
    assert_eq!(counts, vec![1, 1]);
    assert!(rest.is_zero());
}

#[test]
fn ext_classes_have_cocycle_representatives() {
    let m = kron(7, 2);
    let s0 = SpeciesModule::simple0(&m);
    let s1 = SpeciesModule::simple1(&m);
    let e = ext1(&m, &s0, &s1);
    assert_eq!(e.dim_k(), 2);
    let k = m.base();
    let class: Vec<Scalar> = vec![k.one(), k.from_i64(3)];
    let c = e.representative(&class);
    assert_eq!(e.class_of(&c).unwrap(), class);
}
