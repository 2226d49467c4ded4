use ncsym_core::beilinson::{
    hilbert_function, regular_samples, verify_beilinson, verify_serre_duality, verify_splitting,
    verify_torsion_pair, EndomorphismGrid,
};
use ncsym_core::bimodule::Bimodule;
use ncsym_core::field::ExtensionField;
use ncsym_core::ncsa::Algebra;
use ncsym_core::scalar::PrimeField;
use ncsym_core::tilting::{l_object, Shifted};

fn kron_alg(p: u64, n: usize) -> Algebra {
    Algebra::new(Bimodule::kronecker(PrimeField::gf(p).unwrap(), n).unwrap())
}

fn gf16_alg() -> Algebra {
    let k = PrimeField::gf(2).unwrap();
    let f = ExtensionField::new(2, vec![k.one(), k.one(), k.zero(), k.zero(), k.one()]).unwrap();
    Algebra::new(Bimodule::scalar_restriction(&f).unwrap())
}

#[test]
fn grid_dimensions_match_graded_pieces_kronecker() {
    let alg = kron_alg(7, 2);
    let g = EndomorphismGrid::new(&alg, -3, 3).unwrap();
    for i in -3..=3i64 {
        for j in i..=3 {
            let cell = g.check_cell(i, j).unwrap();
            assert!(cell.pass(), "cell ({i}, {j}): {cell:?}");
            // Kronecker dims are j - i + 1
            assert_eq!(cell.dim_s, (j - i + 1) as usize);
        }
    }
}

#[test]
fn grid_is_multiplicative_kronecker() {
    let alg = kron_alg(7, 2);
    let g = EndomorphismGrid::new(&alg, -3, 3).unwrap();
    for i in -3..=3i64 {
        for j in i..=3 {
            for l in j..=3 {
                assert!(
                    g.check_composition(i, j, l).unwrap(),
                    "triple ({i}, {j}, {l})"
                );
            }
        }
    }
}

#[test]
fn grid_field_extension() {
    let alg = gf16_alg();
    let report = verify_beilinson(&alg, -2, 2).unwrap();
    assert!(report.pass(), "{report:?}");
}

#[test]
fn serre_duality() {
    for (alg, window) in [(kron_alg(7, 2), 2i64), (gf16_alg(), 2)] {
        let mut samples: Vec<Shifted> = regular_samples(&alg, 3)
            .unwrap()
            .into_iter()
            .map(|r| Shifted::module_in_degree(r, 0))
            .collect();
        assert!(!samples.is_empty());
        for j in -2..=2i64 {
            samples.push(l_object(&alg, j).unwrap());
        }
        assert!(verify_serre_duality(&alg, &samples, -window, window).unwrap());
    }
}

#[test]
fn torsion_pair() {
    for alg in [kron_alg(7, 2), gf16_alg()] {
        let regs = regular_samples(&alg, 3).unwrap();
        assert!(!regs.is_empty());
        assert!(verify_torsion_pair(&alg, &regs, 2, 17).unwrap());
    }
}

#[test]
fn hilbert_functions() {
    let alg = kron_alg(7, 2);
    // regular points have constant Hilbert function 1
    for r in regular_samples(&alg, 2).unwrap() {
        let h = hilbert_function(&alg, &Shifted::module_in_degree(r, 0), -4, 3).unwrap();
        assert!(h.iter().all(|&(_, v)| v == 1), "{h:?}");
    }
    // h(L_0)(i) = i + 1 for i >= -1 and negative somewhere below
    let h = hilbert_function(&alg, &l_object(&alg, 0).unwrap(), -4, 3).unwrap();
    for &(i, v) in &h {
        if i >= -1 {
            assert_eq!(v, i + 1, "h(L_0)({i})");
        }
    }
    assert!(h.iter().any(|&(i, v)| i <= -2 && v < 0), "{h:?}");
    // additivity on a direct sum
    let regs = regular_samples(&alg, 2).unwrap();
    let sum = regs[0].direct_sum(&regs[1]);
    let hs = hilbert_function(&alg, &Shifted::module_in_degree(sum, 0), -3, 3).unwrap();
    assert!(hs.iter().all(|&(_, v)| v == 2), "{hs:?}");
}

#[test]
fn hilbert_function_field_extension() {
    let alg = gf16_alg();
    for r in regular_samples(&alg, 2).unwrap() {
        let h = hilbert_function(&alg, &Shifted::module_in_degree(r, 0), -3, 2).unwrap();
        assert!(h.iter().all(|&(_, v)| v >= 1), "{h:?}");
    }
}

#[test]
fn splitting_recovers_scrambled_sums() {
    for alg in [kron_alg(7, 2), gf16_alg()] {
        let regs = regular_samples(&alg, 2).unwrap();
        assert!(verify_splitting(&alg, &regs, 6, 42, 2).unwrap());
    }
}
