//! End-to-end acceptance battery. Each test covers one numbered criterion
//! and prints a single pass/fail line; run with `--nocapture` to see them
//! all.

use std::process::Command;
use std::time::Instant;

use ncsym_core::beilinson::{
    hilbert_function, regular_samples, verify_beilinson, verify_serre_duality, verify_splitting,
    verify_torsion_pair,
};
use ncsym_core::bimodule::Bimodule;
use ncsym_core::field::ExtensionField;
use ncsym_core::ncsa::Algebra;
use ncsym_core::report::{check_hereditary, check_periodicity, run_battery, BatteryOptions};
use ncsym_core::scalar::PrimeField;
use ncsym_core::species::hom_space;
use ncsym_core::tilting::{
    apply_omega_inverse, derived_hom, is_regular, l_object, preprojective, verify_da,
    verify_tilt_recursion, Shifted,
};

fn kron_alg(k: PrimeField, n: usize) -> Algebra {
    Algebra::new(Bimodule::kronecker(k, n).unwrap())
}

fn gf16_alg() -> Algebra {
    let k = PrimeField::gf(2).unwrap();
    let f = ExtensionField::new(2, vec![k.one(), k.one(), k.zero(), k.zero(), k.one()]).unwrap();
    Algebra::new(Bimodule::scalar_restriction(&f).unwrap())
}

fn report(n: u32, name: &str, pass: bool) {
    println!("criterion {n:2} ({name}): {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} ({name}) failed");
}

#[test]
fn c01_kronecker2_dimension_row() {
    let t0 = Instant::now();
    let mut pass = true;
    for k in [PrimeField::gf(7).unwrap(), PrimeField::rationals()] {
        let alg = kron_alg(k, 2);
        let dims: Vec<usize> = alg
            .dimension_table(0, 10)
            .unwrap()
            .into_iter()
            .map(|(_, dk, _, _)| dk)
            .collect();
        pass &= dims == (1..=11).collect::<Vec<_>>();
        for j in 0..dims.len() - 2 {
            pass &= dims[j + 2] == 2 * dims[j + 1] - dims[j];
        }
    }
    pass &= t0.elapsed().as_secs() < 10;
    report(1, "kronecker n=2 dims j<=10 over GF(7) and Q, under 10s", pass);
}

#[test]
fn c02_kronecker3_dimension_row() {
    let t0 = Instant::now();
    let alg = kron_alg(PrimeField::gf(7).unwrap(), 3);
    let dims: Vec<usize> = alg
        .dimension_table(0, 5)
        .unwrap()
        .into_iter()
        .map(|(_, dk, _, _)| dk)
        .collect();
    let mut pass = dims == vec![1, 3, 8, 21, 55, 144];
    for j in 0..dims.len() - 2 {
        pass &= dims[j + 2] == 3 * dims[j + 1] - dims[j];
    }
    pass &= t0.elapsed().as_secs() < 60;
    report(2, "kronecker n=3 dims 1,3,8,21,55,144, under 60s", pass);
}

#[test]
fn c03_euler_sequences() {
    let mut pass = true;
    // (instance, max row, column bound for row i)
    let windows: [(Algebra, i64, fn(i64) -> i64); 3] = [
        (kron_alg(PrimeField::gf(7).unwrap(), 2), 6, |_| 6),
        (kron_alg(PrimeField::gf(7).unwrap(), 3), 4, |_| 4),
        (gf16_alg(), 3, |i| i + 3),
    ];
    for (alg, imax, jmax) in &windows {
        for i in 0..=*imax {
            for j in i..=jmax(i) {
                pass &= alg.verify_euler(i, j).unwrap().is_exact();
            }
            for (_, c) in alg.verify_euler_modules(i, jmax(i)).unwrap() {
                pass &= c.is_exact();
            }
        }
    }
    report(3, "Euler sequences exact, both forms, all three instances", pass);
}

#[test]
fn c04_two_periodicity() {
    let mut pass = true;
    for alg in [
        kron_alg(PrimeField::gf(7).unwrap(), 2),
        kron_alg(PrimeField::gf(7).unwrap(), 3),
        gf16_alg(),
    ] {
        pass &= check_periodicity(&alg, 4).unwrap().pass;
    }
    // wider dimension-table comparison on the small instance
    let alg = kron_alg(PrimeField::gf(7).unwrap(), 2);
    for i in -3..=3i64 {
        for j in i..=i + 6 {
            pass &= alg.graded_piece(i, j).unwrap().bim.dim_k()
                == alg.graded_piece(i + 2, j + 2).unwrap().bim.dim_k();
        }
    }
    report(4, "2-periodicity with witnessed isomorphisms", pass);
}

#[test]
fn c05_tilting_recursion() {
    let mut pass = true;
    let cases: [(Algebra, i64, i64); 3] = [
        (kron_alg(PrimeField::gf(7).unwrap(), 2), -5, 3),
        (kron_alg(PrimeField::gf(7).unwrap(), 3), -4, 2),
        (gf16_alg(), -3, 1),
    ];
    for (alg, lo, hi) in &cases {
        let m = alg.bimodule();
        for i in *lo..=*hi {
            pass &= verify_tilt_recursion(alg, i, 17).unwrap();
            // purity of the inverse twist: no shift appears, which is the
            // operative form of the injectivity of the canonical map
            let up = apply_omega_inverse(m, &l_object(alg, i).unwrap()).unwrap();
            pass &= up.degree == l_object(alg, i + 2).unwrap().degree;
        }
    }
    report(5, "tilting recursion L_i -> L_(i+2), two-sided, pure", pass);
}

#[test]
fn c06_beilinson_grid() {
    let mut pass = verify_beilinson(&kron_alg(PrimeField::gf(7).unwrap(), 2), -4, 4)
        .unwrap()
        .pass();
    pass &= verify_beilinson(&kron_alg(PrimeField::gf(7).unwrap(), 3), -2, 3)
        .unwrap()
        .pass();
    report(6, "endomorphism grid bijective and multiplicative", pass);
}

#[test]
fn c07_da_injective_endomorphism_ring() {
    let mut pass = true;
    for alg in [
        kron_alg(PrimeField::gf(7).unwrap(), 2),
        kron_alg(PrimeField::gf(7).unwrap(), 3),
        gf16_alg(),
    ] {
        pass &= verify_da(alg.bimodule()).unwrap();
    }
    report(7, "DA injective with End(DA) = A in k-dimension", pass);
}

#[test]
fn c08_serre_duality() {
    let mut pass = true;
    for alg in [
        kron_alg(PrimeField::gf(7).unwrap(), 2),
        kron_alg(PrimeField::gf(7).unwrap(), 3),
        gf16_alg(),
    ] {
        let mut samples: Vec<Shifted> = regular_samples(&alg, 3)
            .unwrap()
            .into_iter()
            .map(|r| Shifted::module_in_degree(r, 0))
            .collect();
        pass &= !samples.is_empty();
        for j in -2..=2i64 {
            samples.push(l_object(&alg, j).unwrap());
        }
        pass &= verify_serre_duality(&alg, &samples, -2, 2).unwrap();
    }
    report(8, "Serre duality dimension symmetry, p = 0 and 1", pass);
}

#[test]
fn c09_regularity_torsion_splitting_hilbert() {
    let alg = kron_alg(PrimeField::gf(7).unwrap(), 2);
    let m = alg.bimodule();
    let regs = regular_samples(&alg, 3).unwrap();
    let mut pass = regs.len() == 3;
    for r in &regs {
        // certified on the full window |n| <= 4
        pass &= is_regular(m, r, 4);
        // h(R) = 1 on [-4, 4]
        let h = hilbert_function(&alg, &Shifted::module_in_degree(r.clone(), 0), -4, 4).unwrap();
        pass &= h.iter().all(|&(_, v)| v == 1);
        // Hom(R, L_i) = 0 for i in [-1, 6]
        for i in -1..=6i64 {
            pass &= hom_space(m, r, &preprojective(&alg, i).unwrap()).is_empty();
        }
    }
    pass &= verify_torsion_pair(&alg, &regs, 6, 17).unwrap();
    // 20 randomized scrambled direct sums split back correctly
    pass &= verify_splitting(&alg, &regs, 20, 17, 2).unwrap();
    // additivity
    let sum = regs[0].direct_sum(&regs[1]);
    let hs = hilbert_function(&alg, &Shifted::module_in_degree(sum, 0), -4, 4).unwrap();
    pass &= hs.iter().all(|&(_, v)| v == 2);
    // h(L_0)(i) = i + 1 for i >= -1, negative somewhere below
    let h = hilbert_function(&alg, &l_object(&alg, 0).unwrap(), -4, 4).unwrap();
    pass &= h.iter().all(|&(i, v)| i < -1 || v == i + 1);
    pass &= h.iter().any(|&(i, v)| i <= -2 && v < 0);
    report(9, "regularity, torsion pair, splitting, Hilbert functions", pass);
}

#[test]
fn c10_hereditary_no_higher_ext() {
    let mut pass = true;
    for alg in [
        kron_alg(PrimeField::gf(7).unwrap(), 2),
        kron_alg(PrimeField::gf(7).unwrap(), 3),
        gf16_alg(),
    ] {
        pass &= check_hereditary(&alg, 2).unwrap().pass;
        let m = alg.bimodule();
        let mut samples: Vec<Shifted> = regular_samples(&alg, 2)
            .unwrap()
            .into_iter()
            .map(|r| Shifted::module_in_degree(r, 0))
            .collect();
        for j in -2..=2i64 {
            samples.push(l_object(&alg, j).unwrap());
        }
        for x in &samples {
            for y in &samples {
                for t in 2..=3i64 {
                    pass &= derived_hom(m, x, y, t) == 0;
                }
            }
        }
    }
    report(10, "no derived Hom in degree >= 2 anywhere", pass);
}

#[test]
fn c11_degenerate_guard() {
    let alg = kron_alg(PrimeField::gf(7).unwrap(), 1);
    let rep = run_battery(&alg, &BatteryOptions::default()).unwrap();
    let pass = rep.degenerate && rep.outcomes.len() == 1 && rep.all_pass();
    report(11, "kronecker(1) flagged degenerate, expected-failure report", pass);
}

#[test]
fn c12_reproducibility() {
    let bin = env!("CARGO_BIN_EXE_ncsym");
    let root = tempfile::tempdir().unwrap();
    let run = |cache: &str, out: &str| {
        let status = Command::new(bin)
            .args(["verify", "all", "--preset", "kronecker2", "--seed", "17"])
            .arg("--cache")
            .arg(root.path().join(cache))
            .arg("--out")
            .arg(root.path().join(out))
            .env_remove("NCSYM_CACHE")
            .status()
            .unwrap();
        assert!(status.success());
        let text =
            std::fs::read_to_string(root.path().join(out).join("report-all.json")).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let cold_a = run("cache-a", "out-a");
    let cold_b = run("cache-b", "out-b");
    let warm = run("cache-a", "out-c");
    let pass = cold_a == cold_b && cold_a == warm;
    report(12, "cold/cold and cold/warm runs byte-identical modulo timing", pass);
}
