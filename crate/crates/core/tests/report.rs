use ncsym_core::bimodule::Bimodule;
use ncsym_core::field::ExtensionField;
use ncsym_core::ncsa::Algebra;
use ncsym_core::report::{run_battery, BatteryOptions};
use ncsym_core::scalar::PrimeField;

fn kron_alg(p: u64, n: usize) -> Algebra {
    Algebra::new(Bimodule::kronecker(PrimeField::gf(p).unwrap(), n).unwrap())
}

fn gf16_alg() -> Algebra {
    let k = PrimeField::gf(2).unwrap();
    let f = ExtensionField::new(2, vec![k.one(), k.one(), k.zero(), k.zero(), k.one()]).unwrap();
    Algebra::new(Bimodule::scalar_restriction(&f).unwrap())
}

#[test]
fn full_battery_kronecker() {
    let alg = kron_alg(7, 2);
    let report = run_battery(&alg, &BatteryOptions::default()).unwrap();
    assert!(!report.degenerate);
    for o in &report.outcomes {
        assert!(o.pass, "{}: {}", o.name, o.detail);
    }
    assert_eq!(report.outcomes.len(), 10);
}

#[test]
fn full_battery_field_extension() {
    let alg = gf16_alg();
    let report = run_battery(&alg, &BatteryOptions::default()).unwrap();
    assert!(!report.degenerate);
    for o in &report.outcomes {
        assert!(o.pass, "{}: {}", o.name, o.detail);
    }
}

#[test]
fn degenerate_instance_reports_expected_failure() {
    let alg = kron_alg(5, 1);
    let report = run_battery(&alg, &BatteryOptions::default()).unwrap();
    assert!(report.degenerate);
    assert_eq!(report.outcomes.len(), 1);
    assert!(report.outcomes[0].pass, "{}", report.outcomes[0].detail);
}
