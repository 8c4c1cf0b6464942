use std::io::Write;

use gogrow::acceptance::run_criterion;

fn check(id: u8) {
    let report = run_criterion(id).expect("known criterion");
    // Written to the raw handle so the line shows without --nocapture.
    writeln!(std::io::stdout(), "{report}").expect("stdout");
    assert!(report.passed, "{report}");
}

#[test]
fn criterion_01_equilibria() {
    check(1);
}

#[test]
fn criterion_02_characteristic_factorization() {
    check(2);
}

#[test]
fn criterion_03_eigenvalues_at_rho_20() {
    check(3);
}

#[test]
fn criterion_04_stability_thresholds() {
    check(4);
}

#[test]
fn criterion_05_spectral_limit() {
    check(5);
}

#[test]
fn criterion_06_feasible_set_invariance_and_theta() {
    check(6);
}

#[test]
fn criterion_07_w_formula_cross_check() {
    check(7);
}

#[test]
fn criterion_08_global_convergence_and_persistence() {
    check(8);
}

#[test]
fn criterion_09_metastable_transients() {
    check(9);
}

#[test]
fn criterion_10_heteroclinic_orbit() {
    check(10);
}

#[test]
fn criterion_11_lattice_model_vs_mean_field() {
    check(11);
}

#[test]
fn criterion_12_mean_field_rescaling() {
    check(12);
}
