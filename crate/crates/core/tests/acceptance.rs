//! One test per numbered criterion, each printing a PASS/FAIL line with the
//! failing checks and their details. Run with `--nocapture` to see the lines.

use qmslab_core::verify::{run_criterion, Depth};

fn criterion(id: u32) {
    let report = run_criterion(id, Depth::Full).expect("known criterion");
    println!("{}", report.summary_line());
    for c in &report.checks {
        let mark = if c.pass { "ok  " } else { "FAIL" };
        println!("    {mark} {}: {}", c.name, c.detail);
    }
    assert!(report.pass(), "{}", report.summary_line());
}

#[test]
fn criterion_01_parabolic_polynomials() {
    criterion(1);
}

#[test]
fn criterion_02_gamma_polynomials() {
    criterion(2);
}

#[test]
fn criterion_03_cubic_polynomials() {
    criterion(3);
}

#[test]
fn criterion_04_series_residuals() {
    criterion(4);
}

#[test]
fn criterion_05_triangle() {
    criterion(5);
}

#[test]
fn criterion_06_tau_tower() {
    criterion(6);
}

#[test]
fn criterion_07_ratio_consistency() {
    criterion(7);
}

#[test]
fn criterion_08_riccati() {
    criterion(8);
}

#[test]
fn criterion_09_potentials() {
    criterion(9);
}

#[test]
fn criterion_10_boundary_term() {
    criterion(10);
}

#[test]
fn criterion_11_darboux_ladder() {
    criterion(11);
}

#[test]
fn criterion_12_cubic_shooting() {
    criterion(12);
}

#[test]
fn criterion_13_semiclassical() {
    criterion(13);
}
