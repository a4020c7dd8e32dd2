//! One test per acceptance criterion. Each prints a PASS/FAIL line before
//! asserting, so `--nocapture` gives the full scoreboard.

use superschemes_validation::*;

fn enforce(v: Verdict) {
    println!("{}", v.line());
    assert!(v.passed(), "criterion {} failed", v.criterion);
}

#[test]
fn criterion_1_exponential_sum_counts() {
    enforce(criterion_1());
}

#[test]
fn criterion_2_diagonal_quadratic_counts() {
    enforce(criterion_2());
}

#[test]
fn criterion_3_convergence_orders() {
    enforce(criterion_3());
}

#[test]
fn criterion_4_stencil_bands() {
    enforce(criterion_4());
}

#[test]
fn criterion_5_nonconvex_bands() {
    enforce(criterion_5());
}

#[test]
fn criterion_6_preconditioning() {
    enforce(criterion_6());
}

#[test]
fn criterion_7_properties() {
    enforce(criterion_7());
}

#[test]
fn criterion_8_synthetic_orders() {
    enforce(criterion_8());
}

#[test]
fn scalar_three_step_converges_on_trig_quartic() {
    let outcome = scalar_three_step_on_trig_quartic();
    println!("ss3s on ex6 n=1000: {outcome:?}");
    assert!(outcome.is_ok(), "{outcome:?}");
}
