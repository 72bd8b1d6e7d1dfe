//! Acceptance suite: one test per verification criterion, each printing
//! its pass/fail line. The same checks back the `verify` subcommand.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! one-line report per criterion.

use casimir_slab::verify;

fn check(id: usize) {
    let outcome = verify::run_criterion(id);
    println!("{}", outcome.line());
    assert!(outcome.passed, "{}", outcome.line());
}

#[test]
fn criterion_01_nonretarded_constant() {
    check(1);
}

#[test]
fn criterion_02_plasmon_decomposition() {
    check(2);
}

#[test]
fn criterion_03_casimir_limit_and_correction() {
    check(3);
}

#[test]
fn criterion_04_dual_formulation_oracles() {
    check(4);
}

#[test]
fn criterion_05_nonretarded_to_casimir_ratio() {
    check(5);
}

#[test]
fn criterion_06_cavity_limits() {
    check(6);
}

#[test]
fn criterion_07_symmetric_interaction_force() {
    check(7);
}

#[test]
fn criterion_08_thick_slab_decay() {
    check(8);
}

#[test]
fn criterion_09_mode_lifshitz_consistency() {
    check(9);
}

#[test]
fn criterion_10_figure_determinism() {
    check(10);
}
