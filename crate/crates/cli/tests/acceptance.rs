//! The acceptance suite: one test per criterion, each printing its
//! pass/fail line (visible with --nocapture). The same criteria back the
//! `isoqubits check all` subcommand.

use isoqubits_cli::checks;

fn assert_criterion(outcome: checks::CriterionOutcome) {
    println!("{}", outcome.line());
    assert!(outcome.passed, "{}", outcome.line());
}

#[test]
fn criterion_01_constants() {
    assert_criterion(checks::criterion_01_constants());
}

#[test]
fn criterion_02_uncertainty() {
    assert_criterion(checks::criterion_02_uncertainty());
}

#[test]
fn criterion_03_fourth_moment() {
    assert_criterion(checks::criterion_03_fourth_moment());
}

#[test]
fn criterion_04_gram_statistics() {
    assert_criterion(checks::criterion_04_gram_statistics());
}

#[test]
fn criterion_05_pgm_bound() {
    assert_criterion(checks::criterion_05_pgm_bound());
}

#[test]
fn criterion_06_computational_leakage() {
    assert_criterion(checks::criterion_06_computational_leakage());
}

#[test]
fn criterion_07_discretization() {
    assert_criterion(checks::criterion_07_discretization());
}

#[test]
fn criterion_08_exhaustive_adversary() {
    assert_criterion(checks::criterion_08_exhaustive_adversary());
}

#[test]
fn criterion_09_collision_identities() {
    assert_criterion(checks::criterion_09_collision_identities());
}

#[test]
fn criterion_10_honest_recovery() {
    assert_criterion(checks::criterion_10_honest_recovery());
}

#[test]
fn criterion_11_leak_strategy() {
    assert_criterion(checks::criterion_11_leak_strategy());
}

#[test]
fn criterion_12_chain_decomposition() {
    assert_criterion(checks::criterion_12_chain_decomposition());
}
