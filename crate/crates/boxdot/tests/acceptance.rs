//! Acceptance suite: one test per criterion, each printing its pass/fail
//! line (visible with `cargo test --test acceptance -- --nocapture`).
//! The CLI command `boxdot selftest` runs the same checks.

use boxdot::selftest::{self, CriterionOutcome};
use boxdot::Limits;

fn run(criterion: fn(&Limits) -> CriterionOutcome) {
    let outcome = criterion(&Limits::default());
    println!("{}", outcome.line());
    assert!(
        outcome.pass,
        "criterion {} ({}) failed: {}",
        outcome.index, outcome.name, outcome.detail
    );
}

#[test]
fn criterion_01_example31_reproduction() {
    run(selftest::criterion_1);
}

#[test]
fn criterion_02_reflexivization_identity() {
    run(selftest::criterion_2);
}

#[test]
fn criterion_03_doubling_closure() {
    run(selftest::criterion_3);
}

#[test]
fn criterion_04_projection_certificate() {
    run(selftest::criterion_4);
}

#[test]
fn criterion_05_truth_lemma() {
    run(selftest::criterion_5);
}

#[test]
fn criterion_06_t_equivalence() {
    run(selftest::criterion_6);
}

#[test]
fn criterion_07_bdi_k_equals_t() {
    run(selftest::criterion_7);
}

#[test]
fn criterion_08_claim_instances() {
    run(selftest::criterion_8);
}

#[test]
fn criterion_09_main_theorem_witness() {
    run(selftest::criterion_9);
}

#[test]
fn criterion_10_prover_certificates() {
    run(selftest::criterion_10);
}

#[test]
fn criterion_11_general_frame_doubling() {
    run(selftest::criterion_11);
}
