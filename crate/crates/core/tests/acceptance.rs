//! Acceptance suite: one test per criterion. Each prints its pass/fail line
//! and asserts the criterion as stated, with the failure details in the
//! panic message when a criterion does not hold.

use constrank::selftest::{self, CriterionResult};

fn assert_criterion(result: CriterionResult, expected_cases: Option<&str>) {
    let status = if result.passed { "PASS" } else { "FAIL" };
    println!(
        "criterion {} ({}): {status} — {}",
        result.id, result.name, result.detail
    );
    for f in &result.failures {
        println!("    {f}");
    }
    if let Some(fragment) = expected_cases {
        assert!(
            result.detail.contains(fragment),
            "criterion {} did not cover the expected cases: detail = {}",
            result.id,
            result.detail
        );
    }
    assert!(
        result.passed,
        "criterion {} ({}) failed:\n{}",
        result.id,
        result.name,
        result.failures.join("\n")
    );
}

#[test]
fn acceptance_1_formula_agreement() {
    // 36 symmetric + 120 rectangular shapes with 1 <= r <= m <= n <= 8
    assert_criterion(selftest::criterion_1_formula_agreement(), Some("156"));
}

#[test]
fn acceptance_2_constant_rank_certification() {
    assert_criterion(selftest::criterion_2_constant_rank_certification(), Some("/77"));
}

#[test]
fn acceptance_3_lemma_suite() {
    assert_criterion(selftest::criterion_3_lemma_suite(), Some("500"));
}

#[test]
fn acceptance_4_intersection_arguments() {
    assert_criterion(selftest::criterion_4_intersection_arguments(), None);
}

#[test]
fn acceptance_5_maximality() {
    assert_criterion(selftest::criterion_5_maximality(), None);
}

#[test]
fn acceptance_6_remark_counterexample() {
    assert_criterion(selftest::criterion_6_remark_counterexample(), None);
}

#[test]
fn acceptance_7_completion_family_dimensions() {
    assert_criterion(selftest::criterion_7_completion_family_dimensions(), None);
}

#[test]
fn acceptance_8_overdimensional_falsification() {
    assert_criterion(selftest::criterion_8_overdimensional_falsification(), Some("500"));
}

#[test]
fn acceptance_9_signature() {
    assert_criterion(selftest::criterion_9_signature(), Some("55"));
}
