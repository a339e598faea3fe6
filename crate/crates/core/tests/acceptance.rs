//! One test per acceptance criterion. Each prints its verdict line (run with
//! `--nocapture` to see them) and fails if the suite reports any failure.
//! Suite defaults carry the pinned sample sizes, horizons and seeds.

use mirrorlab::suites::{Suite, SuiteOptions};

fn check(suite: Suite) {
    let started = std::time::Instant::now();
    let report = suite.run(&SuiteOptions::default());
    println!("{}", report.verdict_line());
    eprintln!("{}  ({:.1}s)", report.to_text().trim_end(), started.elapsed().as_secs_f64());
    assert!(report.passed, "{}", report.to_text());
}

#[test]
fn criterion_1_billiard_is_double_rotation() {
    check(Suite::Prop1Equivalence);
}

#[test]
fn criterion_2_special_word_identity() {
    check(Suite::Cassaigne);
}

#[test]
fn criterion_3_exact_complexity_by_class() {
    check(Suite::Thm4);
}

#[test]
fn criterion_4_rational_mirror_bounds() {
    check(Suite::Thm9);
}

#[test]
fn criterion_5_bk_attractor() {
    check(Suite::BkAttractor);
}

#[test]
fn criterion_6_attractor_measure() {
    check(Suite::AttractorMeasure);
}

#[test]
fn criterion_7_finite_type_sturmian_attractor() {
    check(Suite::Prop12);
}

#[test]
fn criterion_8_weighted_tree() {
    check(Suite::WeightedTree);
}
