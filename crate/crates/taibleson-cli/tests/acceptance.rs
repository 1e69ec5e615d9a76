//! The acceptance gate: run every verification criterion at its pinned
//! tolerance and fail the build if any of them breaks. Prints one
//! pass/fail line per criterion.

use taibleson_cli::accept;

#[test]
fn acceptance_suite() {
    let results = accept::run_all(42, 128);
    let mut all_pass = true;
    for r in &results {
        println!(
            "criterion {:>2}: {}  [{} ms] {} -- {}",
            r.index,
            if r.pass { "PASS" } else { "FAIL" },
            r.millis,
            r.name,
            r.details
        );
        all_pass &= r.pass;
    }
    assert!(all_pass, "acceptance criteria failed; see lines above");
    assert_eq!(results.len(), 10);
}
