//! One line per acceptance criterion. Tolerances are exact: every check
//! compares rationals or exact scalars, except the printed floats.

use siegel_core::verify::{run_all, VerifyConfig};

#[test]
fn acceptance() {
    let reports = run_all(&VerifyConfig::default());
    for r in &reports {
        println!(
            "criterion {} [{}]: {} ({} checks, {} failed, {} ms)",
            r.criterion,
            r.name,
            if r.pass { "PASS" } else { "FAIL" },
            r.checks,
            r.failed,
            r.millis
        );
        for n in &r.notes {
            println!("    note: {n}");
        }
        for f in &r.failures {
            println!("    fail: {f}");
        }
    }
    let red: Vec<String> = reports.iter().filter(|r| !r.pass).map(|r| r.criterion.to_string()).collect();
    assert!(red.is_empty(), "failing criteria: {}", red.join(", "));
}
