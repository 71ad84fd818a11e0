//! Reporting helpers for the acceptance target in `tests/acceptance.rs`.
//!
//! The criteria live in their own package so that `cargo test --workspace`
//! runs every other test target first, even when a criterion is red.

use std::io::Write;

use string_spectra::verify::VerificationReport;

/// Writes `criterion N: PASS|FAIL <detail>` on its own line straight to
/// the process stdout, which the test harness does not capture, then
/// asserts the verdict.
pub fn announce(criterion: usize, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("\ncriterion {criterion}: {verdict} {detail}\n");
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    drop(out);
    assert!(pass, "criterion {criterion} failed: {detail}");
}

/// In-hypothesis failures grouped by claim: `(claim, count, worst margin)`
/// in order of first appearance.
pub fn violations<'a>(rows: impl IntoIterator<Item = &'a VerificationReport>) -> Vec<(String, usize, f64)> {
    let mut out: Vec<(String, usize, f64)> = Vec::new();
    for r in rows.into_iter().filter(|r| r.is_violation()) {
        match out.iter_mut().find(|(c, _, _)| *c == r.claim) {
            Some(entry) => {
                entry.1 += 1;
                entry.2 = entry.2.min(r.margin);
            }
            None => out.push((r.claim.clone(), 1, r.margin)),
        }
    }
    out
}

/// One-line summary of [`violations`], or `none` when empty.
pub fn describe(v: &[(String, usize, f64)]) -> String {
    if v.is_empty() {
        return "none".to_string();
    }
    v.iter()
        .map(|(c, k, worst)| format!("{c}: {k} violations (worst margin {worst:.3e})"))
        .collect::<Vec<_>>()
        .join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_only_violations() {
        let rows = vec![
            VerificationReport::new("a", "d", -1.0, 0.1),
            VerificationReport::new("a", "d", -3.0, 0.1),
            VerificationReport::new("b", "d", -1.0, 0.1).with_hypothesis(false),
            VerificationReport::new("c", "d", 0.5, 0.0),
        ];
        let v = violations(&rows);
        assert_eq!(v, vec![("a".to_string(), 2, -3.0)]);
        assert_eq!(describe(&[]), "none");
        assert!(describe(&v).starts_with("a: 2 violations"));
    }
}
