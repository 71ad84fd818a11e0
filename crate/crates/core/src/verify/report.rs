use std::cmp::Ordering;
use std::io::Write;

use serde::Serialize;

use crate::error::Result;

/// One checked inequality or agreement, with its margin in natural units.
///
/// `pass` is true exactly when `margin >= -tolerance`. Rows whose inputs lie
/// outside the hypothesis of the claim are still computed and carry
/// `in_hypothesis = false`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    pub density_digest: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub tau: Option<f64>,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_ms: Option<f64>,
    pub in_hypothesis: bool,
}

impl VerificationReport {
    pub fn new(claim: impl Into<String>, digest: impl Into<String>, margin: f64, tolerance: f64) -> Self {
        Self {
            claim: claim.into(),
            density_digest: digest.into(),
            n: None,
            m: None,
            tau: None,
            margin,
            tolerance,
            pass: margin >= -tolerance,
            runtime_ms: None,
            in_hypothesis: true,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn with_hypothesis(mut self, holds: bool) -> Self {
        self.in_hypothesis = holds;
        self
    }

    pub fn with_runtime(mut self, ms: f64) -> Self {
        self.runtime_ms = Some(ms);
        self
    }

    /// A row that fails the claim while its hypothesis holds.
    pub fn is_violation(&self) -> bool {
        self.in_hypothesis && !self.pass
    }

    fn sort_key_cmp(&self, other: &Self) -> Ordering {
        self.claim
            .cmp(&other.claim)
            .then_with(|| self.density_digest.cmp(&other.density_digest))
            .then_with(|| self.n.cmp(&other.n))
            .then_with(|| self.m.cmp(&other.m))
            .then_with(|| match (self.tau, other.tau) {
                (Some(a), Some(b)) => a.total_cmp(&b),
                (a, b) => a.is_some().cmp(&b.is_some()),
            })
    }
}

/// Sorts rows by claim, digest, n, m and τ. The sort is stable, so rows
/// with equal keys keep their generation order.
pub fn sort_reports(rows: &mut [VerificationReport]) {
    rows.sort_by(|a, b| a.sort_key_cmp(b));
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Writes rows as CSV with a header, or as one JSON object per line.
/// Runtimes are dropped unless `timings` is set so that repeated runs
/// produce identical bytes.
pub fn write_reports<W: Write>(out: W, rows: &[VerificationReport], format: Format, timings: bool) -> Result<()> {
    let strip = |r: &VerificationReport| {
        let mut r = r.clone();
        if !timings {
            r.runtime_ms = None;
        }
        r
    };
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(strip(r))?;
            }
            if rows.is_empty() {
                w.write_record([
                    "claim",
                    "density_digest",
                    "n",
                    "m",
                    "tau",
                    "margin",
                    "tolerance",
                    "pass",
                    "runtime_ms",
                    "in_hypothesis",
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            for r in rows {
                serde_json::to_writer(&mut out, &strip(r))?;
                writeln!(out)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_follows_margin() {
        assert!(VerificationReport::new("c", "d", -1e-9, 1e-8).pass);
        assert!(!VerificationReport::new("c", "d", -2e-8, 1e-8).pass);
        let r = VerificationReport::new("c", "d", -1.0, 0.0).with_hypothesis(false);
        assert!(!r.pass && !r.is_violation());
    }

    #[test]
    fn sorting_is_by_claim_then_inputs() {
        let mut rows = vec![
            VerificationReport::new("ratio", "b", 0.0, 0.0).with_n(2),
            VerificationReport::new("gap", "z", 0.0, 0.0),
            VerificationReport::new("ratio", "a", 0.0, 0.0).with_n(3).with_m(2),
            VerificationReport::new("ratio", "a", 0.0, 0.0).with_n(3).with_m(1),
        ];
        sort_reports(&mut rows);
        let keys: Vec<_> = rows
            .iter()
            .map(|r| (r.claim.as_str(), r.density_digest.as_str(), r.m))
            .collect();
        assert_eq!(
            keys,
            [
                ("gap", "z", None),
                ("ratio", "a", Some(1)),
                ("ratio", "a", Some(2)),
                ("ratio", "b", None)
            ]
        );
    }

    #[test]
    fn csv_has_fixed_columns() {
        let rows = vec![VerificationReport::new("ratio", "abc", 0.5, 1e-8)
            .with_n(2)
            .with_m(1)
            .with_runtime(3.0)];
        let mut buf = Vec::new();
        write_reports(&mut buf, &rows, Format::Csv, false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "claim,density_digest,n,m,tau,margin,tolerance,pass,runtime_ms,in_hypothesis"
        );
        assert_eq!(lines.next().unwrap(), "ratio,abc,2,1,,0.5,1e-8,true,,true");
    }

    #[test]
    fn json_lines_keep_runtime_on_request() {
        let rows = vec![VerificationReport::new("gap", "abc", 0.0, 0.0).with_runtime(1.5)];
        let mut buf = Vec::new();
        write_reports(&mut buf, &rows, Format::Json, true).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["runtime_ms"], 1.5);
        assert_eq!(v["claim"], "gap");
    }
}
