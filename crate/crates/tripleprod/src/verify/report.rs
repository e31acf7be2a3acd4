use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::time::Instant;

/// Outcome of one identity check: both sides with error bounds and a verdict.
///
/// The verdict is a function of the stored numbers only; see [`IdentityReport::verdict`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct IdentityReport {
    pub identity_id: String,
    pub lhs: [f64; 2],
    pub lhs_error: f64,
    pub rhs: [f64; 2],
    pub rhs_error: f64,
    pub relative_discrepancy: f64,
    pub tolerance: f64,
    pub inputs: BTreeMap<String, String>,
    #[serde(default)]
    pub diagnostics: BTreeMap<String, Value>,
    pub wall_time_ms: f64,
    pub pass: bool,
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

impl IdentityReport {
    pub fn new(id: impl Into<String>, lhs: (C64, f64), rhs: (C64, f64), tolerance: f64) -> Self {
        let mut r = Self {
            identity_id: id.into(),
            lhs: pair(lhs.0),
            lhs_error: lhs.1,
            rhs: pair(rhs.0),
            rhs_error: rhs.1,
            relative_discrepancy: 0.0,
            tolerance,
            inputs: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
            wall_time_ms: 0.0,
            pass: false,
        };
        r.relative_discrepancy = r.discrepancy();
        r.pass = r.verdict();
        r
    }

    pub fn lhs(&self) -> C64 {
        C64::new(self.lhs[0], self.lhs[1])
    }

    pub fn rhs(&self) -> C64 {
        C64::new(self.rhs[0], self.rhs[1])
    }

    fn scale(&self) -> f64 {
        self.lhs().norm().max(self.rhs().norm())
    }

    /// |lhs − rhs| / max(|lhs|, |rhs|), and 0 when both sides are exactly zero.
    pub fn discrepancy(&self) -> f64 {
        let s = self.scale();
        if s == 0.0 {
            0.0
        } else {
            (self.lhs() - self.rhs()).norm() / s
        }
    }

    /// Combined error bounds relative to the larger side.
    pub fn combined_error(&self) -> f64 {
        let s = self.scale();
        if s == 0.0 {
            0.0
        } else {
            (self.lhs_error + self.rhs_error) / s
        }
    }

    /// Pass iff the discrepancy is within tolerance plus the combined error bounds.
    pub fn verdict(&self) -> bool {
        let d = self.discrepancy();
        d.is_finite() && d <= self.tolerance + self.combined_error()
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn diag(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.diagnostics.insert(key.to_string(), value.into());
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }

    pub const CSV_HEADER: &'static str = "identity_id,inputs,lhs,rhs,rel_disc,pass";

    pub fn to_csv_row(&self) -> String {
        let inputs: Vec<String> = self.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let quote = |s: String| format!("\"{}\"", s.replace('"', "\"\""));
        format!(
            "{},{},{},{},{:.6e},{}",
            quote(self.identity_id.clone()),
            quote(inputs.join(";")),
            quote(format!("{:.15e}{:+.15e}i", self.lhs[0], self.lhs[1])),
            quote(format!("{:.15e}{:+.15e}i", self.rhs[0], self.rhs[1])),
            self.relative_discrepancy,
            self.pass
        )
    }
}

/// CSV summary of a batch of reports, header included.
pub fn csv_summary(reports: &[IdentityReport]) -> String {
    let mut out = String::from(IdentityReport::CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_uses_error_bounds() {
        let c = |x: f64| C64::new(x, 0.0);
        let r = IdentityReport::new("t", (c(1.0), 0.0), (c(1.01), 0.0), 1e-3);
        assert!(!r.pass);
        let r = IdentityReport::new("t", (c(1.0), 0.02), (c(1.01), 0.0), 1e-3);
        assert!(r.pass);
        let z = IdentityReport::new("zero", (c(0.0), 0.0), (c(0.0), 0.0), 1e-3);
        assert!(z.pass && z.relative_discrepancy == 0.0);
    }

    #[test]
    fn json_round_trip_keeps_verdict() {
        let r = IdentityReport::new("x", (C64::new(2.0, 0.5), 1e-9), (C64::new(2.0, 0.5), 1e-9), 1e-6)
            .input("s", 2)
            .diag("note", "ok");
        let back: IdentityReport = serde_json::from_str(&r.to_json_line()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.verdict(), back.pass);
        let csv = csv_summary(&[r]);
        assert!(csv.starts_with(IdentityReport::CSV_HEADER));
        assert!(csv.contains("\"s=2\""));
    }
}
