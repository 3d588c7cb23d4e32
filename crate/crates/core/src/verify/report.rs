use serde::Serialize;

use crate::inference::format_real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// Outcome of one check: passes iff `statistic ≤ threshold`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestReport {
    pub name: String,
    pub status: Status,
    pub statistic: f64,
    pub threshold: f64,
    pub details: String,
}

impl TestReport {
    pub fn judged(name: impl Into<String>, statistic: f64, threshold: f64, details: impl Into<String>) -> Self {
        // NaN never passes
        let status = if statistic <= threshold {
            Status::Pass
        } else {
            Status::Fail
        };
        TestReport {
            name: name.into(),
            status,
            statistic,
            threshold,
            details: details.into(),
        }
    }

    pub fn skipped(name: impl Into<String>, details: impl Into<String>) -> Self {
        TestReport {
            name: name.into(),
            status: Status::Skipped,
            statistic: 0.0,
            threshold: 0.0,
            details: details.into(),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    /// One JSON object, reals with 17 significant digits.
    pub fn to_json_line(&self) -> String {
        let real = |x: f64| {
            if x.is_finite() {
                format_real(x)
            } else {
                // JSON has no infinities; keep the value readable as a string
                format!("\"{x}\"")
            }
        };
        format!(
            "{{\"name\":{},\"status\":\"{}\",\"statistic\":{},\"threshold\":{},\"details\":{}}}",
            serde_json::Value::from(self.name.as_str()),
            self.status.as_str(),
            real(self.statistic),
            real(self.threshold),
            serde_json::Value::from(self.details.as_str()),
        )
    }

    pub fn to_text_line(&self) -> String {
        format!(
            "{:<7} {}  statistic={:.6e} threshold={:.6e}  {}",
            self.status.as_str().to_uppercase(),
            self.name,
            self.statistic,
            self.threshold,
            self.details
        )
    }
}

/// Folds the reports of one grid into a single report named `name`. The
/// statistic is the worst ratio statistic/threshold, so the threshold is 1.
pub fn aggregate(name: &str, reports: Vec<TestReport>) -> TestReport {
    let judged: Vec<&TestReport> = reports.iter().filter(|r| r.status != Status::Skipped).collect();
    if judged.is_empty() {
        let why = reports.first().map(|r| r.details.clone()).unwrap_or_default();
        return TestReport::skipped(name, why);
    }
    let ratio = |r: &TestReport| {
        if r.threshold > 0.0 {
            r.statistic / r.threshold
        } else if r.statistic <= 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    };
    let worst = judged
        .iter()
        .copied()
        .max_by(|a, b| ratio(a).partial_cmp(&ratio(b)).unwrap_or(std::cmp::Ordering::Greater))
        .expect("non-empty");
    let failures = judged.iter().filter(|r| r.failed()).count();
    let mut stat = ratio(worst);
    if failures > 0 && stat <= 1.0 {
        // a NaN statistic somewhere
        stat = f64::INFINITY;
    }
    TestReport::judged(
        name,
        stat,
        1.0,
        format!(
            "{} cases, {failures} failed; worst {}: {}",
            judged.len(),
            worst.name,
            worst.details
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_statistic() {
        assert_eq!(TestReport::judged("a", 1.0, 1.0, "").status, Status::Pass);
        assert_eq!(TestReport::judged("a", 1.1, 1.0, "").status, Status::Fail);
        assert_eq!(TestReport::judged("a", f64::NAN, 1.0, "").status, Status::Fail);
    }

    #[test]
    fn json_line() {
        let r = TestReport::judged("x", 0.5, 1.0, "say \"hi\"");
        let v: serde_json::Value = serde_json::from_str(&r.to_json_line()).unwrap();
        assert_eq!(v["status"], "pass");
        assert_eq!(v["statistic"].as_f64(), Some(0.5));
        assert_eq!(v["details"], "say \"hi\"");
        let inf = TestReport::judged("y", f64::INFINITY, 1.0, "");
        assert!(serde_json::from_str::<serde_json::Value>(&inf.to_json_line()).is_ok());
    }

    #[test]
    fn aggregation() {
        let a = aggregate(
            "g",
            vec![
                TestReport::judged("a", 1e-13, 1e-12, ""),
                TestReport::judged("b", 2e-12, 1e-12, "bad"),
                TestReport::skipped("c", "edge"),
            ],
        );
        assert_eq!(a.status, Status::Fail);
        assert!((a.statistic - 2.0).abs() < 1e-12);
        assert!(a.details.contains("worst b"));
        assert_eq!(
            aggregate("s", vec![TestReport::skipped("c", "edge excluded")]).status,
            Status::Skipped
        );
    }
}
