//! Check reports: the schema every verification suite emits, designed
//! so the report body is byte-identical across runs of the same
//! configuration.  Wall-clock time lives only in the envelope around
//! the body, never inside it.

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

/// Outcome of one named check.  `details` must carry the concrete
/// counterexample or witness whenever the status is `Fail`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    /// Echo of the inputs the check ran on, in a fixed order.
    pub inputs: Vec<(String, String)>,
    pub status: Status,
    pub details: String,
    /// Measured duration; excluded from the deterministic body.
    #[serde(skip)]
    pub wall: Duration,
}

impl CheckReport {
    pub fn pass(check: impl Into<String>, details: impl Into<String>) -> CheckReport {
        CheckReport {
            check: check.into(),
            inputs: Vec::new(),
            status: Status::Pass,
            details: details.into(),
            wall: Duration::ZERO,
        }
    }

    /// A failure always names its counterexample in `details`.
    pub fn fail(check: impl Into<String>, details: impl Into<String>) -> CheckReport {
        let details = details.into();
        assert!(!details.is_empty(), "a failing check must carry a counterexample");
        CheckReport {
            check: check.into(),
            inputs: Vec::new(),
            status: Status::Fail,
            details,
            wall: Duration::ZERO,
        }
    }

    pub fn error(check: impl Into<String>, details: impl Into<String>) -> CheckReport {
        CheckReport {
            check: check.into(),
            inputs: Vec::new(),
            status: Status::Error,
            details: details.into(),
            wall: Duration::ZERO,
        }
    }

    pub fn with_input(mut self, key: impl Into<String>, value: impl fmt::Display) -> CheckReport {
        self.inputs.push((key.into(), value.to_string()));
        self
    }

    pub fn with_wall(mut self, wall: Duration) -> CheckReport {
        self.wall = wall;
        self
    }

    /// The deterministic JSON body: check, inputs, status, details.
    pub fn body_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report bodies are plain data")
    }

    /// One human-readable line, also free of timing.
    pub fn render_line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS ",
            Status::Fail => "FAIL ",
            Status::Error => "ERROR",
        };
        let inputs = if self.inputs.is_empty() {
            String::new()
        } else {
            let body: Vec<String> =
                self.inputs.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            format!(" ({})", body.join(", "))
        };
        format!("{tag} {}{}: {}", self.check, inputs, self.details)
    }
}

/// The envelope around a batch of reports.  Timing is aggregated here,
/// outside the bodies, so the body list stays reproducible.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub reports: Vec<CheckReport>,
}

impl Envelope {
    pub fn new(reports: Vec<CheckReport>) -> Envelope {
        Envelope { reports }
    }

    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.status == Status::Pass)
    }

    /// 0 when everything passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn total_wall(&self) -> Duration {
        self.reports.iter().map(|r| r.wall).sum()
    }

    /// The deterministic body: a JSON array of report bodies.
    pub fn body_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.reports.iter().map(CheckReport::body_json).collect())
    }

    /// Timing sidecar keyed by check name, kept apart from the body.
    pub fn timing_json(&self) -> serde_json::Value {
        serde_json::json!({
            "total_millis": self.total_wall().as_millis() as u64,
            "per_check_millis": self
                .reports
                .iter()
                .map(|r| {
                    serde_json::json!([r.check.clone(), r.wall.as_millis() as u64])
                })
                .collect::<Vec<_>>(),
        })
    }
}

/// Runs a closure and pairs its result with the elapsed wall time.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = std::time::Instant::now();
    let value = f();
    (value, start.elapsed())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bodies_do_not_mention_time() {
        let report = CheckReport::pass("determinant-table", "36 rows agree")
            .with_input("m-from", 4)
            .with_input("m-to", 40)
            .with_wall(Duration::from_millis(1234));
        let body = serde_json::to_string(&report.body_json()).unwrap();
        assert!(body.contains("determinant-table"));
        assert!(body.contains("\"m-from\""));
        assert!(!body.contains("1234"));
        assert!(!body.contains("wall"));
    }

    #[test]
    fn identical_runs_serialize_identically() {
        let build = |wall: u64| {
            Envelope::new(vec![
                CheckReport::pass("a", "fine").with_wall(Duration::from_millis(wall)),
                CheckReport::fail("b", "counterexample at m = 6"),
            ])
        };
        let one = serde_json::to_string(&build(10).body_json()).unwrap();
        let two = serde_json::to_string(&build(9999).body_json()).unwrap();
        assert_eq!(one, two);
    }

    #[test]
    fn exit_codes_follow_the_statuses() {
        let good = Envelope::new(vec![CheckReport::pass("a", "ok")]);
        assert_eq!(good.exit_code(), 0);
        let bad = Envelope::new(vec![
            CheckReport::pass("a", "ok"),
            CheckReport::fail("b", "bad pair (1, 2)"),
        ]);
        assert_eq!(bad.exit_code(), 1);
        let broken = Envelope::new(vec![CheckReport::error("c", "malformed fixture")]);
        assert_eq!(broken.exit_code(), 1);
    }

    #[test]
    #[should_panic(expected = "counterexample")]
    fn failures_must_name_a_counterexample() {
        let _ = CheckReport::fail("b", "");
    }

    #[test]
    fn lines_render_with_inputs() {
        let line = CheckReport::pass("gnw-verify", "all four identities hold")
            .with_input("m", 4)
            .render_line();
        assert_eq!(line, "PASS  gnw-verify (m = 4): all four identities hold");
    }

    #[test]
    fn timing_lives_in_the_sidecar() {
        let envelope = Envelope::new(vec![
            CheckReport::pass("a", "ok").with_wall(Duration::from_millis(7)),
            CheckReport::pass("b", "ok").with_wall(Duration::from_millis(5)),
        ]);
        assert_eq!(envelope.total_wall(), Duration::from_millis(12));
        let timing = envelope.timing_json();
        assert_eq!(timing["total_millis"], 12);
        assert_eq!(timing["per_check_millis"][1][0], "b");
    }
}
