use serde::Serialize;
use serde_json::Value;

/// One machine-checked claim.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub check_id: String,
    pub anchor: String,
    pub inputs: Value,
    pub expected: Value,
    pub got: Value,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(
        check_id: impl Into<String>,
        anchor: impl Into<String>,
        inputs: Value,
        expected: Value,
        got: Value,
    ) -> Self {
        let pass = expected == got;
        Report {
            check_id: check_id.into(),
            anchor: anchor.into(),
            inputs,
            expected,
            got,
            pass,
            notes: Vec::new(),
        }
    }

    /// Like [`Report::new`] but with an explicit verdict, for checks whose
    /// equality notion is not plain JSON equality.
    pub fn with_verdict(
        check_id: impl Into<String>,
        anchor: impl Into<String>,
        inputs: Value,
        expected: Value,
        got: Value,
        pass: bool,
    ) -> Self {
        let mut r = Report::new(check_id, anchor, inputs, expected, got);
        r.pass = pass;
        r
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }
}

/// Sort reports canonically and report whether all passed.
pub fn finalize(reports: &mut [Report]) -> bool {
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    reports.iter().all(|r| r.pass)
}
