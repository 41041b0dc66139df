use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::certificate::Certificate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    InputError,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::InputError => 2,
        }
    }
}

/// Outcome of one CLI run. Timing appears only in the text rendering, so
/// machine reports are reproducible byte for byte.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 over the command, its flags and the input documents.
    pub inputs_digest: String,
    pub results: Vec<String>,
    pub certificates: Vec<Certificate>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub timing: Duration,
}

/// Accumulates the digest of a run's inputs.
#[derive(Default)]
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn add(&mut self, label: &str, bytes: &[u8]) {
        self.0.update((label.len() as u64).to_le_bytes());
        self.0.update(label.as_bytes());
        self.0.update((bytes.len() as u64).to_le_bytes());
        self.0.update(bytes);
    }

    pub fn finish(self) -> String {
        format!("sha256:{:x}", self.0.finalize())
    }
}

impl RunReport {
    pub fn new(command: &str, inputs_digest: String, results: Vec<String>, certificates: Vec<Certificate>) -> Self {
        let verdict = if certificates.iter().all(|c| c.passed) { Verdict::Pass } else { Verdict::Fail };
        RunReport { command: command.into(), inputs_digest, results, certificates, verdict, error: None, timing: Duration::ZERO }
    }

    pub fn input_error(command: &str, inputs_digest: String, error: String) -> Self {
        RunReport {
            command: command.into(),
            inputs_digest,
            results: vec![],
            certificates: vec![],
            verdict: Verdict::InputError,
            error: Some(error),
            timing: Duration::ZERO,
        }
    }

    pub fn machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        let _ = writeln!(s, "inputs:  {}", self.inputs_digest);
        for r in &self.results {
            let _ = writeln!(s, "  {r}");
        }
        for c in &self.certificates {
            s.push_str(&c.to_string());
        }
        if let Some(e) = &self.error {
            let _ = writeln!(s, "error: {e}");
        }
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::InputError => "INPUT ERROR",
        };
        let _ = writeln!(s, "verdict: {verdict}");
        let _ = writeln!(s, "time: {} ms", self.timing.as_millis());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::Witness;

    #[test]
    fn verdicts() {
        let pass = RunReport::new("x", String::new(), vec![], vec![Certificate::pass("a")]);
        assert_eq!(pass.verdict.exit_code(), 0);
        let fail = RunReport::new("x", String::new(), vec![], vec![Certificate::pass("a"), Certificate::fail("b", Witness::note("c"))]);
        assert_eq!(fail.verdict.exit_code(), 1);
        assert!(fail.machine().contains("\"verdict\": \"fail\""));
        assert!(!fail.machine().contains("time"));
    }

    #[test]
    fn digest_separates_fields() {
        let mut a = InputDigest::default();
        a.add("ab", b"c");
        let mut b = InputDigest::default();
        b.add("a", b"bc");
        assert_ne!(a.finish(), b.finish());
    }
}
