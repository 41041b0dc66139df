//! Structured pass/fail reports for every decision procedure.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Where a check failed: a tower level, a homological degree, or both.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<i64>,
    pub detail: String,
}

impl Witness {
    pub fn degree(degree: i64, detail: impl Into<String>) -> Self {
        Witness { level: None, degree: Some(degree), detail: detail.into() }
    }

    pub fn level(level: usize, detail: impl Into<String>) -> Self {
        Witness { level: Some(level), degree: None, detail: detail.into() }
    }

    pub fn note(detail: impl Into<String>) -> Self {
        Witness { level: None, degree: None, detail: detail.into() }
    }

    pub fn at_level(mut self, level: usize) -> Self {
        self.level = Some(level);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub check: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub children: Vec<Certificate>,
}

impl Certificate {
    pub fn pass(check: impl Into<String>) -> Self {
        Certificate { check: check.into(), passed: true, witness: None, notes: vec![], children: vec![] }
    }

    pub fn fail(check: impl Into<String>, witness: Witness) -> Self {
        Certificate { check: check.into(), passed: false, witness: Some(witness), notes: vec![], children: vec![] }
    }

    pub fn from_result(check: impl Into<String>, r: Result<(), Witness>) -> Self {
        match r {
            Ok(()) => Self::pass(check),
            Err(w) => Self::fail(check, w),
        }
    }

    /// A certificate that passes iff every child passes. The witness is the
    /// first failing child's, tagged with that child's check name.
    pub fn all(check: impl Into<String>, children: Vec<Certificate>) -> Self {
        let failed = children.iter().find(|c| !c.passed);
        let witness = failed.map(|c| {
            let mut w = c.witness.clone().unwrap_or_else(|| Witness::note(""));
            w.detail = if w.detail.is_empty() { c.check.clone() } else { format!("{}: {}", c.check, w.detail) };
            w
        });
        Certificate { check: check.into(), passed: failed.is_none(), witness, notes: vec![], children }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_level(mut self, level: usize) -> Self {
        if let Some(w) = self.witness.as_mut() {
            w.level.get_or_insert(level);
        }
        self
    }

    pub fn witness_level(&self) -> Option<usize> {
        self.witness.as_ref().and_then(|w| w.level)
    }

    pub fn witness_degree(&self) -> Option<i64> {
        self.witness.as_ref().and_then(|w| w.degree)
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        write!(f, "{pad}[{}] {}", if self.passed { "PASS" } else { "FAIL" }, self.check)?;
        if let Some(w) = &self.witness {
            let mut at = Vec::new();
            if let Some(l) = w.level {
                at.push(format!("level {l}"));
            }
            if let Some(d) = w.degree {
                at.push(format!("degree {d}"));
            }
            if !at.is_empty() {
                write!(f, " at {}", at.join(", "))?;
            }
            if !w.detail.is_empty() {
                write!(f, ": {}", w.detail)?;
            }
        }
        writeln!(f)?;
        for n in &self.notes {
            writeln!(f, "{pad}    note: {n}")?;
        }
        for c in &self.children {
            c.write_indented(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}
