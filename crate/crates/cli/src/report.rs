//! Per-declaration results and their text / JSON renderings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::syntax::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Variable,
    Struct,
    Function,
    Template,
    StaticAssertType,
    AssertValue,
    AssertSelects,
    /// The file did not parse; the report holds only this entry.
    Parse,
}

impl EntryKind {
    pub fn name(self) -> &'static str {
        match self {
            EntryKind::Variable => "variable",
            EntryKind::Struct => "struct",
            EntryKind::Function => "function",
            EntryKind::Template => "template",
            EntryKind::StaticAssertType => "static_assert_type",
            EntryKind::AssertValue => "assert_value",
            EntryKind::AssertSelects => "assert_selects",
            EntryKind::Parse => "parse",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl Diagnostic {
    pub fn error(span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            line: span.line,
            col: span.col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub name: String,
    pub kind: EntryKind,
    #[serde(rename = "type")]
    pub ty: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
    pub line: u32,
    pub col: u32,
    pub assertions: Vec<Assertion>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Entry {
    pub fn new(kind: EntryKind, name: impl Into<String>, span: Span) -> Entry {
        Entry {
            name: name.into(),
            kind,
            ty: None,
            category: None,
            line: span.line,
            col: span.col,
            assertions: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn has_error(&self) -> bool {
        self.diagnostics
            .iter()
            .any(|d| d.severity == Severity::Error)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub path: String,
    pub passed: bool,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new(path: impl Into<String>, entries: Vec<Entry>) -> Report {
        let mut report = Report {
            path: path.into(),
            passed: true,
            entries,
        };
        report.passed = report.failed_assertions() == 0 && report.errors() == 0;
        report
    }

    pub fn failed_assertions(&self) -> usize {
        self.assertions().filter(|a| !a.pass).count()
    }

    pub fn passed_assertions(&self) -> usize {
        self.assertions().filter(|a| a.pass).count()
    }

    pub fn errors(&self) -> usize {
        self.entries
            .iter()
            .flat_map(|e| &e.diagnostics)
            .filter(|d| d.severity == Severity::Error)
            .count()
    }

    /// Every diagnostic message, in order.
    pub fn messages(&self) -> impl Iterator<Item = &str> {
        self.entries
            .iter()
            .flat_map(|e| &e.diagnostics)
            .map(|d| d.message.as_str())
    }

    fn assertions(&self) -> impl Iterator<Item = &Assertion> {
        self.entries.iter().flat_map(|e| &e.assertions)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = write!(out, "{}:{}:{} {}", self.path, e.line, e.col, e.kind.name());
            if !e.name.is_empty() {
                let _ = write!(out, " {}", e.name);
            }
            if let Some(t) = &e.ty {
                let _ = write!(out, ": {}", t);
            }
            if let Some(c) = &e.category {
                let _ = write!(out, " ({})", c);
            }
            out.push('\n');
            for a in &e.assertions {
                let verdict = if a.pass { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "    {} expected `{}`, got `{}`",
                    verdict, a.expected, a.actual
                );
            }
            for d in &e.diagnostics {
                let severity = match d.severity {
                    Severity::Error => "error",
                    Severity::Warning => "warning",
                };
                let _ = writeln!(
                    out,
                    "    {} at {}:{}: {}",
                    severity, d.line, d.col, d.message
                );
            }
        }
        let _ = writeln!(
            out,
            "{}: {} ({} declarations, {} assertions passed, {} failed, {} errors)",
            self.path,
            if self.passed { "ok" } else { "FAILED" },
            self.entries.len(),
            self.passed_assertions(),
            self.failed_assertions(),
            self.errors()
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}
