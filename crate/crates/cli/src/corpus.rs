//! Golden corpus: a directory of `.tdl` files, each declaring the outcome
//! it expects in a header comment.
//!
//! ```text
//! // expect: pass                 (the default)
//! // expect: fail                 at least one assertion fails, no errors
//! // expect: error <substring>    some diagnostic contains <substring>
//! ```

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::check::check_source;
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "message", rename_all = "snake_case")]
pub enum Expectation {
    Pass,
    Fail,
    Error(String),
}

impl Expectation {
    /// Reads the `// expect:` header. Only the leading comment block is
    /// searched.
    pub fn from_source(src: &str) -> Result<Expectation, String> {
        for line in src.lines().map(str::trim) {
            if line.is_empty() {
                continue;
            }
            let Some(comment) = line.strip_prefix("//") else {
                break;
            };
            let Some(rest) = comment.trim().strip_prefix("expect:") else {
                continue;
            };
            let rest = rest.trim();
            return match rest.split_once(' ') {
                None if rest == "pass" => Ok(Expectation::Pass),
                None if rest == "fail" => Ok(Expectation::Fail),
                Some(("error", text)) if !text.trim().is_empty() => {
                    Ok(Expectation::Error(text.trim().to_string()))
                }
                _ => Err(format!("malformed expectation '{}'", rest)),
            };
        }
        Ok(Expectation::Pass)
    }

    pub fn is_met_by(&self, report: &Report) -> bool {
        match self {
            Expectation::Pass => report.passed,
            Expectation::Fail => report.errors() == 0 && report.failed_assertions() > 0,
            Expectation::Error(text) => report.messages().any(|m| m.contains(text.as_str())),
        }
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Pass => f.write_str("pass"),
            Expectation::Fail => f.write_str("fail"),
            Expectation::Error(text) => write!(f, "error containing '{}'", text),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FileResult {
    pub path: String,
    pub expectation: Expectation,
    pub ok: bool,
    pub report: Report,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub files: Vec<FileResult>,
    pub passed: bool,
}

impl Summary {
    pub fn failures(&self) -> impl Iterator<Item = &FileResult> {
        self.files.iter().filter(|f| !f.ok)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.files {
            if f.ok {
                out.push_str(&format!("ok    {}\n", f.path));
            } else {
                out.push_str(&format!("FAIL  {} (expected {})\n", f.path, f.expectation));
                for line in f.report.to_text().lines() {
                    out.push_str("      ");
                    out.push_str(line);
                    out.push('\n');
                }
            }
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{} files, {} passed, {} failed\n",
            self.files.len(),
            self.files.len() - failed,
            failed
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summaries always serialize")
    }
}

/// The `.tdl` files of `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "tdl") && path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Checks every file of the corpus. Files are independent and run in
/// parallel; results come back in file-name order.
pub fn run_corpus(dir: &Path) -> io::Result<Summary> {
    let files = corpus_files(dir)?;
    let sources = files
        .iter()
        .map(|p| fs::read_to_string(p).map(|s| (p.display().to_string(), s)))
        .collect::<io::Result<Vec<_>>>()?;
    let results: Vec<FileResult> = sources
        .par_iter()
        .map(|(path, src)| run_file(path, src))
        .collect();
    let passed = results.iter().all(|r| r.ok);
    Ok(Summary {
        files: results,
        passed,
    })
}

fn run_file(path: &str, src: &str) -> FileResult {
    let report = check_source(src, path).report;
    match Expectation::from_source(src) {
        Ok(expectation) => FileResult {
            path: path.into(),
            ok: expectation.is_met_by(&report),
            expectation,
            report,
        },
        Err(message) => {
            let mut report = report;
            let mut entry =
                crate::report::Entry::new(crate::report::EntryKind::Parse, "", Default::default());
            entry.diagnostics.push(crate::report::Diagnostic::error(
                crate::syntax::Span { line: 1, col: 1 },
                message,
            ));
            report.entries.insert(0, entry);
            report.passed = false;
            FileResult {
                path: path.into(),
                expectation: Expectation::Pass,
                ok: false,
                report,
            }
        }
    }
}
