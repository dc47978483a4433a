//! Front end for the deducto engine: the declaration language, the
//! checker that produces reports, the golden-corpus runner and the
//! compiler cross-check.

pub mod check;
pub mod corpus;
pub mod diff;
pub mod lexer;
pub mod parser;
pub mod report;
pub mod syntax;

pub use check::{check, check_source, Checked, Probe, ProbeKind};
pub use corpus::{run_corpus, Expectation, Summary};
pub use parser::{parse, parse_expr, parse_type, ParseError};
pub use report::Report;
pub use syntax::SourceFile;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// A failed assertion, an error diagnostic, or a divergence.
    pub const FAILURE: i32 = 1;
    /// Bad arguments or unreadable input.
    pub const USAGE: i32 = 2;
    /// `diff` could not run the compiler; not a failure.
    pub const COMPILER_UNAVAILABLE: i32 = 3;
}
