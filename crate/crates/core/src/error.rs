use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::types::{Type, ValueCategory};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown identifier '{0}'")]
    UnknownIdentifier(String),
    #[error("unknown type '{0}'")]
    UnknownType(String),
    #[error("'{0}' does not name a type")]
    NotAType(String),
    #[error("'{0}' does not name a value")]
    NotAValue(String),
    #[error("redeclaration of '{0}'")]
    Redeclaration(String),
    #[error("duplicate field '{field}' in '{class}'")]
    DuplicateField { class: String, field: String },
    #[error("'{class}' has no field named '{field}'")]
    NoSuchField { class: String, field: String },
    #[error("'->' applied to non-pointer type '{0}'")]
    NotAPointer(Type),
    #[error("member access on non-class type '{0}'")]
    NotAClass(Type),
    #[error("incomplete type '{0}'")]
    IncompleteType(Type),
    #[error("operand of type '{0}' is not arithmetic")]
    NotArithmetic(Type),
    #[error("cannot increment {category} of type '{ty}'")]
    InvalidIncrement { ty: Type, category: ValueCategory },
    #[error("invalid type: {0}")]
    InvalidType(String),
    #[error("'{name}' expects {expected} template argument(s), got {found}")]
    TemplateArity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("cannot bind non-const lvalue reference to an {0}")]
    CannotBindNonConstRef(ValueCategory),
    #[error("declval used in an evaluated context")]
    DeclvalInEvaluatedContext,
    #[error("expression cannot be evaluated")]
    NonEvaluableExpr,
    #[error("'{0}' has no value")]
    Uninitialized(String),
    #[error("integer overflow")]
    Overflow,
    #[error("unknown trait '{0}'")]
    UnknownTrait(String),
    #[error("trait '{name}' expects {expected}")]
    TraitArity {
        name: String,
        expected: &'static str,
    },
    #[error("'{0}' is not callable")]
    NotCallable(Type),
    #[error("substitution failure: {0}")]
    SubstitutionFailure(String),
    #[error("template argument deduction failed: {0}")]
    DeductionFailure(String),
    #[error("template parameter '{0}' is not deducible from the parameter list")]
    NonDeducibleParam(String),
    #[error("no viable overload for '{name}'{}", render_rejections(.rejected))]
    NoViableOverload {
        name: String,
        rejected: Vec<Rejection>,
    },
    #[error("ambiguous call to '{name}': {} candidates survive", .candidates.len())]
    AmbiguousOverload {
        name: String,
        candidates: Vec<String>,
    },
}

/// One discarded overload candidate and why it was discarded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub candidate: String,
    pub reason: String,
}

fn render_rejections(rejected: &[Rejection]) -> String {
    let mut out = String::new();
    for r in rejected {
        out.push_str("; ");
        out.push_str(&r.candidate);
        out.push_str(": ");
        out.push_str(&r.reason);
    }
    out
}
