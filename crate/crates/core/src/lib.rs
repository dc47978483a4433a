//! Type-deduction engine for a small C++11 subset.
//!
//! The engine answers what type `auto`, `decltype`, `declval`, trailing
//! return types and `<type_traits>` produce, and which function template an
//! `enable_if`-guarded overload set selects. It works on resolved [`Type`]s
//! and unresolved [`TypeExpr`]s inside a scoped [`Env`].
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod ast;
pub mod deduce;
pub mod env;
pub mod error;
pub mod resolve;
pub mod traits;
pub mod types;

pub use ast::{classify, evaluate, BoolExpr, Expr, Store, TraitCall, TypeExpr, TypedExpr};
pub use deduce::{
    auto_via_decltype, check_return_scope, decltype_of, declval_type, deduce_auto,
    resolve_function_decl, AutoPattern, DeclStyle, EvalContext, FnDeclForm, Param,
};
pub use env::{CallOperator, ClassDef, ClassInstance, Entity, Env, FunctionEntity};
pub use error::{Error, Rejection};
pub use resolve::{
    accepts, deduce_template_args, overload_candidates, resolve_overload, resolve_type, substitute,
    substitute_signature, Binding, Candidate, CandidateOutcome, SubstOutcome, TemplateFunction,
};
pub use traits::{
    eval_bool, eval_enable_if, eval_predicate, eval_result_of, eval_trait_type, eval_trait_value,
    eval_transform, trait_kind, Predicate, TraitKind, Transform,
};
pub use types::{
    collapse_refs, common_arithmetic_type, strip_ref_and_top_cv, Cv, RefKind, ScalarKind, Type,
    ValueCategory,
};
