//! Type-expression resolution, template argument deduction, substitution
//! with SFINAE semantics, and overload selection.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::ast::TypeExpr;
use crate::deduce::{
    bind_params, decltype_of, function_type, resolve_param_type, DeclStyle, FnDeclForm,
};
use crate::env::{Entity, Env, FunctionEntity};
use crate::error::{Error, Rejection};
use crate::traits::eval_trait_type;
use crate::types::{Type, ValueCategory};

/// Result of substituting into a type expression. A failure is an
/// ordinary value: it removes a candidate rather than aborting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubstOutcome {
    Ok(Type),
    Failure(String),
}

impl SubstOutcome {
    pub fn is_ok(&self) -> bool {
        matches!(self, SubstOutcome::Ok(_))
    }

    pub fn into_result(self) -> Result<Type, Error> {
        match self {
            SubstOutcome::Ok(t) => Ok(t),
            SubstOutcome::Failure(reason) => Err(Error::SubstitutionFailure(reason)),
        }
    }
}

/// Resolves a type expression in `env`. Outside of template substitution
/// every failure is a hard error.
pub fn resolve_type(te: &TypeExpr, env: &Env<'_>) -> Result<Type, Error> {
    match te {
        TypeExpr::Scalar(kind) => Ok(Type::scalar(*kind)),
        TypeExpr::Named { name, args } => resolve_named(name, args, env),
        TypeExpr::Const(inner) => Ok(resolve_type(inner, env)?.add_const()),
        TypeExpr::Volatile(inner) => {
            Ok(resolve_type(inner, env)?.add_cv(crate::types::Cv::VOLATILE))
        }
        TypeExpr::Pointer(inner) => {
            let t = resolve_type(inner, env)?;
            if t.is_reference() {
                return Err(Error::InvalidType(format!("pointer to reference '{}'", t)));
            }
            Ok(Type::pointer(t))
        }
        TypeExpr::LValueRef(inner) => reference_to(resolve_type(inner, env)?, Type::lvalue_ref),
        TypeExpr::RValueRef(inner) => reference_to(resolve_type(inner, env)?, Type::rvalue_ref),
        TypeExpr::Function { ret, params } => {
            let ret = resolve_type(ret, env)?;
            let params = params
                .iter()
                .map(|p| resolve_param_type(p, env))
                .collect::<Result<Vec<_>, _>>()?;
            function_type(params, ret)
        }
        TypeExpr::Decltype(e) => decltype_of(e, env),
        TypeExpr::Trait(call) => eval_trait_type(call, env)?.into_result(),
        TypeExpr::Concrete(t) => Ok(t.clone()),
    }
}

fn reference_to(t: Type, make: fn(Type) -> Type) -> Result<Type, Error> {
    if t.is_void() {
        return Err(Error::InvalidType("reference to void".into()));
    }
    Ok(make(t))
}

fn resolve_named(name: &str, args: &[TypeExpr], env: &Env<'_>) -> Result<Type, Error> {
    match env.lookup(name) {
        Some(Entity::TypeAlias(t)) if args.is_empty() => Ok(t.clone()),
        Some(Entity::Class(def)) => {
            if def.template_params.len() != args.len() {
                return Err(Error::TemplateArity {
                    name: name.into(),
                    expected: def.template_params.len(),
                    found: args.len(),
                });
            }
            let args = args
                .iter()
                .map(|a| resolve_type(a, env))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(bad) = args.iter().find(|a| a.is_function()) {
                return Err(Error::InvalidType(format!(
                    "function type '{}' as template argument",
                    bad
                )));
            }
            Ok(Type::class(name, args))
        }
        Some(Entity::Functions(set)) if args.is_empty() => match set.as_slice() {
            [FunctionEntity::Plain(t)] => Ok(t.clone()),
            _ => Err(Error::NotAType(name.into())),
        },
        Some(_) => Err(Error::NotAType(name.into())),
        None => Err(Error::UnknownType(name.into())),
    }
}

/// Deduced template arguments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Binding(BTreeMap<String, Type>);

impl Binding {
    pub fn new() -> Binding {
        Binding::default()
    }

    pub fn get(&self, param: &str) -> Option<&Type> {
        self.0.get(param)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Binds `param`, failing if it is already bound to something else.
    pub fn bind(&mut self, param: &str, t: Type) -> Result<(), Error> {
        match self.0.get(param) {
            Some(existing) if *existing != t => Err(Error::DeductionFailure(format!(
                "conflicting deductions for '{}': '{}' vs '{}'",
                param, existing, t
            ))),
            Some(_) => Ok(()),
            None => {
                self.0.insert(param.into(), t);
                Ok(())
            }
        }
    }

    /// A scope on top of `env` where each parameter names its binding.
    pub fn scope<'e>(&self, env: &'e Env<'_>) -> Result<Env<'e>, Error> {
        let mut scope = env.child();
        for (param, t) in self.iter() {
            scope.declare_alias(param, t.clone())?;
        }
        Ok(scope)
    }
}

impl FromIterator<(String, Type)> for Binding {
    fn from_iter<I: IntoIterator<Item = (String, Type)>>(iter: I) -> Self {
        Binding(iter.into_iter().collect())
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}: {}", k, v)?;
        }
        f.write_str("}")
    }
}

/// A function template.
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateFunction {
    pub name: String,
    pub template_params: Vec<String>,
    pub form: FnDeclForm,
}

impl TemplateFunction {
    /// Checks that every template parameter can be deduced from the
    /// parameter list.
    pub fn new(
        name: impl Into<String>,
        template_params: Vec<String>,
        form: FnDeclForm,
    ) -> Result<TemplateFunction, Error> {
        for (i, p) in template_params.iter().enumerate() {
            if template_params[..i].contains(p) {
                return Err(Error::Redeclaration(p.clone()));
            }
            let deducible = form
                .params
                .iter()
                .any(|param| mentions_deducibly(&param.ty, p));
            if !deducible {
                return Err(Error::NonDeducibleParam(p.clone()));
            }
        }
        Ok(TemplateFunction {
            name: name.into(),
            template_params,
            form,
        })
    }

    pub fn patterns(&self) -> Vec<TypeExpr> {
        self.form.params.iter().map(|p| p.ty.clone()).collect()
    }
}

fn mentions_deducibly(te: &TypeExpr, param: &str) -> bool {
    match te {
        TypeExpr::Named { name, args } => {
            (name == param && args.is_empty()) || args.iter().any(|a| mentions_deducibly(a, param))
        }
        TypeExpr::Const(inner)
        | TypeExpr::Volatile(inner)
        | TypeExpr::Pointer(inner)
        | TypeExpr::LValueRef(inner)
        | TypeExpr::RValueRef(inner) => mentions_deducibly(inner, param),
        TypeExpr::Function { ret, params } => {
            mentions_deducibly(ret, param) || params.iter().any(|p| mentions_deducibly(p, param))
        }
        // non-deduced contexts
        TypeExpr::Decltype(_)
        | TypeExpr::Trait(_)
        | TypeExpr::Scalar(_)
        | TypeExpr::Concrete(_) => false,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Match {
    /// Top level of a by-value parameter, or a pointee/referee: the argument
    /// may carry fewer qualifiers than the pattern.
    Adjustable,
    /// Inside template arguments and function types: cv must agree.
    Exact,
}

/// Structural deduction of `template_params` from `patterns` against
/// argument types (reference-annotated: `T&` marks an lvalue argument).
pub fn deduce_template_args(
    template_params: &[String],
    patterns: &[TypeExpr],
    arg_types: &[Type],
) -> Result<Binding, Error> {
    if patterns.len() != arg_types.len() {
        return Err(Error::DeductionFailure(format!(
            "expected {} argument(s), got {}",
            patterns.len(),
            arg_types.len()
        )));
    }
    let is_param = |n: &str| template_params.iter().any(|p| p == n);
    let mut binding = Binding::new();
    for (pattern, arg) in patterns.iter().zip(arg_types) {
        deduce_pair(pattern, arg, &is_param, &mut binding)?;
    }
    for p in template_params {
        if binding.get(p).is_none() {
            return Err(Error::DeductionFailure(format!("could not deduce '{}'", p)));
        }
    }
    Ok(binding)
}

fn deduce_pair(
    pattern: &TypeExpr,
    arg: &Type,
    is_param: &dyn Fn(&str) -> bool,
    binding: &mut Binding,
) -> Result<(), Error> {
    match pattern {
        TypeExpr::LValueRef(inner) => {
            unify(inner, arg.strip_ref(), Match::Adjustable, is_param, binding)
        }
        TypeExpr::RValueRef(inner) => match &**inner {
            // forwarding reference: an lvalue argument deduces `A&`
            TypeExpr::Named { name, args }
                if args.is_empty() && is_param(name) && arg.is_lvalue_ref() =>
            {
                binding.bind(name, arg.clone())
            }
            _ => unify(inner, arg.strip_ref(), Match::Adjustable, is_param, binding),
        },
        _ => {
            let mut adjusted = arg.strip_ref().clone().unqualified();
            if adjusted.is_function() {
                adjusted = Type::pointer(adjusted);
            }
            unify(
                strip_top_qualifiers(pattern),
                &adjusted,
                Match::Adjustable,
                is_param,
                binding,
            )
        }
    }
}

fn strip_top_qualifiers(te: &TypeExpr) -> &TypeExpr {
    match te {
        TypeExpr::Const(inner) | TypeExpr::Volatile(inner) => strip_top_qualifiers(inner),
        other => other,
    }
}

fn unify(
    pattern: &TypeExpr,
    arg: &Type,
    mode: Match,
    is_param: &dyn Fn(&str) -> bool,
    binding: &mut Binding,
) -> Result<(), Error> {
    let mismatch =
        || Error::DeductionFailure(format!("cannot match '{}' against '{}'", pattern, arg));
    match pattern {
        TypeExpr::Named { name, args } if args.is_empty() && is_param(name) => {
            binding.bind(name, arg.clone())
        }
        TypeExpr::Const(inner) | TypeExpr::Volatile(inner) => {
            let wants_const = matches!(pattern, TypeExpr::Const(_));
            let mut cv = arg.cv();
            let has = if wants_const {
                cv.is_const
            } else {
                cv.is_volatile
            };
            if mode == Match::Exact && !has {
                return Err(mismatch());
            }
            if wants_const {
                cv.is_const = false;
            } else {
                cv.is_volatile = false;
            }
            unify(inner, &arg.clone().with_cv(cv), mode, is_param, binding)
        }
        TypeExpr::Pointer(inner) => match arg {
            Type::Pointer { pointee, cv } if mode == Match::Adjustable || cv.is_empty() => {
                unify(inner, pointee, mode, is_param, binding)
            }
            _ => Err(mismatch()),
        },
        TypeExpr::LValueRef(inner) => match arg {
            Type::LValueRef(referee) => unify(inner, referee, Match::Exact, is_param, binding),
            _ => Err(mismatch()),
        },
        TypeExpr::RValueRef(inner) => match arg {
            Type::RValueRef(referee) => unify(inner, referee, Match::Exact, is_param, binding),
            _ => Err(mismatch()),
        },
        TypeExpr::Named { name, args } if !args.is_empty() => match arg {
            Type::Class {
                name: arg_name,
                args: arg_args,
                cv,
            } if arg_name == name
                && arg_args.len() == args.len()
                && (mode == Match::Adjustable || cv.is_empty()) =>
            {
                args.iter()
                    .zip(arg_args)
                    .try_for_each(|(p, a)| unify(p, a, Match::Exact, is_param, binding))
            }
            _ => Err(mismatch()),
        },
        TypeExpr::Function { ret, params } => match arg {
            Type::Function {
                ret: arg_ret,
                params: arg_params,
            } if arg_params.len() == params.len() => {
                unify(ret, arg_ret, Match::Exact, is_param, binding)?;
                params
                    .iter()
                    .zip(arg_params)
                    .try_for_each(|(p, a)| unify(p, a, Match::Exact, is_param, binding))
            }
            _ => Err(mismatch()),
        },
        // concrete or non-deduced: checked after substitution
        _ => Ok(()),
    }
}

/// Resolves `te` with the template parameters of `binding` in scope. Any
/// error becomes a [`SubstOutcome::Failure`].
pub fn substitute(te: &TypeExpr, binding: &Binding, env: &Env<'_>) -> SubstOutcome {
    let result = binding
        .scope(env)
        .and_then(|scope| resolve_type(te, &scope));
    match result {
        Ok(t) => SubstOutcome::Ok(t),
        Err(e) => SubstOutcome::Failure(e.to_string()),
    }
}

/// Function type of a template under `binding`. Failures are values.
pub fn substitute_signature(form: &FnDeclForm, binding: &Binding, env: &Env<'_>) -> SubstOutcome {
    let result = (|| {
        let scope = binding.scope(env)?;
        let params = form
            .params
            .iter()
            .map(|p| resolve_param_type(&p.ty, &scope))
            .collect::<Result<Vec<_>, _>>()?;
        let ret = match form.style {
            DeclStyle::Leading => resolve_type(&form.return_type, &scope)?,
            DeclStyle::Trailing => {
                let mut inner = scope.child();
                bind_params(&mut inner, &form.params, &params)?;
                resolve_type(&form.return_type, &inner)?
            }
        };
        function_type(params, ret)
    })();
    match result {
        Ok(t) => SubstOutcome::Ok(t),
        Err(e) => SubstOutcome::Failure(e.to_string()),
    }
}

/// Whether a parameter of type `param` can be initialized from an
/// argument (reference-annotated as in [`deduce_template_args`]).
///
/// Exact matches, arithmetic conversions, pointer qualification
/// conversions and conversion to `void*` are accepted; nothing user-defined.
pub fn accepts(param: &Type, arg: &Type) -> Result<(), String> {
    let category = ValueCategory::of_declared(arg);
    let a = arg.strip_ref();
    let same = |r: &Type| r.clone().unqualified() == a.clone().unqualified();
    let fail = || {
        Err(format!(
            "cannot pass {} of type '{}' as '{}'",
            category, a, param
        ))
    };
    match param {
        Type::LValueRef(r) => {
            let const_ref = r.cv().is_const && !r.cv().is_volatile;
            if same(r) && r.cv().contains(a.cv()) {
                if category == ValueCategory::LValue || const_ref {
                    Ok(())
                } else {
                    Err(format!(
                        "cannot bind non-const lvalue reference '{}' to an {}",
                        param, category
                    ))
                }
            } else if const_ref && !same(r) && convertible(r, a) {
                Ok(())
            } else {
                fail()
            }
        }
        Type::RValueRef(r) => {
            if same(r) {
                if category == ValueCategory::LValue {
                    Err(format!(
                        "cannot bind rvalue reference '{}' to an lvalue",
                        param
                    ))
                } else if r.cv().contains(a.cv()) {
                    Ok(())
                } else {
                    fail()
                }
            } else if convertible(r, a) {
                Ok(())
            } else {
                fail()
            }
        }
        p => {
            if convertible(p, a) {
                Ok(())
            } else {
                fail()
            }
        }
    }
}

fn convertible(to: &Type, from: &Type) -> bool {
    let to_u = to.clone().unqualified();
    let from_u = from.clone().unqualified();
    if to_u == from_u {
        return true;
    }
    match (&to_u, &from_u) {
        (Type::Scalar { .. }, Type::Scalar { .. }) => {
            to_u.is_arithmetic() && from_u.is_arithmetic()
        }
        (Type::Pointer { pointee: tp, .. }, Type::Pointer { pointee: fp, .. }) => {
            let same_pointee = tp.clone().unqualified() == fp.clone().unqualified()
                || (tp.is_void() && !fp.is_function());
            same_pointee && tp.cv().contains(fp.cv())
        }
        (Type::Pointer { pointee, .. }, Type::Function { .. }) => **pointee == from_u,
        _ => false,
    }
}

/// A surviving overload candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub name: String,
    /// Position in the overload set, in declaration order.
    pub index: usize,
    pub template: Option<Rc<TemplateFunction>>,
    pub binding: Binding,
    /// `Type::Function` with every type expression resolved.
    pub signature: Type,
}

impl Candidate {
    pub fn return_type(&self) -> &Type {
        match &self.signature {
            Type::Function { ret, .. } => ret,
            _ => unreachable!("candidate signatures are function types"),
        }
    }
}

/// One member of an overload set and what became of it.
#[derive(Debug, Clone)]
pub struct CandidateOutcome {
    pub label: String,
    pub result: Result<Candidate, String>,
}

/// Builds every candidate of the overload set `name` for the given
/// arguments, keeping failed ones with their reasons.
pub fn overload_candidates(
    name: &str,
    arg_types: &[Type],
    env: &Env<'_>,
) -> Result<Vec<CandidateOutcome>, Error> {
    let set = match env.lookup(name) {
        Some(Entity::Functions(set)) => set,
        Some(Entity::Variable(t)) => return Err(Error::NotCallable(t.clone())),
        Some(_) => return Err(Error::NotAValue(name.into())),
        None => return Err(Error::UnknownIdentifier(name.into())),
    };
    Ok(set
        .iter()
        .enumerate()
        .map(|(index, entity)| build_candidate(name, index, entity, arg_types, env))
        .collect())
}

fn build_candidate(
    name: &str,
    index: usize,
    entity: &FunctionEntity,
    arg_types: &[Type],
    env: &Env<'_>,
) -> CandidateOutcome {
    let (label, template, binding, signature) = match entity {
        FunctionEntity::Plain(sig) => (
            format!("#{} {}", index + 1, sig),
            None,
            Binding::new(),
            SubstOutcome::Ok(sig.clone()),
        ),
        FunctionEntity::Template(tf) => {
            let label = format!("#{} {}", index + 1, template_label(tf));
            let binding = match deduce_template_args(&tf.template_params, &tf.patterns(), arg_types)
            {
                Ok(b) => b,
                Err(e) => {
                    return CandidateOutcome {
                        label,
                        result: Err(e.to_string()),
                    }
                }
            };
            let sig = substitute_signature(&tf.form, &binding, env);
            (label, Some(Rc::clone(tf)), binding, sig)
        }
    };
    let result = match signature {
        SubstOutcome::Failure(reason) => Err(reason),
        SubstOutcome::Ok(signature) => check_arguments(&signature, arg_types).map(|()| Candidate {
            name: name.into(),
            index,
            template,
            binding,
            signature,
        }),
    };
    CandidateOutcome { label, result }
}

fn template_label(tf: &TemplateFunction) -> String {
    let mut out = format!("template<{}> {}(", tf.template_params.join(", "), tf.name);
    for (i, p) in tf.form.params.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&p.ty.to_string());
    }
    out.push(')');
    out
}

fn check_arguments(signature: &Type, arg_types: &[Type]) -> Result<(), String> {
    let params = match signature {
        Type::Function { params, .. } => params,
        _ => return Err("not a function".into()),
    };
    if params.len() != arg_types.len() {
        return Err(format!(
            "expects {} argument(s), got {}",
            params.len(),
            arg_types.len()
        ));
    }
    for (i, (p, a)) in params.iter().zip(arg_types).enumerate() {
        accepts(p, a).map_err(|e| format!("argument {}: {}", i + 1, e))?;
    }
    Ok(())
}

/// Selects the single viable candidate for `name(args...)`.
pub fn resolve_overload(name: &str, arg_types: &[Type], env: &Env<'_>) -> Result<Candidate, Error> {
    let outcomes = overload_candidates(name, arg_types, env)?;
    let mut survivors = Vec::new();
    let mut rejected = Vec::new();
    for outcome in outcomes {
        match outcome.result {
            Ok(c) => survivors.push((outcome.label, c)),
            Err(reason) => rejected.push(Rejection {
                candidate: outcome.label,
                reason,
            }),
        }
    }
    match survivors.len() {
        1 => Ok(survivors.pop().unwrap().1),
        0 => Err(Error::NoViableOverload {
            name: name.into(),
            rejected,
        }),
        _ => Err(Error::AmbiguousOverload {
            name: name.into(),
            candidates: survivors.into_iter().map(|(label, _)| label).collect(),
        }),
    }
}
