//! `<type_traits>`: predicates, transformations, `enable_if` and
//! `result_of`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::ast::{BoolExpr, TraitCall};
use crate::deduce::normalize_return;
use crate::env::Env;
use crate::error::Error;
use crate::resolve::{accepts, resolve_type, SubstOutcome};
use crate::types::{collapse_refs, Cv, RefKind, Type};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Predicate {
    IsAbstract,
    IsTriviallyCopyAssignable,
    IsConst,
    IsReference,
    IsLvalueReference,
    IsRvalueReference,
    IsPointer,
    IsIntegral,
    IsFloatingPoint,
    IsClass,
    IsSame,
}

impl Predicate {
    pub const ALL: [Predicate; 11] = [
        Predicate::IsAbstract,
        Predicate::IsTriviallyCopyAssignable,
        Predicate::IsConst,
        Predicate::IsReference,
        Predicate::IsLvalueReference,
        Predicate::IsRvalueReference,
        Predicate::IsPointer,
        Predicate::IsIntegral,
        Predicate::IsFloatingPoint,
        Predicate::IsClass,
        Predicate::IsSame,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::IsAbstract => "is_abstract",
            Predicate::IsTriviallyCopyAssignable => "is_trivially_copy_assignable",
            Predicate::IsConst => "is_const",
            Predicate::IsReference => "is_reference",
            Predicate::IsLvalueReference => "is_lvalue_reference",
            Predicate::IsRvalueReference => "is_rvalue_reference",
            Predicate::IsPointer => "is_pointer",
            Predicate::IsIntegral => "is_integral",
            Predicate::IsFloatingPoint => "is_floating_point",
            Predicate::IsClass => "is_class",
            Predicate::IsSame => "is_same",
        }
    }

    pub fn from_name(name: &str) -> Option<Predicate> {
        Predicate::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn arity(self) -> usize {
        if self == Predicate::IsSame {
            2
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    RemoveConst,
    RemoveCv,
    RemoveReference,
    AddConst,
    AddLvalueReference,
    AddRvalueReference,
}

impl Transform {
    pub const ALL: [Transform; 6] = [
        Transform::RemoveConst,
        Transform::RemoveCv,
        Transform::RemoveReference,
        Transform::AddConst,
        Transform::AddLvalueReference,
        Transform::AddRvalueReference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Transform::RemoveConst => "remove_const",
            Transform::RemoveCv => "remove_cv",
            Transform::RemoveReference => "remove_reference",
            Transform::AddConst => "add_const",
            Transform::AddLvalueReference => "add_lvalue_reference",
            Transform::AddRvalueReference => "add_rvalue_reference",
        }
    }

    pub fn from_name(name: &str) -> Option<Transform> {
        Transform::ALL.into_iter().find(|t| t.name() == name)
    }

    pub fn apply(self, t: Type) -> Type {
        match self {
            Transform::RemoveConst => {
                let cv = t.cv();
                t.with_cv(Cv {
                    is_const: false,
                    ..cv
                })
            }
            Transform::RemoveCv => t.unqualified(),
            Transform::RemoveReference => t.into_stripped_ref(),
            Transform::AddConst => t.add_const(),
            Transform::AddLvalueReference => collapse_refs(RefKind::LValue, t),
            Transform::AddRvalueReference => collapse_refs(RefKind::RValue, t),
        }
    }
}

/// Which member a trait exposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraitKind {
    /// `::value`
    Value,
    /// `::type`
    Type,
}

/// Member exposed by the registered trait `name`, or `None` when the name
/// is not a known trait.
pub fn trait_kind(name: &str) -> Option<TraitKind> {
    if Predicate::from_name(name).is_some() {
        Some(TraitKind::Value)
    } else if Transform::from_name(name).is_some() || name == "enable_if" || name == "result_of" {
        Some(TraitKind::Type)
    } else {
        None
    }
}

pub fn eval_predicate(name: &str, args: &[Type], env: &Env<'_>) -> Result<bool, Error> {
    let pred = Predicate::from_name(name).ok_or_else(|| Error::UnknownTrait(name.into()))?;
    if args.len() != pred.arity() {
        return Err(Error::TraitArity {
            name: name.into(),
            expected: if pred.arity() == 2 {
                "two type arguments"
            } else {
                "one type argument"
            },
        });
    }
    let t = &args[0];
    Ok(match pred {
        Predicate::IsAbstract => match t {
            Type::Class { name, args, .. } => env.instantiate(name, args)?.is_abstract,
            _ => false,
        },
        Predicate::IsTriviallyCopyAssignable => trivially_copy_assignable(t, env)?,
        Predicate::IsConst => t.is_const(),
        Predicate::IsReference => t.is_reference(),
        Predicate::IsLvalueReference => t.is_lvalue_ref(),
        Predicate::IsRvalueReference => t.is_rvalue_ref(),
        Predicate::IsPointer => t.is_pointer(),
        Predicate::IsIntegral => t.is_integral(),
        Predicate::IsFloatingPoint => t.is_floating(),
        Predicate::IsClass => t.is_class(),
        Predicate::IsSame => args[0] == args[1],
    })
}

// Copy assignment through a reference assigns to the referee, so `int&`
// qualifies while `const int&` and `const int` do not.
fn trivially_copy_assignable(t: &Type, env: &Env<'_>) -> Result<bool, Error> {
    let target = t.strip_ref();
    if target.is_const() {
        return Ok(false);
    }
    Ok(match target {
        Type::Scalar { kind, .. } => kind.is_arithmetic(),
        Type::Pointer { .. } => true,
        Type::Class { name, args, .. } => env.instantiate(name, args)?.is_trivially_copy_assignable,
        _ => false,
    })
}

pub fn eval_transform(name: &str, t: Type) -> Result<Type, Error> {
    let transform = Transform::from_name(name).ok_or_else(|| Error::UnknownTrait(name.into()))?;
    Ok(transform.apply(t))
}

/// `enable_if<cond, payload>::type`; the payload defaults to `void`.
pub fn eval_enable_if(cond: bool, payload: Option<Type>) -> SubstOutcome {
    if cond {
        SubstOutcome::Ok(payload.unwrap_or_else(Type::void))
    } else {
        SubstOutcome::Failure("enable_if condition false".into())
    }
}

/// `result_of<callee(args...)>::type`. Argument types use the reference
/// convention: `T&` is an lvalue argument, `T&&` or `T` an rvalue.
pub fn eval_result_of(callee: &Type, args: &[Type], env: &Env<'_>) -> Result<SubstOutcome, Error> {
    let target = callee.strip_ref();
    let target = match target {
        Type::Pointer { pointee, .. } if pointee.is_function() => pointee,
        other => other,
    };
    let operators: Vec<Type> = match target {
        Type::Function { .. } => alloc::vec![target.clone()],
        Type::Class { name, args, .. } => env.instantiate(name, args)?.call_operators.clone(),
        _ => return Err(Error::NotCallable(callee.clone())),
    };
    let mut reasons = Vec::new();
    let mut viable = Vec::new();
    for op in &operators {
        match op {
            Type::Function { params, ret } => match match_params(params, args) {
                Ok(()) => viable.push(normalize_return((**ret).clone())),
                Err(reason) => reasons.push(reason),
            },
            _ => unreachable!("call operators are function types"),
        }
    }
    Ok(match viable.len() {
        1 => SubstOutcome::Ok(viable.pop().unwrap()),
        0 if operators.is_empty() => {
            SubstOutcome::Failure(alloc::format!("'{}' has no call operator", callee))
        }
        0 => SubstOutcome::Failure(alloc::format!(
            "no call operator of '{}' accepts the arguments ({})",
            callee,
            reasons.join("; ")
        )),
        n => SubstOutcome::Failure(alloc::format!(
            "{} call operators of '{}' accept the arguments",
            n,
            callee
        )),
    })
}

fn match_params(params: &[Type], args: &[Type]) -> Result<(), String> {
    if params.len() != args.len() {
        return Err(alloc::format!(
            "expects {} argument(s), got {}",
            params.len(),
            args.len()
        ));
    }
    params.iter().zip(args).try_for_each(|(p, a)| accepts(p, a))
}

/// Evaluates a `::type` trait application.
pub fn eval_trait_type(call: &TraitCall, env: &Env<'_>) -> Result<SubstOutcome, Error> {
    match call.name.as_str() {
        "enable_if" => {
            if call.value_args.len() != 1 || call.type_args.len() > 1 {
                return Err(Error::TraitArity {
                    name: call.name.clone(),
                    expected: "a condition and an optional type",
                });
            }
            let cond = eval_bool(&call.value_args[0], env)?;
            let payload = match call.type_args.first() {
                Some(te) => Some(resolve_type(te, env)?),
                None => None,
            };
            Ok(eval_enable_if(cond, payload))
        }
        "result_of" => {
            let sig = match call.type_args.as_slice() {
                [te] if call.value_args.is_empty() => resolve_callable_signature(te, env)?,
                _ => {
                    return Err(Error::TraitArity {
                        name: call.name.clone(),
                        expected: "one argument of the form F(Args...)",
                    })
                }
            };
            eval_result_of(&sig.0, &sig.1, env)
        }
        name => {
            let transform =
                Transform::from_name(name).ok_or_else(|| match Predicate::from_name(name) {
                    Some(_) => Error::SubstitutionFailure(alloc::format!(
                        "'{}' has no member 'type'",
                        name
                    )),
                    None => Error::UnknownTrait(name.into()),
                })?;
            match (call.type_args.as_slice(), call.value_args.is_empty()) {
                ([te], true) => Ok(SubstOutcome::Ok(transform.apply(resolve_type(te, env)?))),
                _ => Err(Error::TraitArity {
                    name: name.into(),
                    expected: "one type argument",
                }),
            }
        }
    }
}

// `F(Args...)` as written inside result_of: F is the callee, not a return type.
fn resolve_callable_signature(
    te: &crate::ast::TypeExpr,
    env: &Env<'_>,
) -> Result<(Type, Vec<Type>), Error> {
    match te {
        crate::ast::TypeExpr::Function { ret, params } => {
            let callee = resolve_type(ret, env)?;
            let args = params
                .iter()
                .map(|p| resolve_type(p, env))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((callee, args))
        }
        _ => Err(Error::TraitArity {
            name: "result_of".into(),
            expected: "one argument of the form F(Args...)",
        }),
    }
}

/// Evaluates a `::value` trait application.
pub fn eval_trait_value(call: &TraitCall, env: &Env<'_>) -> Result<bool, Error> {
    if trait_kind(&call.name) == Some(TraitKind::Type) {
        return Err(Error::SubstitutionFailure(alloc::format!(
            "'{}' has no member 'value'",
            call.name
        )));
    }
    if !call.value_args.is_empty() {
        return Err(Error::TraitArity {
            name: call.name.clone(),
            expected: "type arguments only",
        });
    }
    let args = call
        .type_args
        .iter()
        .map(|te| resolve_type(te, env))
        .collect::<Result<Vec<_>, _>>()?;
    eval_predicate(&call.name, &args, env)
}

pub fn eval_bool(b: &BoolExpr, env: &Env<'_>) -> Result<bool, Error> {
    match b {
        BoolExpr::Lit(v) => Ok(*v),
        BoolExpr::Value(call) => eval_trait_value(call, env),
        BoolExpr::Not(inner) => eval_bool(inner, env).map(|v| !v),
    }
}
