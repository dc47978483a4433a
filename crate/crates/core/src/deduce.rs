//! `auto` deduction, the `decltype` rules, `declval`, and function
//! declarations in leading and trailing-return form.

use alloc::string::String;
use alloc::vec::Vec;

use crate::ast::{
    call_return_type, classify, declared_entity_type, member_access, overloaded_add, BoolExpr,
    Expr, TypeExpr,
};
use crate::env::{Entity, Env, FunctionEntity};
use crate::error::Error;
use crate::resolve::resolve_type;
use crate::types::{strip_ref_and_top_cv, Type, ValueCategory};

/// `auto`, `const auto`, `auto&` or `const auto&`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AutoPattern {
    pub add_const: bool,
    pub lvalue_ref: bool,
}

impl AutoPattern {
    pub const PLAIN: AutoPattern = AutoPattern {
        add_const: false,
        lvalue_ref: false,
    };
    pub const CONST: AutoPattern = AutoPattern {
        add_const: true,
        lvalue_ref: false,
    };
    pub const REF: AutoPattern = AutoPattern {
        add_const: false,
        lvalue_ref: true,
    };
    pub const CONST_REF: AutoPattern = AutoPattern {
        add_const: true,
        lvalue_ref: true,
    };

    pub fn spelling(self) -> &'static str {
        match (self.add_const, self.lvalue_ref) {
            (false, false) => "auto",
            (true, false) => "const auto",
            (false, true) => "auto&",
            (true, true) => "const auto&",
        }
    }
}

/// Type of a variable declared `pattern name = init;`.
pub fn deduce_auto(pattern: AutoPattern, init: &Expr, env: &Env<'_>) -> Result<Type, Error> {
    let init = classify(init, env)?;
    let base = init.ty;
    match (pattern.add_const, pattern.lvalue_ref) {
        (false, false) => Ok(base.unqualified()),
        (true, false) => Ok(base.unqualified().add_const()),
        (false, true) => {
            if init.category != ValueCategory::LValue {
                return Err(Error::CannotBindNonConstRef(init.category));
            }
            Ok(Type::lvalue_ref(base))
        }
        (true, true) => Ok(Type::lvalue_ref(base.add_const())),
    }
}

/// `decltype(e)`. The operand is never evaluated.
pub fn decltype_of(e: &Expr, env: &Env<'_>) -> Result<Type, Error> {
    match e {
        // declared type of the named entity
        Expr::Id(name) => match env.lookup(name) {
            Some(Entity::Functions(set)) => match set.as_slice() {
                [FunctionEntity::Plain(t)] => Ok(t.clone()),
                _ => Err(Error::NotAValue(name.clone())),
            },
            _ => declared_entity_type(name, env),
        },
        Expr::Member { base, field, arrow } => {
            Ok(member_access(base, field, *arrow, env)?.declared)
        }
        // declared return type of the selected function
        Expr::Call { callee, args } => Ok(normalize_return(call_return_type(callee, args, env)?)),
        Expr::Add(lhs, rhs) => {
            let l = classify(lhs, env)?;
            let r = classify(rhs, env)?;
            match overloaded_add(&l, &r, env)? {
                Some(ret) => Ok(normalize_return(ret)),
                None => by_category(e, env),
            }
        }
        // the static `value` member is declared `const bool`
        Expr::TraitValue(_) => {
            classify(e, env)?;
            Ok(Type::bool().add_const())
        }
        _ => by_category(e, env),
    }
}

fn by_category(e: &Expr, env: &Env<'_>) -> Result<Type, Error> {
    let typed = classify(e, env)?;
    Ok(typed.category.encode(typed.ty))
}

// cv on a non-class, non-reference return type has no effect
pub(crate) fn normalize_return(ret: Type) -> Type {
    if ret.is_reference() || ret.is_class() {
        ret
    } else {
        ret.unqualified()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalContext {
    Evaluated,
    Unevaluated,
}

/// Declared return type of `declval<t>()`: `T&&` after reference
/// collapsing. Incomplete and abstract classes are accepted.
pub fn declval_type(t: &TypeExpr, env: &Env<'_>, context: EvalContext) -> Result<Type, Error> {
    if context == EvalContext::Evaluated {
        return Err(Error::DeclvalInEvaluatedContext);
    }
    let target = resolve_type(t, env)?;
    Ok(Type::rvalue_ref(target))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeclStyle {
    /// `R f(params)`
    Leading,
    /// `auto f(params) -> R`
    Trailing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub ty: TypeExpr,
}

impl Param {
    pub fn new(name: impl Into<String>, ty: TypeExpr) -> Param {
        Param {
            name: name.into(),
            ty,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FnDeclForm {
    pub style: DeclStyle,
    pub params: Vec<Param>,
    pub return_type: TypeExpr,
}

/// Resolves a non-template declaration to its `Type::Function`.
///
/// A trailing return type sees the parameters; a leading one only sees
/// the enclosing scope.
pub fn resolve_function_decl(form: &FnDeclForm, env: &Env<'_>) -> Result<Type, Error> {
    let params = form
        .params
        .iter()
        .map(|p| resolve_param_type(&p.ty, env))
        .collect::<Result<Vec<_>, _>>()?;
    let ret = match form.style {
        DeclStyle::Leading => resolve_type(&form.return_type, env)?,
        DeclStyle::Trailing => {
            let mut scope = env.child();
            bind_params(&mut scope, &form.params, &params)?;
            resolve_type(&form.return_type, &scope)?
        }
    };
    function_type(params, ret)
}

/// Type of a parameter as declared (before top-level cv is dropped from
/// the function type). A parameter of function type becomes a pointer.
pub(crate) fn resolve_param_type(te: &TypeExpr, env: &Env<'_>) -> Result<Type, Error> {
    let t = resolve_type(te, env)?;
    if t.is_void() {
        return Err(Error::InvalidType("parameter of type 'void'".into()));
    }
    if t.is_function() {
        return Ok(Type::pointer(t));
    }
    Ok(t)
}

pub(crate) fn bind_params(
    scope: &mut Env<'_>,
    params: &[Param],
    types: &[Type],
) -> Result<(), Error> {
    for (p, t) in params.iter().zip(types) {
        if !p.name.is_empty() {
            scope.declare_variable(p.name.clone(), t.clone())?;
        }
    }
    Ok(())
}

/// Builds a function type, dropping top-level cv from parameters. A cv
/// return type is kept in the function type; only a call drops it.
pub(crate) fn function_type(params: Vec<Type>, ret: Type) -> Result<Type, Error> {
    if ret.is_function() {
        return Err(Error::InvalidType("function returning a function".into()));
    }
    let params = params
        .into_iter()
        .map(|p| if p.is_reference() { p } else { p.unqualified() })
        .collect();
    Ok(Type::function(params, ret))
}

/// Name-scoping check for a declaration whose types cannot be resolved yet
/// (templates): every identifier used inside a `decltype` of the return
/// type must be visible where that return type is written.
pub fn check_return_scope(form: &FnDeclForm, env: &Env<'_>) -> Result<(), Error> {
    let mut names = Vec::new();
    collect_type_identifiers(&form.return_type, &mut names);
    for name in names {
        let is_param = form.params.iter().any(|p| p.name == name);
        let visible = match form.style {
            DeclStyle::Trailing => is_param || env.lookup(&name).is_some(),
            DeclStyle::Leading => env.lookup(&name).is_some(),
        };
        if !visible {
            return Err(Error::UnknownIdentifier(name));
        }
    }
    Ok(())
}

fn collect_type_identifiers(te: &TypeExpr, out: &mut Vec<String>) {
    match te {
        TypeExpr::Named { args, .. } => args.iter().for_each(|a| collect_type_identifiers(a, out)),
        TypeExpr::Const(inner)
        | TypeExpr::Volatile(inner)
        | TypeExpr::Pointer(inner)
        | TypeExpr::LValueRef(inner)
        | TypeExpr::RValueRef(inner) => collect_type_identifiers(inner, out),
        TypeExpr::Function { ret, params } => {
            collect_type_identifiers(ret, out);
            params.iter().for_each(|p| collect_type_identifiers(p, out));
        }
        TypeExpr::Decltype(e) => collect_expr_identifiers(e, out),
        TypeExpr::Trait(call) => {
            call.type_args
                .iter()
                .for_each(|a| collect_type_identifiers(a, out));
            call.value_args
                .iter()
                .for_each(|b| collect_bool_identifiers(b, out));
        }
        TypeExpr::Scalar(_) | TypeExpr::Concrete(_) => {}
    }
}

fn collect_bool_identifiers(b: &BoolExpr, out: &mut Vec<String>) {
    match b {
        BoolExpr::Lit(_) => {}
        BoolExpr::Value(call) => {
            call.type_args
                .iter()
                .for_each(|a| collect_type_identifiers(a, out));
        }
        BoolExpr::Not(inner) => collect_bool_identifiers(inner, out),
    }
}

// Callee names are left out: they are looked up at instantiation.
fn collect_expr_identifiers(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Id(name) => {
            let head = name.split("::").next().unwrap_or(name);
            if !out.iter().any(|n| n == head) {
                out.push(head.into());
            }
        }
        Expr::Member { base, .. } => collect_expr_identifiers(base, out),
        Expr::Call { args, .. } => args.iter().for_each(|a| collect_expr_identifiers(a, out)),
        Expr::Paren(inner) | Expr::PostInc(inner) => collect_expr_identifiers(inner, out),
        Expr::Add(l, r) => {
            collect_expr_identifiers(l, out);
            collect_expr_identifiers(r, out);
        }
        Expr::Declval(t) => collect_type_identifiers(t, out),
        Expr::TraitValue(call) => {
            call.type_args
                .iter()
                .for_each(|a| collect_type_identifiers(a, out));
        }
        Expr::IntLit(_) | Expr::FloatLit(_) => {}
    }
}

/// `auto` deduction expressed through `decltype`: strip the reference and
/// top-level cv from `decltype((e))`.
pub fn auto_via_decltype(e: &Expr, env: &Env<'_>) -> Result<Type, Error> {
    let t = decltype_of(&Expr::paren(e.clone()), env)?;
    Ok(strip_ref_and_top_cv(&t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::ClassDef;
    use crate::Store;
    use alloc::string::ToString;
    use alloc::vec;

    fn sample_env() -> Env<'static> {
        let mut env = Env::new();
        env.declare_variable("i", Type::int()).unwrap();
        env.declare_class(ClassDef::new("A").with_field("x", TypeExpr::double()))
            .unwrap();
        env.declare_variable("a", Type::pointer(Type::class("A", vec![]).add_const()))
            .unwrap();
        env.declare_function(
            "foo",
            FunctionEntity::Plain(Type::function(
                vec![],
                Type::rvalue_ref(Type::int().add_const()),
            )),
        )
        .unwrap();
        env.declare_function(
            "f",
            FunctionEntity::Plain(Type::function(vec![], Type::lvalue_ref(Type::int()))),
        )
        .unwrap();
        env
    }

    fn a_x() -> Expr {
        Expr::member(Expr::id("a"), "x", true)
    }

    #[test]
    fn auto_patterns() {
        let env = sample_env();
        let f = Expr::call("f", vec![]);
        let five = Expr::IntLit(5);
        assert_eq!(
            deduce_auto(AutoPattern::PLAIN, &five, &env).unwrap(),
            Type::int()
        );
        assert_eq!(
            deduce_auto(AutoPattern::CONST, &Expr::IntLit(8), &env)
                .unwrap()
                .to_string(),
            "const int"
        );
        assert_eq!(
            deduce_auto(AutoPattern::PLAIN, &f, &env).unwrap(),
            Type::int()
        );
        assert_eq!(
            deduce_auto(AutoPattern::REF, &f, &env).unwrap().to_string(),
            "int&"
        );
        assert_eq!(
            deduce_auto(AutoPattern::CONST, &f, &env)
                .unwrap()
                .to_string(),
            "const int"
        );
        assert_eq!(
            deduce_auto(AutoPattern::REF, &five, &env),
            Err(Error::CannotBindNonConstRef(ValueCategory::PRValue))
        );
        assert_eq!(
            deduce_auto(AutoPattern::CONST_REF, &five, &env)
                .unwrap()
                .to_string(),
            "const int&"
        );
    }

    #[test]
    fn decltype_three_cases() {
        let env = sample_env();
        let show = |e: &Expr| decltype_of(e, &env).unwrap().to_string();
        assert_eq!(show(&Expr::id("i")), "int");
        assert_eq!(show(&a_x()), "double");
        assert_eq!(show(&Expr::call("foo", vec![])), "const int&&");
        assert_eq!(show(&Expr::paren(a_x())), "const double&");
        assert_eq!(show(&Expr::post_inc(Expr::id("i"))), "int");
        assert_eq!(show(&Expr::paren(Expr::id("i"))), "int&");
        assert_eq!(show(&Expr::IntLit(1)), "int");
    }

    #[test]
    fn decltype_leaves_store_alone() {
        let env = sample_env();
        let mut store = Store::new();
        store.set("i", 1);
        let before = store.clone();
        decltype_of(&Expr::post_inc(Expr::id("i")), &env).unwrap();
        assert_eq!(store, before);
        assert_eq!(crate::evaluate(&Expr::id("i"), &env, &mut store), Ok(1));
    }

    #[test]
    fn declval_rules() {
        let mut env = sample_env();
        env.declare_class(ClassDef::new("Abstract").with_flags(true, false))
            .unwrap();
        env.declare_class(ClassDef::incomplete("Opaque")).unwrap();
        let dt = |t: TypeExpr| decltype_of(&Expr::declval(t), &env).unwrap().to_string();
        assert_eq!(dt(TypeExpr::named("A")), "A&&");
        assert_eq!(dt(TypeExpr::lvalue_ref(TypeExpr::int())), "int&");
        assert_eq!(dt(TypeExpr::named("Abstract")), "Abstract&&");
        assert_eq!(dt(TypeExpr::named("Opaque")), "Opaque&&");
        let sum = Expr::add(
            Expr::declval(TypeExpr::double()),
            Expr::declval(TypeExpr::int()),
        );
        assert_eq!(decltype_of(&sum, &env).unwrap(), Type::double());
        assert_eq!(
            declval_type(&TypeExpr::int(), &env, EvalContext::Evaluated),
            Err(Error::DeclvalInEvaluatedContext)
        );
        let typed = classify(&Expr::declval(TypeExpr::lvalue_ref(TypeExpr::int())), &env).unwrap();
        assert_eq!(typed.category, ValueCategory::LValue);
    }

    #[test]
    fn leading_and_trailing_forms() {
        let env = sample_env();
        let params = vec![
            Param::new("x", TypeExpr::int()),
            Param::new("y", TypeExpr::double()),
        ];
        let leading = FnDeclForm {
            style: DeclStyle::Leading,
            params: params.clone(),
            return_type: TypeExpr::int(),
        };
        let trailing = FnDeclForm {
            style: DeclStyle::Trailing,
            ..leading.clone()
        };
        let l = resolve_function_decl(&leading, &env).unwrap();
        assert_eq!(l, resolve_function_decl(&trailing, &env).unwrap());
        assert_eq!(l.to_string(), "int(int, double)");

        let uses_y = TypeExpr::decltype(Expr::add(Expr::id("x"), Expr::id("y")));
        let trailing = FnDeclForm {
            style: DeclStyle::Trailing,
            params: params.clone(),
            return_type: uses_y.clone(),
        };
        assert_eq!(
            resolve_function_decl(&trailing, &env).unwrap().to_string(),
            "double(int, double)"
        );
        let leading = FnDeclForm {
            style: DeclStyle::Leading,
            params,
            return_type: uses_y,
        };
        assert_eq!(
            resolve_function_decl(&leading, &env),
            Err(Error::UnknownIdentifier("x".into()))
        );
        assert_eq!(
            check_return_scope(&leading, &env),
            Err(Error::UnknownIdentifier("x".into()))
        );
    }

    #[test]
    fn cv_kept_on_scalar_returns_but_dropped_by_calls() {
        let mut env = Env::new();
        let form = FnDeclForm {
            style: DeclStyle::Leading,
            params: vec![Param::new("x", TypeExpr::konst(TypeExpr::int()))],
            return_type: TypeExpr::konst(TypeExpr::int()),
        };
        let f = resolve_function_decl(&form, &env).unwrap();
        assert_eq!(f.to_string(), "const int(int)");
        env.declare_function("f", FunctionEntity::Plain(f)).unwrap();
        let call = Expr::call("f", vec![Expr::IntLit(1)]);
        assert_eq!(decltype_of(&call, &env).unwrap(), Type::int());
    }

    #[test]
    fn function_parameters_decay_to_pointers() {
        let env = Env::new();
        let callback = TypeExpr::Function {
            ret: alloc::boxed::Box::new(TypeExpr::int()),
            params: alloc::vec![],
        };
        let form = FnDeclForm {
            style: DeclStyle::Trailing,
            params: alloc::vec![Param::new("g", callback)],
            return_type: TypeExpr::decltype(Expr::id("g")),
        };
        assert_eq!(
            resolve_function_decl(&form, &env).unwrap().to_string(),
            "int(*(int(*)()))()"
        );
    }
}
