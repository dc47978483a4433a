//! Expressions, unresolved type expressions, expression classification
//! (type + value category) and the small integer evaluator.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::deduce::{declval_type, EvalContext};
use crate::env::{Entity, Env};
use crate::error::Error;
use crate::resolve::resolve_overload;
use crate::traits::eval_trait_value;
use crate::types::{common_arithmetic_type, ScalarKind, Type, ValueCategory};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    IntLit(i64),
    FloatLit(f64),
    /// A variable, parameter or `Class::member` static field.
    Id(String),
    Member {
        base: Box<Expr>,
        field: String,
        arrow: bool,
    },
    Call {
        callee: String,
        args: Vec<Expr>,
    },
    Paren(Box<Expr>),
    PostInc(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Declval(Box<TypeExpr>),
    /// `trait<...>::value`
    TraitValue(TraitCall),
}

impl Expr {
    pub fn id(name: impl Into<String>) -> Expr {
        Expr::Id(name.into())
    }

    pub fn member(base: Expr, field: impl Into<String>, arrow: bool) -> Expr {
        Expr::Member {
            base: Box::new(base),
            field: field.into(),
            arrow,
        }
    }

    pub fn call(callee: impl Into<String>, args: Vec<Expr>) -> Expr {
        Expr::Call {
            callee: callee.into(),
            args,
        }
    }

    pub fn paren(inner: Expr) -> Expr {
        Expr::Paren(Box::new(inner))
    }

    pub fn post_inc(inner: Expr) -> Expr {
        Expr::PostInc(Box::new(inner))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(lhs: Expr, rhs: Expr) -> Expr {
        Expr::Add(Box::new(lhs), Box::new(rhs))
    }

    pub fn declval(t: TypeExpr) -> Expr {
        Expr::Declval(Box::new(t))
    }

    /// True when a `declval` node sits in an evaluated position of this
    /// expression. Operands of nested type expressions do not count.
    pub fn has_evaluated_declval(&self) -> bool {
        match self {
            Expr::Declval(_) => true,
            Expr::Member { base, .. } => base.has_evaluated_declval(),
            Expr::Call { args, .. } => args.iter().any(Expr::has_evaluated_declval),
            Expr::Paren(e) | Expr::PostInc(e) => e.has_evaluated_declval(),
            Expr::Add(l, r) => l.has_evaluated_declval() || r.has_evaluated_declval(),
            Expr::IntLit(_) | Expr::FloatLit(_) | Expr::Id(_) | Expr::TraitValue(_) => false,
        }
    }
}

/// A type as written, before name lookup and substitution.
#[derive(Debug, Clone, PartialEq)]
pub enum TypeExpr {
    Scalar(ScalarKind),
    /// A class, class-template instance, template parameter, or a function
    /// name used as a callable type.
    Named {
        name: String,
        args: Vec<TypeExpr>,
    },
    Const(Box<TypeExpr>),
    Volatile(Box<TypeExpr>),
    Pointer(Box<TypeExpr>),
    LValueRef(Box<TypeExpr>),
    RValueRef(Box<TypeExpr>),
    Function {
        ret: Box<TypeExpr>,
        params: Vec<TypeExpr>,
    },
    Decltype(Box<Expr>),
    /// `trait<...>::type`
    Trait(TraitCall),
    Concrete(Type),
}

impl TypeExpr {
    pub fn named(name: impl Into<String>) -> TypeExpr {
        TypeExpr::Named {
            name: name.into(),
            args: Vec::new(),
        }
    }

    pub fn template(name: impl Into<String>, args: Vec<TypeExpr>) -> TypeExpr {
        TypeExpr::Named {
            name: name.into(),
            args,
        }
    }

    pub fn konst(inner: TypeExpr) -> TypeExpr {
        TypeExpr::Const(Box::new(inner))
    }

    pub fn pointer(inner: TypeExpr) -> TypeExpr {
        TypeExpr::Pointer(Box::new(inner))
    }

    pub fn lvalue_ref(inner: TypeExpr) -> TypeExpr {
        TypeExpr::LValueRef(Box::new(inner))
    }

    pub fn rvalue_ref(inner: TypeExpr) -> TypeExpr {
        TypeExpr::RValueRef(Box::new(inner))
    }

    pub fn decltype(e: Expr) -> TypeExpr {
        TypeExpr::Decltype(Box::new(e))
    }

    pub fn int() -> TypeExpr {
        TypeExpr::Scalar(ScalarKind::Int)
    }

    pub fn double() -> TypeExpr {
        TypeExpr::Scalar(ScalarKind::Double)
    }

    fn is_pointer_core(&self) -> bool {
        match self {
            TypeExpr::Pointer(_) => true,
            TypeExpr::Const(inner) | TypeExpr::Volatile(inner) => inner.is_pointer_core(),
            _ => false,
        }
    }
}

/// An application of a `<type_traits>` template.
#[derive(Debug, Clone, PartialEq)]
pub struct TraitCall {
    pub name: String,
    pub type_args: Vec<TypeExpr>,
    pub value_args: Vec<BoolExpr>,
}

impl TraitCall {
    pub fn new(name: impl Into<String>, type_args: Vec<TypeExpr>) -> TraitCall {
        TraitCall {
            name: name.into(),
            type_args,
            value_args: Vec::new(),
        }
    }

    pub fn enable_if(cond: BoolExpr, payload: Option<TypeExpr>) -> TraitCall {
        TraitCall {
            name: "enable_if".into(),
            type_args: payload.into_iter().collect(),
            value_args: alloc::vec![cond],
        }
    }
}

/// Compile-time boolean used as a trait argument.
#[derive(Debug, Clone, PartialEq)]
pub enum BoolExpr {
    Lit(bool),
    Value(TraitCall),
    Not(Box<BoolExpr>),
}

/// Non-reference type and value category of an expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedExpr {
    pub ty: Type,
    pub category: ValueCategory,
}

impl TypedExpr {
    pub fn new(ty: Type, category: ValueCategory) -> TypedExpr {
        debug_assert!(!ty.is_reference());
        TypedExpr { ty, category }
    }

    fn prvalue(ty: Type) -> TypedExpr {
        TypedExpr::new(ty, ValueCategory::PRValue)
    }

    /// The expression as a call argument: `T&` for lvalues, `T&&` for
    /// xvalues, `T` for prvalues.
    pub fn as_arg_type(&self) -> Type {
        self.category.encode(self.ty.clone())
    }

    /// Typed result of calling something that returns `ret`.
    pub fn of_call(ret: &Type) -> TypedExpr {
        let category = ValueCategory::of_declared(ret);
        let ty = ret.strip_ref().clone();
        // non-class prvalues are never cv-qualified
        let ty = if category == ValueCategory::PRValue && !ty.is_class() {
            ty.unqualified()
        } else {
            ty
        };
        TypedExpr::new(ty, category)
    }
}

/// Type and category of `e`. Never evaluates anything.
pub fn classify(e: &Expr, env: &Env<'_>) -> Result<TypedExpr, Error> {
    match e {
        Expr::IntLit(_) => Ok(TypedExpr::prvalue(Type::int())),
        Expr::FloatLit(_) => Ok(TypedExpr::prvalue(Type::double())),
        Expr::Id(name) => {
            let declared = declared_entity_type(name, env)?;
            Ok(TypedExpr::new(
                declared.strip_ref().clone(),
                ValueCategory::LValue,
            ))
        }
        Expr::Member { base, field, arrow } => Ok(member_access(base, field, *arrow, env)?.typed),
        Expr::Call { callee, args } => {
            let ret = call_return_type(callee, args, env)?;
            Ok(TypedExpr::of_call(&ret))
        }
        Expr::Paren(inner) => classify(inner, env),
        Expr::PostInc(inner) => {
            let operand = classify(inner, env)?;
            let incrementable = (operand.ty.is_arithmetic() || operand.ty.is_pointer())
                && operand.category == ValueCategory::LValue
                && !operand.ty.is_const();
            if !incrementable {
                return Err(Error::InvalidIncrement {
                    ty: operand.ty,
                    category: operand.category,
                });
            }
            Ok(TypedExpr::prvalue(operand.ty.unqualified()))
        }
        Expr::Add(lhs, rhs) => {
            let l = classify(lhs, env)?;
            let r = classify(rhs, env)?;
            if let Some(ret) = overloaded_add(&l, &r, env)? {
                return Ok(TypedExpr::of_call(&ret));
            }
            builtin_add(&l.ty, &r.ty).map(TypedExpr::prvalue)
        }
        Expr::Declval(t) => {
            let ret = declval_type(t, env, EvalContext::Unevaluated)?;
            Ok(TypedExpr::of_call(&ret))
        }
        Expr::TraitValue(call) => {
            eval_trait_value(call, env)?;
            Ok(TypedExpr::new(
                Type::bool().add_const(),
                ValueCategory::LValue,
            ))
        }
    }
}

/// Declared type of a named variable, parameter or static field.
pub(crate) fn declared_entity_type(name: &str, env: &Env<'_>) -> Result<Type, Error> {
    if let Some((class, member)) = name.split_once("::") {
        let inst = match env.lookup(class) {
            Some(Entity::Class(_)) => env.instantiate(class, &[])?,
            Some(_) => return Err(Error::NotAType(class.into())),
            None => return Err(Error::UnknownType(class.into())),
        };
        return inst
            .static_field(member)
            .cloned()
            .ok_or_else(|| Error::NoSuchField {
                class: class.into(),
                field: member.into(),
            });
    }
    match env.lookup(name) {
        Some(Entity::Variable(t)) => Ok(t.clone()),
        Some(_) => Err(Error::NotAValue(name.into())),
        None => Err(Error::UnknownIdentifier(name.into())),
    }
}

pub(crate) struct MemberAccess {
    /// The field's type as written in the class.
    pub declared: Type,
    /// The access expression's type, with the object's cv merged in.
    pub typed: TypedExpr,
}

pub(crate) fn member_access(
    base: &Expr,
    field: &str,
    arrow: bool,
    env: &Env<'_>,
) -> Result<MemberAccess, Error> {
    let base = classify(base, env)?;
    let (object, object_category) = if arrow {
        match base.ty {
            Type::Pointer { pointee, .. } => (*pointee, ValueCategory::LValue),
            other => return Err(Error::NotAPointer(other)),
        }
    } else {
        (base.ty, base.category)
    };
    let (name, args) = match object.as_class() {
        Some(c) => c,
        None => return Err(Error::NotAClass(object)),
    };
    let inst = env.instantiate(name, args)?;
    let declared = inst
        .field(field)
        .cloned()
        .ok_or_else(|| Error::NoSuchField {
            class: inst.ty.to_string(),
            field: field.into(),
        })?;
    let typed = if declared.is_reference() {
        TypedExpr::new(declared.strip_ref().clone(), ValueCategory::LValue)
    } else {
        let category = match object_category {
            ValueCategory::LValue => ValueCategory::LValue,
            _ => ValueCategory::XValue,
        };
        TypedExpr::new(declared.clone().add_cv(object.cv()), category)
    };
    Ok(MemberAccess { declared, typed })
}

/// Declared return type of the overload selected for `callee(args...)`.
pub(crate) fn call_return_type(callee: &str, args: &[Expr], env: &Env<'_>) -> Result<Type, Error> {
    let arg_types = args
        .iter()
        .map(|a| classify(a, env).map(|t| t.as_arg_type()))
        .collect::<Result<Vec<_>, _>>()?;
    let chosen = resolve_overload(callee, &arg_types, env)?;
    Ok(chosen.return_type().clone())
}

/// Routes `+` with a class operand to `operator+` overload resolution,
/// returning the selected declared return type.
pub(crate) fn overloaded_add(
    l: &TypedExpr,
    r: &TypedExpr,
    env: &Env<'_>,
) -> Result<Option<Type>, Error> {
    if !l.ty.is_class() && !r.ty.is_class() {
        return Ok(None);
    }
    let chosen = resolve_overload("operator+", &[l.as_arg_type(), r.as_arg_type()], env)?;
    Ok(Some(chosen.return_type().clone()))
}

fn builtin_add(l: &Type, r: &Type) -> Result<Type, Error> {
    match (l, r) {
        (Type::Pointer { .. }, other) | (other, Type::Pointer { .. }) if other.is_integral() => {
            let ptr = if l.is_pointer() { l } else { r };
            Ok(ptr.clone().unqualified())
        }
        _ => common_arithmetic_type(l, r),
    }
}

/// Values of integer variables, threaded through [`evaluate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Store {
    values: BTreeMap<String, i64>,
}

impl Store {
    pub fn new() -> Store {
        Store::default()
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.values.get(name).copied()
    }

    pub fn set(&mut self, name: impl Into<String>, value: i64) {
        self.values.insert(name.into(), value);
    }

    pub fn remove(&mut self, name: &str) {
        self.values.remove(name);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// Evaluates an integer expression, applying side effects to `store`.
///
/// Only literals, variables, parentheses, postfix `++` and `+` are
/// evaluable. A `declval` anywhere in an evaluated position is rejected
/// before anything is evaluated.
pub fn evaluate(e: &Expr, env: &Env<'_>, store: &mut Store) -> Result<i64, Error> {
    if e.has_evaluated_declval() {
        return Err(Error::DeclvalInEvaluatedContext);
    }
    eval_int(e, env, store)
}

fn eval_int(e: &Expr, env: &Env<'_>, store: &mut Store) -> Result<i64, Error> {
    match e {
        Expr::IntLit(v) => Ok(*v),
        Expr::Id(name) => {
            integral_variable(name, env)?;
            store
                .get(name)
                .ok_or_else(|| Error::Uninitialized(name.clone()))
        }
        Expr::Paren(inner) => eval_int(inner, env, store),
        Expr::PostInc(inner) => {
            let name = match strip_parens(inner) {
                Expr::Id(name) => name,
                _ => return Err(Error::NonEvaluableExpr),
            };
            let var = integral_variable(name, env)?;
            if var.strip_ref().is_const() {
                return Err(Error::InvalidIncrement {
                    ty: var.strip_ref().clone(),
                    category: ValueCategory::LValue,
                });
            }
            let old = store
                .get(name)
                .ok_or_else(|| Error::Uninitialized(name.clone()))?;
            store.set(name.clone(), old.checked_add(1).ok_or(Error::Overflow)?);
            Ok(old)
        }
        Expr::Add(l, r) => {
            let l = eval_int(l, env, store)?;
            let r = eval_int(r, env, store)?;
            l.checked_add(r).ok_or(Error::Overflow)
        }
        _ => Err(Error::NonEvaluableExpr),
    }
}

fn strip_parens(e: &Expr) -> &Expr {
    match e {
        Expr::Paren(inner) => strip_parens(inner),
        other => other,
    }
}

fn integral_variable(name: &str, env: &Env<'_>) -> Result<Type, Error> {
    let t = declared_entity_type(name, env)?;
    if t.strip_ref().is_integral() {
        Ok(t)
    } else {
        Err(Error::NonEvaluableExpr)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::IntLit(v) => write!(f, "{}", v),
            Expr::FloatLit(v) => write!(f, "{:?}", v),
            Expr::Id(name) => f.write_str(name),
            Expr::Member { base, field, arrow } => {
                write!(f, "{}{}{}", base, if *arrow { "->" } else { "." }, field)
            }
            Expr::Call { callee, args } => {
                write!(f, "{}(", callee)?;
                write_list(f, args)?;
                f.write_str(")")
            }
            Expr::Paren(inner) => write!(f, "({})", inner),
            Expr::PostInc(inner) => write!(f, "{}++", inner),
            Expr::Add(l, r) => write!(f, "{} + {}", l, r),
            Expr::Declval(t) => write!(f, "declval<{}>()", t),
            Expr::TraitValue(call) => write!(f, "{}::value", call),
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Scalar(kind) => write!(f, "{}", kind),
            TypeExpr::Named { name, args } => {
                f.write_str(name)?;
                if !args.is_empty() {
                    f.write_str("<")?;
                    write_list(f, args)?;
                    f.write_str(">")?;
                }
                Ok(())
            }
            TypeExpr::Const(inner) if inner.is_pointer_core() => write!(f, "{} const", inner),
            TypeExpr::Const(inner) => write!(f, "const {}", inner),
            TypeExpr::Volatile(inner) if inner.is_pointer_core() => {
                write!(f, "{} volatile", inner)
            }
            TypeExpr::Volatile(inner) => write!(f, "volatile {}", inner),
            TypeExpr::Pointer(inner) => write!(f, "{}*", inner),
            TypeExpr::LValueRef(inner) => write!(f, "{}&", inner),
            TypeExpr::RValueRef(inner) => write!(f, "{}&&", inner),
            TypeExpr::Function { ret, params } => {
                write!(f, "{}(", ret)?;
                write_list(f, params)?;
                f.write_str(")")
            }
            TypeExpr::Decltype(e) => write!(f, "decltype({})", e),
            TypeExpr::Trait(call) => write!(f, "{}::type", call),
            TypeExpr::Concrete(t) => write!(f, "{}", t),
        }
    }
}

impl fmt::Display for TraitCall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}<", self.name)?;
        write_list(f, &self.value_args)?;
        if !self.value_args.is_empty() && !self.type_args.is_empty() {
            f.write_str(", ")?;
        }
        write_list(f, &self.type_args)?;
        f.write_str(">")
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolExpr::Lit(b) => write!(f, "{}", b),
            BoolExpr::Value(call) => write!(f, "{}::value", call),
            BoolExpr::Not(inner) => write!(f, "!{}", inner),
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{}", item)?;
    }
    Ok(())
}
