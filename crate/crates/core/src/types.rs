//! The type algebra: scalars, class instances, pointers, references and
//! function types, together with cv-qualification and the arithmetic
//! conversion ladder.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScalarKind {
    Bool,
    Char,
    SignedChar,
    UnsignedChar,
    Short,
    UnsignedShort,
    Int,
    UnsignedInt,
    Long,
    UnsignedLong,
    LongLong,
    UnsignedLongLong,
    Float,
    Double,
    LongDouble,
    Void,
}

impl ScalarKind {
    pub const ALL: [ScalarKind; 16] = [
        ScalarKind::Bool,
        ScalarKind::Char,
        ScalarKind::SignedChar,
        ScalarKind::UnsignedChar,
        ScalarKind::Short,
        ScalarKind::UnsignedShort,
        ScalarKind::Int,
        ScalarKind::UnsignedInt,
        ScalarKind::Long,
        ScalarKind::UnsignedLong,
        ScalarKind::LongLong,
        ScalarKind::UnsignedLongLong,
        ScalarKind::Float,
        ScalarKind::Double,
        ScalarKind::LongDouble,
        ScalarKind::Void,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScalarKind::Bool => "bool",
            ScalarKind::Char => "char",
            ScalarKind::SignedChar => "signed char",
            ScalarKind::UnsignedChar => "unsigned char",
            ScalarKind::Short => "short",
            ScalarKind::UnsignedShort => "unsigned short",
            ScalarKind::Int => "int",
            ScalarKind::UnsignedInt => "unsigned int",
            ScalarKind::Long => "long",
            ScalarKind::UnsignedLong => "unsigned long",
            ScalarKind::LongLong => "long long",
            ScalarKind::UnsignedLongLong => "unsigned long long",
            ScalarKind::Float => "float",
            ScalarKind::Double => "double",
            ScalarKind::LongDouble => "long double",
            ScalarKind::Void => "void",
        }
    }

    /// Position on the conversion ladder. `None` for `void`.
    pub fn conversion_rank(self) -> Option<u8> {
        let rank = match self {
            ScalarKind::Bool => 0,
            ScalarKind::Char | ScalarKind::SignedChar | ScalarKind::UnsignedChar => 1,
            ScalarKind::Short | ScalarKind::UnsignedShort => 2,
            ScalarKind::Int => 3,
            ScalarKind::UnsignedInt => 4,
            ScalarKind::Long => 5,
            ScalarKind::UnsignedLong => 6,
            ScalarKind::LongLong => 7,
            ScalarKind::UnsignedLongLong => 8,
            ScalarKind::Float => 9,
            ScalarKind::Double => 10,
            ScalarKind::LongDouble => 11,
            ScalarKind::Void => return None,
        };
        Some(rank)
    }

    pub fn is_arithmetic(self) -> bool {
        self != ScalarKind::Void
    }

    pub fn is_integral(self) -> bool {
        !matches!(
            self,
            ScalarKind::Float | ScalarKind::Double | ScalarKind::LongDouble | ScalarKind::Void
        )
    }

    pub fn is_floating(self) -> bool {
        matches!(
            self,
            ScalarKind::Float | ScalarKind::Double | ScalarKind::LongDouble
        )
    }

    /// Integral promotion: everything ranked below `int` becomes `int`.
    pub fn promoted(self) -> ScalarKind {
        match self.conversion_rank() {
            Some(r) if r < 3 => ScalarKind::Int,
            _ => self,
        }
    }
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// const/volatile flags of one type layer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cv {
    pub is_const: bool,
    pub is_volatile: bool,
}

impl Cv {
    pub const NONE: Cv = Cv {
        is_const: false,
        is_volatile: false,
    };
    pub const CONST: Cv = Cv {
        is_const: true,
        is_volatile: false,
    };
    pub const VOLATILE: Cv = Cv {
        is_const: false,
        is_volatile: true,
    };

    pub fn union(self, other: Cv) -> Cv {
        Cv {
            is_const: self.is_const || other.is_const,
            is_volatile: self.is_volatile || other.is_volatile,
        }
    }

    /// True when every qualifier of `other` is also present in `self`.
    pub fn contains(self, other: Cv) -> bool {
        (self.is_const || !other.is_const) && (self.is_volatile || !other.is_volatile)
    }

    pub fn is_empty(self) -> bool {
        !self.is_const && !self.is_volatile
    }

    fn spelling(self) -> &'static str {
        match (self.is_const, self.is_volatile) {
            (false, false) => "",
            (true, false) => "const",
            (false, true) => "volatile",
            (true, true) => "const volatile",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RefKind {
    LValue,
    RValue,
}

/// A fully resolved type.
///
/// Reference and function nodes carry no cv-flags, and a reference never
/// directly wraps another reference. Use the constructors below rather than
/// building reference nodes by hand so that collapsing is applied.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Scalar {
        kind: ScalarKind,
        cv: Cv,
    },
    Class {
        name: String,
        args: Vec<Type>,
        cv: Cv,
    },
    Pointer {
        pointee: Box<Type>,
        cv: Cv,
    },
    LValueRef(Box<Type>),
    RValueRef(Box<Type>),
    Function {
        params: Vec<Type>,
        ret: Box<Type>,
    },
}

impl Type {
    pub fn scalar(kind: ScalarKind) -> Type {
        Type::Scalar { kind, cv: Cv::NONE }
    }

    pub fn int() -> Type {
        Type::scalar(ScalarKind::Int)
    }

    pub fn double() -> Type {
        Type::scalar(ScalarKind::Double)
    }

    pub fn bool() -> Type {
        Type::scalar(ScalarKind::Bool)
    }

    pub fn void() -> Type {
        Type::scalar(ScalarKind::Void)
    }

    pub fn class(name: impl Into<String>, args: Vec<Type>) -> Type {
        Type::Class {
            name: name.into(),
            args,
            cv: Cv::NONE,
        }
    }

    pub fn pointer(pointee: Type) -> Type {
        debug_assert!(!pointee.is_reference(), "pointer to reference");
        Type::Pointer {
            pointee: Box::new(pointee),
            cv: Cv::NONE,
        }
    }

    pub fn lvalue_ref(referee: Type) -> Type {
        collapse_refs(RefKind::LValue, referee)
    }

    pub fn rvalue_ref(referee: Type) -> Type {
        collapse_refs(RefKind::RValue, referee)
    }

    pub fn function(params: Vec<Type>, ret: Type) -> Type {
        Type::Function {
            params,
            ret: Box::new(ret),
        }
    }

    /// Top-level cv. References and functions report no qualifiers.
    pub fn cv(&self) -> Cv {
        match self {
            Type::Scalar { cv, .. } | Type::Class { cv, .. } | Type::Pointer { cv, .. } => *cv,
            _ => Cv::NONE,
        }
    }

    /// Replaces the top-level cv; a no-op on references and functions.
    pub fn with_cv(mut self, new: Cv) -> Type {
        if let Type::Scalar { cv, .. } | Type::Class { cv, .. } | Type::Pointer { cv, .. } =
            &mut self
        {
            *cv = new;
        }
        self
    }

    pub fn add_cv(self, extra: Cv) -> Type {
        let cv = self.cv().union(extra);
        self.with_cv(cv)
    }

    pub fn add_const(self) -> Type {
        self.add_cv(Cv::CONST)
    }

    pub fn unqualified(self) -> Type {
        self.with_cv(Cv::NONE)
    }

    pub fn is_const(&self) -> bool {
        self.cv().is_const
    }

    pub fn is_reference(&self) -> bool {
        matches!(self, Type::LValueRef(_) | Type::RValueRef(_))
    }

    pub fn is_lvalue_ref(&self) -> bool {
        matches!(self, Type::LValueRef(_))
    }

    pub fn is_rvalue_ref(&self) -> bool {
        matches!(self, Type::RValueRef(_))
    }

    pub fn is_function(&self) -> bool {
        matches!(self, Type::Function { .. })
    }

    pub fn is_class(&self) -> bool {
        matches!(self, Type::Class { .. })
    }

    pub fn is_pointer(&self) -> bool {
        matches!(self, Type::Pointer { .. })
    }

    pub fn scalar_kind(&self) -> Option<ScalarKind> {
        match self {
            Type::Scalar { kind, .. } => Some(*kind),
            _ => None,
        }
    }

    pub fn is_void(&self) -> bool {
        self.scalar_kind() == Some(ScalarKind::Void)
    }

    pub fn is_arithmetic(&self) -> bool {
        self.scalar_kind().is_some_and(ScalarKind::is_arithmetic)
    }

    pub fn is_integral(&self) -> bool {
        self.scalar_kind().is_some_and(ScalarKind::is_integral)
    }

    pub fn is_floating(&self) -> bool {
        self.scalar_kind().is_some_and(ScalarKind::is_floating)
    }

    /// The referee of a reference, or the type itself.
    pub fn strip_ref(&self) -> &Type {
        match self {
            Type::LValueRef(inner) | Type::RValueRef(inner) => inner,
            other => other,
        }
    }

    pub fn into_stripped_ref(self) -> Type {
        match self {
            Type::LValueRef(inner) | Type::RValueRef(inner) => *inner,
            other => other,
        }
    }

    /// Class name and arguments of a (possibly cv-qualified) class type.
    pub fn as_class(&self) -> Option<(&str, &[Type])> {
        match self {
            Type::Class { name, args, .. } => Some((name, args)),
            _ => None,
        }
    }
}

/// Applies `&` or `&&` to `inner`, collapsing when `inner` is already a
/// reference. Forming a reference to `void` yields `void` unchanged.
pub fn collapse_refs(outer: RefKind, inner: Type) -> Type {
    match inner {
        Type::LValueRef(_) => inner,
        Type::RValueRef(referee) => match outer {
            RefKind::LValue => Type::LValueRef(referee),
            RefKind::RValue => Type::RValueRef(referee),
        },
        t if t.is_void() => t,
        t => match outer {
            RefKind::LValue => Type::LValueRef(Box::new(t)),
            RefKind::RValue => Type::RValueRef(Box::new(t)),
        },
    }
}

/// Removes one reference layer, then the top-level cv of what remains.
pub fn strip_ref_and_top_cv(t: &Type) -> Type {
    t.strip_ref().clone().unqualified()
}

/// Usual arithmetic conversions over the simplified rank ladder.
pub fn common_arithmetic_type(a: &Type, b: &Type) -> Result<Type, Error> {
    let lhs = arithmetic_kind(a)?.promoted();
    let rhs = arithmetic_kind(b)?.promoted();
    // promoted kinds with equal rank are identical, so max is commutative
    let winner = if lhs.conversion_rank() >= rhs.conversion_rank() {
        lhs
    } else {
        rhs
    };
    Ok(Type::scalar(winner))
}

fn arithmetic_kind(t: &Type) -> Result<ScalarKind, Error> {
    match t.scalar_kind() {
        Some(kind) if kind.is_arithmetic() => Ok(kind),
        _ => Err(Error::NotArithmetic(t.clone())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueCategory {
    LValue,
    XValue,
    PRValue,
}

impl ValueCategory {
    pub fn is_rvalue(self) -> bool {
        self != ValueCategory::LValue
    }

    /// Category an expression gets when its declared type is `t`:
    /// `T&` gives an lvalue, `T&&` an xvalue, anything else a prvalue.
    pub fn of_declared(t: &Type) -> ValueCategory {
        match t {
            Type::LValueRef(_) => ValueCategory::LValue,
            Type::RValueRef(inner) if inner.is_function() => ValueCategory::LValue,
            Type::RValueRef(_) => ValueCategory::XValue,
            _ => ValueCategory::PRValue,
        }
    }

    /// Re-encodes an expression of (non-reference) type `t` with this
    /// category as a reference-annotated type: `T&`, `T&&` or `T`.
    pub fn encode(self, t: Type) -> Type {
        match self {
            ValueCategory::LValue => Type::lvalue_ref(t),
            ValueCategory::XValue => Type::rvalue_ref(t),
            ValueCategory::PRValue => t,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ValueCategory::LValue => "lvalue",
            ValueCategory::XValue => "xvalue",
            ValueCategory::PRValue => "prvalue",
        }
    }
}

impl fmt::Display for ValueCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_declarator(f, self, "")
    }
}

// Canonical west-const spelling. `inner` is the declarator text built so far
// (pointer stars, references, function parameter lists), which is what lets
// pointers and references to functions come out as `int(*)(int)`.
fn write_declarator(f: &mut fmt::Formatter<'_>, t: &Type, inner: &str) -> fmt::Result {
    match t {
        Type::Scalar { kind, cv } => {
            write_cv_prefix(f, *cv)?;
            write!(f, "{}{}", kind, inner)
        }
        Type::Class { name, args, cv } => {
            write_cv_prefix(f, *cv)?;
            f.write_str(name)?;
            if !args.is_empty() {
                f.write_str("<")?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", arg)?;
                }
                f.write_str(">")?;
            }
            f.write_str(inner)
        }
        Type::Pointer { pointee, cv } => {
            let mut next = String::from("*");
            if !cv.is_empty() {
                next.push(' ');
                next.push_str(cv.spelling());
            }
            next.push_str(inner);
            write_declarator(f, pointee, &wrap_for_function(pointee, next))
        }
        Type::LValueRef(referee) => {
            let next = alloc::format!("&{}", inner);
            write_declarator(f, referee, &wrap_for_function(referee, next))
        }
        Type::RValueRef(referee) => {
            let next = alloc::format!("&&{}", inner);
            write_declarator(f, referee, &wrap_for_function(referee, next))
        }
        Type::Function { params, ret } => {
            let mut next = String::from(inner);
            next.push('(');
            for (i, p) in params.iter().enumerate() {
                if i > 0 {
                    next.push_str(", ");
                }
                next.push_str(&alloc::format!("{}", p));
            }
            next.push(')');
            write_declarator(f, ret, &next)
        }
    }
}

fn wrap_for_function(target: &Type, declarator: String) -> String {
    if target.is_function() {
        alloc::format!("({})", declarator)
    } else {
        declarator
    }
}

fn write_cv_prefix(f: &mut fmt::Formatter<'_>, cv: Cv) -> fmt::Result {
    if cv.is_empty() {
        Ok(())
    } else {
        write!(f, "{} ", cv.spelling())
    }
}
