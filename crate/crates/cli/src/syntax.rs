//! Declarations of the input language and their canonical printing.

use std::fmt;

use deducto_core::{AutoPattern, DeclStyle, Expr, FnDeclForm, Param, TypeExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceFile {
    pub decls: Vec<Decl>,
}

impl SourceFile {
    /// Equality ignoring source positions.
    pub fn same_structure(&self, other: &SourceFile) -> bool {
        self.decls.len() == other.decls.len()
            && self
                .decls
                .iter()
                .zip(&other.decls)
                .all(|(a, b)| a.kind == b.kind)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decl {
    pub span: Span,
    pub kind: DeclKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum VarType {
    Auto(AutoPattern),
    Explicit(TypeExpr),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    None,
    /// `= expr`
    Assign(Expr),
    /// `(args...)`
    Direct(Vec<Expr>),
    /// `= new T()`
    New(TypeExpr),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructAttr {
    Abstract,
    TrivialCopy,
    NontrivialCopy,
}

impl StructAttr {
    pub fn name(self) -> &'static str {
        match self {
            StructAttr::Abstract => "abstract",
            StructAttr::TrivialCopy => "trivial_copy",
            StructAttr::NontrivialCopy => "nontrivial_copy",
        }
    }

    pub fn from_name(name: &str) -> Option<StructAttr> {
        [
            StructAttr::Abstract,
            StructAttr::TrivialCopy,
            StructAttr::NontrivialCopy,
        ]
        .into_iter()
        .find(|a| a.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructDecl {
    pub name: String,
    pub template_params: Vec<String>,
    pub attrs: Vec<StructAttr>,
    /// `None` for a forward declaration.
    pub body: Option<StructBody>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StructBody {
    pub fields: Vec<(String, TypeExpr)>,
    pub static_fields: Vec<(String, TypeExpr)>,
    pub call_operators: Vec<(Vec<Param>, TypeExpr)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DeclKind {
    Var {
        ty: VarType,
        name: String,
        init: Init,
    },
    Struct(StructDecl),
    Function {
        /// Empty for a non-template function.
        template_params: Vec<String>,
        name: String,
        form: FnDeclForm,
    },
    /// `static_assert_type(name, type);`
    StaticAssertType {
        name: String,
        expected: TypeExpr,
    },
    /// `assert_value(expr, n);`
    AssertValue {
        expr: Expr,
        expected: i64,
    },
    /// `assert_selects(call, n);` where `n` is the 1-based position of the
    /// expected overload in declaration order.
    AssertSelects {
        call: Expr,
        overload: usize,
    },
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn params(ps: &[Param]) -> String {
    ps.iter()
        .map(|p| {
            if p.name.is_empty() {
                p.ty.to_string()
            } else {
                format!("{} {}", p.ty, p.name)
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DeclKind::Var { ty, name, init } => {
                match ty {
                    VarType::Auto(p) => write!(f, "{} {}", p.spelling(), name)?,
                    VarType::Explicit(t) => write!(f, "{} {}", t, name)?,
                }
                match init {
                    Init::None => {}
                    Init::Assign(e) => write!(f, " = {}", e)?,
                    Init::Direct(args) => write!(f, "({})", join(args))?,
                    Init::New(t) => write!(f, " = new {}()", t)?,
                }
                f.write_str(";")
            }
            DeclKind::Struct(s) => {
                if !s.template_params.is_empty() {
                    write!(
                        f,
                        "template<typename {}> ",
                        s.template_params.join(", typename ")
                    )?;
                }
                write!(f, "struct {}", s.name)?;
                for a in &s.attrs {
                    write!(f, " [[{}]]", a.name())?;
                }
                match &s.body {
                    None => f.write_str(";"),
                    Some(body) => {
                        f.write_str(" {")?;
                        for (n, t) in &body.fields {
                            write!(f, " {} {};", t, n)?;
                        }
                        for (n, t) in &body.static_fields {
                            write!(f, " static {} {};", t, n)?;
                        }
                        for (ps, ret) in &body.call_operators {
                            write!(f, " {} operator()({});", ret, params(ps))?;
                        }
                        f.write_str(" };")
                    }
                }
            }
            DeclKind::Function {
                template_params,
                name,
                form,
            } => {
                if !template_params.is_empty() {
                    write!(
                        f,
                        "template<typename {}> ",
                        template_params.join(", typename ")
                    )?;
                }
                match form.style {
                    DeclStyle::Leading => {
                        write!(
                            f,
                            "{} {}({});",
                            form.return_type,
                            name,
                            params(&form.params)
                        )
                    }
                    DeclStyle::Trailing => write!(
                        f,
                        "auto {}({}) -> {};",
                        name,
                        params(&form.params),
                        form.return_type
                    ),
                }
            }
            DeclKind::StaticAssertType { name, expected } => {
                write!(f, "static_assert_type({}, {});", name, expected)
            }
            DeclKind::AssertValue { expr, expected } => {
                write!(f, "assert_value({}, {});", expr, expected)
            }
            DeclKind::AssertSelects { call, overload } => {
                write!(f, "assert_selects({}, {});", call, overload)
            }
        }
    }
}

impl fmt::Display for SourceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            writeln!(f, "{}", d)?;
        }
        Ok(())
    }
}
