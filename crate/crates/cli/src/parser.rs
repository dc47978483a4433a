//! Recursive-descent parser for the declaration language.
//!
//! The language is a subset of C++ declaration syntax. The one classic
//! ambiguity, `T x(a)` as a function declaration versus direct
//! initialization, is settled by tracking which identifiers name types.

use std::collections::BTreeSet;
use std::fmt;

use deducto_core::{
    trait_kind, AutoPattern, BoolExpr, DeclStyle, Expr, FnDeclForm, Param, Predicate, ScalarKind,
    TraitCall, TraitKind, Transform, TypeExpr,
};

use crate::lexer::{lex, Tok, Token};
use crate::syntax::{
    Decl, DeclKind, Init, SourceFile, Span, StructAttr, StructBody, StructDecl, VarType,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax {
        span: Span,
        message: String,
    },
    /// `auto&&` and `decltype(auto)` are outside the modeled language.
    UnsupportedPattern {
        span: Span,
        pattern: String,
    },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax { span, .. } | ParseError::UnsupportedPattern { span, .. } => *span,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { span, message } => {
                write!(f, "{}: syntax error: {}", span, message)
            }
            ParseError::UnsupportedPattern { span, pattern } => {
                write!(f, "{}: unsupported pattern '{}'", span, pattern)
            }
        }
    }
}

impl std::error::Error for ParseError {}

pub fn parse(src: &str) -> Result<SourceFile, ParseError> {
    let tokens = lex(src).map_err(|e| ParseError::Syntax {
        span: e.span,
        message: e.message,
    })?;
    let mut p = Parser {
        tokens,
        pos: 0,
        type_names: BTreeSet::new(),
        scopes: Vec::new(),
    };
    let mut decls = Vec::new();
    while p.peek() != &Tok::Eof {
        decls.push(p.decl()?);
    }
    Ok(SourceFile { decls })
}

/// Parses a single type expression, e.g. for the `type` subcommand or tests.
pub fn parse_type(src: &str) -> Result<TypeExpr, ParseError> {
    let tokens = lex(src).map_err(|e| ParseError::Syntax {
        span: e.span,
        message: e.message,
    })?;
    let mut p = Parser {
        tokens,
        pos: 0,
        type_names: BTreeSet::new(),
        scopes: Vec::new(),
    };
    let t = p.type_expr(true)?;
    p.expect_eof()?;
    Ok(t)
}

/// Parses a single expression.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let tokens = lex(src).map_err(|e| ParseError::Syntax {
        span: e.span,
        message: e.message,
    })?;
    let mut p = Parser {
        tokens,
        pos: 0,
        type_names: BTreeSet::new(),
        scopes: Vec::new(),
    };
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

const SCALAR_WORDS: &[&str] = &[
    "void", "bool", "char", "short", "int", "long", "float", "double", "signed", "unsigned",
];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Struct names seen so far.
    type_names: BTreeSet<String>,
    /// Template parameter lists currently in scope.
    scopes: Vec<Vec<String>>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            span: self.span(),
            message: message.into(),
        })
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.error(format!("expected '{}', found {}", p, self.peek()))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), ParseError> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.error(format!("expected '{}', found {}", w, self.peek()))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            self.error(format!("unexpected {}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected identifier, found {}", other)),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let negative = self.eat_punct("-");
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(if negative { -v } else { v })
            }
            other => self.error(format!("expected integer, found {}", other)),
        }
    }

    fn is_type_name(&self, name: &str) -> bool {
        self.type_names.contains(name) || self.scopes.iter().any(|s| s.iter().any(|p| p == name))
    }

    /// Could the current token begin a type expression?
    fn starts_type(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => {
                SCALAR_WORDS.contains(&s.as_str())
                    || matches!(
                        s.as_str(),
                        "const" | "volatile" | "typename" | "decltype" | "size_t"
                    )
                    || self.is_type_name(s)
                    || trait_kind(s) == Some(TraitKind::Type)
            }
            _ => false,
        }
    }

    // ---- declarations ----

    fn decl(&mut self) -> Result<Decl, ParseError> {
        let span = self.span();
        let kind = if self.is_word("template") {
            self.template_decl()?
        } else if self.is_word("struct") || self.is_word("class") {
            DeclKind::Struct(self.struct_decl(Vec::new())?)
        } else if self.is_word("static_assert_type") {
            self.bump();
            self.expect_punct("(")?;
            let name = self.ident()?;
            self.expect_punct(",")?;
            let expected = self.type_expr(true)?;
            self.expect_punct(")")?;
            self.expect_punct(";")?;
            DeclKind::StaticAssertType { name, expected }
        } else if self.is_word("assert_value") || self.is_word("assert_selects") {
            let selects = self.is_word("assert_selects");
            self.bump();
            self.expect_punct("(")?;
            let expr = self.expr()?;
            self.expect_punct(",")?;
            let n_span = self.span();
            let n = self.int()?;
            self.expect_punct(")")?;
            self.expect_punct(";")?;
            if selects {
                if !matches!(expr, Expr::Call { .. } | Expr::Add(..)) {
                    return Err(ParseError::Syntax {
                        span,
                        message: "assert_selects expects a call".into(),
                    });
                }
                if n < 1 {
                    return Err(ParseError::Syntax {
                        span: n_span,
                        message: "overload positions start at 1".into(),
                    });
                }
                DeclKind::AssertSelects {
                    call: expr,
                    overload: n as usize,
                }
            } else {
                DeclKind::AssertValue { expr, expected: n }
            }
        } else {
            self.var_or_function(Vec::new())?
        };
        Ok(Decl { span, kind })
    }

    fn template_params(&mut self) -> Result<Vec<String>, ParseError> {
        self.expect_word("template")?;
        self.expect_punct("<")?;
        let mut params = Vec::new();
        loop {
            if !(self.eat_word("typename") || self.eat_word("class")) {
                return self.error(format!("expected 'typename', found {}", self.peek()));
            }
            params.push(self.ident()?);
            if !self.eat_punct(",") {
                break;
            }
        }
        self.expect_punct(">")?;
        Ok(params)
    }

    fn template_decl(&mut self) -> Result<DeclKind, ParseError> {
        let params = self.template_params()?;
        self.scopes.push(params.clone());
        let result = if self.is_word("struct") || self.is_word("class") {
            self.struct_decl(params).map(DeclKind::Struct)
        } else {
            let start = self.span();
            match self.var_or_function(params)? {
                k @ DeclKind::Function { .. } => Ok(k),
                _ => Err(ParseError::Syntax {
                    span: start,
                    message: "only functions and structs can be templates".into(),
                }),
            }
        };
        self.scopes.pop();
        result
    }

    fn struct_decl(&mut self, template_params: Vec<String>) -> Result<StructDecl, ParseError> {
        self.bump(); // struct / class
        let name = self.ident()?;
        let mut attrs = Vec::new();
        while self.eat_punct("[[") {
            let span = self.span();
            let attr = self.ident()?;
            let attr = StructAttr::from_name(&attr).ok_or(ParseError::Syntax {
                span,
                message: format!("unknown attribute '{}'", attr),
            })?;
            self.expect_punct("]]")?;
            attrs.push(attr);
        }
        self.type_names.insert(name.clone());
        if self.eat_punct(";") {
            return Ok(StructDecl {
                name,
                template_params,
                attrs,
                body: None,
            });
        }
        self.expect_punct("{")?;
        let mut body = StructBody::default();
        while !self.eat_punct("}") {
            self.member(&mut body)?;
        }
        self.expect_punct(";")?;
        Ok(StructDecl {
            name,
            template_params,
            attrs,
            body: Some(body),
        })
    }

    fn member(&mut self, body: &mut StructBody) -> Result<(), ParseError> {
        let is_static = self.eat_word("static");
        let ty = self.type_expr(false)?;
        if !is_static && self.eat_word("operator") {
            self.expect_punct("(")?;
            self.expect_punct(")")?;
            let params = self.params()?;
            self.eat_word("const");
            self.end_of_function()?;
            body.call_operators.push((params, ty));
            return Ok(());
        }
        loop {
            let name = self.ident()?;
            if is_static {
                body.static_fields.push((name, ty.clone()));
            } else {
                body.fields.push((name, ty.clone()));
            }
            if !self.eat_punct(",") {
                break;
            }
        }
        self.expect_punct(";")
    }

    /// `;` or a skipped body, optionally followed by `;`.
    fn end_of_function(&mut self) -> Result<(), ParseError> {
        if self.eat_punct(";") {
            return Ok(());
        }
        if !self.is_punct("{") {
            return self.error(format!(
                "expected ';' or function body, found {}",
                self.peek()
            ));
        }
        let mut depth = 0usize;
        loop {
            match self.bump() {
                Tok::Punct("{") => depth += 1,
                Tok::Punct("}") => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                Tok::Eof => return self.error("unterminated function body"),
                _ => {}
            }
        }
        self.eat_punct(";");
        Ok(())
    }

    fn function_name(&mut self) -> Result<String, ParseError> {
        if self.eat_word("operator") {
            self.expect_punct("+")?;
            return Ok("operator+".into());
        }
        self.ident()
    }

    fn params(&mut self) -> Result<Vec<Param>, ParseError> {
        self.expect_punct("(")?;
        let mut params = Vec::new();
        if self.eat_punct(")") {
            return Ok(params);
        }
        loop {
            let ty = self.type_expr(false)?;
            let name = match self.peek() {
                Tok::Ident(s) if !is_keyword(s) => self.ident()?,
                _ => String::new(),
            };
            params.push(Param { name, ty });
            if !self.eat_punct(",") {
                break;
            }
        }
        self.expect_punct(")")?;
        Ok(params)
    }

    fn var_or_function(&mut self, template_params: Vec<String>) -> Result<DeclKind, ParseError> {
        let start = self.span();
        if self.is_word("decltype") && matches!(self.peek_at(2), Tok::Ident(s) if s == "auto") {
            return Err(ParseError::UnsupportedPattern {
                span: start,
                pattern: "decltype(auto)".into(),
            });
        }
        // `auto` and `const auto` forms
        let auto_const =
            self.is_word("const") && matches!(self.peek_at(1), Tok::Ident(s) if s == "auto");
        if self.is_word("auto") || auto_const {
            if auto_const {
                self.bump();
            }
            self.bump();
            if self.is_punct("&&") {
                return Err(ParseError::UnsupportedPattern {
                    span: start,
                    pattern: "auto&&".into(),
                });
            }
            let lvalue_ref = self.eat_punct("&");
            let name_span = self.span();
            let name = self.function_name()?;
            if self.is_punct("(") {
                if auto_const || lvalue_ref {
                    return Err(ParseError::Syntax {
                        span: name_span,
                        message: "trailing return type requires plain 'auto'".into(),
                    });
                }
                let params = self.params()?;
                self.expect_punct("->")?;
                let return_type = self.type_expr(false)?;
                self.end_of_function()?;
                return Ok(DeclKind::Function {
                    template_params,
                    name,
                    form: FnDeclForm {
                        style: DeclStyle::Trailing,
                        params,
                        return_type,
                    },
                });
            }
            if !template_params.is_empty() {
                return self.error("expected a function declaration");
            }
            self.expect_punct("=")?;
            let init = self.expr()?;
            self.expect_punct(";")?;
            return Ok(DeclKind::Var {
                ty: VarType::Auto(AutoPattern {
                    add_const: auto_const,
                    lvalue_ref,
                }),
                name,
                init: Init::Assign(init),
            });
        }

        let ty = self.type_expr(false)?;
        let name = self.function_name()?;
        let is_function = self.is_punct("(")
            && (matches!(self.peek_at(1), Tok::Punct(")")) || {
                self.pos += 1;
                let t = self.starts_type();
                self.pos -= 1;
                t
            });
        if is_function || !template_params.is_empty() || name == "operator+" {
            let params = self.params()?;
            self.end_of_function()?;
            return Ok(DeclKind::Function {
                template_params,
                name,
                form: FnDeclForm {
                    style: DeclStyle::Leading,
                    params,
                    return_type: ty,
                },
            });
        }
        let init = if self.eat_punct("=") {
            if self.eat_word("new") {
                let t = self.type_expr(false)?;
                self.expect_punct("(")?;
                self.expect_punct(")")?;
                Init::New(t)
            } else {
                Init::Assign(self.expr()?)
            }
        } else if self.eat_punct("(") {
            let mut args = vec![self.expr()?];
            while self.eat_punct(",") {
                args.push(self.expr()?);
            }
            self.expect_punct(")")?;
            Init::Direct(args)
        } else {
            Init::None
        };
        self.expect_punct(";")?;
        Ok(DeclKind::Var {
            ty: VarType::Explicit(ty),
            name,
            init,
        })
    }

    // ---- types ----

    /// A type expression. With `allow_function`, a trailing `(params)`
    /// makes a function type (as in `int(int)` or `result_of<f(int)>`).
    fn type_expr(&mut self, allow_function: bool) -> Result<TypeExpr, ParseError> {
        let start = self.span();
        self.eat_word("typename");
        let (mut is_const, mut is_volatile) = (false, false);
        self.cv(&mut is_const, &mut is_volatile);
        if self.is_word("auto") {
            return Err(ParseError::Syntax {
                span: start,
                message: "'auto' is not allowed here".into(),
            });
        }
        let mut t = self.base_type()?;
        self.cv(&mut is_const, &mut is_volatile);
        t = apply_cv(t, is_const, is_volatile);
        loop {
            if self.eat_punct("*") {
                t = TypeExpr::Pointer(Box::new(t));
                let (mut c, mut v) = (false, false);
                self.cv(&mut c, &mut v);
                t = apply_cv(t, c, v);
            } else if self.eat_punct("&") {
                t = TypeExpr::LValueRef(Box::new(t));
            } else if self.eat_punct("&&") {
                t = TypeExpr::RValueRef(Box::new(t));
            } else if allow_function && self.is_punct("(") {
                self.bump();
                let mut params = Vec::new();
                if !self.eat_punct(")") {
                    loop {
                        params.push(self.type_expr(true)?);
                        if !self.eat_punct(",") {
                            break;
                        }
                    }
                    self.expect_punct(")")?;
                }
                t = TypeExpr::Function {
                    ret: Box::new(t),
                    params,
                };
            } else {
                break;
            }
        }
        Ok(t)
    }

    fn cv(&mut self, is_const: &mut bool, is_volatile: &mut bool) {
        loop {
            if self.eat_word("const") {
                *is_const = true;
            } else if self.eat_word("volatile") {
                *is_volatile = true;
            } else {
                break;
            }
        }
    }

    fn base_type(&mut self) -> Result<TypeExpr, ParseError> {
        let span = self.span();
        let word = match self.peek().clone() {
            Tok::Ident(w) => w,
            other => return self.error(format!("expected a type, found {}", other)),
        };
        if SCALAR_WORDS.contains(&word.as_str()) {
            return self.scalar();
        }
        if word == "size_t" {
            self.bump();
            return Ok(TypeExpr::Scalar(ScalarKind::UnsignedLong));
        }
        if word == "decltype" {
            self.bump();
            self.expect_punct("(")?;
            if self.is_word("auto") {
                return Err(ParseError::UnsupportedPattern {
                    span,
                    pattern: "decltype(auto)".into(),
                });
            }
            let e = self.expr()?;
            self.expect_punct(")")?;
            return Ok(TypeExpr::Decltype(Box::new(e)));
        }
        if is_keyword(&word) {
            return self.error(format!("expected a type, found '{}'", word));
        }
        if let Some(kind) = trait_kind(&word) {
            if matches!(self.peek_at(1), Tok::Punct("<")) {
                let call = self.trait_call()?;
                self.expect_punct("::")?;
                let member_span = self.span();
                let member = self.ident_or_keyword()?;
                return match (kind, member.as_str()) {
                    (TraitKind::Type, "type") => Ok(TypeExpr::Trait(call)),
                    _ => Err(ParseError::Syntax {
                        span: member_span,
                        message: format!("'{}' has no member type '{}'", word, member),
                    }),
                };
            }
        }
        self.bump();
        let mut args = Vec::new();
        if self.eat_punct("<") {
            loop {
                args.push(self.type_expr(true)?);
                if !self.eat_punct(",") {
                    break;
                }
            }
            self.expect_punct(">")?;
        }
        Ok(TypeExpr::Named { name: word, args })
    }

    fn ident_or_keyword(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected identifier, found {}", other)),
        }
    }

    fn scalar(&mut self) -> Result<TypeExpr, ParseError> {
        let span = self.span();
        let mut words: Vec<String> = Vec::new();
        while let Tok::Ident(w) = self.peek() {
            if !SCALAR_WORDS.contains(&w.as_str()) {
                break;
            }
            words.push(w.clone());
            self.bump();
        }
        let count = |w: &str| words.iter().filter(|x| *x == w).count();
        let signed = count("signed");
        let unsigned = count("unsigned");
        let longs = count("long");
        let bad = || ParseError::Syntax {
            span,
            message: format!("invalid type specifier '{}'", words.join(" ")),
        };
        if signed + unsigned > 1 {
            return Err(bad());
        }
        let core: Vec<&str> = words
            .iter()
            .map(String::as_str)
            .filter(|w| !matches!(*w, "signed" | "unsigned" | "long"))
            .collect();
        let kind = match (core.as_slice(), longs) {
            (["void"], 0) if signed + unsigned == 0 => ScalarKind::Void,
            (["bool"], 0) if signed + unsigned == 0 => ScalarKind::Bool,
            (["float"], 0) if signed + unsigned == 0 => ScalarKind::Float,
            (["double"], 0) if signed + unsigned == 0 => ScalarKind::Double,
            (["double"], 1) if signed + unsigned == 0 => ScalarKind::LongDouble,
            (["char"], 0) => match (signed, unsigned) {
                (1, _) => ScalarKind::SignedChar,
                (_, 1) => ScalarKind::UnsignedChar,
                _ => ScalarKind::Char,
            },
            (["short"], 0) | (["short", "int"], 0) | (["int", "short"], 0) => {
                if unsigned == 1 {
                    ScalarKind::UnsignedShort
                } else {
                    ScalarKind::Short
                }
            }
            ([], 0) | (["int"], 0) => {
                if words.is_empty() {
                    return Err(bad());
                }
                if unsigned == 1 {
                    ScalarKind::UnsignedInt
                } else {
                    ScalarKind::Int
                }
            }
            ([], 1) | (["int"], 1) => {
                if unsigned == 1 {
                    ScalarKind::UnsignedLong
                } else {
                    ScalarKind::Long
                }
            }
            ([], 2) | (["int"], 2) => {
                if unsigned == 1 {
                    ScalarKind::UnsignedLongLong
                } else {
                    ScalarKind::LongLong
                }
            }
            _ => return Err(bad()),
        };
        Ok(TypeExpr::Scalar(kind))
    }

    /// `name<args...>` for a registered trait, with arity checked.
    fn trait_call(&mut self) -> Result<TraitCall, ParseError> {
        let span = self.span();
        let name = self.ident_or_keyword()?;
        self.expect_punct("<")?;
        let mut call = TraitCall::new(name.clone(), Vec::new());
        if name == "enable_if" {
            call.value_args.push(self.bool_expr()?);
            if self.eat_punct(",") {
                call.type_args.push(self.type_expr(true)?);
            }
        } else {
            loop {
                call.type_args.push(self.type_expr(true)?);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct(">")?;
        let expected = if let Some(p) = Predicate::from_name(&name) {
            p.arity()
        } else if Transform::from_name(&name).is_some()
            || name == "result_of"
            || name == "enable_if"
        {
            1
        } else {
            return Err(ParseError::Syntax {
                span,
                message: format!("unknown trait '{}'", name),
            });
        };
        let found = call.type_args.len() + call.value_args.len();
        let arity_ok = if name == "enable_if" {
            found <= 2
        } else {
            found == expected
        };
        if !arity_ok {
            return Err(ParseError::Syntax {
                span,
                message: format!("'{}' expects {} argument(s), got {}", name, expected, found),
            });
        }
        if name == "result_of" && !matches!(call.type_args[0], TypeExpr::Function { .. }) {
            return Err(ParseError::Syntax {
                span,
                message: "'result_of' expects an argument of the form F(Args...)".into(),
            });
        }
        Ok(call)
    }

    fn bool_expr(&mut self) -> Result<BoolExpr, ParseError> {
        if self.eat_punct("!") {
            return Ok(BoolExpr::Not(Box::new(self.bool_expr()?)));
        }
        if self.eat_word("true") {
            return Ok(BoolExpr::Lit(true));
        }
        if self.eat_word("false") {
            return Ok(BoolExpr::Lit(false));
        }
        let span = self.span();
        let call = self.value_trait()?.ok_or(ParseError::Syntax {
            span,
            message: format!("expected a boolean condition, found {}", self.peek()),
        })?;
        Ok(BoolExpr::Value(call))
    }

    /// `is_x<...>::value`, if the current token starts one.
    fn value_trait(&mut self) -> Result<Option<TraitCall>, ParseError> {
        let is_value_trait = matches!(self.peek(), Tok::Ident(s) if trait_kind(s) == Some(TraitKind::Value))
            && matches!(self.peek_at(1), Tok::Punct("<"));
        if !is_value_trait {
            return Ok(None);
        }
        let call = self.trait_call()?;
        self.expect_punct("::")?;
        if !self.eat_word("value") {
            return self.error(format!("expected 'value', found {}", self.peek()));
        }
        Ok(Some(call))
    }

    // ---- expressions ----

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.postfix()?;
        while self.eat_punct("+") {
            let rhs = self.postfix()?;
            lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.primary()?;
        loop {
            if self.eat_punct(".") {
                let field = self.ident()?;
                e = Expr::member(e, field, false);
            } else if self.eat_punct("->") {
                let field = self.ident()?;
                e = Expr::member(e, field, true);
            } else if self.eat_punct("++") {
                e = Expr::PostInc(Box::new(e));
            } else {
                break;
            }
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::IntLit(v))
            }
            Tok::Float(v) => {
                self.bump();
                Ok(Expr::FloatLit(v))
            }
            Tok::Punct("(") => {
                self.bump();
                let inner = self.expr()?;
                self.expect_punct(")")?;
                Ok(Expr::Paren(Box::new(inner)))
            }
            Tok::Ident(w) if w == "declval" => {
                self.bump();
                self.expect_punct("<")?;
                let t = self.type_expr(true)?;
                self.expect_punct(">")?;
                self.expect_punct("(")?;
                self.expect_punct(")")?;
                Ok(Expr::Declval(Box::new(t)))
            }
            Tok::Ident(_) => {
                if let Some(call) = self.value_trait()? {
                    return Ok(Expr::TraitValue(call));
                }
                let name = self.ident()?;
                if self.eat_punct("::") {
                    let member = self.ident()?;
                    return Ok(Expr::Id(format!("{}::{}", name, member)));
                }
                if self.eat_punct("(") {
                    let mut args = Vec::new();
                    if !self.eat_punct(")") {
                        loop {
                            args.push(self.expr()?);
                            if !self.eat_punct(",") {
                                break;
                            }
                        }
                        self.expect_punct(")")?;
                    }
                    return Ok(Expr::Call { callee: name, args });
                }
                Ok(Expr::Id(name))
            }
            other => self.error(format!("expected an expression, found {}", other)),
        }
    }
}

fn apply_cv(t: TypeExpr, is_const: bool, is_volatile: bool) -> TypeExpr {
    let t = if is_volatile {
        TypeExpr::Volatile(Box::new(t))
    } else {
        t
    };
    if is_const {
        TypeExpr::Const(Box::new(t))
    } else {
        t
    }
}

fn is_keyword(s: &str) -> bool {
    SCALAR_WORDS.contains(&s)
        || matches!(
            s,
            "auto"
                | "const"
                | "volatile"
                | "decltype"
                | "struct"
                | "class"
                | "template"
                | "typename"
                | "static"
                | "operator"
                | "new"
                | "true"
                | "false"
                | "declval"
        )
}
