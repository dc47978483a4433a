//! Cross-checks the engine against a real C++11 compiler.
//!
//! Every fact the checker derived (declared types, `decltype` of
//! initializers, class trait flags) becomes a `static_assert` in a
//! translation unit that mirrors the input declarations. The unit is
//! compiled with `-fsyntax-only`; each failed assertion is a divergence.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::io::{self, Write as _};
use std::process::{Command, Stdio};

use deducto_core::{BoolExpr, DeclStyle, Expr, Param, TraitCall, TypeExpr};

use crate::check::{check, Probe, ProbeKind};
use crate::parser::parse;
use crate::syntax::{DeclKind, Init, SourceFile, StructAttr, VarType};

#[derive(Debug)]
pub enum DiffError {
    /// The compiler could not be started.
    CompilerUnavailable(String),
    /// The input has parse or engine errors, so there is nothing to compare.
    Unrenderable {
        case: String,
        reason: String,
    },
    Io(io::Error),
}

impl fmt::Display for DiffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffError::CompilerUnavailable(cmd) => write!(f, "compiler '{}' is not available", cmd),
            DiffError::Unrenderable { case, reason } => {
                write!(f, "{}: cannot render: {}", case, reason)
            }
            DiffError::Io(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for DiffError {}

/// A parsed, checked input ready to be rendered.
#[derive(Debug, Clone)]
pub struct Case {
    pub name: String,
    file: SourceFile,
    /// The engine's answers. Public so harness self-tests can corrupt one.
    pub probes: Vec<Probe>,
}

/// Parses and checks each `(name, source)` pair.
pub fn prepare(inputs: &[(String, String)]) -> Result<Vec<Case>, DiffError> {
    inputs
        .iter()
        .map(|(name, src)| {
            let file = parse(src).map_err(|e| DiffError::Unrenderable {
                case: name.clone(),
                reason: e.to_string(),
            })?;
            let checked = check(&file, name);
            if let Some(m) = checked.report.messages().next() {
                return Err(DiffError::Unrenderable {
                    case: name.clone(),
                    reason: m.to_string(),
                });
            }
            Ok(Case {
                name: name.clone(),
                file,
                probes: checked.probes,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub case: String,
    /// The assertion as rendered, e.g. `decltype(x5)` is `const double&`.
    pub claim: String,
}

#[derive(Debug, Clone, Default)]
pub struct DiffReport {
    pub cases: usize,
    pub probes: usize,
    pub divergences: Vec<Divergence>,
    /// Compiler errors not attributable to a probe.
    pub compile_errors: Vec<String>,
}

impl DiffReport {
    pub fn agrees(&self) -> bool {
        self.divergences.is_empty() && self.compile_errors.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in &self.divergences {
            let _ = writeln!(out, "DIVERGENCE {}: engine says {}", d.case, d.claim);
        }
        for e in &self.compile_errors {
            let _ = writeln!(out, "COMPILE ERROR {}", e);
        }
        let _ = writeln!(
            out,
            "{} case(s), {} probe(s), {} divergence(s), {} other compile error(s)",
            self.cases,
            self.probes,
            self.divergences.len(),
            self.compile_errors.len()
        );
        out
    }
}

const TAG: &str = "deducto#";

/// The translation unit for `cases`, with probes numbered in order.
pub fn render(cases: &[Case]) -> String {
    let mut out = String::from("#include <cstddef>\n#include <type_traits>\n#include <utility>\n");
    let mut next_id = 0usize;
    for (i, case) in cases.iter().enumerate() {
        let _ = writeln!(out, "\n// {}\nnamespace deducto_case_{} {{", case.name, i);
        let r = Renderer::new(&case.file);
        for (index, decl) in case.file.decls.iter().enumerate() {
            if let Some(text) = r.decl(&decl.kind) {
                let _ = writeln!(out, "{}", text);
            }
            for probe in case.probes.iter().filter(|p| p.after == index) {
                let _ = writeln!(out, "{}", r.probe(&probe.kind, next_id));
                next_id += 1;
            }
        }
        let _ = writeln!(out, "}}");
    }
    out
}

/// Renders, compiles with `cc`, and maps failures back to probes.
pub fn run(cases: &[Case], cc: &str) -> Result<DiffReport, DiffError> {
    let source = render(cases);
    let mut words = cc.split_whitespace();
    let program = words
        .next()
        .ok_or_else(|| DiffError::CompilerUnavailable(cc.into()))?;
    let mut command = Command::new(program);
    command.args(words);
    if program.contains("clang") {
        // report every failed probe, not just the first twenty
        command.arg("-ferror-limit=0");
    }
    let mut child = command
        .args(["-std=c++11", "-fsyntax-only", "-x", "c++", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| match e.kind() {
            io::ErrorKind::NotFound | io::ErrorKind::PermissionDenied => {
                DiffError::CompilerUnavailable(cc.into())
            }
            _ => DiffError::Io(e),
        })?;
    child
        .stdin
        .take()
        .expect("stdin is piped")
        .write_all(source.as_bytes())
        .map_err(DiffError::Io)?;
    let output = child.wait_with_output().map_err(DiffError::Io)?;
    let stderr = String::from_utf8_lossy(&output.stderr);

    // probe id -> (case, claim)
    let mut index = Vec::new();
    for case in cases {
        let r = Renderer::new(&case.file);
        for probe in &case.probes {
            index.push((case.name.clone(), r.claim(&probe.kind)));
        }
    }
    let mut failed = BTreeSet::new();
    let mut compile_errors = Vec::new();
    for line in stderr.lines().filter(|l| l.contains("error:")) {
        // compilers echo the offending source line too, but only the
        // diagnostic line itself says `error:`
        if let Some(pos) = line.find(TAG) {
            let digits: String = line[pos + TAG.len()..]
                .chars()
                .take_while(char::is_ascii_digit)
                .collect();
            if let Ok(id) = digits.parse::<usize>() {
                failed.insert(id);
                continue;
            }
        }
        compile_errors.push(line.trim().to_string());
    }
    if !output.status.success() && failed.is_empty() && compile_errors.is_empty() {
        compile_errors.push(format!("compiler exited with {}", output.status));
    }
    let divergences = failed
        .into_iter()
        .filter_map(|id| index.get(id).cloned())
        .map(|(case, claim)| Divergence { case, claim })
        .collect();
    Ok(DiffReport {
        cases: cases.len(),
        probes: index.len(),
        divergences,
        compile_errors,
    })
}

struct Renderer {
    /// Names of non-template functions, which need `decltype` to be used
    /// as types.
    functions: BTreeSet<String>,
}

impl Renderer {
    fn new(file: &SourceFile) -> Renderer {
        let functions = file
            .decls
            .iter()
            .filter_map(|d| match &d.kind {
                DeclKind::Function {
                    template_params,
                    name,
                    ..
                } if template_params.is_empty() => Some(name.clone()),
                _ => None,
            })
            .collect();
        Renderer { functions }
    }

    fn decl(&self, kind: &DeclKind) -> Option<String> {
        Some(match kind {
            DeclKind::Var { ty, name, init } => match (ty, init) {
                (VarType::Auto(p), Init::Assign(e)) => {
                    format!("{} {} = {};", p.spelling(), name, self.expr(e))
                }
                // initializers only matter to the engine's own checks
                (VarType::Explicit(t), _) => format!("extern {};", self.declarator(t, name)),
                (VarType::Auto(_), _) => return None,
            },
            DeclKind::Struct(s) => {
                let mut out = String::new();
                if !s.template_params.is_empty() {
                    let _ = write!(
                        out,
                        "template<typename {}> ",
                        s.template_params.join(", typename ")
                    );
                }
                let _ = write!(out, "struct {}", s.name);
                match &s.body {
                    None => out.push(';'),
                    Some(body) => {
                        out.push_str(" {");
                        for (n, t) in &body.fields {
                            let _ = write!(out, " {};", self.declarator(t, n));
                        }
                        for (n, t) in &body.static_fields {
                            let _ = write!(out, " static {};", self.declarator(t, n));
                        }
                        for (params, ret) in &body.call_operators {
                            let _ = write!(
                                out,
                                " {} operator()({});",
                                self.ty(ret),
                                self.params(params)
                            );
                        }
                        if s.attrs.contains(&StructAttr::Abstract) {
                            out.push_str(" virtual void deducto_pure_() = 0;");
                        }
                        if s.attrs.contains(&StructAttr::NontrivialCopy) {
                            let _ = write!(
                                out,
                                " {0}& operator=(const {0}&) {{ return *this; }}",
                                s.name
                            );
                        }
                        out.push_str(" };");
                    }
                }
                out
            }
            DeclKind::Function {
                template_params,
                name,
                form,
            } => {
                let mut out = String::new();
                if !template_params.is_empty() {
                    let _ = write!(
                        out,
                        "template<typename {}> ",
                        template_params.join(", typename ")
                    );
                }
                match form.style {
                    DeclStyle::Leading => {
                        let _ = write!(
                            out,
                            "{} {}({});",
                            self.ty(&form.return_type),
                            name,
                            self.params(&form.params)
                        );
                    }
                    DeclStyle::Trailing => {
                        let _ = write!(
                            out,
                            "auto {}({}) -> {};",
                            name,
                            self.params(&form.params),
                            self.ty(&form.return_type)
                        );
                    }
                }
                out
            }
            // assertions are the engine's business; probes cover them
            DeclKind::StaticAssertType { .. }
            | DeclKind::AssertValue { .. }
            | DeclKind::AssertSelects { .. } => return None,
        })
    }

    fn probe(&self, kind: &ProbeKind, id: usize) -> String {
        match kind {
            ProbeKind::DeclType { name, ty } => format!(
                "static_assert(std::is_same<decltype({}), {}>::value, \"{}{}\");",
                name, ty, TAG, id
            ),
            ProbeKind::ExprType { expr, ty } => format!(
                "static_assert(std::is_same<decltype({}), {}>::value, \"{}{}\");",
                self.expr(expr),
                ty,
                TAG,
                id
            ),
            ProbeKind::Flag {
                trait_name,
                class,
                value,
            } => format!(
                "static_assert(std::{}<{}>::value == {}, \"{}{}\");",
                trait_name, class, value, TAG, id
            ),
        }
    }

    /// Human-readable statement of a probe.
    fn claim(&self, kind: &ProbeKind) -> String {
        match kind {
            ProbeKind::DeclType { name, ty } => format!("decltype({}) is `{}`", name, ty),
            ProbeKind::ExprType { expr, ty } => {
                format!("decltype({}) is `{}`", self.expr(expr), ty)
            }
            ProbeKind::Flag {
                trait_name,
                class,
                value,
            } => format!("{}<{}> is {}", trait_name, class, value),
        }
    }

    fn params(&self, params: &[Param]) -> String {
        params
            .iter()
            .map(|p| self.declarator(&p.ty, &p.name))
            .collect::<Vec<_>>()
            .join(", ")
    }

    fn declarator(&self, t: &TypeExpr, name: &str) -> String {
        if name.is_empty() {
            self.ty(t)
        } else {
            format!("{} {}", self.ty(t), name)
        }
    }

    fn ty(&self, t: &TypeExpr) -> String {
        match t {
            TypeExpr::Scalar(k) => k.name().to_string(),
            TypeExpr::Named { name, args } if args.is_empty() && self.functions.contains(name) => {
                format!("decltype({})", name)
            }
            TypeExpr::Named { name, args } if args.is_empty() => name.clone(),
            TypeExpr::Named { name, args } => format!("{}<{}>", name, self.list(args)),
            TypeExpr::Const(inner) if is_pointer_core(inner) => format!("{} const", self.ty(inner)),
            TypeExpr::Const(inner) => format!("const {}", self.ty(inner)),
            TypeExpr::Volatile(inner) if is_pointer_core(inner) => {
                format!("{} volatile", self.ty(inner))
            }
            TypeExpr::Volatile(inner) => format!("volatile {}", self.ty(inner)),
            // declarators around a function type need the library's help
            TypeExpr::Pointer(inner) if is_function(inner) => {
                format!("typename std::add_pointer<{}>::type", self.ty(inner))
            }
            TypeExpr::LValueRef(inner) if is_function(inner) => {
                format!(
                    "typename std::add_lvalue_reference<{}>::type",
                    self.ty(inner)
                )
            }
            TypeExpr::RValueRef(inner) if is_function(inner) => {
                format!(
                    "typename std::add_rvalue_reference<{}>::type",
                    self.ty(inner)
                )
            }
            TypeExpr::Pointer(inner) => format!("{}*", self.ty(inner)),
            TypeExpr::LValueRef(inner) => format!("{}&", self.ty(inner)),
            TypeExpr::RValueRef(inner) => format!("{}&&", self.ty(inner)),
            TypeExpr::Function { ret, params } => {
                format!("{}({})", self.ty(ret), self.list(params))
            }
            TypeExpr::Decltype(e) => format!("decltype({})", self.expr(e)),
            TypeExpr::Trait(call) => format!("typename {}::type", self.trait_call(call)),
            TypeExpr::Concrete(t) => t.to_string(),
        }
    }

    fn list(&self, items: &[TypeExpr]) -> String {
        items
            .iter()
            .map(|t| self.ty(t))
            .collect::<Vec<_>>()
            .join(", ")
    }

    fn trait_call(&self, call: &TraitCall) -> String {
        let mut args: Vec<String> = call.value_args.iter().map(|b| self.bool_expr(b)).collect();
        if call.name == "result_of" {
            // the callee of F(Args...) must be a callable type, so a plain
            // function name becomes a function pointer type
            for t in &call.type_args {
                match t {
                    TypeExpr::Function { ret, params } => {
                        let callee = match &**ret {
                            TypeExpr::Named { name, args }
                                if args.is_empty() && self.functions.contains(name) =>
                            {
                                format!("decltype(&{})", name)
                            }
                            other => self.ty(other),
                        };
                        args.push(format!("{}({})", callee, self.list(params)));
                    }
                    other => args.push(self.ty(other)),
                }
            }
        } else {
            args.extend(call.type_args.iter().map(|t| self.ty(t)));
        }
        format!("std::{}<{}>", call.name, args.join(", "))
    }

    fn bool_expr(&self, b: &BoolExpr) -> String {
        match b {
            BoolExpr::Lit(v) => v.to_string(),
            BoolExpr::Value(call) => format!("{}::value", self.trait_call(call)),
            BoolExpr::Not(inner) => format!("!{}", self.bool_expr(inner)),
        }
    }

    fn expr(&self, e: &Expr) -> String {
        match e {
            Expr::IntLit(v) => v.to_string(),
            Expr::FloatLit(v) => format!("{:?}", v),
            Expr::Id(name) => name.clone(),
            Expr::Member { base, field, arrow } => {
                format!(
                    "{}{}{}",
                    self.expr(base),
                    if *arrow { "->" } else { "." },
                    field
                )
            }
            Expr::Call { callee, args } => format!(
                "{}({})",
                callee,
                args.iter()
                    .map(|a| self.expr(a))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            Expr::Paren(inner) => format!("({})", self.expr(inner)),
            Expr::PostInc(inner) => format!("{}++", self.expr(inner)),
            Expr::Add(l, r) => format!("{} + {}", self.expr(l), self.expr(r)),
            Expr::Declval(t) => format!("std::declval<{}>()", self.ty(t)),
            Expr::TraitValue(call) => format!("{}::value", self.trait_call(call)),
        }
    }
}

fn is_pointer_core(t: &TypeExpr) -> bool {
    match t {
        TypeExpr::Pointer(_) => true,
        TypeExpr::Const(inner) | TypeExpr::Volatile(inner) => is_pointer_core(inner),
        _ => false,
    }
}

fn is_function(t: &TypeExpr) -> bool {
    matches!(t, TypeExpr::Function { .. })
}
