//! Runs a parsed file through the engine, one declaration at a time.

use std::collections::BTreeMap;
use std::rc::Rc;

use deducto_core::{
    accepts, check_return_scope, classify, decltype_of, deduce_auto, evaluate,
    resolve_function_decl, resolve_overload, resolve_type, ClassDef, Entity, Env, Error, Expr,
    FunctionEntity, Store, TemplateFunction, Type, TypeExpr,
};

use crate::parser::parse;
use crate::report::{Assertion, Diagnostic, Entry, EntryKind, Report};
use crate::syntax::{Decl, DeclKind, Init, SourceFile, StructAttr, StructDecl, VarType};

/// A fact the engine derived that a C++ compiler can confirm.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbeKind {
    /// `decltype(name)` is `ty`.
    DeclType { name: String, ty: Type },
    /// `decltype(expr)` is `ty`.
    ExprType { expr: Expr, ty: Type },
    /// `trait<class>::value` is `value`.
    Flag {
        trait_name: &'static str,
        class: Type,
        value: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    /// Index of the declaration after which the probe holds.
    pub after: usize,
    pub kind: ProbeKind,
}

#[derive(Debug, Clone)]
pub struct Checked {
    pub report: Report,
    pub probes: Vec<Probe>,
    /// Final type of every variable and non-overloaded function.
    pub types: BTreeMap<String, String>,
}

/// Parses and checks `src`. A parse failure becomes a single error entry.
pub fn check_source(src: &str, path: &str) -> Checked {
    match parse(src) {
        Ok(file) => check(&file, path),
        Err(e) => {
            let mut entry = Entry::new(EntryKind::Parse, "", e.span());
            let message = e.to_string();
            // the span is already carried by the diagnostic itself
            let message = message
                .split_once(": ")
                .map(|(_, m)| m.to_string())
                .unwrap_or(message);
            entry.diagnostics.push(Diagnostic::error(e.span(), message));
            Checked {
                report: Report::new(path, vec![entry]),
                probes: Vec::new(),
                types: BTreeMap::new(),
            }
        }
    }
}

pub fn check(file: &SourceFile, path: &str) -> Checked {
    let mut checker = Checker {
        env: Env::new(),
        store: Store::new(),
        probes: Vec::new(),
        index: 0,
    };
    let mut entries = Vec::new();
    for (index, decl) in file.decls.iter().enumerate() {
        checker.index = index;
        entries.push(checker.decl(decl));
    }
    let types = checker.final_types();
    Checked {
        report: Report::new(path, entries),
        probes: checker.probes,
        types,
    }
}

struct Checker {
    env: Env<'static>,
    store: Store,
    probes: Vec<Probe>,
    index: usize,
}

impl Checker {
    fn probe(&mut self, kind: ProbeKind) {
        self.probes.push(Probe {
            after: self.index,
            kind,
        });
    }

    fn decl(&mut self, decl: &Decl) -> Entry {
        let span = decl.span;
        let (mut entry, result) = match &decl.kind {
            DeclKind::Var { ty, name, init } => {
                let mut entry = Entry::new(EntryKind::Variable, name, span);
                let r = self.var(ty, name, init, &mut entry);
                (entry, r)
            }
            DeclKind::Struct(s) => {
                let mut entry = Entry::new(EntryKind::Struct, &s.name, span);
                let r = self.structure(s, &mut entry);
                (entry, r)
            }
            DeclKind::Function {
                template_params,
                name,
                form,
            } => {
                let kind = if template_params.is_empty() {
                    EntryKind::Function
                } else {
                    EntryKind::Template
                };
                let mut entry = Entry::new(kind, name, span);
                let r = if template_params.is_empty() {
                    self.function(name, form, &mut entry)
                } else {
                    self.template(name, template_params, form, &mut entry)
                };
                (entry, r)
            }
            DeclKind::StaticAssertType { name, expected } => {
                let mut entry = Entry::new(EntryKind::StaticAssertType, name, span);
                let r = self.static_assert_type(name, expected, &mut entry);
                (entry, r)
            }
            DeclKind::AssertValue { expr, expected } => {
                let mut entry = Entry::new(EntryKind::AssertValue, expr.to_string(), span);
                let r = self.assert_value(expr, *expected, &mut entry);
                (entry, r)
            }
            DeclKind::AssertSelects { call, overload } => {
                let mut entry = Entry::new(EntryKind::AssertSelects, call.to_string(), span);
                let r = self.assert_selects(call, *overload, &mut entry);
                (entry, r)
            }
        };
        if let Err(message) = result {
            entry.diagnostics.push(Diagnostic::error(span, message));
        }
        entry
    }

    fn var(
        &mut self,
        ty: &VarType,
        name: &str,
        init: &Init,
        entry: &mut Entry,
    ) -> Result<(), String> {
        let env = &self.env;
        let var_ty = match (ty, init) {
            (VarType::Auto(pattern), Init::Assign(e)) => {
                reject_evaluated_declval(e)?;
                deduce_auto(*pattern, e, env).map_err(msg)?
            }
            (VarType::Auto(_), _) => return Err("'auto' requires an initializer".into()),
            (VarType::Explicit(te), _) => resolve_type(te, env).map_err(msg)?,
        };
        validate_object_type(&var_ty, env)?;

        if let Init::Assign(e) = init {
            let typed = classify(e, env).map_err(msg)?;
            entry.category = Some(typed.category.to_string());
        }
        if let VarType::Explicit(_) = ty {
            check_initializer(&var_ty, init, env)?;
        }

        // Run the initializer for integer variables so later assertions
        // can observe values and side effects.
        let value_expr = match init {
            Init::Assign(e) => Some(e),
            Init::Direct(args) if args.len() == 1 => Some(&args[0]),
            _ => None,
        };
        let mut store = self.store.clone();
        let value = match value_expr {
            Some(e) if var_ty.is_integral() => evaluate(e, env, &mut store).ok(),
            _ => None,
        };

        self.env
            .declare_variable(name, var_ty.clone())
            .map_err(msg)?;
        if let Some(v) = value {
            self.store = store;
            self.store.set(name, v);
        }
        entry.ty = Some(var_ty.to_string());

        self.probe(ProbeKind::DeclType {
            name: name.into(),
            ty: var_ty,
        });
        if let (VarType::Auto(_), Init::Assign(e)) = (ty, init) {
            for expr in [e.clone(), Expr::paren(e.clone())] {
                if let Ok(t) = decltype_of(&expr, &self.env) {
                    self.probe(ProbeKind::ExprType { expr, ty: t });
                }
            }
        }
        Ok(())
    }

    fn structure(&mut self, s: &StructDecl, entry: &mut Entry) -> Result<(), String> {
        entry.ty = Some(s.name.clone());
        let body = match &s.body {
            None => {
                let mut def = ClassDef::incomplete(&s.name);
                def.template_params = s.template_params.clone();
                return self.env.declare_class(def).map_err(msg);
            }
            Some(body) => body,
        };
        let is_abstract = s.attrs.contains(&StructAttr::Abstract);
        let trivial = s.attrs.contains(&StructAttr::TrivialCopy);
        let nontrivial = s.attrs.contains(&StructAttr::NontrivialCopy);
        if trivial && nontrivial {
            return Err("conflicting attributes 'trivial_copy' and 'nontrivial_copy'".into());
        }
        if trivial && is_abstract {
            return Err("an abstract class is never trivially copy-assignable".into());
        }

        let mut def = ClassDef::new(&s.name);
        def.template_params = s.template_params.clone();
        def.fields = body.fields.clone();
        def.static_fields = body.static_fields.clone();
        for (params, ret) in &body.call_operators {
            def =
                def.with_call_operator(params.iter().map(|p| p.ty.clone()).collect(), ret.clone());
        }
        def.is_abstract = is_abstract;

        // the name is visible inside its own body
        if self.env.lookup_local(&s.name).is_none() {
            let mut forward = ClassDef::incomplete(&s.name);
            forward.template_params = s.template_params.clone();
            self.env.declare_class(forward).map_err(msg)?;
        }

        if s.template_params.is_empty() {
            for (n, te) in &body.fields {
                let t = resolve_type(te, &self.env).map_err(msg)?;
                if let Some((cname, args)) = t.as_class() {
                    let inst = self.env.instantiate(cname, args).map_err(msg)?;
                    if inst.is_abstract {
                        return Err(format!("field '{}' has abstract type '{}'", n, t));
                    }
                    if trivial && !inst.is_trivially_copy_assignable {
                        return Err(format!(
                            "field '{}' of type '{}' makes copy assignment non-trivial",
                            n, t
                        ));
                    }
                }
                if trivial && (t.is_reference() || t.is_const()) {
                    return Err(format!(
                        "field '{}' of type '{}' makes copy assignment non-trivial",
                        n, t
                    ));
                }
            }
        }
        // member-wise triviality is worked out on instantiation
        def.is_trivially_copy_assignable = !nontrivial;

        self.env.declare_class(def).map_err(msg)?;
        if s.template_params.is_empty() {
            let inst = self.env.instantiate(&s.name, &[]).map_err(msg)?;
            let class = inst.ty.clone();
            let flags = [
                ("is_abstract", inst.is_abstract),
                (
                    "is_trivially_copy_assignable",
                    inst.is_trivially_copy_assignable,
                ),
            ];
            for (trait_name, value) in flags {
                self.probe(ProbeKind::Flag {
                    trait_name,
                    class: class.clone(),
                    value,
                });
            }
        }
        Ok(())
    }

    fn function(
        &mut self,
        name: &str,
        form: &deducto_core::FnDeclForm,
        entry: &mut Entry,
    ) -> Result<(), String> {
        let t = resolve_function_decl(form, &self.env).map_err(msg)?;
        entry.ty = Some(t.to_string());
        // an identical redeclaration names the same function
        let existing = match self.env.lookup_local(name) {
            Some(Entity::Functions(set)) => set
                .iter()
                .any(|f| matches!(f, FunctionEntity::Plain(p) if *p == t)),
            _ => false,
        };
        if !existing {
            self.env
                .declare_function(name, FunctionEntity::Plain(t.clone()))
                .map_err(msg)?;
        }
        if let Some(Entity::Functions(set)) = self.env.lookup(name) {
            if set.len() == 1 && !name.starts_with("operator") {
                self.probe(ProbeKind::DeclType {
                    name: name.into(),
                    ty: t,
                });
            }
        }
        Ok(())
    }

    fn template(
        &mut self,
        name: &str,
        template_params: &[String],
        form: &deducto_core::FnDeclForm,
        entry: &mut Entry,
    ) -> Result<(), String> {
        check_return_scope(form, &self.env).map_err(msg)?;
        let tf =
            TemplateFunction::new(name, template_params.to_vec(), form.clone()).map_err(msg)?;
        let mut sig = format!("template<{}> {}(", template_params.join(", "), name);
        for (i, p) in form.params.iter().enumerate() {
            if i > 0 {
                sig.push_str(", ");
            }
            sig.push_str(&p.ty.to_string());
        }
        sig.push_str(") -> ");
        sig.push_str(&form.return_type.to_string());
        entry.ty = Some(sig);
        self.env
            .declare_function(name, FunctionEntity::Template(Rc::new(tf)))
            .map_err(msg)
    }

    fn static_assert_type(
        &mut self,
        name: &str,
        expected: &TypeExpr,
        entry: &mut Entry,
    ) -> Result<(), String> {
        let expected = resolve_type(expected, &self.env).map_err(msg)?;
        let actual = match self.env.lookup(name) {
            Some(Entity::Variable(t)) => t.clone(),
            Some(Entity::Functions(set)) => match set.as_slice() {
                [FunctionEntity::Plain(t)] => t.clone(),
                [FunctionEntity::Template(_)] => {
                    return Err(format!("'{}' names a function template", name))
                }
                _ => return Err(format!("'{}' names an overload set", name)),
            },
            Some(_) => return Err(msg(Error::NotAValue(name.into()))),
            None => return Err(msg(Error::UnknownIdentifier(name.into()))),
        };
        entry.ty = Some(actual.to_string());
        entry.assertions.push(Assertion {
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass: expected == actual,
        });
        Ok(())
    }

    fn assert_value(
        &mut self,
        expr: &Expr,
        expected: i64,
        entry: &mut Entry,
    ) -> Result<(), String> {
        let mut store = self.store.clone();
        let actual = evaluate(expr, &self.env, &mut store).map_err(msg)?;
        self.store = store;
        entry.assertions.push(Assertion {
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass: expected == actual,
        });
        Ok(())
    }

    fn assert_selects(
        &mut self,
        call: &Expr,
        overload: usize,
        entry: &mut Entry,
    ) -> Result<(), String> {
        let env = &self.env;
        reject_evaluated_declval(call)?;
        let (callee, args): (&str, Vec<&Expr>) = match call {
            Expr::Call { callee, args } => (callee, args.iter().collect()),
            Expr::Add(l, r) => ("operator+", vec![&**l, &**r]),
            _ => return Err("assert_selects expects a call".into()),
        };
        let arg_types = args
            .iter()
            .map(|a| classify(a, env).map(|t| t.as_arg_type()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(msg)?;
        let chosen = resolve_overload(callee, &arg_types, env).map_err(msg)?;
        let ret = chosen.return_type().clone();
        entry.ty = Some(ret.to_string());
        entry.assertions.push(Assertion {
            expected: format!("#{}", overload),
            actual: format!("#{}", chosen.index + 1),
            pass: chosen.index + 1 == overload,
        });
        if let Ok(t) = decltype_of(call, env) {
            self.probe(ProbeKind::ExprType {
                expr: call.clone(),
                ty: t,
            });
        }
        Ok(())
    }

    fn final_types(&self) -> BTreeMap<String, String> {
        // only the root scope exists after checking
        let mut out = BTreeMap::new();
        for probe in &self.probes {
            if let ProbeKind::DeclType { name, .. } = &probe.kind {
                match self.env.lookup(name) {
                    Some(Entity::Variable(t)) => {
                        out.insert(name.clone(), t.to_string());
                    }
                    Some(Entity::Functions(set)) => {
                        if let [FunctionEntity::Plain(t)] = set.as_slice() {
                            out.insert(name.clone(), t.to_string());
                        }
                    }
                    _ => {}
                }
            }
        }
        out
    }
}

fn msg(e: Error) -> String {
    e.to_string()
}

fn reject_evaluated_declval(e: &Expr) -> Result<(), String> {
    if e.has_evaluated_declval() {
        Err(msg(Error::DeclvalInEvaluatedContext))
    } else {
        Ok(())
    }
}

/// Variables need a complete, concrete object type (references are fine).
fn validate_object_type(t: &Type, env: &Env<'_>) -> Result<(), String> {
    if t.is_void() {
        return Err("variable of type 'void'".into());
    }
    if t.is_function() {
        return Err(format!("variable of function type '{}'", t));
    }
    if let Some((name, args)) = t.as_class() {
        let inst = env.instantiate(name, args).map_err(msg)?;
        if inst.is_abstract {
            return Err(format!("variable of abstract type '{}'", t));
        }
    }
    Ok(())
}

fn check_initializer(var_ty: &Type, init: &Init, env: &Env<'_>) -> Result<(), String> {
    let bind = |arg: &Type, target: &Type| {
        accepts(target, arg).map_err(|e| format!("invalid initializer: {}", e))
    };
    let arg_type = |e: &Expr| -> Result<Type, String> {
        reject_evaluated_declval(e)?;
        classify(e, env).map(|t| t.as_arg_type()).map_err(msg)
    };
    match init {
        Init::None => Ok(()),
        Init::Assign(e) => bind(&arg_type(e)?, var_ty),
        Init::New(te) => {
            let t = resolve_type(te, env).map_err(msg)?;
            if t.is_reference() || t.is_function() || t.is_void() {
                return Err(format!("cannot allocate an object of type '{}'", t));
            }
            validate_object_type(&t, env)?;
            bind(&Type::pointer(t), var_ty)
        }
        Init::Direct(args) => {
            let args = args.iter().map(arg_type).collect::<Result<Vec<_>, _>>()?;
            match var_ty.as_class() {
                // member-wise, like an aggregate
                Some((name, targs)) => {
                    let inst = env.instantiate(name, targs).map_err(msg)?;
                    if inst.fields.len() != args.len() {
                        return Err(format!(
                            "'{}' has {} field(s) but {} initializer(s) were given",
                            var_ty,
                            inst.fields.len(),
                            args.len()
                        ));
                    }
                    for ((_, field), arg) in inst.fields.iter().zip(&args) {
                        bind(arg, field)?;
                    }
                    Ok(())
                }
                None => match args.as_slice() {
                    [arg] => bind(arg, var_ty),
                    _ => Err(format!("'{}' takes exactly one initializer", var_ty)),
                },
            }
        }
    }
}
