//! Seeded generator of random declaration-language programs.
//!
//! Candidates are built from a rough model of what is in scope and then
//! filtered through the checker: a declaration is kept only if the engine
//! accepts the program with it appended. Every program returned is
//! therefore clean as far as the engine is concerned; whether the engine is
//! *right* is for the compiler cross-check to decide.

#![allow(dead_code)]

use deducto::check_source;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

const SCALARS: &[&str] = &[
    "int",
    "long",
    "short",
    "unsigned",
    "unsigned long",
    "long long",
    "char",
    "bool",
    "double",
    "float",
];

const PREDICATES: &[&str] = &[
    "is_trivially_copy_assignable",
    "is_abstract",
    "is_const",
    "is_pointer",
    "is_class",
    "is_integral",
    "is_floating_point",
    "is_reference",
];

const TRANSFORMS: &[&str] = &[
    "remove_const",
    "remove_cv",
    "remove_reference",
    "add_const",
    "add_lvalue_reference",
    "add_rvalue_reference",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Arith,
    PtrArith,
    Class(usize),
    /// Pointer to a class; `true` if the pointee is const.
    Ptr(usize, bool),
}

/// A generated expression.
#[derive(Debug, Clone)]
struct E {
    text: String,
    shape: Shape,
    /// A modifiable lvalue, so `++` applies.
    modifiable: bool,
    /// Top level is `+`, so it needs parentheses as an operand.
    add: bool,
}

impl E {
    fn new(text: String, shape: Shape) -> E {
        E {
            text,
            shape,
            modifiable: false,
            add: false,
        }
    }

    /// Text usable as the base of `.`, `->`, `++` or the right of `+`.
    fn operand(&self) -> String {
        if self.add {
            format!("({})", self.text)
        } else {
            self.text.clone()
        }
    }
}

#[derive(Debug, Clone)]
struct Class {
    name: String,
    fields: Vec<(String, Shape, bool)>,
    statics: Vec<String>,
    is_abstract: bool,
    /// Result of `operator+` on two of these, once declared.
    plus: Option<Shape>,
    is_template_instance: bool,
}

#[derive(Debug, Clone)]
struct Func {
    name: String,
    params: Vec<(String, Shape)>,
    ret: Shape,
    ret_text: String,
}

pub struct Generator {
    rng: StdRng,
    source: String,
    classes: Vec<Class>,
    vars: Vec<E>,
    funcs: Vec<Func>,
    next_id: usize,
    pub accepted: usize,
    pub rejected: usize,
}

impl Generator {
    pub fn new(seed: u64) -> Generator {
        Generator {
            rng: StdRng::seed_from_u64(seed),
            source: String::new(),
            classes: Vec::new(),
            vars: Vec::new(),
            funcs: Vec::new(),
            next_id: 0,
            accepted: 0,
            rejected: 0,
        }
    }

    /// A program of about `decls` accepted declarations.
    pub fn program(mut self, decls: usize) -> String {
        self.program_ref(decls)
    }

    pub fn program_ref(&mut self, decls: usize) -> String {
        let mut attempts = 0;
        while self.accepted < decls && attempts < decls * 6 {
            attempts += 1;
            self.step();
        }
        self.source.clone()
    }

    fn fresh(&mut self, prefix: &str) -> String {
        self.next_id += 1;
        format!("{}{}", prefix, self.next_id)
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Appends `text` if the engine accepts it; returns whether it did.
    fn offer(&mut self, text: &str) -> bool {
        let candidate = format!("{}{}\n", self.source, text);
        let checked = check_source(&candidate, "generated.tdl");
        if checked.report.passed {
            self.source = candidate;
            self.accepted += 1;
            true
        } else {
            self.rejected += 1;
            false
        }
    }

    fn step(&mut self) {
        let early = self.classes.len() < 2;
        let roll = self.rng.gen_range(0..100);
        match roll {
            _ if early && roll < 40 => self.struct_decl(),
            0..=9 => self.struct_decl(),
            10..=13 => self.template_struct(),
            14..=25 => self.explicit_var(),
            26..=40 => self.auto_var(),
            41..=55 => self.decltype_var(),
            56..=63 => self.trait_var(),
            64..=75 => self.function(),
            76..=79 => self.operator_plus(),
            80..=83 => self.redeclaration(),
            84..=93 => self.selection_pair(),
            _ => self.result_of_var(),
        }
    }

    // ---- types ------------------------------------------------------

    fn scalar(&mut self) -> &'static str {
        SCALARS.choose(&mut self.rng).unwrap()
    }

    fn class_index(&mut self, concrete: bool) -> Option<usize> {
        let candidates: Vec<usize> = (0..self.classes.len())
            .filter(|&i| !concrete || !self.classes[i].is_abstract)
            .collect();
        candidates.choose(&mut self.rng).copied()
    }

    fn spell(&self, shape: Shape, scalar: &str) -> String {
        match shape {
            Shape::Arith => scalar.to_string(),
            Shape::PtrArith => format!("{}*", scalar),
            Shape::Class(i) => self.classes[i].name.clone(),
            Shape::Ptr(i, true) => format!("const {}*", self.classes[i].name),
            Shape::Ptr(i, false) => format!("{}*", self.classes[i].name),
        }
    }

    /// Any type, possibly cv-qualified or a reference.
    fn any_type(&mut self) -> String {
        let base = match self.rng.gen_range(0..4) {
            0 | 1 => self.scalar().to_string(),
            2 => match self.class_index(false) {
                Some(i) => self.classes[i].name.clone(),
                None => "int".into(),
            },
            _ => format!("{}*", self.scalar()),
        };
        let base = if self.chance(0.3) {
            format!("const {}", base)
        } else {
            base
        };
        match self.rng.gen_range(0..6) {
            0 => format!("{}&", base),
            1 => format!("{}&&", base),
            _ => base,
        }
    }

    fn const_pointer_to(element: &str) -> String {
        if element.ends_with('*') {
            format!("{} const*", element)
        } else {
            format!("const {}*", element)
        }
    }

    // ---- expressions --------------------------------------------------

    fn arith(&mut self, depth: u32, uneval: bool) -> Option<E> {
        for _ in 0..8 {
            let pick = self.rng.gen_range(0..14);
            let e = match pick {
                0 => Some(E::new(self.rng.gen_range(0..100).to_string(), Shape::Arith)),
                1 => Some(E::new(
                    format!("{}.5", self.rng.gen_range(0..10)),
                    Shape::Arith,
                )),
                2 | 3 => self.var_of(&|s| s == Shape::Arith),
                4 if depth > 0 => {
                    let base = self.arith(depth - 1, uneval).filter(|e| e.modifiable);
                    base.map(|b| E::new(format!("{}++", b.operand()), Shape::Arith))
                }
                5 if depth > 0 => {
                    let l = self.arith(depth - 1, uneval)?;
                    let r = self.arith(depth - 1, uneval)?;
                    let mut e = E::new(format!("{} + {}", l.text, r.operand()), Shape::Arith);
                    e.add = true;
                    Some(e)
                }
                6 if depth > 0 => self.arith(depth - 1, uneval).map(|inner| E {
                    text: format!("({})", inner.text),
                    add: false,
                    ..inner
                }),
                7 if depth > 0 => self.member(depth - 1, uneval, &|s| s == Shape::Arith),
                8 if depth > 0 => self.arrow(depth - 1, uneval, &|s| s == Shape::Arith),
                9 => {
                    let with_statics: Vec<usize> = (0..self.classes.len())
                        .filter(|&i| !self.classes[i].statics.is_empty())
                        .collect();
                    with_statics.choose(&mut self.rng).copied().map(|i| {
                        let c = &self.classes[i];
                        let s = c.statics.choose(&mut self.rng).unwrap();
                        let mut e = E::new(format!("{}::{}", c.name, s), Shape::Arith);
                        e.modifiable = true;
                        e
                    })
                }
                10 if depth > 0 => self.call(depth - 1, uneval, &|s| s == Shape::Arith),
                11 if uneval => {
                    let t = self.scalar();
                    let t = match self.rng.gen_range(0..4) {
                        0 => format!("{}&", t),
                        1 => format!("const {}&", t),
                        _ => t.to_string(),
                    };
                    Some(E::new(format!("declval<{}>()", t), Shape::Arith))
                }
                12 => {
                    let p = *PREDICATES.choose(&mut self.rng).unwrap();
                    let t = self.any_type();
                    Some(E::new(format!("{}<{}>::value", p, t), Shape::Arith))
                }
                13 if depth > 0 => self.plus(depth - 1, uneval, &|s| s == Shape::Arith),
                _ => None,
            };
            if e.is_some() {
                return e;
            }
        }
        None
    }

    fn class_expr(&mut self, depth: u32, uneval: bool, want: &dyn Fn(usize) -> bool) -> Option<E> {
        let is_class = |s: Shape| matches!(s, Shape::Class(i) if want(i));
        for _ in 0..6 {
            let e = match self.rng.gen_range(0..7) {
                0 | 1 => self.var_of(&is_class),
                2 if uneval => {
                    let candidates: Vec<usize> =
                        (0..self.classes.len()).filter(|&i| want(i)).collect();
                    candidates.choose(&mut self.rng).copied().map(|i| {
                        let name = self.classes[i].name.clone();
                        let (t, modifiable) = match self.rng.gen_range(0..3) {
                            0 => (name, false),
                            1 => (format!("{}&", name), true),
                            _ => (format!("const {}&", name), false),
                        };
                        let mut e = E::new(format!("declval<{}>()", t), Shape::Class(i));
                        e.modifiable = modifiable;
                        e
                    })
                }
                3 if depth > 0 => self.member(depth - 1, uneval, &is_class),
                4 if depth > 0 => self.arrow(depth - 1, uneval, &is_class),
                5 if depth > 0 => self.call(depth - 1, uneval, &is_class),
                6 if depth > 0 => self.plus(depth - 1, uneval, &is_class),
                _ => None,
            };
            if e.is_some() {
                return e;
            }
        }
        None
    }

    fn pointer_expr(
        &mut self,
        depth: u32,
        uneval: bool,
        want: &dyn Fn(Shape) -> bool,
    ) -> Option<E> {
        for _ in 0..4 {
            let e = match self.rng.gen_range(0..4) {
                0 | 1 => self.var_of(want),
                2 if depth > 0 => self.member(depth - 1, uneval, want),
                3 if depth > 0 => self.call(depth - 1, uneval, want),
                _ => None,
            };
            if e.is_some() {
                return e;
            }
        }
        None
    }

    fn var_of(&mut self, want: &dyn Fn(Shape) -> bool) -> Option<E> {
        let candidates: Vec<&E> = self.vars.iter().filter(|v| want(v.shape)).collect();
        candidates.choose(&mut self.rng).map(|e| (*e).clone())
    }

    fn member(&mut self, depth: u32, uneval: bool, want: &dyn Fn(Shape) -> bool) -> Option<E> {
        let base = self.class_expr(depth, uneval, &|_| true)?;
        let Shape::Class(i) = base.shape else {
            unreachable!()
        };
        let fields: Vec<(String, Shape, bool)> = self.classes[i]
            .fields
            .iter()
            .filter(|f| want(f.1))
            .cloned()
            .collect();
        let (name, shape, field_modifiable) = fields.choose(&mut self.rng)?.clone();
        let mut e = E::new(format!("{}.{}", base.operand(), name), shape);
        e.modifiable = base.modifiable && field_modifiable;
        Some(e)
    }

    fn arrow(&mut self, depth: u32, uneval: bool, want: &dyn Fn(Shape) -> bool) -> Option<E> {
        let base = self.pointer_expr(depth, uneval, &|s| matches!(s, Shape::Ptr(..)))?;
        let Shape::Ptr(i, is_const) = base.shape else {
            unreachable!()
        };
        let fields: Vec<(String, Shape, bool)> = self.classes[i]
            .fields
            .iter()
            .filter(|f| want(f.1))
            .cloned()
            .collect();
        let (name, shape, field_modifiable) = fields.choose(&mut self.rng)?.clone();
        let mut e = E::new(format!("{}->{}", base.operand(), name), shape);
        e.modifiable = !is_const && field_modifiable;
        Some(e)
    }

    fn call(&mut self, depth: u32, uneval: bool, want: &dyn Fn(Shape) -> bool) -> Option<E> {
        let candidates: Vec<Func> = self.funcs.iter().filter(|f| want(f.ret)).cloned().collect();
        let f = candidates.choose(&mut self.rng)?.clone();
        let mut args = Vec::new();
        for (_, shape) in &f.params {
            args.push(self.argument(*shape, depth, uneval)?.text);
        }
        let mut e = E::new(format!("{}({})", f.name, args.join(", ")), f.ret);
        e.modifiable = f.ret_text.ends_with('&')
            && !f.ret_text.ends_with("&&")
            && !f.ret_text.starts_with("const");
        Some(e)
    }

    fn argument(&mut self, shape: Shape, depth: u32, uneval: bool) -> Option<E> {
        match shape {
            Shape::Arith => self.arith(depth, uneval),
            Shape::Class(i) => self.class_expr(depth, uneval, &|j| j == i),
            Shape::Ptr(i, true) => {
                self.pointer_expr(depth, uneval, &|s| matches!(s, Shape::Ptr(j, _) if j == i))
            }
            other => self.pointer_expr(depth, uneval, &|s| s == other),
        }
    }

    fn plus(&mut self, depth: u32, uneval: bool, want: &dyn Fn(Shape) -> bool) -> Option<E> {
        let candidates: Vec<usize> = (0..self.classes.len())
            .filter(|&i| self.classes[i].plus.is_some_and(want))
            .collect();
        let i = *candidates.choose(&mut self.rng)?;
        let l = self.class_expr(depth, uneval, &|j| j == i)?;
        let r = self.class_expr(depth, uneval, &|j| j == i)?;
        let mut e = E::new(
            format!("{} + {}", l.text, r.operand()),
            self.classes[i].plus.unwrap(),
        );
        e.add = true;
        Some(e)
    }

    fn any_expr(&mut self, depth: u32, uneval: bool) -> Option<E> {
        match self.rng.gen_range(0..5) {
            0 | 1 => self.arith(depth, uneval),
            2 => self.class_expr(depth, uneval, &|_| true),
            3 => self.pointer_expr(depth, uneval, &|s| {
                matches!(s, Shape::Ptr(..) | Shape::PtrArith)
            }),
            _ => self.member(depth, uneval, &|_| true),
        }
    }

    // ---- declarations -------------------------------------------------

    fn struct_decl(&mut self) {
        let name = self.fresh("S");
        let mut fields = Vec::new();
        let mut lines = Vec::new();
        let mut statics = Vec::new();
        let mut has_const_or_ref = false;
        let count = self.rng.gen_range(1..4);
        for k in 0..count {
            let field = format!("m{}", k);
            let (text, shape, modifiable) = match self.rng.gen_range(0..8) {
                0 => {
                    has_const_or_ref = true;
                    let t = self.scalar();
                    (format!("const {} {};", t, field), Shape::Arith, false)
                }
                1 if self.chance(0.4) => {
                    has_const_or_ref = true;
                    (format!("int& {};", field), Shape::Arith, true)
                }
                2 => match self.class_index(true) {
                    Some(i) => (
                        format!("{} {};", self.classes[i].name, field),
                        Shape::Class(i),
                        true,
                    ),
                    None => (format!("long {};", field), Shape::Arith, true),
                },
                3 => match self.class_index(false) {
                    Some(i) => {
                        let is_const = self.chance(0.5);
                        let spelled = self.spell(Shape::Ptr(i, is_const), "");
                        (
                            format!("{} {};", spelled, field),
                            Shape::Ptr(i, is_const),
                            true,
                        )
                    }
                    None => (format!("int* {};", field), Shape::PtrArith, true),
                },
                4 => (
                    format!("{}* {};", self.scalar(), field),
                    Shape::PtrArith,
                    true,
                ),
                _ => {
                    let t = self.scalar();
                    (format!("{} {};", t, field), Shape::Arith, t != "bool")
                }
            };
            lines.push(text);
            fields.push((field, shape, modifiable));
        }
        if self.chance(0.25) {
            let s = format!("count{}", self.next_id);
            lines.push(format!("static int {};", s));
            statics.push(s);
        }
        let is_abstract = self.chance(0.15);
        let attr = if is_abstract {
            " [[abstract]]"
        } else if self.chance(0.15) {
            " [[nontrivial_copy]]"
        } else if !has_const_or_ref && self.chance(0.1) {
            " [[trivial_copy]]"
        } else {
            ""
        };
        let text = format!("struct {}{} {{ {} }};", name, attr, lines.join(" "));
        if self.offer(&text) {
            self.classes.push(Class {
                name,
                fields,
                statics,
                is_abstract,
                plus: None,
                is_template_instance: false,
            });
        }
    }

    fn template_struct(&mut self) {
        let name = self.fresh("W");
        let text = format!("template<typename T> struct {} {{ T v; T* p; }};", name);
        if !self.offer(&text) {
            return;
        }
        for _ in 0..2 {
            let arg = match self.rng.gen_range(0..3) {
                0 => format!("const {}", self.scalar()),
                _ => self.scalar().to_string(),
            };
            let modifiable = !arg.starts_with("const") && arg != "bool";
            self.classes.push(Class {
                name: format!("{}<{}>", name, arg),
                fields: vec![
                    ("v".into(), Shape::Arith, modifiable),
                    ("p".into(), Shape::PtrArith, true),
                ],
                statics: Vec::new(),
                is_abstract: false,
                plus: None,
                is_template_instance: true,
            });
        }
    }

    fn explicit_var(&mut self) {
        let name = self.fresh("v");
        let (ty, shape, modifiable) = match self.rng.gen_range(0..6) {
            0 | 1 => {
                let t = self.scalar();
                if self.chance(0.3) {
                    (format!("const {}", t), Shape::Arith, false)
                } else {
                    (t.to_string(), Shape::Arith, t != "bool")
                }
            }
            2 => match self.class_index(true) {
                Some(i) => (self.classes[i].name.clone(), Shape::Class(i), true),
                None => return,
            },
            3 => match self.class_index(false) {
                Some(i) => {
                    let is_const = self.chance(0.5);
                    (
                        self.spell(Shape::Ptr(i, is_const), ""),
                        Shape::Ptr(i, is_const),
                        true,
                    )
                }
                None => return,
            },
            4 => match self.class_index(false) {
                Some(i) => (
                    format!("const {}&", self.classes[i].name),
                    Shape::Class(i),
                    false,
                ),
                None => return,
            },
            _ => (format!("{}*", self.scalar()), Shape::PtrArith, true),
        };
        let init = match shape {
            Shape::Ptr(i, _) if !self.classes[i].is_abstract && self.chance(0.3) => {
                format!(" = new {}()", self.classes[i].name)
            }
            Shape::Arith if !ty.starts_with("const") && self.chance(0.4) => {
                match self.arith(2, false) {
                    Some(e) => format!(" = {}", e.text),
                    None => String::new(),
                }
            }
            _ => String::new(),
        };
        if self.offer(&format!("{} {}{};", ty, name, init)) {
            let mut e = E::new(name, shape);
            e.modifiable = modifiable;
            self.vars.push(e);
        }
    }

    fn auto_var(&mut self) {
        let name = self.fresh("a");
        let Some(init) = self.any_expr(3, false) else {
            return;
        };
        let (pattern, modifiable) = match self.rng.gen_range(0..6) {
            0 => ("const auto", false),
            1 => ("auto&", init.modifiable),
            2 => ("const auto&", false),
            _ => ("auto", true),
        };
        if self.offer(&format!("{} {} = {};", pattern, name, init.text)) {
            let mut e = E::new(name, init.shape);
            e.modifiable = modifiable;
            self.vars.push(e);
        }
    }

    fn decltype_var(&mut self) {
        let name = self.fresh("d");
        let Some(e) = self.any_expr(3, true) else {
            return;
        };
        let text = if self.chance(0.3) && !e.text.starts_with('(') {
            format!("decltype(({})) {};", e.text, name)
        } else {
            format!("decltype({}) {};", e.text, name)
        };
        if self.offer(&text) {
            self.vars.push(E::new(name, e.shape));
        }
    }

    fn bool_condition(&mut self) -> String {
        let p = *PREDICATES.choose(&mut self.rng).unwrap();
        let t = self.any_type();
        let cond = format!("{}<{}>::value", p, t);
        if self.chance(0.5) {
            format!("!{}", cond)
        } else {
            cond
        }
    }

    fn trait_var(&mut self) {
        let name = self.fresh("t");
        let ty = if self.chance(0.35) {
            let cond = self.bool_condition();
            let payload = self.any_type();
            format!("typename enable_if<{}, {}>::type", cond, payload)
        } else {
            let t = *TRANSFORMS.choose(&mut self.rng).unwrap();
            let inner = self.any_type();
            if self.chance(0.3) {
                let outer = *TRANSFORMS.choose(&mut self.rng).unwrap();
                format!("typename {}<typename {}<{}>::type>::type", outer, t, inner)
            } else {
                format!("typename {}<{}>::type", t, inner)
            }
        };
        self.offer(&format!("{} {};", ty, name));
    }

    fn param_type(&mut self) -> (String, Shape) {
        match self.rng.gen_range(0..5) {
            0 => match self.class_index(true) {
                Some(i) => (self.classes[i].name.clone(), Shape::Class(i)),
                None => ("int".into(), Shape::Arith),
            },
            1 => match self.class_index(false) {
                Some(i) => (format!("const {}&", self.classes[i].name), Shape::Class(i)),
                None => ("double".into(), Shape::Arith),
            },
            2 => match self.class_index(false) {
                Some(i) => {
                    let is_const = self.chance(0.5);
                    (
                        self.spell(Shape::Ptr(i, is_const), ""),
                        Shape::Ptr(i, is_const),
                    )
                }
                None => ("long".into(), Shape::Arith),
            },
            _ => (self.scalar().to_string(), Shape::Arith),
        }
    }

    fn return_type(&mut self) -> Option<(String, Shape)> {
        Some(match self.rng.gen_range(0..6) {
            0 => {
                let i = self.class_index(true)?;
                (self.classes[i].name.clone(), Shape::Class(i))
            }
            1 => {
                let i = self.class_index(false)?;
                let c = if self.chance(0.5) { "const " } else { "" };
                (format!("{}{}&", c, self.classes[i].name), Shape::Class(i))
            }
            2 => {
                let i = self.class_index(false)?;
                let is_const = self.chance(0.5);
                (
                    self.spell(Shape::Ptr(i, is_const), ""),
                    Shape::Ptr(i, is_const),
                )
            }
            3 => {
                let t = self.scalar();
                let r = ["&", "&&", "", "const "].choose(&mut self.rng).unwrap();
                if *r == "const " {
                    (format!("const {}", t), Shape::Arith)
                } else {
                    (format!("{}{}", t, r), Shape::Arith)
                }
            }
            _ => (self.scalar().to_string(), Shape::Arith),
        })
    }

    fn function(&mut self) {
        let name = self.fresh("f");
        let params: Vec<(String, Shape)> = (0..self.rng.gen_range(0..3))
            .map(|_| self.param_type())
            .collect();
        let names = ["a", "b", "c"];
        let list = params
            .iter()
            .zip(names)
            .map(|((t, _), n)| format!("{} {}", t, n))
            .collect::<Vec<_>>()
            .join(", ");
        let body = if self.chance(0.3) { " { ... }" } else { ";" };
        let (text, ret, ret_text) = match self.rng.gen_range(0..3) {
            0 => {
                // the parameters are in scope in a trailing decltype
                let saved = self.vars.len();
                for ((_, shape), n) in params.iter().zip(names) {
                    let mut e = E::new(n.to_string(), *shape);
                    e.modifiable = true;
                    self.vars.push(e);
                }
                let e = self.any_expr(2, true);
                self.vars.truncate(saved);
                let Some(e) = e else { return };
                (
                    format!("auto {}({}) -> decltype({}){}", name, list, e.text, body),
                    e.shape,
                    String::new(),
                )
            }
            1 => {
                let Some((t, shape)) = self.return_type() else {
                    return;
                };
                (
                    format!("auto {}({}) -> {}{}", name, list, t, body),
                    shape,
                    t,
                )
            }
            _ => {
                let Some((t, shape)) = self.return_type() else {
                    return;
                };
                (format!("{} {}({}){}", t, name, list, body), shape, t)
            }
        };
        if self.offer(&text) {
            self.funcs.push(Func {
                name,
                params,
                ret,
                ret_text,
            });
        }
    }

    fn operator_plus(&mut self) {
        let candidates: Vec<usize> = (0..self.classes.len())
            .filter(|&i| self.classes[i].plus.is_none() && !self.classes[i].is_template_instance)
            .collect();
        let Some(&i) = candidates.choose(&mut self.rng) else {
            return;
        };
        let name = self.classes[i].name.clone();
        let (ret, shape) = if self.classes[i].is_abstract || self.chance(0.5) {
            (self.scalar().to_string(), Shape::Arith)
        } else {
            (name.clone(), Shape::Class(i))
        };
        let text = if self.chance(0.5) {
            format!("{} operator+(const {}& x, const {}& y);", ret, name, name)
        } else {
            format!(
                "auto operator+(const {}& x, const {}& y) -> {};",
                name, name, ret
            )
        };
        if self.offer(&text) {
            self.classes[i].plus = Some(shape);
        }
    }

    /// Declares an existing function again in the other form.
    fn redeclaration(&mut self) {
        let candidates: Vec<Func> = self
            .funcs
            .iter()
            .filter(|f| !f.ret_text.is_empty())
            .cloned()
            .collect();
        let Some(f) = candidates.choose(&mut self.rng) else {
            return;
        };
        let list = f
            .params
            .iter()
            .zip(["x", "y", "z"])
            .map(|((t, _), n)| format!("{} {}", t, n))
            .collect::<Vec<_>>()
            .join(", ");
        let text = if self.chance(0.5) {
            format!("auto {}({}) -> {};", f.name, list, f.ret_text)
        } else {
            format!("{} {}({});", f.ret_text, f.name, list)
        };
        self.offer(&text);
    }

    /// Two templates told apart by `enable_if` on a predicate and its
    /// negation, then a probe of which one a call selects.
    fn selection_pair(&mut self) {
        let name = self.fresh("pick");
        let pred = *PREDICATES.choose(&mut self.rng).unwrap();
        let (yes, no) = if self.chance(0.5) {
            ("int", "long")
        } else {
            ("char", "double")
        };
        let text = format!(
            "template<typename T> typename enable_if<{p}<T>::value, {yes}>::type {n}(const T* s, T* d, size_t k);\n\
             template<typename T> typename enable_if<!{p}<T>::value, {no}>::type {n}(const T* s, T* d, size_t k);",
            p = pred,
            n = name,
            yes = yes,
            no = no
        );
        if !self.offer(&text) {
            return;
        }
        for _ in 0..self.rng.gen_range(1..4) {
            let element = match self.rng.gen_range(0..4) {
                0 => match self.class_index(false) {
                    Some(i) => self.classes[i].name.clone(),
                    None => "int".into(),
                },
                1 => format!("{}*", self.scalar()),
                2 => format!("const {}", self.scalar()),
                _ => self.scalar().to_string(),
            };
            let source = Self::const_pointer_to(&element);
            let text = format!(
                "decltype({}(declval<{}>(), declval<{}*>(), 4)) {};",
                name,
                source,
                element,
                self.fresh("r")
            );
            self.offer(&text);
        }
    }

    fn result_of_var(&mut self) {
        let name = self.fresh("q");
        let Some(f) = self.funcs.choose(&mut self.rng).cloned() else {
            return;
        };
        let args = f
            .params
            .iter()
            .map(|(t, _)| t.clone())
            .collect::<Vec<_>>()
            .join(", ");
        self.offer(&format!(
            "typename result_of<{}({})>::type {};",
            f.name, args, name
        ));
    }
}

/// The program for `seed`, about `decls` declarations long.
pub fn program(seed: u64, decls: usize) -> String {
    Generator::new(seed).program(decls)
}

/// A C++11 compiler for the cross-check: `$DEDUCTO_CC` if set, else the
/// first of `g++`, `clang++`, `c++` that runs.
pub fn compiler() -> Option<String> {
    if let Ok(cc) = std::env::var("DEDUCTO_CC") {
        return Some(cc);
    }
    ["g++", "clang++", "c++"]
        .into_iter()
        .find(|cc| {
            std::process::Command::new(cc)
                .arg("--version")
                .output()
                .is_ok_and(|o| o.status.success())
        })
        .map(String::from)
}
