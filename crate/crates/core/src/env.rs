//! Scoped name environment and the class registry.

use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::ast::TypeExpr;
use crate::error::Error;
use crate::resolve::{resolve_type, TemplateFunction};
use crate::types::Type;

/// `operator()` of a functor class.
#[derive(Debug, Clone, PartialEq)]
pub struct CallOperator {
    pub params: Vec<TypeExpr>,
    pub ret: TypeExpr,
}

/// A struct or struct template as declared.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassDef {
    pub name: String,
    pub template_params: Vec<String>,
    pub fields: Vec<(String, TypeExpr)>,
    pub static_fields: Vec<(String, TypeExpr)>,
    pub call_operators: Vec<CallOperator>,
    pub is_abstract: bool,
    /// Whether the copy assignment is declared trivially. Instantiation
    /// further requires every member to be trivially assignable.
    pub is_trivially_copy_assignable: bool,
    /// False for a forward declaration (`struct X;`).
    pub is_complete: bool,
}

impl ClassDef {
    pub fn new(name: impl Into<String>) -> ClassDef {
        ClassDef {
            name: name.into(),
            template_params: Vec::new(),
            fields: Vec::new(),
            static_fields: Vec::new(),
            call_operators: Vec::new(),
            is_abstract: false,
            is_trivially_copy_assignable: true,
            is_complete: true,
        }
    }

    pub fn incomplete(name: impl Into<String>) -> ClassDef {
        ClassDef {
            is_complete: false,
            ..ClassDef::new(name)
        }
    }

    pub fn with_template_params(mut self, params: &[&str]) -> ClassDef {
        self.template_params = params.iter().map(|p| String::from(*p)).collect();
        self
    }

    pub fn with_field(mut self, name: impl Into<String>, ty: TypeExpr) -> ClassDef {
        self.fields.push((name.into(), ty));
        self
    }

    pub fn with_static_field(mut self, name: impl Into<String>, ty: TypeExpr) -> ClassDef {
        self.static_fields.push((name.into(), ty));
        self
    }

    pub fn with_call_operator(mut self, params: Vec<TypeExpr>, ret: TypeExpr) -> ClassDef {
        self.call_operators.push(CallOperator { params, ret });
        self
    }

    pub fn with_flags(mut self, is_abstract: bool, is_trivially_copy_assignable: bool) -> ClassDef {
        self.is_abstract = is_abstract;
        self.is_trivially_copy_assignable = is_trivially_copy_assignable;
        self
    }

    fn check_unique_fields(&self) -> Result<(), Error> {
        let mut seen: Vec<&str> = Vec::new();
        for (name, _) in self.fields.iter().chain(self.static_fields.iter()) {
            if seen.contains(&name.as_str()) {
                return Err(Error::DuplicateField {
                    class: self.name.clone(),
                    field: name.clone(),
                });
            }
            seen.push(name);
        }
        Ok(())
    }
}

/// A class with its template arguments substituted into every member.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassInstance {
    pub ty: Type,
    pub fields: Vec<(String, Type)>,
    pub static_fields: Vec<(String, Type)>,
    /// Function types of the call operators.
    pub call_operators: Vec<Type>,
    pub is_abstract: bool,
    pub is_trivially_copy_assignable: bool,
}

impl ClassInstance {
    pub fn field(&self, name: &str) -> Option<&Type> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn static_field(&self, name: &str) -> Option<&Type> {
        self.static_fields
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }
}

#[derive(Debug, Clone)]
pub enum FunctionEntity {
    /// A non-template function; holds its `Type::Function`.
    Plain(Type),
    Template(Rc<TemplateFunction>),
}

#[derive(Debug, Clone)]
pub enum Entity {
    Variable(Type),
    /// An overload set.
    Functions(Vec<FunctionEntity>),
    Class(Rc<ClassDef>),
    /// A template parameter bound during substitution.
    TypeAlias(Type),
}

type InstanceKey = (String, Vec<Type>);

/// One lexical scope plus a link to the enclosing one.
///
/// Class instances are memoized in the outermost scope. The memo uses a
/// `RefCell`, so an `Env` tree belongs to a single thread.
#[derive(Debug, Default)]
pub struct Env<'p> {
    parent: Option<&'p Env<'p>>,
    entries: BTreeMap<String, Entity>,
    instances: RefCell<BTreeMap<InstanceKey, Rc<ClassInstance>>>,
}

impl<'p> Env<'p> {
    pub fn new() -> Env<'static> {
        Env {
            parent: None,
            entries: BTreeMap::new(),
            instances: RefCell::new(BTreeMap::new()),
        }
    }

    /// A new innermost scope on top of `self`.
    pub fn child(&self) -> Env<'_> {
        Env {
            parent: Some(self),
            entries: BTreeMap::new(),
            instances: RefCell::new(BTreeMap::new()),
        }
    }

    fn root(&self) -> &Env<'_> {
        let mut env: &Env<'_> = self;
        while let Some(parent) = env.parent {
            env = parent;
        }
        env
    }

    pub fn lookup(&self, name: &str) -> Option<&Entity> {
        match self.entries.get(name) {
            Some(entity) => Some(entity),
            None => self.parent.and_then(|p| p.lookup(name)),
        }
    }

    /// Entity declared in this scope only.
    pub fn lookup_local(&self, name: &str) -> Option<&Entity> {
        self.entries.get(name)
    }

    fn declare_unique(&mut self, name: String, entity: Entity) -> Result<(), Error> {
        if self.entries.contains_key(&name) {
            return Err(Error::Redeclaration(name));
        }
        self.entries.insert(name, entity);
        Ok(())
    }

    pub fn declare_variable(&mut self, name: impl Into<String>, ty: Type) -> Result<(), Error> {
        self.declare_unique(name.into(), Entity::Variable(ty))
    }

    pub fn declare_alias(&mut self, name: impl Into<String>, ty: Type) -> Result<(), Error> {
        self.declare_unique(name.into(), Entity::TypeAlias(ty))
    }

    pub fn declare_class(&mut self, def: ClassDef) -> Result<(), Error> {
        def.check_unique_fields()?;
        let name = def.name.clone();
        // a forward declaration may be completed later
        if let Some(Entity::Class(existing)) = self.entries.get(&name) {
            if !existing.is_complete && existing.template_params == def.template_params {
                self.entries.insert(name, Entity::Class(Rc::new(def)));
                return Ok(());
            }
        }
        self.declare_unique(name, Entity::Class(Rc::new(def)))
    }

    /// Adds to the overload set of `name` in this scope.
    pub fn declare_function(
        &mut self,
        name: impl Into<String>,
        function: FunctionEntity,
    ) -> Result<(), Error> {
        let name = name.into();
        match self.entries.get_mut(&name) {
            Some(Entity::Functions(set)) => {
                set.push(function);
                Ok(())
            }
            Some(_) => Err(Error::Redeclaration(name)),
            None => {
                self.entries
                    .insert(name, Entity::Functions(alloc::vec![function]));
                Ok(())
            }
        }
    }

    /// The class `name<args...>` with members resolved. Memoized.
    pub fn instantiate(&self, name: &str, args: &[Type]) -> Result<Rc<ClassInstance>, Error> {
        let def = match self.lookup(name) {
            Some(Entity::Class(def)) => Rc::clone(def),
            Some(_) => return Err(Error::NotAType(name.into())),
            None => return Err(Error::UnknownType(name.into())),
        };
        if def.template_params.len() != args.len() {
            return Err(Error::TemplateArity {
                name: name.into(),
                expected: def.template_params.len(),
                found: args.len(),
            });
        }
        let ty = Type::class(name, args.to_vec());
        if !def.is_complete {
            return Err(Error::IncompleteType(ty));
        }
        let key = (String::from(name), args.to_vec());
        let root = self.root();
        if let Some(hit) = root.instances.borrow().get(&key) {
            return Ok(Rc::clone(hit));
        }

        let mut scope = self.child();
        for (param, arg) in def.template_params.iter().zip(args) {
            scope.declare_alias(param.clone(), arg.clone())?;
        }
        let resolve_members = |members: &[(String, TypeExpr)]| {
            members
                .iter()
                .map(|(n, te)| resolve_type(te, &scope).map(|t| (n.clone(), t)))
                .collect::<Result<Vec<_>, _>>()
        };
        let fields = resolve_members(&def.fields)?;
        let static_fields = resolve_members(&def.static_fields)?;
        for (_, t) in fields.iter().chain(static_fields.iter()) {
            if t.is_void() || t.is_function() {
                return Err(Error::InvalidType(alloc::format!(
                    "field of type '{}' in '{}'",
                    t,
                    ty
                )));
            }
        }
        let call_operators = def
            .call_operators
            .iter()
            .map(|op| {
                resolve_type(
                    &TypeExpr::Function {
                        ret: alloc::boxed::Box::new(op.ret.clone()),
                        params: op.params.clone(),
                    },
                    &scope,
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        // A polymorphic class, or a const, reference or non-trivial
        // member, makes the implicit copy assignment non-trivial.
        let mut trivial = def.is_trivially_copy_assignable && !def.is_abstract;
        for (_, t) in &fields {
            trivial &= match t {
                Type::LValueRef(_) | Type::RValueRef(_) => false,
                t if t.is_const() => false,
                Type::Class { name, args, .. } => {
                    self.instantiate(name, args)?.is_trivially_copy_assignable
                }
                _ => true,
            };
        }
        let instance = Rc::new(ClassInstance {
            ty,
            fields,
            static_fields,
            call_operators,
            is_abstract: def.is_abstract,
            is_trivially_copy_assignable: trivial,
        });
        root.instances
            .borrow_mut()
            .insert(key, Rc::clone(&instance));
        Ok(instance)
    }
}
