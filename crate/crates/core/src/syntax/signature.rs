use std::collections::BTreeMap;
use std::fmt;

use super::{Formula, Sort, SyntaxError, TypeTag};

/// Identifiers that cannot be declared because the concrete syntax uses them.
const KEYWORDS: &[&str] = &["forall", "exists", "K", "default"];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunType {
    pub args: Vec<TypeTag>,
    pub result: Sort,
}

/// What an identifier denotes in a signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symbol<'a> {
    Variable(Sort),
    Constant(Sort),
    Function(&'a FunType),
    Relation(&'a [TypeTag]),
}

/// A typed symbol table.
///
/// Besides the declared variables, the families `_a0, _a1, ...` (sort `agt`)
/// and `_o0, _o1, ...` (sort `obj`) are always in scope. Equality is built in
/// with type `⟨agtobj, agtobj⟩`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    variables: BTreeMap<String, Sort>,
    constants: BTreeMap<String, Sort>,
    functions: BTreeMap<String, FunType>,
    relations: BTreeMap<String, Vec<TypeTag>>,
}

/// Sort of a reserved variable name such as `_a3` or `_o0`.
fn reserved_sort(name: &str) -> Option<Sort> {
    let (sort, digits) = if let Some(rest) = name.strip_prefix("_a") {
        (Sort::Agt, rest)
    } else {
        (Sort::Obj, name.strip_prefix("_o")?)
    };
    (!digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())).then_some(sort)
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// The `n`-th reserved variable of `sort`.
    pub fn reserved_variable(sort: Sort, n: usize) -> String {
        match sort {
            Sort::Agt => format!("_a{n}"),
            Sort::Obj => format!("_o{n}"),
        }
    }

    fn check_fresh(&self, name: &str) -> Result<(), SyntaxError> {
        if name == "=" {
            return Err(SyntaxError::RedeclaredEquality);
        }
        if !is_identifier(name) || KEYWORDS.contains(&name) || reserved_sort(name).is_some() {
            return Err(SyntaxError::Reserved(name.to_string()));
        }
        if self.lookup(name).is_some() {
            return Err(SyntaxError::Duplicate(name.to_string()));
        }
        Ok(())
    }

    fn sort_of(tag: TypeTag, kind: &'static str) -> Result<Sort, SyntaxError> {
        tag.as_sort().ok_or(SyntaxError::SortRequired { kind })
    }

    pub fn declare_variable(&mut self, name: &str, ty: TypeTag) -> Result<(), SyntaxError> {
        let sort = Self::sort_of(ty, "variables")?;
        self.check_fresh(name)?;
        self.variables.insert(name.to_string(), sort);
        Ok(())
    }

    pub fn declare_constant(&mut self, name: &str, ty: TypeTag) -> Result<(), SyntaxError> {
        let sort = Self::sort_of(ty, "constants")?;
        self.check_fresh(name)?;
        self.constants.insert(name.to_string(), sort);
        Ok(())
    }

    pub fn declare_function(&mut self, name: &str, args: Vec<TypeTag>, result: TypeTag) -> Result<(), SyntaxError> {
        let result = Self::sort_of(result, "function results")?;
        self.check_fresh(name)?;
        self.functions.insert(name.to_string(), FunType { args, result });
        Ok(())
    }

    pub fn declare_relation(&mut self, name: &str, args: Vec<TypeTag>) -> Result<(), SyntaxError> {
        self.check_fresh(name)?;
        self.relations.insert(name.to_string(), args);
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol<'_>> {
        if let Some(&s) = self.variables.get(name) {
            Some(Symbol::Variable(s))
        } else if let Some(s) = reserved_sort(name) {
            Some(Symbol::Variable(s))
        } else if let Some(&s) = self.constants.get(name) {
            Some(Symbol::Constant(s))
        } else if let Some(f) = self.functions.get(name) {
            Some(Symbol::Function(f))
        } else {
            self.relations.get(name).map(|r| Symbol::Relation(r))
        }
    }

    pub fn var_sort(&self, name: &str) -> Option<Sort> {
        self.variables.get(name).copied().or_else(|| reserved_sort(name))
    }

    pub fn const_sort(&self, name: &str) -> Option<Sort> {
        self.constants.get(name).copied()
    }

    pub fn function(&self, name: &str) -> Option<&FunType> {
        self.functions.get(name)
    }

    pub fn relation(&self, name: &str) -> Option<&[TypeTag]> {
        self.relations.get(name).map(Vec::as_slice)
    }

    /// Declared variables in name order (reserved families excluded).
    pub fn variables(&self) -> impl Iterator<Item = (&str, Sort)> {
        self.variables.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, Sort)> {
        self.constants.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, &FunType)> {
        self.functions.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &[TypeTag])> {
        self.relations.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Same variables; constants, functions and relations cut down to those
    /// for which `keep` holds.
    pub fn retain_symbols(&self, mut keep: impl FnMut(&str) -> bool) -> Signature {
        Signature {
            variables: self.variables.clone(),
            constants: self
                .constants
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
            functions: self
                .functions
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            relations: self
                .relations
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Restriction to the non-logical symbols occurring in `phi`.
    pub fn restricted_to(&self, phi: &Formula) -> Signature {
        let syms = phi.symbols();
        self.retain_symbols(|name| {
            syms.constants.contains(name) || syms.functions.contains(name) || syms.relations.contains(name)
        })
    }

    /// Whether every declaration of `self` appears with the same type in `other`.
    pub fn is_subsignature_of(&self, other: &Signature) -> bool {
        self.variables.iter().all(|(k, v)| other.variables.get(k) == Some(v))
            && self.constants.iter().all(|(k, v)| other.constants.get(k) == Some(v))
            && self.functions.iter().all(|(k, v)| other.functions.get(k) == Some(v))
            && self.relations.iter().all(|(k, v)| other.relations.get(k) == Some(v))
    }
}

fn write_types(f: &mut fmt::Formatter<'_>, types: &[TypeTag]) -> fmt::Result {
    for (i, t) in types.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

/// Prints the `.tms` form: one declaration per line.
impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, sort) in &self.variables {
            writeln!(f, "var {name} : {sort}")?;
        }
        for (name, sort) in &self.constants {
            writeln!(f, "const {name} : {sort}")?;
        }
        for (name, ty) in &self.functions {
            write!(f, "fun {name} : ")?;
            write_types(f, &ty.args)?;
            if !ty.args.is_empty() {
                f.write_str(" ")?;
            }
            writeln!(f, "-> {}", ty.result)?;
        }
        for (name, types) in &self.relations {
            write!(f, "rel {name} :")?;
            if !types.is_empty() {
                f.write_str(" ")?;
            }
            write_types(f, types)?;
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reserved_families_are_always_in_scope() {
        let sig = Signature::new();
        assert_eq!(sig.var_sort("_a0"), Some(Sort::Agt));
        assert_eq!(sig.var_sort("_o17"), Some(Sort::Obj));
        assert_eq!(sig.var_sort("_a"), None);
        assert_eq!(sig.var_sort("_ax"), None);
        assert_eq!(Signature::reserved_variable(Sort::Obj, 4), "_o4");
    }

    #[test]
    fn declarations_share_one_namespace() {
        let mut sig = Signature::new();
        sig.declare_variable("x", TypeTag::Agt).unwrap();
        assert_eq!(
            sig.declare_constant("x", TypeTag::Obj),
            Err(SyntaxError::Duplicate("x".into()))
        );
        assert_eq!(
            sig.declare_relation("=", vec![TypeTag::Agt]),
            Err(SyntaxError::RedeclaredEquality)
        );
        assert_eq!(
            sig.declare_constant("_a1", TypeTag::Agt),
            Err(SyntaxError::Reserved("_a1".into()))
        );
        assert_eq!(
            sig.declare_relation("forall", vec![]),
            Err(SyntaxError::Reserved("forall".into()))
        );
        assert_eq!(
            sig.declare_function("f", vec![], TypeTag::AgtObj),
            Err(SyntaxError::SortRequired {
                kind: "function results"
            })
        );
    }
}
