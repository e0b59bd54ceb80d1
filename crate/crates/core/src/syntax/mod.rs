//! Abstract syntax of the two-sorted term-modal language.
//!
//! Symbols receive their types from a [`Signature`] first; terms and formulas
//! are typed against it afterwards. The derived connectives (`->`, `|`,
//! `<->`, `!=`, `exists`) exist only in the concrete syntax and are expanded
//! by the parser into negation, conjunction and universal quantification.

mod error;
pub(crate) mod parse;
mod print;
mod signature;
mod subst;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

pub use error::SyntaxError;
pub use parse::{parse_formula, parse_signature, parse_term};
pub use print::TypedTree;
pub use signature::{FunType, Signature, Symbol};
pub use subst::{substitute, substitute_term};

/// Argument types: `agt`, `obj`, or their join `agtobj`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeTag {
    Agt,
    Obj,
    AgtObj,
}

impl TypeTag {
    pub const ALL: [TypeTag; 3] = [TypeTag::Agt, TypeTag::Obj, TypeTag::AgtObj];

    /// The subtype order: reflexive, plus `agt ⪯ agtobj` and `obj ⪯ agtobj`.
    pub fn precedes(self, other: TypeTag) -> bool {
        self == other || other == TypeTag::AgtObj
    }

    pub fn as_sort(self) -> Option<Sort> {
        match self {
            TypeTag::Agt => Some(Sort::Agt),
            TypeTag::Obj => Some(Sort::Obj),
            TypeTag::AgtObj => None,
        }
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeTag::Agt => "agt",
            TypeTag::Obj => "obj",
            TypeTag::AgtObj => "agtobj",
        })
    }
}

impl FromStr for TypeTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "agt" => Ok(TypeTag::Agt),
            "obj" => Ok(TypeTag::Obj),
            "agtobj" => Ok(TypeTag::AgtObj),
            _ => Err(format!("unknown type `{s}` (expected agt, obj or agtobj)")),
        }
    }
}

/// The two sorts a term can denote. Every term has exactly one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Agt,
    Obj,
}

impl Sort {
    pub const ALL: [Sort; 2] = [Sort::Agt, Sort::Obj];

    pub fn fits(self, tag: TypeTag) -> bool {
        TypeTag::from(self).precedes(tag)
    }
}

impl From<Sort> for TypeTag {
    fn from(sort: Sort) -> Self {
        match sort {
            Sort::Agt => TypeTag::Agt,
            Sort::Obj => TypeTag::Obj,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        TypeTag::from(*self).fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(x) => Some(x),
            _ => None,
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn mentions_var(&self, name: &str) -> bool {
        match self {
            Term::Var(x) => x == name,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.mentions_var(name)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    fn collect_symbols(&self, out: &mut Symbols) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => {
                out.constants.insert(c.clone());
            }
            Term::App(f, args) => {
                out.functions.insert(f.clone());
                args.iter().for_each(|a| a.collect_symbols(out));
            }
        }
    }
}

/// Relation position of an atom: built-in equality or a declared symbol.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    Eq,
    Named(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Rel, Vec<Term>),
    Neg(Box<Formula>),
    Conj(Box<Formula>, Box<Formula>),
    /// `K[t] φ`: the agent denoted by `t` knows `φ`.
    Know(Term, Box<Formula>),
    Forall(String, Box<Formula>),
}

/// Non-logical symbols occurring in a formula.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Symbols {
    pub constants: BTreeSet<String>,
    pub functions: BTreeSet<String>,
    pub relations: BTreeSet<String>,
}

impl Formula {
    pub fn atom(rel: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(Rel::Named(rel.into()), args)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Atom(Rel::Eq, vec![lhs, rhs])
    }

    pub fn neq(lhs: Term, rhs: Term) -> Formula {
        Formula::eq(lhs, rhs).not()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Neg(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::Conj(Box::new(self), Box::new(rhs))
    }

    /// `φ -> ψ`, i.e. `!(φ & !ψ)`.
    pub fn implies(self, rhs: Formula) -> Formula {
        self.and(rhs.not()).not()
    }

    /// `φ | ψ`, i.e. `!(!φ & !ψ)`.
    pub fn or(self, rhs: Formula) -> Formula {
        self.not().and(rhs.not()).not()
    }

    pub fn iff(self, rhs: Formula) -> Formula {
        self.clone().implies(rhs.clone()).and(rhs.implies(self))
    }

    pub fn know(index: Term, body: Formula) -> Formula {
        Formula::Know(index, Box::new(body))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    /// `exists x. φ`, i.e. `!forall x. !φ`.
    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::forall(var, body.not()).not()
    }

    /// Splits `!(A & !B)` into `(A, B)`.
    pub fn as_implication(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Neg(inner) => match inner.as_ref() {
                Formula::Conj(a, b) => match b.as_ref() {
                    Formula::Neg(b) => Some((a, b)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// Free variables; the index of `K[t]` contributes all of its variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add_term = |t: &Term, bound: &[String], out: &mut BTreeSet<String>| {
            for x in t.vars() {
                if !bound.contains(&x) {
                    out.insert(x);
                }
            }
        };
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|t| add_term(t, bound, out)),
            Formula::Neg(p) => p.collect_free(bound, out),
            Formula::Conj(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Know(t, p) => {
                add_term(t, bound, out);
                p.collect_free(bound, out);
            }
            Formula::Forall(x, p) => {
                bound.push(x.clone());
                p.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable that appears as a quantifier binder anywhere.
    pub fn bound_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Forall(x, _) = f {
                out.insert(x.clone());
            }
        });
        out
    }

    pub fn symbols(&self) -> Symbols {
        let mut out = Symbols::default();
        self.visit(&mut |f| match f {
            Formula::Atom(rel, args) => {
                if let Rel::Named(p) = rel {
                    out.relations.insert(p.clone());
                }
                args.iter().for_each(|t| t.collect_symbols(&mut out));
            }
            Formula::Know(t, _) => t.collect_symbols(&mut out),
            _ => {}
        });
        out
    }

    pub fn has_modality(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Know(..)));
        found
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(..) => 0,
            Formula::Neg(p) | Formula::Know(_, p) | Formula::Forall(_, p) => 1 + p.depth(),
            Formula::Conj(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Pre-order traversal of all subformulas.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Atom(..) => {}
            Formula::Neg(p) | Formula::Know(_, p) | Formula::Forall(_, p) => p.visit(f),
            Formula::Conj(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }
}

/// The sort of `t` under `sig`, checking every argument position.
pub fn type_of_term(sig: &Signature, t: &Term) -> Result<Sort, SyntaxError> {
    match t {
        Term::Var(x) => sig.var_sort(x).ok_or_else(|| SyntaxError::Unknown(x.clone())),
        Term::Const(c) => sig.const_sort(c).ok_or_else(|| SyntaxError::Unknown(c.clone())),
        Term::App(f, args) => {
            let ty = sig.function(f).ok_or_else(|| SyntaxError::Unknown(f.clone()))?;
            if ty.args.len() != args.len() {
                return Err(SyntaxError::Arity {
                    symbol: f.clone(),
                    expected: ty.args.len(),
                    found: args.len(),
                });
            }
            for (i, (arg, &expected)) in args.iter().zip(&ty.args).enumerate() {
                let found = type_of_term(sig, arg)?;
                if !found.fits(expected) {
                    return Err(SyntaxError::TypeViolation {
                        symbol: f.clone(),
                        position: i + 1,
                        found,
                        expected,
                    });
                }
            }
            Ok(ty.result)
        }
    }
}

/// Checks that `phi` is a well-formed formula over `sig`.
pub fn check_formula(sig: &Signature, phi: &Formula) -> Result<(), SyntaxError> {
    match phi {
        Formula::Atom(rel, args) => {
            let (name, types): (&str, &[TypeTag]) = match rel {
                Rel::Eq => ("=", &[TypeTag::AgtObj, TypeTag::AgtObj]),
                Rel::Named(p) => (p, sig.relation(p).ok_or_else(|| SyntaxError::Unknown(p.clone()))?),
            };
            if types.len() != args.len() {
                return Err(SyntaxError::Arity {
                    symbol: name.to_string(),
                    expected: types.len(),
                    found: args.len(),
                });
            }
            for (i, (arg, &expected)) in args.iter().zip(types).enumerate() {
                let found = type_of_term(sig, arg)?;
                if !found.fits(expected) {
                    return Err(SyntaxError::TypeViolation {
                        symbol: name.to_string(),
                        position: i + 1,
                        found,
                        expected,
                    });
                }
            }
            Ok(())
        }
        Formula::Neg(p) => check_formula(sig, p),
        Formula::Conj(a, b) => {
            check_formula(sig, a)?;
            check_formula(sig, b)
        }
        Formula::Know(t, p) => {
            let sort = type_of_term(sig, t)?;
            if sort != Sort::Agt {
                return Err(SyntaxError::ModalIndex(sort));
            }
            check_formula(sig, p)
        }
        Formula::Forall(x, p) => {
            if sig.var_sort(x).is_none() {
                return Err(SyntaxError::NotAVariable(x.clone()));
            }
            check_formula(sig, p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subtype_order_has_exactly_five_pairs() {
        let pairs: Vec<_> = TypeTag::ALL
            .iter()
            .flat_map(|&a| TypeTag::ALL.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| a.precedes(b))
            .collect();
        assert_eq!(pairs.len(), 5);
        for t in TypeTag::ALL {
            assert!(t.precedes(t));
        }
        for (a, b) in &pairs {
            if a != b {
                assert!(!b.precedes(*a), "antisymmetry fails for {a}, {b}");
            }
        }
        assert!(TypeTag::Agt.precedes(TypeTag::AgtObj));
        assert!(TypeTag::Obj.precedes(TypeTag::AgtObj));
        assert!(!TypeTag::Agt.precedes(TypeTag::Obj));
    }

    fn sig() -> Signature {
        parse_signature(
            "var x : agt\nvar y : agt\nvar u : obj\nconst c : agt\n\
             fun f : agtobj -> obj\nfun g : agt -> obj\nrel P : agtobj",
        )
        .unwrap()
    }

    #[test]
    fn term_types() {
        let sig = sig();
        assert_eq!(type_of_term(&sig, &Term::var("x")), Ok(Sort::Agt));
        let fx = Term::app("f", vec![Term::var("x")]);
        assert_eq!(type_of_term(&sig, &fx), Ok(Sort::Obj));
        let gu = Term::app("g", vec![Term::var("u")]);
        assert!(matches!(
            type_of_term(&sig, &gu),
            Err(SyntaxError::TypeViolation {
                found: Sort::Obj,
                expected: TypeTag::Agt,
                ..
            })
        ));
    }

    #[test]
    fn free_variables_follow_modal_index_convention() {
        let sig = parse_signature("var x : agt\nvar y : agt\nfun f : agt -> agt\nrel P : agtobj").unwrap();
        let phi = parse_formula(&sig, "K[f(x)] P(y)").unwrap();
        assert_eq!(phi.free_vars(), ["x", "y"].map(String::from).into());
        let phi = parse_formula(&sig, "forall x. P(x)").unwrap();
        assert!(phi.free_vars().is_empty());
        let phi = parse_formula(&sig, "forall x. K[x] P(y)").unwrap();
        assert_eq!(phi.free_vars(), ["y"].map(String::from).into());
    }

    #[test]
    fn symbols_are_collected() {
        let sig = sig();
        let phi = parse_formula(&sig, "K[c] P(f(x)) & x = c").unwrap();
        let syms = phi.symbols();
        assert_eq!(syms.constants, ["c"].map(String::from).into());
        assert_eq!(syms.functions, ["f"].map(String::from).into());
        assert_eq!(syms.relations, ["P"].map(String::from).into());
        assert!(phi.has_modality());
    }
}
