//! Finite Kripke semantics for the term-modal language.
//!
//! A [`StandardModel`] interprets constants, function symbols and relation
//! symbols relative to worlds. Equality is never stored: it is the diagonal
//! of the domain at every world.

mod enumerate;
pub(crate) mod eval;
mod frame;
mod valuation;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use enumerate::{
    enumerate_countermodel, estimate_models, Bounds, Countermodel, EnumError, SearchOutcome, DEFAULT_CEILING,
};
pub use frame::{Element, Frame, FunTable, World};
pub use valuation::{all_valuations, Valuation};

use crate::syntax::{Formula, Rel, Signature, Term, TypeTag};
use eval::Semantics;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("the set of {0} must be non-empty")]
    EmptyDomain(&'static str),
    #[error("name `{0}` is used twice")]
    DuplicateName(String),
    #[error("`{0}` is not declared in the signature")]
    UnknownSymbol(String),
    #[error("`{symbol}` is missing an interpretation: {detail}")]
    NotTotal { symbol: String, detail: String },
    #[error("`{symbol}`: {detail}")]
    WrongSort { symbol: String, detail: String },
    #[error("{0}")]
    Invalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("symbol `{0}` is not interpreted by the model")]
    UnknownSymbol(String),
    #[error("world #{0} does not exist")]
    UnknownWorld(usize),
    #[error("`{symbol}` has no value at the given arguments")]
    OutsideDomain { symbol: String },
}

/// Checks that `tuples` is a subset of `D_τ₁ × … × D_τₙ` for `type(P)`.
pub(crate) fn check_relation(
    sig: &Signature,
    frame: &Frame,
    name: &str,
    tuples: &BTreeSet<Vec<Element>>,
) -> Result<(), ModelError> {
    let types = sig
        .relation(name)
        .ok_or_else(|| ModelError::UnknownSymbol(name.to_string()))?;
    for tuple in tuples {
        let fits = tuple.len() == types.len()
            && tuple
                .iter()
                .zip(types)
                .all(|(e, &tag)| frame.contains(*e) && e.sort.fits(tag));
        if !fits {
            return Err(ModelError::WrongSort {
                symbol: name.to_string(),
                detail: format!("tuple {} is outside the relation's domain", frame.render_tuple(tuple)),
            });
        }
    }
    Ok(())
}

pub(crate) fn check_constant(sig: &Signature, frame: &Frame, name: &str, e: Element) -> Result<(), ModelError> {
    let sort = sig
        .const_sort(name)
        .ok_or_else(|| ModelError::UnknownSymbol(name.to_string()))?;
    if e.sort != sort || !frame.contains(e) {
        return Err(ModelError::WrongSort {
            symbol: name.to_string(),
            detail: format!("value must be an element of sort {sort}"),
        });
    }
    Ok(())
}

/// `⟨D, W, R, I⟩` over a signature. Every constant, function symbol and
/// relation symbol of the signature is interpreted at every world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardModel {
    sig: Signature,
    frame: Frame,
    constants: BTreeMap<String, Vec<Element>>,
    functions: BTreeMap<String, Vec<FunTable>>,
    relations: BTreeMap<String, Vec<BTreeSet<Vec<Element>>>>,
}

#[derive(Clone, Debug)]
pub struct StandardModelBuilder {
    sig: Signature,
    frame: Frame,
    constants: BTreeMap<(String, World), Element>,
    functions: BTreeMap<(String, World), BTreeMap<Vec<Element>, Element>>,
    relations: BTreeMap<(String, World), BTreeSet<Vec<Element>>>,
}

impl StandardModelBuilder {
    pub fn constant(&mut self, c: &str, w: World, e: Element) -> &mut Self {
        self.constants.insert((c.to_string(), w), e);
        self
    }

    pub fn function_entry(&mut self, f: &str, w: World, args: Vec<Element>, value: Element) -> &mut Self {
        self.functions
            .entry((f.to_string(), w))
            .or_default()
            .insert(args, value);
        self
    }

    pub fn relation_tuple(&mut self, p: &str, w: World, tuple: Vec<Element>) -> &mut Self {
        self.relations.entry((p.to_string(), w)).or_default().insert(tuple);
        self
    }

    /// Declares `I(P, w)`, possibly empty.
    pub fn relation(&mut self, p: &str, w: World, tuples: BTreeSet<Vec<Element>>) -> &mut Self {
        self.relations.insert((p.to_string(), w), tuples);
        self
    }

    pub fn build(&self) -> Result<StandardModel, ModelError> {
        let frame = &self.frame;
        let sig = &self.sig;
        for (name, w) in self.constants.keys() {
            if sig.const_sort(name).is_none() || w.0 >= frame.world_count() {
                return Err(ModelError::UnknownSymbol(name.clone()));
            }
        }
        for (name, w) in self.functions.keys().chain(self.relations.keys()) {
            if (sig.function(name).is_none() && sig.relation(name).is_none()) || w.0 >= frame.world_count() {
                return Err(ModelError::UnknownSymbol(name.clone()));
            }
        }
        let mut constants = BTreeMap::new();
        for (c, _) in sig.constants() {
            let mut per_world = Vec::new();
            for w in frame.worlds() {
                let e = *self
                    .constants
                    .get(&(c.to_string(), w))
                    .ok_or_else(|| ModelError::NotTotal {
                        symbol: c.to_string(),
                        detail: format!("no value at world {}", frame.world_name(w)),
                    })?;
                check_constant(sig, frame, c, e)?;
                per_world.push(e);
            }
            constants.insert(c.to_string(), per_world);
        }
        let mut functions = BTreeMap::new();
        for (f, ty) in sig.functions() {
            let mut per_world = Vec::new();
            for w in frame.worlds() {
                let map = self.functions.get(&(f.to_string(), w)).cloned().unwrap_or_default();
                per_world.push(FunTable::new(f, ty, frame, map)?);
            }
            functions.insert(f.to_string(), per_world);
        }
        let mut relations = BTreeMap::new();
        for (p, _) in sig.relations() {
            let mut per_world = Vec::new();
            for w in frame.worlds() {
                let set = self.relations.get(&(p.to_string(), w)).cloned().unwrap_or_default();
                check_relation(sig, frame, p, &set)?;
                per_world.push(set);
            }
            relations.insert(p.to_string(), per_world);
        }
        Ok(StandardModel {
            sig: sig.clone(),
            frame: frame.clone(),
            constants,
            functions,
            relations,
        })
    }
}

impl StandardModel {
    pub fn builder(sig: Signature, frame: Frame) -> StandardModelBuilder {
        StandardModelBuilder {
            sig,
            frame,
            constants: BTreeMap::new(),
            functions: BTreeMap::new(),
            relations: BTreeMap::new(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// `I(c, w)`.
    pub fn constant(&self, c: &str, w: World) -> Option<Element> {
        self.constants.get(c).map(|per_world| per_world[w.0])
    }

    /// `I(f, w)`.
    pub fn function(&self, f: &str, w: World) -> Option<&FunTable> {
        self.functions.get(f).map(|per_world| &per_world[w.0])
    }

    /// `I(P, w)` for `P ≠ =`.
    pub fn relation(&self, p: &str, w: World) -> Option<&BTreeSet<Vec<Element>>> {
        self.relations.get(p).map(|per_world| &per_world[w.0])
    }
}

impl Semantics for StandardModel {
    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn frame(&self) -> &Frame {
        &self.frame
    }

    fn holds_atom(&self, w: World, v: &Valuation, rel: &Rel, args: &[Term]) -> Result<bool, EvalError> {
        let values = args
            .iter()
            .map(|t| extension_std(self, w, v, t))
            .collect::<Result<Vec<_>, _>>()?;
        match rel {
            Rel::Eq => Ok(values.len() == 2 && values[0] == values[1]),
            Rel::Named(p) => Ok(self
                .relation(p, w)
                .ok_or_else(|| EvalError::UnknownSymbol(p.clone()))?
                .contains(&values)),
        }
    }

    fn modal_index(&self, w: World, v: &Valuation, t: &Term) -> Result<Element, EvalError> {
        extension_std(self, w, v, t)
    }
}

/// `⟦t⟧` at world `w` under `v`.
pub fn extension_std(m: &StandardModel, w: World, v: &Valuation, t: &Term) -> Result<Element, EvalError> {
    match t {
        Term::Var(x) => v.get(x).ok_or_else(|| EvalError::UnboundVariable(x.clone())),
        Term::Const(c) => m.constant(c, w).ok_or_else(|| EvalError::UnknownSymbol(c.clone())),
        Term::App(f, args) => {
            let table = m.function(f, w).ok_or_else(|| EvalError::UnknownSymbol(f.clone()))?;
            let values = args
                .iter()
                .map(|a| extension_std(m, w, v, a))
                .collect::<Result<Vec<_>, _>>()?;
            table
                .apply(&values)
                .ok_or_else(|| EvalError::OutsideDomain { symbol: f.clone() })
        }
    }
}

/// `M, w ⊨_v φ`.
pub fn satisfies_std(m: &StandardModel, w: World, v: &Valuation, phi: &Formula) -> Result<bool, EvalError> {
    eval::satisfies(m, w, v, phi)
}

/// Truth of `phi` at every world under every assignment of its free variables.
pub fn valid_in_model_std(m: &StandardModel, phi: &Formula) -> Result<bool, EvalError> {
    Ok(eval::find_falsifier(m, phi)?.is_none())
}

/// First falsifying world and valuation of `phi` in `m`, if any.
pub fn falsifier_std(m: &StandardModel, phi: &Formula) -> Result<Option<(World, Valuation)>, EvalError> {
    eval::find_falsifier(m, phi)
}

/// The relation domain `D_τ₁ × … × D_τₙ` for a relation of type `types`.
pub fn relation_domain(frame: &Frame, types: &[TypeTag]) -> Vec<Vec<Element>> {
    frame.tuples(types)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_signature, parse_term};

    /// `D_agt = {a}, D_obj = {o}, W = {w}`, `I(c) = a`, `I(P) = {a}`, `I(f)(a) = o`.
    fn smallest() -> StandardModel {
        let sig =
            parse_signature("var x : agt\nvar y : obj\nconst c : agt\nfun f : agt -> obj\nrel P : agtobj").unwrap();
        let frame = Frame::new(vec!["a".into()], vec!["o".into()], vec!["w".into()]).unwrap();
        let mut b = StandardModel::builder(sig, frame);
        b.constant("c", World(0), Element::agent(0))
            .function_entry("f", World(0), vec![Element::agent(0)], Element::object(0))
            .relation_tuple("P", World(0), vec![Element::agent(0)]);
        b.build().unwrap()
    }

    #[test]
    fn term_extensions() {
        let m = smallest();
        let v: Valuation = [("x".to_string(), Element::agent(0))].into_iter().collect();
        let sig = m.signature().clone();
        assert_eq!(extension_std(&m, World(0), &v, &Term::var("x")), Ok(Element::agent(0)));
        assert_eq!(
            extension_std(&m, World(0), &v, &Term::constant("c")),
            Ok(Element::agent(0))
        );
        let fc = parse_term(&sig, "f(c)").unwrap();
        assert_eq!(extension_std(&m, World(0), &v, &fc), Ok(Element::object(0)));
        assert_eq!(
            extension_std(&m, World(0), &Valuation::new(), &Term::var("x")),
            Err(EvalError::UnboundVariable("x".into()))
        );
    }

    #[test]
    fn satisfaction_examples() {
        let m = smallest();
        let sig = m.signature().clone();
        let v: Valuation = [("x".to_string(), Element::agent(0))].into_iter().collect();
        let p = |s| parse_formula(&sig, s).unwrap();
        assert_eq!(satisfies_std(&m, World(0), &v, &p("x = x")), Ok(true));
        // no successors: vacuously true
        assert_eq!(satisfies_std(&m, World(0), &v, &p("K[c] x != x")), Ok(true));
        assert_eq!(satisfies_std(&m, World(0), &v, &p("x = c -> (P(x) -> P(c))")), Ok(true));
        assert!(matches!(
            satisfies_std(&m, World(0), &Valuation::new(), &p("P(x)")),
            Err(EvalError::UnboundVariable(_))
        ));
    }

    #[test]
    fn validity_in_one_model() {
        let m = smallest();
        let sig = m.signature().clone();
        let p = |s| parse_formula(&sig, s).unwrap();
        assert_eq!(valid_in_model_std(&m, &p("c = c")), Ok(true));
        // P holds of the agent but not of the object
        assert_eq!(valid_in_model_std(&m, &p("P(x)")), Ok(true));
        assert_eq!(valid_in_model_std(&m, &p("P(y)")), Ok(false));
        assert_eq!(valid_in_model_std(&m, &p("x = c -> (P(x) -> P(c))")), Ok(true));
        let (w, v) = falsifier_std(&m, &p("P(y)")).unwrap().unwrap();
        assert_eq!(w, World(0));
        assert_eq!(v.get("y"), Some(Element::object(0)));
    }

    #[test]
    fn builder_rejects_partial_or_ill_sorted_interpretations() {
        let sig = parse_signature("const c : agt\nrel P : agt").unwrap();
        let frame = Frame::numbered(1, 1, 2).unwrap();
        let mut b = StandardModel::builder(sig, frame);
        b.constant("c", World(0), Element::agent(0));
        assert!(matches!(b.build(), Err(ModelError::NotTotal { .. })));
        b.constant("c", World(1), Element::object(0));
        assert!(matches!(b.build(), Err(ModelError::WrongSort { .. })));
        b.constant("c", World(1), Element::agent(0));
        b.relation_tuple("P", World(0), vec![Element::object(0)]);
        assert!(matches!(b.build(), Err(ModelError::WrongSort { .. })));
        b.relation("P", World(0), BTreeSet::new());
        assert!(b.build().is_ok());
        b.constant("d", World(0), Element::agent(0));
        assert_eq!(b.build(), Err(ModelError::UnknownSymbol("d".into())));
    }

    #[test]
    fn knowledge_ranges_over_successors_of_the_index() {
        let sig = parse_signature("const c : agt\nrel Q").unwrap();
        let mut frame = Frame::numbered(2, 1, 2).unwrap();
        frame.add_access(Element::agent(0), World(0), World(1)).unwrap();
        let mut b = StandardModel::builder(sig.clone(), frame);
        // c denotes a0 at w0 and a1 at w1; Q holds only at w0
        b.constant("c", World(0), Element::agent(0))
            .constant("c", World(1), Element::agent(1))
            .relation_tuple("Q", World(0), vec![]);
        let m = b.build().unwrap();
        let k = parse_formula(&sig, "K[c] Q").unwrap();
        assert_eq!(satisfies_std(&m, World(0), &Valuation::new(), &k), Ok(false));
        assert_eq!(satisfies_std(&m, World(1), &Valuation::new(), &k), Ok(true));
    }
}
