//! Non-standard models.
//!
//! Constants and function symbols are interpreted by `J(sym, w, X)` where `X`
//! is a relation extension. An atom `P(t₁, …, tₙ)` evaluates its arguments
//! with `X = J(P, w)`, equality uses the diagonal, and the index of `K[t]`
//! is evaluated with `X = ∅`.
//!
//! `J` is made total by a default per symbol and world plus finitely many
//! overrides keyed by extension.

mod constructions;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use constructions::{build_lewis_example, build_prop3_countermodel, lewis_signature};

use crate::semantics::eval::{self, Semantics};
use crate::semantics::{
    check_constant, check_relation, Element, EvalError, Frame, FunTable, ModelError, StandardModel, Valuation, World,
};
use crate::syntax::{Formula, Rel, Signature, Term};

/// A finite set of tuples, compared by extension.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelExtension(BTreeSet<Vec<Element>>);

impl RelExtension {
    pub fn empty() -> RelExtension {
        RelExtension::default()
    }

    /// `{⟨d, d⟩ : d ∈ D_agtobj}`.
    pub fn diag(frame: &Frame) -> RelExtension {
        frame.agents().chain(frame.objects()).map(|d| vec![d, d]).collect()
    }

    pub fn new(tuples: BTreeSet<Vec<Element>>) -> RelExtension {
        RelExtension(tuples)
    }

    pub fn contains(&self, tuple: &[Element]) -> bool {
        self.0.contains(tuple)
    }

    pub fn tuples(&self) -> impl Iterator<Item = &[Element]> {
        self.0.iter().map(Vec::as_slice)
    }

    pub fn as_set(&self) -> &BTreeSet<Vec<Element>> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `{ (a), (b) }`; the empty set prints as `{ }`.
    pub fn render(&self, frame: &Frame) -> String {
        if self.0.is_empty() {
            return "{ }".into();
        }
        let parts: Vec<String> = self.0.iter().map(|t| frame.render_tuple(t)).collect();
        format!("{{ {} }}", parts.join(", "))
    }
}

impl FromIterator<Vec<Element>> for RelExtension {
    fn from_iter<I: IntoIterator<Item = Vec<Element>>>(iter: I) -> Self {
        RelExtension(iter.into_iter().collect())
    }
}

/// The value `J(sym, w, X)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JValue<'a> {
    Element(Element),
    Table(&'a FunTable),
}

type Overrides<T> = Vec<BTreeMap<RelExtension, T>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonStandardModel {
    sig: Signature,
    frame: Frame,
    const_default: BTreeMap<String, Vec<Element>>,
    fun_default: BTreeMap<String, Vec<FunTable>>,
    const_override: BTreeMap<String, Overrides<Element>>,
    fun_override: BTreeMap<String, Overrides<FunTable>>,
    relations: BTreeMap<String, Vec<RelExtension>>,
    diag: RelExtension,
}

type Key = (String, World);

#[derive(Clone, Debug)]
pub struct NonStandardModelBuilder {
    sig: Signature,
    frame: Frame,
    const_default: BTreeMap<Key, Element>,
    fun_default: BTreeMap<Key, BTreeMap<Vec<Element>, Element>>,
    const_override: BTreeMap<Key, BTreeMap<RelExtension, Element>>,
    fun_override: BTreeMap<Key, BTreeMap<RelExtension, BTreeMap<Vec<Element>, Element>>>,
    relations: BTreeMap<Key, RelExtension>,
}

impl NonStandardModelBuilder {
    pub fn default_constant(&mut self, c: &str, w: World, e: Element) -> &mut Self {
        self.const_default.insert((c.to_string(), w), e);
        self
    }

    pub fn default_function_entry(&mut self, f: &str, w: World, args: Vec<Element>, e: Element) -> &mut Self {
        self.fun_default.entry((f.to_string(), w)).or_default().insert(args, e);
        self
    }

    pub fn override_constant(&mut self, c: &str, w: World, x: RelExtension, e: Element) -> &mut Self {
        self.const_override.entry((c.to_string(), w)).or_default().insert(x, e);
        self
    }

    pub fn override_function_entry(
        &mut self,
        f: &str,
        w: World,
        x: RelExtension,
        args: Vec<Element>,
        e: Element,
    ) -> &mut Self {
        self.fun_override
            .entry((f.to_string(), w))
            .or_default()
            .entry(x)
            .or_default()
            .insert(args, e);
        self
    }

    pub fn relation(&mut self, p: &str, w: World, ext: RelExtension) -> &mut Self {
        self.relations.insert((p.to_string(), w), ext);
        self
    }

    pub fn relation_tuple(&mut self, p: &str, w: World, tuple: Vec<Element>) -> &mut Self {
        self.relations.entry((p.to_string(), w)).or_default().0.insert(tuple);
        self
    }

    fn check_key(&self, x: &RelExtension) -> Result<(), ModelError> {
        let mut arity = None;
        for t in x.tuples() {
            if !t.iter().all(|&e| self.frame.contains(e)) {
                return Err(ModelError::Invalid(format!(
                    "extension key {} mentions an element outside the frame",
                    self.frame.render_tuple(t)
                )));
            }
            if *arity.get_or_insert(t.len()) != t.len() {
                return Err(ModelError::Invalid("extension key mixes tuple lengths".into()));
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<NonStandardModel, ModelError> {
        let (sig, frame) = (&self.sig, &self.frame);
        let nw = frame.world_count();
        let keys = self
            .const_default
            .keys()
            .chain(self.const_override.keys())
            .map(|k| (k, sig.const_sort(&k.0).is_some()))
            .chain(
                self.fun_default
                    .keys()
                    .chain(self.fun_override.keys())
                    .map(|k| (k, sig.function(&k.0).is_some())),
            )
            .chain(self.relations.keys().map(|k| (k, sig.relation(&k.0).is_some())));
        for ((name, w), declared) in keys {
            if !declared || w.0 >= nw {
                return Err(ModelError::UnknownSymbol(name.clone()));
            }
        }

        let mut const_default = BTreeMap::new();
        let mut const_override = BTreeMap::new();
        for (c, _) in sig.constants() {
            let mut defaults = Vec::new();
            let mut overrides = Vec::new();
            for w in frame.worlds() {
                let key = (c.to_string(), w);
                let e = *self.const_default.get(&key).ok_or_else(|| ModelError::NotTotal {
                    symbol: c.to_string(),
                    detail: format!("no default at world {}", frame.world_name(w)),
                })?;
                check_constant(sig, frame, c, e)?;
                defaults.push(e);
                let ov = self.const_override.get(&key).cloned().unwrap_or_default();
                for (x, &e) in &ov {
                    self.check_key(x)?;
                    check_constant(sig, frame, c, e)?;
                }
                overrides.push(ov);
            }
            const_default.insert(c.to_string(), defaults);
            const_override.insert(c.to_string(), overrides);
        }

        let mut fun_default = BTreeMap::new();
        let mut fun_override = BTreeMap::new();
        for (f, ty) in sig.functions() {
            let mut defaults = Vec::new();
            let mut overrides = Vec::new();
            for w in frame.worlds() {
                let key = (f.to_string(), w);
                let map = self
                    .fun_default
                    .get(&key)
                    .cloned()
                    .ok_or_else(|| ModelError::NotTotal {
                        symbol: f.to_string(),
                        detail: format!("no default at world {}", frame.world_name(w)),
                    })?;
                defaults.push(FunTable::new(f, ty, frame, map)?);
                let mut ov = BTreeMap::new();
                for (x, map) in self.fun_override.get(&key).cloned().unwrap_or_default() {
                    self.check_key(&x)?;
                    ov.insert(x, FunTable::new(f, ty, frame, map)?);
                }
                overrides.push(ov);
            }
            fun_default.insert(f.to_string(), defaults);
            fun_override.insert(f.to_string(), overrides);
        }

        let mut relations = BTreeMap::new();
        for (p, _) in sig.relations() {
            let mut per_world = Vec::new();
            for w in frame.worlds() {
                let ext = self.relations.get(&(p.to_string(), w)).cloned().unwrap_or_default();
                check_relation(sig, frame, p, &ext.0)?;
                per_world.push(ext);
            }
            relations.insert(p.to_string(), per_world);
        }

        Ok(NonStandardModel {
            sig: sig.clone(),
            frame: frame.clone(),
            const_default,
            fun_default,
            const_override,
            fun_override,
            relations,
            diag: RelExtension::diag(frame),
        })
    }
}

impl NonStandardModel {
    pub fn builder(sig: Signature, frame: Frame) -> NonStandardModelBuilder {
        NonStandardModelBuilder {
            sig,
            frame,
            const_default: BTreeMap::new(),
            fun_default: BTreeMap::new(),
            const_override: BTreeMap::new(),
            fun_override: BTreeMap::new(),
            relations: BTreeMap::new(),
        }
    }

    /// A builder pre-filled with this model's interpretation.
    pub fn to_builder(&self) -> NonStandardModelBuilder {
        let mut b = NonStandardModel::builder(self.sig.clone(), self.frame.clone());
        for (c, per_world) in &self.const_default {
            for (i, &e) in per_world.iter().enumerate() {
                b.default_constant(c, World(i), e);
            }
        }
        for (f, per_world) in &self.fun_default {
            for (i, table) in per_world.iter().enumerate() {
                for (args, e) in table.entries() {
                    b.default_function_entry(f, World(i), args.to_vec(), e);
                }
            }
        }
        for (c, per_world) in &self.const_override {
            for (i, ov) in per_world.iter().enumerate() {
                for (x, &e) in ov {
                    b.override_constant(c, World(i), x.clone(), e);
                }
            }
        }
        for (f, per_world) in &self.fun_override {
            for (i, ov) in per_world.iter().enumerate() {
                for (x, table) in ov {
                    for (args, e) in table.entries() {
                        b.override_function_entry(f, World(i), x.clone(), args.to_vec(), e);
                    }
                }
            }
        }
        for (p, per_world) in &self.relations {
            for (i, ext) in per_world.iter().enumerate() {
                b.relation(p, World(i), ext.clone());
            }
        }
        b
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn diag(&self) -> &RelExtension {
        &self.diag
    }

    /// `J(P, w)`.
    pub fn relation(&self, p: &str, w: World) -> Option<&RelExtension> {
        self.relations.get(p).map(|per_world| &per_world[w.0])
    }

    pub fn default_constant(&self, c: &str, w: World) -> Option<Element> {
        self.const_default.get(c).map(|per_world| per_world[w.0])
    }

    pub fn default_function(&self, f: &str, w: World) -> Option<&FunTable> {
        self.fun_default.get(f).map(|per_world| &per_world[w.0])
    }

    pub fn constant_overrides(&self, c: &str, w: World) -> impl Iterator<Item = (&RelExtension, Element)> {
        self.const_override
            .get(c)
            .into_iter()
            .flat_map(move |per_world| per_world[w.0].iter().map(|(x, &e)| (x, e)))
    }

    pub fn function_overrides(&self, f: &str, w: World) -> impl Iterator<Item = (&RelExtension, &FunTable)> {
        self.fun_override
            .get(f)
            .into_iter()
            .flat_map(move |per_world| per_world[w.0].iter())
    }

    pub fn override_count(&self) -> usize {
        let c: usize = self.const_override.values().flatten().map(BTreeMap::len).sum();
        let f: usize = self.fun_override.values().flatten().map(BTreeMap::len).sum();
        c + f
    }

    /// Same model with `J(c, w, X) = e`.
    pub fn with_constant_override(
        &self,
        c: &str,
        w: World,
        x: RelExtension,
        e: Element,
    ) -> Result<NonStandardModel, ModelError> {
        let mut b = self.to_builder();
        b.override_constant(c, w, x, e);
        b.build()
    }

    /// Same model with every override dropped.
    pub fn without_overrides(&self) -> NonStandardModel {
        let mut m = self.clone();
        for per_world in m.const_override.values_mut() {
            per_world.iter_mut().for_each(BTreeMap::clear);
        }
        for per_world in m.fun_override.values_mut() {
            per_world.iter_mut().for_each(BTreeMap::clear);
        }
        m
    }
}

/// `J(sym, w, X)`: the override at `X` if there is one, else the default.
pub fn j_lookup<'a>(n: &'a NonStandardModel, sym: &str, w: World, x: &RelExtension) -> Option<JValue<'a>> {
    if let Some(per_world) = n.const_default.get(sym) {
        let e = n.const_override[sym][w.0].get(x).copied().unwrap_or(per_world[w.0]);
        return Some(JValue::Element(e));
    }
    let per_world = n.fun_default.get(sym)?;
    let table = n.fun_override[sym][w.0].get(x).unwrap_or(&per_world[w.0]);
    Some(JValue::Table(table))
}

/// `⟦t⟧^{J,v}_{w,X}`; the same `X` is used for every subterm.
pub fn extension_ns(
    n: &NonStandardModel,
    w: World,
    v: &Valuation,
    x: &RelExtension,
    t: &Term,
) -> Result<Element, EvalError> {
    match t {
        Term::Var(name) => v.get(name).ok_or_else(|| EvalError::UnboundVariable(name.clone())),
        Term::Const(c) => match j_lookup(n, c, w, x) {
            Some(JValue::Element(e)) => Ok(e),
            _ => Err(EvalError::UnknownSymbol(c.clone())),
        },
        Term::App(f, args) => {
            let Some(JValue::Table(table)) = j_lookup(n, f, w, x) else {
                return Err(EvalError::UnknownSymbol(f.clone()));
            };
            let values = args
                .iter()
                .map(|a| extension_ns(n, w, v, x, a))
                .collect::<Result<Vec<_>, _>>()?;
            table
                .apply(&values)
                .ok_or_else(|| EvalError::OutsideDomain { symbol: f.clone() })
        }
    }
}

impl Semantics for NonStandardModel {
    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn frame(&self) -> &Frame {
        &self.frame
    }

    fn holds_atom(&self, w: World, v: &Valuation, rel: &Rel, args: &[Term]) -> Result<bool, EvalError> {
        let ext = match rel {
            Rel::Eq => &self.diag,
            Rel::Named(p) => self.relation(p, w).ok_or_else(|| EvalError::UnknownSymbol(p.clone()))?,
        };
        let values = args
            .iter()
            .map(|t| extension_ns(self, w, v, ext, t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ext.contains(&values))
    }

    fn modal_index(&self, w: World, v: &Valuation, t: &Term) -> Result<Element, EvalError> {
        extension_ns(self, w, v, &RelExtension::empty(), t)
    }
}

/// `N, w ⊨_v φ` in the non-standard sense.
pub fn satisfies_ns(n: &NonStandardModel, w: World, v: &Valuation, phi: &Formula) -> Result<bool, EvalError> {
    eval::satisfies(n, w, v, phi)
}

pub fn valid_in_model_ns(n: &NonStandardModel, phi: &Formula) -> Result<bool, EvalError> {
    Ok(eval::find_falsifier(n, phi)?.is_none())
}

pub fn falsifier_ns(n: &NonStandardModel, phi: &Formula) -> Result<Option<(World, Valuation)>, EvalError> {
    eval::find_falsifier(n, phi)
}

/// `J = I` with no overrides.
pub fn lift_standard(m: &StandardModel) -> NonStandardModel {
    let sig = m.signature();
    let frame = m.frame();
    let worlds: Vec<World> = frame.worlds().collect();
    let nw = worlds.len();
    NonStandardModel {
        sig: sig.clone(),
        frame: frame.clone(),
        const_default: sig
            .constants()
            .map(|(c, _)| {
                (
                    c.to_string(),
                    worlds.iter().map(|&w| m.constant(c, w).unwrap()).collect(),
                )
            })
            .collect(),
        fun_default: sig
            .functions()
            .map(|(f, _)| {
                (
                    f.to_string(),
                    worlds.iter().map(|&w| m.function(f, w).unwrap().clone()).collect(),
                )
            })
            .collect(),
        const_override: sig
            .constants()
            .map(|(c, _)| (c.to_string(), vec![BTreeMap::new(); nw]))
            .collect(),
        fun_override: sig
            .functions()
            .map(|(f, _)| (f.to_string(), vec![BTreeMap::new(); nw]))
            .collect(),
        relations: sig
            .relations()
            .map(|(p, _)| {
                (
                    p.to_string(),
                    worlds
                        .iter()
                        .map(|&w| RelExtension::new(m.relation(p, w).unwrap().clone()))
                        .collect(),
                )
            })
            .collect(),
        diag: RelExtension::diag(frame),
    }
}

impl fmt::Display for JValue<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JValue::Element(e) => write!(f, "{e:?}"),
            JValue::Table(t) => write!(f, "table with {} entries", t.entries().count()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::satisfies_std;
    use crate::syntax::{parse_formula, parse_signature, parse_term};

    fn smallest() -> StandardModel {
        let sig = parse_signature("var x : agt\nconst c : agt\nfun f : agt -> obj\nrel P : agtobj").unwrap();
        let frame = Frame::new(vec!["a".into()], vec!["o".into()], vec!["w".into()]).unwrap();
        let mut b = StandardModel::builder(sig, frame);
        b.constant("c", World(0), Element::agent(0))
            .function_entry("f", World(0), vec![Element::agent(0)], Element::object(0))
            .relation_tuple("P", World(0), vec![Element::agent(0)]);
        b.build().unwrap()
    }

    #[test]
    fn extensions_compare_by_content() {
        let a: RelExtension = [vec![Element::agent(1)], vec![Element::agent(0)]].into_iter().collect();
        let b: RelExtension = [vec![Element::agent(0)], vec![Element::agent(1)]].into_iter().collect();
        assert_eq!(a, b);
        let frame = Frame::numbered(2, 1, 1).unwrap();
        assert_eq!(RelExtension::diag(&frame).len(), 3);
        assert_eq!(RelExtension::empty().render(&frame), "{ }");
        assert_eq!(a.render(&frame), "{ (a0), (a1) }");
    }

    #[test]
    fn lifted_model_agrees_and_ignores_keys() {
        let m = smallest();
        let n = lift_standard(&m);
        let sig = m.signature().clone();
        let v: Valuation = [("x".to_string(), Element::agent(0))].into_iter().collect();
        for text in ["P(c)", "x = c -> (P(x) -> P(c))", "K[c] P(x)", "forall x. P(x)"] {
            let phi = parse_formula(&sig, text).unwrap();
            assert_eq!(
                satisfies_ns(&n, World(0), &v, &phi),
                satisfies_std(&m, World(0), &v, &phi)
            );
        }
        let keys = [
            RelExtension::empty(),
            n.diag().clone(),
            n.relation("P", World(0)).unwrap().clone(),
        ];
        for x in &keys {
            assert_eq!(j_lookup(&n, "c", World(0), x), Some(JValue::Element(Element::agent(0))));
        }
        let fc = parse_term(&sig, "f(c)").unwrap();
        assert_eq!(extension_ns(&n, World(0), &v, &keys[0], &fc), Ok(Element::object(0)));
    }

    #[test]
    fn overrides_apply_only_at_their_key() {
        let n = lift_standard(&smallest());
        let frame = Frame::numbered(2, 1, 1).unwrap();
        // rebuild over two agents so an override can differ from the default
        let mut b = NonStandardModel::builder(n.signature().clone(), frame.clone());
        b.default_constant("c", World(0), Element::agent(0))
            .default_function_entry("f", World(0), vec![Element::agent(0)], Element::object(0))
            .default_function_entry("f", World(0), vec![Element::agent(1)], Element::object(0))
            .override_constant("c", World(0), RelExtension::empty(), Element::agent(1))
            .relation_tuple("P", World(0), vec![Element::agent(0)]);
        let n = b.build().unwrap();
        let c = Term::constant("c");
        let v = Valuation::new();
        assert_eq!(
            extension_ns(&n, World(0), &v, &RelExtension::empty(), &c),
            Ok(Element::agent(1))
        );
        assert_eq!(extension_ns(&n, World(0), &v, n.diag(), &c), Ok(Element::agent(0)));
        assert_eq!(n.override_count(), 1);
        assert_eq!(n.without_overrides().override_count(), 0);
        assert_eq!(n.to_builder().build().unwrap(), n);
    }

    #[test]
    fn defaults_are_mandatory() {
        let sig = parse_signature("const c : agt").unwrap();
        let b = NonStandardModel::builder(sig, Frame::numbered(1, 1, 1).unwrap());
        assert!(matches!(b.build(), Err(ModelError::NotTotal { .. })));
    }
}
