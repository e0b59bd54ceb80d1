use std::collections::{BTreeMap, BTreeSet};

use super::ModelError;
use crate::syntax::{FunType, Sort, TypeTag};

/// A domain element. The sort is part of its identity, so `D_agt` and
/// `D_obj` are disjoint by construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    pub sort: Sort,
    pub index: usize,
}

impl Element {
    pub fn agent(index: usize) -> Element {
        Element { sort: Sort::Agt, index }
    }

    pub fn object(index: usize) -> Element {
        Element { sort: Sort::Obj, index }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World(pub usize);

/// `⟨D_agt ⊔ D_obj, W, R⟩` with named elements and worlds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    agents: Vec<String>,
    objects: Vec<String>,
    worlds: Vec<String>,
    /// `access[agent][world]`: sorted successor worlds.
    access: Vec<Vec<Vec<usize>>>,
}

impl Frame {
    /// A frame with empty accessibility relations.
    pub fn new(agents: Vec<String>, objects: Vec<String>, worlds: Vec<String>) -> Result<Frame, ModelError> {
        if agents.is_empty() {
            return Err(ModelError::EmptyDomain("agents"));
        }
        if objects.is_empty() {
            return Err(ModelError::EmptyDomain("objects"));
        }
        if worlds.is_empty() {
            return Err(ModelError::EmptyDomain("worlds"));
        }
        let mut seen = BTreeSet::new();
        for name in agents.iter().chain(&objects) {
            if !seen.insert(name) {
                return Err(ModelError::DuplicateName(name.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for name in &worlds {
            if !seen.insert(name) {
                return Err(ModelError::DuplicateName(name.clone()));
            }
        }
        let access = vec![vec![Vec::new(); worlds.len()]; agents.len()];
        Ok(Frame {
            agents,
            objects,
            worlds,
            access,
        })
    }

    /// Frame with generated names `a0.., o0.., w0..`.
    pub fn numbered(agents: usize, objects: usize, worlds: usize) -> Result<Frame, ModelError> {
        Frame::new(
            (0..agents).map(|i| format!("a{i}")).collect(),
            (0..objects).map(|i| format!("o{i}")).collect(),
            (0..worlds).map(|i| format!("w{i}")).collect(),
        )
    }

    /// Adds `(from, to)` to `R_agent`.
    pub fn add_access(&mut self, agent: Element, from: World, to: World) -> Result<(), ModelError> {
        if agent.sort != Sort::Agt || agent.index >= self.agents.len() {
            return Err(ModelError::Invalid(format!("{agent:?} is not an agent of the frame")));
        }
        if from.0 >= self.worlds.len() || to.0 >= self.worlds.len() {
            return Err(ModelError::Invalid("accessibility pair outside W".into()));
        }
        let succ = &mut self.access[agent.index][from.0];
        if let Err(pos) = succ.binary_search(&to.0) {
            succ.insert(pos, to.0);
        }
        Ok(())
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> {
        (0..self.worlds.len()).map(World)
    }

    pub fn agents(&self) -> impl Iterator<Item = Element> {
        (0..self.agents.len()).map(Element::agent)
    }

    pub fn objects(&self) -> impl Iterator<Item = Element> {
        (0..self.objects.len()).map(Element::object)
    }

    pub fn domain(&self, sort: Sort) -> Vec<Element> {
        match sort {
            Sort::Agt => self.agents().collect(),
            Sort::Obj => self.objects().collect(),
        }
    }

    /// `D_τ`; for `agtobj` the agents come first.
    pub fn domain_of(&self, tag: TypeTag) -> Vec<Element> {
        match tag.as_sort() {
            Some(sort) => self.domain(sort),
            None => self.agents().chain(self.objects()).collect(),
        }
    }

    pub fn contains(&self, e: Element) -> bool {
        match e.sort {
            Sort::Agt => e.index < self.agents.len(),
            Sort::Obj => e.index < self.objects.len(),
        }
    }

    /// `D_τ₁ × … × D_τₙ` in lexicographic order.
    pub fn tuples(&self, types: &[TypeTag]) -> Vec<Vec<Element>> {
        let mut out = vec![Vec::new()];
        for &tag in types {
            let dom = self.domain_of(tag);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    dom.iter().map(move |&e| {
                        let mut t = prefix.clone();
                        t.push(e);
                        t
                    })
                })
                .collect();
        }
        out
    }

    pub fn element_name(&self, e: Element) -> &str {
        match e.sort {
            Sort::Agt => &self.agents[e.index],
            Sort::Obj => &self.objects[e.index],
        }
    }

    pub fn element(&self, name: &str) -> Option<Element> {
        if let Some(i) = self.agents.iter().position(|a| a == name) {
            Some(Element::agent(i))
        } else {
            self.objects.iter().position(|o| o == name).map(Element::object)
        }
    }

    pub fn world_name(&self, w: World) -> &str {
        &self.worlds[w.0]
    }

    pub fn world(&self, name: &str) -> Option<World> {
        self.worlds.iter().position(|n| n == name).map(World)
    }

    /// Worlds `w'` with `(w, w') ∈ R_agent`.
    pub fn successors(&self, agent: Element, w: World) -> impl Iterator<Item = World> + '_ {
        debug_assert_eq!(agent.sort, Sort::Agt);
        self.access[agent.index][w.0].iter().map(|&i| World(i))
    }

    /// All pairs of `R_agent` in order.
    pub fn access_pairs(&self, agent: Element) -> Vec<(World, World)> {
        self.access[agent.index]
            .iter()
            .enumerate()
            .flat_map(|(from, succ)| succ.iter().map(move |&to| (World(from), World(to))))
            .collect()
    }

    pub fn render_tuple(&self, tuple: &[Element]) -> String {
        let names: Vec<&str> = tuple.iter().map(|&e| self.element_name(e)).collect();
        format!("({})", names.join(", "))
    }
}

/// A total function `D_τ₁ × … × D_τₙ → D_τ` stored as an explicit table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunTable {
    map: BTreeMap<Vec<Element>, Element>,
}

impl FunTable {
    /// Validates totality and sorts against `ty` over `frame`.
    pub fn new(
        name: &str,
        ty: &FunType,
        frame: &Frame,
        map: BTreeMap<Vec<Element>, Element>,
    ) -> Result<FunTable, ModelError> {
        let domain = frame.tuples(&ty.args);
        for args in &domain {
            match map.get(args) {
                None => {
                    return Err(ModelError::NotTotal {
                        symbol: name.to_string(),
                        detail: format!("no value at {}", frame.render_tuple(args)),
                    })
                }
                Some(v) if v.sort != ty.result || !frame.contains(*v) => {
                    return Err(ModelError::WrongSort {
                        symbol: name.to_string(),
                        detail: format!("value at {} must be of sort {}", frame.render_tuple(args), ty.result),
                    })
                }
                Some(_) => {}
            }
        }
        if map.len() != domain.len() {
            return Err(ModelError::WrongSort {
                symbol: name.to_string(),
                detail: "table has entries outside the function's domain".into(),
            });
        }
        Ok(FunTable { map })
    }

    /// Constant function with value `value`.
    pub fn constant(ty: &FunType, frame: &Frame, value: Element) -> FunTable {
        FunTable {
            map: frame.tuples(&ty.args).into_iter().map(|t| (t, value)).collect(),
        }
    }

    pub fn apply(&self, args: &[Element]) -> Option<Element> {
        self.map.get(args).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[Element], Element)> {
        self.map.iter().map(|(k, &v)| (k.as_slice(), v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_requires_nonempty_domains() {
        assert_eq!(Frame::numbered(0, 1, 1), Err(ModelError::EmptyDomain("agents")));
        assert_eq!(Frame::numbered(1, 0, 1), Err(ModelError::EmptyDomain("objects")));
        assert_eq!(Frame::numbered(1, 1, 0), Err(ModelError::EmptyDomain("worlds")));
        assert!(matches!(
            Frame::new(vec!["a".into()], vec!["a".into()], vec!["w".into()]),
            Err(ModelError::DuplicateName(_))
        ));
    }

    #[test]
    fn tuples_enumerate_typed_products() {
        let frame = Frame::numbered(2, 1, 1).unwrap();
        assert_eq!(frame.tuples(&[]), vec![Vec::<Element>::new()]);
        assert_eq!(frame.tuples(&[TypeTag::AgtObj]).len(), 3);
        let pairs = frame.tuples(&[TypeTag::Agt, TypeTag::Obj]);
        assert_eq!(
            pairs,
            vec![
                vec![Element::agent(0), Element::object(0)],
                vec![Element::agent(1), Element::object(0)]
            ]
        );
    }

    #[test]
    fn function_tables_must_be_total() {
        let frame = Frame::numbered(2, 1, 1).unwrap();
        let ty = FunType {
            args: vec![TypeTag::Agt],
            result: Sort::Obj,
        };
        let partial: BTreeMap<_, _> = [(vec![Element::agent(0)], Element::object(0))].into();
        assert!(matches!(
            FunTable::new("f", &ty, &frame, partial),
            Err(ModelError::NotTotal { .. })
        ));
        let wrong: BTreeMap<_, _> = frame
            .tuples(&ty.args)
            .into_iter()
            .map(|t| (t, Element::agent(0)))
            .collect();
        assert!(matches!(
            FunTable::new("f", &ty, &frame, wrong),
            Err(ModelError::WrongSort { .. })
        ));
    }
}
