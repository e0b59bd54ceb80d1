//! Bounded search for standard countermodels.
//!
//! Frames are visited with the world count outermost, then the agent count,
//! then the object count. Within a frame the interpretation is an odometer
//! whose digits are, from most to least significant: accessibility bits
//! (agent, from, to), constants (name, world), function table entries
//! (name, world, argument tuple) and relation membership bits
//! (name, world, tuple). The last digit turns fastest, so the first hit is
//! reproducible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::{eval, satisfies_std, Element, Frame, FunTable, StandardModel, Valuation, World};
use crate::syntax::{Formula, Signature, Sort};

/// Default limit on the number of models a search may visit.
pub const DEFAULT_CEILING: u64 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_agents: usize,
    pub max_objects: usize,
    pub max_worlds: usize,
}

impl Bounds {
    pub fn new(max_agents: usize, max_objects: usize, max_worlds: usize) -> Bounds {
        Bounds {
            max_agents,
            max_objects,
            max_worlds,
        }
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "agents ≤ {}, objects ≤ {}, worlds ≤ {}",
            self.max_agents, self.max_objects, self.max_worlds
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("every bound must be at least 1")]
    InvalidBounds,
    #[error("about {estimate} models to check, above the ceiling of {ceiling}")]
    BoundsTooLarge { estimate: u128, ceiling: u64 },
    #[error(transparent)]
    Eval(#[from] super::EvalError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub model: StandardModel,
    pub world: World,
    pub valuation: Valuation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub countermodel: Option<Countermodel>,
    pub models_checked: u64,
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.countermodel {
            None => write!(
                f,
                "no countermodel within bounds ({} models checked)",
                self.models_checked
            ),
            Some(cm) => {
                let frame = cm.model.frame();
                write!(
                    f,
                    "countermodel found at world {} with valuation [{}] after {} models",
                    frame.world_name(cm.world),
                    cm.valuation.render(frame),
                    self.models_checked
                )
            }
        }
    }
}

/// One digit of the odometer.
#[derive(Clone, Debug)]
enum Slot {
    Access {
        agent: usize,
        from: usize,
        to: usize,
    },
    Constant {
        name: String,
        world: usize,
        sort: Sort,
    },
    FunEntry {
        name: String,
        world: usize,
        args: Vec<Element>,
        sort: Sort,
    },
    RelBit {
        name: String,
        world: usize,
        tuple: Vec<Element>,
    },
}

fn slots(sig: &Signature, frame: &Frame, modal: bool) -> Vec<Slot> {
    let (na, nw) = (frame.agent_count(), frame.world_count());
    let mut out = Vec::new();
    if modal {
        for agent in 0..na {
            for from in 0..nw {
                for to in 0..nw {
                    out.push(Slot::Access { agent, from, to });
                }
            }
        }
    }
    for (name, sort) in sig.constants() {
        for world in 0..nw {
            out.push(Slot::Constant {
                name: name.to_string(),
                world,
                sort,
            });
        }
    }
    for (name, ty) in sig.functions() {
        for world in 0..nw {
            for args in frame.tuples(&ty.args) {
                out.push(Slot::FunEntry {
                    name: name.to_string(),
                    world,
                    args,
                    sort: ty.result,
                });
            }
        }
    }
    for (name, types) in sig.relations() {
        for world in 0..nw {
            for tuple in frame.tuples(types) {
                out.push(Slot::RelBit {
                    name: name.to_string(),
                    world,
                    tuple,
                });
            }
        }
    }
    out
}

fn radix(slot: &Slot, frame: &Frame) -> usize {
    match slot {
        Slot::Access { .. } | Slot::RelBit { .. } => 2,
        Slot::Constant { sort, .. } | Slot::FunEntry { sort, .. } => frame.domain(*sort).len(),
    }
}

fn shapes(bounds: Bounds) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..=bounds.max_worlds)
        .flat_map(move |w| (1..=bounds.max_agents).flat_map(move |a| (1..=bounds.max_objects).map(move |o| (a, o, w))))
}

/// Number of models the search would visit, saturating.
pub fn estimate_models(sig: &Signature, phi: &Formula, bounds: Bounds) -> u128 {
    let sig = sig.restricted_to(phi);
    let modal = phi.has_modality();
    let mut total: u128 = 0;
    for (a, o, w) in shapes(bounds) {
        let Ok(frame) = Frame::numbered(a, o, w) else { continue };
        let count = slots(&sig, &frame, modal)
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(radix(s, &frame) as u128));
        total = total.saturating_add(count);
    }
    total
}

fn decode(sig: &Signature, frame: &Frame, slots: &[Slot], digits: &[usize]) -> StandardModel {
    let mut frame = frame.clone();
    let mut constants: BTreeMap<String, Vec<Element>> = BTreeMap::new();
    let mut tables: BTreeMap<String, Vec<BTreeMap<Vec<Element>, Element>>> = BTreeMap::new();
    let mut relations: BTreeMap<String, Vec<BTreeSet<Vec<Element>>>> = BTreeMap::new();
    let nw = frame.world_count();
    for (name, _) in sig.constants() {
        constants.insert(name.to_string(), vec![Element::agent(0); nw]);
    }
    for (name, _) in sig.functions() {
        tables.insert(name.to_string(), vec![BTreeMap::new(); nw]);
    }
    for (name, _) in sig.relations() {
        relations.insert(name.to_string(), vec![BTreeSet::new(); nw]);
    }
    for (slot, &d) in slots.iter().zip(digits) {
        match slot {
            Slot::Access { agent, from, to } => {
                if d == 1 {
                    frame
                        .add_access(Element::agent(*agent), World(*from), World(*to))
                        .expect("slot within frame");
                }
            }
            Slot::Constant { name, world, sort } => {
                constants.get_mut(name).unwrap()[*world] = Element { sort: *sort, index: d };
            }
            Slot::FunEntry {
                name,
                world,
                args,
                sort,
            } => {
                tables.get_mut(name).unwrap()[*world].insert(args.clone(), Element { sort: *sort, index: d });
            }
            Slot::RelBit { name, world, tuple } => {
                if d == 1 {
                    relations.get_mut(name).unwrap()[*world].insert(tuple.clone());
                }
            }
        }
    }
    let mut functions = BTreeMap::new();
    for (name, ty) in sig.functions() {
        let per_world = tables
            .remove(name)
            .unwrap()
            .into_iter()
            .map(|map| FunTable::new(name, ty, &frame, map).expect("odometer fills every entry"))
            .collect();
        functions.insert(name.to_string(), per_world);
    }
    StandardModel {
        sig: sig.clone(),
        frame,
        constants,
        functions,
        relations,
    }
}

/// Advances `digits`; false once every combination has been produced.
fn advance(digits: &mut [usize], radices: &[usize]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radices[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Searches every standard model within `bounds` that interprets the symbols
/// of `phi`, returning the first falsifying model, world and valuation.
pub fn enumerate_countermodel(
    sig: &Signature,
    phi: &Formula,
    bounds: Bounds,
    ceiling: u64,
) -> Result<SearchOutcome, EnumError> {
    if bounds.max_agents == 0 || bounds.max_objects == 0 || bounds.max_worlds == 0 {
        return Err(EnumError::InvalidBounds);
    }
    let estimate = estimate_models(sig, phi, bounds);
    if estimate > ceiling as u128 {
        return Err(EnumError::BoundsTooLarge { estimate, ceiling });
    }
    let sig = sig.restricted_to(phi);
    let modal = phi.has_modality();
    let mut checked = 0u64;
    for (a, o, w) in shapes(bounds) {
        let frame = Frame::numbered(a, o, w).expect("bounds are positive");
        let slots = slots(&sig, &frame, modal);
        let radices: Vec<usize> = slots.iter().map(|s| radix(s, &frame)).collect();
        let mut digits = vec![0; slots.len()];
        loop {
            let model = decode(&sig, &frame, &slots, &digits);
            checked += 1;
            if let Some((world, valuation)) = eval::find_falsifier(&model, phi)? {
                // never report a model that does not falsify
                if !satisfies_std(&model, world, &valuation, phi)? {
                    return Ok(SearchOutcome {
                        countermodel: Some(Countermodel {
                            model,
                            world,
                            valuation,
                        }),
                        models_checked: checked,
                    });
                }
            }
            if !advance(&mut digits, &radices) {
                break;
            }
        }
    }
    Ok(SearchOutcome {
        countermodel: None,
        models_checked: checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_signature};

    fn sig() -> Signature {
        parse_signature("var x : agt\nconst c : agt\nrel P : agtobj").unwrap()
    }

    #[test]
    fn leibniz_instance_has_no_small_countermodel() {
        let sig = sig();
        let phi = parse_formula(&sig, "x = c -> (P(x) -> P(c))").unwrap();
        let out = enumerate_countermodel(&sig, &phi, Bounds::new(2, 1, 2), DEFAULT_CEILING).unwrap();
        assert!(out.countermodel.is_none());
        assert_eq!(
            out.models_checked as u128,
            estimate_models(&sig, &phi, Bounds::new(2, 1, 2))
        );
        assert!(out.to_string().starts_with("no countermodel within bounds"));
    }

    #[test]
    fn atom_with_empty_extension_is_refuted() {
        let sig = sig();
        let phi = parse_formula(&sig, "P(c)").unwrap();
        let out = enumerate_countermodel(&sig, &phi, Bounds::new(1, 1, 1), DEFAULT_CEILING).unwrap();
        let cm = out.countermodel.unwrap();
        assert!(cm.model.relation("P", World(0)).unwrap().is_empty());
        assert_eq!(out.models_checked, 1);
    }

    #[test]
    fn reflexivity_fails_without_self_loops() {
        let sig = sig();
        let phi = parse_formula(&sig, "K[x] P(c) -> P(c)").unwrap();
        let cm = enumerate_countermodel(&sig, &phi, Bounds::new(1, 1, 2), DEFAULT_CEILING)
            .unwrap()
            .countermodel
            .unwrap();
        let m = &cm.model;
        let agent = cm.valuation.get("x").unwrap();
        assert!(!m.frame().successors(agent, cm.world).any(|s| s == cm.world));
        assert!(!satisfies_std(m, cm.world, &cm.valuation, &phi).unwrap());
    }

    #[test]
    fn ceiling_guards_blowup() {
        let sig = parse_signature("var x : agt\nrel P : agtobj, agtobj, agtobj").unwrap();
        let phi = parse_formula(&sig, "K[x] P(x, x, x)").unwrap();
        assert!(matches!(
            enumerate_countermodel(&sig, &phi, Bounds::new(3, 3, 3), DEFAULT_CEILING),
            Err(EnumError::BoundsTooLarge { .. })
        ));
        assert_eq!(
            enumerate_countermodel(&sig, &phi, Bounds::new(0, 1, 1), DEFAULT_CEILING),
            Err(EnumError::InvalidBounds)
        );
    }
}
