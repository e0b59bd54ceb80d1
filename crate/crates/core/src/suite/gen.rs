//! Random signatures' inhabitants: frames, models, terms, formulas and
//! admissible axiom instances.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::hilbert::{prop_is_tautology, Justification, Prop};
use crate::nonstandard::{NonStandardModel, RelExtension};
use crate::semantics::{Element, Frame, StandardModel, Valuation, World};
use crate::syntax::{parse_signature, Formula, Signature, Sort, Term, TypeTag};

/// Size limits for sampled models and formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenBounds {
    pub max_agents: usize,
    pub max_objects: usize,
    pub max_worlds: usize,
    pub max_formula_depth: usize,
    pub max_term_depth: usize,
    pub max_overrides: usize,
}

impl Default for GenBounds {
    fn default() -> Self {
        GenBounds {
            max_agents: 3,
            max_objects: 2,
            max_worlds: 3,
            max_formula_depth: 5,
            max_term_depth: 2,
            max_overrides: 4,
        }
    }
}

/// Probability that an access edge is present.
pub const P_ACCESS: f64 = 0.4;
/// Probability that a tuple is in a relation extension.
pub const P_TUPLE: f64 = 0.5;
/// Probability that a formula node stops at an atom before the depth limit.
pub const P_ATOM: f64 = 0.3;
/// Probability that a term node is a function application (when allowed).
pub const P_APP: f64 = 0.35;

pub const FUZZ_SIGNATURE: &str = "\
var x : agt
var y : agt
var z : agt
var u : obj
var v : obj
const c : agt
const d : agt
const e : obj
fun f : agtobj -> agt
fun g : agt, obj -> obj
rel P : agtobj
rel Q : agt
rel R : agt, obj
rel S : obj
rel T
";

/// The signature all fuzzing runs over. It contains the shipped
/// `sig_basic.tms`.
pub fn fuzz_signature() -> Signature {
    parse_signature(FUZZ_SIGNATURE).expect("fixed signature parses")
}

pub fn pick<'a, T>(rng: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    xs.choose(rng).expect("non-empty choice")
}

fn random_sort(rng: &mut ChaCha8Rng) -> Sort {
    if rng.gen_bool(0.5) {
        Sort::Agt
    } else {
        Sort::Obj
    }
}

fn sort_for(rng: &mut ChaCha8Rng, tag: TypeTag) -> Sort {
    tag.as_sort().unwrap_or_else(|| random_sort(rng))
}

pub fn random_frame(rng: &mut ChaCha8Rng, b: &GenBounds) -> Frame {
    let na = rng.gen_range(1..=b.max_agents);
    let no = rng.gen_range(1..=b.max_objects);
    let nw = rng.gen_range(1..=b.max_worlds);
    let mut frame = Frame::numbered(na, no, nw).expect("bounds are positive");
    for a in 0..na {
        for from in 0..nw {
            for to in 0..nw {
                if rng.gen_bool(P_ACCESS) {
                    frame
                        .add_access(Element::agent(a), World(from), World(to))
                        .expect("elements are in the frame");
                }
            }
        }
    }
    frame
}

fn random_element(rng: &mut ChaCha8Rng, frame: &Frame, sort: Sort) -> Element {
    *pick(rng, &frame.domain(sort))
}

fn random_extension(rng: &mut ChaCha8Rng, frame: &Frame, types: &[TypeTag]) -> BTreeSet<Vec<Element>> {
    frame
        .tuples(types)
        .into_iter()
        .filter(|_| rng.gen_bool(P_TUPLE))
        .collect()
}

fn random_table(rng: &mut ChaCha8Rng, frame: &Frame, args: &[TypeTag], result: Sort) -> Vec<(Vec<Element>, Element)> {
    frame
        .tuples(args)
        .into_iter()
        .map(|t| (t, random_element(rng, frame, result)))
        .collect()
}

pub fn random_standard_model(rng: &mut ChaCha8Rng, sig: &Signature, b: &GenBounds) -> StandardModel {
    let frame = random_frame(rng, b);
    let mut builder = StandardModel::builder(sig.clone(), frame.clone());
    for w in frame.worlds() {
        for (c, sort) in sig.constants() {
            builder.constant(c, w, random_element(rng, &frame, sort));
        }
        for (f, ty) in sig.functions() {
            for (args, e) in random_table(rng, &frame, &ty.args, ty.result) {
                builder.function_entry(f, w, args, e);
            }
        }
        for (p, types) in sig.relations() {
            builder.relation(p, w, random_extension(rng, &frame, types));
        }
    }
    builder.build().expect("sampled standard model is valid")
}

/// A key for an override: `diag`, `empty`, the extension of some relation
/// at `w`, or a small random set of tuples.
fn random_key(
    rng: &mut ChaCha8Rng,
    frame: &Frame,
    sig: &Signature,
    relations: &BTreeMap<(String, World), RelExtension>,
    w: World,
) -> RelExtension {
    let roll: f64 = rng.gen();
    if roll < 0.2 {
        RelExtension::diag(frame)
    } else if roll < 0.35 {
        RelExtension::empty()
    } else if roll < 0.8 {
        let names: Vec<&str> = sig.relations().map(|(p, _)| p).collect();
        let p = *pick(rng, &names);
        relations[&(p.to_string(), w)].clone()
    } else {
        let arity = rng.gen_range(1..=2);
        let types = vec![TypeTag::AgtObj; arity];
        let all = frame.tuples(&types);
        let k = rng.gen_range(1..=2.min(all.len()));
        all.choose_multiple(rng, k).cloned().collect()
    }
}

pub fn random_nonstandard_model(rng: &mut ChaCha8Rng, sig: &Signature, b: &GenBounds) -> NonStandardModel {
    let frame = random_frame(rng, b);
    let mut builder = NonStandardModel::builder(sig.clone(), frame.clone());
    let mut relations = BTreeMap::new();
    for w in frame.worlds() {
        for (p, types) in sig.relations() {
            let ext = RelExtension::new(random_extension(rng, &frame, types));
            builder.relation(p, w, ext.clone());
            relations.insert((p.to_string(), w), ext);
        }
        for (c, sort) in sig.constants() {
            builder.default_constant(c, w, random_element(rng, &frame, sort));
        }
        for (f, ty) in sig.functions() {
            for (args, e) in random_table(rng, &frame, &ty.args, ty.result) {
                builder.default_function_entry(f, w, args, e);
            }
        }
    }
    let mut symbols: Vec<&str> = sig.constants().map(|(c, _)| c).collect();
    symbols.extend(sig.functions().map(|(f, _)| f));
    let n_overrides = rng.gen_range(0..=b.max_overrides);
    for _ in 0..n_overrides {
        let sym = *pick(rng, &symbols);
        let w = World(rng.gen_range(0..frame.world_count()));
        let key = random_key(rng, &frame, sig, &relations, w);
        if let Some(sort) = sig.const_sort(sym) {
            builder.override_constant(sym, w, key, random_element(rng, &frame, sort));
        } else {
            let ty = sig.function(sym).expect("symbol is a function").clone();
            for (args, e) in random_table(rng, &frame, &ty.args, ty.result) {
                builder.override_function_entry(sym, w, key.clone(), args, e);
            }
        }
    }
    builder.build().expect("sampled non-standard model is valid")
}

/// Whether some override value differs from the default it shadows.
pub fn has_effective_override(n: &NonStandardModel) -> bool {
    let sig = n.signature();
    n.frame().worlds().any(|w| {
        sig.constants().any(|(c, _)| {
            n.constant_overrides(c, w)
                .any(|(_, e)| Some(e) != n.default_constant(c, w))
        }) || sig.functions().any(|(f, _)| {
            n.function_overrides(f, w)
                .any(|(_, t)| Some(t) != n.default_function(f, w))
        })
    })
}

/// A valuation of every declared variable.
pub fn random_valuation(rng: &mut ChaCha8Rng, sig: &Signature, frame: &Frame) -> Valuation {
    sig.variables()
        .map(|(x, sort)| (x.to_string(), random_element(rng, frame, sort)))
        .collect()
}

pub fn variables_of(sig: &Signature, sort: Sort) -> Vec<String> {
    sig.variables()
        .filter(|&(_, s)| s == sort)
        .map(|(x, _)| x.to_string())
        .collect()
}

pub fn random_term(rng: &mut ChaCha8Rng, sig: &Signature, sort: Sort, depth: usize) -> Term {
    let funs: Vec<(&str, _)> = sig.functions().filter(|(_, ty)| ty.result == sort).collect();
    if depth > 0 && !funs.is_empty() && rng.gen_bool(P_APP) {
        let (f, ty) = *pick(rng, &funs);
        let args = ty
            .args
            .iter()
            .map(|&tag| {
                let s = sort_for(rng, tag);
                random_term(rng, sig, s, depth - 1)
            })
            .collect();
        return Term::app(f, args);
    }
    let consts: Vec<&str> = sig.constants().filter(|&(_, s)| s == sort).map(|(c, _)| c).collect();
    let vars = variables_of(sig, sort);
    if !consts.is_empty() && (vars.is_empty() || rng.gen_bool(0.4)) {
        Term::constant(*pick(rng, &consts))
    } else {
        Term::var(pick(rng, &vars).clone())
    }
}

/// A term of `sort` without constants or function symbols in it.
pub fn random_variable(rng: &mut ChaCha8Rng, sig: &Signature, sort: Sort) -> String {
    pick(rng, &variables_of(sig, sort)).clone()
}

pub fn random_atom(rng: &mut ChaCha8Rng, sig: &Signature, term_depth: usize) -> Formula {
    let rels: Vec<(&str, &[TypeTag])> = sig.relations().collect();
    if rels.is_empty() || rng.gen_bool(0.25) {
        let s = random_sort(rng);
        let t = random_sort(rng);
        return Formula::eq(
            random_term(rng, sig, s, term_depth),
            random_term(rng, sig, t, term_depth),
        );
    }
    let (p, types) = *pick(rng, &rels);
    let args = types
        .iter()
        .map(|&tag| {
            let s = sort_for(rng, tag);
            random_term(rng, sig, s, term_depth)
        })
        .collect();
    Formula::atom(p, args)
}

/// A random formula. Quantifiers only bind variables outside `no_bind`, so
/// substituting for those variables never needs renaming.
pub fn random_formula(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    depth: usize,
    term_depth: usize,
    no_bind: &BTreeSet<String>,
) -> Formula {
    if depth == 0 || rng.gen_bool(P_ATOM) {
        return random_atom(rng, sig, term_depth);
    }
    let binders: Vec<String> = sig
        .variables()
        .map(|(x, _)| x.to_string())
        .filter(|x| !no_bind.contains(x))
        .collect();
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, sig, depth - 1, term_depth, no_bind);
    match rng.gen_range(0..6) {
        0 => sub(rng).not(),
        1 => sub(rng).and(sub(rng)),
        2 => sub(rng).implies(sub(rng)),
        3 => {
            let t = random_term(rng, sig, Sort::Agt, term_depth);
            Formula::know(t, sub(rng))
        }
        _ if binders.is_empty() => sub(rng).not(),
        4 => Formula::forall(pick(rng, &binders).clone(), sub(rng)),
        _ => Formula::exists(pick(rng, &binders).clone(), sub(rng)),
    }
}

/// Names of the axiom schemas the soundness fuzzer exercises.
pub const SCHEMAS: [&str; 9] = ["TAUT", "UE", "ID", "PS", "EID", "DD", "K", "BARCAN", "KNI"];

/// A random justification for `schema` satisfying its side conditions.
/// `TAUT` is handled by [`random_tautology`].
pub fn random_axiom(rng: &mut ChaCha8Rng, sig: &Signature, schema: &str, b: &GenBounds) -> Justification {
    let fd = rng.gen_range(0..=b.max_formula_depth.saturating_sub(1));
    let td = b.max_term_depth;
    let sort = random_sort(rng);
    match schema {
        "UE" => {
            let x = random_variable(rng, sig, sort);
            let y = random_variable(rng, sig, sort);
            let body = random_formula(rng, sig, fd, td, &BTreeSet::from([y.clone()]));
            Justification::Ue {
                x: Term::var(x),
                y: Term::var(y),
                body,
            }
        }
        "ID" => Justification::Id(random_term(rng, sig, sort, td)),
        "PS" => {
            let x = random_variable(rng, sig, sort);
            let y = random_variable(rng, sig, sort);
            let z = random_variable(rng, sig, sort);
            let body = random_formula(rng, sig, fd, td, &BTreeSet::from([x.clone(), y.clone()]));
            Justification::Ps {
                x: Term::var(x),
                y: Term::var(y),
                z: Term::var(z),
                body,
            }
        }
        "EID" => {
            let consts: Vec<&str> = sig.constants().filter(|&(_, s)| s == sort).map(|(c, _)| c).collect();
            let c = *pick(rng, &consts);
            Justification::Eid {
                c: Term::constant(c),
                x: Term::var(random_variable(rng, sig, sort)),
            }
        }
        "DD" => {
            let a = Term::var(random_variable(rng, sig, Sort::Agt));
            let o = Term::var(random_variable(rng, sig, Sort::Obj));
            let (x, y) = if rng.gen_bool(0.5) { (a, o) } else { (o, a) };
            Justification::Dd { x, y }
        }
        "K" => Justification::AxK {
            index: random_term(rng, sig, Sort::Agt, td),
            antecedent: random_formula(rng, sig, fd, td, &BTreeSet::new()),
            consequent: random_formula(rng, sig, fd, td, &BTreeSet::new()),
        },
        "BARCAN" => {
            let x = random_variable(rng, sig, sort);
            let index = loop {
                let t = random_term(rng, sig, Sort::Agt, td);
                if !t.mentions_var(&x) {
                    break t;
                }
            };
            Justification::Barcan {
                x: Term::var(x),
                index,
                body: random_formula(rng, sig, fd, td, &BTreeSet::new()),
            }
        }
        "KNI" => {
            let s2 = random_sort(rng);
            Justification::Kni {
                x: Term::var(random_variable(rng, sig, sort)),
                y: Term::var(random_variable(rng, sig, s2)),
                index: random_term(rng, sig, Sort::Agt, td),
            }
        }
        other => panic!("no generator for schema {other}"),
    }
}

fn random_prop(rng: &mut ChaCha8Rng, letters: usize, depth: usize) -> Prop {
    if depth == 0 || rng.gen_bool(0.3) {
        return Prop::Letter(rng.gen_range(0..letters));
    }
    match rng.gen_range(0..3) {
        0 => Prop::Not(Box::new(random_prop(rng, letters, depth - 1))),
        1 => Prop::And(
            Box::new(random_prop(rng, letters, depth - 1)),
            Box::new(random_prop(rng, letters, depth - 1)),
        ),
        _ => {
            // a → b
            let a = random_prop(rng, letters, depth - 1);
            let b = random_prop(rng, letters, depth - 1);
            Prop::Not(Box::new(Prop::And(Box::new(a), Box::new(Prop::Not(Box::new(b))))))
        }
    }
}

fn realize(p: &Prop, fill: &[Formula]) -> Formula {
    match p {
        Prop::Letter(i) => fill[*i].clone(),
        Prop::Not(a) => realize(a, fill).not(),
        Prop::And(a, b) => realize(a, fill).and(realize(b, fill)),
    }
}

/// A substitution instance of a propositional tautology. The shape is found
/// by rejection sampling; `p → p` is the fallback.
pub fn random_tautology(rng: &mut ChaCha8Rng, sig: &Signature, b: &GenBounds) -> Formula {
    let letters = rng.gen_range(1..=3);
    let mut shape = None;
    for _ in 0..200 {
        let p = random_prop(rng, letters, 4);
        if prop_is_tautology(&p, letters) {
            shape = Some(p);
            break;
        }
    }
    let shape = shape.unwrap_or_else(|| {
        let p = Prop::Letter(0);
        Prop::Not(Box::new(Prop::And(
            Box::new(p.clone()),
            Box::new(Prop::Not(Box::new(p))),
        )))
    });
    let fd = b.max_formula_depth.saturating_sub(2);
    let fill: Vec<Formula> = (0..letters)
        .map(|_| random_formula(rng, sig, fd, b.max_term_depth, &BTreeSet::new()))
        .collect();
    realize(&shape, &fill)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{instantiate_axiom, is_tautology};
    use crate::syntax::check_formula;
    use rand::SeedableRng;

    #[test]
    fn generated_objects_are_well_formed() {
        let sig = fuzz_signature();
        let b = GenBounds::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let phi = random_formula(&mut rng, &sig, 5, 2, &BTreeSet::new());
            check_formula(&sig, &phi).unwrap();
            assert!(is_tautology(&random_tautology(&mut rng, &sig, &b)).unwrap());
            for s in &SCHEMAS[1..] {
                let j = random_axiom(&mut rng, &sig, s, &b);
                let inst = instantiate_axiom(&sig, &j).unwrap_or_else(|e| panic!("{s} {j}: {e}"));
                check_formula(&sig, &inst).unwrap();
            }
            random_nonstandard_model(&mut rng, &sig, &b);
            random_standard_model(&mut rng, &sig, &b);
        }
    }

    #[test]
    fn fuzz_signature_contains_the_shipped_one() {
        assert!(super::super::data::sig_basic().is_subsignature_of(&fuzz_signature()));
    }
}
