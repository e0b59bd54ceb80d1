use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tml::format::{no_includes, parse_model, write_nonstandard, write_standard, LoadedModel};
use tml::hilbert::{instantiate_axiom, is_tautology};
use tml::nonstandard::{falsifier_ns, lift_standard, satisfies_ns};
use tml::semantics::{falsifier_std, satisfies_std, Valuation, World};
use tml::suite::gen::{self, GenBounds, SCHEMAS};
use tml::syntax::{parse_formula, parse_signature, parse_term, substitute, Formula, Signature, Sort, Term};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small() -> GenBounds {
    GenBounds {
        max_formula_depth: 4,
        ..GenBounds::default()
    }
}

fn formula(r: &mut ChaCha8Rng, sig: &Signature) -> Formula {
    gen::random_formula(r, sig, 4, 2, &BTreeSet::new())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_then_parsing_is_identity(seed in any::<u64>()) {
        let sig = gen::fuzz_signature();
        let mut r = rng(seed);
        let phi = formula(&mut r, &sig);
        prop_assert_eq!(parse_formula(&sig, &phi.to_string()).unwrap(), phi);
        let t = gen::random_term(&mut r, &sig, Sort::Agt, 3);
        prop_assert_eq!(parse_term(&sig, &t.to_string()).unwrap(), t);
    }

    #[test]
    fn substitution_laws(seed in any::<u64>()) {
        let sig = gen::fuzz_signature();
        let mut r = rng(seed);
        let y = gen::random_variable(&mut r, &sig, Sort::Agt);
        let x = gen::random_variable(&mut r, &sig, Sort::Agt);
        let loose = formula(&mut r, &sig);
        let refused = substitute(&sig, &loose, &Term::var(y.clone()), &x).is_err();
        prop_assert_eq!(refused, loose.bound_vars().contains(&y));
        let phi = gen::random_formula(&mut r, &sig, 4, 2, &BTreeSet::from([x.clone(), y.clone()]));
        // x for x is the identity.
        prop_assert_eq!(substitute(&sig, &phi, &Term::var(x.clone()), &x).unwrap(), phi.clone());
        let out = substitute(&sig, &phi, &Term::var(y.clone()), &x).unwrap();
        let mut expected = phi.free_vars();
        if expected.remove(&x) {
            expected.insert(y.clone());
        } else {
            prop_assert_eq!(&out, &phi);
        }
        prop_assert_eq!(out.free_vars(), expected);
        prop_assert_eq!(out.depth(), phi.depth());
    }

    #[test]
    fn truth_depends_only_on_free_variables(seed in any::<u64>()) {
        let sig = gen::fuzz_signature();
        let mut r = rng(seed);
        let n = gen::random_nonstandard_model(&mut r, &sig, &small());
        let m = gen::random_standard_model(&mut r, &sig, &small());
        let phi = formula(&mut r, &sig);
        let fv = phi.free_vars();
        let rewire = |r: &mut ChaCha8Rng, v: &Valuation, frame| {
            let other = gen::random_valuation(r, &sig, frame);
            let mut out = Valuation::new();
            for (x, d) in other.iter() {
                out.insert(x, if fv.contains(x) { v.get(x).unwrap() } else { d });
            }
            out
        };
        let w = World(0);
        let v1 = gen::random_valuation(&mut r, &sig, n.frame());
        let v2 = rewire(&mut r, &v1, n.frame());
        prop_assert_eq!(satisfies_ns(&n, w, &v1, &phi).unwrap(), satisfies_ns(&n, w, &v2, &phi).unwrap());
        let u1 = gen::random_valuation(&mut r, &sig, m.frame());
        let u2 = rewire(&mut r, &u1, m.frame());
        prop_assert_eq!(satisfies_std(&m, w, &u1, &phi).unwrap(), satisfies_std(&m, w, &u2, &phi).unwrap());
    }

    #[test]
    fn lifting_preserves_truth(seed in any::<u64>()) {
        let sig = gen::fuzz_signature();
        let mut r = rng(seed);
        let m = gen::random_standard_model(&mut r, &sig, &small());
        let n = lift_standard(&m);
        let phi = formula(&mut r, &sig);
        let v = gen::random_valuation(&mut r, &sig, m.frame());
        for w in m.frame().worlds() {
            prop_assert_eq!(satisfies_std(&m, w, &v, &phi).unwrap(), satisfies_ns(&n, w, &v, &phi).unwrap());
        }
    }

    #[test]
    fn axiom_instances_hold_in_standard_models(seed in any::<u64>()) {
        let sig = gen::fuzz_signature();
        let mut r = rng(seed);
        let m = gen::random_standard_model(&mut r, &sig, &small());
        for s in &SCHEMAS[1..] {
            let j = gen::random_axiom(&mut r, &sig, s, &small());
            let phi = instantiate_axiom(&sig, &j).unwrap();
            prop_assert_eq!(falsifier_std(&m, &phi).unwrap(), None, "{}", phi);
        }
        let t = gen::random_tautology(&mut r, &sig, &small());
        prop_assert_eq!(falsifier_std(&m, &t).unwrap(), None, "{}", t);
    }

    #[test]
    fn model_files_round_trip(seed in any::<u64>()) {
        let sig = gen::fuzz_signature();
        let mut r = rng(seed);
        let n = gen::random_nonstandard_model(&mut r, &sig, &small());
        match parse_model(&write_nonstandard(&n), &no_includes).unwrap() {
            LoadedModel::NonStandard(back) => prop_assert_eq!(back, n),
            LoadedModel::Standard(_) => prop_assert!(false, "kind changed"),
        }
        let m = gen::random_standard_model(&mut r, &sig, &small());
        match parse_model(&write_standard(&m), &no_includes).unwrap() {
            LoadedModel::Standard(back) => prop_assert_eq!(back, m),
            LoadedModel::NonStandard(_) => prop_assert!(false, "kind changed"),
        }
    }

    #[test]
    fn falsifiers_really_falsify(seed in any::<u64>()) {
        let sig = gen::fuzz_signature();
        let mut r = rng(seed);
        let n = gen::random_nonstandard_model(&mut r, &sig, &small());
        let phi = formula(&mut r, &sig);
        match falsifier_ns(&n, &phi).unwrap() {
            Some((w, v)) => prop_assert!(!satisfies_ns(&n, w, &v, &phi).unwrap()),
            None => {
                for w in n.frame().worlds() {
                    let v = gen::random_valuation(&mut r, &sig, n.frame());
                    prop_assert!(satisfies_ns(&n, w, &v, &phi).unwrap());
                }
            }
        }
    }
}

/// Propositional shapes over a few fixed first-order formulas.
#[derive(Clone, Debug)]
enum Shape {
    Leaf(usize),
    Not(Box<Shape>),
    And(Box<Shape>, Box<Shape>),
    Imp(Box<Shape>, Box<Shape>),
}

fn shape() -> impl Strategy<Value = Shape> {
    (0usize..4).prop_map(Shape::Leaf).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Shape::Not(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Shape::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Shape::Imp(Box::new(a), Box::new(b))),
        ]
    })
}

const LEAVES: [&str; 4] = ["T", "P(c)", "K[c] T", "forall x. P(x)"];

fn realize(s: &Shape, leaves: &[Formula]) -> Formula {
    match s {
        Shape::Leaf(i) => leaves[*i].clone(),
        Shape::Not(a) => realize(a, leaves).not(),
        Shape::And(a, b) => realize(a, leaves).and(realize(b, leaves)),
        Shape::Imp(a, b) => realize(a, leaves).implies(realize(b, leaves)),
    }
}

/// Truth-table evaluation with every maximal non-Boolean subformula as a
/// letter.
fn truth_table_tautology(phi: &Formula) -> bool {
    fn letters(phi: &Formula, out: &mut Vec<Formula>) {
        match phi {
            Formula::Neg(a) => letters(a, out),
            Formula::Conj(a, b) => {
                letters(a, out);
                letters(b, out);
            }
            other => {
                if !out.contains(other) {
                    out.push(other.clone());
                }
            }
        }
    }
    fn eval(phi: &Formula, row: &BTreeMap<String, bool>) -> bool {
        match phi {
            Formula::Neg(a) => !eval(a, row),
            Formula::Conj(a, b) => eval(a, row) && eval(b, row),
            other => row[&other.to_string()],
        }
    }
    let mut ls = Vec::new();
    letters(phi, &mut ls);
    (0u32..1 << ls.len()).all(|bits| {
        let row = ls
            .iter()
            .enumerate()
            .map(|(i, l)| (l.to_string(), bits >> i & 1 == 1))
            .collect();
        eval(phi, &row)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn tautology_check_matches_truth_tables(s in shape()) {
        let sig = parse_signature("var x : agt\nconst c : agt\nrel P : agtobj\nrel T").unwrap();
        let leaves: Vec<Formula> = LEAVES.iter().map(|l| parse_formula(&sig, l).unwrap()).collect();
        let phi = realize(&s, &leaves);
        prop_assert_eq!(is_tautology(&phi).unwrap(), truth_table_tautology(&phi), "{}", phi);
    }
}

#[test]
fn tautology_oracle_knows_the_classics() {
    let sig = parse_signature("rel T\nrel U").unwrap();
    for (src, taut) in [
        ("T -> T", true),
        ("T -> (U -> T)", true),
        ("(T -> U) -> (U -> T)", false),
        ("!!T -> T", true),
        ("T | !T", true),
        ("T & U -> U", true),
        ("T -> T & U", false),
    ] {
        let phi = parse_formula(&sig, src).unwrap();
        assert_eq!(truth_table_tautology(&phi), taut, "{src}");
        assert_eq!(is_tautology(&phi).unwrap(), taut, "{src}");
    }
}
