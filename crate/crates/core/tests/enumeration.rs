//! Bounded search against a direct brute force over one-world models.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tml::semantics::{enumerate_countermodel, falsifier_std, Bounds, Element, Frame, StandardModel, World};
use tml::suite::gen;
use tml::syntax::{parse_signature, Signature};

fn sig() -> Signature {
    parse_signature("var x : agt\nvar u : obj\nconst c : agt\nrel P : agtobj\nrel Q : agt").unwrap()
}

/// Every model with one world, one object and `agents` agents.
fn all_models(sig: &Signature, agents: usize) -> Vec<StandardModel> {
    let mut out = Vec::new();
    let w = World(0);
    let elems = agents + 1;
    for access in 0u32..1 << agents {
        for c in 0..agents {
            for p in 0u32..1 << elems {
                for q in 0u32..1 << agents {
                    let mut frame = Frame::numbered(agents, 1, 1).unwrap();
                    for a in 0..agents {
                        if access >> a & 1 == 1 {
                            frame.add_access(Element::agent(a), w, w).unwrap();
                        }
                    }
                    let mut all: Vec<Element> = (0..agents).map(Element::agent).collect();
                    all.push(Element::object(0));
                    let pset: BTreeSet<Vec<Element>> =
                        (0..elems).filter(|i| p >> i & 1 == 1).map(|i| vec![all[i]]).collect();
                    let qset: BTreeSet<Vec<Element>> = (0..agents)
                        .filter(|i| q >> i & 1 == 1)
                        .map(|i| vec![Element::agent(i)])
                        .collect();
                    let mut b = StandardModel::builder(sig.clone(), frame);
                    b.constant("c", w, Element::agent(c))
                        .relation("P", w, pset)
                        .relation("Q", w, qset);
                    out.push(b.build().unwrap());
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn search_agrees_with_brute_force(seed in any::<u64>()) {
        let sig = sig();
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let phi = gen::random_formula(&mut r, &sig, 3, 0, &BTreeSet::new());
        let brute = (1..=2).any(|a| all_models(&sig, a).iter().any(|m| falsifier_std(m, &phi).unwrap().is_some()));
        let found = enumerate_countermodel(&sig, &phi, Bounds::new(2, 1, 1), 1_000_000).unwrap();
        prop_assert_eq!(found.countermodel.is_some(), brute, "{}", phi);
        if let Some(cm) = found.countermodel {
            prop_assert!(falsifier_std(&cm.model, &phi).unwrap().is_some());
        }
    }
}
