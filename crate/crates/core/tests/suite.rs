use tml::format::LoadedModel;
use tml::hilbert::{CheckerConfig, Relaxations};
use tml::nonstandard::{build_prop3_countermodel, lift_standard, satisfies_ns, RelExtension};
use tml::semantics::{satisfies_std, Bounds, Element, StandardModel, Valuation, World};
use tml::suite::{
    self, data, demonstrate_incompleteness, demonstrate_incompleteness_with, fuzz_agreement, fuzz_soundness,
    fuzz_soundness_with, fuzz_substitution_lemmas, verify_prop1_bounded, verify_prop3, verify_prop3_on, FuzzConfig,
    IncompletenessConfig, Mutation, Report,
};
use tml::syntax::{parse_formula, substitute, Term};

fn assert_witnesses_recheck(r: &Report) {
    for item in r.all_items() {
        if let Some(w) = &item.witness {
            assert_eq!(w.recheck(), Ok(true), "{}", item.label);
        }
        if !item.passed {
            assert!(item.witness.is_some() || !item.details.is_empty(), "{}", item.label);
        }
    }
}

/// Models over `c`, `P : agtobj` with `a` agents, `o` objects and `w` worlds:
/// a value of `c` per world and a subset of `D_agt ∪ D_obj` per world.
fn leibniz_model_count(max_a: u32, max_o: u32, max_w: u32) -> u64 {
    let mut total = 0u64;
    for a in 1..=max_a {
        for o in 1..=max_o {
            for w in 1..=max_w {
                total += (a as u64).pow(w) * 2u64.pow((a + o) * w);
            }
        }
    }
    total
}

#[test]
fn leibniz_bounded_sweeps_every_model() {
    let r = verify_prop1_bounded(Bounds::new(2, 1, 2));
    assert!(r.passed(), "{}", r.render_text(true));
    let item = r.item("leibniz-bounded").unwrap();
    assert_eq!(item.cases, leibniz_model_count(2, 1, 2));
    assert!(item.witness.is_none());
    let control = r.item("leibniz-control-pc").unwrap();
    assert!(control.passed);
    let w = control.witness.as_ref().expect("control countermodel");
    assert_eq!(w.recheck(), Ok(true));
    // c = c: only the interpretations of c vary.
    assert_eq!(r.item("leibniz-control-cc").unwrap().cases, 1 + 1 + 2 + 4);
}

#[test]
fn leibniz_bounded_on_the_smallest_class_still_passes() {
    let r = verify_prop1_bounded(Bounds::new(1, 1, 1));
    assert!(r.passed());
    assert_eq!(r.item("leibniz-bounded").unwrap().cases, leibniz_model_count(1, 1, 1));
}

#[test]
fn leibniz_bounded_reports_a_ceiling_breach_as_failure() {
    let r = suite::verify_prop1_bounded_with(Bounds::new(3, 3, 3), 10);
    let item = r.item("leibniz-bounded").unwrap();
    assert!(!item.passed);
    assert!(item.details[0].contains("ceiling"), "{:?}", item.details);
}

#[test]
fn keyed_countermodel_values_are_exact() {
    let r = verify_prop3();
    assert!(r.passed(), "{}", r.render_text(true));
    assert_eq!(r.item("keyed-denotation-diag").unwrap().details, vec!["denotes alpha"]);
    assert_eq!(r.item("keyed-denotation-jp").unwrap().details, vec!["denotes beta"]);
    assert_witnesses_recheck(&r);

    let (n, w, v) = build_prop3_countermodel(&data::sig_basic(), "x", "c", "P").unwrap();
    let (alpha, beta) = (Element::agent(0), Element::agent(1));
    let jp: RelExtension = [vec![alpha]].into_iter().collect();
    let c = Term::constant("c");
    assert_eq!(tml::nonstandard::extension_ns(&n, w, &v, n.diag(), &c), Ok(alpha));
    assert_eq!(tml::nonstandard::extension_ns(&n, w, &v, &jp, &c), Ok(beta));
    assert_eq!(
        tml::nonstandard::extension_ns(&n, w, &v, &jp, &Term::var("x")),
        Ok(alpha)
    );
}

#[test]
fn keyed_countermodel_without_its_override_fails_the_check() {
    let (n, w, v) = build_prop3_countermodel(&data::sig_basic(), "x", "c", "P").unwrap();
    let r = verify_prop3_on(&n.without_overrides(), w, &v, "x", "c", "P");
    assert!(!r.passed());
    let failed: Vec<&str> = r.failures().iter().map(|i| i.label.as_str()).collect();
    assert!(failed.contains(&"keyed-instance"), "{failed:?}");
    assert!(failed.contains(&"keyed-pc"), "{failed:?}");
    assert_witnesses_recheck(&r);
}

#[test]
fn lifted_standard_counterpart_satisfies_the_instance() {
    let (n, w, v) = build_prop3_countermodel(&data::sig_basic(), "x", "c", "P").unwrap();
    let sig = n.signature().clone();
    let mut b = StandardModel::builder(sig.clone(), n.frame().clone());
    b.constant("c", w, n.default_constant("c", w).unwrap());
    b.relation("P", w, n.relation("P", w).unwrap().as_set().clone());
    let m = b.build().unwrap();
    let phi = parse_formula(&sig, "x = c -> (P(x) -> P(c))").unwrap();
    assert_eq!(satisfies_std(&m, w, &v, &phi), Ok(true));
    assert_eq!(satisfies_ns(&lift_standard(&m), w, &v, &phi), Ok(true));
}

#[test]
fn shipped_keyed_model_is_the_constructed_one() {
    let (n, _, _) = build_prop3_countermodel(&data::sig_basic(), "x", "c", "P").unwrap();
    let LoadedModel::NonStandard(file) = data::model(data::PROP3_TMN) else {
        panic!("prop3.tmn is non-standard")
    };
    assert_eq!(file.frame(), n.frame());
    let w = World(0);
    assert_eq!(file.relation("P", w), n.relation("P", w));
    assert_eq!(file.default_constant("c", w), n.default_constant("c", w));
    let a: Vec<_> = file.constant_overrides("c", w).collect();
    let b: Vec<_> = n.constant_overrides("c", w).collect();
    assert_eq!(a, b);
}

#[test]
fn soundness_fuzz_passes_with_coverage() {
    let r = fuzz_soundness(FuzzConfig::default());
    assert!(r.passed(), "{}", r.render_text(false));
    let cov = r.item("generator-coverage").unwrap();
    assert!(cov.passed);
    for label in [
        "sound-ue",
        "sound-id",
        "sound-ps",
        "sound-eid",
        "sound-dd",
        "sound-k",
        "sound-barcan",
        "sound-kni",
        "sound-taut",
    ] {
        let item = r.item(label).unwrap_or_else(|| panic!("{label}"));
        assert!(item.cases >= 50, "{label}: {}", item.cases);
    }
}

#[test]
fn mutation_controls_are_caught() {
    for m in [Mutation::UnrestrictedUe, Mutation::PseudoAxiom] {
        let r = fuzz_soundness_with(FuzzConfig::default(), &[m]);
        assert!(!r.passed(), "{m:?} went unnoticed");
        let failures = r.failures();
        assert_eq!(failures.len(), 1, "{m:?}");
        assert!(failures[0].label.starts_with("mutation-"));
        let w = failures[0].witness.as_ref().expect("violation witness");
        assert_eq!(w.recheck(), Ok(true));
    }
}

#[test]
fn substitution_lemmas_and_agreement_hold() {
    let r = fuzz_substitution_lemmas(FuzzConfig::with_seed(2, 1000));
    assert!(r.passed(), "{}", r.render_text(false));
    assert_eq!(r.all_items().len(), 4);
    assert!(r.all_items().iter().all(|i| i.cases == 1000));
    let a = fuzz_agreement(FuzzConfig::with_seed(3, 500));
    assert!(a.passed());
    assert_eq!(a.item("agreement").unwrap().cases, 500);
}

#[test]
fn substitution_edge_cases() {
    let sig = suite::gen::fuzz_signature();
    let (n, w, _) = build_prop3_countermodel(&data::sig_basic(), "x", "c", "P").unwrap();
    let v: Valuation = [
        ("x".to_string(), Element::agent(0)),
        ("y".to_string(), Element::agent(1)),
    ]
    .into_iter()
    .collect();
    // t = x: both sides are v(y).
    let t = Term::var("x");
    let ts = tml::syntax::substitute_term(&sig, &t, &Term::var("y"), "x").unwrap();
    let lhs = tml::nonstandard::extension_ns(&n, w, &v, n.diag(), &ts).unwrap();
    let rhs = tml::nonstandard::extension_ns(&n, w, &v.updated("x", Element::agent(1)), n.diag(), &t).unwrap();
    assert_eq!((lhs, rhs), (Element::agent(1), Element::agent(1)));
    // Substituting for a bound variable changes nothing.
    let phi = parse_formula(&sig, "forall x. P(x) -> P(c)").unwrap();
    assert_eq!(substitute(&sig, &phi, &Term::var("y"), "x").unwrap(), phi);
}

#[test]
fn incompleteness_report_has_four_passing_parts() {
    let r = demonstrate_incompleteness();
    assert!(r.passed(), "{}", r.render_text(false));
    assert_eq!(r.children.len(), 4);
    assert!(r.notes.iter().any(|n| n.contains("incomplete")));
}

#[test]
fn relaxed_side_conditions_break_part_c() {
    for relax in [
        Relaxations {
            unrestricted_ps: true,
            unrestricted_ue: false,
        },
        Relaxations {
            unrestricted_ps: false,
            unrestricted_ue: true,
        },
    ] {
        let cfg = IncompletenessConfig {
            checker: CheckerConfig {
                relax,
                ..CheckerConfig::default()
            },
            fuzz: FuzzConfig::with_seed(1, 50),
            ..IncompletenessConfig::default()
        };
        let r = demonstrate_incompleteness_with(cfg);
        assert!(!r.passed());
        assert!(r.children[0].passed() && r.children[1].passed() && r.children[3].passed());
        let bad = r.children[2].failures();
        assert_eq!(bad.len(), 1, "{relax:?}");
        let w = bad[0]
            .witness
            .as_ref()
            .expect("accepted bogus proof comes with a countermodel");
        assert_eq!(w.recheck(), Ok(true));
    }
}

#[test]
fn reports_are_reproducible() {
    let cfg = FuzzConfig::with_seed(9, 200);
    let runs: Vec<(String, String)> = (0..2)
        .map(|_| {
            let r = fuzz_soundness_with(cfg, &[Mutation::PseudoAxiom, Mutation::UnrestrictedUe]);
            (r.render_records(), r.render_text(true))
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(
        fuzz_substitution_lemmas(cfg).render_text(true),
        fuzz_substitution_lemmas(cfg).render_text(true)
    );
    let other = fuzz_soundness_with(FuzzConfig::with_seed(10, 200), &[Mutation::PseudoAxiom]);
    assert_ne!(other.render_text(true), runs[0].1);
}

#[test]
fn invalid_config_fails_cleanly() {
    let mut cfg = FuzzConfig::default();
    cfg.bounds.max_worlds = 0;
    let r = fuzz_soundness(cfg);
    assert!(!r.passed());
    assert_eq!(r.all_items()[0].label, "fuzz-config");
}

#[test]
fn lewis_example() {
    let r = suite::verify_lewis();
    assert!(r.passed(), "{}", r.render_text(true));
    assert_witnesses_recheck(&r);
}
