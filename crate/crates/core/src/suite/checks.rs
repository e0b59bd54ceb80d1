use crate::format::LoadedModel;
use crate::hilbert::{Checker, CheckerConfig};
use crate::nonstandard::{
    build_prop3_countermodel, extension_ns, falsifier_ns, satisfies_ns, NonStandardModel, RelExtension,
};
use crate::semantics::{enumerate_countermodel, Bounds, Valuation, World, DEFAULT_CEILING};
use crate::syntax::{parse_formula, Formula, Signature, Term};

use super::data::{self, Expected, SHIPPED_PROOFS};
use super::report::{Observation, Report, ReportItem, Witness, WitnessModel};

fn leibniz(x: &str, c: &str, p: &str) -> Formula {
    let (x, c) = (Term::var(x), Term::constant(c));
    Formula::eq(x.clone(), c.clone()).implies(Formula::atom(p, vec![x]).implies(Formula::atom(p, vec![c])))
}

pub(crate) fn leibniz_instance() -> Formula {
    leibniz("x", "c", "P")
}

/// Bounded standard validity: passes iff the search finds no countermodel.
pub fn bounded_validity(label: &str, sig: &Signature, phi: &Formula, bounds: Bounds, ceiling: u64) -> ReportItem {
    let claim = format!("no standard countermodel to {phi} with {bounds}");
    match enumerate_countermodel(sig, phi, bounds, ceiling) {
        Err(e) => ReportItem::new(label, claim, false).detail(format!("search failed: {e}")),
        Ok(outcome) => {
            let witness = outcome.countermodel.as_ref().map(|cm| {
                Witness::truth(
                    WitnessModel::Standard(cm.model.clone()),
                    cm.world,
                    cm.valuation.clone(),
                    phi.clone(),
                    false,
                )
            });
            ReportItem::new(label, claim, outcome.countermodel.is_none())
                .cases(outcome.models_checked)
                .detail(outcome.to_string())
                .witness(witness)
        }
    }
}

/// The Leibniz instance has no standard countermodel within `bounds`, while
/// the same search refutes the control `P(c)`.
pub fn verify_prop1_bounded(bounds: Bounds) -> Report {
    verify_prop1_bounded_with(bounds, DEFAULT_CEILING)
}

pub fn verify_prop1_bounded_with(bounds: Bounds, ceiling: u64) -> Report {
    let sig = data::sig_basic();
    let mut r = Report::new(format!("standard validity of x = c → (P(x) → P(c)), {bounds}"));
    r.notes
        .push("Bounded evidence only: every standard model within the bounds is checked, larger ones are not.".into());
    r.items.push(bounded_validity(
        "leibniz-bounded",
        &sig,
        &leibniz("x", "c", "P"),
        bounds,
        ceiling,
    ));
    let control = Formula::atom("P", vec![Term::constant("c")]);
    let mut refuted = bounded_validity("leibniz-control-pc", &sig, &control, bounds, ceiling);
    refuted.passed = refuted.witness.is_some();
    refuted.claim = format!("the same search refutes {control}");
    r.items.push(refuted);
    let trivial = Formula::eq(Term::constant("c"), Term::constant("c"));
    r.items
        .push(bounded_validity("leibniz-control-cc", &sig, &trivial, bounds, ceiling));
    r
}

fn truth_item(label: &str, n: &NonStandardModel, w: World, v: &Valuation, phi: &Formula, expected: bool) -> ReportItem {
    let verb = if expected { "holds" } else { "fails" };
    let claim = format!("{phi} {verb} at {}", n.frame().world_name(w));
    match satisfies_ns(n, w, v, phi) {
        Err(e) => ReportItem::new(label, claim, false).detail(format!("evaluation failed: {e}")),
        Ok(got) => ReportItem::new(label, claim, got == expected).witness(Some(Witness::truth(
            WitnessModel::NonStandard(n.clone()),
            w,
            v.clone(),
            phi.clone(),
            got,
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn denotation_item(
    label: &str,
    n: &NonStandardModel,
    w: World,
    v: &Valuation,
    t: &Term,
    key: &RelExtension,
    accept: impl Fn(crate::semantics::Element) -> bool,
    claim: String,
) -> ReportItem {
    match extension_ns(n, w, v, key, t) {
        Err(e) => ReportItem::new(label, claim, false).detail(format!("evaluation failed: {e}")),
        Ok(value) => ReportItem::new(label, claim, accept(value))
            .detail(format!("denotes {}", n.frame().element_name(value)))
            .witness(Some(Witness {
                model: WitnessModel::NonStandard(n.clone()),
                world: w,
                valuation: v.clone(),
                observed: Observation::Denotation {
                    term: t.clone(),
                    key: key.clone(),
                    value,
                },
            })),
    }
}

/// Checks that `(n, w, v)` falsifies `x = c → (P(x) → P(c))` for the reasons
/// expected: `c` denotes `v(x)` under the diagonal and something outside
/// `J(P, w)` under `J(P, w)`.
pub fn verify_prop3_on(n: &NonStandardModel, w: World, v: &Valuation, x: &str, c: &str, p: &str) -> Report {
    let frame = n.frame();
    let mut r = Report::new(format!(
        "non-standard countermodel to {x} = {c} → ({p}({x}) → {p}({c}))"
    ));
    let (xt, ct) = (Term::var(x), Term::constant(c));
    let Some(vx) = v.get(x) else {
        r.items.push(ReportItem::new(
            "keyed-valuation",
            format!("the valuation binds {x}"),
            false,
        ));
        return r;
    };
    let Some(jp) = n.relation(p, w).cloned() else {
        r.items
            .push(ReportItem::new("keyed-relation", format!("{p} is interpreted"), false));
        return r;
    };
    r.notes.push(format!(
        "v({x}) = {}, J({p}, {}) = {}",
        frame.element_name(vx),
        frame.world_name(w),
        jp.render(frame)
    ));
    let diag = n.diag().clone();
    r.items.push(denotation_item(
        "keyed-denotation-diag",
        n,
        w,
        v,
        &ct,
        &diag,
        |e| e == vx,
        format!("{c} under diag denotes {}", frame.element_name(vx)),
    ));
    r.items.push(denotation_item(
        "keyed-denotation-jp",
        n,
        w,
        v,
        &ct,
        &jp,
        |e| !jp.contains(&[e]),
        format!("{c} under J({p}) denotes something outside J({p})"),
    ));
    r.items.push(truth_item(
        "keyed-antecedent",
        n,
        w,
        v,
        &Formula::eq(xt.clone(), ct.clone()),
        true,
    ));
    r.items
        .push(truth_item("keyed-px", n, w, v, &Formula::atom(p, vec![xt]), true));
    r.items
        .push(truth_item("keyed-pc", n, w, v, &Formula::atom(p, vec![ct]), false));
    r.items
        .push(truth_item("keyed-instance", n, w, v, &leibniz(x, c, p), false));
    let plain = n.without_overrides();
    let mut control = truth_item("keyed-control-no-overrides", &plain, w, v, &leibniz(x, c, p), true);
    control.claim = format!("with the overrides removed, {}", control.claim);
    r.items.push(control);
    r
}

/// [`verify_prop3_on`] for the constructed countermodel.
pub fn verify_prop3() -> Report {
    match build_prop3_countermodel(&data::sig_basic(), "x", "c", "P") {
        Ok((n, w, v)) => verify_prop3_on(&n, w, &v, "x", "c", "P"),
        Err(e) => {
            let mut r = Report::new("non-standard countermodel to x = c → (P(x) → P(c))");
            r.items.push(
                ReportItem::new("keyed-construction", "the countermodel can be built", false).detail(e.to_string()),
            );
            r
        }
    }
}

fn nonstandard(m: LoadedModel) -> NonStandardModel {
    match m {
        LoadedModel::NonStandard(n) => n,
        LoadedModel::Standard(_) => panic!("shipped Lewis models are non-standard"),
    }
}

/// `SL(lewis) ∧ CF(lewis)` holds in the shipped model because `lewis` picks
/// a different bearer under each predicate; swapping one override breaks it.
pub fn verify_lewis() -> Report {
    let n = nonstandard(data::model(data::LEWIS_TMN));
    let swapped = nonstandard(data::model(data::LEWIS_SWAPPED_TMN));
    let w = World(0);
    let v = Valuation::new();
    let sig = n.signature().clone();
    let f = |s: &str| parse_formula(&sig, s).expect("fixed formula parses");
    let mut r = Report::new("one name, two bearers");
    r.items.push(truth_item("lewis-sl", &n, w, &v, &f("SL(lewis)"), true));
    r.items.push(truth_item("lewis-cf", &n, w, &v, &f("CF(lewis)"), true));
    r.items
        .push(truth_item("lewis-both", &n, w, &v, &f("SL(lewis) & CF(lewis)"), true));
    let lewis = Term::constant("lewis");
    let (sl, cf) = (n.relation("SL", w).cloned(), n.relation("CF", w).cloned());
    if let (Some(sl), Some(cf)) = (sl, cf) {
        let under_sl = extension_ns(&n, w, &v, &sl, &lewis).ok();
        r.items.push(denotation_item(
            "lewis-two-bearers",
            &n,
            w,
            &v,
            &lewis,
            &cf,
            |e| under_sl.is_some_and(|s| s != e),
            "lewis denotes different agents under SL and CF".into(),
        ));
    }
    r.items
        .push(truth_item("lewis-swapped-sl", &swapped, w, &v, &f("SL(lewis)"), false));
    r
}

/// Runs the checker over the shipped proofs: the sound ones are accepted and
/// each bogus one is rejected at the expected line for the expected reason.
/// An accepted bogus proof fails with its conclusion falsified in the
/// non-standard countermodel.
pub fn verify_proof_rejections(config: CheckerConfig) -> Report {
    let mut r = Report::new("proof checking");
    let counter = build_prop3_countermodel(&data::sig_basic(), "x", "c", "P").ok();
    for shipped in SHIPPED_PROOFS {
        let pf = data::proof(shipped.text);
        let stem = shipped.name.trim_end_matches(".tmp").replace('_', "-");
        let label = format!("proof-{stem}");
        let got = Checker::with_config(&pf.sig, config).check(&pf.proof);
        let item = match (shipped.expected, &got) {
            (Expected::Accepted, Ok(())) => ReportItem::new(label, format!("{} is accepted", shipped.name), true),
            (Expected::Accepted, Err(e)) => {
                ReportItem::new(label, format!("{} is accepted", shipped.name), false).detail(e.to_string())
            }
            (Expected::Rejected { line, kind }, Err(e)) => ReportItem::new(
                label,
                format!("{} is rejected at line {line} ({kind})", shipped.name),
                e.line == line && e.reason.kind() == kind,
            )
            .detail(format!("checker: {e}")),
            (Expected::Rejected { line, kind }, Ok(())) => {
                let mut item = ReportItem::new(
                    label,
                    format!("{} is rejected at line {line} ({kind})", shipped.name),
                    false,
                )
                .detail("checker accepted the proof");
                if let (Some((n, _, _)), Some(concl)) = (&counter, pf.proof.conclusion()) {
                    if let Ok(Some((w, v))) = falsifier_ns(n, concl) {
                        item = item
                            .detail("its conclusion is false in the non-standard countermodel")
                            .witness(Some(Witness::truth(
                                WitnessModel::NonStandard(n.clone()),
                                w,
                                v,
                                concl.clone(),
                                false,
                            )));
                    }
                }
                item
            }
        };
        r.items.push(item);
    }
    r
}
