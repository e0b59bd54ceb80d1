//! Fixed non-standard models used by the checks.

use super::{NonStandardModel, RelExtension};
use crate::semantics::{Element, Frame, ModelError, Valuation, World};
use crate::syntax::{parse_signature, Signature, Sort, TypeTag};

/// The model refuting `x = c → (P(x) → P(c))`.
///
/// `D_agt = {alpha, beta}`, `D_obj = {o}`, `W = {w}`, no accessibility,
/// `J(P, w) = {(alpha)}`, `J(c, w, diag) = alpha`, `J(c, w, {(alpha)}) = beta`,
/// default `J(c, w) = alpha` and `v(x) = alpha`. The returned model
/// interprets only `c` and `P` of `sig`.
pub fn build_prop3_countermodel(
    sig: &Signature,
    x: &str,
    c: &str,
    p: &str,
) -> Result<(NonStandardModel, World, Valuation), ModelError> {
    if sig.var_sort(x) != Some(Sort::Agt) {
        return Err(ModelError::Precondition(format!(
            "`{x}` must be a variable of type agt"
        )));
    }
    if sig.const_sort(c) != Some(Sort::Agt) {
        return Err(ModelError::Precondition(format!(
            "`{c}` must be a constant of type agt"
        )));
    }
    if sig.relation(p) != Some(&[TypeTag::AgtObj][..]) {
        return Err(ModelError::Precondition(format!(
            "`{p}` must be a relation of type ⟨agtobj⟩"
        )));
    }
    let sig = sig.retain_symbols(|name| name == c || name == p);
    let frame = Frame::new(vec!["alpha".into(), "beta".into()], vec!["o".into()], vec!["w".into()])?;
    let (alpha, beta, w) = (Element::agent(0), Element::agent(1), World(0));
    let j_p: RelExtension = [vec![alpha]].into_iter().collect();
    let diag = RelExtension::diag(&frame);
    let mut b = NonStandardModel::builder(sig, frame);
    b.relation(p, w, j_p.clone())
        .default_constant(c, w, alpha)
        .override_constant(c, w, diag, alpha)
        .override_constant(c, w, j_p, beta);
    let v: Valuation = [(x.to_string(), alpha)].into_iter().collect();
    Ok((b.build()?, w, v))
}

/// `const lewis : agt`, `rel SL : agt`, `rel CF : agt`.
pub fn lewis_signature() -> Signature {
    parse_signature("const lewis : agt\nrel SL : agt\nrel CF : agt").expect("fixed signature parses")
}

/// One name, two bearers: `lewis` denotes `ci_lewis` under `SL` and
/// `d_lewis` under `CF`.
pub fn build_lewis_example() -> (NonStandardModel, World) {
    let frame = Frame::new(
        vec!["ci_lewis".into(), "d_lewis".into()],
        vec!["o".into()],
        vec!["w".into()],
    )
    .expect("fixed frame");
    let (ci, d, w) = (Element::agent(0), Element::agent(1), World(0));
    let sl: RelExtension = [vec![ci]].into_iter().collect();
    let cf: RelExtension = [vec![d]].into_iter().collect();
    let mut b = NonStandardModel::builder(lewis_signature(), frame);
    b.relation("SL", w, sl.clone())
        .relation("CF", w, cf.clone())
        .default_constant("lewis", w, ci)
        .override_constant("lewis", w, sl, ci)
        .override_constant("lewis", w, cf, d);
    (b.build().expect("fixed model is well-formed"), w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonstandard::{extension_ns, j_lookup, satisfies_ns, JValue};
    use crate::syntax::{parse_formula, Term};

    fn sig() -> Signature {
        parse_signature("var x : agt\nvar y : obj\nconst c : agt\nconst d : agt\nrel P : agtobj\nrel Q : agt").unwrap()
    }

    #[test]
    fn keyed_model_refutes_the_leibniz_instance() {
        let sig = sig();
        let (n, w, v) = build_prop3_countermodel(&sig, "x", "c", "P").unwrap();
        let p = |s| parse_formula(&sig, s).unwrap();
        assert_eq!(satisfies_ns(&n, w, &v, &p("x = c")), Ok(true));
        assert_eq!(satisfies_ns(&n, w, &v, &p("P(x)")), Ok(true));
        assert_eq!(satisfies_ns(&n, w, &v, &p("P(c)")), Ok(false));
        assert_eq!(satisfies_ns(&n, w, &v, &p("x = c -> (P(x) -> P(c))")), Ok(false));
        let alpha = Element::agent(0);
        assert_eq!(j_lookup(&n, "c", w, n.diag()), Some(JValue::Element(alpha)));
        let j_p = n.relation("P", w).unwrap().clone();
        assert_eq!(
            extension_ns(&n, w, &v, &j_p, &Term::constant("c")),
            Ok(Element::agent(1))
        );
        assert!(n.signature().const_sort("d").is_none());
    }

    #[test]
    fn keyed_model_preconditions() {
        let sig = sig();
        assert!(matches!(
            build_prop3_countermodel(&sig, "y", "c", "P"),
            Err(ModelError::Precondition(_))
        ));
        assert!(matches!(
            build_prop3_countermodel(&sig, "x", "c", "Q"),
            Err(ModelError::Precondition(_))
        ));
        assert!(matches!(
            build_prop3_countermodel(&sig, "x", "e", "P"),
            Err(ModelError::Precondition(_))
        ));
    }

    #[test]
    fn lewis_example() {
        let (n, w) = build_lewis_example();
        let sig = lewis_signature();
        let v = Valuation::new();
        let p = |s| parse_formula(&sig, s).unwrap();
        assert_eq!(satisfies_ns(&n, w, &v, &p("SL(lewis)")), Ok(true));
        assert_eq!(satisfies_ns(&n, w, &v, &p("CF(lewis)")), Ok(true));
        let sl = n.relation("SL", w).unwrap().clone();
        assert_eq!(
            extension_ns(&n, w, &v, &sl, &Term::constant("lewis")),
            Ok(Element::agent(0))
        );
        let swapped = n.with_constant_override("lewis", w, sl, Element::agent(1)).unwrap();
        assert_eq!(satisfies_ns(&swapped, w, &v, &p("SL(lewis)")), Ok(false));
    }
}
