//! Satisfaction clauses shared by the standard and non-standard semantics.
//! The two differ only in how atoms are decided and how the index of `K[t]`
//! is evaluated.

use super::{Element, EvalError, Frame, Valuation, World};
use crate::syntax::{Formula, Rel, Signature, Term};

pub(crate) trait Semantics {
    fn signature(&self) -> &Signature;
    fn frame(&self) -> &Frame;
    fn holds_atom(&self, w: World, v: &Valuation, rel: &Rel, args: &[Term]) -> Result<bool, EvalError>;
    fn modal_index(&self, w: World, v: &Valuation, t: &Term) -> Result<Element, EvalError>;
}

pub(crate) fn satisfies<S: Semantics>(m: &S, w: World, v: &Valuation, phi: &Formula) -> Result<bool, EvalError> {
    if let Some(x) = v.covers(&phi.free_vars()) {
        return Err(EvalError::UnboundVariable(x.clone()));
    }
    if w.0 >= m.frame().world_count() {
        return Err(EvalError::UnknownWorld(w.0));
    }
    let mut v = v.clone();
    sat(m, w, &mut v, phi)
}

fn sat<S: Semantics>(m: &S, w: World, v: &mut Valuation, phi: &Formula) -> Result<bool, EvalError> {
    match phi {
        Formula::Atom(rel, args) => m.holds_atom(w, v, rel, args),
        Formula::Neg(p) => Ok(!sat(m, w, v, p)?),
        Formula::Conj(a, b) => Ok(sat(m, w, v, a)? && sat(m, w, v, b)?),
        Formula::Know(t, p) => {
            let agent = m.modal_index(w, v, t)?;
            for succ in m.frame().successors(agent, w) {
                if !sat(m, succ, v, p)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Forall(x, p) => {
            let sort = m
                .signature()
                .var_sort(x)
                .ok_or_else(|| EvalError::UnknownSymbol(x.clone()))?;
            let saved = v.get(x);
            let mut result = Ok(true);
            for d in m.frame().domain(sort) {
                v.insert(x.as_str(), d);
                match sat(m, w, v, p) {
                    Ok(true) => {}
                    other => {
                        result = other;
                        break;
                    }
                }
            }
            match saved {
                Some(d) => v.insert(x.as_str(), d),
                None => v.remove(x),
            };
            result
        }
    }
}

/// First `(world, valuation)` falsifying `phi`, scanning worlds in order and
/// valuations of its free variables in odometer order.
pub(crate) fn find_falsifier<S: Semantics>(m: &S, phi: &Formula) -> Result<Option<(World, Valuation)>, EvalError> {
    let valuations = super::all_valuations(m.signature(), m.frame(), &phi.free_vars());
    for w in m.frame().worlds() {
        for v in &valuations {
            if !sat(m, w, &mut v.clone(), phi)? {
                return Ok(Some((w, v.clone())));
            }
        }
    }
    Ok(None)
}
