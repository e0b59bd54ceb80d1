//! Substitution of a term for a variable.
//!
//! There is no α-renaming. A substitution whose term mentions a variable that
//! is bound anywhere in the target formula is refused with
//! [`SyntaxError::CaptureRisk`].

use super::{type_of_term, Formula, Signature, SyntaxError, Term};

fn check_sorts(sig: &Signature, s: &Term, x: &str) -> Result<(), SyntaxError> {
    let var_sort = sig
        .var_sort(x)
        .ok_or_else(|| SyntaxError::NotAVariable(x.to_string()))?;
    let term = type_of_term(sig, s)?;
    if term != var_sort {
        return Err(SyntaxError::TypeMismatch {
            var: x.to_string(),
            var_sort,
            term,
        });
    }
    Ok(())
}

/// `t(s/x)`.
pub fn substitute_term(sig: &Signature, t: &Term, s: &Term, x: &str) -> Result<Term, SyntaxError> {
    check_sorts(sig, s, x)?;
    Ok(replace_in_term(t, s, x))
}

/// `φ(s/x)`, with `(K[t] ψ)(s/x) = K[t(s/x)] ψ(s/x)` and binders of `x` left alone.
pub fn substitute(sig: &Signature, phi: &Formula, s: &Term, x: &str) -> Result<Formula, SyntaxError> {
    check_sorts(sig, s, x)?;
    let bound = phi.bound_vars();
    if let Some(v) = s.vars().into_iter().find(|v| bound.contains(v)) {
        return Err(SyntaxError::CaptureRisk(v));
    }
    Ok(replace(phi, s, x))
}

pub(crate) fn replace_in_term(t: &Term, s: &Term, x: &str) -> Term {
    match t {
        Term::Var(y) if y == x => s.clone(),
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| replace_in_term(a, s, x)).collect()),
    }
}

pub(crate) fn replace(phi: &Formula, s: &Term, x: &str) -> Formula {
    match phi {
        Formula::Atom(rel, args) => Formula::Atom(rel.clone(), args.iter().map(|t| replace_in_term(t, s, x)).collect()),
        Formula::Neg(p) => replace(p, s, x).not(),
        Formula::Conj(a, b) => replace(a, s, x).and(replace(b, s, x)),
        Formula::Know(t, p) => Formula::know(replace_in_term(t, s, x), replace(p, s, x)),
        Formula::Forall(y, _) if y == x => phi.clone(),
        Formula::Forall(y, p) => Formula::forall(y.clone(), replace(p, s, x)),
    }
}
