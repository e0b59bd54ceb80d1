//! Concrete-syntax printing. Output re-parses to the identical tree.
//!
//! Implications, `!=` and `exists` are recovered from their expansions so that
//! printed formulas stay readable.

use std::fmt;

use super::{type_of_term, Formula, Rel, Signature, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) | Term::Const(x) => f.write_str(x),
            Term::App(name, args) => {
                f.write_str(name)?;
                write_args(f, args)
            }
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

// Printing contexts, loosest first.
const TOP: u8 = 0;
const IMP_RIGHT: u8 = 1;
const IMP_LEFT: u8 = 2;
const AND_LEFT: u8 = 3;
const AND_RIGHT: u8 = 4;
const OPERAND: u8 = 5;

fn write_formula(f: &mut fmt::Formatter<'_>, phi: &Formula, ctx: u8) -> fmt::Result {
    let open = |f: &mut fmt::Formatter<'_>, wrap: bool| if wrap { f.write_str("(") } else { Ok(()) };
    let close = |f: &mut fmt::Formatter<'_>, wrap: bool| if wrap { f.write_str(")") } else { Ok(()) };

    if let Some((a, b)) = phi.as_implication() {
        let wrap = ctx > IMP_RIGHT;
        open(f, wrap)?;
        write_formula(f, a, IMP_LEFT)?;
        f.write_str(" -> ")?;
        write_formula(f, b, IMP_RIGHT)?;
        return close(f, wrap);
    }
    match phi {
        Formula::Neg(inner) => match inner.as_ref() {
            Formula::Forall(x, body) if matches!(body.as_ref(), Formula::Neg(_)) => {
                let Formula::Neg(body) = body.as_ref() else {
                    unreachable!()
                };
                let wrap = ctx > TOP;
                open(f, wrap)?;
                write!(f, "exists {x}. ")?;
                write_formula(f, body, TOP)?;
                close(f, wrap)
            }
            Formula::Atom(Rel::Eq, args) if args.len() == 2 => {
                let wrap = ctx == OPERAND;
                open(f, wrap)?;
                write!(f, "{} != {}", args[0], args[1])?;
                close(f, wrap)
            }
            _ => {
                f.write_str("!")?;
                write_formula(f, inner, OPERAND)
            }
        },
        Formula::Conj(a, b) => {
            let wrap = ctx > AND_LEFT;
            open(f, wrap)?;
            write_formula(f, a, AND_LEFT)?;
            f.write_str(" & ")?;
            write_formula(f, b, AND_RIGHT)?;
            close(f, wrap)
        }
        Formula::Know(t, body) => {
            write!(f, "K[{t}] ")?;
            write_formula(f, body, OPERAND)
        }
        Formula::Forall(x, body) => {
            let wrap = ctx > TOP;
            open(f, wrap)?;
            write!(f, "forall {x}. ")?;
            write_formula(f, body, TOP)?;
            close(f, wrap)
        }
        Formula::Atom(Rel::Eq, args) if args.len() == 2 => {
            let wrap = ctx == OPERAND;
            open(f, wrap)?;
            write!(f, "{} = {}", args[0], args[1])?;
            close(f, wrap)
        }
        Formula::Atom(Rel::Eq, args) => {
            // Only reachable for hand-built atoms with the wrong arity.
            f.write_str("=")?;
            write_args(f, args)
        }
        Formula::Atom(Rel::Named(p), args) => {
            f.write_str(p)?;
            write_args(f, args)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, TOP)
    }
}

/// Indented rendering of the core syntax tree with the sort of every term.
pub struct TypedTree<'a> {
    pub sig: &'a Signature,
    pub formula: &'a Formula,
}

impl TypedTree<'_> {
    fn term(&self, f: &mut fmt::Formatter<'_>, t: &Term, indent: usize) -> fmt::Result {
        let sort = type_of_term(self.sig, t).map_err(|_| fmt::Error)?;
        let kind = match t {
            Term::Var(_) => "var",
            Term::Const(_) => "const",
            Term::App(..) => "app",
        };
        let name = match t {
            Term::Var(x) | Term::Const(x) | Term::App(x, _) => x,
        };
        writeln!(f, "{:indent$}{kind} {name} : {sort}", "")?;
        if let Term::App(_, args) = t {
            for a in args {
                self.term(f, a, indent + 2)?;
            }
        }
        Ok(())
    }

    fn node(&self, f: &mut fmt::Formatter<'_>, phi: &Formula, indent: usize) -> fmt::Result {
        match phi {
            Formula::Atom(rel, args) => {
                let name = match rel {
                    Rel::Eq => "=",
                    Rel::Named(p) => p,
                };
                writeln!(f, "{:indent$}Atom {name}", "")?;
                for a in args {
                    self.term(f, a, indent + 2)?;
                }
                Ok(())
            }
            Formula::Neg(p) => {
                writeln!(f, "{:indent$}Neg", "")?;
                self.node(f, p, indent + 2)
            }
            Formula::Conj(a, b) => {
                writeln!(f, "{:indent$}Conj", "")?;
                self.node(f, a, indent + 2)?;
                self.node(f, b, indent + 2)
            }
            Formula::Know(t, p) => {
                writeln!(f, "{:indent$}Know", "")?;
                self.term(f, t, indent + 2)?;
                self.node(f, p, indent + 2)
            }
            Formula::Forall(x, p) => {
                let sort = self.sig.var_sort(x).ok_or(fmt::Error)?;
                writeln!(f, "{:indent$}Forall {x} : {sort}", "")?;
                self.node(f, p, indent + 2)
            }
        }
    }
}

impl fmt::Display for TypedTree<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.node(f, self.formula, 0)
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse_formula, parse_signature};

    #[test]
    fn printing_recovers_sugar() {
        let sig =
            parse_signature("var x : agt\nvar y : agt\nconst c : agt\nrel P : agtobj\nfun f : agt -> agt").unwrap();
        for (src, printed) in [
            ("x = c -> (P(x) -> P(c))", "x = c -> P(x) -> P(c)"),
            ("(P(x) -> P(c)) -> P(x)", "(P(x) -> P(c)) -> P(x)"),
            ("c = c -> exists x. x = c", "c = c -> (exists x. x = c)"),
            ("x != y -> K[f(c)] x != y", "x != y -> K[f(c)] (x != y)"),
            ("!(P(x) & P(c)) & P(y)", "!(P(x) & P(c)) & P(y)"),
            ("P(x) & (P(y) & P(c))", "P(x) & (P(y) & P(c))"),
            ("(forall x. P(x)) & P(c)", "(forall x. P(x)) & P(c)"),
            ("!!(x = c)", "!(x != c)"),
        ] {
            let phi = parse_formula(&sig, src).unwrap();
            assert_eq!(phi.to_string(), printed, "{src}");
            assert_eq!(parse_formula(&sig, &phi.to_string()).unwrap(), phi);
        }
    }

    #[test]
    fn typed_tree() {
        let sig = parse_signature("var x : agt\nconst c : agt\nrel P : agtobj").unwrap();
        let phi = parse_formula(&sig, "K[c] P(x)").unwrap();
        let tree = super::TypedTree {
            sig: &sig,
            formula: &phi,
        }
        .to_string();
        assert_eq!(tree, "Know\n  const c : agt\n  Atom P\n    var x : agt\n");
    }
}
