//! Propositional tautology recognition.
//!
//! Maximal subformulas headed by an atom, `K` or `forall` become letters;
//! syntactically identical subformulas share a letter.

use std::fmt;

use thiserror::Error;

use crate::syntax::Formula;

pub const DEFAULT_ATOM_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Prop {
    Letter(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn eval(&self, assignment: &[bool]) -> bool {
        match self {
            Prop::Letter(i) => assignment[*i],
            Prop::Not(p) => !p.eval(assignment),
            Prop::And(a, b) => a.eval(assignment) && b.eval(assignment),
        }
    }

    fn eval_bits(&self, bits: u64) -> bool {
        match self {
            Prop::Letter(i) => bits >> i & 1 == 1,
            Prop::Not(p) => !p.eval_bits(bits),
            Prop::And(a, b) => a.eval_bits(bits) && b.eval_bits(bits),
        }
    }

    /// Largest letter index plus one.
    pub fn letter_bound(&self) -> usize {
        match self {
            Prop::Letter(i) => i + 1,
            Prop::Not(p) => p.letter_bound(),
            Prop::And(a, b) => a.letter_bound().max(b.letter_bound()),
        }
    }
}

/// `Prop` together with the formulas its letters stand for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub shape: Prop,
    pub letters: Vec<Formula>,
}

pub fn propositional_skeleton(phi: &Formula) -> Skeleton {
    let mut letters = Vec::new();
    let shape = abstract_formula(phi, &mut letters);
    Skeleton { shape, letters }
}

fn abstract_formula(phi: &Formula, letters: &mut Vec<Formula>) -> Prop {
    match phi {
        Formula::Neg(p) => Prop::Not(Box::new(abstract_formula(p, letters))),
        Formula::Conj(a, b) => {
            let a = abstract_formula(a, letters);
            Prop::And(Box::new(a), Box::new(abstract_formula(b, letters)))
        }
        _ => match letters.iter().position(|l| l == phi) {
            Some(i) => Prop::Letter(i),
            None => {
                letters.push(phi.clone());
                Prop::Letter(letters.len() - 1)
            }
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("skeleton has {found} letters, above the limit of {limit}")]
pub struct TooManyAtoms {
    pub found: usize,
    pub limit: usize,
}

/// Truth-table check of the skeleton of `phi`.
pub fn is_tautology(phi: &Formula) -> Result<bool, TooManyAtoms> {
    is_tautology_with_limit(phi, DEFAULT_ATOM_LIMIT)
}

pub fn is_tautology_with_limit(phi: &Formula, limit: usize) -> Result<bool, TooManyAtoms> {
    let sk = propositional_skeleton(phi);
    let n = sk.letters.len();
    if n > limit || n >= 64 {
        return Err(TooManyAtoms { found: n, limit });
    }
    Ok(prop_is_tautology(&sk.shape, n))
}

/// True under all `2ⁿ` assignments to letters `0..n`.
pub fn prop_is_tautology(p: &Prop, n: usize) -> bool {
    (0..1u64 << n).all(|bits| p.eval_bits(bits))
}

fn letter_name(i: usize) -> String {
    const NAMES: [&str; 6] = ["p", "q", "r", "s", "u", "v"];
    NAMES.get(i).map_or_else(|| format!("p{i}"), |s| s.to_string())
}

fn write_prop(f: &mut fmt::Formatter<'_>, p: &Prop, top: bool) -> fmt::Result {
    // ¬(a ∧ ¬b) prints as a → b
    if let Prop::Not(inner) = p {
        if let Prop::And(a, b) = inner.as_ref() {
            if let Prop::Not(b) = b.as_ref() {
                if !top {
                    f.write_str("(")?;
                }
                write_prop(f, a, false)?;
                f.write_str(" → ")?;
                write_prop(f, b, false)?;
                if !top {
                    f.write_str(")")?;
                }
                return Ok(());
            }
        }
    }
    match p {
        Prop::Letter(i) => f.write_str(&letter_name(*i)),
        Prop::Not(q) => {
            f.write_str("¬")?;
            write_prop(f, q, false)
        }
        Prop::And(a, b) => {
            if !top {
                f.write_str("(")?;
            }
            write_prop(f, a, false)?;
            f.write_str(" ∧ ")?;
            write_prop(f, b, false)?;
            if !top {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prop(f, self, true)
    }
}
