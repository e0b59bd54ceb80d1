//! The Hilbert system for the minimal normal term-modal logic.
//!
//! Axioms: propositional tautologies, UE, ID, PS, EID, DD, K, BARCAN, KNI.
//! Rules: MP, KG, UG. Proofs name the instantiation of every schema line, so
//! checking a line is a structural comparison after substitution.

mod check;
mod taut;

use std::fmt;

use thiserror::Error;

pub use check::{check_proof, instantiate_axiom, Checker, CheckerConfig, Relaxations};
pub use taut::{
    is_tautology, is_tautology_with_limit, prop_is_tautology, propositional_skeleton, Prop, Skeleton, TooManyAtoms,
    DEFAULT_ATOM_LIMIT,
};

use crate::syntax::{Formula, SyntaxError, Term};

/// Why a line is in a proof. Variable and constant slots hold terms so that
/// a misuse (a constant where a variable is required) can be reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Taut,
    /// `∀x φ → φ(y/x)`.
    Ue {
        x: Term,
        y: Term,
        body: Formula,
    },
    /// `t = t`.
    Id(Term),
    /// `x = y → (φ(x/z) → φ(y/z))`.
    Ps {
        x: Term,
        y: Term,
        z: Term,
        body: Formula,
    },
    /// `c = c → ∃x (x = c)`.
    Eid {
        c: Term,
        x: Term,
    },
    /// `x ≠ y` for variables of different sorts.
    Dd {
        x: Term,
        y: Term,
    },
    /// `K_t(φ → ψ) → (K_t φ → K_t ψ)`.
    AxK {
        index: Term,
        antecedent: Formula,
        consequent: Formula,
    },
    /// `∀x K_t φ → K_t ∀x φ`, `x` not in `t`.
    Barcan {
        x: Term,
        index: Term,
        body: Formula,
    },
    /// `x ≠ y → K_t x ≠ y`.
    Kni {
        x: Term,
        y: Term,
        index: Term,
    },
    Mp {
        implication: usize,
        antecedent: usize,
    },
    Kg {
        premise: usize,
        index: Term,
    },
    Ug {
        premise: usize,
        x: Term,
    },
}

impl Justification {
    /// Lowercase keyword used in proof files.
    pub fn keyword(&self) -> &'static str {
        match self {
            Justification::Taut => "taut",
            Justification::Ue { .. } => "ue",
            Justification::Id(_) => "id",
            Justification::Ps { .. } => "ps",
            Justification::Eid { .. } => "eid",
            Justification::Dd { .. } => "dd",
            Justification::AxK { .. } => "k",
            Justification::Barcan { .. } => "barcan",
            Justification::Kni { .. } => "kni",
            Justification::Mp { .. } => "mp",
            Justification::Kg { .. } => "kg",
            Justification::Ug { .. } => "ug",
        }
    }

    pub fn is_rule(&self) -> bool {
        matches!(
            self,
            Justification::Mp { .. } | Justification::Kg { .. } | Justification::Ug { .. }
        )
    }

    /// Earlier lines this one depends on.
    pub fn references(&self) -> Vec<usize> {
        match self {
            Justification::Mp {
                implication,
                antecedent,
            } => vec![*implication, *antecedent],
            Justification::Kg { premise, .. } | Justification::Ug { premise, .. } => vec![*premise],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kw = self.keyword();
        match self {
            Justification::Taut => f.write_str(kw),
            Justification::Ue { x, y, body } => write!(f, "{kw}({x}, {y}, {body})"),
            Justification::Id(t) => write!(f, "{kw}({t})"),
            Justification::Ps { x, y, z, body } => write!(f, "{kw}({x}, {y}, {z}, {body})"),
            Justification::Eid { c, x } => write!(f, "{kw}({c}, {x})"),
            Justification::Dd { x, y } => write!(f, "{kw}({x}, {y})"),
            Justification::AxK {
                index,
                antecedent,
                consequent,
            } => write!(f, "{kw}({index}, {antecedent}, {consequent})"),
            Justification::Barcan { x, index, body } => write!(f, "{kw}({x}, {index}, {body})"),
            Justification::Kni { x, y, index } => write!(f, "{kw}({x}, {y}, {index})"),
            Justification::Mp {
                implication,
                antecedent,
            } => write!(f, "{kw}({implication}, {antecedent})"),
            Justification::Kg { premise, index } => write!(f, "{kw}({premise}, {index})"),
            Justification::Ug { premise, x } => write!(f, "{kw}({premise}, {x})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

/// Lines are numbered from 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn new() -> Proof {
        Proof::default()
    }

    pub fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.lines.push(ProofLine { formula, justification });
        self.lines.len()
    }

    pub fn line(&self, n: usize) -> Option<&ProofLine> {
        n.checked_sub(1).and_then(|i| self.lines.get(i))
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("not a tautology")]
    NotATautology,
    #[error(transparent)]
    TooManyAtoms(#[from] TooManyAtoms),
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
    #[error("substitution failed: {0}")]
    Substitution(SyntaxError),
    #[error("formula does not match the schema instance `{expected}`")]
    SchemaMismatch { expected: Formula },
    #[error("line {line} is not an earlier line")]
    BadReference { line: usize },
    #[error("rule does not apply: {0}")]
    RuleShape(String),
    #[error("ill-formed: {0}")]
    IllFormed(SyntaxError),
}

impl Rejection {
    pub fn kind(&self) -> &'static str {
        match self {
            Rejection::NotATautology => "NotATautology",
            Rejection::TooManyAtoms(_) => "TooManyAtoms",
            Rejection::SideConditionViolated(_) => "SideConditionViolated",
            Rejection::Substitution(_) => "Substitution",
            Rejection::SchemaMismatch { .. } => "SchemaMismatch",
            Rejection::BadReference { .. } => "BadReference",
            Rejection::RuleShape(_) => "RuleShape",
            Rejection::IllFormed(_) => "IllFormed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct ProofError {
    pub line: usize,
    pub reason: Rejection,
}
