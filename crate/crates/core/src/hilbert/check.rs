use super::taut::{is_tautology_with_limit, DEFAULT_ATOM_LIMIT};
use super::{Justification, Proof, ProofError, Rejection};
use crate::syntax::{check_formula, substitute, type_of_term, Formula, Signature, Sort, Term};

/// Switches that weaken UE and PS to their unrestricted forms, where the
/// variable slots accept arbitrary terms. Only useful as mutation controls:
/// the weakened schemas are unsound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Relaxations {
    pub unrestricted_ue: bool,
    pub unrestricted_ps: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckerConfig {
    pub taut_atom_limit: usize,
    pub relax: Relaxations,
}

impl Default for CheckerConfig {
    fn default() -> Self {
        CheckerConfig {
            taut_atom_limit: DEFAULT_ATOM_LIMIT,
            relax: Relaxations::default(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Checker<'a> {
    sig: &'a Signature,
    config: CheckerConfig,
}

fn side(msg: impl Into<String>) -> Rejection {
    Rejection::SideConditionViolated(msg.into())
}

fn shape(msg: impl Into<String>) -> Rejection {
    Rejection::RuleShape(msg.into())
}

impl<'a> Checker<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        Checker::with_config(sig, CheckerConfig::default())
    }

    pub fn with_config(sig: &'a Signature, config: CheckerConfig) -> Self {
        Checker { sig, config }
    }

    pub fn config(&self) -> CheckerConfig {
        self.config
    }

    fn sort_of(&self, t: &Term) -> Result<Sort, Rejection> {
        type_of_term(self.sig, t).map_err(Rejection::IllFormed)
    }

    fn well_formed(&self, phi: &Formula) -> Result<(), Rejection> {
        check_formula(self.sig, phi).map_err(Rejection::IllFormed)
    }

    /// The name in a slot that must hold a variable.
    fn variable<'t>(&self, schema: &str, t: &'t Term) -> Result<&'t str, Rejection> {
        self.sort_of(t)?;
        match t {
            Term::Var(x) => Ok(x),
            Term::Const(_) => Err(side(format!(
                "{schema} instantiation must use variables; constants are not admissible"
            ))),
            Term::App(..) => Err(side(format!(
                "{schema} instantiation must use variables; `{t}` is a compound term"
            ))),
        }
    }

    /// A variable, or any term when `relaxed`.
    fn slot(&self, schema: &str, t: &Term, relaxed: bool) -> Result<(), Rejection> {
        if relaxed {
            self.sort_of(t).map(|_| ())
        } else {
            self.variable(schema, t).map(|_| ())
        }
    }

    fn agent_index(&self, schema: &str, t: &Term) -> Result<(), Rejection> {
        match self.sort_of(t)? {
            Sort::Agt => Ok(()),
            Sort::Obj => Err(side(format!("{schema} index `{t}` must have type agt"))),
        }
    }

    fn subst(&self, phi: &Formula, s: &Term, x: &str) -> Result<Formula, Rejection> {
        substitute(self.sig, phi, s, x).map_err(Rejection::Substitution)
    }

    /// The formula a schema justification stands for.
    pub fn instantiate(&self, j: &Justification) -> Result<Formula, Rejection> {
        match j {
            Justification::Ue { x, y, body } => {
                let xv = self.variable("UE", x)?;
                self.slot("UE", y, self.config.relax.unrestricted_ue)?;
                self.well_formed(body)?;
                let inst = self.subst(body, y, xv)?;
                Ok(Formula::forall(xv, body.clone()).implies(inst))
            }
            Justification::Id(t) => {
                self.sort_of(t)?;
                Ok(Formula::eq(t.clone(), t.clone()))
            }
            Justification::Ps { x, y, z, body } => {
                let relaxed = self.config.relax.unrestricted_ps;
                self.slot("PS", x, relaxed)?;
                self.slot("PS", y, relaxed)?;
                let zv = self.variable("PS", z)?;
                self.well_formed(body)?;
                let left = self.subst(body, x, zv)?;
                let right = self.subst(body, y, zv)?;
                Ok(Formula::eq(x.clone(), y.clone()).implies(left.implies(right)))
            }
            Justification::Eid { c, x } => {
                let cs = self.sort_of(c)?;
                if !matches!(c, Term::Const(_)) {
                    return Err(side(format!("EID needs a constant, found `{c}`")));
                }
                let xv = self.variable("EID", x)?;
                if self.sort_of(x)? != cs {
                    return Err(side(format!("EID needs type({x}) = type({c})")));
                }
                Ok(Formula::eq(c.clone(), c.clone()).implies(Formula::exists(xv, Formula::eq(x.clone(), c.clone()))))
            }
            Justification::Dd { x, y } => {
                self.variable("DD", x)?;
                self.variable("DD", y)?;
                if self.sort_of(x)? == self.sort_of(y)? {
                    return Err(side(format!("DD needs type({x}) ≠ type({y})")));
                }
                Ok(Formula::neq(x.clone(), y.clone()))
            }
            Justification::AxK {
                index,
                antecedent,
                consequent,
            } => {
                self.agent_index("K", index)?;
                self.well_formed(antecedent)?;
                self.well_formed(consequent)?;
                let k = |phi: Formula| Formula::know(index.clone(), phi);
                Ok(k(antecedent.clone().implies(consequent.clone()))
                    .implies(k(antecedent.clone()).implies(k(consequent.clone()))))
            }
            Justification::Barcan { x, index, body } => {
                let xv = self.variable("BARCAN", x)?;
                self.agent_index("BARCAN", index)?;
                if index.mentions_var(xv) {
                    return Err(side(format!("BARCAN variable `{xv}` occurs in the index `{index}`")));
                }
                self.well_formed(body)?;
                Ok(Formula::forall(xv, Formula::know(index.clone(), body.clone()))
                    .implies(Formula::know(index.clone(), Formula::forall(xv, body.clone()))))
            }
            Justification::Kni { x, y, index } => {
                self.variable("KNI", x)?;
                self.variable("KNI", y)?;
                self.agent_index("KNI", index)?;
                let neq = Formula::neq(x.clone(), y.clone());
                Ok(neq.clone().implies(Formula::know(index.clone(), neq)))
            }
            Justification::Taut | Justification::Mp { .. } | Justification::Kg { .. } | Justification::Ug { .. } => {
                Err(shape(format!("`{}` is not an axiom schema", j.keyword())))
            }
        }
    }

    fn earlier<'p>(&self, proof: &'p Proof, current: usize, n: usize) -> Result<&'p Formula, Rejection> {
        if n == 0 || n >= current {
            return Err(Rejection::BadReference { line: n });
        }
        Ok(&proof.line(n).ok_or(Rejection::BadReference { line: n })?.formula)
    }

    /// Checks line `n` (1-based) assuming nothing about the other lines
    /// beyond their formulas.
    pub fn check_line(&self, proof: &Proof, n: usize) -> Result<(), Rejection> {
        let line = proof.line(n).ok_or(Rejection::BadReference { line: n })?;
        let phi = &line.formula;
        self.well_formed(phi)?;
        match &line.justification {
            Justification::Taut => {
                if is_tautology_with_limit(phi, self.config.taut_atom_limit)? {
                    Ok(())
                } else {
                    Err(Rejection::NotATautology)
                }
            }
            Justification::Mp {
                implication,
                antecedent,
            } => {
                let imp = self.earlier(proof, n, *implication)?;
                let ante = self.earlier(proof, n, *antecedent)?;
                let (a, b) = imp
                    .as_implication()
                    .ok_or_else(|| shape(format!("line {implication} is not an implication")))?;
                if ante != a {
                    return Err(shape(format!(
                        "line {antecedent} is not the antecedent of line {implication}"
                    )));
                }
                if phi != b {
                    return Err(shape(format!("expected the consequent `{b}`")));
                }
                Ok(())
            }
            Justification::Kg { premise, index } => {
                let prem = self.earlier(proof, n, *premise)?;
                self.agent_index("KG", index)?;
                let expected = Formula::know(index.clone(), prem.clone());
                if *phi != expected {
                    return Err(shape(format!("expected `{expected}`")));
                }
                Ok(())
            }
            Justification::Ug { premise, x } => {
                let prem = self.earlier(proof, n, *premise)?;
                let xv = self.variable("UG", x)?;
                let (a, b) = prem
                    .as_implication()
                    .ok_or_else(|| shape(format!("line {premise} is not an implication")))?;
                if a.free_vars().contains(xv) {
                    return Err(side(format!("UG variable `{xv}` is free in the antecedent")));
                }
                let expected = a.clone().implies(Formula::forall(xv, b.clone()));
                if *phi != expected {
                    return Err(shape(format!("expected `{expected}`")));
                }
                Ok(())
            }
            j => {
                let expected = self.instantiate(j)?;
                if *phi != expected {
                    return Err(Rejection::SchemaMismatch { expected });
                }
                Ok(())
            }
        }
    }

    /// First failing line, if any.
    pub fn check(&self, proof: &Proof) -> Result<(), ProofError> {
        for n in 1..=proof.lines.len() {
            self.check_line(proof, n)
                .map_err(|reason| ProofError { line: n, reason })?;
        }
        Ok(())
    }

    /// One verdict per line.
    pub fn verdicts(&self, proof: &Proof) -> Vec<Result<(), Rejection>> {
        (1..=proof.lines.len()).map(|n| self.check_line(proof, n)).collect()
    }
}

/// Instantiates a schema with the default, sound side conditions.
pub fn instantiate_axiom(sig: &Signature, j: &Justification) -> Result<Formula, Rejection> {
    Checker::new(sig).instantiate(j)
}

pub fn check_proof(sig: &Signature, proof: &Proof) -> Result<(), ProofError> {
    Checker::new(sig).check(proof)
}
