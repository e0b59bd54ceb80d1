use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hilbert::{is_tautology, Checker, CheckerConfig, Justification, Relaxations};
use crate::nonstandard::{extension_ns, falsifier_ns, lift_standard, satisfies_ns, NonStandardModel, RelExtension};
use crate::semantics::{extension_std, satisfies_std, StandardModel, Valuation, World};
use crate::syntax::{substitute, substitute_term, Formula, Signature, Sort, Term, TypeTag};

use super::data::{self, Expected, SHIPPED_PROOFS};
use super::gen::{self, GenBounds, SCHEMAS};
use super::report::{Observation, Report, ReportItem, Witness, WitnessModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub samples: usize,
    pub bounds: GenBounds,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 1,
            samples: 1000,
            bounds: GenBounds::default(),
        }
    }
}

impl FuzzConfig {
    pub fn with_seed(seed: u64, samples: usize) -> FuzzConfig {
        FuzzConfig {
            seed,
            samples,
            ..FuzzConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let b = &self.bounds;
        let all = [
            b.max_agents,
            b.max_objects,
            b.max_worlds,
            b.max_formula_depth,
            b.max_term_depth,
            b.max_overrides,
        ];
        if self.samples == 0 || all.contains(&0) {
            return Err("samples and every bound must be at least 1".into());
        }
        Ok(())
    }

    /// The generator for sample `i`: independent of every other sample, so
    /// results do not depend on evaluation order.
    fn rng(&self, salt: u64, i: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(salt << 32 | i as u64);
        rng
    }

    fn header(&self) -> Vec<String> {
        let b = &self.bounds;
        vec![
            format!("seed {}, samples {}", self.seed, self.samples),
            format!(
                "bounds: agents ≤ {}, objects ≤ {}, worlds ≤ {}, formula depth ≤ {}, term depth ≤ {}, overrides ≤ {}",
                b.max_agents, b.max_objects, b.max_worlds, b.max_formula_depth, b.max_term_depth, b.max_overrides
            ),
            format!(
                "generator: access edge {}, tuple {}, early atom {}, function application {}",
                gen::P_ACCESS,
                gen::P_TUPLE,
                gen::P_ATOM,
                gen::P_APP
            ),
        ]
    }
}

/// Deliberately unsound additions, used to check that the fuzzer can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// UE with a constant or compound term in place of the variable.
    UnrestrictedUe,
    /// `x = c → (P(x) → P(c))` taken as an axiom.
    PseudoAxiom,
}

impl Mutation {
    fn label(self) -> &'static str {
        match self {
            Mutation::UnrestrictedUe => "mutation-unrestricted-ue",
            Mutation::PseudoAxiom => "mutation-pseudo-axiom",
        }
    }

    fn claim(self) -> &'static str {
        match self {
            Mutation::UnrestrictedUe => "UE instantiated with non-variable terms holds in every sample",
            Mutation::PseudoAxiom => "x = c → (P(x) → P(c)) holds in every sample",
        }
    }
}

/// Counts cases and keeps the first violation.
#[derive(Default)]
struct Tally {
    cases: u64,
    violations: u64,
    first: Option<Witness>,
    errors: Vec<String>,
}

impl Tally {
    fn record_ns(&mut self, n: &NonStandardModel, phi: &Formula) {
        self.cases += 1;
        match falsifier_ns(n, phi) {
            Ok(None) => {}
            Ok(Some((w, v))) => {
                self.violations += 1;
                if self.first.is_none() {
                    self.first = Some(Witness::truth(
                        WitnessModel::NonStandard(n.clone()),
                        w,
                        v,
                        phi.clone(),
                        false,
                    ));
                }
            }
            Err(e) => self.error(format!("{phi}: {e}")),
        }
    }

    fn mismatch(&mut self, w: impl FnOnce() -> Witness) {
        self.violations += 1;
        if self.first.is_none() {
            self.first = Some(w());
        }
    }

    fn error(&mut self, e: String) {
        self.violations += 1;
        if self.errors.len() < 3 {
            self.errors.push(e);
        }
    }

    fn item(self, label: &str, claim: impl Into<String>, seed: u64) -> ReportItem {
        let mut item = ReportItem::new(label, claim, self.violations == 0)
            .cases(self.cases)
            .seed(seed)
            .detail(format!("{} violation(s) in {} case(s)", self.violations, self.cases))
            .witness(self.first);
        for e in self.errors {
            item = item.detail(e);
        }
        item
    }
}

/// An atom with the variable `x` (of `sort`) in some argument position.
fn atom_with(rng: &mut ChaCha8Rng, sig: &Signature, x: &str, sort: Sort, td: usize) -> Formula {
    let fitting: Vec<(&str, &[TypeTag])> = sig
        .relations()
        .filter(|(_, tags)| tags.iter().any(|&t| sort.fits(t)))
        .collect();
    if fitting.is_empty() || rng.gen_bool(0.2) {
        return Formula::eq(Term::var(x), gen::random_term(rng, sig, sort, td));
    }
    let (p, tags) = *gen::pick(rng, &fitting);
    let slots: Vec<usize> = (0..tags.len()).filter(|&i| sort.fits(tags[i])).collect();
    let at = *gen::pick(rng, &slots);
    let args = tags
        .iter()
        .enumerate()
        .map(|(i, &tag)| {
            if i == at {
                Term::var(x)
            } else {
                let s = tag.as_sort().unwrap_or(Sort::Agt);
                gen::random_term(rng, sig, s, td)
            }
        })
        .collect();
    Formula::atom(p, args)
}

/// UE with a constant or compound term in place of the variable. Bodies are
/// short shapes around atoms mentioning `x`, where a non-rigid term shows.
fn unrestricted_ue(rng: &mut ChaCha8Rng, sig: &Signature, b: &GenBounds) -> Justification {
    let sort = if rng.gen_bool(0.5) { Sort::Agt } else { Sort::Obj };
    let x = gen::random_variable(rng, sig, sort);
    let y = loop {
        let t = gen::random_term(rng, sig, sort, b.max_term_depth);
        if t.as_var().is_none() {
            break t;
        }
    };
    let td = 1.min(b.max_term_depth);
    let a = atom_with(rng, sig, &x, sort, td);
    let body = match rng.gen_range(0..4) {
        0 => {
            let i = gen::random_term(rng, sig, Sort::Agt, td);
            a.clone().implies(Formula::know(i, a))
        }
        1 => a.implies(atom_with(rng, sig, &x, sort, td)),
        2 => a.and(atom_with(rng, sig, &x, sort, td).not()).not(),
        _ => gen::random_formula(rng, sig, 2, td, &y.vars()),
    };
    Justification::Ue {
        x: Term::var(x),
        y,
        body,
    }
}

/// Instances of the unrestricted UE schema drawn per sample.
const MUTATION_DRAWS: usize = 4;

pub fn fuzz_soundness(cfg: FuzzConfig) -> Report {
    fuzz_soundness_with(cfg, &[])
}

/// Every admissible axiom instance and every line of the shipped accepted
/// proofs holds at every world and valuation of every sampled non-standard
/// model. Each mutation adds an item that fails once a violation is found.
pub fn fuzz_soundness_with(cfg: FuzzConfig, mutations: &[Mutation]) -> Report {
    let mut r = Report::new("soundness for non-standard models (sampled)");
    r.notes = cfg.header();
    if let Err(e) = cfg.validate() {
        r.items
            .push(ReportItem::new("fuzz-config", "configuration is valid", false).detail(e));
        return r;
    }
    let sig = gen::fuzz_signature();
    let checker = Checker::new(&sig);
    let relaxed = Checker::with_config(
        &sig,
        CheckerConfig {
            relax: Relaxations {
                unrestricted_ue: true,
                unrestricted_ps: false,
            },
            ..CheckerConfig::default()
        },
    );
    let accepted: Vec<(String, Vec<Formula>)> = SHIPPED_PROOFS
        .iter()
        .filter(|p| p.expected == Expected::Accepted)
        .map(|p| {
            let pf = data::proof(p.text);
            (
                p.name.to_string(),
                pf.proof.lines.into_iter().map(|l| l.formula).collect(),
            )
        })
        .collect();
    let pseudo = super::checks::leibniz_instance();

    let mut per_schema: BTreeMap<&str, Tally> = SCHEMAS.iter().map(|&s| (s, Tally::default())).collect();
    let mut proofs = Tally::default();
    let mut muts: Vec<(Mutation, Tally)> = mutations.iter().map(|&m| (m, Tally::default())).collect();
    let mut effective_overrides = 0u64;
    let mut generator_errors = Vec::new();

    for i in 0..cfg.samples {
        let mut rng = cfg.rng(0, i);
        let n = gen::random_nonstandard_model(&mut rng, &sig, &cfg.bounds);
        if gen::has_effective_override(&n) {
            effective_overrides += 1;
        }
        for &schema in &SCHEMAS {
            let phi = if schema == "TAUT" {
                let phi = gen::random_tautology(&mut rng, &sig, &cfg.bounds);
                if is_tautology(&phi) != Ok(true) {
                    generator_errors.push(format!("sample {i}: {phi} is not a tautology"));
                    continue;
                }
                phi
            } else {
                let j = gen::random_axiom(&mut rng, &sig, schema, &cfg.bounds);
                match checker.instantiate(&j) {
                    Ok(phi) => phi,
                    Err(e) => {
                        generator_errors.push(format!("sample {i}: {j}: {e}"));
                        continue;
                    }
                }
            };
            per_schema.get_mut(schema).expect("known schema").record_ns(&n, &phi);
        }
        for (_, lines) in &accepted {
            for phi in lines {
                proofs.record_ns(&n, phi);
            }
        }
        for (m, tally) in &mut muts {
            match m {
                Mutation::UnrestrictedUe => {
                    for _ in 0..MUTATION_DRAWS {
                        let j = unrestricted_ue(&mut rng, &sig, &cfg.bounds);
                        match relaxed.instantiate(&j) {
                            Ok(phi) => tally.record_ns(&n, &phi),
                            Err(e) => generator_errors.push(format!("sample {i}: {j}: {e}")),
                        }
                    }
                }
                Mutation::PseudoAxiom => tally.record_ns(&n, &pseudo),
            }
        }
    }

    let counts: Vec<String> = per_schema.iter().map(|(s, t)| format!("{s} {}", t.cases)).collect();
    let min_count = per_schema.values().map(|t| t.cases).min().unwrap_or(0);
    let coverage_target = (cfg.samples as u64).min(50);
    r.items.push(
        ReportItem::new(
            "generator-coverage",
            format!("every schema sampled at least {coverage_target} times and some model has an effective override"),
            min_count >= coverage_target && effective_overrides > 0 && generator_errors.is_empty(),
        )
        .cases(cfg.samples as u64)
        .seed(cfg.seed)
        .detail(format!("instances: {}", counts.join(", ")))
        .detail(format!(
            "models with an override differing from its default: {effective_overrides}"
        ))
        .detail(format!("generator errors: {}", generator_errors.len())),
    );
    if let Some(e) = generator_errors.first() {
        let last = r.items.last_mut().expect("just pushed");
        last.details.push(e.clone());
    }
    for (schema, tally) in per_schema {
        let label = format!("sound-{}", schema.to_lowercase());
        r.items
            .push(tally.item(&label, format!("{schema} instances hold in every sample"), cfg.seed));
    }
    let names: Vec<&str> = accepted.iter().map(|(n, _)| n.as_str()).collect();
    r.items.push(proofs.item(
        "sound-shipped-proofs",
        format!("every line of {} holds in every sample", names.join(", ")),
        cfg.seed,
    ));
    for (m, tally) in muts {
        r.items.push(tally.item(m.label(), m.claim(), cfg.seed));
    }
    r
}

fn same_sort_pair(rng: &mut ChaCha8Rng, sig: &Signature) -> (Sort, String, String) {
    let sort = if rng.gen_bool(0.5) { Sort::Agt } else { Sort::Obj };
    (
        sort,
        gen::random_variable(rng, sig, sort),
        gen::random_variable(rng, sig, sort),
    )
}

fn random_key(rng: &mut ChaCha8Rng, n: &NonStandardModel, w: World) -> RelExtension {
    let mut keys = vec![RelExtension::diag(n.frame()), RelExtension::empty()];
    keys.extend(n.signature().relations().filter_map(|(p, _)| n.relation(p, w).cloned()));
    gen::pick(rng, &keys).clone()
}

fn random_world(rng: &mut ChaCha8Rng, frame: &crate::semantics::Frame) -> World {
    World(rng.gen_range(0..frame.world_count()))
}

/// Variable substitution commutes with evaluation, for terms and formulas,
/// in both semantics.
pub fn fuzz_substitution_lemmas(cfg: FuzzConfig) -> Report {
    let mut r = Report::new("substitution lemmas (sampled)");
    r.notes = cfg.header();
    if let Err(e) = cfg.validate() {
        r.items
            .push(ReportItem::new("fuzz-config", "configuration is valid", false).detail(e));
        return r;
    }
    let sig = gen::fuzz_signature();
    let b = cfg.bounds;
    let mut term_ns = Tally::default();
    let mut formula_ns = Tally::default();
    let mut term_std = Tally::default();
    let mut formula_std = Tally::default();

    for i in 0..cfg.samples {
        let mut rng = cfg.rng(1, i);
        let n = gen::random_nonstandard_model(&mut rng, &sig, &b);
        let w = random_world(&mut rng, n.frame());
        let v = gen::random_valuation(&mut rng, &sig, n.frame());
        let key = random_key(&mut rng, &n, w);
        let (sort, x, y) = same_sort_pair(&mut rng, &sig);
        let shifted = v.updated(&x, v.get(&y).expect("valuation covers all variables"));
        let t_sort = if rng.gen_bool(0.5) { sort } else { Sort::Agt };
        let t = gen::random_term(&mut rng, &sig, t_sort, b.max_term_depth);
        let ty = Term::var(y.clone());

        term_ns.cases += 1;
        match substitute_term(&sig, &t, &ty, &x) {
            Err(e) => term_ns.error(format!("{t}: {e}")),
            Ok(ts) => match (
                extension_ns(&n, w, &v, &key, &ts),
                extension_ns(&n, w, &shifted, &key, &t),
            ) {
                (Ok(a), Ok(bb)) if a == bb => {}
                (Ok(a), Ok(_)) => term_ns.mismatch(|| Witness {
                    model: WitnessModel::NonStandard(n.clone()),
                    world: w,
                    valuation: v.clone(),
                    observed: Observation::Denotation {
                        term: ts.clone(),
                        key: key.clone(),
                        value: a,
                    },
                }),
                (Err(e), _) | (_, Err(e)) => term_ns.error(format!("{t}: {e}")),
            },
        }

        let phi = gen::random_formula(
            &mut rng,
            &sig,
            b.max_formula_depth,
            b.max_term_depth,
            &BTreeSet::from([y.clone()]),
        );
        formula_ns.cases += 1;
        match substitute(&sig, &phi, &ty, &x) {
            Err(e) => formula_ns.error(format!("{phi}: {e}")),
            Ok(ps) => match (satisfies_ns(&n, w, &v, &ps), satisfies_ns(&n, w, &shifted, &phi)) {
                (Ok(a), Ok(bb)) if a == bb => {}
                (Ok(a), Ok(_)) => formula_ns
                    .mismatch(|| Witness::truth(WitnessModel::NonStandard(n.clone()), w, v.clone(), ps.clone(), a)),
                (Err(e), _) | (_, Err(e)) => formula_ns.error(format!("{phi}: {e}")),
            },
        }

        let m = gen::random_standard_model(&mut rng, &sig, &b);
        let w = random_world(&mut rng, m.frame());
        let v = gen::random_valuation(&mut rng, &sig, m.frame());
        let (sort, x, y) = same_sort_pair(&mut rng, &sig);
        let shifted = v.updated(&x, v.get(&y).expect("valuation covers all variables"));
        let t_sort = if rng.gen_bool(0.5) { sort } else { Sort::Obj };
        let t = gen::random_term(&mut rng, &sig, t_sort, b.max_term_depth);
        let ty = Term::var(y.clone());

        term_std.cases += 1;
        match substitute_term(&sig, &t, &ty, &x) {
            Err(e) => term_std.error(format!("{t}: {e}")),
            Ok(ts) => match (extension_std(&m, w, &v, &ts), extension_std(&m, w, &shifted, &t)) {
                (Ok(a), Ok(bb)) if a == bb => {}
                (Ok(_), Ok(_)) => term_std.mismatch(|| {
                    let eq = Formula::eq(ts.clone(), t.clone());
                    let value = satisfies_std(&m, w, &v, &eq).unwrap_or(false);
                    Witness::truth(WitnessModel::Standard(m.clone()), w, v.clone(), eq, value)
                }),
                (Err(e), _) | (_, Err(e)) => term_std.error(format!("{t}: {e}")),
            },
        }

        let phi = gen::random_formula(
            &mut rng,
            &sig,
            b.max_formula_depth,
            b.max_term_depth,
            &BTreeSet::from([y.clone()]),
        );
        formula_std.cases += 1;
        match substitute(&sig, &phi, &ty, &x) {
            Err(e) => formula_std.error(format!("{phi}: {e}")),
            Ok(ps) => match (satisfies_std(&m, w, &v, &ps), satisfies_std(&m, w, &shifted, &phi)) {
                (Ok(a), Ok(bb)) if a == bb => {}
                (Ok(a), Ok(_)) => formula_std
                    .mismatch(|| Witness::truth(WitnessModel::Standard(m.clone()), w, v.clone(), ps.clone(), a)),
                (Err(e), _) | (_, Err(e)) => formula_std.error(format!("{phi}: {e}")),
            },
        }
    }

    let s = cfg.seed;
    r.items.push(term_ns.item(
        "subst-term-ns",
        "⟦t(y/x)⟧ under v equals ⟦t⟧ under v[x↦v(y)], non-standard, any key",
        s,
    ));
    r.items.push(formula_ns.item(
        "subst-formula-ns",
        "φ(y/x) under v agrees with φ under v[x↦v(y)], non-standard",
        s,
    ));
    r.items.push(term_std.item(
        "subst-term-std",
        "⟦t(y/x)⟧ under v equals ⟦t⟧ under v[x↦v(y)], standard",
        s,
    ));
    r.items.push(formula_std.item(
        "subst-formula-std",
        "φ(y/x) under v agrees with φ under v[x↦v(y)], standard",
        s,
    ));
    r
}

/// A standard model and its lift agree on every sampled formula.
pub fn fuzz_agreement(cfg: FuzzConfig) -> Report {
    let mut r = Report::new("standard and lifted non-standard satisfaction agree (sampled)");
    r.notes = cfg.header();
    if let Err(e) = cfg.validate() {
        r.items
            .push(ReportItem::new("fuzz-config", "configuration is valid", false).detail(e));
        return r;
    }
    let sig = gen::fuzz_signature();
    let b = cfg.bounds;
    let mut tally = Tally::default();
    for i in 0..cfg.samples {
        let mut rng = cfg.rng(2, i);
        let m: StandardModel = gen::random_standard_model(&mut rng, &sig, &b);
        let n = lift_standard(&m);
        let w = random_world(&mut rng, m.frame());
        let v: Valuation = gen::random_valuation(&mut rng, &sig, m.frame());
        let phi = gen::random_formula(&mut rng, &sig, b.max_formula_depth, b.max_term_depth, &BTreeSet::new());
        tally.cases += 1;
        match (satisfies_std(&m, w, &v, &phi), satisfies_ns(&n, w, &v, &phi)) {
            (Ok(a), Ok(bb)) if a == bb => {}
            (Ok(a), Ok(_)) => {
                tally.mismatch(|| Witness::truth(WitnessModel::Standard(m.clone()), w, v.clone(), phi.clone(), a))
            }
            (Err(e), _) | (_, Err(e)) => tally.error(format!("{phi}: {e}")),
        }
    }
    let agreed = tally.cases - tally.violations;
    let mut item = tally.item("agreement", "satisfies_std equals satisfies_ns after lifting", cfg.seed);
    item.details
        .insert(0, format!("agreement in {agreed}/{} cases", item.cases));
    r.items.push(item);
    r
}
