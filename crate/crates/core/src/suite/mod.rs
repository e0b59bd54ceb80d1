//! Executable checks, each packaged as a [`Report`].
//!
//! * [`verify_prop1_bounded`]: the Leibniz instance `x = c → (P(x) → P(c))`
//!   has no standard countermodel within given bounds.
//! * [`verify_prop3`]: the keyed countermodel falsifies it.
//! * [`fuzz_soundness`], [`fuzz_substitution_lemmas`], [`fuzz_agreement`]:
//!   sampled checks over random models.
//! * [`demonstrate_incompleteness`]: the above combined with the checker's
//!   rejection of the attempted proofs.
//!
//! Everything is deterministic for a fixed configuration.

mod checks;
pub mod data;
mod fuzz;
pub mod gen;
mod report;

pub use checks::{
    bounded_validity, verify_lewis, verify_proof_rejections, verify_prop1_bounded, verify_prop1_bounded_with,
    verify_prop3, verify_prop3_on,
};
pub use fuzz::{fuzz_agreement, fuzz_soundness, fuzz_soundness_with, fuzz_substitution_lemmas, FuzzConfig, Mutation};
pub use gen::GenBounds;
pub use report::{Observation, Report, ReportItem, Witness, WitnessModel};

use crate::hilbert::CheckerConfig;
use crate::semantics::Bounds;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IncompletenessConfig {
    pub bounds: Bounds,
    pub fuzz: FuzzConfig,
    /// Test hook: relaxing a side condition should make part (c) fail.
    pub checker: CheckerConfig,
}

impl Default for IncompletenessConfig {
    fn default() -> Self {
        IncompletenessConfig {
            bounds: Bounds::new(2, 1, 2),
            fuzz: FuzzConfig::default(),
            checker: CheckerConfig::default(),
        }
    }
}

pub fn demonstrate_incompleteness() -> Report {
    demonstrate_incompleteness_with(IncompletenessConfig::default())
}

/// Four parts: (a) bounded standard validity of the Leibniz instance,
/// (b) its keyed countermodel, (c) the checker rejecting the attempted
/// proofs, (d) sampled soundness for non-standard models.
pub fn demonstrate_incompleteness_with(cfg: IncompletenessConfig) -> Report {
    let mut r = Report::new("incompleteness of the Hilbert system for the standard semantics");
    r.notes = vec![
        "(a) x = c → (P(x) → P(c)) holds in every standard model checked.".into(),
        "(b) A non-standard model falsifies it: c is read under the extension of P and points elsewhere.".into(),
        "(c) The obvious derivations are rejected: PS and UE take variables only, and the formula is no tautology."
            .into(),
        "(d) Every axiom instance and accepted proof line holds in the sampled non-standard models.".into(),
        "If the system is sound for non-standard models, (b) means the formula has no proof; with (a) it is a \
         standard validity without a proof, so the system is incomplete for the standard semantics."
            .into(),
        "Caveat: (a) covers bounded models only and (d) is sampling, not a proof of soundness.".into(),
    ];
    let mut a = verify_prop1_bounded(cfg.bounds);
    a.title = format!("(a) {}", a.title);
    let mut b = verify_prop3();
    b.title = format!("(b) {}", b.title);
    let mut c = verify_proof_rejections(cfg.checker);
    c.title = format!("(c) {}", c.title);
    let mut d = fuzz_soundness(cfg.fuzz);
    d.title = format!("(d) {}", d.title);
    r.children = vec![a, b, c, d];
    r
}
