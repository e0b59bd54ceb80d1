//! The shipped example files, embedded so the checks run without a
//! filesystem.

use crate::format::{parse_model, parse_proof, LoadedModel, ProofFile};
use crate::syntax::{parse_signature, Signature};

pub const SIG_BASIC: &str = include_str!("../../data/sig_basic.tms");
pub const SMALLEST_TMM: &str = include_str!("../../data/smallest.tmm");
pub const PROP3_TMN: &str = include_str!("../../data/prop3.tmn");
pub const LEWIS_TMN: &str = include_str!("../../data/lewis.tmn");
pub const LEWIS_SWAPPED_TMN: &str = include_str!("../../data/lewis_swapped.tmn");
pub const EXISTS_C_TMP: &str = include_str!("../../data/exists_c.tmp");
pub const NECESSITATION_TMP: &str = include_str!("../../data/necessitation.tmp");
pub const FORALL_PS_TMP: &str = include_str!("../../data/forall_ps.tmp");
pub const BOGUS_PS_TMP: &str = include_str!("../../data/bogus_ps.tmp");
pub const BOGUS_UE_TMP: &str = include_str!("../../data/bogus_ue.tmp");
pub const BOGUS_TAUT_TMP: &str = include_str!("../../data/bogus_taut.tmp");

/// Resolves `sig` lines against the embedded files.
pub fn resolve(path: &str) -> Result<String, String> {
    match path {
        "sig_basic.tms" => Ok(SIG_BASIC.to_string()),
        other => Err(format!("no embedded signature `{other}`")),
    }
}

pub fn sig_basic() -> Signature {
    parse_signature(SIG_BASIC).expect("shipped signature parses")
}

pub fn model(text: &str) -> LoadedModel {
    parse_model(text, &resolve).expect("shipped model parses")
}

pub fn proof(text: &str) -> ProofFile {
    parse_proof(text, &resolve).expect("shipped proof parses")
}

/// Expected checker outcome for a shipped proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    Accepted,
    Rejected { line: usize, kind: &'static str },
}

#[derive(Clone, Copy, Debug)]
pub struct ShippedProof {
    pub name: &'static str,
    pub text: &'static str,
    pub expected: Expected,
}

pub const SHIPPED_PROOFS: [ShippedProof; 6] = [
    ShippedProof {
        name: "exists_c.tmp",
        text: EXISTS_C_TMP,
        expected: Expected::Accepted,
    },
    ShippedProof {
        name: "necessitation.tmp",
        text: NECESSITATION_TMP,
        expected: Expected::Accepted,
    },
    ShippedProof {
        name: "forall_ps.tmp",
        text: FORALL_PS_TMP,
        expected: Expected::Accepted,
    },
    ShippedProof {
        name: "bogus_ps.tmp",
        text: BOGUS_PS_TMP,
        expected: Expected::Rejected {
            line: 1,
            kind: "SideConditionViolated",
        },
    },
    ShippedProof {
        name: "bogus_ue.tmp",
        text: BOGUS_UE_TMP,
        expected: Expected::Rejected {
            line: 7,
            kind: "SideConditionViolated",
        },
    },
    ShippedProof {
        name: "bogus_taut.tmp",
        text: BOGUS_TAUT_TMP,
        expected: Expected::Rejected {
            line: 1,
            kind: "NotATautology",
        },
    },
];
