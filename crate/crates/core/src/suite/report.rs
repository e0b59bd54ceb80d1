use std::fmt::Write as _;

use crate::format::{write_nonstandard, write_standard};
use crate::nonstandard::{extension_ns, satisfies_ns, NonStandardModel, RelExtension};
use crate::semantics::{satisfies_std, Element, EvalError, StandardModel, Valuation, World};
use crate::syntax::{Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessModel {
    Standard(StandardModel),
    NonStandard(NonStandardModel),
}

impl WitnessModel {
    fn render(&self) -> String {
        match self {
            WitnessModel::Standard(m) => write_standard(m),
            WitnessModel::NonStandard(n) => write_nonstandard(n),
        }
    }

    fn frame(&self) -> &crate::semantics::Frame {
        match self {
            WitnessModel::Standard(m) => m.frame(),
            WitnessModel::NonStandard(n) => n.frame(),
        }
    }
}

/// What the witness pins down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observation {
    /// The truth value of a formula.
    Truth { formula: Formula, value: bool },
    /// The denotation of a term under a key (non-standard models only).
    Denotation {
        term: Term,
        key: RelExtension,
        value: Element,
    },
}

/// Everything needed to reproduce a verdict by re-evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub model: WitnessModel,
    pub world: World,
    pub valuation: Valuation,
    pub observed: Observation,
}

impl Witness {
    pub fn truth(model: WitnessModel, world: World, valuation: Valuation, formula: Formula, value: bool) -> Witness {
        Witness {
            model,
            world,
            valuation,
            observed: Observation::Truth { formula, value },
        }
    }

    /// Re-evaluates and reports whether the recorded observation still holds.
    pub fn recheck(&self) -> Result<bool, EvalError> {
        let (w, v) = (self.world, &self.valuation);
        match (&self.observed, &self.model) {
            (Observation::Truth { formula, value }, WitnessModel::Standard(m)) => {
                Ok(satisfies_std(m, w, v, formula)? == *value)
            }
            (Observation::Truth { formula, value }, WitnessModel::NonStandard(n)) => {
                Ok(satisfies_ns(n, w, v, formula)? == *value)
            }
            (Observation::Denotation { term, key, value }, WitnessModel::NonStandard(n)) => {
                Ok(extension_ns(n, w, v, key, term)? == *value)
            }
            (Observation::Denotation { .. }, WitnessModel::Standard(_)) => Ok(false),
        }
    }

    fn render(&self, indent: &str) -> String {
        let frame = self.model.frame();
        let mut out = String::new();
        match &self.observed {
            Observation::Truth { formula, value } => {
                let _ = writeln!(out, "{indent}formula: {formula}");
                let _ = writeln!(out, "{indent}value: {value}");
            }
            Observation::Denotation { term, key, value } => {
                let _ = writeln!(out, "{indent}term: {term} under {}", key.render(frame));
                let _ = writeln!(out, "{indent}value: {}", frame.element_name(*value));
            }
        }
        let _ = writeln!(out, "{indent}world: {}", frame.world_name(self.world));
        let _ = writeln!(out, "{indent}valuation: [{}]", self.valuation.render(frame));
        let _ = writeln!(out, "{indent}model:");
        for line in self.model.render().lines() {
            let _ = writeln!(out, "{indent}  {line}");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportItem {
    /// Short stable identifier, e.g. `keyed-denotation-jp`.
    pub label: String,
    pub claim: String,
    pub passed: bool,
    pub cases: u64,
    pub seed: Option<u64>,
    pub witness: Option<Witness>,
    pub details: Vec<String>,
}

impl ReportItem {
    pub fn new(label: impl Into<String>, claim: impl Into<String>, passed: bool) -> ReportItem {
        ReportItem {
            label: label.into(),
            claim: claim.into(),
            passed,
            cases: 1,
            seed: None,
            witness: None,
            details: Vec::new(),
        }
    }

    pub fn cases(mut self, n: u64) -> Self {
        self.cases = n;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn witness(mut self, w: Option<Witness>) -> Self {
        self.witness = w;
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.details.push(d.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub items: Vec<ReportItem>,
    pub notes: Vec<String>,
    pub children: Vec<Report>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report {
            title: title.into(),
            ..Report::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed) && self.children.iter().all(Report::passed)
    }

    /// Items of this report and all descendants, depth first.
    pub fn all_items(&self) -> Vec<&ReportItem> {
        let mut out: Vec<&ReportItem> = self.items.iter().collect();
        for c in &self.children {
            out.extend(c.all_items());
        }
        out
    }

    pub fn item(&self, label: &str) -> Option<&ReportItem> {
        self.all_items().into_iter().find(|i| i.label == label)
    }

    pub fn failures(&self) -> Vec<&ReportItem> {
        self.all_items().into_iter().filter(|i| !i.passed).collect()
    }

    /// Human-readable rendering. Witnesses are printed for failed items, and
    /// for passed ones when `witnesses` is set.
    pub fn render_text(&self, witnesses: bool) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0, witnesses);
        let _ = writeln!(out, "overall: {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }

    fn render_into(&self, out: &mut String, level: usize, witnesses: bool) {
        let pad = "  ".repeat(level);
        let _ = writeln!(out, "{pad}== {} ==", self.title);
        for note in &self.notes {
            let _ = writeln!(out, "{pad}{note}");
        }
        for item in &self.items {
            let mark = if item.passed { "pass" } else { "FAIL" };
            let mut meta = format!("cases {}", item.cases);
            if let Some(s) = item.seed {
                let _ = write!(meta, ", seed {s}");
            }
            let _ = writeln!(out, "{pad}[{mark}] {}: {} ({meta})", item.label, item.claim);
            for d in &item.details {
                let _ = writeln!(out, "{pad}    {d}");
            }
            if let Some(w) = &item.witness {
                if witnesses || !item.passed {
                    let _ = writeln!(out, "{pad}    witness:");
                    out.push_str(&w.render(&format!("{pad}      ")));
                }
            }
        }
        for c in &self.children {
            c.render_into(out, level + 1, witnesses);
        }
    }

    /// One `CLAIM <label> <pass|fail> <cases> <seed|->` line per item, then
    /// `RESULT <pass|fail>`.
    pub fn render_records(&self) -> String {
        let mut out = String::new();
        for item in self.all_items() {
            let seed = item.seed.map_or_else(|| "-".to_string(), |s| s.to_string());
            let _ = writeln!(
                out,
                "CLAIM {} {} {} {seed}",
                item.label,
                if item.passed { "pass" } else { "fail" },
                item.cases
            );
        }
        let _ = writeln!(out, "RESULT {}", if self.passed() { "pass" } else { "fail" });
        out
    }
}
