use std::collections::{BTreeMap, BTreeSet};

use super::{Element, Frame, ModelError};
use crate::syntax::Signature;

/// A finite partial assignment of domain elements to variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Valuation(BTreeMap<String, Element>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, x: &str) -> Option<Element> {
        self.0.get(x).copied()
    }

    pub fn insert(&mut self, x: impl Into<String>, d: Element) -> Option<Element> {
        self.0.insert(x.into(), d)
    }

    pub fn remove(&mut self, x: &str) -> Option<Element> {
        self.0.remove(x)
    }

    /// `v[x ↦ d]`.
    pub fn updated(&self, x: &str, d: Element) -> Valuation {
        let mut v = self.clone();
        v.insert(x, d);
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Element)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn covers<'a>(&self, vars: impl IntoIterator<Item = &'a String>) -> Option<&'a String> {
        vars.into_iter().find(|x| !self.0.contains_key(x.as_str()))
    }

    /// Checks `v(x) ∈ D_type(x)` for every mapped `x`.
    pub fn check(&self, sig: &Signature, frame: &Frame) -> Result<(), ModelError> {
        for (x, d) in self.iter() {
            let sort = sig
                .var_sort(x)
                .ok_or_else(|| ModelError::Invalid(format!("`{x}` is not a variable")))?;
            if d.sort != sort || !frame.contains(d) {
                return Err(ModelError::WrongSort {
                    symbol: x.to_string(),
                    detail: format!("value must be an element of sort {sort}"),
                });
            }
        }
        Ok(())
    }

    /// `x=a, y=o` using element names from `frame`.
    pub fn render(&self, frame: &Frame) -> String {
        let parts: Vec<String> = self
            .iter()
            .map(|(x, d)| format!("{x}={}", frame.element_name(d)))
            .collect();
        parts.join(", ")
    }
}

impl FromIterator<(String, Element)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (String, Element)>>(iter: I) -> Self {
        Valuation(iter.into_iter().collect())
    }
}

/// Every assignment of `vars` into their sorted domains, in odometer order
/// (variables by name, the last one varying fastest).
pub fn all_valuations(sig: &Signature, frame: &Frame, vars: &BTreeSet<String>) -> Vec<Valuation> {
    let mut out = vec![Valuation::new()];
    for x in vars {
        let Some(sort) = sig.var_sort(x) else { continue };
        let dom = frame.domain(sort);
        out = out
            .into_iter()
            .flat_map(|v| dom.iter().map(move |&d| v.updated(x, d)))
            .collect();
    }
    out
}
