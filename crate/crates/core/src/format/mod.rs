//! Text formats.
//!
//! * `.tms`: signatures, one declaration per line.
//! * `.tmm` / `.tmn`: standard and non-standard models. The header line
//!   (`model standard` or `model nonstandard`) decides the kind.
//! * `.tmp`: proofs, `N: formula ; justification` per line.
//!
//! Model and proof files name their signature with `sig <path>` (relative to
//! the file) and may also declare symbols inline.

mod model;
mod proof;

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use model::{parse_model, write_nonstandard, write_standard, LoadedModel};
pub use proof::{parse_proof, write_proof, ProofFile};

use crate::nonstandard::NonStandardModel;
use crate::semantics::{ModelError, StandardModel};
use crate::syntax::{parse_signature, Signature, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct FormatError {
    pub file: Option<String>,
    /// 0 when the error is not tied to a line.
    pub line: usize,
    pub col: Option<usize>,
    pub message: String,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{file}:")?;
        }
        if self.line > 0 {
            write!(f, "{}:", self.line)?;
        }
        if let Some(col) = self.col {
            write!(f, "{col}:")?;
        }
        if self.file.is_some() || self.line > 0 {
            f.write_str(" ")?;
        }
        f.write_str(&self.message)
    }
}

impl FormatError {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> FormatError {
        FormatError {
            file: None,
            line,
            col: None,
            message: message.into(),
        }
    }

    pub(crate) fn syntax(line: usize, e: SyntaxError) -> FormatError {
        match e {
            SyntaxError::Malformed { line, col, message } => FormatError {
                file: None,
                line,
                col: Some(col),
                message,
            },
            other => FormatError::at(line, other.to_string()),
        }
    }

    pub(crate) fn model(e: ModelError) -> FormatError {
        FormatError::at(0, e.to_string())
    }

    /// Attributes the error to `file` unless it already names one.
    pub fn in_file(mut self, file: impl Into<String>) -> FormatError {
        if self.file.is_none() {
            self.file = Some(file.into());
        }
        self
    }
}

/// Maps the path of a `sig` line to the signature text.
pub type Resolver<'a> = dyn Fn(&str) -> Result<String, String> + 'a;

/// A resolver that refuses every `sig` line.
pub fn no_includes(path: &str) -> Result<String, String> {
    Err(format!("cannot resolve `{path}` here"))
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|e| FormatError::at(0, e.to_string()).in_file(path.display().to_string()))
}

fn relative_resolver(path: &Path) -> impl Fn(&str) -> Result<String, String> {
    let base: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    move |rel: &str| {
        let p = base.join(rel);
        std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))
    }
}

pub fn load_signature(path: &Path) -> Result<Signature, FormatError> {
    let text = read(path)?;
    parse_signature(&text).map_err(|e| FormatError::syntax(0, e).in_file(path.display().to_string()))
}

pub fn load_model(path: &Path) -> Result<LoadedModel, FormatError> {
    let text = read(path)?;
    parse_model(&text, &relative_resolver(path)).map_err(|e| e.in_file(path.display().to_string()))
}

pub fn load_proof(path: &Path) -> Result<ProofFile, FormatError> {
    let text = read(path)?;
    parse_proof(&text, &relative_resolver(path)).map_err(|e| e.in_file(path.display().to_string()))
}

impl From<StandardModel> for LoadedModel {
    fn from(m: StandardModel) -> Self {
        LoadedModel::Standard(m)
    }
}

impl From<NonStandardModel> for LoadedModel {
    fn from(n: NonStandardModel) -> Self {
        LoadedModel::NonStandard(n)
    }
}
