use std::fmt::Write as _;

use super::model::{content_lines, declaration};
use super::{FormatError, Resolver};
use crate::hilbert::{Justification, Proof};
use crate::syntax::parse::{parse_formula_at, FormulaParser};
use crate::syntax::{Formula, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofFile {
    pub sig: Signature,
    pub proof: Proof,
    /// Source line of each proof line.
    pub source_lines: Vec<usize>,
}

/// A slice of the line with its starting column (1-based).
#[derive(Clone, Copy)]
struct Piece<'a> {
    text: &'a str,
    col: usize,
}

impl<'a> Piece<'a> {
    fn trim(self) -> Piece<'a> {
        let lead = self.text.len() - self.text.trim_start().len();
        Piece {
            text: self.text.trim(),
            col: self.col + self.text[..lead].chars().count(),
        }
    }

    fn split_at(self, byte: usize) -> (Piece<'a>, Piece<'a>) {
        let (a, b) = self.text.split_at(byte);
        (
            Piece { text: a, col: self.col },
            Piece {
                text: b,
                col: self.col + a.chars().count(),
            },
        )
    }

    /// Splits on commas outside brackets.
    fn split_args(self) -> Vec<Piece<'a>> {
        let mut out = Vec::new();
        let mut depth = 0i32;
        let mut rest = self;
        let mut offset = 0;
        for (i, c) in self.text.char_indices() {
            match c {
                '(' | '[' | '{' => depth += 1,
                ')' | ']' | '}' => depth -= 1,
                ',' if depth == 0 => {
                    let (head, tail) = rest.split_at(i - offset);
                    out.push(head.trim());
                    rest = tail.split_at(1).1;
                    offset = i + 1;
                }
                _ => {}
            }
        }
        if !rest.text.trim().is_empty() || !out.is_empty() {
            out.push(rest.trim());
        }
        out
    }
}

fn term(sig: &Signature, p: Piece<'_>, line: usize) -> Result<Term, FormatError> {
    let mut fp = FormulaParser::new(sig, p.text, line, p.col).map_err(|e| FormatError::syntax(line, e))?;
    let t = fp.term().map_err(|e| FormatError::syntax(line, e))?;
    fp.cur.expect_end().map_err(|e| FormatError::syntax(line, e))?;
    Ok(t)
}

fn formula(sig: &Signature, p: Piece<'_>, line: usize) -> Result<Formula, FormatError> {
    parse_formula_at(sig, p.text, line, p.col).map_err(|e| FormatError::syntax(line, e))
}

fn number(p: Piece<'_>, line: usize) -> Result<usize, FormatError> {
    p.text.parse().map_err(|_| FormatError {
        file: None,
        line,
        col: Some(p.col),
        message: format!("expected a line number, found `{}`", p.text),
    })
}

fn justification(sig: &Signature, p: Piece<'_>, line: usize) -> Result<Justification, FormatError> {
    let p = p.trim();
    let (name, args) = match p.text.find('(') {
        Some(i) => {
            let (name, rest) = p.split_at(i);
            let rest = rest.split_at(1).1;
            let Some(body) = rest.text.strip_suffix(')') else {
                return Err(FormatError::at(line, "justification is missing `)`"));
            };
            (
                name.text.trim(),
                Piece {
                    text: body,
                    col: rest.col,
                }
                .split_args(),
            )
        }
        None => (p.text, Vec::new()),
    };
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(FormatError::at(
                line,
                format!("`{name}` takes {n} argument(s), found {}", args.len()),
            ))
        }
    };
    let t = |i: usize| term(sig, args[i], line);
    let f = |i: usize| formula(sig, args[i], line);
    let n = |i: usize| number(args[i], line);
    let j = match name {
        "taut" => {
            arity(0)?;
            Justification::Taut
        }
        "id" => {
            arity(1)?;
            Justification::Id(t(0)?)
        }
        "ue" => {
            arity(3)?;
            Justification::Ue {
                x: t(0)?,
                y: t(1)?,
                body: f(2)?,
            }
        }
        "ps" => {
            arity(4)?;
            Justification::Ps {
                x: t(0)?,
                y: t(1)?,
                z: t(2)?,
                body: f(3)?,
            }
        }
        "eid" => {
            arity(2)?;
            Justification::Eid { c: t(0)?, x: t(1)? }
        }
        "dd" => {
            arity(2)?;
            Justification::Dd { x: t(0)?, y: t(1)? }
        }
        "k" => {
            arity(3)?;
            Justification::AxK {
                index: t(0)?,
                antecedent: f(1)?,
                consequent: f(2)?,
            }
        }
        "barcan" => {
            arity(3)?;
            Justification::Barcan {
                x: t(0)?,
                index: t(1)?,
                body: f(2)?,
            }
        }
        "kni" => {
            arity(3)?;
            Justification::Kni {
                x: t(0)?,
                y: t(1)?,
                index: t(2)?,
            }
        }
        "mp" => {
            arity(2)?;
            Justification::Mp {
                implication: n(0)?,
                antecedent: n(1)?,
            }
        }
        "kg" => {
            arity(2)?;
            Justification::Kg {
                premise: n(0)?,
                index: t(1)?,
            }
        }
        "ug" => {
            arity(2)?;
            Justification::Ug {
                premise: n(0)?,
                x: t(1)?,
            }
        }
        other => return Err(FormatError::at(line, format!("unknown justification `{other}`"))),
    };
    Ok(j)
}

/// Parses a `.tmp` file: header `proof`, then `sig` lines or inline
/// declarations, then numbered lines `N: formula ; justification`.
pub fn parse_proof(text: &str, resolve: &Resolver<'_>) -> Result<ProofFile, FormatError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| FormatError::at(0, "empty proof file"))?;
    if header.trim() != "proof" {
        return Err(FormatError::at(hline, "expected `proof`"));
    }
    let mut sig = Signature::new();
    let mut proof = Proof::new();
    let mut source_lines = Vec::new();
    for (line, text) in lines {
        let starts_numbered = text.trim_start().starts_with(|c: char| c.is_ascii_digit());
        if !starts_numbered {
            if !proof.lines.is_empty() {
                return Err(FormatError::at(line, "declarations must precede the proof lines"));
            }
            if declaration(&mut sig, text, line, resolve)? {
                continue;
            }
            return Err(FormatError::at(
                line,
                "expected a declaration, `sig <path>` or `N: formula ; justification`",
            ));
        }
        let whole = Piece { text, col: 1 };
        let colon = text
            .find(':')
            .ok_or_else(|| FormatError::at(line, "expected `:` after the line number"))?;
        let (num, rest) = whole.split_at(colon);
        let n = number(num.trim(), line)?;
        if n != proof.lines.len() + 1 {
            return Err(FormatError::at(
                line,
                format!("expected line number {}, found {n}", proof.lines.len() + 1),
            ));
        }
        let rest = rest.split_at(1).1;
        let semi = rest
            .text
            .rfind(';')
            .ok_or_else(|| FormatError::at(line, "expected `;` before the justification"))?;
        let (phi, just) = rest.split_at(semi);
        let phi = formula(&sig, phi.trim(), line)?;
        let j = justification(&sig, just.split_at(1).1, line)?;
        proof.push(phi, j);
        source_lines.push(line);
    }
    Ok(ProofFile {
        sig,
        proof,
        source_lines,
    })
}

/// `.tmp` text. With `sig_path` the signature is referenced, otherwise it is
/// declared inline.
pub fn write_proof(sig: &Signature, sig_path: Option<&str>, proof: &Proof) -> String {
    let mut out = String::from("proof\n");
    match sig_path {
        Some(p) => {
            let _ = writeln!(out, "sig {p}");
        }
        None => out.push_str(&sig.to_string()),
    }
    for (i, l) in proof.lines.iter().enumerate() {
        let _ = writeln!(out, "{}: {} ; {}", i + 1, l.formula, l.justification);
    }
    out
}
