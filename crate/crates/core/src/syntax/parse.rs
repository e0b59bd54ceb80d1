//! Lexer and recursive-descent parser for signatures, terms and formulas.
//!
//! Formula grammar, loosest binding first:
//!
//! ```text
//! iff   := imp ('<->' imp)*
//! imp   := or ('->' imp)?
//! or    := and ('|' and)*
//! and   := unary ('&' unary)*
//! unary := '!' unary | 'K' '[' term ']' unary
//!        | ('forall' | 'exists') var '.' iff
//!        | '(' iff ')' | REL [ '(' terms ')' ] | term ('=' | '!=') term
//! ```

use super::{check_formula, type_of_term, Formula, Signature, Sort, Symbol, SyntaxError, Term, TypeTag};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(usize),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Colon,
    Semi,
    At,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    Eq,
    Neq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::At => "@",
            Tok::Bang => "!",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::DArrow => "<->",
            Tok::Eq => "=",
            Tok::Neq => "!=",
            Tok::Ident(_) | Tok::Int(_) | Tok::Eof => "",
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn malformed(line: usize, col: usize, message: impl Into<String>) -> SyntaxError {
    SyntaxError::Malformed {
        line,
        col,
        message: message.into(),
    }
}

/// Splits `text` into tokens; positions start at (`line`, `col`).
pub(crate) fn lex(text: &str, line: usize, col: usize) -> Result<Vec<Spanned>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (line, col);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let push = |tok: Tok, len: usize, out: &mut Vec<Spanned>| {
            out.push(Spanned {
                tok,
                line: start_line,
                col: start_col,
            });
            len
        };
        let consumed = match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => 1,
            '(' => push(Tok::LParen, 1, &mut out),
            ')' => push(Tok::RParen, 1, &mut out),
            '[' => push(Tok::LBracket, 1, &mut out),
            ']' => push(Tok::RBracket, 1, &mut out),
            '{' => push(Tok::LBrace, 1, &mut out),
            '}' => push(Tok::RBrace, 1, &mut out),
            ',' => push(Tok::Comma, 1, &mut out),
            '.' => push(Tok::Dot, 1, &mut out),
            ':' => push(Tok::Colon, 1, &mut out),
            ';' => push(Tok::Semi, 1, &mut out),
            '@' => push(Tok::At, 1, &mut out),
            '&' => push(Tok::Amp, 1, &mut out),
            '|' => push(Tok::Pipe, 1, &mut out),
            '=' => push(Tok::Eq, 1, &mut out),
            '!' if chars.get(i + 1) == Some(&'=') => push(Tok::Neq, 2, &mut out),
            '!' => push(Tok::Bang, 1, &mut out),
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Arrow, 2, &mut out),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => push(Tok::DArrow, 3, &mut out),
            c if c.is_ascii_digit() => {
                let len = chars[i..].iter().take_while(|c| c.is_ascii_digit()).count();
                let digits: String = chars[i..i + len].iter().collect();
                let n = digits
                    .parse()
                    .map_err(|_| malformed(start_line, start_col, "number out of range"))?;
                push(Tok::Int(n), len, &mut out)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .count();
                let ident: String = chars[i..i + len].iter().collect();
                push(Tok::Ident(ident), len, &mut out)
            }
            other => return Err(malformed(line, col, format!("unexpected character `{other}`"))),
        };
        i += consumed;
        col += consumed;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Cursor over a token stream.
pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Spanned>) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, n: usize) -> &Tok {
        let idx = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[idx].tok
    }

    pub fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    pub fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn error(&self, message: impl Into<String>) -> SyntaxError {
        let (line, col) = self.here();
        malformed(line, col, message)
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<(), SyntaxError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe())))
        }
    }

    pub fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error(format!("expected identifier, found {}", other.describe()))),
        }
    }

    pub fn at_end(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn expect_end(&self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {}", self.peek().describe())))
        }
    }
}

pub(crate) struct FormulaParser<'a> {
    pub sig: &'a Signature,
    pub cur: Cursor,
}

impl<'a> FormulaParser<'a> {
    pub fn new(sig: &'a Signature, text: &str, line: usize, col: usize) -> Result<Self, SyntaxError> {
        Ok(FormulaParser {
            sig,
            cur: Cursor::new(lex(text, line, col)?),
        })
    }

    pub fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.implication()?;
        while self.cur.eat(&Tok::DArrow) {
            let rhs = self.implication()?;
            lhs = lhs.iff(rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.disjunction()?;
        if self.cur.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.conjunction()?;
        while self.cur.eat(&Tok::Pipe) {
            let rhs = self.conjunction()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.cur.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.cur.peek().clone() {
            Tok::Bang => {
                self.cur.bump();
                Ok(self.unary()?.not())
            }
            Tok::LParen => {
                self.cur.bump();
                let inner = self.formula()?;
                self.cur.expect(&Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(ref k) if k == "K" && *self.cur.peek_at(1) == Tok::LBracket => {
                self.cur.bump();
                self.cur.bump();
                let index = self.term()?;
                let sort = type_of_term(self.sig, &index)?;
                if sort != Sort::Agt {
                    return Err(SyntaxError::ModalIndex(sort));
                }
                self.cur.expect(&Tok::RBracket)?;
                Ok(Formula::know(index, self.unary()?))
            }
            Tok::Ident(ref q) if q == "forall" || q == "exists" => {
                let universal = q == "forall";
                self.cur.bump();
                let (line, col) = self.cur.here();
                let var = self.cur.ident()?;
                match self.sig.lookup(&var) {
                    Some(Symbol::Variable(_)) => {}
                    Some(_) => return Err(SyntaxError::NotAVariable(var)),
                    None => return Err(malformed(line, col, format!("unknown variable `{var}`"))),
                }
                self.cur.expect(&Tok::Dot)?;
                let body = self.formula()?;
                Ok(if universal {
                    Formula::forall(var, body)
                } else {
                    Formula::exists(var, body)
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        if let Tok::Ident(name) = self.cur.peek().clone() {
            if let Some(Symbol::Relation(types)) = self.sig.lookup(&name) {
                let arity = types.len();
                self.cur.bump();
                let args = if self.cur.peek() == &Tok::LParen {
                    self.arguments()?
                } else {
                    Vec::new()
                };
                if args.len() != arity {
                    return Err(SyntaxError::Arity {
                        symbol: name,
                        expected: arity,
                        found: args.len(),
                    });
                }
                let atom = Formula::atom(name, args);
                check_formula(self.sig, &atom)?;
                return Ok(atom);
            }
        }
        let lhs = self.term()?;
        let negated = match self.cur.peek() {
            Tok::Eq => false,
            Tok::Neq => true,
            other => {
                return Err(self
                    .cur
                    .error(format!("expected `=` or `!=` after a term, found {}", other.describe())))
            }
        };
        self.cur.bump();
        let rhs = self.term()?;
        let atom = Formula::eq(lhs, rhs);
        check_formula(self.sig, &atom)?;
        Ok(if negated { atom.not() } else { atom })
    }

    fn arguments(&mut self) -> Result<Vec<Term>, SyntaxError> {
        self.cur.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        if self.cur.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            if self.cur.eat(&Tok::RParen) {
                return Ok(args);
            }
            self.cur.expect(&Tok::Comma)?;
        }
    }

    pub fn term(&mut self) -> Result<Term, SyntaxError> {
        let (line, col) = self.cur.here();
        let name = self.cur.ident()?;
        let term = match self.sig.lookup(&name) {
            Some(Symbol::Variable(_)) => Term::Var(name),
            Some(Symbol::Constant(_)) => Term::Const(name),
            Some(Symbol::Function(ty)) => {
                let arity = ty.args.len();
                let args = if self.cur.peek() == &Tok::LParen {
                    self.arguments()?
                } else {
                    Vec::new()
                };
                if args.len() != arity {
                    return Err(SyntaxError::Arity {
                        symbol: name,
                        expected: arity,
                        found: args.len(),
                    });
                }
                Term::App(name, args)
            }
            Some(Symbol::Relation(_)) => return Err(malformed(line, col, format!("relation `{name}` used as a term"))),
            None => return Err(SyntaxError::Unknown(name)),
        };
        type_of_term(self.sig, &term)?;
        Ok(term)
    }
}

/// Parses and type-checks a formula, expanding all derived connectives.
pub fn parse_formula(sig: &Signature, text: &str) -> Result<Formula, SyntaxError> {
    parse_formula_at(sig, text, 1, 1)
}

pub(crate) fn parse_formula_at(sig: &Signature, text: &str, line: usize, col: usize) -> Result<Formula, SyntaxError> {
    let mut p = FormulaParser::new(sig, text, line, col)?;
    let phi = p.formula()?;
    p.cur.expect_end()?;
    Ok(phi)
}

pub fn parse_term(sig: &Signature, text: &str) -> Result<Term, SyntaxError> {
    let mut p = FormulaParser::new(sig, text, 1, 1)?;
    let t = p.term()?;
    p.cur.expect_end()?;
    Ok(t)
}

fn type_list(cur: &mut Cursor, stop: Option<&Tok>) -> Result<Vec<TypeTag>, SyntaxError> {
    let mut types = Vec::new();
    if cur.at_end() || stop.is_some_and(|s| cur.peek() == s) {
        return Ok(types);
    }
    loop {
        let (line, col) = cur.here();
        let name = cur.ident()?;
        types.push(name.parse().map_err(|m: String| malformed(line, col, m))?);
        if !cur.eat(&Tok::Comma) {
            return Ok(types);
        }
    }
}

/// Applies one `.tms` declaration line to `sig`. Returns `Ok(false)` when the
/// line does not start with a declaration keyword.
pub(crate) fn declare_line(sig: &mut Signature, text: &str, line: usize) -> Result<bool, SyntaxError> {
    let mut cur = Cursor::new(lex(text, line, 1)?);
    let keyword = match cur.peek() {
        Tok::Ident(k) if ["var", "const", "fun", "rel"].contains(&k.as_str()) => k.clone(),
        _ => return Ok(false),
    };
    cur.bump();
    let (nline, ncol) = cur.here();
    let name = match cur.bump() {
        Tok::Ident(s) => s,
        Tok::Eq => "=".to_string(),
        other => {
            return Err(malformed(
                nline,
                ncol,
                format!("expected identifier, found {}", other.describe()),
            ))
        }
    };
    let at_name = |e: SyntaxError| match e {
        SyntaxError::Malformed { .. } => e,
        other => malformed(nline, ncol, other.to_string()),
    };
    let has_colon = cur.eat(&Tok::Colon);
    if !has_colon && keyword != "rel" {
        return Err(cur.error("expected `:`"));
    }
    match keyword.as_str() {
        "var" | "const" => {
            let (line, col) = cur.here();
            let ty: TypeTag = cur.ident()?.parse().map_err(|m: String| malformed(line, col, m))?;
            cur.expect_end()?;
            if keyword == "var" {
                sig.declare_variable(&name, ty).map_err(at_name)?;
            } else {
                sig.declare_constant(&name, ty).map_err(at_name)?;
            }
        }
        "fun" => {
            let args = type_list(&mut cur, Some(&Tok::Arrow))?;
            cur.expect(&Tok::Arrow)?;
            let (line, col) = cur.here();
            let result: TypeTag = cur.ident()?.parse().map_err(|m: String| malformed(line, col, m))?;
            cur.expect_end()?;
            sig.declare_function(&name, args, result).map_err(at_name)?;
        }
        _ => {
            let args = if has_colon {
                type_list(&mut cur, None)?
            } else {
                Vec::new()
            };
            cur.expect_end()?;
            sig.declare_relation(&name, args).map_err(at_name)?;
        }
    }
    Ok(true)
}

/// Strips a `#` comment.
pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses a `.tms` signature: one `var`/`const`/`fun`/`rel` declaration per line.
pub fn parse_signature(text: &str) -> Result<Signature, SyntaxError> {
    let mut sig = Signature::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        if !declare_line(&mut sig, line, i + 1)? {
            let col = line.len() - line.trim_start().len() + 1;
            return Err(malformed(i + 1, col, "expected `var`, `const`, `fun` or `rel`"));
        }
    }
    Ok(sig)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        parse_signature("var x : agt\nvar y : obj\nconst c : agt\nrel P : agtobj").unwrap()
    }

    #[test]
    fn signature_example() {
        let sig = parse_signature("var x : agt\nconst c : agt\nrel P : agtobj").unwrap();
        assert_eq!(sig.var_sort("x"), Some(Sort::Agt));
        assert_eq!(sig.const_sort("c"), Some(Sort::Agt));
        assert_eq!(sig.relation("P"), Some(&[TypeTag::AgtObj][..]));
    }

    #[test]
    fn empty_signature_has_only_builtins() {
        let sig = parse_signature("").unwrap();
        assert_eq!(sig, Signature::new());
        assert_eq!(sig.var_sort("_a5"), Some(Sort::Agt));
        assert!(parse_formula(&sig, "_a0 = _o1").is_ok());
    }

    #[test]
    fn constants_must_be_sorted() {
        let err = parse_signature("const c : agtobj").unwrap_err();
        assert!(err.to_string().contains("constants must have type agt or obj"), "{err}");
        let err = parse_signature("var x : agtobj").unwrap_err();
        assert!(err.to_string().contains("variables must have type agt or obj"), "{err}");
    }

    #[test]
    fn signature_errors_carry_positions() {
        let err = parse_signature("var x : agt\nvar x : obj").unwrap_err();
        assert!(matches!(err, SyntaxError::Malformed { line: 2, col: 5, .. }), "{err:?}");
        assert!(err.to_string().contains("duplicate identifier"));
        let err = parse_signature("rel = : agtobj, agtobj").unwrap_err();
        assert!(err.to_string().contains("cannot be redeclared"));
        let err = parse_signature("var x agt").unwrap_err();
        assert!(matches!(err, SyntaxError::Malformed { line: 1, col: 7, .. }), "{err:?}");
        let err = parse_signature("relation P : agt").unwrap_err();
        assert!(matches!(err, SyntaxError::Malformed { line: 1, col: 1, .. }), "{err:?}");
    }

    #[test]
    fn nullary_symbols_and_comments() {
        let sig =
            parse_signature("# header\nfun n : -> obj   # nullary\nrel T :\nrel U\nfun g : agt, obj -> agt").unwrap();
        assert_eq!(sig.function("n").unwrap().args, vec![]);
        assert_eq!(sig.relation("T"), Some(&[][..]));
        assert_eq!(sig.relation("U"), Some(&[][..]));
        let phi = parse_formula(&sig, "T & U() & n = n()").unwrap();
        assert_eq!(
            phi,
            Formula::atom("T", vec![])
                .and(Formula::atom("U", vec![]))
                .and(Formula::eq(Term::app("n", vec![]), Term::app("n", vec![])))
        );
    }

    #[test]
    fn prop_formula_expands_sugar() {
        let sig = sig();
        let phi = parse_formula(&sig, "x = c -> (P(x) -> P(c))").unwrap();
        let eq = Formula::eq(Term::var("x"), Term::constant("c"));
        let px = Formula::atom("P", vec![Term::var("x")]);
        let pc = Formula::atom("P", vec![Term::constant("c")]);
        let expected = Formula::Neg(Box::new(Formula::Conj(
            Box::new(eq),
            Box::new(Formula::Neg(Box::new(Formula::Neg(Box::new(Formula::Conj(
                Box::new(px),
                Box::new(Formula::Neg(Box::new(pc))),
            )))))),
        )));
        assert_eq!(phi, expected);
    }

    #[test]
    fn modal_index_must_be_agent() {
        let err = parse_formula(&sig(), "K[y] P(x)").unwrap_err();
        assert!(err.to_string().starts_with("modal index must have type agt"), "{err}");
    }

    #[test]
    fn self_equality_parses_for_both_sorts() {
        let sig = sig();
        assert_eq!(
            parse_formula(&sig, "x = x").unwrap(),
            Formula::eq(Term::var("x"), Term::var("x"))
        );
        assert!(parse_formula(&sig, "y = y").is_ok());
    }

    #[test]
    fn precedence() {
        let sig = parse_signature("var x : agt\nrel A\nrel B\nrel C").unwrap();
        let a = || Formula::atom("A", vec![]);
        let b = || Formula::atom("B", vec![]);
        let c = || Formula::atom("C", vec![]);
        let p = |s| parse_formula(&sig, s).unwrap();
        assert_eq!(p("A & B | C"), a().and(b()).or(c()));
        assert_eq!(p("A | B & C"), a().or(b().and(c())));
        assert_eq!(p("A -> B -> C"), a().implies(b().implies(c())));
        assert_eq!(p("A <-> B -> C"), a().iff(b().implies(c())));
        assert_eq!(p("!A & B"), a().not().and(b()));
        assert_eq!(p("K[x] A & B"), Formula::know(Term::var("x"), a()).and(b()));
        assert_eq!(p("A & forall x. B | C"), a().and(Formula::forall("x", b().or(c()))));
        assert_eq!(p("exists x. A"), Formula::exists("x", a()));
        assert_eq!(p("x != x"), Formula::neq(Term::var("x"), Term::var("x")));
    }

    #[test]
    fn formula_errors() {
        let sig = sig();
        assert_eq!(parse_formula(&sig, "Q(x)"), Err(SyntaxError::Unknown("Q".into())));
        assert!(matches!(
            parse_formula(&sig, "P(x"),
            Err(SyntaxError::Malformed { line: 1, col: 4, .. })
        ));
        assert!(matches!(parse_formula(&sig, "P(x, x)"), Err(SyntaxError::Arity { .. })));
        assert!(matches!(
            parse_formula(&sig, "forall c. P(c)"),
            Err(SyntaxError::NotAVariable(_))
        ));
        assert!(matches!(parse_formula(&sig, "x"), Err(SyntaxError::Malformed { .. })));
        assert!(matches!(
            parse_formula(&sig, "P(x) $"),
            Err(SyntaxError::Malformed { .. })
        ));
    }

    #[test]
    fn argument_types_are_checked() {
        let sig = parse_signature("var y : obj\nrel A : agt").unwrap();
        let err = parse_formula(&sig, "A(y)").unwrap_err();
        assert_eq!(
            err,
            SyntaxError::TypeViolation {
                symbol: "A".into(),
                position: 1,
                found: Sort::Obj,
                expected: TypeTag::Agt
            }
        );
        assert!(err.to_string().contains("obj ⪯ agt fails"));
    }
}
