use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{FormatError, Resolver};
use crate::nonstandard::{NonStandardModel, NonStandardModelBuilder, RelExtension};
use crate::semantics::{Element, Frame, StandardModel, StandardModelBuilder, World};
use crate::syntax::parse::{declare_line, lex, strip_comment, Cursor, Tok};
use crate::syntax::{Signature, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoadedModel {
    Standard(StandardModel),
    NonStandard(NonStandardModel),
}

impl LoadedModel {
    pub fn signature(&self) -> &Signature {
        match self {
            LoadedModel::Standard(m) => m.signature(),
            LoadedModel::NonStandard(n) => n.signature(),
        }
    }

    pub fn frame(&self) -> &Frame {
        match self {
            LoadedModel::Standard(m) => m.frame(),
            LoadedModel::NonStandard(n) => n.frame(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LoadedModel::Standard(_) => "standard",
            LoadedModel::NonStandard(_) => "nonstandard",
        }
    }

    /// The file text for this model.
    pub fn write(&self) -> String {
        match self {
            LoadedModel::Standard(m) => write_standard(m),
            LoadedModel::NonStandard(n) => write_nonstandard(n),
        }
    }
}

/// Applies a `sig <path>` line or an inline declaration. `Ok(false)` when the
/// line is neither.
pub(crate) fn declaration(
    sig: &mut Signature,
    text: &str,
    line: usize,
    resolve: &Resolver<'_>,
) -> Result<bool, FormatError> {
    let trimmed = text.trim();
    if let Some(path) = trimmed.strip_prefix("sig ").map(str::trim) {
        let included = resolve(path).map_err(|m| FormatError::at(line, m))?;
        for (i, raw) in included.lines().enumerate() {
            let l = strip_comment(raw);
            if l.trim().is_empty() {
                continue;
            }
            let declared = declare_line(sig, l, i + 1).map_err(|e| FormatError::syntax(i + 1, e).in_file(path))?;
            if !declared {
                return Err(FormatError::at(i + 1, "expected `var`, `const`, `fun` or `rel`").in_file(path));
            }
        }
        return Ok(true);
    }
    declare_line(sig, text, line).map_err(|e| FormatError::syntax(line, e))
}

/// Non-empty lines with comments removed, numbered from 1.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, strip_comment(raw)))
        .filter(|(_, l)| !l.trim().is_empty())
}

struct LineParser<'f> {
    cur: Cursor,
    frame: &'f Frame,
    line: usize,
}

impl<'f> LineParser<'f> {
    fn new(text: &str, line: usize, frame: &'f Frame) -> Result<Self, FormatError> {
        let cur = Cursor::new(lex(text, line, 1).map_err(|e| FormatError::syntax(line, e))?);
        Ok(LineParser { cur, frame, line })
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, FormatError> {
        Err(FormatError::syntax(self.line, self.cur.error(message)))
    }

    fn wrap<T>(&self, r: Result<T, crate::syntax::SyntaxError>) -> Result<T, FormatError> {
        r.map_err(|e| FormatError::syntax(self.line, e))
    }

    fn ident(&mut self) -> Result<String, FormatError> {
        let r = self.cur.ident();
        self.wrap(r)
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), FormatError> {
        let r = self.cur.expect(tok);
        self.wrap(r)
    }

    fn end(&self) -> Result<(), FormatError> {
        self.wrap(self.cur.expect_end())
    }

    fn element(&mut self) -> Result<Element, FormatError> {
        let name = match self.cur.peek() {
            Tok::Ident(n) => n.clone(),
            _ => return self.err("expected an element name"),
        };
        match self.frame.element(&name) {
            Some(e) => {
                self.cur.bump();
                Ok(e)
            }
            None => self.err(format!("unknown element `{name}`")),
        }
    }

    fn world(&mut self) -> Result<World, FormatError> {
        let name = match self.cur.peek() {
            Tok::Ident(n) => n.clone(),
            _ => return self.err("expected a world name"),
        };
        match self.frame.world(&name) {
            Some(w) => {
                self.cur.bump();
                Ok(w)
            }
            None => self.err(format!("unknown world `{name}`")),
        }
    }

    /// `(a, b)`; `()` is the empty tuple.
    fn tuple(&mut self) -> Result<Vec<Element>, FormatError> {
        self.expect(&Tok::LParen)?;
        let mut out = Vec::new();
        if self.cur.eat(&Tok::RParen) {
            return Ok(out);
        }
        loop {
            out.push(self.element()?);
            if self.cur.eat(&Tok::RParen) {
                return Ok(out);
            }
            self.expect(&Tok::Comma)?;
        }
    }

    /// `{ (a), (b) }`, or `true` / `false` for nullary relations.
    fn tuple_set(&mut self) -> Result<BTreeSet<Vec<Element>>, FormatError> {
        if let Tok::Ident(b) = self.cur.peek() {
            let set = match b.as_str() {
                "true" => [Vec::new()].into_iter().collect(),
                "false" => BTreeSet::new(),
                _ => return self.err("expected `{`, `true` or `false`"),
            };
            self.cur.bump();
            return Ok(set);
        }
        self.expect(&Tok::LBrace)?;
        let mut out = BTreeSet::new();
        if self.cur.eat(&Tok::RBrace) {
            return Ok(out);
        }
        loop {
            out.insert(self.tuple()?);
            if self.cur.eat(&Tok::RBrace) {
                return Ok(out);
            }
            self.expect(&Tok::Comma)?;
        }
    }

    /// `diag`, `empty` or a tuple set.
    fn key(&mut self) -> Result<RelExtension, FormatError> {
        if let Tok::Ident(k) = self.cur.peek() {
            let key = match k.as_str() {
                "diag" => RelExtension::diag(self.frame),
                "empty" => RelExtension::empty(),
                _ => return self.err("expected `diag`, `empty` or `{`"),
            };
            self.cur.bump();
            return Ok(key);
        }
        Ok(RelExtension::new(self.tuple_set()?))
    }

    /// Optional argument tuple after a function symbol.
    fn arguments(&mut self) -> Result<Vec<Element>, FormatError> {
        if matches!(self.cur.peek(), Tok::LParen) {
            self.tuple()
        } else {
            Ok(Vec::new())
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Standard,
    NonStandard,
}

fn names(p: &mut LineParser<'_>) -> Result<Vec<String>, FormatError> {
    let mut out = vec![p.ident()?];
    while p.cur.eat(&Tok::Comma) {
        out.push(p.ident()?);
    }
    p.end()?;
    Ok(out)
}

/// Parses a `.tmm` or `.tmn` file. `resolve` supplies the text of `sig` lines.
pub fn parse_model(text: &str, resolve: &Resolver<'_>) -> Result<LoadedModel, FormatError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| FormatError::at(0, "empty model file"))?;
    let kind = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["model", "standard"] => Kind::Standard,
        ["model", "nonstandard"] => Kind::NonStandard,
        _ => {
            return Err(FormatError::at(
                hline,
                "expected `model standard` or `model nonstandard`",
            ))
        }
    };

    let mut sig = Signature::new();
    let (mut agents, mut objects, mut worlds) = (None, None, None);
    let mut deferred = Vec::new();
    // frame lines are parsed before the frame exists
    let empty = Frame::numbered(1, 1, 1).expect("trivial frame");
    for (line, text) in lines {
        if declaration(&mut sig, text, line, resolve)? {
            continue;
        }
        let first = text.split_whitespace().next().unwrap_or("");
        let slot = match first {
            "agents" => &mut agents,
            "objects" => &mut objects,
            "worlds" => &mut worlds,
            "R" | "I" | "J" => {
                deferred.push((line, text));
                continue;
            }
            other => {
                return Err(FormatError::at(
                    line,
                    format!("unexpected line starting with `{other}`"),
                ))
            }
        };
        if slot.is_some() {
            return Err(FormatError::at(line, format!("`{first}` given twice")));
        }
        let mut p = LineParser::new(text, line, &empty)?;
        p.ident()?;
        *slot = Some(names(&mut p)?);
    }
    let missing = |what: &str| FormatError::at(0, format!("missing `{what}` line"));
    let mut frame = Frame::new(
        agents.ok_or_else(|| missing("agents"))?,
        objects.ok_or_else(|| missing("objects"))?,
        worlds.ok_or_else(|| missing("worlds"))?,
    )
    .map_err(FormatError::model)?;

    for &(line, text) in deferred.iter().filter(|(_, t)| t.trim_start().starts_with('R')) {
        let mut pairs = Vec::new();
        let mut p = LineParser::new(text, line, &frame)?;
        p.ident()?;
        let agent = p.element()?;
        if agent.sort != crate::syntax::Sort::Agt {
            return Err(FormatError::at(line, "accessibility is indexed by agents"));
        }
        p.expect(&Tok::Colon)?;
        if !p.cur.at_end() {
            loop {
                let from = p.world()?;
                p.expect(&Tok::Arrow)?;
                let to = p.world()?;
                pairs.push((from, to));
                if !p.cur.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        p.end()?;
        for (from, to) in pairs {
            frame
                .add_access(agent, from, to)
                .map_err(|e| FormatError::at(line, e.to_string()))?;
        }
    }

    let interp = deferred.iter().filter(|(_, t)| !t.trim_start().starts_with('R'));
    match kind {
        Kind::Standard => {
            let mut b = StandardModel::builder(sig.clone(), frame.clone());
            for &(line, text) in interp {
                standard_line(&mut b, &sig, &frame, text, line)?;
            }
            Ok(LoadedModel::Standard(b.build().map_err(FormatError::model)?))
        }
        Kind::NonStandard => {
            let mut b = NonStandardModel::builder(sig.clone(), frame.clone());
            for &(line, text) in interp {
                nonstandard_line(&mut b, &sig, &frame, text, line)?;
            }
            Ok(LoadedModel::NonStandard(b.build().map_err(FormatError::model)?))
        }
    }
}

fn standard_line(
    b: &mut StandardModelBuilder,
    sig: &Signature,
    frame: &Frame,
    text: &str,
    line: usize,
) -> Result<(), FormatError> {
    let mut p = LineParser::new(text, line, frame)?;
    if p.ident()? != "I" {
        return p.err("`J` lines belong in non-standard models");
    }
    let name = p.ident()?;
    match sig.lookup(&name) {
        Some(Symbol::Constant(_)) => {
            p.expect(&Tok::At)?;
            let w = p.world()?;
            p.expect(&Tok::Eq)?;
            let e = p.element()?;
            p.end()?;
            b.constant(&name, w, e);
        }
        Some(Symbol::Function(_)) => {
            let args = p.arguments()?;
            p.expect(&Tok::At)?;
            let w = p.world()?;
            p.expect(&Tok::Eq)?;
            let e = p.element()?;
            p.end()?;
            b.function_entry(&name, w, args, e);
        }
        Some(Symbol::Relation(_)) => {
            p.expect(&Tok::At)?;
            let w = p.world()?;
            p.expect(&Tok::Eq)?;
            let set = p.tuple_set()?;
            p.end()?;
            b.relation(&name, w, set);
        }
        _ => {
            return Err(FormatError::at(
                line,
                format!("`{name}` is not a declared constant, function or relation"),
            ))
        }
    }
    Ok(())
}

fn nonstandard_line(
    b: &mut NonStandardModelBuilder,
    sig: &Signature,
    frame: &Frame,
    text: &str,
    line: usize,
) -> Result<(), FormatError> {
    let mut p = LineParser::new(text, line, frame)?;
    if p.ident()? != "J" {
        return p.err("`I` lines belong in standard models");
    }
    let mut name = p.ident()?;
    let is_default = name == "default";
    if is_default {
        name = p.ident()?;
    }
    let symbol = sig.lookup(&name);
    if let Some(Symbol::Relation(_)) = symbol {
        if is_default {
            return p.err("relations have no default");
        }
        p.expect(&Tok::At)?;
        let w = p.world()?;
        p.expect(&Tok::Eq)?;
        let set = p.tuple_set()?;
        p.end()?;
        b.relation(&name, w, RelExtension::new(set));
        return Ok(());
    }
    let is_function = match symbol {
        Some(Symbol::Constant(_)) => false,
        Some(Symbol::Function(_)) => true,
        _ => {
            return Err(FormatError::at(
                line,
                format!("`{name}` is not a declared constant, function or relation"),
            ))
        }
    };
    let args = if is_function { p.arguments()? } else { Vec::new() };
    p.expect(&Tok::At)?;
    let w = p.world()?;
    let key = if p.cur.eat(&Tok::LBracket) {
        let k = p.key()?;
        p.expect(&Tok::RBracket)?;
        Some(k)
    } else {
        None
    };
    p.expect(&Tok::Eq)?;
    let e = p.element()?;
    p.end()?;
    match (is_default, key, is_function) {
        (true, None, false) => b.default_constant(&name, w, e),
        (true, None, true) => b.default_function_entry(&name, w, args, e),
        (false, Some(x), false) => b.override_constant(&name, w, x, e),
        (false, Some(x), true) => b.override_function_entry(&name, w, x, args, e),
        (true, Some(_), _) => return Err(FormatError::at(line, "a default takes no extension key")),
        (false, None, _) => return Err(FormatError::at(line, "expected `default` or an extension key `[...]`")),
    };
    Ok(())
}

fn write_frame(out: &mut String, sig: &Signature, frame: &Frame) {
    out.push_str(&sig.to_string());
    let join = |it: &mut dyn Iterator<Item = Element>| {
        it.map(|e| frame.element_name(e).to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    let _ = writeln!(out, "agents {}", join(&mut frame.agents()));
    let _ = writeln!(out, "objects {}", join(&mut frame.objects()));
    let worlds: Vec<&str> = frame.worlds().map(|w| frame.world_name(w)).collect();
    let _ = writeln!(out, "worlds {}", worlds.join(", "));
    for a in frame.agents() {
        let pairs = frame.access_pairs(a);
        if pairs.is_empty() {
            continue;
        }
        let rendered: Vec<String> = pairs
            .iter()
            .map(|&(u, v)| format!("{} -> {}", frame.world_name(u), frame.world_name(v)))
            .collect();
        let _ = writeln!(out, "R {} : {}", frame.element_name(a), rendered.join(", "));
    }
}

fn render_set(frame: &Frame, arity: usize, set: &BTreeSet<Vec<Element>>) -> String {
    if arity == 0 {
        return if set.is_empty() { "false" } else { "true" }.to_string();
    }
    RelExtension::new(set.clone()).render(frame)
}

fn render_args(frame: &Frame, args: &[Element]) -> String {
    if args.is_empty() {
        String::new()
    } else {
        frame.render_tuple(args)
    }
}

fn render_key(frame: &Frame, x: &RelExtension) -> String {
    if x.is_empty() {
        "empty".into()
    } else if *x == RelExtension::diag(frame) {
        "diag".into()
    } else {
        x.render(frame)
    }
}

/// `.tmm` text with the signature declared inline.
pub fn write_standard(m: &StandardModel) -> String {
    let (sig, frame) = (m.signature(), m.frame());
    let mut out = String::from("model standard\n");
    write_frame(&mut out, sig, frame);
    for w in frame.worlds() {
        let wn = frame.world_name(w);
        for (c, _) in sig.constants() {
            let e = m.constant(c, w).expect("total");
            let _ = writeln!(out, "I {c} @ {wn} = {}", frame.element_name(e));
        }
        for (f, _) in sig.functions() {
            for (args, e) in m.function(f, w).expect("total").entries() {
                let _ = writeln!(
                    out,
                    "I {f}{} @ {wn} = {}",
                    render_args(frame, args),
                    frame.element_name(e)
                );
            }
        }
        for (p, types) in sig.relations() {
            let set = m.relation(p, w).expect("total");
            let _ = writeln!(out, "I {p} @ {wn} = {}", render_set(frame, types.len(), set));
        }
    }
    out
}

/// `.tmn` text with the signature declared inline.
pub fn write_nonstandard(n: &NonStandardModel) -> String {
    let (sig, frame) = (n.signature(), n.frame());
    let mut out = String::from("model nonstandard\n");
    write_frame(&mut out, sig, frame);
    for w in frame.worlds() {
        let wn = frame.world_name(w);
        for (p, types) in sig.relations() {
            let ext = n.relation(p, w).expect("total");
            let _ = writeln!(out, "J {p} @ {wn} = {}", render_set(frame, types.len(), ext.as_set()));
        }
        for (c, _) in sig.constants() {
            let e = n.default_constant(c, w).expect("total");
            let _ = writeln!(out, "J default {c} @ {wn} = {}", frame.element_name(e));
            for (x, e) in n.constant_overrides(c, w) {
                let _ = writeln!(
                    out,
                    "J {c} @ {wn} [ {} ] = {}",
                    render_key(frame, x),
                    frame.element_name(e)
                );
            }
        }
        for (f, _) in sig.functions() {
            for (args, e) in n.default_function(f, w).expect("total").entries() {
                let _ = writeln!(
                    out,
                    "J default {f}{} @ {wn} = {}",
                    render_args(frame, args),
                    frame.element_name(e)
                );
            }
            for (x, table) in n.function_overrides(f, w) {
                for (args, e) in table.entries() {
                    let _ = writeln!(
                        out,
                        "J {f}{} @ {wn} [ {} ] = {}",
                        render_args(frame, args),
                        render_key(frame, x),
                        frame.element_name(e)
                    );
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::no_includes;
    use crate::nonstandard::{build_lewis_example, build_prop3_countermodel};
    use crate::syntax::parse_signature;

    const SMALLEST: &str = "\
model standard
var x : agt
const c : agt
fun f : agt -> obj
rel P : agtobj
rel Q :
agents a
objects o
worlds w
I c @ w = a
I f(a) @ w = o
I P @ w = { (a) }
I Q @ w = true
";

    #[test]
    fn standard_round_trip() {
        let LoadedModel::Standard(m) = parse_model(SMALLEST, &no_includes).unwrap() else {
            panic!("wrong kind")
        };
        assert_eq!(m.constant("c", World(0)), Some(Element::agent(0)));
        assert_eq!(m.relation("Q", World(0)).unwrap().len(), 1);
        let text = write_standard(&m);
        assert_eq!(parse_model(&text, &no_includes).unwrap(), LoadedModel::Standard(m));
    }

    #[test]
    fn nonstandard_round_trip() {
        let sig = parse_signature("var x : agt\nconst c : agt\nrel P : agtobj").unwrap();
        let (n, _, _) = build_prop3_countermodel(&sig, "x", "c", "P").unwrap();
        let text = write_nonstandard(&n);
        assert!(text.contains("J c @ w [ diag ] = alpha"));
        assert!(text.contains("J c @ w [ { (alpha) } ] = beta"));
        assert_eq!(parse_model(&text, &no_includes).unwrap(), LoadedModel::NonStandard(n));
        let (lewis, _) = build_lewis_example();
        let text = write_nonstandard(&lewis);
        assert_eq!(
            parse_model(&text, &no_includes).unwrap(),
            LoadedModel::NonStandard(lewis)
        );
    }

    #[test]
    fn sig_lines_are_resolved() {
        let text = "model standard\nsig basic.tms\nagents a\nobjects o\nworlds w\nI c @ w = a\n";
        let resolve = |p: &str| {
            if p == "basic.tms" {
                Ok("const c : agt\nrel P : agtobj".to_string())
            } else {
                Err(format!("no {p}"))
            }
        };
        let m = parse_model(text, &resolve).unwrap();
        assert!(m.signature().relation("P").is_some());
        let err = parse_model(text, &no_includes).unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn errors_carry_lines() {
        let bad = SMALLEST.replace("I c @ w = a", "I c @ w = nobody");
        let err = parse_model(&bad, &no_includes).unwrap_err();
        assert_eq!(err.line, 10);
        assert!(err.message.contains("nobody"));

        let partial = SMALLEST.replace("I f(a) @ w = o\n", "");
        let err = parse_model(&partial, &no_includes).unwrap_err();
        assert!(err.message.contains("missing"), "{err}");

        let missing_default =
            "model nonstandard\nconst c : agt\nagents a\nobjects o\nworlds w\nJ c @ w [ empty ] = a\n";
        let err = parse_model(missing_default, &no_includes).unwrap_err();
        assert!(err.message.contains("no default"), "{err}");

        assert_eq!(parse_model("model odd\n", &no_includes).unwrap_err().line, 1);
    }
}
