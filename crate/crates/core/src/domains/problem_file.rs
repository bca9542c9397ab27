//! Line-oriented text format for problems.
//!
//! ```text
//! problem <name>
//! init: <prop> <prop> ...
//! goal: <prop> ...
//! operator <name>
//!   pre: <prop> ...
//!   add: <prop> ...
//!   del: <prop> ...
//!   cadd: (<prop> [& <prop>]* -> <prop>) ...
//!   cdel: (<prop> [& <prop>]* -> <prop>) ...
//! end
//! ```
//!
//! Propositions match `[a-z][a-z0-9_]*`. Names are any run of characters
//! other than whitespace, `#`, `:`, `(`, `)` and `&`. Blank lines and
//! indentation are ignored and `#` starts a comment. Within an operator every
//! field line is optional and may appear at most once.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::Error;
use crate::problem::{OperatorDraft, Problem, ProblemBuilder};
use crate::prop::PropSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProblemFileError {
    #[error("{line}:{col}: expected {expected}, found {found}")]
    Syntax { line: usize, col: usize, expected: String, found: String },
    #[error("{line}:{col}: {message}")]
    Duplicate { line: usize, col: usize, message: String },
    #[error("line {line}: {source}")]
    Semantic { line: usize, source: Error },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Word(&'a str),
    Colon,
    Open,
    Close,
    Amp,
    Arrow,
}

fn describe(t: Option<&(usize, Tok<'_>)>) -> String {
    match t {
        None => "end of line".into(),
        Some((_, Tok::Word(w))) => format!("`{w}`"),
        Some((_, Tok::Colon)) => "`:`".into(),
        Some((_, Tok::Open)) => "`(`".into(),
        Some((_, Tok::Close)) => "`)`".into(),
        Some((_, Tok::Amp)) => "`&`".into(),
        Some((_, Tok::Arrow)) => "`->`".into(),
    }
}

fn is_name_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '#' | ':' | '(' | ')' | '&')
}

/// Tokens of one line with 1-based columns.
fn lex(line: &str) -> Vec<(usize, Tok<'_>)> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut it = code.char_indices().peekable();
    while let Some((i, c)) = it.next() {
        let col = code[..i].chars().count() + 1;
        match c {
            c if c.is_whitespace() => {}
            ':' => out.push((col, Tok::Colon)),
            '(' => out.push((col, Tok::Open)),
            ')' => out.push((col, Tok::Close)),
            '&' => out.push((col, Tok::Amp)),
            '-' if matches!(it.peek(), Some((_, '>'))) => {
                it.next();
                out.push((col, Tok::Arrow));
            }
            _ => {
                let mut end = i + c.len_utf8();
                while let Some(&(j, d)) = it.peek() {
                    // A `->` ends a word.
                    if !is_name_char(d) || (d == '-' && code[j..].starts_with("->")) {
                        break;
                    }
                    end = j + d.len_utf8();
                    it.next();
                }
                out.push((col, Tok::Word(&code[i..end])));
            }
        }
    }
    out
}

pub fn is_prop_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some('a'..='z')) && cs.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
}

struct Line<'a> {
    no: usize,
    toks: Vec<(usize, Tok<'a>)>,
    /// Column just past the last character, for end-of-line errors.
    end_col: usize,
    pos: usize,
}

impl<'a> Line<'a> {
    fn err(&self, expected: &str) -> ProblemFileError {
        let t = self.toks.get(self.pos);
        ProblemFileError::Syntax {
            line: self.no,
            col: t.map_or(self.end_col, |t| t.0),
            expected: expected.into(),
            found: describe(t),
        }
    }

    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.0)
    }

    fn expect(&mut self, tok: Tok<'_>, what: &str) -> Result<(), ProblemFileError> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn prop(&mut self) -> Result<String, ProblemFileError> {
        match self.peek() {
            Some(Tok::Word(w)) if is_prop_name(w) => {
                self.pos += 1;
                Ok(w.to_string())
            }
            _ => Err(self.err("a proposition")),
        }
    }

    fn name(&mut self) -> Result<String, ProblemFileError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                self.pos += 1;
                Ok(w.to_string())
            }
            _ => Err(self.err("a name")),
        }
    }

    fn end(&self) -> Result<(), ProblemFileError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.err("end of line"))
        }
    }

    fn props(&mut self) -> Result<Vec<String>, ProblemFileError> {
        let mut out = Vec::new();
        while self.pos < self.toks.len() {
            out.push(self.prop()?);
        }
        Ok(out)
    }

    fn conditionals(&mut self) -> Result<Vec<(Vec<String>, String)>, ProblemFileError> {
        let mut out = Vec::new();
        while self.pos < self.toks.len() {
            self.expect(Tok::Open, "`(`")?;
            let mut deps = alloc::vec![self.prop()?];
            while self.peek() == Some(Tok::Amp) {
                self.pos += 1;
                deps.push(self.prop()?);
            }
            self.expect(Tok::Arrow, "`&` or `->`")?;
            let effect = self.prop()?;
            self.expect(Tok::Close, "`)`")?;
            out.push((deps, effect));
        }
        Ok(out)
    }
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &str) -> Result<Problem, ProblemFileError> {
    let mut lines = text.lines().enumerate().filter_map(|(i, l)| {
        let toks = lex(l);
        (!toks.is_empty()).then(|| Line { no: i + 1, end_col: l.split('#').next().unwrap_or("").trim_end().chars().count() + 1, toks, pos: 0 })
    });
    let last_line = text.lines().count().max(1);
    let eof = |expected: &str| ProblemFileError::Syntax {
        line: last_line,
        col: 1,
        expected: expected.into(),
        found: "end of file".into(),
    };

    let mut l = lines.next().ok_or_else(|| eof("`problem`"))?;
    l.expect(Tok::Word("problem"), "`problem`")?;
    let name = l.name()?;
    l.end()?;
    let mut builder = ProblemBuilder::new(name);

    let mut l = lines.next().ok_or_else(|| eof("`init:`"))?;
    l.expect(Tok::Word("init"), "`init:`")?;
    l.expect(Tok::Colon, "`:`")?;
    builder = builder.init(l.props()?);

    let mut l = lines.next().ok_or_else(|| eof("`goal:`"))?;
    l.expect(Tok::Word("goal"), "`goal:`")?;
    l.expect(Tok::Colon, "`:`")?;
    builder = builder.goals(l.props()?);

    // (operator, line it starts on)
    let mut ops: Vec<(OperatorDraft, usize)> = Vec::new();
    while let Some(mut l) = lines.next() {
        l.expect(Tok::Word("operator"), "`operator`")?;
        let start = l.no;
        let name_col = l.col();
        let mut op = OperatorDraft::new(l.name()?);
        l.end()?;
        if let Some((_, first)) = ops.iter().find(|(o, _)| o.name == op.name) {
            return Err(ProblemFileError::Duplicate {
                line: start,
                col: name_col,
                message: format!("operator `{}` already defined on line {first}", op.name),
            });
        }
        let mut seen: Vec<&str> = Vec::new();
        loop {
            let mut l = lines.next().ok_or_else(|| eof("an operator field or `end`"))?;
            let field = match l.peek() {
                Some(Tok::Word(w @ ("pre" | "add" | "del" | "cadd" | "cdel"))) => w,
                Some(Tok::Word("end")) => {
                    l.pos += 1;
                    l.end()?;
                    break;
                }
                _ => return Err(l.err("`pre:`, `add:`, `del:`, `cadd:`, `cdel:` or `end`")),
            };
            if seen.contains(&field) {
                return Err(ProblemFileError::Duplicate {
                    line: l.no,
                    col: l.col(),
                    message: format!("duplicate `{field}:` line in operator `{}`", op.name),
                });
            }
            seen.push(field);
            l.pos += 1;
            l.expect(Tok::Colon, "`:`")?;
            match field {
                "pre" => op.pre = l.props()?,
                "add" => op.adds = l.props()?,
                "del" => op.dels = l.props()?,
                "cadd" => op.cadds = l.conditionals()?,
                _ => op.cdels = l.conditionals()?,
            }
        }
        ops.push((op, start));
    }

    let lines_of: Vec<(String, usize)> = ops.iter().map(|(o, n)| (o.name.clone(), *n)).collect();
    for (op, _) in ops {
        builder.push_operator(op);
    }
    builder.build().map_err(|source| {
        let line = match &source {
            Error::DeleteNotPrecondition { operator, .. } | Error::ConditionalDeleteOutsideDeps { operator, .. } => {
                lines_of.iter().find(|(n, _)| n == operator).map_or(0, |(_, l)| *l)
            }
            _ => 0,
        };
        ProblemFileError::Semantic { line, source }
    })
}

/// Canonical text: fields in grammar order, propositions in symbol order,
/// `pre`/`add`/`del` always present, `cadd`/`cdel` only when non-empty.
pub fn serialize_problem(p: &Problem) -> String {
    let names = |s: &PropSet| s.iter().map(|x| p.prop_name(x)).collect::<Vec<_>>();
    let list = |label: &str, s: &PropSet| {
        let ns = names(s);
        if ns.is_empty() {
            format!("{label}:")
        } else {
            format!("{label}: {}", ns.join(" "))
        }
    };
    let mut out = String::new();
    let _ = writeln!(out, "problem {}", p.name());
    let _ = writeln!(out, "{}", list("init", p.init()));
    let _ = writeln!(out, "{}", list("goal", p.goals()));
    for op in p.library() {
        let e = &op.effects;
        let _ = writeln!(out, "operator {}", op.name);
        let _ = writeln!(out, "  {}", list("pre", &e.pre));
        let _ = writeln!(out, "  {}", list("add", &e.adds));
        let _ = writeln!(out, "  {}", list("del", &e.dels));
        for (label, cs) in [("cadd", &e.cadds), ("cdel", &e.cdels)] {
            if !cs.is_empty() {
                let parts: Vec<String> = cs
                    .iter()
                    .map(|c| format!("({} -> {})", names(&c.deps).join(" & "), p.prop_name(c.effect)))
                    .collect();
                let _ = writeln!(out, "  {label}: {}", parts.join(" "));
            }
        }
        let _ = writeln!(out, "end");
    }
    out
}
