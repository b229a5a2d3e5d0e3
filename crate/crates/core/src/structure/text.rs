//! Line-oriented text format:
//!
//! ```text
//! # comment
//! language E/2 P/1
//! universe 4
//! E 0 1
//! P 3
//! ```
//!
//! Serialization is canonical: relations sorted by name, facts sorted by
//! `(name, tuple)` with numeric tuple order.

use std::fmt::Write as _;

use super::{Signature, Structure};
use crate::error::{Error, Result};

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

fn number(line: usize, (col, tok): (usize, &str)) -> Result<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(line, col, format!("expected a nonnegative integer, found `{tok}`")));
    }
    tok.parse().map_err(|_| syntax(line, col, format!("integer `{tok}` too large")))
}

pub fn parse_structure(text: &str) -> Result<Structure> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| {
        let t = l.trim_start();
        !t.is_empty() && !t.starts_with('#')
    });

    let (lno, line) = lines.next().ok_or_else(|| syntax(1, 1, "missing `language` line"))?;
    let toks = tokens(line);
    if toks[0].1 != "language" {
        return Err(syntax(lno, toks[0].0, "expected `language`"));
    }
    let mut decls = Vec::new();
    for &(col, tok) in &toks[1..] {
        let (name, arity) =
            tok.split_once('/').ok_or_else(|| syntax(lno, col, format!("expected NAME/ARITY, found `{tok}`")))?;
        let arity = number(lno, (col + name.len() + 1, arity))?;
        if decls.iter().any(|(n, _): &(&str, usize)| *n == name) {
            return Err(Error::DuplicateRelation(name.to_string()));
        }
        decls.push((name, arity));
    }
    let signature = Signature::new(decls)?;

    let (lno, line) = lines.next().ok_or_else(|| syntax(lno + 1, 1, "missing `universe` line"))?;
    let toks = tokens(line);
    if toks[0].1 != "universe" || toks.len() != 2 {
        return Err(syntax(lno, toks[0].0, "expected `universe N`"));
    }
    let size = number(lno, toks[1])?;

    let mut facts = Vec::new();
    for (lno, line) in lines {
        let toks = tokens(line);
        let (col, name) = toks[0];
        let rel = signature.id(name).map_err(|_| syntax(lno, col, format!("undeclared relation `{name}`")))?;
        let args = toks[1..].iter().map(|&t| number(lno, t)).collect::<Result<Vec<_>>>()?;
        facts.push((rel, args));
    }
    Structure::new(signature, size, facts)
}

pub fn serialize_structure(s: &Structure) -> String {
    let mut out = String::new();
    out.push_str("language");
    for r in s.signature().relations() {
        let _ = write!(out, " {}/{}", r.name, r.arity);
    }
    let _ = writeln!(out, "\nuniverse {}", s.size());
    for f in s.facts() {
        out.push_str(s.signature().name(f.rel));
        for e in f.args.iter() {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}
