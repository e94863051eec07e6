//! The line-based `.kripke` text format.
//!
//! ```text
//! kripke
//! aps a b
//! state s1 : a
//! state s2 : b
//! init s1
//! trans s1 -> s2
//! trans s2 -> s1
//! ```

use std::fmt::Write;

use super::{KripkeBuilder, KripkeStructure};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    /// 1-based character column.
    pub column: usize,
}

/// Splits a line into tokens, dropping any `#` comment. `:` and `->` are
/// always tokens of their own.
pub(crate) fn tokenize_line(line: &str) -> Vec<Token<'_>> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut chars = line.char_indices().enumerate().peekable();
    while let Some((col, (byte, c))) = chars.next() {
        let arrow = c == '-' && matches!(chars.peek(), Some((_, (_, '>'))));
        if c.is_whitespace() || c == ':' || arrow {
            if let Some((b, col0)) = start.take() {
                tokens.push(Token {
                    text: &line[b..byte],
                    column: col0 + 1,
                });
            }
            if c == ':' {
                tokens.push(Token {
                    text: &line[byte..byte + 1],
                    column: col + 1,
                });
            } else if arrow {
                chars.next();
                tokens.push(Token {
                    text: &line[byte..byte + 2],
                    column: col + 1,
                });
            }
        } else if start.is_none() {
            start = Some((byte, col));
        }
    }
    if let Some((b, col0)) = start {
        tokens.push(Token {
            text: &line[b..],
            column: col0 + 1,
        });
    }
    tokens
}

pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Checks that `tokens` are all plain words (no `:` or `->`).
pub(crate) fn words<'a>(line: usize, tokens: &[Token<'a>]) -> Result<Vec<&'a str>> {
    tokens
        .iter()
        .map(|t| match t.text {
            ":" | "->" => Err(syntax(line, t.column, format!("unexpected `{}`", t.text))),
            w => Ok(w),
        })
        .collect()
}

/// Column just past the last token, for "expected ..." errors at end of line.
pub(crate) fn end_column(tokens: &[Token<'_>]) -> usize {
    tokens
        .last()
        .map(|t| t.column + t.text.chars().count())
        .unwrap_or(1)
}

/// Parses one `state <id> : <ap>*` line.
pub(crate) fn parse_state_line<'a>(
    line: usize,
    tokens: &[Token<'a>],
) -> Result<(&'a str, Vec<&'a str>)> {
    let id = match tokens.get(1) {
        Some(t) if t.text != ":" && t.text != "->" => t.text,
        Some(t) => return Err(syntax(line, t.column, "expected state identifier")),
        None => return Err(syntax(line, end_column(tokens), "expected state identifier")),
    };
    match tokens.get(2) {
        Some(t) if t.text == ":" => {}
        Some(t) => return Err(syntax(line, t.column, "expected `:`")),
        None => return Err(syntax(line, end_column(tokens), "expected `:`")),
    }
    Ok((id, words(line, &tokens[3..])?))
}

/// Parses one `trans <id> -> <id>+` line.
pub(crate) fn parse_trans_line<'a>(
    line: usize,
    tokens: &[Token<'a>],
) -> Result<(&'a str, Vec<&'a str>)> {
    let from = match tokens.get(1) {
        Some(t) if t.text != ":" && t.text != "->" => t.text,
        Some(t) => return Err(syntax(line, t.column, "expected source state")),
        None => return Err(syntax(line, end_column(tokens), "expected source state")),
    };
    match tokens.get(2) {
        Some(t) if t.text == "->" => {}
        Some(t) => return Err(syntax(line, t.column, "expected `->`")),
        None => return Err(syntax(line, end_column(tokens), "expected `->`")),
    }
    let targets = words(line, &tokens[3..])?;
    if targets.is_empty() {
        return Err(syntax(line, end_column(tokens), "expected at least one successor"));
    }
    Ok((from, targets))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Give every state without successors a self-loop instead of failing.
    pub complete_selfloops: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub structure: KripkeStructure,
    /// States that received a self-loop under `complete_selfloops`.
    pub completed: Vec<String>,
}

pub fn parse_kripke(text: &str) -> Result<KripkeStructure> {
    parse_kripke_with(text, ParseOptions::default()).map(|p| p.structure)
}

pub fn parse_kripke_with(text: &str, options: ParseOptions) -> Result<Parsed> {
    let mut builder = KripkeBuilder::default();
    let mut header = false;
    let mut aps_seen = false;
    let mut state_seen = false;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let tokens = tokenize_line(raw);
        let Some(first) = tokens.first() else {
            continue;
        };
        if !header {
            if first.text != "kripke" || tokens.len() != 1 {
                return Err(syntax(line, first.column, "expected `kripke` header"));
            }
            header = true;
            continue;
        }
        match first.text {
            "aps" => {
                if aps_seen {
                    return Err(syntax(line, first.column, "duplicate `aps` line"));
                }
                if state_seen {
                    return Err(syntax(line, first.column, "`aps` must precede every `state`"));
                }
                aps_seen = true;
                builder = builder.atoms(words(line, &tokens[1..])?);
            }
            "state" => {
                if !aps_seen {
                    return Err(syntax(line, first.column, "`state` before `aps`"));
                }
                state_seen = true;
                let (id, label) = parse_state_line(line, &tokens)?;
                builder = builder.state(id, label);
            }
            "init" => {
                let ids = words(line, &tokens[1..])?;
                if ids.is_empty() {
                    return Err(syntax(line, end_column(&tokens), "expected initial state"));
                }
                for id in ids {
                    builder = builder.init(id);
                }
            }
            "trans" => {
                let (from, targets) = parse_trans_line(line, &tokens)?;
                for to in targets {
                    builder = builder.edge(from, to);
                }
            }
            other => {
                return Err(syntax(line, first.column, format!("unknown keyword `{other}`")));
            }
        }
    }
    if !header {
        return Err(syntax(last_line.max(1), 1, "expected `kripke` header"));
    }
    if !aps_seen {
        return Err(syntax(last_line + 1, 1, "missing `aps` line"));
    }

    let (structure, completed) = if options.complete_selfloops {
        builder.build_completing_selfloops()?
    } else {
        (builder.build()?, Vec::new())
    };
    Ok(Parsed {
        structure,
        completed,
    })
}

/// Canonical text form: sorted propositions, states, labels and successors,
/// one `init` line and one `trans` line per source.
pub fn serialize_kripke(k: &KripkeStructure) -> String {
    let mut out = String::from("kripke\naps");
    for a in k.atoms().iter() {
        out.push(' ');
        out.push_str(a);
    }
    out.push('\n');
    for s in 0..k.num_states() {
        write!(out, "state {} :", k.state_name(s)).unwrap();
        for a in k.label_names(s) {
            out.push(' ');
            out.push_str(a);
        }
        out.push('\n');
    }
    out.push_str("init");
    for &s in k.initial() {
        out.push(' ');
        out.push_str(k.state_name(s));
    }
    out.push('\n');
    for s in 0..k.num_states() {
        write!(out, "trans {} ->", k.state_name(s)).unwrap();
        for &t in k.successors(s) {
            out.push(' ');
            out.push_str(k.state_name(t));
        }
        out.push('\n');
    }
    out
}
