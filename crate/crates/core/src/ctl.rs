//! CTL formulas and explicit-state model checking.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! f ::= f -> f                    (right-associative)
//!     | f | f
//!     | f & f
//!     | ! f | EX f | AX f | EF f | AF f | EG f | AG f
//!     | true | false | ident | ( f ) | E [ f U f ] | A [ f U f ]
//! ```
//!
//! Evaluation reduces every operator to `EX`, `EG` and `E[· U ·]` plus
//! boolean connectives and computes satisfaction sets by backward fixpoints.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::kripke::KripkeStructure;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    EX(Box<Formula>),
    AX(Box<Formula>),
    EF(Box<Formula>),
    AF(Box<Formula>),
    EG(Box<Formula>),
    AG(Box<Formula>),
    EU(Box<Formula>, Box<Formula>),
    AU(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Self {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Self {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Self {
        Formula::Implies(Box::new(f), Box::new(g))
    }

    pub fn ex(f: Formula) -> Self {
        Formula::EX(Box::new(f))
    }

    pub fn eg(f: Formula) -> Self {
        Formula::EG(Box::new(f))
    }

    pub fn eu(f: Formula, g: Formula) -> Self {
        Formula::EU(Box::new(f), Box::new(g))
    }

    /// Depth of operator nesting; atoms and constants have depth 0.
    pub fn nesting(&self) -> usize {
        use Formula::*;
        match self {
            True | False | Atom(_) => 0,
            Not(f) | EX(f) | AX(f) | EF(f) | AF(f) | EG(f) | AG(f) => 1 + f.nesting(),
            And(f, g) | Or(f, g) | Implies(f, g) | EU(f, g) | AU(f, g) => {
                1 + f.nesting().max(g.nesting())
            }
        }
    }

    /// Rewrites derived operators into `EX`, `EG`, `E[· U ·]` and booleans.
    pub fn normalize(&self) -> Formula {
        use Formula::*;
        let n = |f: &Formula| f.normalize();
        let not = Formula::not;
        match self {
            True => True,
            False => False,
            Atom(a) => Atom(a.clone()),
            Not(f) => not(n(f)),
            And(f, g) => Formula::and(n(f), n(g)),
            Or(f, g) => Formula::or(n(f), n(g)),
            Implies(f, g) => Formula::implies(n(f), n(g)),
            EX(f) => Formula::ex(n(f)),
            EG(f) => Formula::eg(n(f)),
            EU(f, g) => Formula::eu(n(f), n(g)),
            AX(f) => not(Formula::ex(not(n(f)))),
            EF(f) => Formula::eu(True, n(f)),
            AF(f) => not(Formula::eg(not(n(f)))),
            AG(f) => not(Formula::eu(True, not(n(f)))),
            AU(f, g) => {
                let (f, g) = (n(f), n(g));
                not(Formula::or(
                    Formula::eu(not(g.clone()), Formula::and(not(f), not(g.clone()))),
                    Formula::eg(not(g)),
                ))
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Atom(a) => write!(f, "{a}"),
            Not(g) => write!(f, "!{g}"),
            And(g, h) => write!(f, "({g} & {h})"),
            Or(g, h) => write!(f, "({g} | {h})"),
            Implies(g, h) => write!(f, "({g} -> {h})"),
            EX(g) => write!(f, "EX {g}"),
            AX(g) => write!(f, "AX {g}"),
            EF(g) => write!(f, "EF {g}"),
            AF(g) => write!(f, "AF {g}"),
            EG(g) => write!(f, "EG {g}"),
            AG(g) => write!(f, "AG {g}"),
            EU(g, h) => write!(f, "E[{g} U {h}]"),
            AU(g, h) => write!(f, "A[{g} U {h}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    End,
}

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: 1,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let single = match c {
            '!' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, col));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, col));
            i += 2;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Word(chars[start..i].iter().collect()), col));
        } else {
            return Err(err(col, format!("unexpected character `{c}`")));
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

const RESERVED: &[&str] = &[
    "true", "false", "EX", "AX", "EF", "AF", "EG", "AG", "E", "A", "U",
];

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(err(self.column(), format!("expected {what}")))
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<(Formula, Formula)> {
        self.expect(Tok::LBracket, "`[`")?;
        let f = self.implication()?;
        if *self.peek() != Tok::Word("U".into()) {
            return Err(err(self.column(), "expected `U`"));
        }
        self.bump();
        let g = self.implication()?;
        self.expect(Tok::RBracket, "`]`")?;
        Ok((f, g))
    }

    fn unary(&mut self) -> Result<Formula> {
        let col = self.column();
        match self.bump() {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::LParen => {
                let f = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Word(w) => {
                let boxed = |p: &mut Parser| p.unary().map(Box::new);
                match w.as_str() {
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    "EX" => Ok(Formula::EX(boxed(self)?)),
                    "AX" => Ok(Formula::AX(boxed(self)?)),
                    "EF" => Ok(Formula::EF(boxed(self)?)),
                    "AF" => Ok(Formula::AF(boxed(self)?)),
                    "EG" => Ok(Formula::EG(boxed(self)?)),
                    "AG" => Ok(Formula::AG(boxed(self)?)),
                    "E" => {
                        let (f, g) = self.until()?;
                        Ok(Formula::eu(f, g))
                    }
                    "A" => {
                        let (f, g) = self.until()?;
                        Ok(Formula::AU(Box::new(f), Box::new(g)))
                    }
                    "U" => Err(err(col, "unexpected `U`")),
                    _ => Ok(Formula::Atom(w)),
                }
            }
            Tok::End => Err(err(col, "unexpected end of formula")),
            _ => Err(err(col, "expected a formula")),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.implication()?;
    if *p.peek() != Tok::End {
        return Err(err(p.column(), "unexpected trailing input"));
    }
    Ok(f)
}

/// Whether `name` can be used as a proposition inside a formula.
pub fn is_usable_atom(name: &str) -> bool {
    !RESERVED.contains(&name)
}

fn ex(k: &KripkeStructure, sat: &[bool]) -> Vec<bool> {
    (0..k.num_states())
        .map(|s| k.successors(s).iter().any(|&t| sat[t]))
        .collect()
}

/// Least fixpoint of `g ∨ (f ∧ EX Z)`, by backward search from `g`.
fn eu(k: &KripkeStructure, pred: &[Vec<usize>], f: &[bool], g: &[bool]) -> Vec<bool> {
    let mut sat = g.to_vec();
    let mut queue: VecDeque<usize> = (0..sat.len()).filter(|&s| sat[s]).collect();
    while let Some(t) = queue.pop_front() {
        for &s in &pred[t] {
            if !sat[s] && f[s] {
                sat[s] = true;
                queue.push_back(s);
            }
        }
    }
    debug_assert_eq!(sat.len(), k.num_states());
    sat
}

/// Greatest fixpoint of `f ∧ EX Z`: repeatedly drop states of `f` whose
/// successors all left the set.
fn eg(k: &KripkeStructure, pred: &[Vec<usize>], f: &[bool]) -> Vec<bool> {
    let mut sat = f.to_vec();
    let mut live: Vec<usize> = (0..sat.len())
        .map(|s| k.successors(s).iter().filter(|&&t| sat[t]).count())
        .collect();
    let mut queue: VecDeque<usize> = (0..sat.len()).filter(|&s| sat[s] && live[s] == 0).collect();
    while let Some(s) = queue.pop_front() {
        if !sat[s] {
            continue;
        }
        sat[s] = false;
        for &p in &pred[s] {
            live[p] -= 1;
            if sat[p] && live[p] == 0 {
                queue.push_back(p);
            }
        }
    }
    sat
}

fn eval(k: &KripkeStructure, pred: &[Vec<usize>], f: &Formula) -> Result<Vec<bool>> {
    use Formula::*;
    let n = k.num_states();
    let zip = |a: Vec<bool>, b: Vec<bool>, op: fn(bool, bool) -> bool| -> Vec<bool> {
        a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
    };
    Ok(match f {
        True => vec![true; n],
        False => vec![false; n],
        Atom(a) => {
            let idx = k
                .atoms()
                .index_of(a)
                .ok_or_else(|| Error::UnknownAtom(a.clone()))?;
            (0..n).map(|s| k.label(s).contains(idx)).collect()
        }
        Not(g) => eval(k, pred, g)?.into_iter().map(|x| !x).collect(),
        And(g, h) => zip(eval(k, pred, g)?, eval(k, pred, h)?, |x, y| x && y),
        Or(g, h) => zip(eval(k, pred, g)?, eval(k, pred, h)?, |x, y| x || y),
        Implies(g, h) => zip(eval(k, pred, g)?, eval(k, pred, h)?, |x, y| !x || y),
        EX(g) => ex(k, &eval(k, pred, g)?),
        EU(g, h) => eu(k, pred, &eval(k, pred, g)?, &eval(k, pred, h)?),
        EG(g) => eg(k, pred, &eval(k, pred, g)?),
        AX(_) | EF(_) | AF(_) | AG(_) | AU(_, _) => eval(k, pred, &f.normalize())?,
    })
}

/// Satisfaction as a per-state vector in state-index order.
pub fn sat_vector(k: &KripkeStructure, f: &Formula) -> Result<Vec<bool>> {
    eval(k, &k.predecessors(), &f.normalize())
}

/// Names of the states satisfying `f`.
pub fn sat_set(k: &KripkeStructure, f: &Formula) -> Result<BTreeSet<String>> {
    Ok(sat_vector(k, f)?
        .into_iter()
        .enumerate()
        .filter(|(_, b)| *b)
        .map(|(s, _)| k.state_name(s).to_string())
        .collect())
}

/// Per-initial-state verdicts, in state order.
pub fn check_initial(k: &KripkeStructure, f: &Formula) -> Result<Vec<(String, bool)>> {
    let sat = sat_vector(k, f)?;
    Ok(k.initial()
        .iter()
        .map(|&s| (k.state_name(s).to_string(), sat[s]))
        .collect())
}

/// `K ⊨ f`: every initial state satisfies `f`.
pub fn models(k: &KripkeStructure, f: &Formula) -> Result<bool> {
    let sat = sat_vector(k, f)?;
    Ok(k.initial().iter().all(|&s| sat[s]))
}
