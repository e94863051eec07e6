//! Infinite Kripke structures presented by simple graph grammars.
//!
//! A grammar consists of an axiom fragment `G0` with `N` exit states and a
//! single rule fragment `A` with `N` in-states and `N` out-states. The
//! infinite structure is `G0` followed by an endless chain of copies of `A`,
//! where copy `k`'s in-states are glued to copy `k-1`'s out-states (and copy
//! 1's to the exits of `G0`).
//!
//! Exit and out states carry no edges of their own: everything they do is
//! described by the in-states of the next copy. Under that restriction
//! [`fold`] collapses every boundary level onto the exits of `G0`, giving a
//! finite structure bisimilar to the infinite one.
//!
//! ```text
//! grammar 1
//! aps p q
//! section g0
//! state c0 : q
//! state ex : p
//! init c0
//! trans c0 -> ex
//! exit 1 ex
//! section rule
//! state i : p
//! state m : q
//! state o : p
//! trans i -> m
//! trans m -> o
//! in 1 i
//! out 1 o
//! ```

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, GrammarError, Result};
use crate::kripke::{
    check_state_id, end_column, parse_state_line, parse_trans_line, syntax, tokenize_line,
    words, AtomSet, KripkeStructure,
};

/// Prefix for rule states in [`fold`].
pub const FOLD_PREFIX: &str = "A.";

/// A labelled graph without initial states or totality requirement.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Fragment {
    pub labels: BTreeMap<String, BTreeSet<String>>,
    pub trans: BTreeMap<String, BTreeSet<String>>,
}

impl Fragment {
    pub fn add_state<I, S>(&mut self, name: impl Into<String>, label: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.labels
            .insert(name.into(), label.into_iter().map(Into::into).collect());
        self
    }

    pub fn add_edge(&mut self, from: impl Into<String>, to: impl Into<String>) -> &mut Self {
        self.trans.entry(from.into()).or_default().insert(to.into());
        self
    }

    pub fn contains(&self, state: &str) -> bool {
        self.labels.contains_key(state)
    }

    pub fn successors(&self, state: &str) -> impl Iterator<Item = &str> {
        self.trans
            .get(state)
            .into_iter()
            .flatten()
            .map(String::as_str)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.trans
            .iter()
            .flat_map(|(s, ts)| ts.iter().map(move |t| (s.as_str(), t.as_str())))
    }

    fn label_text(&self, state: &str) -> String {
        self.labels
            .get(state)
            .map(|l| l.iter().cloned().collect::<Vec<_>>().join(","))
            .unwrap_or_default()
    }

    fn check_references(&self, atoms: &AtomSet) -> Result<()> {
        for (s, label) in &self.labels {
            check_state_id(s)?;
            atoms.label(label.iter().map(String::as_str))?;
        }
        for (s, t) in self.edges() {
            for x in [s, t] {
                if !self.contains(x) {
                    return Err(Error::UnknownState(x.to_string()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphGrammar {
    pub atoms: AtomSet,
    pub g0: Fragment,
    pub init: BTreeSet<String>,
    /// `exits[i]` is exit `i + 1`.
    pub exits: Vec<String>,
    pub rule: Fragment,
    pub ins: Vec<String>,
    pub outs: Vec<String>,
}

impl GraphGrammar {
    /// Number of exits `N`.
    pub fn arity(&self) -> usize {
        self.exits.len()
    }
}

/// Checks every structural constraint on a grammar.
pub fn validate_grammar(g: &GraphGrammar) -> Result<()> {
    let n = g.exits.len();
    if n == 0 {
        return Err(GrammarError::ZeroArity.into());
    }
    for (what, list) in [("in", &g.ins), ("out", &g.outs)] {
        if list.len() != n {
            return Err(GrammarError::Arity {
                what,
                expected: n,
                found: list.len(),
            }
            .into());
        }
    }
    g.g0.check_references(&g.atoms)?;
    g.rule.check_references(&g.atoms)?;

    for ex in &g.exits {
        if !g.g0.contains(ex) {
            return Err(Error::UnknownState(ex.clone()));
        }
    }
    for x in g.ins.iter().chain(&g.outs) {
        if !g.rule.contains(x) {
            return Err(Error::UnknownState(x.clone()));
        }
    }
    for list in [g.exits.iter().collect::<Vec<_>>(), g.ins.iter().chain(&g.outs).collect()] {
        let mut seen = BTreeSet::new();
        for x in list {
            if !seen.insert(x) {
                return Err(GrammarError::NotDistinct(x.clone()).into());
            }
        }
    }

    if g.init.is_empty() {
        return Err(Error::EmptyInit);
    }
    for s in &g.init {
        if !g.g0.contains(s) {
            return Err(Error::UnknownState(s.clone()));
        }
    }

    for i in 0..n {
        let (ex, input, output) = (&g.exits[i], &g.ins[i], &g.outs[i]);
        let l = &g.g0.labels[ex];
        if *l != g.rule.labels[input] || *l != g.rule.labels[output] {
            return Err(GrammarError::LabelConstraint {
                index: i + 1,
                exit: g.g0.label_text(ex),
                input: g.rule.label_text(input),
                output: g.rule.label_text(output),
            }
            .into());
        }
    }

    for (fragment, boundary) in [(&g.g0, &g.exits), (&g.rule, &g.outs)] {
        for b in boundary {
            if let Some(t) = fragment.successors(b).next() {
                return Err(GrammarError::Restriction {
                    from: b.clone(),
                    to: t.to_string(),
                }
                .into());
            }
        }
    }

    for (name, fragment, boundary) in [("g0", &g.g0, &g.exits), ("rule", &g.rule, &g.outs)] {
        for s in fragment.labels.keys() {
            if !boundary.contains(s) && fragment.successors(s).next().is_none() {
                return Err(GrammarError::MissingSuccessor {
                    fragment: name,
                    state: s.clone(),
                }
                .into());
            }
        }
    }
    Ok(())
}

#[derive(PartialEq)]
enum Section {
    Preamble,
    G0,
    Rule,
}

fn put_indexed(
    slots: &mut [Option<String>],
    what: &'static str,
    index: usize,
    id: &str,
    n: usize,
) -> Result<()> {
    if index == 0 || index > n {
        return Err(GrammarError::IndexOutOfRange { what, index, n }.into());
    }
    if slots[index - 1].is_some() {
        return Err(GrammarError::DuplicateIndex { what, index }.into());
    }
    slots[index - 1] = Some(id.to_string());
    Ok(())
}

fn collect_indexed(slots: Vec<Option<String>>, what: &'static str) -> Result<Vec<String>> {
    let expected = slots.len();
    let found = slots.iter().filter(|s| s.is_some()).count();
    if found != expected {
        return Err(GrammarError::Arity {
            what,
            expected,
            found,
        }
        .into());
    }
    Ok(slots.into_iter().flatten().collect())
}

/// Parses and validates a `.kgram` grammar.
pub fn parse_grammar(text: &str) -> Result<GraphGrammar> {
    let mut n: Option<usize> = None;
    let mut atoms: Option<AtomSet> = None;
    let mut section = Section::Preamble;
    let mut g0 = Fragment::default();
    let mut rule = Fragment::default();
    let mut init = BTreeSet::new();
    let (mut exits, mut ins, mut outs) = (Vec::new(), Vec::new(), Vec::new());
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let tokens = tokenize_line(raw);
        let Some(first) = tokens.first() else {
            continue;
        };
        let Some(arity) = n else {
            if first.text != "grammar" || tokens.len() != 2 {
                return Err(syntax(line, first.column, "expected `grammar <N>` header"));
            }
            let value: usize = tokens[1]
                .text
                .parse()
                .map_err(|_| syntax(line, tokens[1].column, "expected a positive integer"))?;
            if value == 0 {
                return Err(GrammarError::ZeroArity.into());
            }
            n = Some(value);
            exits = vec![None; value];
            ins = vec![None; value];
            outs = vec![None; value];
            continue;
        };
        match (first.text, &section) {
            ("aps", Section::Preamble) => {
                if atoms.is_some() {
                    return Err(syntax(line, first.column, "duplicate `aps` line"));
                }
                atoms = Some(AtomSet::new(words(line, &tokens[1..])?)?);
            }
            ("section", _) => {
                let next = match tokens.get(1).map(|t| t.text) {
                    Some("g0") if section == Section::Preamble => Section::G0,
                    Some("rule") if section == Section::G0 => Section::Rule,
                    _ => {
                        return Err(syntax(
                            line,
                            first.column,
                            "expected `section g0` then `section rule`",
                        ))
                    }
                };
                if tokens.len() != 2 {
                    return Err(syntax(line, tokens[2].column, "unexpected token"));
                }
                if atoms.is_none() {
                    return Err(syntax(line, first.column, "`aps` must precede sections"));
                }
                section = next;
            }
            ("state", Section::G0 | Section::Rule) => {
                let (id, label) = parse_state_line(line, &tokens)?;
                let fragment = if section == Section::G0 { &mut g0 } else { &mut rule };
                if fragment.contains(id) {
                    return Err(Error::DuplicateState(id.to_string()));
                }
                fragment.add_state(id, label);
            }
            ("trans", Section::G0 | Section::Rule) => {
                let (from, targets) = parse_trans_line(line, &tokens)?;
                let fragment = if section == Section::G0 { &mut g0 } else { &mut rule };
                for to in targets {
                    fragment.add_edge(from, to);
                }
            }
            ("init", Section::G0) => {
                let ids = words(line, &tokens[1..])?;
                if ids.is_empty() {
                    return Err(syntax(line, end_column(&tokens), "expected initial state"));
                }
                init.extend(ids.into_iter().map(String::from));
            }
            ("init", Section::Rule) => return Err(GrammarError::RuleInit.into()),
            ("exit", Section::G0) | ("in", Section::Rule) | ("out", Section::Rule) => {
                let args = words(line, &tokens[1..])?;
                if args.len() != 2 {
                    return Err(syntax(
                        line,
                        end_column(&tokens),
                        format!("expected `{} <index> <state>`", first.text),
                    ));
                }
                let index: usize = args[0]
                    .parse()
                    .map_err(|_| syntax(line, tokens[1].column, "expected an index"))?;
                let (slots, what) = match first.text {
                    "exit" => (&mut exits, "exit"),
                    "in" => (&mut ins, "in"),
                    _ => (&mut outs, "out"),
                };
                put_indexed(slots, what, index, args[1], arity)?;
            }
            (other, _) => {
                return Err(syntax(
                    line,
                    first.column,
                    format!("unexpected `{other}` here"),
                ))
            }
        }
    }
    if n.is_none() {
        return Err(syntax(last_line.max(1), 1, "expected `grammar <N>` header"));
    }
    if section != Section::Rule {
        return Err(syntax(last_line + 1, 1, "missing `section rule`"));
    }

    let g = GraphGrammar {
        atoms: atoms.expect("checked at section start"),
        g0,
        init,
        exits: collect_indexed(exits, "exit")?,
        rule,
        ins: collect_indexed(ins, "in")?,
        outs: collect_indexed(outs, "out")?,
    };
    validate_grammar(&g)?;
    Ok(g)
}

fn g0_builder(g: &GraphGrammar) -> crate::kripke::KripkeBuilder {
    let mut b = KripkeStructure::builder().atoms(g.atoms.iter());
    for (s, label) in &g.g0.labels {
        b = b.state(s.as_str(), label.iter().map(String::as_str));
    }
    for s in &g.init {
        b = b.init(s.as_str());
    }
    for (s, t) in g.g0.edges() {
        b = b.edge(s, t);
    }
    b
}

fn check_collision(g: &GraphGrammar, name: &str) -> Result<()> {
    if g.g0.contains(name) {
        return Err(GrammarError::NameCollision(name.to_string()).into());
    }
    Ok(())
}

/// Folds the grammar into a finite Kripke structure: in- and out-states of
/// the rule are identified with the corresponding exit of `G0`, and the
/// remaining rule states are added under the `A.` prefix.
pub fn fold(g: &GraphGrammar) -> Result<KripkeStructure> {
    validate_grammar(g)?;
    let boundary: BTreeMap<&str, &str> = g
        .ins
        .iter()
        .zip(&g.exits)
        .chain(g.outs.iter().zip(&g.exits))
        .map(|(x, ex)| (x.as_str(), ex.as_str()))
        .collect();
    let rename = |x: &str| -> String {
        match boundary.get(x) {
            Some(ex) => ex.to_string(),
            None => format!("{FOLD_PREFIX}{x}"),
        }
    };

    let mut b = g0_builder(g);
    for (s, label) in &g.rule.labels {
        if !boundary.contains_key(s.as_str()) {
            let name = rename(s);
            check_collision(g, &name)?;
            b = b.state(name, label.iter().map(String::as_str));
        }
    }
    for (s, t) in g.rule.edges() {
        b = b.edge(rename(s), rename(t));
    }
    b.build()
}

/// Name of copy `copy`'s version of rule state `state` in [`unfold`].
pub fn copy_name(copy: usize, state: &str) -> String {
    format!("A{copy}.{state}")
}

/// `G0` followed by `depth` glued copies of the rule. The out-states of the
/// last copy have no continuation and are closed with self-loops.
///
/// The result has `|G0| + depth * (|A| - N)` states.
pub fn unfold(g: &GraphGrammar, depth: usize) -> Result<KripkeStructure> {
    validate_grammar(g)?;
    if depth == 0 {
        return Err(GrammarError::ZeroDepth.into());
    }
    let in_index: BTreeMap<&str, usize> =
        g.ins.iter().enumerate().map(|(i, x)| (x.as_str(), i)).collect();
    let out_index: BTreeMap<&str, usize> =
        g.outs.iter().enumerate().map(|(i, x)| (x.as_str(), i)).collect();
    let boundary = |level: usize, i: usize| -> String {
        if level == 0 {
            g.exits[i].clone()
        } else {
            copy_name(level, &g.outs[i])
        }
    };
    let rename = |copy: usize, x: &str| -> String {
        if let Some(&i) = in_index.get(x) {
            boundary(copy - 1, i)
        } else if let Some(&i) = out_index.get(x) {
            boundary(copy, i)
        } else {
            copy_name(copy, x)
        }
    };

    let mut b = g0_builder(g);
    for copy in 1..=depth {
        for (s, label) in &g.rule.labels {
            if !in_index.contains_key(s.as_str()) {
                let name = rename(copy, s);
                check_collision(g, &name)?;
                b = b.state(name, label.iter().map(String::as_str));
            }
        }
        for (s, t) in g.rule.edges() {
            b = b.edge(rename(copy, s), rename(copy, t));
        }
    }
    for i in 0..g.arity() {
        b = b.edge(boundary(depth, i), boundary(depth, i));
    }
    b.build()
}
