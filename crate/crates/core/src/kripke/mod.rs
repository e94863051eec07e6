//! Finite Kripke structures `(S, S0, R, L)` over a set of atomic propositions.
//!
//! States are stored in lexicographic order of their identifiers, so a state
//! index doubles as its rank in the canonical ordering. Every constructor goes
//! through [`KripkeBuilder`], which checks totality of the transition relation
//! along with the usual reference and uniqueness constraints.

mod coalgebra;
mod dot;
mod text;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result, MAX_ATOMS, MAX_ID_LEN};

pub use coalgebra::{from_coalgebra_view, to_coalgebra_view, CoalgebraView, Observation};
pub use dot::export_dot;
pub use text::{
    parse_kripke, parse_kripke_with, serialize_kripke, Parsed, ParseOptions,
};
pub(crate) use text::{end_column, parse_state_line, parse_trans_line, syntax, tokenize_line, words};

/// Proposition identifiers: `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_atom_identifier(id: &str) -> bool {
    let mut chars = id.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// State identifiers additionally admit `.` after the first character, which
/// the grammar module uses for copy prefixes such as `A2.x`.
pub fn is_state_identifier(id: &str) -> bool {
    let mut chars = id.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

pub(crate) fn check_state_id(id: &str) -> Result<()> {
    if id.len() > MAX_ID_LEN {
        return Err(Error::IdentifierTooLong(id.to_string()));
    }
    if !is_state_identifier(id) {
        return Err(Error::InvalidIdentifier(id.to_string()));
    }
    Ok(())
}

/// Ordered, duplicate-free set of atomic propositions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AtomSet {
    atoms: Vec<String>,
}

impl AtomSet {
    pub fn new<I, S>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut set = BTreeSet::new();
        for atom in atoms {
            let atom = atom.into();
            if atom.len() > MAX_ID_LEN {
                return Err(Error::IdentifierTooLong(atom));
            }
            if !is_atom_identifier(&atom) {
                return Err(Error::InvalidIdentifier(atom));
            }
            if set.contains(&atom) {
                return Err(Error::DuplicateAtom(atom));
            }
            set.insert(atom);
        }
        if set.len() > MAX_ATOMS {
            return Err(Error::TooManyAtoms(set.len()));
        }
        Ok(AtomSet {
            atoms: set.into_iter().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.atoms.iter().map(String::as_str)
    }

    pub fn index_of(&self, atom: &str) -> Option<usize> {
        self.atoms
            .binary_search_by(|a| a.as_str().cmp(atom))
            .ok()
    }

    pub fn contains(&self, atom: &str) -> bool {
        self.index_of(atom).is_some()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.atoms[index]
    }

    /// Builds a label from proposition names, rejecting unknown ones.
    pub fn label<'a, I>(&self, names: I) -> Result<Label>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut label = Label::EMPTY;
        for name in names {
            let idx = self
                .index_of(name)
                .ok_or_else(|| Error::UnknownAtom(name.to_string()))?;
            label.insert(idx);
        }
        Ok(label)
    }

    pub fn names(&self, label: Label) -> Vec<&str> {
        label.iter().map(|i| self.name(i)).collect()
    }
}

/// A state label as a bitset over the indices of an [`AtomSet`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(u64);

impl Label {
    pub const EMPTY: Label = Label(0);

    pub fn insert(&mut self, atom: usize) {
        self.0 |= 1 << atom;
    }

    pub fn contains(self, atom: usize) -> bool {
        self.0 & (1 << atom) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    pub fn bits(self) -> u64 {
        self.0
    }
}

/// A finite Kripke structure with a total transition relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KripkeStructure {
    atoms: AtomSet,
    states: Vec<String>,
    init: Vec<usize>,
    succ: Vec<Vec<usize>>,
    labels: Vec<Label>,
}

impl KripkeStructure {
    pub fn builder() -> KripkeBuilder {
        KripkeBuilder::default()
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn state_name(&self, state: usize) -> &str {
        &self.states[state]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.states.binary_search_by(|s| s.as_str().cmp(name)).ok()
    }

    pub fn require_state(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn initial(&self) -> &[usize] {
        &self.init
    }

    pub fn is_initial(&self, state: usize) -> bool {
        self.init.binary_search(&state).is_ok()
    }

    pub fn successors(&self, state: usize) -> &[usize] {
        &self.succ[state]
    }

    pub fn label(&self, state: usize) -> Label {
        self.labels[state]
    }

    pub fn label_names(&self, state: usize) -> Vec<&str> {
        self.atoms.names(self.labels[state])
    }

    /// Predecessor lists, each sorted.
    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.num_states()];
        for (s, succ) in self.succ.iter().enumerate() {
            for &t in succ {
                pred[t].push(s);
            }
        }
        pred
    }

    /// All transitions in `(source, target)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, succ)| succ.iter().map(move |&t| (s, t)))
    }

    /// Bitmap of states reachable from the initial states.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in &self.init {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            for &t in &self.succ[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// A builder holding this structure's content, for deriving variants.
    pub fn to_builder(&self) -> KripkeBuilder {
        let mut b = KripkeBuilder::default().atoms(self.atoms.iter());
        for s in 0..self.num_states() {
            b = b.state(self.state_name(s), self.label_names(s));
        }
        for &s in &self.init {
            b = b.init(self.state_name(s));
        }
        for (s, t) in self.edges() {
            b = b.edge(self.state_name(s), self.state_name(t));
        }
        b
    }

    /// Renames every state through `rename`, which must be injective.
    pub fn rename<F>(&self, mut rename: F) -> Result<KripkeStructure>
    where
        F: FnMut(&str) -> String,
    {
        let names: Vec<String> = self.states.iter().map(|s| rename(s)).collect();
        let mut b = KripkeBuilder::default().atoms(self.atoms.iter());
        for s in 0..self.num_states() {
            b = b.state(&names[s], self.label_names(s));
        }
        for &s in &self.init {
            b = b.init(&names[s]);
        }
        for (s, t) in self.edges() {
            b = b.edge(&names[s], &names[t]);
        }
        b.build()
    }
}

impl fmt::Display for KripkeStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_kripke(self))
    }
}

/// Accumulates declarations by name and validates them into a
/// [`KripkeStructure`]. Repeated edges and init declarations are merged.
#[derive(Debug, Clone, Default)]
pub struct KripkeBuilder {
    atoms: Vec<String>,
    states: Vec<(String, Vec<String>)>,
    init: Vec<String>,
    edges: Vec<(String, String)>,
}

impl KripkeBuilder {
    pub fn atoms<I, S>(mut self, atoms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.atoms.extend(atoms.into_iter().map(Into::into));
        self
    }

    pub fn state<I, S>(mut self, name: impl Into<String>, label: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.states
            .push((name.into(), label.into_iter().map(Into::into).collect()));
        self
    }

    pub fn init(mut self, name: impl Into<String>) -> Self {
        self.init.push(name.into());
        self
    }

    pub fn edge(mut self, from: impl Into<String>, to: impl Into<String>) -> Self {
        self.edges.push((from.into(), to.into()));
        self
    }

    pub fn build(self) -> Result<KripkeStructure> {
        self.finish(false).map(|(k, _)| k)
    }

    /// Like [`build`](Self::build), but a state without successors receives a
    /// self-loop instead of failing. Returns the names of the completed states.
    pub fn build_completing_selfloops(self) -> Result<(KripkeStructure, Vec<String>)> {
        self.finish(true)
    }

    fn finish(self, complete: bool) -> Result<(KripkeStructure, Vec<String>)> {
        let atoms = AtomSet::new(self.atoms)?;

        let mut declared: BTreeMap<String, Label> = BTreeMap::new();
        for (name, label) in &self.states {
            check_state_id(name)?;
            let label = atoms.label(label.iter().map(String::as_str))?;
            if declared.insert(name.clone(), label).is_some() {
                return Err(Error::DuplicateState(name.clone()));
            }
        }
        let states: Vec<String> = declared.keys().cloned().collect();
        let labels: Vec<Label> = declared.values().copied().collect();
        let lookup = |name: &str| -> Result<usize> {
            states
                .binary_search_by(|s| s.as_str().cmp(name))
                .map_err(|_| Error::UnknownState(name.to_string()))
        };

        let mut init = BTreeSet::new();
        for name in &self.init {
            init.insert(lookup(name)?);
        }
        if init.is_empty() {
            return Err(Error::EmptyInit);
        }

        let mut succ = vec![BTreeSet::new(); states.len()];
        for (from, to) in &self.edges {
            let s = lookup(from)?;
            let t = lookup(to)?;
            succ[s].insert(t);
        }

        let mut completed = Vec::new();
        for (s, out) in succ.iter_mut().enumerate() {
            if out.is_empty() {
                if !complete {
                    return Err(Error::NotTotal(states[s].clone()));
                }
                out.insert(s);
                completed.push(states[s].clone());
            }
        }

        Ok((
            KripkeStructure {
                atoms,
                states,
                init: init.into_iter().collect(),
                succ: succ.into_iter().map(|s| s.into_iter().collect()).collect(),
                labels,
            },
            completed,
        ))
    }
}

/// Restricts `k` to the states reachable from its initial states.
pub fn restrict_reachable(k: &KripkeStructure) -> KripkeStructure {
    let reach = k.reachable();
    if reach.iter().all(|&r| r) {
        return k.clone();
    }
    // Renumber keeping relative (lexicographic) order.
    let mut new_index = vec![usize::MAX; k.num_states()];
    let mut states = Vec::new();
    let mut labels = Vec::new();
    for s in 0..k.num_states() {
        if reach[s] {
            new_index[s] = states.len();
            states.push(k.states[s].clone());
            labels.push(k.labels[s]);
        }
    }
    let succ = (0..k.num_states())
        .filter(|&s| reach[s])
        .map(|s| k.succ[s].iter().map(|&t| new_index[t]).collect())
        .collect();
    KripkeStructure {
        atoms: k.atoms.clone(),
        states,
        init: k.init.iter().map(|&s| new_index[s]).collect(),
        succ,
        labels,
    }
}

/// True iff every state lies on a path from an initial state.
pub fn is_connected(k: &KripkeStructure) -> bool {
    k.reachable().into_iter().all(|r| r)
}
