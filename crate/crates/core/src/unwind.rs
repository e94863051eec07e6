//! Finite-depth unwindings of a Kripke structure.
//!
//! Unwinding a state yields a labelled tree whose infinite limit identifies
//! states exactly up to bisimilarity. At a finite depth budget the tree is cut
//! off with an explicit truncation marker. Siblings that are structurally
//! equal after recursive canonicalization are merged, so two states have equal
//! depth-`d` trees iff they are related by the depth-`d` bisimulation
//! approximant.
//!
//! Trees share subtrees through [`Arc`]. Within one [`Unwinder`] nodes are
//! hash-consed, which keeps the DAG size at `O(|S| * depth)` even when the
//! tree itself is exponentially large.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;
use std::sync::Arc;

use crate::error::Result;
use crate::kripke::KripkeStructure;

#[derive(Debug, Clone)]
pub struct UnwindTree {
    label: BTreeSet<String>,
    depth: usize,
    truncated: bool,
    children: Vec<Arc<UnwindTree>>,
}

impl UnwindTree {
    /// An inner node with the given remaining depth budget. Children are
    /// taken as given; call [`canonicalize`] to sort and deduplicate them.
    pub fn node<I, S>(label: I, depth: usize, children: Vec<UnwindTree>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        UnwindTree {
            label: label.into_iter().map(Into::into).collect(),
            depth,
            truncated: false,
            children: children.into_iter().map(Arc::new).collect(),
        }
    }

    /// A node cut off by an exhausted depth budget.
    pub fn truncated<I, S>(label: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        UnwindTree {
            label: label.into_iter().map(Into::into).collect(),
            depth: 0,
            truncated: true,
            children: Vec::new(),
        }
    }

    pub fn label(&self) -> &BTreeSet<String> {
        &self.label
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn children(&self) -> impl Iterator<Item = &UnwindTree> {
        self.children.iter().map(Arc::as_ref)
    }

    pub fn num_children(&self) -> usize {
        self.children.len()
    }

    /// Number of nodes when the tree is fully expanded (shared subtrees are
    /// counted once per occurrence).
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    /// Two-space indented `{p,q}` lines; truncated nodes end in `…`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, indent: usize, out: &mut String) {
        let label: Vec<&str> = self.label.iter().map(String::as_str).collect();
        write!(out, "{:width$}{{{}}}", "", label.join(","), width = indent * 2).unwrap();
        if self.truncated {
            out.push_str(" …");
        }
        out.push('\n');
        for c in &self.children {
            c.render_into(indent + 1, out);
        }
    }
}

impl Ord for UnwindTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.label
            .cmp(&other.label)
            .then(self.depth.cmp(&other.depth))
            .then(self.truncated.cmp(&other.truncated))
            .then_with(|| {
                let mut left = self.children.iter();
                let mut right = other.children.iter();
                loop {
                    match (left.next(), right.next()) {
                        (None, None) => return Ordering::Equal,
                        (None, Some(_)) => return Ordering::Less,
                        (Some(_), None) => return Ordering::Greater,
                        (Some(a), Some(b)) => {
                            if Arc::ptr_eq(a, b) {
                                continue;
                            }
                            match a.cmp(b) {
                                Ordering::Equal => continue,
                                o => return o,
                            }
                        }
                    }
                }
            })
    }
}

impl PartialOrd for UnwindTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for UnwindTree {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for UnwindTree {}

fn sort_dedup(children: &mut Vec<Arc<UnwindTree>>) {
    children.sort_by(|a, b| if Arc::ptr_eq(a, b) { Ordering::Equal } else { a.cmp(b) });
    children.dedup_by(|a, b| Arc::ptr_eq(a, b) || a == b);
}

/// Recursively sorts children and drops structurally duplicate siblings.
pub fn canonicalize(tree: &UnwindTree) -> UnwindTree {
    let mut children: Vec<Arc<UnwindTree>> = tree
        .children
        .iter()
        .map(|c| Arc::new(canonicalize(c)))
        .collect();
    sort_dedup(&mut children);
    UnwindTree {
        label: tree.label.clone(),
        depth: tree.depth,
        truncated: tree.truncated,
        children,
    }
}

/// Builds canonical unwindings of the states of one structure, sharing
/// structurally equal subtrees.
pub struct Unwinder<'k> {
    k: &'k KripkeStructure,
    memo: HashMap<(usize, usize), Arc<UnwindTree>>,
    // key: label bits, depth, addresses of (interned) children
    interned: HashMap<(u64, usize, Vec<usize>), Arc<UnwindTree>>,
}

impl<'k> Unwinder<'k> {
    pub fn new(k: &'k KripkeStructure) -> Self {
        Unwinder {
            k,
            memo: HashMap::new(),
            interned: HashMap::new(),
        }
    }

    /// Canonical depth-`depth` unwinding of state index `state`.
    pub fn unwind(&mut self, state: usize, depth: usize) -> Arc<UnwindTree> {
        if let Some(t) = self.memo.get(&(state, depth)) {
            return Arc::clone(t);
        }
        let mut children: Vec<Arc<UnwindTree>> = if depth == 0 {
            Vec::new()
        } else {
            self.k
                .successors(state)
                .to_vec()
                .into_iter()
                .map(|t| self.unwind(t, depth - 1))
                .collect()
        };
        sort_dedup(&mut children);
        let key = (
            self.k.label(state).bits(),
            depth,
            children.iter().map(|c| Arc::as_ptr(c) as usize).collect(),
        );
        let k = self.k;
        let node = self
            .interned
            .entry(key)
            .or_insert_with(|| {
                Arc::new(UnwindTree {
                    label: k.label_names(state).into_iter().map(String::from).collect(),
                    depth,
                    truncated: depth == 0,
                    children,
                })
            })
            .clone();
        self.memo.insert((state, depth), Arc::clone(&node));
        node
    }
}

/// Canonical unwinding of the state named `state` to depth `depth`.
pub fn unwind_tree(k: &KripkeStructure, state: &str, depth: usize) -> Result<UnwindTree> {
    let s = k.require_state(state)?;
    Ok(Unwinder::new(k).unwind(s, depth).as_ref().clone())
}

/// Whether the canonical depth-`depth` unwindings of `s` and `t` coincide.
pub fn h_approx_equal(k: &KripkeStructure, s: &str, t: &str, depth: usize) -> Result<bool> {
    let s = k.require_state(s)?;
    let t = k.require_state(t)?;
    let mut u = Unwinder::new(k);
    let a = u.unwind(s, depth);
    let b = u.unwind(t, depth);
    Ok(Arc::ptr_eq(&a, &b) || a == b)
}
