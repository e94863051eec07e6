//! Isomorphism of Kripke structures by backtracking search.
//!
//! A candidate image for a state must agree on label, initial-state
//! membership, in-degree and out-degree. States are matched in breadth-first
//! order over the undirected graph so that most constraints against already
//! matched neighbours are checked as early as possible.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::kripke::KripkeStructure;

/// Largest structure `are_isomorphic` accepts.
pub const MAX_ISO_STATES: usize = 64;

struct Graph<'a> {
    k: &'a KripkeStructure,
    adj: Vec<Vec<bool>>,
    indeg: Vec<usize>,
}

impl<'a> Graph<'a> {
    fn new(k: &'a KripkeStructure) -> Self {
        let n = k.num_states();
        let mut adj = vec![vec![false; n]; n];
        let mut indeg = vec![0; n];
        for (s, t) in k.edges() {
            adj[s][t] = true;
            indeg[t] += 1;
        }
        Graph { k, adj, indeg }
    }

    fn invariant(&self, s: usize) -> (u64, bool, usize, usize) {
        (
            self.k.label(s).bits(),
            self.k.is_initial(s),
            self.k.successors(s).len(),
            self.indeg[s],
        )
    }
}

/// Search order: BFS over the undirected graph, restarting at unvisited
/// states so every component is covered.
fn search_order(g: &Graph<'_>) -> Vec<usize> {
    let n = g.k.num_states();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for t in 0..n {
                if !seen[t] && (g.adj[s][t] || g.adj[t][s]) {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
    }
    order
}

struct Search<'a> {
    left: Graph<'a>,
    right: Graph<'a>,
    order: Vec<usize>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn consistent(&self, s: usize, t: usize) -> bool {
        if self.left.adj[s][s] != self.right.adj[t][t] {
            return false;
        }
        self.map.iter().enumerate().all(|(u, image)| match image {
            Some(v) => {
                self.left.adj[s][u] == self.right.adj[t][*v]
                    && self.left.adj[u][s] == self.right.adj[*v][t]
            }
            None => true,
        })
    }

    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let s = self.order[depth];
        let want = self.left.invariant(s);
        for t in 0..self.used.len() {
            if self.used[t] || self.right.invariant(t) != want || !self.consistent(s, t) {
                continue;
            }
            self.map[s] = Some(t);
            self.used[t] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.map[s] = None;
            self.used[t] = false;
        }
        false
    }
}

/// A bijection `left -> right` (indexed by left state) preserving labels,
/// initial states and the transition relation, if one exists.
pub fn find_isomorphism(
    left: &KripkeStructure,
    right: &KripkeStructure,
) -> Result<Option<Vec<usize>>> {
    for k in [left, right] {
        if k.num_states() > MAX_ISO_STATES {
            return Err(Error::SizeCapExceeded {
                size: k.num_states(),
                limit: MAX_ISO_STATES,
            });
        }
    }
    if left.atoms() != right.atoms()
        || left.num_states() != right.num_states()
        || left.num_transitions() != right.num_transitions()
        || left.initial().len() != right.initial().len()
    {
        return Ok(None);
    }
    let (lg, rg) = (Graph::new(left), Graph::new(right));
    let mut lsig: Vec<_> = (0..left.num_states()).map(|s| lg.invariant(s)).collect();
    let mut rsig: Vec<_> = (0..right.num_states()).map(|s| rg.invariant(s)).collect();
    lsig.sort_unstable();
    rsig.sort_unstable();
    if lsig != rsig {
        return Ok(None);
    }

    let n = left.num_states();
    let mut search = Search {
        order: search_order(&lg),
        left: lg,
        right: rg,
        map: vec![None; n],
        used: vec![false; n],
    };
    if search.extend(0) {
        Ok(Some(search.map.into_iter().map(Option::unwrap).collect()))
    } else {
        Ok(None)
    }
}

pub fn are_isomorphic(left: &KripkeStructure, right: &KripkeStructure) -> Result<bool> {
    find_isomorphism(left, right).map(|m| m.is_some())
}
