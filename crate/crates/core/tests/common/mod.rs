//! Random generators, mutations and independent oracles shared by the
//! integration tests. Nothing here calls into the library's bisimulation or
//! refinement code; the oracles work on plain adjacency data.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use kripke_min::ctl::Formula;
use kripke_min::grammar::{Fragment, GraphGrammar};
use kripke_min::kripke::AtomSet;
use kripke_min::unwind::UnwindTree;
use kripke_min::KripkeStructure;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn atom_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Labels drawn from a small pool so that label classes collide often.
fn random_labels(rng: &mut ChaCha8Rng, n: usize, atoms: &[String]) -> Vec<Vec<String>> {
    let pool_size = rng.gen_range(1..=3);
    let pool: Vec<Vec<String>> = (0..pool_size)
        .map(|_| {
            atoms
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .cloned()
                .collect()
        })
        .collect();
    (0..n).map(|_| pool.choose(rng).unwrap().clone()).collect()
}

/// A random total structure with `1..=max_states` states over
/// `1..=max_atoms` propositions. When `connected`, every state is reachable
/// from `s0` through a random spanning tree.
pub fn random_structure(
    rng: &mut ChaCha8Rng,
    max_states: usize,
    max_atoms: usize,
    connected: bool,
) -> KripkeStructure {
    let n = rng.gen_range(1..=max_states);
    let atoms = atom_names(rng.gen_range(1..=max_atoms));
    let labels = random_labels(rng, n, &atoms);
    let mut b = KripkeStructure::builder().atoms(atoms.clone());
    for (i, label) in labels.iter().enumerate() {
        b = b.state(format!("s{i}"), label.clone());
    }
    b = b.init("s0");
    if rng.gen_bool(0.3) {
        b = b.init(format!("s{}", rng.gen_range(0..n)));
    }
    for i in 0..n {
        if connected && i > 0 {
            b = b.edge(format!("s{}", rng.gen_range(0..i)), format!("s{i}"));
        }
        for _ in 0..rng.gen_range(1..=3) {
            b = b.edge(format!("s{i}"), format!("s{}", rng.gen_range(0..n)));
        }
    }
    b.build().unwrap()
}

/// A random relation between the state sets, biased towards label-equal
/// pairs so that it is a bisimulation reasonably often.
pub fn random_relation(
    rng: &mut ChaCha8Rng,
    left: &KripkeStructure,
    right: &KripkeStructure,
) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for s in 0..left.num_states() {
        for t in 0..right.num_states() {
            let p = if left.label(s) == right.label(t) { 0.7 } else { 0.05 };
            if rng.gen_bool(p) {
                pairs.push((s, t));
            }
        }
    }
    pairs
}

/// Plain adjacency view used by the oracles.
pub struct Plain {
    pub labels: Vec<BTreeSet<String>>,
    pub succ: Vec<Vec<usize>>,
    pub init: Vec<usize>,
}

impl Plain {
    pub fn of(k: &KripkeStructure) -> Self {
        Plain {
            labels: (0..k.num_states())
                .map(|s| k.label_names(s).into_iter().map(String::from).collect())
                .collect(),
            succ: (0..k.num_states()).map(|s| k.successors(s).to_vec()).collect(),
            init: k.initial().to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }
}

/// Clause-by-clause bisimulation check over plain data.
pub fn oracle_is_bisimulation(a: &Plain, b: &Plain, rel: &BTreeSet<(usize, usize)>) -> bool {
    for &(s, t) in rel {
        if a.labels[s] != b.labels[t] {
            return false;
        }
        for &s2 in &a.succ[s] {
            if !b.succ[t].iter().any(|&t2| rel.contains(&(s2, t2))) {
                return false;
            }
        }
        for &t2 in &b.succ[t] {
            if !a.succ[s].iter().any(|&s2| rel.contains(&(s2, t2))) {
                return false;
            }
        }
    }
    true
}

/// Greatest fixpoint by deleting one offending pair at a time.
pub fn oracle_bisimilarity(a: &Plain, b: &Plain) -> BTreeSet<(usize, usize)> {
    let mut rel: BTreeSet<(usize, usize)> = (0..a.len())
        .flat_map(|s| (0..b.len()).map(move |t| (s, t)))
        .filter(|&(s, t)| a.labels[s] == b.labels[t])
        .collect();
    'outer: loop {
        for &(s, t) in &rel {
            let forth = a.succ[s]
                .iter()
                .all(|&s2| b.succ[t].iter().any(|&t2| rel.contains(&(s2, t2))));
            let back = b.succ[t]
                .iter()
                .all(|&t2| a.succ[s].iter().any(|&s2| rel.contains(&(s2, t2))));
            if !(forth && back) {
                rel.remove(&(s, t));
                continue 'outer;
            }
        }
        return rel;
    }
}

/// Union of all bisimulations, by enumerating every subset of the
/// label-compatible pairs. Only usable for small instances.
pub fn brute_force_bisimilarity(a: &Plain, b: &Plain) -> BTreeSet<(usize, usize)> {
    let candidates: Vec<(usize, usize)> = (0..a.len())
        .flat_map(|s| (0..b.len()).map(move |t| (s, t)))
        .filter(|&(s, t)| a.labels[s] == b.labels[t])
        .collect();
    assert!(candidates.len() <= 20, "too many candidate pairs");
    let mut union = BTreeSet::new();
    for mask in 0u32..(1 << candidates.len()) {
        let rel: BTreeSet<(usize, usize)> = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &p)| p)
            .collect();
        if oracle_is_bisimulation(a, b, &rel) {
            union.extend(rel);
        }
    }
    union
}

/// Equivalence classes of a relation on one structure, as sorted member lists
/// ordered by smallest member.
pub fn classes(n: usize, rel: &BTreeSet<(usize, usize)>) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let class: Vec<usize> = (0..n).filter(|&t| rel.contains(&(s, t))).collect();
        for &t in &class {
            seen[t] = true;
        }
        out.push(class);
    }
    out
}

// ---------------------------------------------------------------------------
// Equivalence-preserving mutations
// ---------------------------------------------------------------------------

/// Adds copies of random states. A copy has the original's label and
/// successors; some edges into the original are redirected to the copy.
pub fn duplicate_states(rng: &mut ChaCha8Rng, k: &KripkeStructure) -> KripkeStructure {
    let n = k.num_states();
    let mut edges: Vec<(String, String)> = k
        .edges()
        .map(|(s, t)| (k.state_name(s).to_string(), k.state_name(t).to_string()))
        .collect();
    let mut b = KripkeStructure::builder().atoms(k.atoms().iter());
    for s in 0..n {
        b = b.state(k.state_name(s), k.label_names(s));
    }
    for &s in k.initial() {
        b = b.init(k.state_name(s));
    }
    let copies = rng.gen_range(1..=3);
    for c in 0..copies {
        let s = rng.gen_range(0..n);
        let orig = k.state_name(s).to_string();
        let copy = format!("{orig}_dup{c}");
        b = b.state(copy.clone(), k.label_names(s));
        if k.is_initial(s) && rng.gen_bool(0.5) {
            b = b.init(copy.clone());
        }
        for &t in k.successors(s) {
            edges.push((copy.clone(), k.state_name(t).to_string()));
        }
        let mut redirected = Vec::new();
        for e in edges.iter_mut() {
            if e.1 == orig && rng.gen_bool(0.5) {
                if rng.gen_bool(0.5) {
                    e.1 = copy.clone();
                } else {
                    redirected.push((e.0.clone(), copy.clone()));
                }
            }
        }
        edges.extend(redirected);
    }
    for (s, t) in edges {
        b = b.edge(s, t);
    }
    // A redirect may leave the original unreachable, which is fine; but
    // every original keeps its own successors, so the result stays total.
    b.build().unwrap()
}

/// Renames every state through a random injective map.
pub fn rename_states(rng: &mut ChaCha8Rng, k: &KripkeStructure) -> KripkeStructure {
    let mut perm: Vec<usize> = (0..k.num_states()).collect();
    perm.shuffle(rng);
    let names: BTreeMap<String, String> = (0..k.num_states())
        .map(|s| (k.state_name(s).to_string(), format!("q{}", perm[s])))
        .collect();
    k.rename(|s| names[s].clone()).unwrap()
}

/// Adds a few states that no initial state can reach. They may point back
/// into the original structure.
pub fn inject_unreachable(rng: &mut ChaCha8Rng, k: &KripkeStructure) -> KripkeStructure {
    let atoms: Vec<String> = k.atoms().iter().map(String::from).collect();
    let extra = rng.gen_range(1..=3);
    let mut b = k.to_builder();
    for i in 0..extra {
        let label: Vec<String> = atoms.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        b = b.state(format!("ghost{i}"), label);
        let target = if rng.gen_bool(0.5) {
            k.state_name(rng.gen_range(0..k.num_states())).to_string()
        } else {
            format!("ghost{}", rng.gen_range(0..extra))
        };
        b = b.edge(format!("ghost{i}"), target);
    }
    b.build().unwrap()
}

// ---------------------------------------------------------------------------
// Grammars, formulas, trees
// ---------------------------------------------------------------------------

/// A random grammar satisfying every validation rule: fragments of at most
/// 8 states and arity 1 or 2.
pub fn random_grammar(rng: &mut ChaCha8Rng) -> GraphGrammar {
    let n = rng.gen_range(1..=2);
    let atoms = atom_names(3);
    let pick_label = |rng: &mut ChaCha8Rng| -> Vec<String> {
        atoms.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect()
    };

    let g0_size = rng.gen_range(n + 1..=8);
    let mut g0 = Fragment::default();
    let g0_names: Vec<String> = (0..g0_size).map(|i| format!("g{i}")).collect();
    let exits: Vec<String> = g0_names[g0_size - n..].to_vec();
    for name in &g0_names {
        g0.add_state(name.clone(), pick_label(rng));
    }
    for name in &g0_names[..g0_size - n] {
        for _ in 0..rng.gen_range(1..=3) {
            g0.add_edge(name.clone(), g0_names.choose(rng).unwrap().clone());
        }
    }

    let interior = rng.gen_range(0..=8 - 2 * n);
    let mut rule = Fragment::default();
    let ins: Vec<String> = (1..=n).map(|i| format!("in{i}")).collect();
    let outs: Vec<String> = (1..=n).map(|i| format!("out{i}")).collect();
    let mids: Vec<String> = (0..interior).map(|i| format!("m{i}")).collect();
    for i in 0..n {
        let label = g0.labels[&exits[i]].clone();
        rule.add_state(ins[i].clone(), label.clone());
        rule.add_state(outs[i].clone(), label);
    }
    for m in &mids {
        rule.add_state(m.clone(), pick_label(rng));
    }
    let all: Vec<String> = ins.iter().chain(&outs).chain(&mids).cloned().collect();
    for src in ins.iter().chain(&mids) {
        for _ in 0..rng.gen_range(1..=3) {
            rule.add_edge(src.clone(), all.choose(rng).unwrap().clone());
        }
    }

    let mut init = BTreeSet::from([g0_names[0].clone()]);
    if rng.gen_bool(0.3) {
        init.insert(g0_names.choose(rng).unwrap().clone());
    }
    GraphGrammar {
        atoms: AtomSet::new(atoms.clone()).unwrap(),
        g0,
        init,
        exits,
        rule,
        ins,
        outs,
    }
}

/// A random CTL formula of nesting depth at most `depth`.
pub fn random_formula(rng: &mut ChaCha8Rng, atoms: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(atoms.choose(rng).unwrap().clone()),
        };
    }
    let sub = |rng: &mut ChaCha8Rng| Box::new(random_formula(rng, atoms, depth - 1));
    match rng.gen_range(0..14) {
        0 => Formula::Not(sub(rng)),
        1 => Formula::And(sub(rng), sub(rng)),
        2 => Formula::Or(sub(rng), sub(rng)),
        3 => Formula::Implies(sub(rng), sub(rng)),
        4 => Formula::EX(sub(rng)),
        5 => Formula::AX(sub(rng)),
        6 => Formula::EF(sub(rng)),
        7 => Formula::AF(sub(rng)),
        8 => Formula::EG(sub(rng)),
        9 => Formula::AG(sub(rng)),
        10 | 11 => Formula::EU(sub(rng), sub(rng)),
        _ => Formula::AU(sub(rng), sub(rng)),
    }
}

/// A random, generally non-canonical tree with repeated subtrees.
pub fn random_tree(rng: &mut ChaCha8Rng, depth: usize) -> UnwindTree {
    let label: Vec<&str> = ["a", "b"].into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    if depth == 0 {
        return UnwindTree::truncated(label);
    }
    let n = rng.gen_range(1..=3);
    let mut children: Vec<UnwindTree> = (0..n).map(|_| random_tree(rng, depth - 1)).collect();
    if rng.gen_bool(0.4) {
        let dup = children[0].clone();
        children.push(dup);
    }
    UnwindTree::node(label, depth, children)
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

pub fn fixture(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn kripke_fixture(name: &str) -> KripkeStructure {
    kripke_min::kripke::parse_kripke(&fixture(name)).unwrap()
}
