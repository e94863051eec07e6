//! Bisimulation relations between Kripke structures.
//!
//! A relation `B ⊆ S × S'` is a bisimulation when every related pair carries
//! equal labels and each side can match the other's successor steps inside
//! `B`. The largest one is computed as a greatest fixpoint: start from all
//! label-compatible pairs and delete violating pairs round by round.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::kripke::{CoalgebraView, KripkeStructure};

/// A set of `(left state, right state)` index pairs, kept sorted.
///
/// Indices refer to the canonical (lexicographic) state order of the two
/// structures or coalgebra carriers the relation was built for.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BisimRelation {
    pairs: BTreeSet<(usize, usize)>,
}

impl BisimRelation {
    pub fn new<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        BisimRelation {
            pairs: pairs.into_iter().collect(),
        }
    }

    /// Builds a relation from state names, failing on unknown states.
    pub fn from_names<'a, I>(
        left: &KripkeStructure,
        right: &KripkeStructure,
        pairs: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        pairs
            .into_iter()
            .map(|(s, t)| Ok((left.require_state(s)?, right.require_state(t)?)))
            .collect::<Result<BTreeSet<_>>>()
            .map(|pairs| BisimRelation { pairs })
    }

    pub fn identity(k: &KripkeStructure) -> Self {
        Self::new((0..k.num_states()).map(|s| (s, s)))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn contains(&self, left: usize, right: usize) -> bool {
        self.pairs.contains(&(left, right))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_subset(&self, other: &BisimRelation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn insert(&mut self, left: usize, right: usize) -> bool {
        self.pairs.insert((left, right))
    }

    pub fn remove(&mut self, left: usize, right: usize) -> bool {
        self.pairs.remove(&(left, right))
    }

    /// The pairs as state names.
    pub fn names<'k>(
        &self,
        left: &'k KripkeStructure,
        right: &'k KripkeStructure,
    ) -> Vec<(&'k str, &'k str)> {
        self.pairs
            .iter()
            .map(|&(s, t)| (left.state_name(s), right.state_name(t)))
            .collect()
    }

    fn check_bounds(&self, left_len: usize, right_len: usize) -> Result<()> {
        for &(s, t) in &self.pairs {
            if s >= left_len {
                return Err(Error::DanglingState {
                    index: s,
                    len: left_len,
                });
            }
            if t >= right_len {
                return Err(Error::DanglingState {
                    index: t,
                    len: right_len,
                });
            }
        }
        Ok(())
    }
}

fn check_atoms(left: &KripkeStructure, right: &KripkeStructure) -> Result<()> {
    if left.atoms() != right.atoms() {
        return Err(Error::AtomMismatch);
    }
    Ok(())
}

/// Dense boolean matrix used during fixpoint iteration.
struct Matrix {
    cols: usize,
    bits: Vec<bool>,
}

impl Matrix {
    fn get(&self, s: usize, t: usize) -> bool {
        self.bits[s * self.cols + t]
    }

    fn from_relation(r: &BisimRelation, rows: usize, cols: usize) -> Self {
        let mut bits = vec![false; rows * cols];
        for (s, t) in r.pairs() {
            bits[s * cols + t] = true;
        }
        Matrix { cols, bits }
    }

    fn to_relation(&self) -> BisimRelation {
        BisimRelation::new(
            self.bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| (i / self.cols, i % self.cols)),
        )
    }
}

/// Successor-matching clauses: each step of `s` is matched by some step of
/// `t` inside `rel`, and conversely.
fn steps_match(
    left: &KripkeStructure,
    right: &KripkeStructure,
    rel: &Matrix,
    s: usize,
    t: usize,
) -> bool {
    let forth = left
        .successors(s)
        .iter()
        .all(|&s2| right.successors(t).iter().any(|&t2| rel.get(s2, t2)));
    forth
        && right
            .successors(t)
            .iter()
            .all(|&t2| left.successors(s).iter().any(|&s2| rel.get(s2, t2)))
}

pub fn is_bisimulation(
    left: &KripkeStructure,
    right: &KripkeStructure,
    r: &BisimRelation,
) -> Result<bool> {
    check_atoms(left, right)?;
    r.check_bounds(left.num_states(), right.num_states())?;
    let m = Matrix::from_relation(r, left.num_states(), right.num_states());
    Ok(r
        .pairs()
        .all(|(s, t)| left.label(s) == right.label(t) && steps_match(left, right, &m, s, t)))
}

fn label_compatible(left: &KripkeStructure, right: &KripkeStructure) -> Matrix {
    let cols = right.num_states();
    let mut bits = vec![false; left.num_states() * cols];
    for s in 0..left.num_states() {
        for t in 0..cols {
            bits[s * cols + t] = left.label(s) == right.label(t);
        }
    }
    Matrix { cols, bits }
}

/// One synchronous round: drop every pair whose steps cannot be matched.
/// Returns whether anything was removed.
fn refine_round(left: &KripkeStructure, right: &KripkeStructure, rel: &mut Matrix) -> bool {
    let doomed: Vec<usize> = (0..rel.bits.len())
        .filter(|&i| rel.bits[i])
        .filter(|&i| !steps_match(left, right, rel, i / rel.cols, i % rel.cols))
        .collect();
    for &i in &doomed {
        rel.bits[i] = false;
    }
    !doomed.is_empty()
}

/// The step-indexed approximant `R_k`: label-compatible pairs refined by
/// `rounds` deletion rounds.
pub fn k_approximant(
    left: &KripkeStructure,
    right: &KripkeStructure,
    rounds: usize,
) -> Result<BisimRelation> {
    check_atoms(left, right)?;
    let mut rel = label_compatible(left, right);
    for _ in 0..rounds {
        if !refine_round(left, right, &mut rel) {
            break;
        }
    }
    Ok(rel.to_relation())
}

/// Bisimilarity between the two structures (the union of all bisimulations).
pub fn largest_bisimulation(
    left: &KripkeStructure,
    right: &KripkeStructure,
) -> Result<BisimRelation> {
    check_atoms(left, right)?;
    let mut rel = label_compatible(left, right);
    while refine_round(left, right, &mut rel) {}
    Ok(rel.to_relation())
}

/// Whether two states of one structure are bisimilar.
pub fn bisimilar_states(k: &KripkeStructure, s: &str, t: &str) -> Result<bool> {
    let s = k.require_state(s)?;
    let t = k.require_state(t)?;
    Ok(largest_bisimulation(k, k)?.contains(s, t))
}

/// Bisimulation equivalence: every initial state on either side is related
/// to some initial state on the other.
pub fn are_equivalent(left: &KripkeStructure, right: &KripkeStructure) -> Result<bool> {
    let rel = largest_bisimulation(left, right)?;
    Ok(inits_matched(left, right, &rel))
}

/// The initial-state condition of equivalence, for a given relation.
pub fn inits_matched(left: &KripkeStructure, right: &KripkeStructure, rel: &BisimRelation) -> bool {
    let forth = left
        .initial()
        .iter()
        .all(|&s| right.initial().iter().any(|&t| rel.contains(s, t)));
    forth
        && right
            .initial()
            .iter()
            .all(|&t| left.initial().iter().any(|&s| rel.contains(s, t)))
}

/// Checks `r` as a coalgebra bisimulation: equips `r` with the structure map
/// `γ(s, t) = (L(s), {(s', t') ∈ r | s' ∈ succ(s), t' ∈ succ(t)})` and tests
/// whether both projections out of `(r, γ)` are homomorphisms.
pub fn is_coalgebra_bisimulation(
    left: &CoalgebraView,
    right: &CoalgebraView,
    r: &BisimRelation,
) -> Result<bool> {
    r.check_bounds(left.carrier.len(), right.carrier.len())?;
    let lstates: Vec<&String> = left.carrier.iter().collect();
    let rstates: Vec<&String> = right.carrier.iter().collect();
    let observe = |view: &'_ CoalgebraView, s: &String| {
        view.alpha
            .get(s)
            .cloned()
            .ok_or_else(|| Error::UnknownState(s.clone()))
    };
    let pairs: BTreeSet<(&String, &String)> =
        r.pairs().map(|(s, t)| (lstates[s], rstates[t])).collect();

    let mut cache = BTreeMap::new();
    for &(s, t) in &pairs {
        let alpha_s = observe(left, s)?;
        let beta_t = observe(right, t)?;
        let gamma_succ: Vec<(&String, &String)> = pairs
            .iter()
            .filter(|(s2, t2)| alpha_s.successors.contains(*s2) && beta_t.successors.contains(*t2))
            .copied()
            .collect();
        let gamma_label = &alpha_s.label;

        // π1 square: α(π1(s, t)) = P_f(π1)(γ(s, t))
        let first: BTreeSet<String> = gamma_succ.iter().map(|(s2, _)| (*s2).clone()).collect();
        let left_commutes = *gamma_label == alpha_s.label && first == alpha_s.successors;
        // π2 square: β(π2(s, t)) = P_f(π2)(γ(s, t))
        let second: BTreeSet<String> = gamma_succ.iter().map(|(_, t2)| (*t2).clone()).collect();
        let right_commutes = *gamma_label == beta_t.label && second == beta_t.successors;

        cache.insert((s, t), left_commutes && right_commutes);
    }
    Ok(cache.values().all(|&ok| ok))
}
