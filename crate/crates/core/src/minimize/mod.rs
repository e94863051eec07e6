//! Partition refinement and quotient construction.
//!
//! [`minimize`] drops unreachable states, starts from the partition of states
//! by label, and splits blocks until every member of a block hits exactly the
//! same set of blocks with its successors. The blocks of the resulting stable
//! partition are the bisimilarity classes, and the quotient over them is the
//! unique (up to isomorphism) reduced and connected structure equivalent to
//! the input.

mod iso;

use std::collections::HashMap;
use std::fmt::Write;

use crate::bisim::{largest_bisimulation, BisimRelation};
use crate::error::{Error, Result};
use crate::kripke::{restrict_reachable, KripkeStructure};

pub use crate::kripke::is_connected;
pub use iso::{are_isomorphic, find_isomorphism, MAX_ISO_STATES};

/// A partition of the states of one structure into nonempty blocks.
///
/// Blocks are ordered by their smallest member and members are sorted, so two
/// partitions describing the same equivalence compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    /// Builds the partition in which `s` and `t` share a block iff
    /// `key(s) == key(t)`.
    pub fn from_keys<K, F>(num_states: usize, mut key: F) -> Self
    where
        K: Eq + std::hash::Hash,
        F: FnMut(usize) -> K,
    {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = Vec::with_capacity(num_states);
        // States are visited in order, so blocks come out ordered by their
        // smallest member.
        for s in 0..num_states {
            let next = ids.len();
            let b = *ids.entry(key(s)).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(s);
            block_of.push(b);
        }
        Partition { blocks, block_of }
    }

    /// Validates an explicit list of blocks over `num_states` states.
    pub fn from_blocks(num_states: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut owner = vec![usize::MAX; num_states];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &s in block {
                if s >= num_states {
                    return Err(Error::InvalidPartition(format!("state index {s} out of range")));
                }
                if owner[s] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("state {s} in two blocks")));
                }
                owner[s] = b;
            }
        }
        if let Some(s) = owner.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidPartition(format!("state {s} not covered")));
        }
        Ok(Self::from_keys(num_states, |s| owner[s]))
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_states(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_of(&self, state: usize) -> usize {
        self.block_of[state]
    }

    /// True iff every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.num_states() == coarser.num_states()
            && self.blocks.iter().all(|block| {
                let b = coarser.block_of(block[0]);
                block.iter().all(|&s| coarser.block_of(s) == b)
            })
    }

    fn signature(&self, k: &KripkeStructure, s: usize) -> (usize, Vec<usize>) {
        let mut hit: Vec<usize> = k.successors(s).iter().map(|&t| self.block_of[t]).collect();
        hit.sort_unstable();
        hit.dedup();
        (self.block_of[s], hit)
    }

    fn check_size(&self, k: &KripkeStructure) -> Result<()> {
        if self.num_states() != k.num_states() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} states, structure has {}",
                self.num_states(),
                k.num_states()
            )));
        }
        Ok(())
    }

    /// Every block's members share one label.
    pub fn is_label_uniform(&self, k: &KripkeStructure) -> bool {
        self.blocks
            .iter()
            .all(|block| block.iter().all(|&s| k.label(s) == k.label(block[0])))
    }

    /// No block would be split by another refinement round.
    pub fn is_stable(&self, k: &KripkeStructure) -> bool {
        self.blocks.iter().all(|block| {
            let first = self.signature(k, block[0]);
            block.iter().all(|&s| self.signature(k, s) == first)
        })
    }
}

/// Blocks are the label-equality classes.
pub fn initial_partition(k: &KripkeStructure) -> Partition {
    Partition::from_keys(k.num_states(), |s| k.label(s))
}

/// One refinement round: `s` and `t` stay together iff they share a block and
/// their successors hit exactly the same set of blocks.
///
/// # Panics
///
/// If `p` is not a partition of the states of `k`.
pub fn refine_step(k: &KripkeStructure, p: &Partition) -> Partition {
    assert_eq!(p.num_states(), k.num_states(), "partition size mismatch");
    Partition::from_keys(k.num_states(), |s| p.signature(k, s))
}

/// Refines until stable. Returns the partition together with the number of
/// rounds run, counting the final round that changed nothing.
pub fn refine_counting(k: &KripkeStructure, p: &Partition) -> (Partition, usize) {
    let mut current = p.clone();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let next = refine_step(k, &current);
        // refinement only splits, so an unchanged block count means no change
        if next.num_blocks() == current.num_blocks() {
            return (current, rounds);
        }
        current = next;
    }
}

pub fn refine_to_fixpoint(k: &KripkeStructure, p: &Partition) -> Partition {
    refine_counting(k, p).0
}

/// Name of quotient state number `block`.
pub fn block_name(block: usize) -> String {
    format!("b{block}")
}

/// The quotient of `k` by a stable, label-uniform partition. Block `i`
/// becomes state `b<i>`; it is initial iff it contains an initial state and
/// has an edge to every block some member has an edge into.
pub fn quotient(k: &KripkeStructure, p: &Partition) -> Result<KripkeStructure> {
    p.check_size(k)?;
    if !p.is_label_uniform(k) {
        return Err(Error::InvalidPartition("block with mixed labels".into()));
    }
    if let Some(block) = p.blocks.iter().position(|block| {
        let first = p.signature(k, block[0]);
        block.iter().any(|&s| p.signature(k, s) != first)
    }) {
        return Err(Error::UnstablePartition(format!(
            "block {} would split",
            block_name(block)
        )));
    }

    let mut b = KripkeStructure::builder().atoms(k.atoms().iter());
    for (i, block) in p.blocks.iter().enumerate() {
        b = b.state(block_name(i), k.label_names(block[0]));
    }
    for &s in k.initial() {
        b = b.init(block_name(p.block_of(s)));
    }
    for (s, t) in k.edges() {
        b = b.edge(block_name(p.block_of(s)), block_name(p.block_of(t)));
    }
    b.build()
}

/// Everything computed along the way by [`minimize_detailed`].
#[derive(Debug, Clone)]
pub struct Minimization {
    /// The input restricted to its reachable states.
    pub reachable: KripkeStructure,
    /// Stable partition of `reachable`'s states.
    pub partition: Partition,
    /// Refinement rounds, as counted by [`refine_counting`].
    pub rounds: usize,
    pub quotient: KripkeStructure,
}

impl Minimization {
    /// Quotient state representing the original state `name`, or `None` if
    /// `name` was unreachable or unknown.
    pub fn block_of_state(&self, name: &str) -> Option<String> {
        self.reachable
            .index_of(name)
            .map(|s| block_name(self.partition.block_of(s)))
    }

    /// `b<k>: <member> ...` lines in block order.
    pub fn block_map_report(&self) -> String {
        let mut out = String::new();
        for (i, block) in self.partition.blocks().iter().enumerate() {
            out.push_str(&block_name(i));
            out.push(':');
            for &s in block {
                write!(out, " {}", self.reachable.state_name(s)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

pub fn minimize_detailed(k: &KripkeStructure) -> Minimization {
    let reachable = restrict_reachable(k);
    let (partition, rounds) = refine_counting(&reachable, &initial_partition(&reachable));
    let quotient = quotient(&reachable, &partition)
        .expect("stable label-uniform partition yields a valid quotient");
    Minimization {
        reachable,
        partition,
        rounds,
        quotient,
    }
}

/// The concrete smallest structure bisimulation-equivalent to `k`.
pub fn minimize(k: &KripkeStructure) -> KripkeStructure {
    minimize_detailed(k).quotient
}

/// True iff bisimilarity on `k` is the identity.
pub fn is_reduced(k: &KripkeStructure) -> bool {
    largest_bisimulation(k, k).expect("same atoms") == BisimRelation::identity(k)
}
