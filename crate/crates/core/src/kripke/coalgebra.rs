//! Kripke structures viewed as coalgebras of `P_f(AP) x P_f(-)`: each state
//! is mapped to its observation, the pair of its label and its successor set.

use std::collections::{BTreeMap, BTreeSet};

use super::{AtomSet, KripkeStructure};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Observation {
    pub label: BTreeSet<String>,
    pub successors: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalgebraView {
    pub atoms: AtomSet,
    pub carrier: BTreeSet<String>,
    pub alpha: BTreeMap<String, Observation>,
    pub init: BTreeSet<String>,
}

impl CoalgebraView {
    pub fn observe(&self, state: &str) -> Option<&Observation> {
        self.alpha.get(state)
    }

    /// Position of `state` in the carrier's canonical order.
    pub fn index_of(&self, state: &str) -> Option<usize> {
        self.carrier.iter().position(|s| s == state)
    }
}

pub fn to_coalgebra_view(k: &KripkeStructure) -> CoalgebraView {
    let alpha = (0..k.num_states())
        .map(|s| {
            let obs = Observation {
                label: k.label_names(s).into_iter().map(String::from).collect(),
                successors: k
                    .successors(s)
                    .iter()
                    .map(|&t| k.state_name(t).to_string())
                    .collect(),
            };
            (k.state_name(s).to_string(), obs)
        })
        .collect();
    CoalgebraView {
        atoms: k.atoms().clone(),
        carrier: k.state_names().iter().cloned().collect(),
        alpha,
        init: k
            .initial()
            .iter()
            .map(|&s| k.state_name(s).to_string())
            .collect(),
    }
}

/// Rebuilds the Kripke structure of a view. Fails if `alpha` is not total on
/// the carrier or maps a state to an empty successor set.
pub fn from_coalgebra_view(c: &CoalgebraView) -> Result<KripkeStructure> {
    let mut b = KripkeStructure::builder().atoms(c.atoms.iter());
    for s in &c.carrier {
        let obs = c
            .alpha
            .get(s)
            .ok_or_else(|| Error::NotTotal(s.clone()))?;
        b = b.state(s.as_str(), obs.label.iter().map(String::as_str));
        for t in &obs.successors {
            b = b.edge(s.as_str(), t.as_str());
        }
    }
    if let Some(extra) = c.alpha.keys().find(|s| !c.carrier.contains(*s)) {
        return Err(Error::UnknownState(extra.clone()));
    }
    for s in &c.init {
        b = b.init(s.as_str());
    }
    b.build()
}
