mod common;

use common::*;
use kripke_min::ctl::{models, parse_formula, sat_vector, Formula};
use kripke_min::minimize::{block_name, minimize, minimize_detailed};
use kripke_min::KripkeStructure;

/// Direct path semantics over bounded path prefixes. On `n` states a
/// prefix of `n` steps inside a set already contains a cycle, so the
/// bounds below are exact.
struct PathOracle<'a> {
    k: &'a KripkeStructure,
}

impl PathOracle<'_> {
    fn holds(&self, s: usize, f: &Formula) -> bool {
        use Formula::*;
        let n = self.k.num_states();
        match f {
            True => true,
            False => false,
            Atom(a) => self.k.label_names(s).contains(&a.as_str()),
            Not(g) => !self.holds(s, g),
            And(g, h) => self.holds(s, g) && self.holds(s, h),
            Or(g, h) => self.holds(s, g) || self.holds(s, h),
            Implies(g, h) => !self.holds(s, g) || self.holds(s, h),
            EX(g) => self.k.successors(s).iter().any(|&t| self.holds(t, g)),
            AX(g) => self.k.successors(s).iter().all(|&t| self.holds(t, g)),
            EF(g) => self.eu(s, &True, g, n),
            AF(g) => self.au(s, &True, g, n),
            EG(g) => self.eg(s, g, n),
            AG(g) => !self.eu(s, &True, &Not(g.clone()), n),
            EU(g, h) => self.eu(s, g, h, n),
            AU(g, h) => self.au(s, g, h, n),
        }
    }

    fn eu(&self, s: usize, f: &Formula, g: &Formula, budget: usize) -> bool {
        self.holds(s, g)
            || (budget > 0
                && self.holds(s, f)
                && self.k.successors(s).iter().any(|&t| self.eu(t, f, g, budget - 1)))
    }

    fn au(&self, s: usize, f: &Formula, g: &Formula, budget: usize) -> bool {
        if self.holds(s, g) {
            return true;
        }
        if budget == 0 || !self.holds(s, f) {
            return false;
        }
        self.k.successors(s).iter().all(|&t| self.au(t, f, g, budget - 1))
    }

    fn eg(&self, s: usize, f: &Formula, budget: usize) -> bool {
        self.holds(s, f)
            && (budget == 0 || self.k.successors(s).iter().any(|&t| self.eg(t, f, budget - 1)))
    }
}

fn atoms_of(k: &KripkeStructure) -> Vec<String> {
    k.atoms().iter().map(String::from).collect()
}

#[test]
fn checker_agrees_with_path_oracle() {
    let mut r = rng(51);
    for _ in 0..150 {
        let k = random_structure(&mut r, 5, 2, false);
        let f = random_formula(&mut r, &atoms_of(&k), 3);
        let oracle = PathOracle { k: &k };
        let got = sat_vector(&k, &f).unwrap();
        for (s, &v) in got.iter().enumerate() {
            assert_eq!(v, oracle.holds(s, &f), "{f} at {}", k.state_name(s));
        }
    }
}

#[test]
fn fixpoint_bounds_and_dualities() {
    let mut r = rng(52);
    for _ in 0..150 {
        let k = random_structure(&mut r, 10, 3, false);
        let atoms = atoms_of(&k);
        let f = random_formula(&mut r, &atoms, 2);
        let g = random_formula(&mut r, &atoms, 2);
        let sat = |x: &Formula| sat_vector(&k, x).unwrap();
        let (sf, sg) = (sat(&f), sat(&g));
        let eu = sat(&Formula::eu(f.clone(), g.clone()));
        let eg = sat(&Formula::eg(f.clone()));
        let ax = sat(&Formula::AX(Box::new(f.clone())));
        let not_ex_not = sat(&Formula::not(Formula::ex(Formula::not(f.clone()))));
        let ag = sat(&Formula::AG(Box::new(f.clone())));
        let not_ef_not = sat(&Formula::not(Formula::EF(Box::new(Formula::not(f.clone())))));
        for s in 0..k.num_states() {
            assert!(!sg[s] || eu[s]);
            assert!(!eg[s] || sf[s]);
            assert_eq!(ax[s], not_ex_not[s]);
            assert_eq!(ag[s], not_ef_not[s]);
        }
    }
}

#[test]
fn truth_transfers_through_the_quotient_map() {
    let mut r = rng(53);
    for _ in 0..100 {
        let k = random_structure(&mut r, 10, 3, false);
        let f = random_formula(&mut r, &atoms_of(&k), 4);
        let m = minimize_detailed(&k);
        let before = sat_vector(&m.reachable, &f).unwrap();
        let after = sat_vector(&m.quotient, &f).unwrap();
        for s in 0..m.reachable.num_states() {
            let h = m.quotient.index_of(&block_name(m.partition.block_of(s))).unwrap();
            assert_eq!(before[s], after[h]);
        }
        assert_eq!(models(&k, &f).unwrap(), models(&minimize(&k), &f).unwrap());
    }
}

#[test]
fn parsed_formulas_print_back() {
    let mut r = rng(54);
    for _ in 0..200 {
        let f = random_formula(&mut r, &atom_names(3), 4);
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        assert!(f.nesting() <= 4);
    }
}
