use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use super::{CanonicalForm, Element, MealyMachine, StateId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NucleusError {
    #[error("nucleus candidate set grew past the budget of {budget} (reached {reached})")]
    BudgetExceeded { budget: usize, reached: usize },
    #[error("no generators given")]
    NoGenerators,
}

/// States of `m` that lie on a directed cycle (including self-loops).
fn cyclic_states(m: &MealyMachine) -> Vec<StateId> {
    let n = m.num_states();
    // s is on a cycle iff s is reachable from one of its successors
    (0..n as StateId)
        .filter(|&s| {
            let succ: Vec<StateId> = m.successors(s).to_vec();
            m.reachable_from(&succ).contains(&s)
        })
        .collect()
}

fn recurrent_sections(g: &Element) -> Vec<Element> {
    let form = g.canonical();
    let machine = Arc::new(form.machine().clone());
    cyclic_states(&machine).into_iter().map(|s| Element::new(machine.clone(), s)).collect()
}

/// Fixed point of "recurrent sections of products with a recurrent
/// generator section".
///
/// `N_0` is the set of recurrent sections of the generators, their inverses
/// and the identity. The candidate set starts at `N_0` and absorbs every
/// state lying on a cycle of `x·b` for `x` in the set and `b ∈ N_0`.
/// A recurrent section `x = x|_u` of a word `a_1 ⋯ a_n` over `N_0` factors
/// as `y·b` with `y` a recurrent section of `a_1 ⋯ a_{n-1}` and `b ∈ N_0`
/// (follow the ray `v u u u …`), so products with `N_0` suffice. For a
/// contracting group this stabilises at the nucleus. The returned set is the
/// closure of generators, inverses and the nucleus under restriction, sorted
/// by canonical form; it contains the generators and is closed under
/// inversion and restriction.
///
/// The candidate set growing beyond `budget` means the group is not
/// contracting or the budget is too small.
pub fn nucleus(generators: &[Element], budget: usize) -> Result<Vec<Element>, NucleusError> {
    let first = generators.first().ok_or(NucleusError::NoGenerators)?;
    let mut seeds: Vec<Element> = vec![Element::identity(first.alphabet())];
    for g in generators {
        seeds.push(g.clone());
        seeds.push(g.inverse());
    }

    let mut known: HashSet<Arc<CanonicalForm>> = HashSet::new();
    let mut core: Vec<Element> = Vec::new();
    let mut push = |e: Element, core: &mut Vec<Element>| -> Result<(), NucleusError> {
        if known.insert(e.canonical().clone()) {
            core.push(e);
            if core.len() > budget {
                return Err(NucleusError::BudgetExceeded { budget, reached: core.len() });
            }
        }
        Ok(())
    };
    for g in &seeds {
        for s in recurrent_sections(g) {
            push(s, &mut core)?;
        }
    }
    let base = core.clone();
    let mut done = 0;
    while done < core.len() {
        let frontier = core.len();
        // products are formed in parallel and merged in a fixed order
        let found: Vec<Vec<Element>> = core[done..frontier]
            .par_iter()
            .map(|x| base.iter().flat_map(|b| recurrent_sections(&(x * b))).collect())
            .collect();
        for s in found.into_iter().flatten() {
            push(s, &mut core)?;
        }
        done = frontier;
    }

    let mut closure: BTreeMap<Arc<CanonicalForm>, Element> = BTreeMap::new();
    for g in seeds.iter().chain(core.iter()) {
        for s in g.all_sections().into_iter().chain(g.inverse().all_sections()) {
            closure.entry(s.canonical().clone()).or_insert(s);
        }
        if closure.len() > budget {
            return Err(NucleusError::BudgetExceeded { budget, reached: closure.len() });
        }
    }
    Ok(closure.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{Alphabet, Perm};

    fn p3() -> Alphabet {
        Alphabet::new(3).unwrap()
    }

    #[test]
    fn trivial_group() {
        let e = Element::identity(p3());
        let n = nucleus(std::slice::from_ref(&e), 10).unwrap();
        assert_eq!(n, vec![e]);
        assert_eq!(nucleus(&[], 10), Err(NucleusError::NoGenerators));
    }

    #[test]
    fn adding_machine_nucleus() {
        let a = p3();
        let m = MealyMachine::from_states(a, vec![(a.sigma_power(1), vec![1, 1, 0]), (a.identity(), vec![1, 1, 1])])
            .unwrap();
        let t = Element::new(Arc::new(m), 0);
        let n = nucleus(std::slice::from_ref(&t), 100).unwrap();
        // {1, t, t⁻¹}
        assert_eq!(n.len(), 3);
        assert!(n.contains(&t) && n.contains(&t.inverse()));
    }

    #[test]
    fn lamplighter_is_not_contracting() {
        // a = (a, b, 1)·(0 1), b = (a, b, 1): the lamplighter automaton on the
        // first two letters, letter 2 fixed.
        let a = p3();
        let swap = Perm::from_images(vec![1, 0, 2]).unwrap();
        let m = MealyMachine::from_states(
            a,
            vec![(swap, vec![0, 1, 2]), (a.identity(), vec![0, 1, 2]), (a.identity(), vec![2, 2, 2])],
        )
        .unwrap();
        let m = Arc::new(m);
        let gens = [Element::new(m.clone(), 0), Element::new(m, 1)];
        assert!(matches!(nucleus(&gens, 300), Err(NucleusError::BudgetExceeded { .. })));
    }
}
