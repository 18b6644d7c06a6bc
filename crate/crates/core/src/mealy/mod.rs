//! Finite invertible Mealy machines over the alphabet `{0, …, p-1}`.
//!
//! A state `s` with output permutation `π_s` and successors `s·x` encodes the
//! tree automorphism `g_s(x w) = π_s(x) g_{s·x}(w)`. Machines are immutable;
//! every transformation builds a new one.

mod bounded;
mod dot;
mod element;
mod nucleus;
mod order;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::{Alphabet, AlphabetError, Letter, Perm};

pub use bounded::is_bounded;
pub use dot::export_dot;
pub use element::{Element, WreathDecomposition};
pub use nucleus::{nucleus, NucleusError};
pub use order::OrderResult;

pub type StateId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MealyError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("state {state}: {reason}")]
    InvalidState { state: usize, reason: String },
    #[error("machine has no states")]
    Empty,
    #[error("order cap must be at least 1, got {0}")]
    CapTooSmall(u64),
    #[error("expected {expected} sections, got {got}")]
    SectionCount { expected: usize, got: usize },
}

/// A finite invertible letter-to-letter transducer.
#[derive(Clone)]
pub struct MealyMachine {
    alphabet: Alphabet,
    /// `out[s * p + x]` is the image of letter `x` under the output of `s`.
    out: Vec<Letter>,
    /// `next[s * p + x]` is the state reached from `s` on input `x`.
    next: Vec<StateId>,
    identity_state: Option<StateId>,
    labels: Option<Vec<String>>,
}

impl MealyMachine {
    /// Builds a machine from `(output, successors)` pairs, validating that the
    /// outputs are permutations and the transition table is total.
    pub fn from_states(
        alphabet: Alphabet,
        states: impl IntoIterator<Item = (Perm, Vec<StateId>)>,
    ) -> Result<Self, MealyError> {
        let p = alphabet.size();
        let mut out = Vec::new();
        let mut next = Vec::new();
        for (i, (perm, succ)) in states.into_iter().enumerate() {
            if perm.degree() != p {
                return Err(MealyError::Alphabet(AlphabetError::Mismatch(perm.degree() as u8, alphabet.p())));
            }
            if succ.len() != p {
                return Err(MealyError::InvalidState {
                    state: i,
                    reason: format!("{} successors for {} letters", succ.len(), p),
                });
            }
            out.extend_from_slice(perm.images());
            next.extend_from_slice(&succ);
        }
        if out.is_empty() {
            return Err(MealyError::Empty);
        }
        let n = out.len() / p;
        if let Some(pos) = next.iter().position(|&t| t as usize >= n) {
            return Err(MealyError::InvalidState {
                state: pos / p,
                reason: format!("transition to missing state {}", next[pos]),
            });
        }
        let mut m = MealyMachine { alphabet, out, next, identity_state: None, labels: None };
        m.identity_state = m.find_trivial_state();
        Ok(m)
    }

    pub(crate) fn from_raw(alphabet: Alphabet, out: Vec<Letter>, next: Vec<StateId>) -> Self {
        let mut m = MealyMachine { alphabet, out, next, identity_state: None, labels: None };
        m.identity_state = m.find_trivial_state();
        m
    }

    /// A state whose output is the identity and whose transitions are all
    /// self-loops, if one exists.
    fn find_trivial_state(&self) -> Option<StateId> {
        (0..self.num_states() as StateId)
            .find(|&s| self.is_identity_output(s) && self.successors(s).iter().all(|&t| t == s))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.num_states());
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, s: StateId) -> Option<&str> {
        self.labels.as_ref().map(|l| l[s as usize].as_str())
    }

    /// Finds the state carrying a given label.
    pub fn state_labelled(&self, label: &str) -> Option<StateId> {
        self.labels.as_ref()?.iter().position(|l| l == label).map(|i| i as StateId)
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    #[inline]
    pub fn num_states(&self) -> usize {
        self.out.len() / self.alphabet.size()
    }

    #[inline]
    pub fn output_images(&self, s: StateId) -> &[Letter] {
        let p = self.alphabet.size();
        &self.out[s as usize * p..(s as usize + 1) * p]
    }

    pub fn output(&self, s: StateId) -> Perm {
        Perm::from_images_unchecked(self.output_images(s).to_vec())
    }

    #[inline]
    pub fn successors(&self, s: StateId) -> &[StateId] {
        let p = self.alphabet.size();
        &self.next[s as usize * p..(s as usize + 1) * p]
    }

    #[inline]
    pub fn next(&self, s: StateId, x: Letter) -> StateId {
        self.next[s as usize * self.alphabet.size() + x as usize]
    }

    #[inline]
    pub fn apply(&self, s: StateId, x: Letter) -> Letter {
        self.out[s as usize * self.alphabet.size() + x as usize]
    }

    pub fn identity_state(&self) -> Option<StateId> {
        self.identity_state
    }

    fn is_identity_output(&self, s: StateId) -> bool {
        self.output_images(s).iter().enumerate().all(|(i, &y)| i == y as usize)
    }

    /// Runs the transducer from `s` on `word`, returning the output word and
    /// the final state.
    pub fn run(&self, s: StateId, word: &[Letter]) -> (Vec<Letter>, StateId) {
        let mut state = s;
        let mut out = Vec::with_capacity(word.len());
        for &x in word {
            out.push(self.apply(state, x));
            state = self.next(state, x);
        }
        (out, state)
    }

    /// States reachable from `roots`, in BFS order with letters ascending.
    pub fn reachable_from(&self, roots: &[StateId]) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for &r in roots {
            if !seen[r as usize] {
                seen[r as usize] = true;
                queue.push_back(r);
            }
        }
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for &t in self.successors(s) {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    /// Coarsest bisimulation on all states: states are equivalent iff they
    /// define the same tree automorphism. Returns the class of every state;
    /// classes are numbered by first occurrence.
    pub fn bisimulation_classes(&self) -> Vec<u32> {
        let n = self.num_states();
        let p = self.alphabet.size();
        let mut class = vec![0u32; n];
        let mut count = {
            let mut ids: HashMap<&[Letter], u32> = HashMap::new();
            for s in 0..n {
                let len = ids.len() as u32;
                class[s] = *ids.entry(self.output_images(s as StateId)).or_insert(len);
            }
            ids.len()
        };
        let mut sig = vec![0u32; p + 1];
        loop {
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::with_capacity(count * 2);
            let mut refined = vec![0u32; n];
            for s in 0..n {
                sig[0] = class[s];
                for x in 0..p {
                    sig[x + 1] = class[self.next[s * p + x] as usize];
                }
                let len = ids.len() as u32;
                refined[s] = match ids.get(&sig) {
                    Some(&c) => c,
                    None => {
                        ids.insert(sig.clone(), len);
                        len
                    }
                };
            }
            let new_count = ids.len();
            class = refined;
            if new_count == count {
                return class;
            }
            count = new_count;
        }
    }

    /// Quotient by the coarsest bisimulation. Each class keeps the label of
    /// its first state.
    pub fn minimize(&self) -> MealyMachine {
        self.minimize_with_map().0
    }

    /// Like [`MealyMachine::minimize`], also returning the map from old
    /// states to new ones.
    pub fn minimize_with_map(&self) -> (MealyMachine, Vec<StateId>) {
        let class = self.bisimulation_classes();
        let p = self.alphabet.size();
        let k = class.iter().copied().max().map_or(0, |c| c as usize + 1);
        let mut rep = vec![u32::MAX; k];
        for (s, &c) in class.iter().enumerate() {
            if rep[c as usize] == u32::MAX {
                rep[c as usize] = s as u32;
            }
        }
        let mut out = Vec::with_capacity(k * p);
        let mut next = Vec::with_capacity(k * p);
        for &r in &rep {
            out.extend_from_slice(self.output_images(r));
            next.extend(self.successors(r).iter().map(|&t| class[t as usize]));
        }
        let mut m = MealyMachine::from_raw(self.alphabet, out, next);
        if let Some(labels) = &self.labels {
            m.labels = Some(rep.iter().map(|&r| labels[r as usize].clone()).collect());
        }
        (m, class)
    }

    /// Restriction to the given states (which must be closed under
    /// transitions), renumbered in the given order.
    pub(crate) fn submachine(&self, states: &[StateId]) -> MealyMachine {
        let mut index = vec![u32::MAX; self.num_states()];
        for (i, &s) in states.iter().enumerate() {
            index[s as usize] = i as StateId;
        }
        let mut out = Vec::with_capacity(states.len() * self.alphabet.size());
        let mut next = Vec::with_capacity(states.len() * self.alphabet.size());
        for &s in states {
            out.extend_from_slice(self.output_images(s));
            next.extend(self.successors(s).iter().map(|&t| {
                debug_assert_ne!(index[t as usize], u32::MAX);
                index[t as usize]
            }));
        }
        let mut m = MealyMachine::from_raw(self.alphabet, out, next);
        if let Some(labels) = &self.labels {
            m.labels = Some(states.iter().map(|&s| labels[s as usize].clone()).collect());
        }
        m
    }

    /// Renumbers states in BFS order from `roots` (letters ascending),
    /// dropping unreachable states. Returns the machine and the map from old
    /// to new ids (`u32::MAX` for dropped states).
    pub fn relabel_bfs(&self, roots: &[StateId]) -> (MealyMachine, Vec<StateId>) {
        let order = self.reachable_from(roots);
        let mut index = vec![u32::MAX; self.num_states()];
        for (i, &s) in order.iter().enumerate() {
            index[s as usize] = i as StateId;
        }
        (self.submachine(&order), index)
    }

    /// Canonical form of the automorphism defined by state `s`: the minimized
    /// reachable part numbered by BFS from `s`.
    pub fn canonical_form(&self, s: StateId) -> CanonicalForm {
        let order = self.reachable_from(&[s]);
        let sub = self.submachine(&order);
        let class = sub.bisimulation_classes();
        let k = class.iter().copied().max().map_or(0, |c| c as usize + 1);
        let p = self.alphabet.size();
        // BFS over classes, starting from the class of state 0 (= s).
        let mut rep = vec![u32::MAX; k];
        for (st, &c) in class.iter().enumerate() {
            if rep[c as usize] == u32::MAX {
                rep[c as usize] = st as u32;
            }
        }
        let mut index = vec![u32::MAX; k];
        let mut queue = VecDeque::with_capacity(k);
        let mut bfs = Vec::with_capacity(k);
        index[class[0] as usize] = 0;
        queue.push_back(class[0]);
        while let Some(c) = queue.pop_front() {
            bfs.push(c);
            for &t in sub.successors(rep[c as usize]) {
                let tc = class[t as usize];
                if index[tc as usize] == u32::MAX {
                    index[tc as usize] = (bfs.len() + queue.len()) as u32;
                    queue.push_back(tc);
                }
            }
        }
        let mut out = Vec::with_capacity(k * p);
        let mut next = Vec::with_capacity(k * p);
        for &c in &bfs {
            let r = rep[c as usize];
            out.extend_from_slice(sub.output_images(r));
            next.extend(sub.successors(r).iter().map(|&t| index[class[t as usize] as usize]));
        }
        CanonicalForm(MealyMachine::from_raw(self.alphabet, out, next))
    }

    /// Disjoint union of machines; returns the union and each input's offset.
    pub fn disjoint_union(parts: &[&MealyMachine]) -> Result<(MealyMachine, Vec<StateId>), MealyError> {
        let alphabet = parts.first().ok_or(MealyError::Empty)?.alphabet;
        let mut out = Vec::new();
        let mut next = Vec::new();
        let mut offsets = Vec::with_capacity(parts.len());
        for m in parts {
            if m.alphabet != alphabet {
                return Err(AlphabetError::Mismatch(alphabet.p(), m.alphabet.p()).into());
            }
            let off = (out.len() / alphabet.size()) as StateId;
            offsets.push(off);
            out.extend_from_slice(&m.out);
            next.extend(m.next.iter().map(|&t| t + off));
        }
        Ok((MealyMachine::from_raw(alphabet, out, next), offsets))
    }

    pub fn to_json(&self, initial: Option<StateId>) -> MachineJson {
        MachineJson {
            p: self.alphabet.p() as u32,
            states: (0..self.num_states() as StateId)
                .map(|s| StateJson { out: self.output_images(s).to_vec(), next: self.successors(s).to_vec() })
                .collect(),
            initial,
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(json: &MachineJson) -> Result<(MealyMachine, Option<StateId>), MealyError> {
        let alphabet = Alphabet::new(json.p)?;
        let states = json
            .states
            .iter()
            .map(|s| Ok((Perm::from_images(s.out.clone())?, s.next.clone())))
            .collect::<Result<Vec<_>, MealyError>>()?;
        let mut m = MealyMachine::from_states(alphabet, states)?;
        if let Some(labels) = &json.labels {
            if labels.len() != m.num_states() {
                return Err(MealyError::InvalidState {
                    state: labels.len(),
                    reason: "label count does not match state count".into(),
                });
            }
            m.labels = Some(labels.clone());
        }
        if let Some(init) = json.initial {
            if init as usize >= m.num_states() {
                return Err(MealyError::InvalidState {
                    state: init as usize,
                    reason: "initial state out of range".into(),
                });
            }
        }
        Ok((m, json.initial))
    }
}

impl fmt::Debug for MealyMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MealyMachine(p = {}, {} states)", self.alphabet.p(), self.num_states())?;
        for s in 0..self.num_states() as StateId {
            let name = self.label(s).map(|l| format!(" {l}")).unwrap_or_default();
            writeln!(f, "  {s}{name}: {:?} -> {:?}", self.output_images(s), self.successors(s))?;
        }
        Ok(())
    }
}

/// JSON shape of a machine: `{p, states: [{out, next}], initial}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineJson {
    pub p: u32,
    pub states: Vec<StateJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<StateId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub out: Vec<Letter>,
    pub next: Vec<StateId>,
}

/// A minimized machine in canonical BFS order with the initial state at 0.
/// Two elements are equal as tree automorphisms iff their canonical forms
/// are equal.
#[derive(Clone)]
pub struct CanonicalForm(MealyMachine);

impl CanonicalForm {
    pub fn machine(&self) -> &MealyMachine {
        &self.0
    }

    pub fn num_states(&self) -> usize {
        self.0.num_states()
    }

    pub fn is_identity(&self) -> bool {
        self.0.num_states() == 1 && self.0.is_identity_output(0)
    }

    fn key(&self) -> (u8, &[Letter], &[StateId]) {
        (self.0.alphabet.p(), &self.0.out, &self.0.next)
    }
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for CanonicalForm {}

impl Hash for CanonicalForm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.alphabet.p(), self.num_states(), &self.0.out, &self.0.next).cmp(&(
            other.0.alphabet.p(),
            other.num_states(),
            &other.0.out,
            &other.0.next,
        ))
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Canonical{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Alphabet {
        Alphabet::new(3).unwrap()
    }

    #[test]
    fn rejects_malformed_machines() {
        let a = p3();
        let id = a.identity();
        assert!(matches!(
            MealyMachine::from_states(a, vec![(id.clone(), vec![0, 0])]),
            Err(MealyError::InvalidState { .. })
        ));
        assert!(matches!(
            MealyMachine::from_states(a, vec![(id.clone(), vec![0, 0, 1])]),
            Err(MealyError::InvalidState { state: 0, .. })
        ));
        assert!(matches!(MealyMachine::from_states(a, vec![]), Err(MealyError::Empty)));
        let five = Alphabet::new(5).unwrap().identity();
        assert!(MealyMachine::from_states(a, vec![(five, vec![0, 0, 0])]).is_err());
    }

    #[test]
    fn two_identity_states_collapse() {
        let a = p3();
        let id = a.identity();
        let m = MealyMachine::from_states(a, vec![(id.clone(), vec![1, 1, 1]), (id, vec![0, 0, 0])]).unwrap();
        let min = m.minimize();
        assert_eq!(min.num_states(), 1);
        assert_eq!(min.identity_state(), Some(0));
    }

    #[test]
    fn minimize_is_idempotent_and_separates() {
        let a = p3();
        // an adding-machine style cycle plus redundant copies
        let s = a.sigma_power(1);
        let id = a.identity();
        let m = MealyMachine::from_states(
            a,
            vec![
                (s.clone(), vec![2, 2, 0]),
                (s.clone(), vec![3, 3, 1]),
                (id.clone(), vec![2, 2, 2]),
                (id.clone(), vec![2, 3, 3]),
            ],
        )
        .unwrap();
        let min = m.minimize();
        assert_eq!(min.num_states(), 2);
        assert_eq!(min.minimize().num_states(), 2);
        let classes = min.bisimulation_classes();
        let mut sorted = classes.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), min.num_states());
    }

    #[test]
    fn json_round_trip() {
        let a = p3();
        let m = MealyMachine::from_states(a, vec![(a.sigma_power(1), vec![1, 1, 0]), (a.identity(), vec![1, 1, 1])])
            .unwrap()
            .with_labels(vec!["a".into(), "1".into()]);
        let json = serde_json::to_string(&m.to_json(Some(0))).unwrap();
        let back: MachineJson = serde_json::from_str(&json).unwrap();
        let (m2, init) = MealyMachine::from_json(&back).unwrap();
        assert_eq!(init, Some(0));
        assert_eq!(m2.canonical_form(0), m.canonical_form(0));
        assert_eq!(m2.labels().unwrap(), ["a", "1"]);
        assert!(serde_json::from_str::<MachineJson>(r#"{"p":3,"states":[],"bogus":1}"#).is_err());
    }
}
