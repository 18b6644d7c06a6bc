use std::sync::Arc;

use super::order_type::{derive_uv, wrap, OrderType, UVWords};
use crate::mealy::{Element, MealyMachine, StateId};
use crate::tree::{Alphabet, Perm};

/// The automaton `A_{u,v}`: states for `A`, `B_λ`, the three level-1
/// sections of `B_λ`, the cycles `q_1 → … → q_{p²}` and `r_1 → … → r_{p²}`,
/// the powers of `σ` and the identity. The machine is kept unminimized so
/// every named state is addressable; [`SushchanskyAutomaton::minimized`]
/// gives the quotient.
#[derive(Debug, Clone)]
pub struct SushchanskyAutomaton {
    lambda: OrderType,
    uv: UVWords,
    machine: Arc<MealyMachine>,
    a: StateId,
    b: StateId,
    q: Vec<StateId>,
    r: Vec<StateId>,
}

/// Appends states for `1, σ, …, σ^{p-1}` (state `k` is `σ^k`) and returns
/// the state list with labels.
fn sigma_states(alphabet: Alphabet) -> (Vec<(Perm, Vec<StateId>)>, Vec<String>) {
    let p = alphabet.size();
    let states = (0..p).map(|k| (alphabet.sigma_power(k as i64), vec![0; p])).collect();
    let labels = (0..p)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "σ".to_string(),
            k => format!("σ^{k}"),
        })
        .collect();
    (states, labels)
}

/// Appends the cycles `c_i = (c_{i+1}, σ^{w_i}, 1, …, 1)` for `i = 1..=p²`.
fn push_cycle(
    alphabet: Alphabet,
    word: &[u8],
    name: &str,
    states: &mut Vec<(Perm, Vec<StateId>)>,
    labels: &mut Vec<String>,
) -> Vec<StateId> {
    let p = alphabet.size();
    let n = word.len();
    let base = states.len() as StateId;
    for i in 0..n {
        let mut next = vec![0; p];
        next[0] = base + ((i + 1) % n) as StateId;
        next[1] = word[i] as StateId;
        states.push((alphabet.identity(), next));
        labels.push(format!("{name}{}", i + 1));
    }
    (0..n as StateId).map(|i| base + i).collect()
}

impl SushchanskyAutomaton {
    pub fn build(lambda: &OrderType) -> Self {
        let alphabet = lambda.alphabet();
        let p = alphabet.size();
        let uv = derive_uv(lambda);
        let (mut states, mut labels) = sigma_states(alphabet);

        // A = (1, σ, σ², …, σ^{p-1}) σ
        let a = states.len() as StateId;
        states.push((alphabet.sigma_power(1), (0..p as StateId).collect()));
        labels.push("A".into());

        // B_λ = (B|0, B|1, B|2, 1, …, 1) with B|00 = q_1, B|10 = r_1, B|21 = σ
        let b = states.len() as StateId;
        let (b0, b1, b2) = (b + 1, b + 2, b + 3);
        let q1 = b + 4;
        let r1 = q1 + (p * p) as StateId;
        let mut bnext = vec![0; p];
        bnext[..3].copy_from_slice(&[b0, b1, b2]);
        states.push((alphabet.identity(), bnext));
        labels.push("B".into());
        let mut n0 = vec![0; p];
        n0[0] = q1;
        states.push((alphabet.identity(), n0));
        labels.push("B|0".into());
        let mut n1 = vec![0; p];
        n1[0] = r1;
        states.push((alphabet.identity(), n1));
        labels.push("B|1".into());
        let mut n2 = vec![0; p];
        n2[1] = 1;
        states.push((alphabet.identity(), n2));
        labels.push("B|2".into());

        let q = push_cycle(alphabet, &uv.u, "q", &mut states, &mut labels);
        let r = push_cycle(alphabet, &uv.v, "r", &mut states, &mut labels);
        debug_assert_eq!((q[0], r[0]), (q1, r1));

        let machine = MealyMachine::from_states(alphabet, states)
            .expect("construction yields a valid machine")
            .with_labels(labels);
        SushchanskyAutomaton { lambda: lambda.clone(), uv, machine: Arc::new(machine), a, b, q, r }
    }

    pub fn lambda(&self) -> &OrderType {
        &self.lambda
    }

    pub fn uv(&self) -> &UVWords {
        &self.uv
    }

    pub fn alphabet(&self) -> Alphabet {
        self.lambda.alphabet()
    }

    pub fn machine(&self) -> &Arc<MealyMachine> {
        &self.machine
    }

    /// Quotient by bisimulation, keeping the labels `A`, `B`, `q1`, … of the
    /// first state in each class.
    pub fn minimized(&self) -> MealyMachine {
        self.machine.minimize()
    }

    pub fn minimized_state_count(&self) -> usize {
        self.machine.minimize().num_states()
    }

    fn element(&self, s: StateId) -> Element {
        Element::new(self.machine.clone(), s)
    }

    pub fn a(&self) -> Element {
        self.element(self.a)
    }

    pub fn b(&self) -> Element {
        self.element(self.b)
    }

    /// `q_i`, 1-based with indices modulo `p²`.
    pub fn q(&self, i: usize) -> Element {
        self.element(self.q[wrap(i, self.q.len())])
    }

    pub fn r(&self, i: usize) -> Element {
        self.element(self.r[wrap(i, self.r.len())])
    }

    pub fn sigma(&self, k: i64) -> Element {
        self.element(self.alphabet().reduce(k) as StateId)
    }

    pub fn identity(&self) -> Element {
        self.element(0)
    }

    /// One element per state of the minimized automaton except the identity,
    /// with its label: the generators of the self-similar closure.
    pub fn closure_generators(&self) -> Vec<(String, Element)> {
        let min = Arc::new(self.minimized());
        (0..min.num_states() as StateId)
            .filter(|&s| Some(s) != min.identity_state())
            .map(|s| (min.label(s).unwrap_or("?").to_string(), Element::new(min.clone(), s)))
            .collect()
    }
}

/// The action on the tree `T` of the orbit of `00`:
/// `A = σ`, `B_λ = (q_1, r_1, σ, 1, …, 1)` with the same `q_i`, `r_i`.
#[derive(Debug, Clone)]
pub struct SimplifiedAction {
    machine: Arc<MealyMachine>,
    a: StateId,
    b: StateId,
    q1: StateId,
    r1: StateId,
}

impl SimplifiedAction {
    pub fn build(lambda: &OrderType) -> Self {
        let alphabet = lambda.alphabet();
        let p = alphabet.size();
        let uv = derive_uv(lambda);
        let (mut states, mut labels) = sigma_states(alphabet);
        let b = states.len() as StateId;
        let q1 = b + 1;
        let r1 = q1 + (p * p) as StateId;
        let mut bnext = vec![0; p];
        bnext[..3].copy_from_slice(&[q1, r1, 1]);
        states.push((alphabet.identity(), bnext));
        labels.push("B".into());
        push_cycle(alphabet, &uv.u, "q", &mut states, &mut labels);
        push_cycle(alphabet, &uv.v, "r", &mut states, &mut labels);
        let machine = MealyMachine::from_states(alphabet, states)
            .expect("construction yields a valid machine")
            .with_labels(labels);
        SimplifiedAction { machine: Arc::new(machine), a: 1, b, q1, r1 }
    }

    pub fn machine(&self) -> &Arc<MealyMachine> {
        &self.machine
    }

    pub fn a(&self) -> Element {
        Element::new(self.machine.clone(), self.a)
    }

    pub fn b(&self) -> Element {
        Element::new(self.machine.clone(), self.b)
    }

    pub fn q1(&self) -> Element {
        Element::new(self.machine.clone(), self.q1)
    }

    pub fn r1(&self) -> Element {
        Element::new(self.machine.clone(), self.r1)
    }
}
