use serde::Serialize;
use thiserror::Error;

use crate::mealy::{Element, MealyError};
use crate::sushchansky::{OrderType, SushchanskyAutomaton};

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Mealy(#[from] MealyError),
    #[error("no unrealized zero distance in u")]
    NoDistance,
    #[error("step {step}: {what}")]
    Failed { step: usize, what: String },
}

/// One link `h_i^p |_0 = h_{i+1}` of a chain of elements whose root
/// permutations are `p`-cycles. A chain that closes on its first element
/// proves that element has infinite order, since `|h_i| ≥ p |h_{i+1}|`.
#[derive(Debug, Clone, Serialize)]
pub struct ChainStep {
    pub element: String,
    pub root_is_p_cycle: bool,
    pub power_section_matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InfiniteOrderCertificate {
    pub t: usize,
    /// Unrealized zero distance for aperiodic `u`.
    pub distance: Option<usize>,
    pub word: String,
    pub steps: Vec<ChainStep>,
    pub closes: bool,
}

impl InfiniteOrderCertificate {
    pub fn passed(&self) -> bool {
        self.closes && self.steps.iter().all(|s| s.root_is_p_cycle && s.power_section_matches)
    }
}

fn root_is_p_cycle(g: &Element) -> bool {
    let perm = g.root_perm();
    perm.order() == g.alphabet().size() as u64 && perm.cycles().len() == 1
}

/// Checks each link of the chain `h_1, …, h_m`; the last link is the
/// closure `h_m^p|_0 = h_1`.
fn check_chain(chain: &[(String, Element)]) -> (Vec<ChainStep>, bool) {
    let p = chain[0].1.alphabet().size() as i64;
    let steps = chain
        .iter()
        .enumerate()
        .map(|(i, (name, h))| {
            let next = &chain[(i + 1) % chain.len()].1;
            ChainStep {
                element: name.clone(),
                root_is_p_cycle: root_is_p_cycle(h),
                power_section_matches: h.pow(p).section(0) == *next,
            }
        })
        .collect::<Vec<ChainStep>>();
    let closes = steps.last().is_some_and(|s| s.power_section_matches);
    (steps, closes)
}

/// The first `d` in `1..p²` that is not a cyclic distance between two zeros
/// of `u`.
pub fn unrealized_distance(u: &[u8]) -> Option<usize> {
    let n = u.len();
    let zeros: Vec<usize> = (0..n).filter(|&i| u[i] == 0).collect();
    (1..n).find(|&d| !zeros.iter().any(|&i| u[(i + d) % n] == 0))
}

/// An element of `K` of infinite order with a certificate.
///
/// For `t = p`: `g = q_1 ⋯ q_t σ^{p-1}` with `g^p|_0 = g`. For `t = p²`:
/// `h_i = q_i q_{d+i} σ^{u_{i-1} + u_{d+i-1}}` where `d` is the first
/// distance not realized between zeros of `u`; then `h_i^p|_0 = h_{i+1}`
/// and `h_{p²+1} = h_1`.
pub fn infinite_order_witness(lambda: &OrderType) -> Result<(Element, InfiniteOrderCertificate), WitnessError> {
    let aut = SushchanskyAutomaton::build(lambda);
    let uv = aut.uv();
    let p = aut.alphabet().size();
    let n = p * p;
    if uv.t == n {
        let d = unrealized_distance(&uv.u).ok_or(WitnessError::NoDistance)?;
        let chain: Vec<(String, Element)> = (1..=n)
            .map(|i| {
                let s = uv.u(i + n - 1) as i64 + uv.u(d + i + n - 1) as i64;
                let h = &(&aut.q(i) * &aut.q(d + i)) * &aut.sigma(s);
                (format!("q{}·q{}·σ^{}", i, wrap1(d + i, n), aut.alphabet().reduce(s)), h)
            })
            .collect();
        let (steps, closes) = check_chain(&chain);
        let (word, g) = chain[0].clone();
        Ok((g, InfiniteOrderCertificate { t: uv.t, distance: Some(d), word, steps, closes }))
    } else {
        let mut g = aut.identity();
        let mut word = String::new();
        for i in 1..=uv.t {
            g = &g * &aut.q(i);
            word.push_str(&format!("q{i}·"));
        }
        g = &g * &aut.sigma(p as i64 - 1);
        word.push_str(&format!("σ^{}", p - 1));
        let (steps, closes) = check_chain(&[(word.clone(), g.clone())]);
        Ok((g, InfiniteOrderCertificate { t: uv.t, distance: None, word, steps, closes }))
    }
}

fn wrap1(i: usize, n: usize) -> usize {
    (i - 1) % n + 1
}

/// A checked identity `lhs = rhs` between elements.
#[derive(Debug, Clone, Serialize)]
pub struct Identity {
    pub name: String,
    pub holds: bool,
}

/// The three commutator identities at index `k` relating level-1 sections
/// of `H_k = ⟨q_k, r_k, σ⟩` to `H_{k+1}`. With `y = (σ q_k σ^{-1})^{1/u_k}`
/// (or `r_k` and `v_k` when `u_k = 0`):
///
/// `[q_k, r_k] = ([q_{k+1}, r_{k+1}], 1, …, 1)`,
/// `[q_k, y] = ([q_{k+1}, σ], 1, …, 1)`,
/// `[r_k, y] = ([r_{k+1}, σ], 1, …, 1)`.
pub fn branch_witnesses(lambda: &OrderType, k: usize) -> Result<Vec<Identity>, WitnessError> {
    let aut = SushchanskyAutomaton::build(lambda);
    let f = aut.alphabet();
    let (uk, vk) = (aut.uv().u(k), aut.uv().v(k));
    let (base, exp, via) = if uk != 0 { (aut.q(k), uk, "q") } else { (aut.r(k), vk, "r") };
    let inv = f.inv(exp).expect("nonzero in F_p") as i64;
    let sigma = aut.sigma(1);
    let y = base.conjugate_by(&sigma.inverse()).pow(inv);
    let below = |e: Element| -> Result<Element, WitnessError> {
        let mut sections = vec![Element::identity(f); f.size()];
        sections[0] = e;
        Ok(Element::from_wreath(&f.identity(), &sections)?)
    };
    let (q, r, q1, r1) = (aut.q(k), aut.r(k), aut.q(k + 1), aut.r(k + 1));
    Ok(vec![
        Identity {
            name: format!("[q{k},r{k}] = ([q{},r{}],1,…,1)", k + 1, k + 1),
            holds: q.commutator(&r) == below(q1.commutator(&r1))?,
        },
        Identity {
            name: format!("[q{k},y] = ([q{},σ],1,…,1), y from {via}{k}", k + 1),
            holds: q.commutator(&y) == below(q1.commutator(&sigma))?,
        },
        Identity {
            name: format!("[r{k},y] = ([r{},σ],1,…,1), y from {via}{k}", k + 1),
            holds: r.commutator(&y) == below(r1.commutator(&sigma))?,
        },
    ])
}

/// A letter of a word over the generators of `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KLetter {
    Q(usize),
    R(usize),
    Sigma,
}

#[derive(Debug, Clone, Serialize)]
pub struct KpWitness {
    /// Index `k` with `u_k ≠ 0` used to lift `σ`.
    pub k: usize,
    pub first_section_is_target: bool,
    pub shape_ok: bool,
    pub power_is_target_power: bool,
}

impl KpWitness {
    pub fn passed(&self) -> bool {
        self.first_section_is_target && self.shape_ok && self.power_is_target_power
    }
}

/// Lifts a word `v` in the generators of `K` to `w ∈ K` with
/// `w = (v, σ^i, 1, …, 1, q_{k+1}^j)` and checks `w^p = (v^p, 1, …, 1)`.
///
/// The lift replaces `q_m ↦ q_{m-1}`, `r_m ↦ r_{m-1}` and
/// `σ ↦ (σ q_k σ^{-1})^{1/u_k} = (σ, 1, …, 1, q_{k+1}^{1/u_k})`, where `k`
/// is the least index with `u_k ≠ 0`.
pub fn kp_branch_witness(lambda: &OrderType, v: &[(KLetter, i64)]) -> Result<KpWitness, WitnessError> {
    let aut = SushchanskyAutomaton::build(lambda);
    let f = aut.alphabet();
    let p = f.size();
    let n = p * p;
    let k = (1..=n).find(|&i| aut.uv().u(i) != 0).expect("u has nonzero letters");
    let inv = f.inv(aut.uv().u(k)).expect("nonzero") as i64;
    let tau = aut.q(k).conjugate_by(&aut.sigma(-1)).pow(inv);
    let eval = |letter: KLetter, lift: bool| match (letter, lift) {
        (KLetter::Q(m), false) => aut.q(m),
        (KLetter::R(m), false) => aut.r(m),
        (KLetter::Sigma, false) => aut.sigma(1),
        (KLetter::Q(m), true) => aut.q(m + n - 1),
        (KLetter::R(m), true) => aut.r(m + n - 1),
        (KLetter::Sigma, true) => tau.clone(),
    };
    let mut target = aut.identity();
    let mut w = aut.identity();
    for &(letter, e) in v {
        target = &target * &eval(letter, false).pow(e);
        w = &w * &eval(letter, true).pow(e);
    }
    let d = w.decompose();
    let last = &d.sections[p - 1];
    let shape_ok = d.root_perm.is_identity()
        && d.sections[1].root_perm().as_sigma_power().is_some()
        && d.sections[1].decompose().sections.iter().all(Element::is_identity)
        && d.sections[2..p - 1].iter().all(Element::is_identity)
        && (0..p as i64).any(|j| *last == aut.q(k + 1).pow(j));
    let wp = w.pow(p as i64).decompose();
    let power_is_target_power = wp.root_perm.is_identity()
        && wp.sections[0] == target.pow(p as i64)
        && wp.sections[1..].iter().all(Element::is_identity);
    Ok(KpWitness { k, first_section_is_target: d.sections[0] == target, shape_ok, power_is_target_power })
}
