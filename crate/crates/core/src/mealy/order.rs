use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::{CanonicalForm, Element, MealyError};
use crate::tree::lcm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum OrderResult {
    Finite(u64),
    Infinite,
    ExceedsCap,
}

impl OrderResult {
    pub fn finite(self) -> Option<u64> {
        match self {
            OrderResult::Finite(k) => Some(k),
            _ => None,
        }
    }
}

enum Outcome {
    Finite(u64),
    Infinite,
    Exceeds,
}

/// Recursive order computation. For each cycle `(x_1 … x_k)` of the root
/// permutation, `g^k|_{x_1}` is the product of the sections along the cycle
/// and `order(g) = lcm_k (k · order(g^k|_{x_1}))`.
///
/// `multiplier` is the product of cycle lengths along the current path, a
/// lower bound on `order(root) / order(current)`. Meeting an element already
/// on the path with a larger multiplier means `order(h) ≥ m · order(h)` with
/// `m > 1`, so `h` has infinite order. Meeting it with the same multiplier
/// imposes no constraint and contributes 1.
struct OrderSearch {
    cap: u64,
    memo: HashMap<Arc<CanonicalForm>, u64>,
    stack: HashMap<Arc<CanonicalForm>, u64>,
    budget: usize,
}

impl OrderSearch {
    fn visit(&mut self, g: &Element, multiplier: u64) -> Outcome {
        let key = g.canonical().clone();
        if key.is_identity() {
            return Outcome::Finite(1);
        }
        if let Some(&k) = self.memo.get(&key) {
            return Outcome::Finite(k);
        }
        if let Some(&m0) = self.stack.get(&key) {
            return if multiplier > m0 { Outcome::Infinite } else { Outcome::Finite(1) };
        }
        if multiplier > self.cap || self.budget == 0 {
            return Outcome::Exceeds;
        }
        self.budget -= 1;
        self.stack.insert(key.clone(), multiplier);
        let root = g.root_perm();
        let mut order = 1u64;
        let mut result = None;
        for cycle in root.cycles() {
            let k = cycle.len() as u64;
            let mut prod = g.section(cycle[0]);
            for &x in &cycle[1..] {
                prod = &prod * &g.section(x);
            }
            match self.visit(&prod, multiplier.saturating_mul(k)) {
                Outcome::Finite(o) => {
                    order = lcm(order, k.saturating_mul(o));
                    if order > self.cap {
                        result = Some(Outcome::Exceeds);
                        break;
                    }
                }
                other => {
                    result = Some(other);
                    break;
                }
            }
        }
        self.stack.remove(&key);
        match result {
            Some(r) => r,
            None => {
                self.memo.insert(key, order);
                Outcome::Finite(order)
            }
        }
    }
}

impl Element {
    /// Order of the element. `Finite(k)` only when `k ≤ cap`; `Infinite` when
    /// a self-similar fixed point `g^m|_v = g`, `m > 1`, is found on the
    /// recursion path; `ExceedsCap` when the path multiplier or the order
    /// bound passes `cap` first.
    pub fn order(&self, cap: u64) -> Result<OrderResult, MealyError> {
        if cap < 1 {
            return Err(MealyError::CapTooSmall(cap));
        }
        let mut search = OrderSearch { cap, memo: HashMap::new(), stack: HashMap::new(), budget: 1_000_000 };
        Ok(match search.visit(self, 1) {
            Outcome::Finite(k) => OrderResult::Finite(k),
            Outcome::Infinite => OrderResult::Infinite,
            Outcome::Exceeds => OrderResult::ExceedsCap,
        })
    }
}
