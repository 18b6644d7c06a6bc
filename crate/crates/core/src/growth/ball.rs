use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::mealy::{CanonicalForm, Element};

pub const DEFAULT_MAX_FORMS: usize = 1_000_000;
pub const DEFAULT_MAX_SECS: u64 = 120;
pub const BUDGET_ENV: &str = "SUSHCH_BUDGET_SECS";

/// Limits on a ball enumeration. Whichever runs out first stops it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_forms: usize,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_forms: DEFAULT_MAX_FORMS, max_time: Duration::from_secs(DEFAULT_MAX_SECS) }
    }
}

impl Budget {
    /// The default, with the time limit taken from `SUSHCH_BUDGET_SECS`
    /// when set.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(secs) = std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse::<u64>().ok()) {
            b.max_time = Duration::from_secs(secs);
        }
        b
    }

    pub fn unlimited() -> Self {
        Budget { max_forms: usize::MAX, max_time: Duration::MAX }
    }
}

/// The ball of radius `radius` in the word metric of `S ∪ S⁻¹`. Elements
/// are listed in BFS order, each with one shortest word.
#[derive(Debug, Clone)]
pub struct Ball {
    /// Symmetric generators: `S` followed by `S⁻¹`.
    pub letters: Vec<Element>,
    pub letter_names: Vec<String>,
    pub elements: Vec<Element>,
    /// Word length of each element.
    pub length: Vec<usize>,
    parent: Vec<usize>,
    last_letter: Vec<usize>,
    /// Largest radius enumerated completely.
    pub radius: usize,
    pub partial: bool,
}

impl Ball {
    /// `γ(n)` for `n = 0..=radius`.
    pub fn gamma(&self) -> Vec<u64> {
        let mut gamma = vec![0u64; self.radius + 1];
        for &l in &self.length {
            if l <= self.radius {
                gamma[l] += 1;
            }
        }
        for n in 1..gamma.len() {
            gamma[n] += gamma[n - 1];
        }
        gamma
    }

    /// Elements of length at most `n`.
    pub fn within(&self, n: usize) -> impl Iterator<Item = &Element> {
        self.elements.iter().zip(&self.length).filter(move |(_, &l)| l <= n).map(|(e, _)| e)
    }

    /// The word of element `i` as letter indices into [`Ball::letters`].
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.length[i]);
        while i != 0 {
            w.push(self.last_letter[i]);
            i = self.parent[i];
        }
        w.reverse();
        w
    }

    pub fn word_string(&self, i: usize) -> String {
        let w = self.word(i);
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&l| self.letter_names[l].as_str()).collect::<Vec<_>>().join("·")
    }
}

/// Breadth-first enumeration with elements deduplicated by canonical form.
/// Each frontier is multiplied out in parallel and merged in a fixed order,
/// so the result does not depend on scheduling.
pub fn ball(generators: &[(String, Element)], radius: usize, budget: Budget) -> Ball {
    let start = Instant::now();
    let mut letters: Vec<Element> = generators.iter().map(|(_, g)| g.clone()).collect();
    let mut letter_names: Vec<String> = generators.iter().map(|(n, _)| n.clone()).collect();
    for (n, g) in generators {
        letters.push(g.inverse());
        letter_names.push(format!("{n}⁻¹"));
    }
    let identity = match letters.first() {
        Some(g) => Element::identity(g.alphabet()),
        None => {
            return Ball {
                letters,
                letter_names,
                elements: vec![],
                length: vec![],
                parent: vec![],
                last_letter: vec![],
                radius,
                partial: false,
            }
        }
    };
    let mut index: HashMap<Arc<CanonicalForm>, usize> = HashMap::new();
    index.insert(identity.canonical().clone(), 0);
    let mut ball = Ball {
        letters,
        letter_names,
        elements: vec![identity],
        length: vec![0],
        parent: vec![0],
        last_letter: vec![0],
        radius: 0,
        partial: false,
    };
    let mut frontier = 0..1;
    for n in 1..=radius {
        let products: Vec<Vec<Element>> = ball.elements[frontier.clone()]
            .par_iter()
            .map(|g| {
                ball.letters
                    .iter()
                    .map(|s| {
                        let h = g * s;
                        h.canonical();
                        h
                    })
                    .collect()
            })
            .collect();
        let begin = ball.elements.len();
        for (offset, row) in products.into_iter().enumerate() {
            for (l, h) in row.into_iter().enumerate() {
                let form = h.canonical().clone();
                drop(h);
                if let Entry::Vacant(slot) = index.entry(form.clone()) {
                    slot.insert(ball.elements.len());
                    // keep only the minimized machine
                    ball.elements.push(Element::from_canonical(form));
                    ball.length.push(n);
                    ball.parent.push(frontier.start + offset);
                    ball.last_letter.push(l);
                }
            }
        }
        frontier = begin..ball.elements.len();
        if ball.elements.len() > budget.max_forms || start.elapsed() > budget.max_time {
            // levels are always finished, so radius n is complete
            ball.partial = n < radius;
            ball.radius = n;
            return ball;
        }
        ball.radius = n;
        if frontier.is_empty() {
            ball.radius = radius;
            break;
        }
    }
    ball
}
