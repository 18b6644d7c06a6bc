//! Growth and torsion-growth tables from exact ball enumeration, the
//! exponents `α`, `β` and `η_r`, and the finite-radius growth bounds.

mod ball;
mod estimate;

use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ball::{ball, Ball, Budget, BUDGET_ENV, DEFAULT_MAX_FORMS, DEFAULT_MAX_SECS};
pub use estimate::{check_growth_estimate, check_projection_chain, InjectionRow, ProjectionReport, ProjectionRow};

use crate::mealy::{MealyError, OrderResult};
use crate::sushchansky::GroupPreset;

#[derive(Debug, Error)]
pub enum GrowthError {
    #[error("η_r needs r ≥ 3, got {0}")]
    RTooSmall(usize),
    #[error("element {word} has infinite order")]
    Infinite { word: String },
    #[error(transparent)]
    Mealy(#[from] MealyError),
}

/// `x^r + x^{r-1} + x^{r-2} - 2`.
pub fn eta_polynomial(r: usize, x: f64) -> f64 {
    let low = x.powi(r as i32 - 2);
    low * (x * x + x + 1.0) - 2.0
}

/// The root of `x^r + x^{r-1} + x^{r-2} - 2` in `(0, 1)`, by bisection run
/// until the bracket cannot shrink further.
pub fn eta(r: usize) -> Result<f64, GrowthError> {
    if r < 3 {
        return Err(GrowthError::RTooSmall(r));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eta_polynomial(r, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if eta_polynomial(r, lo).abs() <= eta_polynomial(r, hi).abs() { lo } else { hi })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub p: u32,
    pub r: usize,
    pub eta: f64,
    /// Lower growth exponent `log p / (log p + log 2)`.
    pub alpha: f64,
    /// Upper growth exponent `log p / (log p - log η_r)`.
    pub beta: f64,
    /// Torsion growth exponent `log_{1/η_r} p`.
    pub torsion: f64,
}

pub fn exponents(p: u32, r: usize) -> Result<Exponents, GrowthError> {
    let eta = eta(r)?;
    let lp = (p as f64).ln();
    Ok(Exponents {
        p,
        r,
        eta,
        alpha: lp / (lp + 2f64.ln()),
        beta: lp / (lp - eta.ln()),
        torsion: lp / (1.0 / eta).ln(),
    })
}

/// `π(n)`: the largest order among elements of length at most `n`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TorsionTable {
    pub cap: u64,
    pub pi: Vec<u64>,
    /// Words whose order exceeded the cap; they are left out of `π`.
    pub exceeds_cap: Vec<String>,
    /// Whether every computed order is a power of `p`.
    pub all_p_powers: bool,
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

pub fn torsion_table(ball: &Ball, cap: u64) -> Result<TorsionTable, GrowthError> {
    let orders: Vec<OrderResult> = ball.elements.par_iter().map(|g| g.order(cap)).collect::<Result<_, MealyError>>()?;
    let p = ball.elements.first().map_or(2, |g| g.alphabet().size() as u64);
    let mut pi = vec![1u64; ball.radius + 1];
    let mut exceeds_cap = vec![];
    let mut all_p_powers = true;
    for (i, o) in orders.iter().enumerate() {
        let len = ball.length[i];
        if len > ball.radius {
            continue;
        }
        match *o {
            OrderResult::Finite(k) => {
                all_p_powers &= is_power_of(k, p);
                pi[len] = pi[len].max(k);
            }
            OrderResult::Infinite => return Err(GrowthError::Infinite { word: ball.word_string(i) }),
            OrderResult::ExceedsCap => exceeds_cap.push(ball.word_string(i)),
        }
    }
    for n in 1..pi.len() {
        pi[n] = pi[n].max(pi[n - 1]);
    }
    Ok(TorsionTable { cap, pi, exceeds_cap, all_p_powers })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GrowthReport {
    pub preset: String,
    pub p: u32,
    pub generators: Vec<String>,
    pub radius: usize,
    pub partial: bool,
    pub gamma: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub torsion: Option<TorsionTable>,
    pub exponents: Exponents,
    /// Whether `log γ(n) / n` decreases on the computed range. Recorded,
    /// not asserted.
    pub log_gamma_over_n_decreasing: bool,
    /// Least-squares slope of `log π(n)` against `log n` over `n ≥ 1`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub log_pi_slope: Option<f64>,
}

impl GrowthReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,gamma,pi\n");
        for (n, g) in self.gamma.iter().enumerate() {
            let pi = self.torsion.as_ref().and_then(|t| t.pi.get(n)).map(|x| x.to_string()).unwrap_or_default();
            writeln!(s, "{n},{g},{pi}").unwrap();
        }
        s
    }

    pub fn exponents_text(&self) -> String {
        exponents_text(&self.exponents)
    }
}

pub fn exponents_text(e: &Exponents) -> String {
    format!(
        "p={} r={}\neta={:.11e}\nalpha={:.11e}\nbeta={:.11e}\ntorsion_exponent={:.11e}\n",
        e.p, e.r, e.eta, e.alpha, e.beta, e.torsion
    )
}

fn decreasing_ratio(gamma: &[u64]) -> bool {
    let ratios: Vec<f64> = gamma.iter().enumerate().skip(1).map(|(n, &g)| (g as f64).ln() / n as f64).collect();
    ratios.windows(2).all(|w| w[1] <= w[0])
}

fn log_log_slope(pi: &[u64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        pi.iter().enumerate().skip(1).map(|(n, &v)| ((n as f64).ln(), (v as f64).ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// `γ(0..=radius)` for a preset, and `π` too when `torsion_cap` is given.
/// The exponents use `r = p²`.
pub fn ball_sizes(
    preset: &GroupPreset,
    radius: usize,
    torsion_cap: Option<u64>,
    budget: Budget,
) -> Result<GrowthReport, GrowthError> {
    let p = preset.alphabet().map_or(3, |a| a.p() as u32);
    let b = ball(&preset.generators, radius, budget);
    let gamma = b.gamma();
    let torsion = torsion_cap.map(|cap| torsion_table(&b, cap)).transpose()?;
    let log_pi_slope = torsion.as_ref().and_then(|t| log_log_slope(&t.pi));
    Ok(GrowthReport {
        preset: preset.name.clone(),
        p,
        generators: preset.names().iter().map(|s| s.to_string()).collect(),
        radius: b.radius,
        partial: b.partial,
        log_gamma_over_n_decreasing: decreasing_ratio(&gamma),
        gamma,
        torsion,
        exponents: exponents(p, (p * p) as usize)?,
        log_pi_slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mealy::MealyMachine;
    use crate::sushchansky::{preset, OrderType, PresetName, SushchanskyAutomaton};
    use crate::tree::Alphabet;
    use crate::Element;

    fn aut() -> SushchanskyAutomaton {
        SushchanskyAutomaton::build(&OrderType::lex(Alphabet::new(3).unwrap()))
    }

    #[test]
    fn eta_values() {
        // reference roots from an independent Brent solve
        assert!((eta(3).unwrap() - 0.8105357137661368).abs() < 1e-12);
        assert!((eta(9).unwrap() - 0.9504776775335492).abs() < 1e-12);
        let mut prev = 0.0;
        for r in 3..=30 {
            let e = eta(r).unwrap();
            assert!(e > prev && e < 1.0);
            assert!(eta_polynomial(r, e).abs() < 1e-12, "r={r}");
            prev = e;
        }
        let e9 = eta(9).unwrap();
        assert!(e9 > 0.9 && e9 < 0.99);
        assert!(matches!(eta(2), Err(GrowthError::RTooSmall(2))));
    }

    #[test]
    fn exponent_values() {
        let e = exponents(3, 9).unwrap();
        assert!((e.alpha - 3f64.ln() / (3f64.ln() + 2f64.ln())).abs() < 1e-15);
        assert!((e.alpha - 0.613147).abs() < 1e-6);
        assert!(e.alpha < e.beta && e.beta < 1.0);
        assert!(e.torsion > 0.0);
        assert!(exponents_text(&e).contains("alpha=6.13147192765e-1"));
    }

    #[test]
    fn small_balls() {
        let a = aut();
        let g = preset(&a, PresetName::GLambda).unwrap();
        let r = ball_sizes(&g, 1, None, Budget::default()).unwrap();
        assert_eq!(r.gamma, [1, 5]);
        let h = preset(&a, PresetName::H).unwrap();
        assert_eq!(ball(&h.generators, 1, Budget::default()).gamma(), [1, 7]);
        assert_eq!(ball(&g.generators, 0, Budget::default()).gamma(), [1]);
    }

    #[test]
    fn gamma_bounds_and_determinism() {
        let h = preset(&aut(), PresetName::H).unwrap();
        let b1 = ball(&h.generators, 4, Budget::default());
        let b2 = ball(&h.generators, 4, Budget::default());
        let g = b1.gamma();
        assert_eq!(g, b2.gamma());
        for n in 1..g.len() {
            assert!(g[n] >= g[n - 1]);
            assert!(g[n] <= g[n - 1] * 6 + 1);
        }
        for i in 0..b1.elements.len() {
            let w = b1.word(i);
            assert_eq!(w.len(), b1.length[i]);
            let mut e = Element::identity(b1.elements[0].alphabet());
            for l in w {
                e = &e * &b1.letters[l];
            }
            assert_eq!(e, b1.elements[i]);
        }
    }

    /// Equality oracle independent of canonical numbering: `g` and `h` are
    /// equal iff their initial states are bisimilar in the disjoint union.
    fn bisimilar(g: &Element, h: &Element) -> bool {
        let (u, offsets) = MealyMachine::disjoint_union(&[g.machine().as_ref(), h.machine().as_ref()]).unwrap();
        let classes = u.bisimulation_classes();
        classes[(offsets[0] + g.initial()) as usize] == classes[(offsets[1] + h.initial()) as usize]
    }

    #[test]
    fn gamma_matches_all_pairs() {
        let a = aut();
        for name in [PresetName::GLambda, PresetName::H] {
            let gens = preset(&a, name).unwrap().elements();
            let mut letters = gens.clone();
            letters.extend(gens.iter().map(Element::inverse));
            let mut words: Vec<Element> = vec![Element::identity(a.alphabet())];
            let mut layer = words.clone();
            let b = ball(&preset(&a, name).unwrap().generators, 3, Budget::default());
            let gamma = b.gamma();
            for n in 1..=3 {
                layer = layer.iter().flat_map(|g| letters.iter().map(move |s| g * s)).collect();
                words.extend(layer.iter().cloned());
                let mut distinct: Vec<&Element> = vec![];
                for w in &words {
                    if !distinct.iter().any(|d| bisimilar(d, w)) {
                        distinct.push(w);
                    }
                }
                assert_eq!(distinct.len() as u64, gamma[n], "{name} n={n}");
            }
        }
    }

    #[test]
    fn torsion_small() {
        let a = aut();
        let h = preset(&a, PresetName::H).unwrap();
        let r = ball_sizes(&h, 2, Some(3u64.pow(7)), Budget::default()).unwrap();
        let t = r.torsion.clone().unwrap();
        assert_eq!(t.pi[0], 1);
        assert_eq!(t.pi[1], 3);
        assert!(t.all_p_powers && t.exceeds_cap.is_empty());
        assert!(t.pi.windows(2).all(|w| w[0] <= w[1]));
        assert!(r.to_csv().starts_with("n,gamma,pi\n0,1,1\n1,7,3\n"));
    }

    #[test]
    fn budget_cuts_short() {
        let h = preset(&aut(), PresetName::H).unwrap();
        let b = ball(&h.generators, 10, Budget { max_forms: 20, max_time: std::time::Duration::MAX });
        assert!(b.partial);
        assert!(b.radius < 10);
        assert_eq!(b.gamma().len(), b.radius + 1);
    }
}
