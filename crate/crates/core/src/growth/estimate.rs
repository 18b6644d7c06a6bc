use std::collections::HashSet;

use serde::Serialize;

use super::ball::{ball, Ball, Budget};
use crate::mealy::Element;
use crate::sushchansky::{preset, GroupPreset, PresetName, SushchanskyAutomaton};
use crate::tree::Letter;

/// One radius of the injection bound
/// `γ_G(n) ≤ N_k(n) · γ_P(n)^{p^k}`, where `N_k(n)` counts the distinct
/// actions on `X^k` in the ball and `P` is generated by the sections of the
/// generators at level `k`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct InjectionRow {
    pub n: usize,
    pub gamma_g: u64,
    pub level_actions: u64,
    pub gamma_p: u64,
    /// Saturates at `u128::MAX`.
    pub bound: u128,
    pub holds: bool,
}

fn level_action(g: &Element, k: usize) -> Vec<Letter> {
    g.alphabet().words(k).flat_map(|w| g.act_word(w.letters())).collect()
}

/// Distinct non-identity sections of the generators on `X^k`.
pub fn level_sections(generators: &[(String, Element)], k: usize) -> Vec<(String, Element)> {
    let mut seen = HashSet::new();
    let mut out = vec![];
    for (name, g) in generators {
        for w in g.alphabet().words(k) {
            let s = g.section_at(w.letters());
            if !s.is_identity() && seen.insert(s.clone()) {
                out.push((format!("{name}|{w}"), s));
            }
        }
    }
    out
}

pub fn check_growth_estimate(g: &GroupPreset, k: usize, n_max: usize, budget: Budget) -> Vec<InjectionRow> {
    let Some(alphabet) = g.alphabet() else { return vec![] };
    let bg = ball(&g.generators, n_max, budget);
    let sections = level_sections(&g.generators, k);
    let bp = ball(&sections, n_max, budget);
    let (gamma_g, gamma_p) = (bg.gamma(), bp.gamma());
    let width = alphabet.size().pow(k as u32) as u32;
    let mut actions = HashSet::new();
    let mut rows = vec![];
    let mut i = 0;
    for n in 0..=bg.radius.min(bp.radius) {
        while i < bg.elements.len() && bg.length[i] <= n {
            actions.insert(level_action(&bg.elements[i], k));
            i += 1;
        }
        let level_actions = actions.len() as u64;
        let bound = (level_actions as u128).saturating_mul((gamma_p[n] as u128).saturating_pow(width));
        rows.push(InjectionRow {
            n,
            gamma_g: gamma_g[n],
            level_actions,
            gamma_p: gamma_p[n],
            bound,
            holds: (gamma_g[n] as u128) <= bound,
        });
    }
    rows
}

/// `γ_H`, `γ_L`, `γ_G` at one radius, with `γ_G(3n)` when it fits the
/// budget.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ProjectionRow {
    pub n: usize,
    pub gamma_h: u64,
    pub gamma_l: u64,
    pub gamma_g: u64,
    pub gamma_g_3n: Option<u64>,
    /// `γ_H(n) ≤ γ_L(n)`: `L` projects onto `H` at the vertex `00`.
    pub h_le_l: bool,
    /// `γ_L(n) ≤ γ_G(3n)`: each generator of `L` has length 3 in `G_λ`.
    pub l_le_g_3n: Option<bool>,
    /// `γ_L(n) ≤ γ_G(n)` with no rescaling.
    pub l_le_g_raw: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectionReport {
    pub rows: Vec<ProjectionRow>,
    /// Radius reached for `G_λ` (aiming at `3 n_max`).
    pub g_radius: usize,
    pub g_partial: bool,
}

/// Compares the growth of `H`, `L` and `G_λ` for `n ≤ n_max`.
pub fn check_projection_chain(aut: &SushchanskyAutomaton, n_max: usize, budget: Budget) -> ProjectionReport {
    let gens = |name| preset(aut, name).expect("fixed presets").generators;
    let bh = ball(&gens(PresetName::H), n_max, budget);
    let bl = ball(&gens(PresetName::L), n_max, budget);
    let bg: Ball = ball(&gens(PresetName::GLambda), 3 * n_max, budget);
    let (gh, gl, gg) = (bh.gamma(), bl.gamma(), bg.gamma());
    let top = n_max.min(bh.radius).min(bl.radius).min(bg.radius);
    let rows = (0..=top)
        .map(|n| {
            let g3 = gg.get(3 * n).copied();
            ProjectionRow {
                n,
                gamma_h: gh[n],
                gamma_l: gl[n],
                gamma_g: gg[n],
                gamma_g_3n: g3,
                h_le_l: gh[n] <= gl[n],
                l_le_g_3n: g3.map(|x| gl[n] <= x),
                l_le_g_raw: gl[n] <= gg[n],
            }
        })
        .collect();
    ProjectionReport { rows, g_radius: bg.radius, g_partial: bg.partial }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sushchansky::OrderType;
    use crate::tree::Alphabet;

    fn aut() -> SushchanskyAutomaton {
        SushchanskyAutomaton::build(&OrderType::lex(Alphabet::new(3).unwrap()))
    }

    #[test]
    fn level_two_sections_generate_h() {
        let a = aut();
        let g = preset(&a, PresetName::GLambda).unwrap();
        let s: HashSet<Element> = level_sections(&g.generators, 2).into_iter().map(|(_, e)| e).collect();
        let h: HashSet<Element> = preset(&a, PresetName::H).unwrap().elements().into_iter().collect();
        assert_eq!(s, h);
    }

    #[test]
    fn injection_bound_small() {
        let g = preset(&aut(), PresetName::GLambda).unwrap();
        let rows = check_growth_estimate(&g, 2, 3, Budget::default());
        assert_eq!(rows.len(), 4);
        assert_eq!((rows[0].gamma_g, rows[0].level_actions, rows[0].bound), (1, 1, 1));
        assert!(rows.iter().all(|r| r.holds));
    }

    #[test]
    fn projection_small() {
        let r = check_projection_chain(&aut(), 2, Budget::default());
        assert_eq!(r.rows[1].gamma_l, 7);
        assert_eq!(r.rows[1].gamma_g, 5);
        assert!(!r.rows[1].l_le_g_raw);
        assert!(r.rows.iter().all(|row| row.h_le_l && row.l_le_g_3n == Some(true)));
    }
}
