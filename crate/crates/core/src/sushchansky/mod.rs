//! The Sushchansky groups `G_λ`: the order type `λ`, the words `u` and `v`,
//! the automaton `A_{u,v}`, and named generating sets of `G_λ` and of
//! subgroups of its self-similar closure.

mod automaton;
mod order_type;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use automaton::{SimplifiedAction, SushchanskyAutomaton};
pub use order_type::{derive_uv, minimal_period, LambdaError, OrderType, OrderTypeJson, UVWords};

use crate::mealy::Element;
use crate::tree::Alphabet;

/// Order types shipped with the crate, by file stem.
pub const BUNDLED: [(&str, &str); 3] = [
    ("lex-p3", include_str!("../../data/lex-p3.json")),
    ("lex-swapped-p3", include_str!("../../data/lex-swapped-p3.json")),
    ("lex-p5", include_str!("../../data/lex-p5.json")),
];

pub fn bundled(name: &str) -> Result<OrderType, LambdaError> {
    let (_, text) =
        BUNDLED.iter().find(|(n, _)| *n == name).ok_or_else(|| LambdaError::UnknownName(name.to_string()))?;
    OrderType::parse_json(text)
}

/// Named generating sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresetName {
    /// `{A, B_λ}`
    GLambda,
    /// every non-identity state of `A_{u,v}`
    Closure,
    /// `{q_1, …, q_t, r_1, …, r_{p²}, σ}`
    K,
    /// `{q_1, r_1, σ}`
    H,
    /// `{q_k, r_k, σ}`
    Hk(usize),
    /// `{B_λ, A B_λ A^{p-1}, A² B_λ A^{p-2}}`
    L,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresetError {
    #[error("unknown group {0:?} (expected G_lambda, closure, K, H, H_<k> or L)")]
    Unknown(String),
    #[error("H_k needs 1 ≤ k ≤ {max}, got {k}")]
    IndexOutOfRange { k: usize, max: usize },
}

impl FromStr for PresetName {
    type Err = PresetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "G_lambda" | "G" | "G_λ" => PresetName::GLambda,
            "closure" => PresetName::Closure,
            "K" => PresetName::K,
            "H" => PresetName::H,
            "L" => PresetName::L,
            other => {
                let k = other
                    .strip_prefix("H_")
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| PresetError::Unknown(other.to_string()))?;
                PresetName::Hk(k)
            }
        })
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresetName::GLambda => write!(f, "G_lambda"),
            PresetName::Closure => write!(f, "closure"),
            PresetName::K => write!(f, "K"),
            PresetName::H => write!(f, "H"),
            PresetName::Hk(k) => write!(f, "H_{k}"),
            PresetName::L => write!(f, "L"),
        }
    }
}

/// A named list of generators.
#[derive(Debug, Clone)]
pub struct GroupPreset {
    pub name: String,
    pub generators: Vec<(String, Element)>,
}

impl GroupPreset {
    pub fn new(name: impl Into<String>, generators: Vec<(String, Element)>) -> Self {
        GroupPreset { name: name.into(), generators }
    }

    pub fn elements(&self) -> Vec<Element> {
        self.generators.iter().map(|(_, g)| g.clone()).collect()
    }

    pub fn names(&self) -> Vec<&str> {
        self.generators.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn alphabet(&self) -> Option<Alphabet> {
        self.generators.first().map(|(_, g)| g.alphabet())
    }
}

pub fn preset(aut: &SushchanskyAutomaton, name: PresetName) -> Result<GroupPreset, PresetError> {
    let p = aut.alphabet().size();
    let n = p * p;
    let generators: Vec<(String, Element)> = match name {
        PresetName::GLambda => vec![("A".into(), aut.a()), ("B".into(), aut.b())],
        PresetName::Closure => aut.closure_generators(),
        PresetName::K => {
            let t = aut.uv().t;
            let mut g: Vec<(String, Element)> = (1..=t).map(|i| (format!("q{i}"), aut.q(i))).collect();
            g.extend((1..=n).map(|i| (format!("r{i}"), aut.r(i))));
            g.push(("σ".into(), aut.sigma(1)));
            g
        }
        PresetName::H => vec![("q1".into(), aut.q(1)), ("r1".into(), aut.r(1)), ("σ".into(), aut.sigma(1))],
        PresetName::Hk(k) => {
            if k == 0 || k > n {
                return Err(PresetError::IndexOutOfRange { k, max: n });
            }
            vec![(format!("q{k}"), aut.q(k)), (format!("r{k}"), aut.r(k)), ("σ".into(), aut.sigma(1))]
        }
        PresetName::L => {
            let a = aut.a();
            let b = aut.b();
            let conj = |j: i64| &(&a.pow(j) * &b) * &a.pow(p as i64 - j);
            vec![("B".into(), b.clone()), ("ABA^(p-1)".into(), conj(1)), ("A²BA^(p-2)".into(), conj(2))]
        }
    };
    Ok(GroupPreset::new(name.to_string(), generators))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Alphabet;

    fn lex3() -> SushchanskyAutomaton {
        SushchanskyAutomaton::build(&OrderType::lex(Alphabet::new(3).unwrap()))
    }

    #[test]
    fn bundled_orders_match_generated() {
        let p3 = Alphabet::new(3).unwrap();
        assert_eq!(bundled("lex-p3").unwrap(), OrderType::lex(p3));
        assert_eq!(bundled("lex-swapped-p3").unwrap(), OrderType::lex_swapped(p3));
        assert_eq!(bundled("lex-p5").unwrap(), OrderType::lex(Alphabet::new(5).unwrap()));
        assert!(bundled("colex-p3").is_err());
    }

    #[test]
    fn preset_names_parse() {
        for s in ["G_lambda", "closure", "K", "H", "H_4", "L"] {
            assert_eq!(s.parse::<PresetName>().unwrap().to_string(), s);
        }
        assert!(matches!("M".parse::<PresetName>(), Err(PresetError::Unknown(_))));
        assert!(matches!(preset(&lex3(), PresetName::Hk(10)), Err(PresetError::IndexOutOfRange { .. })));
        assert!(matches!(preset(&lex3(), PresetName::Hk(0)), Err(PresetError::IndexOutOfRange { .. })));
    }

    #[test]
    fn preset_contents() {
        let aut = lex3();
        assert_eq!(preset(&aut, PresetName::H).unwrap().names(), ["q1", "r1", "σ"]);
        assert_eq!(preset(&aut, PresetName::GLambda).unwrap().names(), ["A", "B"]);
        assert_eq!(preset(&aut, PresetName::K).unwrap().generators.len(), 3 + 9 + 1);
        assert_eq!(preset(&aut, PresetName::Closure).unwrap().generators.len(), 19);
        assert_eq!(preset(&aut, PresetName::Hk(9)).unwrap().names(), ["q9", "r9", "σ"]);
    }

    #[test]
    fn l_generators_project_to_h() {
        let aut = lex3();
        let l = preset(&aut, PresetName::L).unwrap();
        let expected = [aut.q(1), aut.r(1), aut.sigma(1)];
        let alphabet = aut.alphabet();
        for ((_, g), want) in l.generators.iter().zip(expected) {
            for w in alphabet.words(2) {
                assert_eq!(g.act(&w), w);
            }
            assert_eq!(g.section_at(&[0, 0]), want);
        }
    }
}
