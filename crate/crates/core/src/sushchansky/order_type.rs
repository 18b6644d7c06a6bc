use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::{Alphabet, AlphabetError, Letter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LambdaError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("expected {expected} pairs, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("pair #{index} ({alpha}, {beta}) has an entry outside 0..{p}")]
    OutOfRange { index: usize, alpha: u32, beta: u32, p: u8 },
    #[error("pair #{index} ({alpha}, {beta}) repeats pair #{first}")]
    Duplicate { index: usize, alpha: u8, beta: u8, first: usize },
    #[error("pair #{index} must have exactly two entries")]
    Malformed { index: usize },
    #[error("unknown order name {0:?} (expected \"lex\" or \"lex-swapped\")")]
    UnknownName(String),
    #[error("invalid order file: {0}")]
    Parse(String),
}

/// An enumeration `λ = ((α_1, β_1), …, (α_{p²}, β_{p²}))` of all pairs in
/// `F_p × F_p`. Indices are 1-based and wrap modulo `p²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderType {
    alphabet: Alphabet,
    pairs: Vec<(Letter, Letter)>,
}

/// On-disk shape: `{"p": 3, "pairs": [[0,0], [0,1], …]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderTypeJson {
    pub p: u32,
    pub pairs: Vec<Vec<u32>>,
}

impl OrderType {
    pub fn new(alphabet: Alphabet, pairs: Vec<(Letter, Letter)>) -> Result<Self, LambdaError> {
        let p = alphabet.p();
        let expected = alphabet.size() * alphabet.size();
        if pairs.len() != expected {
            return Err(LambdaError::WrongCount { expected, got: pairs.len() });
        }
        let mut first: HashMap<(Letter, Letter), usize> = HashMap::new();
        for (i, &(alpha, beta)) in pairs.iter().enumerate() {
            if alpha >= p || beta >= p {
                return Err(LambdaError::OutOfRange { index: i + 1, alpha: alpha as u32, beta: beta as u32, p });
            }
            if let Some(&j) = first.get(&(alpha, beta)) {
                return Err(LambdaError::Duplicate { index: i + 1, alpha, beta, first: j });
            }
            first.insert((alpha, beta), i + 1);
        }
        Ok(OrderType { alphabet, pairs })
    }

    /// Lexicographic order `(0,0), (0,1), …, (p-1,p-1)`.
    pub fn lex(alphabet: Alphabet) -> Self {
        let pairs = alphabet.letters().flat_map(|a| alphabet.letters().map(move |b| (a, b))).collect();
        OrderType { alphabet, pairs }
    }

    /// Lexicographic order with `(0,1)` and `(1,0)` exchanged. The zeros of
    /// `u` then sit at positions `1, 2, 2p+1, 3p+1, …`, so `u` is aperiodic.
    pub fn lex_swapped(alphabet: Alphabet) -> Self {
        let mut lambda = Self::lex(alphabet);
        let p = alphabet.size();
        lambda.pairs.swap(1, p);
        lambda
    }

    pub fn named(alphabet: Alphabet, name: &str) -> Result<Self, LambdaError> {
        match name {
            "lex" => Ok(Self::lex(alphabet)),
            "lex-swapped" => Ok(Self::lex_swapped(alphabet)),
            other => Err(LambdaError::UnknownName(other.to_string())),
        }
    }

    pub fn from_json(json: &OrderTypeJson) -> Result<Self, LambdaError> {
        let alphabet = Alphabet::new(json.p)?;
        let p = alphabet.p();
        let pairs = json
            .pairs
            .iter()
            .enumerate()
            .map(|(i, pair)| match *pair.as_slice() {
                [a, b] if a < p as u32 && b < p as u32 => Ok((a as Letter, b as Letter)),
                [a, b] => Err(LambdaError::OutOfRange { index: i + 1, alpha: a, beta: b, p }),
                _ => Err(LambdaError::Malformed { index: i + 1 }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(alphabet, pairs)
    }

    pub fn parse_json(text: &str) -> Result<Self, LambdaError> {
        let json: OrderTypeJson = serde_json::from_str(text).map_err(|e| LambdaError::Parse(e.to_string()))?;
        Self::from_json(&json)
    }

    pub fn to_json(&self) -> OrderTypeJson {
        OrderTypeJson {
            p: self.alphabet.p() as u32,
            pairs: self.pairs.iter().map(|&(a, b)| vec![a as u32, b as u32]).collect(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// `p²`, the length of the order and the period of the index wrap.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(Letter, Letter)] {
        &self.pairs
    }

    /// `(α_i, β_i)` for any `i ≥ 1`, wrapping modulo `p²`.
    pub fn pair(&self, i: usize) -> (Letter, Letter) {
        self.pairs[wrap(i, self.len())]
    }

    /// The 1-based index of `(α, β)`.
    pub fn index_of(&self, alpha: Letter, beta: Letter) -> usize {
        self.pairs.iter().position(|&pr| pr == (alpha, beta)).expect("λ contains every pair") + 1
    }
}

/// Maps a 1-based index (any integer ≥ 0, with 0 meaning `n`) to a 0-based
/// slot modulo `n`.
pub(crate) fn wrap(i: usize, n: usize) -> usize {
    (i + n - 1) % n
}

/// The words `u` and `v` of length `p²` and the minimal period `t` of `u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UVWords {
    pub u: Vec<Letter>,
    pub v: Vec<Letter>,
    pub t: usize,
}

impl UVWords {
    /// `u_i` for 1-based `i`, wrapping.
    pub fn u(&self, i: usize) -> Letter {
        self.u[wrap(i, self.u.len())]
    }

    pub fn v(&self, i: usize) -> Letter {
        self.v[wrap(i, self.v.len())]
    }

    pub fn u_string(&self) -> String {
        digits(&self.u)
    }

    pub fn v_string(&self) -> String {
        digits(&self.v)
    }
}

fn digits(w: &[Letter]) -> String {
    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(if w.iter().any(|&x| x >= 10) { "." } else { "" })
}

/// Smallest cyclic period of a word.
pub fn minimal_period(w: &[Letter]) -> usize {
    let n = w.len();
    (1..=n).find(|&t| n.is_multiple_of(t) && (0..n).all(|i| w[i] == w[(i + t) % n])).unwrap_or(n)
}

/// `u_i = 0` if `β_i = 0`, else 1; `v_i = 1` if `β_i = 0`, else `-α_i/β_i`.
pub fn derive_uv(lambda: &OrderType) -> UVWords {
    let f = lambda.alphabet();
    let (u, v): (Vec<Letter>, Vec<Letter>) = lambda
        .pairs()
        .iter()
        .map(|&(alpha, beta)| if beta == 0 { (0, 1) } else { (1, f.neg(f.div(alpha, beta))) })
        .unzip();
    let t = minimal_period(&u);
    UVWords { u, v, t }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Alphabet {
        Alphabet::new(3).unwrap()
    }

    #[test]
    fn lex_words() {
        let uv = derive_uv(&OrderType::lex(p3()));
        assert_eq!(uv.u_string(), "011011011");
        assert_eq!(uv.v_string(), "100121112");
        assert_eq!(uv.t, 3);
    }

    #[test]
    fn swapped_words() {
        let lambda = OrderType::lex_swapped(p3());
        assert_eq!(lambda.pair(2), (1, 0));
        assert_eq!(lambda.pair(4), (0, 1));
        let uv = derive_uv(&lambda);
        assert_eq!(uv.u_string(), "001111011");
        assert_eq!(uv.t, 9);
    }

    #[test]
    fn zero_counts_and_periods() {
        for p in [3u32, 5, 7] {
            let a = Alphabet::new(p).unwrap();
            for lambda in [OrderType::lex(a), OrderType::lex_swapped(a)] {
                let uv = derive_uv(&lambda);
                let n = (p * p) as usize;
                assert_eq!(uv.u.iter().filter(|&&x| x == 0).count(), p as usize);
                assert_eq!(uv.v.iter().filter(|&&x| x == 0).count(), p as usize - 1);
                assert_eq!(minimal_period(&uv.v), n);
                assert!(uv.t == p as usize || uv.t == n);
            }
            assert_eq!(derive_uv(&OrderType::lex(a)).t, p as usize);
            assert_eq!(derive_uv(&OrderType::lex_swapped(a)).t, (p * p) as usize);
        }
    }

    #[test]
    fn validation_errors() {
        let a = p3();
        let mut pairs = OrderType::lex(a).pairs().to_vec();
        pairs[5] = pairs[2];
        assert_eq!(OrderType::new(a, pairs), Err(LambdaError::Duplicate { index: 6, alpha: 0, beta: 2, first: 3 }));
        assert!(matches!(OrderType::new(a, vec![(0, 0)]), Err(LambdaError::WrongCount { expected: 9, got: 1 })));
        let text = r#"{"p":3,"pairs":[[0,0],[0,1],[0,2],[1,0],[1,1],[1,2],[2,0],[2,1],[2,3]]}"#;
        assert!(matches!(OrderType::parse_json(text), Err(LambdaError::OutOfRange { index: 9, .. })));
        let text = r#"{"p":3,"pairs":[],"extra":true}"#;
        assert!(matches!(OrderType::parse_json(text), Err(LambdaError::Parse(_))));
        assert!(matches!(OrderType::named(a, "colex"), Err(LambdaError::UnknownName(_))));
    }

    #[test]
    fn json_round_trip() {
        let lambda = OrderType::lex_swapped(Alphabet::new(5).unwrap());
        let text = serde_json::to_string(&lambda.to_json()).unwrap();
        assert_eq!(OrderType::parse_json(&text).unwrap(), lambda);
    }

    #[test]
    fn index_wraps() {
        let lambda = OrderType::lex(p3());
        assert_eq!(lambda.pair(1), lambda.pair(10));
        assert_eq!(lambda.pair(0), lambda.pair(9));
        assert_eq!(lambda.index_of(2, 1), 8);
    }
}
