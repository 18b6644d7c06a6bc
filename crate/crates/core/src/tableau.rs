//! Depth-truncated Kaluzhnin tableaux `[a_1, a_2(x_1), a_3(x_1, x_2), …]`.
//!
//! Coordinate `a_i` is stored as its full value table over `F_p^{i-1}`,
//! indexed with `x_1` most significant. A tableau acts by
//! `y_i = x_i + a_i(x_1, …, x_{i-1})`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mealy::Element;
use crate::sushchansky::{derive_uv, OrderType};
use crate::tree::{Alphabet, AlphabetError, Letter, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableauError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("depth mismatch: {0} vs {1}")]
    DepthMismatch(usize, usize),
    #[error("word of length {len} is longer than the tableau depth {depth}")]
    WordTooLong { len: usize, depth: usize },
    #[error("depth must be at least {min}, got {got}")]
    DepthTooSmall { min: usize, got: usize },
    #[error("element has a section with output {0}, which is not a power of σ")]
    NotSylow(String),
    #[error("coordinate {coord} has {got} values, expected {expected}")]
    BadTable { coord: usize, expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    alphabet: Alphabet,
    /// `tables[i]` holds coordinate `a_{i+1}` with `p^i` entries.
    tables: Vec<Vec<Letter>>,
}

/// JSON shape: `{p, depth, tables: [[a_1], [a_2(0), …], …]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableauJson {
    pub p: u32,
    pub depth: usize,
    pub tables: Vec<Vec<Letter>>,
}

impl Tableau {
    pub fn identity(alphabet: Alphabet, depth: usize) -> Self {
        let p = alphabet.size();
        Tableau { alphabet, tables: (0..depth).map(|i| vec![0; p.pow(i as u32)]).collect() }
    }

    pub fn from_tables(alphabet: Alphabet, tables: Vec<Vec<Letter>>) -> Result<Self, TableauError> {
        let p = alphabet.size();
        for (i, t) in tables.iter().enumerate() {
            let expected = p.pow(i as u32);
            if t.len() != expected {
                return Err(TableauError::BadTable { coord: i + 1, expected, got: t.len() });
            }
            for &x in t {
                alphabet.check_letter(x)?;
            }
        }
        Ok(Tableau { alphabet, tables })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.tables.len()
    }

    pub fn is_identity(&self) -> bool {
        self.tables.iter().all(|t| t.iter().all(|&x| x == 0))
    }

    fn index(&self, prefix: &[Letter]) -> usize {
        let p = self.alphabet.size();
        prefix.iter().fold(0, |acc, &x| acc * p + x as usize)
    }

    /// `a_i(x_1, …, x_{i-1})` with `i = prefix.len() + 1`.
    pub fn coord(&self, prefix: &[Letter]) -> Letter {
        self.tables[prefix.len()][self.index(prefix)]
    }

    pub fn set_coord(&mut self, prefix: &[Letter], value: Letter) {
        let i = self.index(prefix);
        self.tables[prefix.len()][i] = value;
    }

    pub fn tables(&self) -> &[Vec<Letter>] {
        &self.tables
    }

    pub fn act(&self, w: &Vertex) -> Result<Vertex, TableauError> {
        if w.level() > self.depth() {
            return Err(TableauError::WordTooLong { len: w.level(), depth: self.depth() });
        }
        let x = w.letters();
        Ok(Vertex((0..x.len()).map(|i| self.alphabet.add(x[i], self.coord(&x[..i]))).collect()))
    }

    /// `c_i(x) = a_i(x) + b_i(a(x))`: `self` acts first.
    pub fn multiply(&self, other: &Tableau) -> Result<Tableau, TableauError> {
        if self.alphabet != other.alphabet {
            return Err(AlphabetError::Mismatch(self.alphabet.p(), other.alphabet.p()).into());
        }
        if self.depth() != other.depth() {
            return Err(TableauError::DepthMismatch(self.depth(), other.depth()));
        }
        let mut out = Tableau::identity(self.alphabet, self.depth());
        for i in 0..self.depth() {
            for w in self.alphabet.words(i) {
                let x = w.letters();
                let image = self.act(&w)?;
                let value = self.alphabet.add(self.coord(x), other.coord(image.letters()));
                out.set_coord(x, value);
            }
        }
        Ok(out)
    }

    /// Solves `a_i(x) + c_i(a(x)) = 0` level by level.
    pub fn inverse(&self) -> Tableau {
        let mut out = Tableau::identity(self.alphabet, self.depth());
        for i in 0..self.depth() {
            for w in self.alphabet.words(i) {
                let x = w.letters();
                let y = self.act(&w).expect("within depth");
                out.set_coord(y.letters(), self.alphabet.neg(self.coord(x)));
            }
        }
        out
    }

    pub fn to_json(&self) -> TableauJson {
        TableauJson { p: self.alphabet.p() as u32, depth: self.depth(), tables: self.tables.clone() }
    }

    pub fn from_json(json: &TableauJson) -> Result<Self, TableauError> {
        let t = Tableau::from_tables(Alphabet::new(json.p)?, json.tables.clone())?;
        if t.depth() != json.depth {
            return Err(TableauError::DepthMismatch(json.depth, t.depth()));
        }
        Ok(t)
    }
}

/// The tableaux `A = [1, x_1, 0, …]` and `B_λ`, truncated at `depth`.
///
/// `B_λ` has `b_3(2,1) = 1` and, for `i ≥ 4`, values at `(0,…,0,1)` and
/// `(1,0,…,0,1)` taken from the pair `(α_j, β_j)` with `j = i - 3`:
/// `b_i(0,…,0,1) = 1` if `β_j ≠ 0`, `b_i(1,0,…,0,1) = -α_j/β_j` if
/// `β_j ≠ 0` and `1` otherwise. The shift by three makes the tableau agree
/// letter for letter with the automaton, where `B_λ|_{00 0^{j-1}} = q_j`.
pub fn sushchansky_tableaux(lambda: &OrderType, depth: usize) -> Result<(Tableau, Tableau), TableauError> {
    if depth < 3 {
        return Err(TableauError::DepthTooSmall { min: 3, got: depth });
    }
    let alphabet = lambda.alphabet();
    let mut a = Tableau::identity(alphabet, depth);
    a.tables[0][0] = 1;
    for x in alphabet.letters() {
        a.set_coord(&[x], x);
    }
    let uv = derive_uv(lambda);
    let mut b = Tableau::identity(alphabet, depth);
    b.set_coord(&[2, 1], 1);
    for i in 4..=depth {
        let j = i - 3;
        let mut prefix = vec![0; i - 1];
        prefix[i - 2] = 1;
        b.set_coord(&prefix, uv.u(j));
        prefix[0] = 1;
        b.set_coord(&prefix, uv.v(j));
    }
    Ok((a, b))
}

/// Reads the tableau of `g` off its action. Every reachable state of `g`
/// must output a power of `σ`.
pub fn tableau_from_element(g: &Element, depth: usize) -> Result<Tableau, TableauError> {
    let form = g.canonical();
    let m = form.machine();
    for s in 0..m.num_states() as u32 {
        let out = m.output(s);
        if out.as_sigma_power().is_none() {
            return Err(TableauError::NotSylow(out.to_string()));
        }
    }
    let alphabet = g.alphabet();
    let mut t = Tableau::identity(alphabet, depth);
    for i in 0..depth {
        for w in alphabet.words(i) {
            let (_, state) = m.run(0, w.letters());
            t.set_coord(w.letters(), m.apply(state, 0));
        }
    }
    Ok(t)
}
