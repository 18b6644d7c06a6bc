//! Alphabet, letter arithmetic over F_p, permutations of the alphabet and
//! vertices of the rooted p-ary tree.
//!
//! Automorphisms act on the left of words and products act left factor
//! first: `(g * h)(w) = h(g(w))`. [`Perm::compose`] follows the same rule.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A single letter of the alphabet, identified with an element of F_p.
pub type Letter = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet size {0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("alphabet mismatch: {0} vs {1}")]
    Mismatch(u8, u8),
    #[error("images {0:?} do not form a permutation")]
    NotBijection(Vec<Letter>),
    #[error("letter {letter} is out of range for p = {p}")]
    LetterOutOfRange { letter: Letter, p: u8 },
}

/// The alphabet `{0, …, p-1}` for an odd prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Alphabet {
    p: u8,
}

impl TryFrom<u32> for Alphabet {
    type Error = AlphabetError;

    fn try_from(p: u32) -> Result<Self, Self::Error> {
        Alphabet::new(p)
    }
}

impl From<Alphabet> for u32 {
    fn from(a: Alphabet) -> u32 {
        a.p as u32
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl Alphabet {
    /// Largest supported alphabet. Letters are stored as `u8` and value
    /// tables grow as `p^depth`, so anything bigger is out of desk scale.
    pub const MAX_P: u32 = 31;

    pub fn new(p: u32) -> Result<Self, AlphabetError> {
        if !(3..=Self::MAX_P).contains(&p) || !is_prime(p) {
            return Err(AlphabetError::NotOddPrime(p));
        }
        Ok(Alphabet { p: p as u8 })
    }

    #[inline]
    pub fn p(self) -> u8 {
        self.p
    }

    #[inline]
    pub fn size(self) -> usize {
        self.p as usize
    }

    pub fn letters(self) -> impl Iterator<Item = Letter> + Clone {
        0..self.p
    }

    /// Reduces an arbitrary integer into `0..p`.
    #[inline]
    pub fn reduce(self, k: i64) -> Letter {
        k.rem_euclid(self.p as i64) as Letter
    }

    #[inline]
    pub fn add(self, a: Letter, b: Letter) -> Letter {
        ((a as u16 + b as u16) % self.p as u16) as Letter
    }

    #[inline]
    pub fn sub(self, a: Letter, b: Letter) -> Letter {
        ((a as u16 + self.p as u16 - b as u16) % self.p as u16) as Letter
    }

    #[inline]
    pub fn neg(self, a: Letter) -> Letter {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(self, a: Letter, b: Letter) -> Letter {
        ((a as u16 * b as u16) % self.p as u16) as Letter
    }

    /// Multiplicative inverse in F_p via the extended Euclidean algorithm.
    /// Returns `None` for zero.
    pub fn inv(self, a: Letter) -> Option<Letter> {
        let a = a % self.p;
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i32, a as i32);
        let (mut t0, mut t1) = (0i32, 1i32);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce(t0 as i64))
    }

    /// `a / b` in F_p. Panics on division by zero.
    pub fn div(self, a: Letter, b: Letter) -> Letter {
        self.mul(a, self.inv(b).expect("division by zero in F_p"))
    }

    pub fn check_letter(self, letter: Letter) -> Result<Letter, AlphabetError> {
        if letter < self.p {
            Ok(letter)
        } else {
            Err(AlphabetError::LetterOutOfRange { letter, p: self.p })
        }
    }

    pub fn identity(self) -> Perm {
        Perm { images: (0..self.p).collect() }
    }

    /// The cyclic shift `x ↦ x + k`.
    pub fn sigma_power(self, k: i64) -> Perm {
        let k = self.reduce(k);
        Perm { images: self.letters().map(|x| self.add(x, k)).collect() }
    }

    /// All words of length `n` in lexicographic order.
    pub fn words(self, n: usize) -> impl Iterator<Item = Vertex> {
        let p = self.p as usize;
        let total = p.pow(n as u32);
        (0..total).map(move |mut idx| {
            let mut w = vec![0; n];
            for slot in w.iter_mut().rev() {
                *slot = (idx % p) as Letter;
                idx /= p;
            }
            Vertex(w)
        })
    }
}

/// A permutation of the alphabet, stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Letter>", into = "Vec<Letter>")]
pub struct Perm {
    images: Vec<Letter>,
}

impl TryFrom<Vec<Letter>> for Perm {
    type Error = AlphabetError;

    fn try_from(images: Vec<Letter>) -> Result<Self, Self::Error> {
        Perm::from_images(images)
    }
}

impl From<Perm> for Vec<Letter> {
    fn from(p: Perm) -> Self {
        p.images
    }
}

impl Perm {
    /// Builds a permutation from an image table, rejecting non-bijections.
    pub fn from_images(images: Vec<Letter>) -> Result<Self, AlphabetError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if (x as usize) >= n || seen[x as usize] {
                return Err(AlphabetError::NotBijection(images));
            }
            seen[x as usize] = true;
        }
        Ok(Perm { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<Letter>) -> Self {
        Perm { images }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: Letter) -> Letter {
        self.images[x as usize]
    }

    pub fn images(&self) -> &[Letter] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` first, then `other`: `(a.compose(b))(x) = b(a(x))`.
    pub fn compose(&self, other: &Perm) -> Result<Perm, AlphabetError> {
        if self.degree() != other.degree() {
            return Err(AlphabetError::Mismatch(self.degree() as u8, other.degree() as u8));
        }
        Ok(Perm { images: self.images.iter().map(|&x| other.apply(x)).collect() })
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as Letter;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, k: u64) -> Perm {
        let mut acc = Perm { images: (0..self.degree() as Letter).collect() };
        for _ in 0..k {
            acc = acc.compose(self).expect("same degree");
        }
        acc
    }

    /// Cycles of the permutation (including fixed points), each starting at
    /// its smallest letter, ordered by that letter.
    pub fn cycles(&self) -> Vec<Vec<Letter>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start as Letter;
            while !seen[x as usize] {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1, |acc, c| lcm(acc, c.len() as u64))
    }

    /// If this is `x ↦ x + k` for some `k`, returns that `k`.
    pub fn as_sigma_power(&self) -> Option<Letter> {
        let p = self.degree();
        let k = self.images[0];
        self.images.iter().enumerate().all(|(x, &y)| (x + k as usize) % p == y as usize).then_some(k)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_sigma_power() {
            Some(0) => write!(f, "1"),
            Some(1) => write!(f, "σ"),
            Some(k) => write!(f, "σ^{k}"),
            None => {
                let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
                for c in cycles {
                    let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                    write!(f, "({})", parts.join(","))?;
                }
                Ok(())
            }
        }
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// A vertex of the tree: a finite word over the alphabet. The empty word is
/// the root and the length of the word is its level.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(pub Vec<Letter>);

impl Vertex {
    pub fn root() -> Self {
        Vertex(Vec::new())
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn child(&self, x: Letter) -> Vertex {
        let mut w = self.0.clone();
        w.push(x);
        Vertex(w)
    }

    pub fn parent(&self) -> Option<Vertex> {
        if self.0.is_empty() {
            None
        } else {
            Some(Vertex(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn is_prefix_of(&self, other: &Vertex) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Parses a word such as `"0120"`; digits only, so `p ≤ 10`.
    pub fn parse(alphabet: Alphabet, s: &str) -> Result<Vertex, AlphabetError> {
        s.chars()
            .map(|c| {
                let d = c.to_digit(10).ok_or(AlphabetError::LetterOutOfRange { letter: u8::MAX, p: alphabet.p() })?;
                alphabet.check_letter(d as Letter)
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Vertex)
    }
}

impl From<&[Letter]> for Vertex {
    fn from(w: &[Letter]) -> Self {
        Vertex(w.to_vec())
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        let wide = self.0.iter().any(|&x| x >= 10);
        for (i, x) in self.0.iter().enumerate() {
            if wide && i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}
