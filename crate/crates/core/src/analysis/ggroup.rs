use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::mealy::{Element, MealyError, MealyMachine, StateId};
use crate::sushchansky::{derive_uv, GroupPreset, OrderType};
use crate::tree::{Alphabet, AlphabetError, Perm};

/// Elements of `D` are tuples of exponents.
const MAX_DIRECTED_ORDER: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GGroupError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("condition (i): the root part is not transitive on X")]
    RootNotTransitive,
    #[error("condition (i): w_{index}(D) is not transitive on X")]
    DirectedNotTransitive { index: usize },
    #[error("condition (ii): w_i({element:?}) is nontrivial for every i in the period")]
    NeverTrivial { element: Vec<u64> },
    #[error("condition (iii): w_i({element:?}) is trivial for every i in the period")]
    NeverNontrivial { element: Vec<u64> },
    #[error("w_{index} is not a homomorphism: {reason}")]
    NotHomomorphism { index: usize, reason: String },
    #[error("malformed spec: {0}")]
    Malformed(String),
}

/// A 𝖦-group presentation: a root part `R ≤ Sym(X)` and a finite abelian
/// directed part `D = Z_{n_1} × … × Z_{n_m}` with a periodic sequence of
/// homomorphisms `w_i : D → Sym(X)`. `d̂` acts trivially on the first level
/// with `d̂|_{0^{i-1}1} = w_i(d)` and trivial sections elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GGroupSpec {
    pub alphabet: Alphabet,
    pub root_generators: Vec<Perm>,
    /// Orders `n_j` of the cyclic factors of `D`.
    pub directed_orders: Vec<u64>,
    /// `homs[i][j] = w_{i+1}(e_j)` for one period.
    pub homs: Vec<Vec<Perm>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GGroupConditions {
    pub root_transitive: bool,
    /// Indices `i` (1-based) where `w_i(D)` is not transitive.
    pub non_transitive_indices: Vec<usize>,
    pub never_trivial: Vec<Vec<u64>>,
    pub never_nontrivial: Vec<Vec<u64>>,
}

impl GGroupConditions {
    pub fn holds(&self) -> bool {
        self.root_transitive
            && self.non_transitive_indices.is_empty()
            && self.never_trivial.is_empty()
            && self.never_nontrivial.is_empty()
    }
}

impl GGroupSpec {
    pub fn period(&self) -> usize {
        self.homs.len()
    }

    /// Every element of `D` as an exponent tuple, in lexicographic order.
    pub fn directed_elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &n in &self.directed_orders {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u64>| {
                    (0..n).map(move |e| {
                        let mut v = prefix.clone();
                        v.push(e);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// `w_i(d)` for 1-based `i`, wrapping over the period.
    pub fn image(&self, i: usize, d: &[u64]) -> Perm {
        let images = &self.homs[(i - 1) % self.period()];
        let mut acc = self.alphabet.identity();
        for (g, &e) in images.iter().zip(d) {
            acc = acc.compose(&g.pow(e)).expect("same degree");
        }
        acc
    }

    fn validate(&self) -> Result<(), GGroupError> {
        let p = self.alphabet.size();
        if self.homs.is_empty() {
            return Err(GGroupError::Malformed("empty period".into()));
        }
        if self.directed_orders.contains(&0)
            || self
                .directed_orders
                .iter()
                .try_fold(1u64, |acc, &n| acc.checked_mul(n))
                .is_none_or(|n| n > MAX_DIRECTED_ORDER)
        {
            return Err(GGroupError::Malformed("directed part must be finite and small".into()));
        }
        let all = self.root_generators.iter().chain(self.homs.iter().flatten());
        for g in all {
            if g.degree() != p {
                return Err(AlphabetError::Mismatch(self.alphabet.p(), g.degree() as u8).into());
            }
        }
        for (i, images) in self.homs.iter().enumerate() {
            if images.len() != self.directed_orders.len() {
                return Err(GGroupError::Malformed(format!("w_{} has {} images", i + 1, images.len())));
            }
            for (j, (g, &n)) in images.iter().zip(&self.directed_orders).enumerate() {
                if n % g.order() != 0 {
                    return Err(GGroupError::NotHomomorphism {
                        index: i + 1,
                        reason: format!("image of generator {} has order {} not dividing {n}", j + 1, g.order()),
                    });
                }
                for h in &images[..j] {
                    if g.compose(h) != h.compose(g) {
                        return Err(GGroupError::NotHomomorphism {
                            index: i + 1,
                            reason: "images of the generators do not commute".into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Conditions (i)–(iii), checked over one full period.
    pub fn conditions(&self) -> Result<GGroupConditions, GGroupError> {
        self.validate()?;
        let root_transitive = transitive(self.alphabet, &self.root_generators);
        let non_transitive_indices =
            (1..=self.period()).filter(|&i| !transitive(self.alphabet, &self.homs[i - 1])).collect();
        let mut never_trivial = vec![];
        let mut never_nontrivial = vec![];
        for d in self.directed_elements() {
            let images: Vec<Perm> = (1..=self.period()).map(|i| self.image(i, &d)).collect();
            if !images.iter().any(Perm::is_identity) {
                never_trivial.push(d.clone());
            }
            if d.iter().any(|&e| e != 0) && images.iter().all(Perm::is_identity) {
                never_nontrivial.push(d);
            }
        }
        Ok(GGroupConditions { root_transitive, non_transitive_indices, never_trivial, never_nontrivial })
    }

    /// Fails with the first violated condition.
    pub fn check(&self) -> Result<(), GGroupError> {
        let c = self.conditions()?;
        if !c.root_transitive {
            return Err(GGroupError::RootNotTransitive);
        }
        if let Some(&index) = c.non_transitive_indices.first() {
            return Err(GGroupError::DirectedNotTransitive { index });
        }
        if let Some(element) = c.never_trivial.into_iter().next() {
            return Err(GGroupError::NeverTrivial { element });
        }
        if let Some(element) = c.never_nontrivial.into_iter().next() {
            return Err(GGroupError::NeverNontrivial { element });
        }
        Ok(())
    }

    /// `d̂` as a machine with one spine state per index of the period,
    /// `s_i = (s_{i+1}, w_i(d), 1, …, 1)`.
    pub fn directed_element(&self, d: &[u64]) -> Result<Element, MealyError> {
        let p = self.alphabet.size();
        let r = self.period();
        let identity = 0 as StateId;
        let mut states: Vec<(Perm, Vec<StateId>)> = vec![(self.alphabet.identity(), vec![identity; p])];
        // spine states 1..=r, then one rooted state per index
        for i in 0..r {
            let mut next = vec![identity; p];
            next[0] = (1 + (i + 1) % r) as StateId;
            next[1] = (1 + r + i) as StateId;
            states.push((self.alphabet.identity(), next));
        }
        for i in 1..=r {
            states.push((self.image(i, d), vec![identity; p]));
        }
        let m = MealyMachine::from_states(self.alphabet, states)?;
        Ok(Element::new(Arc::new(m), 1))
    }
}

fn transitive(alphabet: Alphabet, gens: &[Perm]) -> bool {
    let mut seen = vec![false; alphabet.size()];
    seen[0] = true;
    let mut stack = vec![0u8];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y as usize] {
                seen[y as usize] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

/// Generators `R ∪ {ê_1, …, ê_m}` of the 𝖦 group, after checking
/// conditions (i)–(iii).
pub fn build_ggroup(spec: &GGroupSpec) -> Result<GroupPreset, GGroupError> {
    spec.check()?;
    let mut gens = Vec::new();
    for (i, g) in spec.root_generators.iter().enumerate() {
        let e = Element::rooted(g).map_err(|e| GGroupError::Malformed(e.to_string()))?;
        gens.push((format!("r{}", i + 1), e));
    }
    for j in 0..spec.directed_orders.len() {
        let mut d = vec![0; spec.directed_orders.len()];
        d[j] = 1;
        let e = spec.directed_element(&d).map_err(|e| GGroupError::Malformed(e.to_string()))?;
        gens.push((format!("d{}", j + 1), e));
    }
    Ok(GroupPreset::new("G", gens))
}

/// Least `r'` such that every window of `r'` consecutive `w_i` sends each
/// element of `D` to the identity at least once, or `None` if no
/// `r' ≤ 2·period` works.
pub fn check_homogeneous(spec: &GGroupSpec) -> Option<usize> {
    let period = spec.period();
    let elements = spec.directed_elements();
    let trivial: Vec<Vec<bool>> =
        elements.iter().map(|d| (1..=period).map(|i| spec.image(i, d).is_identity()).collect()).collect();
    (1..=2 * period)
        .find(|&len| trivial.iter().all(|row| (0..period).all(|start| (start..start + len).any(|i| row[i % period]))))
}

/// The presentation of `H = ⟨q_1, r_1, σ⟩`: `R = ⟨σ⟩`, `D = Z_p × Z_p`
/// generated by `q_1, r_1`, `w_i(q_1) = σ^{u_i}`, `w_i(r_1) = σ^{v_i}`,
/// period `p²`.
pub fn h_spec(lambda: &OrderType) -> GGroupSpec {
    let alphabet = lambda.alphabet();
    let uv = derive_uv(lambda);
    let p = alphabet.size() as u64;
    GGroupSpec {
        alphabet,
        root_generators: vec![alphabet.sigma_power(1)],
        directed_orders: vec![p, p],
        homs: (0..uv.u.len())
            .map(|i| vec![alphabet.sigma_power(uv.u[i] as i64), alphabet.sigma_power(uv.v[i] as i64)])
            .collect(),
    }
}

/// For `d = q_1^k r_1^l ≠ 1`, indices `(i, j)` in one period with
/// `w_i(d) = 1` and `w_j(d) ≠ 1`: `i` is the index of `(k, l)` in `λ` if
/// `l ≠ 0`, else of `(1, 0)`; `j` is the index of `(1, 0)` if `l ≠ 0`, else
/// of `(0, 1)`.
pub fn h_condition_indices(lambda: &OrderType, k: u8, l: u8) -> (usize, usize) {
    if l != 0 {
        (lambda.index_of(k, l), lambda.index_of(1, 0))
    } else {
        (lambda.index_of(1, 0), lambda.index_of(0, 1))
    }
}
