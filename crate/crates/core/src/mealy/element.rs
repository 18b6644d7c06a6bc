use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;
use std::sync::{Arc, OnceLock};

use super::{CanonicalForm, MealyError, MealyMachine, StateId};
use crate::tree::{Alphabet, AlphabetError, Letter, Perm, Vertex};

/// A finite-state tree automorphism: a machine together with an initial
/// state. Equality and hashing go through the canonical form, which is
/// computed once on first use and shared between clones.
#[derive(Clone)]
pub struct Element {
    machine: Arc<MealyMachine>,
    initial: StateId,
    canonical: Arc<OnceLock<Arc<CanonicalForm>>>,
}

/// `g = (g|_0, …, g|_{p-1}) π_g`.
#[derive(Clone, Debug)]
pub struct WreathDecomposition {
    pub root_perm: Perm,
    pub sections: Vec<Element>,
}

impl WreathDecomposition {
    pub fn recompose(&self) -> Result<Element, MealyError> {
        Element::from_wreath(&self.root_perm, &self.sections)
    }
}

impl Element {
    pub fn new(machine: Arc<MealyMachine>, initial: StateId) -> Self {
        assert!((initial as usize) < machine.num_states(), "initial state out of range");
        Element { machine, initial, canonical: Arc::new(OnceLock::new()) }
    }

    pub fn from_canonical(form: Arc<CanonicalForm>) -> Self {
        let machine = Arc::new(form.machine().clone());
        let cell = OnceLock::new();
        let _ = cell.set(form);
        Element { machine, initial: 0, canonical: Arc::new(cell) }
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        Self::rooted(&alphabet.identity()).expect("identity has the right degree")
    }

    /// The automorphism acting as `perm` on the first letter and trivially
    /// below it.
    pub fn rooted(perm: &Perm) -> Result<Self, MealyError> {
        let alphabet = Alphabet::new(perm.degree() as u32)?;
        let p = alphabet.size() as StateId;
        let machine = if perm.is_identity() {
            MealyMachine::from_states(alphabet, [(perm.clone(), vec![0; p as usize])])?
        } else {
            MealyMachine::from_states(
                alphabet,
                [(perm.clone(), vec![1; p as usize]), (alphabet.identity(), vec![1; p as usize])],
            )?
        };
        Ok(Element::new(Arc::new(machine), 0))
    }

    pub fn sigma_power(alphabet: Alphabet, k: i64) -> Self {
        Self::rooted(&alphabet.sigma_power(k)).expect("σ has the right degree")
    }

    /// Builds `(sections[0], …, sections[p-1]) root`.
    pub fn from_wreath(root: &Perm, sections: &[Element]) -> Result<Self, MealyError> {
        let alphabet = Alphabet::new(root.degree() as u32)?;
        if sections.len() != alphabet.size() {
            return Err(MealyError::SectionCount { expected: alphabet.size(), got: sections.len() });
        }
        let forms: Vec<Arc<CanonicalForm>> = sections.iter().map(|s| s.canonical().clone()).collect();
        let parts: Vec<&MealyMachine> = forms.iter().map(|f| f.machine()).collect();
        let (union, offsets) = MealyMachine::disjoint_union(&parts)?;
        if union.alphabet() != alphabet {
            return Err(AlphabetError::Mismatch(alphabet.p(), union.alphabet().p()).into());
        }
        let p = alphabet.size();
        let mut out = Vec::with_capacity(union.out.len() + p);
        let mut next = Vec::with_capacity(union.next.len() + p);
        out.extend_from_slice(root.images());
        next.extend(offsets.iter().map(|&o| o + 1));
        out.extend_from_slice(&union.out);
        next.extend(union.next.iter().map(|&t| t + 1));
        Ok(Element::new(Arc::new(MealyMachine::from_raw(alphabet, out, next)), 0))
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.machine.alphabet()
    }

    pub fn machine(&self) -> &Arc<MealyMachine> {
        &self.machine
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn canonical(&self) -> &Arc<CanonicalForm> {
        self.canonical.get_or_init(|| Arc::new(self.machine.canonical_form(self.initial)))
    }

    pub fn is_identity(&self) -> bool {
        self.canonical().is_identity()
    }

    /// Number of distinct sections, i.e. states of the minimized machine.
    pub fn complexity(&self) -> usize {
        self.canonical().num_states()
    }

    pub fn root_perm(&self) -> Perm {
        self.machine.output(self.initial)
    }

    /// Image of a single letter at the root.
    #[inline]
    pub fn apply_letter(&self, x: Letter) -> Letter {
        self.machine.apply(self.initial, x)
    }

    pub fn act(&self, w: &Vertex) -> Vertex {
        Vertex(self.machine.run(self.initial, w.letters()).0)
    }

    pub fn act_word(&self, w: &[Letter]) -> Vec<Letter> {
        self.machine.run(self.initial, w).0
    }

    /// `g|_x`, sharing the underlying machine.
    pub fn section(&self, x: Letter) -> Element {
        Element::new(self.machine.clone(), self.machine.next(self.initial, x))
    }

    /// `g|_w` for a word `w`.
    pub fn section_at(&self, w: &[Letter]) -> Element {
        let (_, s) = self.machine.run(self.initial, w);
        Element::new(self.machine.clone(), s)
    }

    pub fn decompose(&self) -> WreathDecomposition {
        WreathDecomposition {
            root_perm: self.root_perm(),
            sections: self.alphabet().letters().map(|x| self.section(x)).collect(),
        }
    }

    /// All distinct sections `g|_w` (including `g` itself), deduplicated by
    /// canonical form, in canonical BFS order.
    pub fn all_sections(&self) -> Vec<Element> {
        let form = self.canonical().clone();
        let machine = Arc::new(form.machine().clone());
        (0..machine.num_states() as StateId).map(|s| Element::new(machine.clone(), s)).collect()
    }

    /// Product `g·h`, acting as `g` first and then `h`.
    pub fn multiply(&self, other: &Element) -> Result<Element, MealyError> {
        if self.alphabet() != other.alphabet() {
            return Err(AlphabetError::Mismatch(self.alphabet().p(), other.alphabet().p()).into());
        }
        let a = self.canonical().clone();
        let b = other.canonical().clone();
        if a.is_identity() {
            return Ok(other.clone());
        }
        if b.is_identity() {
            return Ok(self.clone());
        }
        Ok(Element::new(Arc::new(product_machine(a.machine(), b.machine())), 0))
    }

    pub fn inverse(&self) -> Element {
        let form = self.canonical();
        let m = form.machine();
        let p = m.alphabet().size();
        let n = m.num_states();
        let mut out = vec![0; n * p];
        let mut next = vec![0; n * p];
        for s in 0..n as StateId {
            for x in 0..p {
                let y = m.apply(s, x as Letter) as usize;
                out[s as usize * p + y] = x as Letter;
                next[s as usize * p + y] = m.next(s, x as Letter);
            }
        }
        Element::new(Arc::new(MealyMachine::from_raw(m.alphabet(), out, next)), 0)
    }

    pub fn pow(&self, k: i64) -> Element {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Element::identity(self.alphabet());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// `[g, h] = g⁻¹ h⁻¹ g h`.
    pub fn commutator(&self, other: &Element) -> Element {
        &(&(&self.inverse() * &other.inverse()) * self) * other
    }

    /// `h⁻¹ g h`.
    pub fn conjugate_by(&self, h: &Element) -> Element {
        &(&h.inverse() * self) * h
    }

    /// Equality of tree automorphisms via canonical forms.
    pub fn equal(&self, other: &Element) -> bool {
        self == other
    }

    /// Compares the action on every word of length exactly `depth`, which
    /// determines the action on all shorter words.
    pub fn agrees_to_depth(&self, other: &Element, depth: usize) -> bool {
        self.alphabet().words(depth).all(|w| self.act_word(w.letters()) == other.act_word(w.letters()))
    }

    pub fn to_json(&self) -> super::MachineJson {
        self.canonical().machine().to_json(Some(0))
    }
}

/// Reachable part of the product machine from `(0, 0)`.
fn product_machine(a: &MealyMachine, b: &MealyMachine) -> MealyMachine {
    let p = a.alphabet().size();
    let nb = b.num_states();
    let dense = a.num_states() * nb <= 1 << 16;
    let mut dense_index = if dense { vec![u32::MAX; a.num_states() * nb] } else { Vec::new() };
    let mut sparse_index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs: Vec<(StateId, StateId)> = vec![(0, 0)];
    if dense {
        dense_index[0] = 0;
    } else {
        sparse_index.insert((0, 0), 0);
    }
    let mut out = Vec::new();
    let mut next = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (s, t) = pairs[i];
        for x in 0..p as Letter {
            let y = a.apply(s, x);
            out.push(b.apply(t, y));
            let target = (a.next(s, x), b.next(t, y));
            let fresh = pairs.len() as StateId;
            let id = if dense {
                let slot = &mut dense_index[target.0 as usize * nb + target.1 as usize];
                if *slot == u32::MAX {
                    *slot = fresh;
                    pairs.push(target);
                }
                *slot
            } else {
                *sparse_index.entry(target).or_insert_with(|| {
                    pairs.push(target);
                    fresh
                })
            };
            next.push(id);
        }
        i += 1;
    }
    MealyMachine::from_raw(a.alphabet(), out, next)
}

impl Mul for &Element {
    type Output = Element;

    /// Panics if the alphabets differ; use [`Element::multiply`] to handle
    /// that case.
    fn mul(self, rhs: &Element) -> Element {
        self.multiply(rhs).expect("alphabet mismatch in product")
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.machine, &other.machine) && self.initial == other.initial
            || self.canonical() == other.canonical()
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical().hash(state)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical().machine();
        write!(f, "Element[{} states; root {}]", c.num_states(), c.output(0))
    }
}
