//! Finite-state automorphisms of rooted p-ary trees, with the Sushchansky
//! p-groups built on top: exact element arithmetic, orbit structure,
//! branch and torsion witnesses, and growth enumeration.

pub mod analysis;
pub mod growth;
pub mod mealy;
pub mod sushchansky;
pub mod tableau;
pub mod tree;

pub use mealy::{Element, MealyMachine, OrderResult, WreathDecomposition};
pub use sushchansky::{derive_uv, preset, GroupPreset, OrderType, PresetName, SushchanskyAutomaton, UVWords};
pub use tableau::Tableau;
pub use tree::{Alphabet, Letter, Perm, Vertex};
