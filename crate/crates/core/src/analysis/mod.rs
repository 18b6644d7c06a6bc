//! Orbit trees, transitivity, infinite-order and branch witnesses, and
//! 𝖦-group presentations.

mod ggroup;
mod orbit;
mod witness;

pub use ggroup::{
    build_ggroup, check_homogeneous, h_condition_indices, h_spec, GGroupConditions, GGroupError, GGroupSpec,
};
pub use orbit::{is_level_transitive, orbit_of, orbit_tree, OrbitNode, OrbitShape, OrbitTree, DEFAULT_MAX_DEPTH};
pub use witness::{
    branch_witnesses, infinite_order_witness, kp_branch_witness, unrealized_distance, ChainStep, Identity,
    InfiniteOrderCertificate, KLetter, KpWitness, WitnessError,
};

use crate::growth::{ball, Budget};
use crate::mealy::Element;
use crate::sushchansky::{OrderType, SimplifiedAction, SushchanskyAutomaton};

/// Words of the radius-`radius` ball of `G_λ` whose image under
/// `A ↦ σ`, `B_λ ↦ (q_1, r_1, σ, 1, …)` fixes every vertex up to `depth`
/// although the element itself is nontrivial. Empty when the action on `T`
/// separates the ball.
pub fn t_action_kernel(lambda: &OrderType, radius: usize, depth: usize) -> Vec<String> {
    let aut = SushchanskyAutomaton::build(lambda);
    let t = SimplifiedAction::build(lambda);
    let b = ball(&[("A".into(), aut.a()), ("B".into(), aut.b())], radius, Budget::unlimited());
    let t_letters = [t.a(), t.b(), t.a().inverse(), t.b().inverse()];
    let identity = Element::identity(lambda.alphabet());
    (1..b.elements.len())
        .filter(|&i| {
            let image = b.word(i).iter().fold(identity.clone(), |acc, &l| &acc * &t_letters[l]);
            image.agrees_to_depth(&identity, depth)
        })
        .map(|i| b.word_string(i))
        .collect()
}
