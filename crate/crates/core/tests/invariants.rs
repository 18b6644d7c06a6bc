use proptest::prelude::*;

use sushch_core::analysis::orbit_tree;
use sushch_core::growth::{ball, Budget};
use sushch_core::mealy::MealyMachine;
use sushch_core::sushchansky::{derive_uv, preset, OrderType, PresetName, SushchanskyAutomaton};
use sushch_core::tableau::{tableau_from_element, Tableau};
use sushch_core::{Alphabet, Element};

fn p3() -> Alphabet {
    Alphabet::new(3).unwrap()
}

fn arb_lambda() -> impl Strategy<Value = OrderType> {
    Just(OrderType::lex(p3()).pairs().to_vec()).prop_shuffle().prop_map(|pairs| OrderType::new(p3(), pairs).unwrap())
}

/// Words over `A^{±1}, B^{±1}` for the lexicographic order.
fn arb_word() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..4, 0..8)
}

fn letters(aut: &SushchanskyAutomaton) -> [Element; 4] {
    [aut.a(), aut.b(), aut.a().inverse(), aut.b().inverse()]
}

fn eval(aut: &SushchanskyAutomaton, w: &[usize]) -> Element {
    let l = letters(aut);
    w.iter().fold(aut.identity(), |acc, &i| &acc * &l[i])
}

fn lex() -> SushchanskyAutomaton {
    SushchanskyAutomaton::build(&OrderType::lex(p3()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative(a in arb_word(), b in arb_word(), c in arb_word()) {
        let aut = lex();
        let (x, y, z) = (eval(&aut, &a), eval(&aut, &b), eval(&aut, &c));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    }

    #[test]
    fn tableau_map_is_a_homomorphism(a in arb_word(), b in arb_word()) {
        let aut = lex();
        let (x, y) = (eval(&aut, &a), eval(&aut, &b));
        let tx = tableau_from_element(&x, 5).unwrap();
        let ty = tableau_from_element(&y, 5).unwrap();
        prop_assert_eq!(tableau_from_element(&(&x * &y), 5).unwrap(), tx.multiply(&ty).unwrap());
        prop_assert_eq!(tableau_from_element(&x.inverse(), 5).unwrap(), tx.inverse());
    }

    #[test]
    fn tableau_json_round_trip(a in arb_word()) {
        let t = tableau_from_element(&eval(&lex(), &a), 4).unwrap();
        prop_assert_eq!(Tableau::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn generators_have_order_p_for_any_order_type(lambda in arb_lambda()) {
        let aut = SushchanskyAutomaton::build(&lambda);
        prop_assert!(aut.a().pow(3).is_identity() && !aut.a().is_identity());
        prop_assert!(aut.b().pow(3).is_identity() && !aut.b().is_identity());
    }

    #[test]
    fn uv_words_have_length_p_squared(lambda in arb_lambda()) {
        let uv = derive_uv(&lambda);
        prop_assert_eq!(uv.u_string().len(), 9);
        prop_assert_eq!(uv.v_string().len(), 9);
        prop_assert_eq!(9 % uv.t, 0);
    }

    #[test]
    fn canonical_forms_decide_equality(a in arb_word(), b in arb_word()) {
        let aut = lex();
        let (x, y) = (eval(&aut, &a), eval(&aut, &b));
        let (u, off) = MealyMachine::disjoint_union(&[x.machine().as_ref(), y.machine().as_ref()]).unwrap();
        let c = u.bisimulation_classes();
        let bisimilar = c[(off[0] + x.initial()) as usize] == c[(off[1] + y.initial()) as usize];
        prop_assert_eq!(x == y, bisimilar);
    }

    #[test]
    fn orbit_levels_partition_the_tree(lambda in arb_lambda()) {
        let aut = SushchanskyAutomaton::build(&lambda);
        let tree = orbit_tree(p3(), &[aut.a(), aut.b()], 4);
        for (n, level) in tree.levels.iter().enumerate() {
            prop_assert_eq!(level.iter().map(|o| o.size).sum::<usize>(), 3usize.pow(n as u32));
        }
    }
}

#[test]
fn balls_are_symmetric_and_nested() {
    let aut = lex();
    let g = preset(&aut, PresetName::GLambda).unwrap();
    let b = ball(&g.generators, 4, Budget::default());
    let gamma = b.gamma();
    assert!(gamma.windows(2).all(|w| w[0] <= w[1]));
    let members: std::collections::HashSet<&Element> = b.elements.iter().collect();
    for e in &b.elements {
        assert!(members.contains(&e.inverse()));
    }
    for (i, e) in b.elements.iter().enumerate() {
        let w = b.word(i);
        assert_eq!(w.len(), b.length[i]);
        let rebuilt = w.iter().fold(aut.identity(), |acc, &l| &acc * &b.letters[l]);
        assert_eq!(&rebuilt, e);
    }
}

#[test]
fn presets_share_the_alphabet() {
    let aut = lex();
    for name in ["G_lambda", "closure", "K", "H", "L", "H_4"] {
        let g = preset(&aut, name.parse().unwrap()).unwrap();
        assert_eq!(g.alphabet(), Some(p3()), "{name}");
        assert!(g.generators.iter().all(|(_, e)| !e.is_identity()), "{name}");
    }
}
