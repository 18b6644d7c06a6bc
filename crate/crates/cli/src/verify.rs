use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use sushch_core::analysis::{
    branch_witnesses, build_ggroup, h_spec, infinite_order_witness, kp_branch_witness, orbit_of, orbit_tree,
    GGroupError, KLetter,
};
use sushch_core::mealy::OrderResult;
use sushch_core::sushchansky::{OrderType, SushchanskyAutomaton};
use sushch_core::tableau::{sushchansky_tableaux, Tableau};
use sushch_core::{Element, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Abelian,
    Orders,
    OrbitTree,
    Branch,
    Ggroup,
    InfiniteOrder,
    TableauAgreement,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Abelian,
        Suite::Orders,
        Suite::OrbitTree,
        Suite::Branch,
        Suite::Ggroup,
        Suite::InfiniteOrder,
        Suite::TableauAgreement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Abelian => "abelian",
            Suite::Orders => "orders",
            Suite::OrbitTree => "orbit-tree",
            Suite::Branch => "branch",
            Suite::Ggroup => "ggroup",
            Suite::InfiniteOrder => "infinite-order",
            Suite::TableauAgreement => "tableau-agreement",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub order: String,
    pub name: String,
    pub pass: bool,
    pub reference: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub p: u8,
    pub pass: bool,
    pub checks: Vec<Check>,
}

/// Knobs for the suites.
#[derive(Debug, Clone, Copy)]
pub struct Knobs {
    pub depth: usize,
    pub tableau_depth: usize,
    pub samples: usize,
    pub seed: u64,
}

pub fn run(suite: Suite, orders: &[(String, OrderType)], knobs: Knobs) -> Report {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let mut checks = vec![];
    for (name, lambda) in orders {
        let aut = SushchanskyAutomaton::build(lambda);
        for &s in &suites {
            let mut push = |check: &str, pass: bool, reference: &'static str, detail: String| {
                checks.push(Check { suite: s.name(), order: name.clone(), name: check.into(), pass, reference, detail })
            };
            match s {
                Suite::Abelian => abelian(&aut, &mut push),
                Suite::Orders => orders_suite(&aut, &mut push),
                Suite::OrbitTree => orbit(&aut, knobs.depth, &mut push),
                Suite::Branch => branch(lambda, &mut push),
                Suite::Ggroup => ggroup(lambda, &aut, &mut push),
                Suite::InfiniteOrder => infinite(lambda, &mut push),
                Suite::TableauAgreement => tableaux(lambda, &aut, knobs, &mut push),
                Suite::All => unreachable!(),
            }
        }
    }
    let p = orders.first().map_or(3, |(_, l)| l.alphabet().p());
    Report { p, pass: checks.iter().all(|c| c.pass), checks }
}

type Push<'a> = dyn FnMut(&str, bool, &'static str, String) + 'a;

fn abelian(aut: &SushchanskyAutomaton, push: &mut Push) {
    let p = aut.alphabet().size();
    let mut gens: Vec<(String, Element)> = (1..=aut.uv().t).map(|i| (format!("q{i}"), aut.q(i))).collect();
    gens.extend((1..=p * p).map(|i| (format!("r{i}"), aut.r(i))));
    let bad_powers: Vec<&str> =
        gens.iter().filter(|(_, g)| !g.pow(p as i64).is_identity()).map(|(n, _)| n.as_str()).collect();
    push(
        "p-th powers of q_i, r_i trivial",
        bad_powers.is_empty(),
        "q_i and r_i have exponent p",
        format!("{} generators, failing: {bad_powers:?}", gens.len()),
    );
    let mut bad = vec![];
    for (i, (a, g)) in gens.iter().enumerate() {
        for (b, h) in &gens[i + 1..] {
            if !g.commutator(h).is_identity() {
                bad.push(format!("[{a},{b}]"));
            }
        }
    }
    let pairs = gens.len() * (gens.len() - 1) / 2;
    push(
        "q_i, r_i commute pairwise",
        bad.is_empty(),
        "⟨q_i, r_i⟩ is elementary abelian",
        format!("{pairs} pairs, failing: {bad:?}"),
    );
}

fn orders_suite(aut: &SushchanskyAutomaton, push: &mut Push) {
    let p = aut.alphabet().size() as u64;
    let want = OrderResult::Finite(p);
    for (name, g) in [("A", aut.a()), ("B", aut.b())] {
        match g.order(p.pow(7)) {
            Ok(o) => push(&format!("order of {name}"), o == want, "A and B_λ have order p", format!("{o:?}")),
            Err(e) => push(&format!("order of {name}"), false, "A and B_λ have order p", e.to_string()),
        }
    }
}

fn orbit(aut: &SushchanskyAutomaton, depth: usize, push: &mut Push) {
    let a = aut.alphabet();
    let p = a.size();
    let gens = [aut.a(), aut.b()];
    let tree = orbit_tree(a, &gens, depth);
    let v2 = orbit_of(&gens, &Vertex(vec![0, 0]));
    let mut pass = tree.levels.get(1).is_some_and(|l| l.len() == 1 && l[0].size == p);
    let mut detail = vec![];
    for m in 2..=depth {
        let Some(v) = tree.orbit_containing(&Vertex(vec![0; m])) else {
            pass = false;
            continue;
        };
        let mut w = 0;
        for (i, node) in tree.levels[m].iter().enumerate() {
            if i == v {
                pass &= node.size == p.pow(m as u32 - 1);
                pass &= v2.contains(&Vertex(node.representative.letters()[..2].to_vec()));
            } else {
                w += 1;
                pass &= node.size == p;
                if m < depth {
                    pass &= node.children.len() == p;
                }
            }
        }
        detail.push(format!("level {m}: V of size {} + {w} W-orbits", tree.levels[m][v].size));
    }
    push(
        "orbit tree shape",
        pass,
        "orbits: one V-orbit per level plus W-orbits of size p with p children",
        format!("depth {depth}; {}", detail.join(", ")),
    );
}

fn branch(lambda: &OrderType, push: &mut Push) {
    let n = lambda.len();
    let mut total = 0;
    let mut failed = vec![];
    for k in 1..=n {
        match branch_witnesses(lambda, k) {
            Ok(ids) => {
                for id in ids {
                    total += 1;
                    if !id.holds {
                        failed.push(id.name);
                    }
                }
            }
            Err(e) => failed.push(format!("k={k}: {e}")),
        }
    }
    push(
        "commutator identities for k = 1..p²",
        failed.is_empty(),
        "H_k is regular branch over its commutator subgroup",
        format!("{total} identities, failing: {failed:?}"),
    );
    for (label, v) in [("σ", KLetter::Sigma), ("q1", KLetter::Q(1)), ("r1", KLetter::R(1))] {
        let (pass, detail) = match kp_branch_witness(lambda, &[(v, 1)]) {
            Ok(w) => (w.passed(), format!("{w:?}")),
            Err(e) => (false, e.to_string()),
        };
        push(&format!("K^p lift of {label}"), pass, "K^p × 1 × … × 1 ⊂ K^p", detail);
    }
}

fn ggroup(lambda: &OrderType, aut: &SushchanskyAutomaton, push: &mut Push) {
    let spec = h_spec(lambda);
    let (pass, detail) = match build_ggroup(&spec) {
        Ok(g) => {
            let want = [aut.sigma(1), aut.q(1), aut.r(1)];
            let same = g.generators.len() == 3 && g.generators.iter().zip(&want).all(|((_, e), w)| e == w);
            (same, format!("generators {:?}", g.names()))
        }
        Err(e) => (false, e.to_string()),
    };
    push("G-group generators equal σ, q1, r1", pass, "H is a G-group", detail);
    let (pass, detail) = match spec.conditions() {
        Ok(c) => (c.holds(), format!("{c:?}")),
        Err(e) => (false, e.to_string()),
    };
    push("G-group conditions over one period", pass, "H is a G-group", detail);
    let mut bad = spec.clone();
    bad.root_generators = vec![lambda.alphabet().identity()];
    let rejected = build_ggroup(&bad).err() == Some(GGroupError::RootNotTransitive);
    push("non-transitive root part rejected", rejected, "G-group condition (i)", String::new());
}

fn infinite(lambda: &OrderType, push: &mut Push) {
    match infinite_order_witness(lambda) {
        Ok((g, cert)) => {
            let p = lambda.alphabet().size() as u64;
            let order = g.order(p.pow(10));
            let pass = cert.passed() && matches!(order, Ok(OrderResult::Infinite));
            push(
                "element of infinite order",
                pass,
                "K contains elements of infinite order",
                format!("witness {} (t={}), order {order:?}", cert.word, cert.t),
            );
        }
        Err(e) => push("element of infinite order", false, "K contains elements of infinite order", e.to_string()),
    }
}

fn tableaux(lambda: &OrderType, aut: &SushchanskyAutomaton, knobs: Knobs, push: &mut Push) {
    let depth = knobs.tableau_depth;
    let (ta, tb) = match sushchansky_tableaux(lambda, depth) {
        Ok(t) => t,
        Err(e) => return push("tableau action", false, "A and B_λ as Kaloujnine tableaux", e.to_string()),
    };
    let elems = [aut.a(), aut.b(), aut.a().inverse(), aut.b().inverse()];
    let tabs = [ta.clone(), tb.clone(), ta.inverse(), tb.inverse()];
    let mut rng = ChaCha8Rng::seed_from_u64(knobs.seed);
    let mut cases: Vec<(Element, Tableau)> = vec![(aut.a(), ta), (aut.b(), tb)];
    for _ in 0..knobs.samples {
        let mut e = aut.identity();
        let mut t = Tableau::identity(lambda.alphabet(), depth);
        for _ in 0..rng.gen_range(1..=6) {
            let l = rng.gen_range(0..4);
            e = &e * &elems[l];
            t = t.multiply(&tabs[l]).expect("same depth");
        }
        cases.push((e, t));
    }
    let mismatches = cases
        .iter()
        .filter(|(e, t)| !lambda.alphabet().words(depth).all(|w| t.act(&w).ok() == Some(e.act(&w))))
        .count();
    push(
        "tableau action equals automaton action",
        mismatches == 0,
        "A and B_λ as Kaloujnine tableaux",
        format!("{} elements on all words of length {depth}, {mismatches} mismatches", cases.len()),
    );
}
