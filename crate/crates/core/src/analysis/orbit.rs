use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::mealy::Element;
use crate::tree::{Alphabet, Vertex};

pub const DEFAULT_MAX_DEPTH: usize = 6;

/// BFS closure of `{v}` under the generators and their inverses.
pub fn orbit_of(generators: &[Element], v: &Vertex) -> BTreeSet<Vertex> {
    let inverses: Vec<Element> = generators.iter().map(Element::inverse).collect();
    let mut seen = BTreeSet::from([v.clone()]);
    let mut queue = VecDeque::from([v.clone()]);
    while let Some(w) = queue.pop_front() {
        for g in generators.iter().chain(&inverses) {
            let image = g.act(&w);
            if seen.insert(image.clone()) {
                queue.push_back(image);
            }
        }
    }
    seen
}

/// An orbit on one level, referring to its parent orbit on the level above
/// by index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitNode {
    pub size: usize,
    /// Lexicographically least vertex of the orbit.
    pub representative: Vertex,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitTree {
    pub p: u32,
    /// `levels[n]` lists the orbits on `X^n`, sorted by representative.
    pub levels: Vec<Vec<OrbitNode>>,
    /// Orbit index of every vertex, per level, by lex index.
    #[serde(skip)]
    classes: Vec<Vec<usize>>,
}

/// Orbit sizes of a subtree, with children sorted so that equal shapes
/// compare equal regardless of representatives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitShape {
    pub size: usize,
    pub children: Vec<OrbitShape>,
}

/// Orbits of `⟨generators⟩` on every level up to `depth`.
pub fn orbit_tree(alphabet: Alphabet, generators: &[Element], depth: usize) -> OrbitTree {
    let p = alphabet.size();
    let mut levels: Vec<Vec<OrbitNode>> =
        vec![vec![OrbitNode { size: 1, representative: Vertex::root(), parent: None, children: vec![] }]];
    let mut classes = vec![vec![0usize]];
    for n in 1..=depth {
        let class = level_orbits(alphabet, generators, n);
        let count = class.iter().copied().max().map_or(0, |m| m + 1);
        let mut nodes: Vec<Option<OrbitNode>> = vec![None; count];
        for (idx, &c) in class.iter().enumerate() {
            match &mut nodes[c] {
                Some(node) => node.size += 1,
                slot @ None => {
                    *slot = Some(OrbitNode {
                        size: 1,
                        representative: vertex_at(p, n, idx),
                        parent: Some(classes[n - 1][idx / p]),
                        children: vec![],
                    })
                }
            }
        }
        let nodes: Vec<OrbitNode> = nodes.into_iter().map(|n| n.expect("every class is hit")).collect();
        for (i, node) in nodes.iter().enumerate() {
            levels[n - 1][node.parent.expect("below the root")].children.push(i);
        }
        levels.push(nodes);
        classes.push(class);
    }
    OrbitTree { p: p as u32, levels, classes }
}

/// Orbit class of each vertex of `X^n` by lex index. Classes are numbered in
/// order of their least vertex.
fn level_orbits(alphabet: Alphabet, generators: &[Element], n: usize) -> Vec<usize> {
    let p = alphabet.size();
    let total = p.pow(n as u32);
    let images: Vec<Vec<usize>> =
        generators.iter().map(|g| alphabet.words(n).map(|w| index_of(p, g.act(&w).letters())).collect()).collect();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); total];
    for perm in &images {
        for (i, &j) in perm.iter().enumerate() {
            if i != j {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    let mut class = vec![usize::MAX; total];
    let mut next = 0;
    for start in 0..total {
        if class[start] != usize::MAX {
            continue;
        }
        class[start] = next;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &j in &adjacency[i] {
                if class[j] == usize::MAX {
                    class[j] = next;
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    class
}

fn index_of(p: usize, w: &[u8]) -> usize {
    w.iter().fold(0, |acc, &x| acc * p + x as usize)
}

fn vertex_at(p: usize, n: usize, mut idx: usize) -> Vertex {
    let mut w = vec![0; n];
    for slot in w.iter_mut().rev() {
        *slot = (idx % p) as u8;
        idx /= p;
    }
    Vertex(w)
}

impl OrbitTree {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn is_level_transitive(&self) -> bool {
        self.levels.iter().all(|l| l.len() == 1)
    }

    /// Index of the orbit containing `v` on level `v.level()`.
    pub fn orbit_containing(&self, v: &Vertex) -> Option<usize> {
        let p = self.p as usize;
        self.classes.get(v.level()).map(|c| c[index_of(p, v.letters())])
    }

    pub fn shape(&self) -> OrbitShape {
        self.shape_at(0, 0)
    }

    fn shape_at(&self, level: usize, i: usize) -> OrbitShape {
        let node = &self.levels[level][i];
        let mut children: Vec<OrbitShape> = node.children.iter().map(|&c| self.shape_at(level + 1, c)).collect();
        children.sort();
        OrbitShape { size: node.size, children }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph orbit_tree {\n  node [shape=box];\n");
        for (n, level) in self.levels.iter().enumerate() {
            for (i, node) in level.iter().enumerate() {
                writeln!(s, "  o{n}_{i} [label=\"{}/{}\"];", node.size, node.representative).unwrap();
                if let Some(parent) = node.parent {
                    writeln!(s, "  o{}_{parent} -> o{n}_{i};", n - 1).unwrap();
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// True iff `⟨generators⟩` has one orbit on each level up to `depth`.
pub fn is_level_transitive(alphabet: Alphabet, generators: &[Element], depth: usize) -> bool {
    (1..=depth).all(|n| level_orbits(alphabet, generators, n).iter().all(|&c| c == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sushchansky::{preset, OrderType, PresetName, SimplifiedAction, SushchanskyAutomaton};

    fn p3() -> Alphabet {
        Alphabet::new(3).unwrap()
    }

    fn g_lambda(lambda: &OrderType) -> Vec<Element> {
        let aut = SushchanskyAutomaton::build(lambda);
        preset(&aut, PresetName::GLambda).unwrap().elements()
    }

    #[test]
    fn orbit_of_00() {
        let gens = g_lambda(&OrderType::lex(p3()));
        let orbit = orbit_of(&gens, &Vertex::parse(p3(), "00").unwrap());
        let want: BTreeSet<Vertex> = ["00", "10", "21"].iter().map(|s| Vertex::parse(p3(), s).unwrap()).collect();
        assert_eq!(orbit, want);
        assert_eq!(orbit_of(&gens, &Vertex::root()).len(), 1);
    }

    #[test]
    fn w_orbits_match_a() {
        let lambda = OrderType::lex_swapped(p3());
        let gens = g_lambda(&lambda);
        let a = vec![gens[0].clone()];
        let v_root = orbit_of(&gens, &Vertex::parse(p3(), "00").unwrap());
        for n in 2..=5 {
            for w in p3().words(n) {
                if v_root.contains(&Vertex(w.letters()[..2].to_vec())) {
                    continue;
                }
                let orbit = orbit_of(&gens, &w);
                assert_eq!(orbit.len(), 3, "{w}");
                assert_eq!(orbit, orbit_of(&a, &w));
            }
        }
    }

    #[test]
    fn tree_levels() {
        let tree = orbit_tree(p3(), &g_lambda(&OrderType::lex(p3())), 3);
        assert_eq!(tree.levels[1].len(), 1);
        assert_eq!(tree.levels[2].iter().map(|n| n.size).collect::<Vec<_>>(), [3, 3, 3]);
        let v = tree.orbit_containing(&Vertex::parse(p3(), "000").unwrap()).unwrap();
        assert_eq!(tree.levels[3][v].size, 9);
        for (n, level) in tree.levels.iter().enumerate() {
            assert_eq!(level.iter().map(|n| n.size).sum::<usize>(), 3usize.pow(n as u32));
        }
        for (n, level) in tree.levels.iter().enumerate().skip(1) {
            for node in level {
                let parent = &tree.levels[n - 1][node.parent.unwrap()];
                assert!(parent.representative.is_prefix_of(&node.representative) || n == 1);
                assert_eq!(tree.orbit_containing(&node.representative).map(|i| &tree.levels[n][i]), Some(node));
            }
        }
    }

    #[test]
    fn trivial_group_orbits() {
        let tree = orbit_tree(p3(), &[], 1);
        assert_eq!(tree.levels[1].len(), 3);
        assert!(tree.levels[1].iter().all(|n| n.size == 1));
    }

    #[test]
    fn transitivity() {
        let lambda = OrderType::lex(p3());
        let aut = SushchanskyAutomaton::build(&lambda);
        let t = SimplifiedAction::build(&lambda);
        assert!(is_level_transitive(p3(), &[t.a(), t.b()], 4));
        assert!(!is_level_transitive(p3(), &g_lambda(&lambda), 2));
        assert!(is_level_transitive(p3(), &preset(&aut, PresetName::H).unwrap().elements(), 4));
    }

    #[test]
    fn dot_is_stable() {
        let tree = orbit_tree(p3(), &g_lambda(&OrderType::lex(p3())), 2);
        let dot = tree.to_dot();
        assert!(dot.contains("o0_0 -> o1_0"));
        assert_eq!(dot, tree.to_dot());
    }
}
