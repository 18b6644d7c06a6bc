use std::collections::BTreeMap;
use std::fmt::Write;

use super::{MealyMachine, StateId};

/// Renders the machine as a DOT digraph. Nodes are labelled
/// `name/output`; parallel transitions are merged into one edge labelled
/// `x|y, x'|y'`. Output is a pure function of the machine.
pub fn export_dot(m: &MealyMachine, name: &str) -> String {
    let mut s = String::new();
    let graph_name: String = name.chars().filter(|c| c.is_ascii_alphanumeric() || *c == '_').collect();
    let graph_name = if graph_name.is_empty() { "machine".to_string() } else { graph_name };
    writeln!(s, "digraph {graph_name} {{").unwrap();
    writeln!(s, "  rankdir=LR;").unwrap();
    writeln!(s, "  node [shape=circle];").unwrap();
    for st in 0..m.num_states() as StateId {
        let label = m.label(st).map(str::to_string).unwrap_or_else(|| format!("s{st}"));
        let shape = if Some(st) == m.identity_state() { ", shape=doublecircle" } else { "" };
        writeln!(s, "  s{st} [label=\"{}/{}\"{shape}];", escape(&label), escape(&m.output(st).to_string())).unwrap();
    }
    for st in 0..m.num_states() as StateId {
        let mut targets: BTreeMap<StateId, Vec<String>> = BTreeMap::new();
        for x in m.alphabet().letters() {
            targets.entry(m.next(st, x)).or_default().push(format!("{x}|{}", m.apply(st, x)));
        }
        for (t, labels) in targets {
            writeln!(s, "  s{st} -> s{t} [label=\"{}\"];", labels.join(", ")).unwrap();
        }
    }
    s.push_str("}\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
