use super::{MealyMachine, StateId};

/// Boundedness test on the graph of non-identity states (edges counted with
/// multiplicity, one per letter): the machine is bounded iff every
/// non-trivial strongly connected component is a simple cycle and no path
/// joins two distinct cycles.
pub fn is_bounded(m: &MealyMachine) -> bool {
    let min = m.minimize();
    let n = min.num_states();
    let trivial = min.identity_state();
    let edges: Vec<Vec<StateId>> = (0..n as StateId)
        .map(|s| {
            if Some(s) == trivial {
                return Vec::new();
            }
            min.successors(s).iter().copied().filter(|&t| Some(t) != trivial).collect()
        })
        .collect();

    let comp = tarjan(&edges);
    let ncomp = comp.iter().copied().max().map_or(0, |c| c + 1);
    let mut size = vec![0usize; ncomp];
    let mut internal = vec![0usize; ncomp];
    for (s, out) in edges.iter().enumerate() {
        if Some(s as StateId) == trivial {
            continue;
        }
        size[comp[s]] += 1;
        internal[comp[s]] += out.iter().filter(|&&t| comp[t as usize] == comp[s]).count();
    }
    let cyclic: Vec<bool> = internal.iter().map(|&e| e > 0).collect();
    if (0..ncomp).any(|c| cyclic[c] && internal[c] != size[c]) {
        return false;
    }

    // Tarjan numbers components in reverse topological order, so every edge
    // between components goes from a higher number to a lower one.
    let mut reaches_cycle = vec![false; ncomp];
    let mut comp_edges: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for (s, out) in edges.iter().enumerate() {
        for &t in out {
            let (a, b) = (comp[s], comp[t as usize]);
            if a != b {
                comp_edges[a].push(b);
            }
        }
    }
    for c in 0..ncomp {
        for &d in &comp_edges[c] {
            debug_assert!(d < c);
            if cyclic[d] || reaches_cycle[d] {
                reaches_cycle[c] = true;
            }
        }
        if cyclic[c] && reaches_cycle[c] {
            return false;
        }
    }
    true
}

/// Strongly connected components; component ids are in reverse topological
/// order of the condensation.
fn tarjan(edges: &[Vec<StateId>]) -> Vec<usize> {
    let n = edges.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0;
    let mut next_comp = 0;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // iterative DFS: (vertex, next edge position)
        let mut work = vec![(root, 0usize)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = work.len().checked_sub(1) {
            let (v, pos) = work[top];
            if pos < edges[v].len() {
                let w = edges[v][pos] as usize;
                work[top].1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}
