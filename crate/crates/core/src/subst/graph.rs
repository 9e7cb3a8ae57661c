use petgraph::algo::{has_path_connecting, tarjan_scc};
use petgraph::graphmap::DiGraphMap;

use super::{State, SubstSystem};

/// Nonzero states reachable from the init row; an edge `s → t` when `t` is a
/// quadrant image of `s`.
#[derive(Clone, Debug)]
pub struct TransitionGraph {
    graph: DiGraphMap<State, ()>,
    zero_reachable: bool,
}

impl TransitionGraph {
    pub(super) fn build(sys: &SubstSystem) -> Self {
        let mut graph = DiGraphMap::new();
        let mut zero_reachable = false;
        let mut stack: Vec<State> = sys.init().values().copied().collect();
        for &s in &stack {
            graph.add_node(s);
        }
        while let Some(s) = stack.pop() {
            for q in 0..4 {
                let t = sys.apply(s, q >> 1, q & 1);
                if t == 0 {
                    zero_reachable = true;
                    continue;
                }
                if !graph.contains_node(t) {
                    graph.add_node(t);
                    stack.push(t);
                }
                graph.add_edge(s, t, ());
            }
        }
        TransitionGraph { graph, zero_reachable }
    }

    /// Sorted nonzero states.
    pub fn states(&self) -> Vec<State> {
        let mut v: Vec<State> = self.graph.nodes().collect();
        v.sort_unstable();
        v
    }

    pub fn len(&self) -> usize {
        self.graph.node_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Reachable states counting the zero state when it occurs.
    pub fn len_with_zero(&self) -> usize {
        self.len() + usize::from(self.zero_reachable)
    }

    pub fn contains(&self, s: State) -> bool {
        self.graph.contains_node(s)
    }

    pub fn successors(&self, s: State) -> Vec<State> {
        let mut v: Vec<State> = self.graph.neighbors(s).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Every Tarjan component, each sorted, in ascending order of least member.
    pub fn components(&self) -> Vec<Vec<State>> {
        let mut comps: Vec<Vec<State>> = tarjan_scc(&self.graph)
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        comps.sort();
        comps
    }

    /// Components carrying at least one cycle (size > 1 or a self-loop).
    pub fn cyclic_components(&self) -> Vec<Vec<State>> {
        self.components()
            .into_iter()
            .filter(|c| c.len() > 1 || self.graph.contains_edge(c[0], c[0]))
            .collect()
    }

    /// Path of length ≥ 0 from `from` to `to`.
    pub fn reaches(&self, from: State, to: State) -> bool {
        self.contains(from) && self.contains(to) && has_path_connecting(&self.graph, from, to, None)
    }
}
