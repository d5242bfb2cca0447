//! Loop-free digraphs with forward and reverse adjacency.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

mod components;
mod cycles;
mod paths;
mod random;

pub use components::CondensationInfo;
pub use cycles::{CycleCensus, CycleEnumeration};
pub use random::{gen_erdos_renyi, gen_erdos_renyi_bernoulli, gen_erdos_renyi_skip};

/// Node count above which [`Digraph::longest_path`] refuses exhaustive search.
pub const DEFAULT_SIZE_GUARD: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("node {node} out of range for a digraph on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(usize, usize),
    #[error("arc probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("longest path on a cyclic digraph with {n} nodes exceeds the size guard {guard}")]
    Intractable { n: usize, guard: usize },
    #[error("node sequence is not a directed path")]
    NotAPath,
}

/// A loop-free digraph on nodes `0..n`.
///
/// Both adjacency directions are kept sorted, so iteration order is
/// deterministic and arc lookup is a binary search.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Digraph {
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    arc_count: usize,
}

impl Digraph {
    /// The digraph on `n` nodes without arcs.
    pub fn empty(n: usize) -> Self {
        Digraph {
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            arc_count: 0,
        }
    }

    /// Builds a digraph from an arc list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Digraph::empty(n);
        for (a, b) in arcs {
            for node in [a, b] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange { node, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            g.out_adj[a].push(b);
            g.in_adj[b].push(a);
            g.arc_count += 1;
        }
        for list in g.out_adj.iter_mut().chain(g.in_adj.iter_mut()) {
            list.sort_unstable();
        }
        for (a, outs) in g.out_adj.iter().enumerate() {
            if let Some(w) = outs.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateArc(a, w[0]));
            }
        }
        Ok(g)
    }

    /// Builds from per-node sorted, duplicate-free out-lists; callers
    /// inside the crate guarantee the invariants.
    pub(crate) fn from_sorted_out_lists(out_adj: Vec<Vec<usize>>) -> Self {
        let n = out_adj.len();
        let mut in_adj = vec![Vec::new(); n];
        let mut arc_count = 0;
        for (a, outs) in out_adj.iter().enumerate() {
            for &b in outs {
                in_adj[b].push(a);
                arc_count += 1;
            }
        }
        Digraph {
            out_adj,
            in_adj,
            arc_count,
        }
    }

    pub fn node_count(&self) -> usize {
        self.out_adj.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out_adj[i]
    }

    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.in_adj[i]
    }

    pub fn has_arc(&self, a: usize, b: usize) -> bool {
        a < self.node_count() && self.out_adj[a].binary_search(&b).is_ok()
    }

    /// All arcs, sorted by source and then target.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(a, outs)| outs.iter().map(move |&b| (a, b)))
    }

    pub(crate) fn check_node(&self, i: usize) -> Result<(), GraphError> {
        if i < self.node_count() {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange {
                node: i,
                n: self.node_count(),
            })
        }
    }

    /// The subdigraph induced by `nodes` (sorted, distinct). Node `k` of the
    /// result corresponds to `nodes[k]`.
    pub fn induced(&self, nodes: &[usize]) -> Digraph {
        let mut local = vec![usize::MAX; self.node_count()];
        for (k, &v) in nodes.iter().enumerate() {
            local[v] = k;
        }
        let out_adj = nodes
            .iter()
            .map(|&v| {
                self.out_adj[v]
                    .iter()
                    .filter_map(|&w| (local[w] != usize::MAX).then_some(local[w]))
                    .collect::<Vec<_>>()
            })
            .map(|mut outs| {
                outs.sort_unstable();
                outs
            })
            .collect();
        Digraph::from_sorted_out_lists(out_adj)
    }

    /// Topological order, or `None` when the digraph has a directed cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        self.topological_order_without(None)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Kahn's algorithm, optionally pretending one arc is absent.
    pub(crate) fn topological_order_without(
        &self,
        skip: Option<(usize, usize)>,
    ) -> Option<Vec<usize>> {
        let n = self.node_count();
        let mut indeg: Vec<usize> = self.in_adj.iter().map(Vec::len).collect();
        if let Some((_, b)) = skip {
            indeg[b] -= 1;
        }
        let mut order: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &w in &self.out_adj[v] {
                if skip == Some((v, w)) {
                    continue;
                }
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    order.push(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

/// Whether a vertex set of size `size` is `b`-small in a digraph on `n`
/// nodes, i.e. `size < b ln n`.
pub fn is_b_small(size: usize, b: f64, n: usize) -> bool {
    (size as f64) < b * libm::log(n as f64)
}
