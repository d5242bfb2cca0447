//! Reachability, strongly connected components and the giant component.

use alloc::vec;
use alloc::vec::Vec;

use super::{Digraph, GraphError};

/// The strongly connected structure of a digraph.
///
/// All node sets are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensationInfo {
    /// Component index of every node.
    pub scc_id: Vec<usize>,
    pub scc_members: Vec<Vec<usize>>,
    /// A component is cyclic iff it has at least two nodes (the digraph is
    /// loop-free).
    pub is_cyclic_scc: Vec<bool>,
    /// Components with no arc leaving them.
    pub is_sink_scc: Vec<bool>,
    /// Largest cyclic component; ties go to the one holding the smallest
    /// node. Empty when the digraph is acyclic.
    pub gc: Vec<usize>,
    /// Nodes upstream of `gc` (including `gc`).
    pub ug: Vec<usize>,
    /// Nodes downstream of `gc` (including `gc`).
    pub dg: Vec<usize>,
    /// Nodes whose upstream component contains a directed cycle.
    pub cycu: Vec<usize>,
}

impl CondensationInfo {
    pub fn component_count(&self) -> usize {
        self.scc_members.len()
    }

    pub fn cyclic_components(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.scc_members
            .iter()
            .zip(&self.is_cyclic_scc)
            .filter_map(|(m, &c)| c.then_some(m.as_slice()))
    }

    pub fn sink_components(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.scc_members
            .iter()
            .zip(&self.is_sink_scc)
            .filter_map(|(m, &s)| s.then_some(m.as_slice()))
    }
}

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Backward,
}

impl Digraph {
    /// `UC(i)`: every node with a directed path to `i`, including `i`.
    pub fn upstream(&self, i: usize) -> Result<Vec<usize>, GraphError> {
        self.check_node(i)?;
        Ok(mask_to_set(&self.reach_mask(&[i], Direction::Backward)))
    }

    /// `DC(i)`: every node reachable from `i`, including `i`.
    pub fn downstream(&self, i: usize) -> Result<Vec<usize>, GraphError> {
        self.check_node(i)?;
        Ok(mask_to_set(&self.reach_mask(&[i], Direction::Forward)))
    }

    /// `SC(i) = UC(i) ∩ DC(i)`.
    pub fn strong_component(&self, i: usize) -> Result<Vec<usize>, GraphError> {
        self.check_node(i)?;
        let up = self.reach_mask(&[i], Direction::Backward);
        let down = self.reach_mask(&[i], Direction::Forward);
        Ok((0..self.node_count()).filter(|&v| up[v] && down[v]).collect())
    }

    /// Union of the upstream components of `nodes`.
    pub fn upstream_of_set(&self, nodes: &[usize]) -> Result<Vec<usize>, GraphError> {
        for &v in nodes {
            self.check_node(v)?;
        }
        Ok(mask_to_set(&self.reach_mask(nodes, Direction::Backward)))
    }

    /// Union of the downstream components of `nodes`.
    pub fn downstream_of_set(&self, nodes: &[usize]) -> Result<Vec<usize>, GraphError> {
        for &v in nodes {
            self.check_node(v)?;
        }
        Ok(mask_to_set(&self.reach_mask(nodes, Direction::Forward)))
    }

    fn reach_mask(&self, starts: &[usize], dir: Direction) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        let mut stack = Vec::with_capacity(starts.len());
        for &s in starts {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(v) = stack.pop() {
            let next = match dir {
                Direction::Forward => &self.out_adj[v],
                Direction::Backward => &self.in_adj[v],
            };
            for &w in next {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Strongly connected components (iterative Tarjan), the giant
    /// component and its upstream/downstream closures, and `CYCU`.
    pub fn condense(&self) -> CondensationInfo {
        let scc_id = self.tarjan();
        let count = scc_id.iter().copied().max().map_or(0, |m| m + 1);
        let mut scc_members = vec![Vec::new(); count];
        for (v, &c) in scc_id.iter().enumerate() {
            scc_members[c].push(v);
        }
        let is_cyclic_scc: Vec<bool> = scc_members.iter().map(|m| m.len() > 1).collect();
        let mut is_sink_scc = vec![true; count];
        for (a, b) in self.arcs() {
            if scc_id[a] != scc_id[b] {
                is_sink_scc[scc_id[a]] = false;
            }
        }

        // Members are sorted, so m[0] is the smallest node of a component.
        let giant = scc_members
            .iter()
            .filter(|m| m.len() > 1)
            .max_by(|x, y| x.len().cmp(&y.len()).then(y[0].cmp(&x[0])));
        let (gc, ug, dg) = match giant {
            Some(gc) => (
                gc.clone(),
                mask_to_set(&self.reach_mask(gc, Direction::Backward)),
                mask_to_set(&self.reach_mask(gc, Direction::Forward)),
            ),
            None => (Vec::new(), Vec::new(), Vec::new()),
        };

        let cyclic_nodes: Vec<usize> = scc_members
            .iter()
            .filter(|m| m.len() > 1)
            .flatten()
            .copied()
            .collect();
        let cycu = mask_to_set(&self.reach_mask(&cyclic_nodes, Direction::Forward));

        CondensationInfo {
            scc_id,
            scc_members,
            is_cyclic_scc,
            is_sink_scc,
            gc,
            ug,
            dg,
            cycu,
        }
    }

    fn tarjan(&self) -> Vec<usize> {
        const UNVISITED: usize = usize::MAX;
        let n = self.node_count();
        let mut index = vec![UNVISITED; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comp = vec![UNVISITED; n];
        let mut next_index = 0;
        let mut next_comp = 0;
        // (node, position in its out-list)
        let mut call: Vec<(usize, usize)> = Vec::new();

        for root in 0..n {
            if index[root] != UNVISITED {
                continue;
            }
            call.push((root, 0));
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if let Some(&w) = self.out_adj[v].get(*pos) {
                    *pos += 1;
                    if index[w] == UNVISITED {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
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
        comp
    }
}

fn mask_to_set(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(v, &m)| m.then_some(v))
        .collect()
}
