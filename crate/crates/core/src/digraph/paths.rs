//! Longest directed paths and straight paths.

use alloc::vec;
use alloc::vec::Vec;

use super::{Digraph, GraphError};

impl Digraph {
    /// `L_max`: the number of arcs on a longest directed path.
    ///
    /// Exact in three regimes: acyclic digraphs (dynamic programming over a
    /// topological order), digraphs with exactly one directed cycle (a simple
    /// path never uses every arc of the cycle, so the answer is the best of
    /// the acyclic digraphs obtained by dropping one cycle arc), and any
    /// digraph with at most `size_guard` nodes (exhaustive search). Anything
    /// else is refused.
    pub fn longest_path(&self, size_guard: usize) -> Result<usize, GraphError> {
        if let Some(order) = self.topological_order() {
            return Ok(self.dag_longest_path(&order, None));
        }
        if let (1, Some(cycle)) = self.cycle_count_at_most_two() {
            let mut best = 0;
            for &a in &cycle {
                // The component is a single cycle, so each member has exactly
                // one successor inside it.
                let b = *self.out_adj[a]
                    .iter()
                    .find(|w| cycle.binary_search(w).is_ok())
                    .expect("cycle member without a cycle successor");
                let order = self
                    .topological_order_without(Some((a, b)))
                    .expect("dropping a cycle arc leaves an acyclic digraph");
                best = best.max(self.dag_longest_path(&order, Some((a, b))));
            }
            return Ok(best);
        }
        if self.node_count() <= size_guard {
            return Ok(self.exhaustive_longest_path());
        }
        Err(GraphError::Intractable {
            n: self.node_count(),
            guard: size_guard,
        })
    }

    fn dag_longest_path(&self, order: &[usize], skip: Option<(usize, usize)>) -> usize {
        let mut depth = vec![0usize; self.node_count()];
        let mut best = 0;
        for &v in order {
            for &w in &self.out_adj[v] {
                if skip == Some((v, w)) {
                    continue;
                }
                depth[w] = depth[w].max(depth[v] + 1);
                best = best.max(depth[w]);
            }
        }
        best
    }

    /// Depth-first search over all simple paths. Exponential.
    pub(crate) fn exhaustive_longest_path(&self) -> usize {
        let n = self.node_count();
        let mut on_path = vec![false; n];
        let mut best = 0;
        let mut frames: Vec<(usize, usize)> = Vec::new();
        for s in 0..n {
            on_path[s] = true;
            frames.push((s, 0));
            while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
                match self.out_adj[v].get(*pos) {
                    Some(&w) => {
                        *pos += 1;
                        if !on_path[w] {
                            on_path[w] = true;
                            frames.push((w, 0));
                            best = best.max(frames.len() - 1);
                        }
                    }
                    None => {
                        on_path[v] = false;
                        frames.pop();
                    }
                }
            }
        }
        best
    }

    /// Number of simple directed paths from `from` to `to`, saturating at
    /// `limit`. A node has one (empty) path to itself.
    pub fn count_paths(&self, from: usize, to: usize, limit: usize) -> usize {
        if from == to {
            return 1.min(limit);
        }
        let mut on_path = vec![false; self.node_count()];
        let mut count = 0;
        let mut frames: Vec<(usize, usize)> = vec![(from, 0)];
        on_path[from] = true;
        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            match self.out_adj[v].get(*pos) {
                Some(&w) => {
                    *pos += 1;
                    if w == to {
                        count += 1;
                        if count >= limit {
                            return limit;
                        }
                    } else if !on_path[w] {
                        on_path[w] = true;
                        frames.push((w, 0));
                    }
                }
                None => {
                    on_path[v] = false;
                    frames.pop();
                }
            }
        }
        count
    }

    /// Whether `pt` is a straight path: for every two of its nodes, the
    /// digraph holds exactly one directed path between them, in either
    /// direction.
    pub fn is_straight_path(&self, pt: &[usize]) -> Result<bool, GraphError> {
        for &v in pt {
            self.check_node(v)?;
        }
        let mut seen = vec![false; self.node_count()];
        for &v in pt {
            if core::mem::replace(&mut seen[v], true) {
                return Err(GraphError::NotAPath);
            }
        }
        if pt.is_empty() || pt.windows(2).any(|w| !self.has_arc(w[0], w[1])) {
            return Err(GraphError::NotAPath);
        }
        for (a, &i) in pt.iter().enumerate() {
            for &j in &pt[a + 1..] {
                let forward = self.count_paths(i, j, 2);
                if forward != 1 || self.count_paths(j, i, 1) != 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
