//! Directed cycle enumeration and the supersimple test.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::Digraph;

/// Cycles found by [`Digraph::enumerate_cycles`], each listed once with its
/// smallest node first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleEnumeration {
    pub cycles: Vec<Vec<usize>>,
    pub truncated: bool,
}

/// Number of distinct directed cycles per length.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CycleCensus {
    pub counts: BTreeMap<usize, u64>,
    pub truncated: bool,
}

impl CycleCensus {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, len: usize) -> u64 {
        self.counts.get(&len).copied().unwrap_or(0)
    }
}

impl Digraph {
    /// Lists the directed cycles of length at most `max_len`, stopping after
    /// `max_count` of them.
    ///
    /// Backtracking from every start node `s` through nodes larger than `s`
    /// inside the strongly connected component of `s`, so each cycle is found
    /// exactly once, from its smallest node.
    pub fn enumerate_cycles(&self, max_len: usize, max_count: usize) -> CycleEnumeration {
        let n = self.node_count();
        let info = self.condense();
        let mut cycles = Vec::new();
        let mut on_path = vec![false; n];
        let mut path: Vec<usize> = Vec::new();
        let mut frames: Vec<(usize, usize)> = Vec::new();

        for s in 0..n {
            let comp = info.scc_id[s];
            if !info.is_cyclic_scc[comp] {
                continue;
            }
            path.push(s);
            on_path[s] = true;
            frames.push((s, 0));
            while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
                let Some(&w) = self.out_adj[v].get(*pos) else {
                    frames.pop();
                    path.pop();
                    on_path[v] = false;
                    continue;
                };
                *pos += 1;
                if w == s {
                    if cycles.len() == max_count {
                        return CycleEnumeration {
                            cycles,
                            truncated: true,
                        };
                    }
                    cycles.push(path.clone());
                } else if w > s
                    && !on_path[w]
                    && info.scc_id[w] == comp
                    && path.len() < max_len
                {
                    path.push(w);
                    on_path[w] = true;
                    frames.push((w, 0));
                }
            }
        }
        CycleEnumeration {
            cycles,
            truncated: false,
        }
    }

    /// Counts the directed cycles of lengths `2..=max_len`, each counted once
    /// regardless of rotation.
    pub fn cycle_census(&self, max_len: usize, max_count: usize) -> CycleCensus {
        let found = self.enumerate_cycles(max_len, max_count);
        let mut counts = BTreeMap::new();
        for c in &found.cycles {
            *counts.entry(c.len()).or_insert(0) += 1;
        }
        CycleCensus {
            counts,
            truncated: found.truncated,
        }
    }

    /// Number of directed cycles, saturating at 2, and the node set of the
    /// cycle when there is exactly one.
    ///
    /// A strongly connected component with `k` nodes holds exactly one cycle
    /// iff it has exactly `k` internal arcs; any extra arc closes a second
    /// cycle.
    pub fn cycle_count_at_most_two(&self) -> (u8, Option<Vec<usize>>) {
        let info = self.condense();
        let mut cyclic = info.cyclic_components();
        let Some(first) = cyclic.next() else {
            return (0, None);
        };
        if cyclic.next().is_some() {
            return (2, None);
        }
        let comp = info.scc_id[first[0]];
        let internal: usize = first
            .iter()
            .map(|&v| {
                self.out_adj[v]
                    .iter()
                    .filter(|&&w| info.scc_id[w] == comp)
                    .count()
            })
            .sum();
        if internal == first.len() {
            (1, Some(first.to_vec()))
        } else {
            (2, None)
        }
    }

    /// Whether the digraph is supersimple: at most one directed cycle `C`,
    /// and no node outside `C` is reached from `C`, or reaches `C`, along two
    /// distinct directed paths that avoid the arcs of `C`.
    ///
    /// Exact and linear-time: with a single cycle, the digraph minus the
    /// cycle arcs is acyclic and path counts follow by dynamic programming.
    pub fn is_supersimple(&self) -> bool {
        let (count, cycle) = match self.cycle_count_at_most_two() {
            (0, _) => return true,
            (1, Some(c)) => (1, c),
            _ => return false,
        };
        debug_assert_eq!(count, 1);
        let n = self.node_count();
        let mut in_cycle = vec![false; n];
        for &v in &cycle {
            in_cycle[v] = true;
        }
        let remaining = Digraph::from_sorted_out_lists(
            (0..n)
                .map(|v| {
                    self.out_adj[v]
                        .iter()
                        .copied()
                        .filter(|&w| !(in_cycle[v] && in_cycle[w]))
                        .collect()
                })
                .collect(),
        );
        let order = remaining
            .topological_order()
            .expect("removing the only cycle leaves an acyclic digraph");

        // Paths from the cycle, saturating at 2.
        let mut from_cycle = vec![0u8; n];
        for &v in &order {
            if in_cycle[v] {
                continue;
            }
            let total: u8 = remaining.in_adj[v]
                .iter()
                .map(|&u| if in_cycle[u] { 1 } else { from_cycle[u] })
                .fold(0, |acc, x| acc.saturating_add(x).min(2));
            if total >= 2 {
                return false;
            }
            from_cycle[v] = total;
        }

        // Paths into the cycle.
        let mut to_cycle = vec![0u8; n];
        for &v in order.iter().rev() {
            if in_cycle[v] {
                continue;
            }
            let total: u8 = remaining.out_adj[v]
                .iter()
                .map(|&w| if in_cycle[w] { 1 } else { to_cycle[w] })
                .fold(0, |acc, x| acc.saturating_add(x).min(2));
            if total >= 2 {
                return false;
            }
            to_cycle[v] = total;
        }
        true
    }
}
