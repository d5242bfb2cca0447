//! Deterministic networks with known long-run behaviour.
//!
//! * [`build_nsc`], [`build_nsc1`] and [`build_nscp`] are isolated directed
//!   cycles whose initial state keeps them firing forever.
//! * [`build_landau`] combines disjoint odd cycles so that the transient
//!   and attractor grow like the lcm of their lengths.
//! * [`build_tree_witness`] is a complete in-tree whose staircase initial
//!   state makes the root fire at time `d`.
//!
//! Every builder returns the network together with its initial state.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::digraph::Digraph;
use crate::dynamics::{Network, NetworkError, State};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("cycle length {len} is below the minimum {min}")]
    TooShort { len: usize, min: usize },
    #[error("cycle length {len} is not divisible by {modulus}")]
    NotDivisible { len: usize, modulus: usize },
    #[error("cycle lengths must be odd and at least 3, got {0}")]
    LandauLength(usize),
    #[error("at least one cycle length is required")]
    NoCycles,
    #[error("invalid tree parameter: {0}")]
    TreeParameter(&'static str),
    #[error("construction would exceed the supported size")]
    TooLarge,
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// A builder together with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSpec {
    Nsc { len: usize },
    Nsc1 { len: usize, p: u16 },
    NscP { len: usize, p: u16 },
    Landau { ks: Vec<usize> },
    Tree { depth: usize, branching: u32, p: u16 },
}

impl WitnessSpec {
    pub fn build(&self) -> Result<(Network, State), ConstructionError> {
        match self {
            WitnessSpec::Nsc { len } => build_nsc(*len),
            WitnessSpec::Nsc1 { len, p } => build_nsc1(*len, *p),
            WitnessSpec::NscP { len, p } => build_nscp(*len, *p),
            WitnessSpec::Landau { ks } => build_landau(ks),
            WitnessSpec::Tree { depth, branching, p } => build_tree_witness(*depth, *branching, *p),
        }
    }
}

/// Arcs `j -> j + 1 mod len` offset by `base`.
fn ring(base: usize, len: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..len).map(move |j| (base + j, base + (j + 1) % len))
}

/// An isolated `len`-cycle with `p = th = 1` and state `(0, 1, ..., 1)`.
pub fn build_nsc(len: usize) -> Result<(Network, State), ConstructionError> {
    build_nsc1(len, 1)
}

/// An isolated `len`-cycle with refractory period `p`, threshold 1, node 0
/// in state 0 and every other node at `p`. The single pulse survives iff
/// `len >= p + 1`.
pub fn build_nsc1(len: usize, p: u16) -> Result<(Network, State), ConstructionError> {
    if p == 0 {
        return Err(NetworkError::ZeroRefractory(0).into());
    }
    let min = (p as usize + 1).max(2);
    if len < min {
        return Err(ConstructionError::TooShort { len, min });
    }
    let graph = Digraph::from_arcs(len, ring(0, len)).expect("ring arcs are valid");
    let net = Network::uniform(graph, p, 1)?;
    let mut s = vec![p; len];
    s[0] = 0;
    Ok((net, State::new(s)))
}

/// An isolated `len`-cycle with refractory period `p`, threshold 1 and
/// state `s_j = j mod (p + 1)`. Arcs run `j + 1 -> j`, so each node's state
/// is one below its in-neighbour's and a wave of period `p + 1` travels
/// around the cycle. Requires `(p + 1) | len`.
pub fn build_nscp(len: usize, p: u16) -> Result<(Network, State), ConstructionError> {
    if p == 0 {
        return Err(NetworkError::ZeroRefractory(0).into());
    }
    let modulus = p as usize + 1;
    if len < 2 {
        return Err(ConstructionError::TooShort { len, min: 2 });
    }
    if len % modulus != 0 {
        return Err(ConstructionError::NotDivisible { len, modulus });
    }
    let graph = Digraph::from_arcs(len, ring(0, len).map(|(a, b)| (b, a)))
        .expect("ring arcs are valid");
    let net = Network::uniform(graph, p, 1)?;
    let s = (0..len).map(|j| (j % modulus) as u16).collect();
    Ok((net, State::new(s)))
}

/// Disjoint odd cycles feeding a collector node, plus a 2-cycle that also
/// feeds the collector, with `p = th = 1` everywhere.
///
/// Node layout: the cycles occupy consecutive blocks in the order of `ks`,
/// then the collector `i*`, then the 2-cycle `(i0, i1)`. In a cycle of
/// length `k` the node at 1-based position `j` has state 0 when `j` is even
/// and `j < k`, and 1 otherwise; position `k` feeds `i*`. Initially
/// `s(i*) = s(i0) = 0` and `s(i1) = 1`; `i0` feeds `i*`.
pub fn build_landau(ks: &[usize]) -> Result<(Network, State), ConstructionError> {
    if ks.is_empty() {
        return Err(ConstructionError::NoCycles);
    }
    if let Some(&k) = ks.iter().find(|&&k| k < 3 || k % 2 == 0) {
        return Err(ConstructionError::LandauLength(k));
    }
    let total: usize = ks.iter().sum();
    let n = total + 3;
    let (star, i0, i1) = (total, total + 1, total + 2);
    let mut arcs = Vec::with_capacity(n + ks.len() + 2);
    let mut s = Vec::with_capacity(n);
    let mut base = 0;
    for &k in ks {
        arcs.extend(ring(base, k));
        arcs.push((base + k - 1, star));
        s.extend((1..=k).map(|j| if j < k && j % 2 == 0 { 0 } else { 1 }));
        base += k;
    }
    arcs.extend([(i0, i1), (i1, i0), (i0, star)]);
    s.extend([0, 0, 1]);
    let graph = Digraph::from_arcs(n, arcs).expect("construction arcs are valid");
    Ok((Network::uniform(graph, 1, 1)?, State::new(s)))
}

/// Largest tree [`build_tree_witness`] will materialise.
pub const MAX_TREE_NODES: usize = 1 << 24;

/// `|Tr(d)|` for branching `th`: `(th^(d+1) - 1) / (th - 1)`, or `d + 1`
/// when `th = 1`.
pub fn tree_size(depth: usize, branching: u32) -> Option<usize> {
    let th = branching as usize;
    if th == 0 {
        return None;
    }
    let mut level = 1usize;
    let mut total = 1usize;
    for _ in 0..depth {
        level = level.checked_mul(th)?;
        total = total.checked_add(level)?;
    }
    Some(total)
}

/// Depths of the nodes of `Tr(d)` in breadth-first numbering, where the
/// children of `x` are `x * th + 1 ..= x * th + th`.
fn tree_depths(size: usize, th: usize) -> Vec<usize> {
    let mut depth = vec![0usize; size];
    for x in 1..size {
        depth[x] = depth[(x - 1) / th] + 1;
    }
    depth
}

/// The complete `th`-ary in-tree of depth `d` in breadth-first numbering,
/// with arcs from children to parents, `p_i = p`, `th_i = th`, leaves in
/// state 0 and every parent one below its children modulo `p + 1`.
pub fn build_tree_witness(
    depth: usize,
    branching: u32,
    p: u16,
) -> Result<(Network, State), ConstructionError> {
    if depth == 0 {
        return Err(ConstructionError::TreeParameter("depth must be at least 1"));
    }
    if branching < 2 {
        return Err(ConstructionError::TreeParameter("branching must be at least 2"));
    }
    if p == 0 {
        return Err(ConstructionError::TreeParameter("refractory period must be at least 1"));
    }
    let size = tree_size(depth, branching)
        .filter(|&s| s <= MAX_TREE_NODES)
        .ok_or(ConstructionError::TooLarge)?;
    let th = branching as usize;
    let graph = Digraph::from_arcs(size, (1..size).map(|x| (x, (x - 1) / th)))
        .expect("tree arcs are valid");
    let modulus = p as usize + 1;
    let s = tree_depths(size, th)
        .into_iter()
        .map(|delta| ((modulus - (depth - delta) % modulus) % modulus) as u16)
        .collect();
    Ok((Network::uniform(graph, p, branching)?, State::new(s)))
}

/// The labelling used by [`build_tree_witness`]: sequence number `x` (in
/// breadth-first order) is node `x`.
pub fn tree_witness_labeling(depth: usize, branching: u32) -> Option<Vec<usize>> {
    tree_size(depth, branching).map(|size| (0..size).collect())
}

/// Whether `labels` (indexed by the breadth-first number of a sequence in
/// `Tr(d)`) witnesses depth `d` for `net` and `s0`:
///
/// 1. every labelled node has `p_i = p` and `th_i = th`;
/// 2. leaves are in state 0 and every parent is one below each child
///    modulo `p + 1`;
/// 3. the in-neighbours of an inner node are exactly its children;
/// 4. leaves have no in-neighbours;
/// 5. siblings are labelled in increasing order;
/// 6. no other arc touches a labelled node.
pub fn verify_tree_witness(
    net: &Network,
    s0: &State,
    labels: &[usize],
    depth: usize,
    branching: u32,
    p: u16,
) -> bool {
    let n = net.node_count();
    let th = branching as usize;
    if s0.len() != n || th == 0 || tree_size(depth, branching) != Some(labels.len()) {
        return false;
    }
    let mut used = vec![false; n];
    for &v in labels {
        if v >= n || core::mem::replace(&mut used[v], true) {
            return false;
        }
    }
    let graph = net.graph();
    let state = s0.as_slice();
    let modulus = p as u32 + 1;
    let depths = tree_depths(labels.len(), th);
    let mut children = Vec::with_capacity(th);
    for (x, &v) in labels.iter().enumerate() {
        if net.refractory()[v] != p || net.threshold()[v] != branching {
            return false;
        }
        let inner = depths[x] < depth;
        if inner {
            children.clear();
            children.extend((1..=th).map(|k| labels[x * th + k]));
            if children.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            if children
                .iter()
                .any(|&c| (state[c] as u32 + modulus - 1) % modulus != state[v] as u32)
            {
                return false;
            }
            // `children` is increasing, as is the in-neighbour list
            if graph.in_neighbors(v) != children.as_slice() {
                return false;
            }
        } else if state[v] != 0 || !graph.in_neighbors(v).is_empty() {
            return false;
        }
        let out = graph.out_neighbors(v);
        let allowed = if x == 0 { None } else { Some(labels[(x - 1) / th]) };
        if out.len() != usize::from(allowed.is_some()) || out.first().copied() != allowed {
            return false;
        }
    }
    true
}

/// The disjoint union of networks, relabelled in the order given, with the
/// initial states concatenated.
pub fn disjoint_union(parts: &[(Network, State)]) -> (Network, State) {
    let n: usize = parts.iter().map(|(net, _)| net.node_count()).sum();
    let mut arcs = Vec::new();
    let mut refractory = Vec::with_capacity(n);
    let mut threshold = Vec::with_capacity(n);
    let mut state = Vec::with_capacity(n);
    let mut base = 0;
    for (net, s) in parts {
        arcs.extend(net.graph().arcs().map(|(a, b)| (a + base, b + base)));
        refractory.extend_from_slice(net.refractory());
        threshold.extend_from_slice(net.threshold());
        state.extend_from_slice(s.as_slice());
        base += net.node_count();
    }
    let graph = Digraph::from_arcs(n, arcs).expect("relabelled arcs are valid");
    let net = Network::new(graph, refractory, threshold).expect("parts are valid networks");
    (net, State::new(state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{detect_hashing, DetectOptions};

    fn tau_alpha(built: &(Network, State)) -> (u64, u64) {
        let summary = detect_hashing(&built.0, &built.1, &DetectOptions::default()).unwrap();
        assert!(!summary.capped);
        (summary.tau, summary.alpha_u64().unwrap())
    }

    #[test]
    fn nsc_family() {
        assert_eq!(tau_alpha(&build_nsc(2).unwrap()), (0, 2));
        assert_eq!(tau_alpha(&build_nsc(5).unwrap()), (0, 5));
        assert_eq!(build_nsc(1).unwrap_err(), ConstructionError::TooShort { len: 1, min: 2 });
        assert_eq!(tau_alpha(&build_nsc1(3, 1).unwrap()), (0, 3));
        assert_eq!(tau_alpha(&build_nsc1(5, 2).unwrap()), (1, 5));
        assert_eq!(build_nsc1(2, 2).unwrap_err(), ConstructionError::TooShort { len: 2, min: 3 });
        assert_eq!(tau_alpha(&build_nscp(6, 1).unwrap()), (0, 2));
        assert_eq!(tau_alpha(&build_nscp(6, 2).unwrap()), (0, 3));
        assert_eq!(
            build_nscp(5, 1).unwrap_err(),
            ConstructionError::NotDivisible { len: 5, modulus: 2 }
        );
    }

    #[test]
    fn nsc_state_is_never_steady() {
        let (net, s) = build_nsc(3).unwrap();
        assert_ne!(s, net.steady_state());
        assert_eq!(s.as_slice(), &[0, 1, 1]);
    }

    #[test]
    fn landau_layout() {
        let (net, s) = build_landau(&[3, 5]).unwrap();
        assert_eq!(net.node_count(), 11);
        assert_eq!(s.as_slice(), &[1, 0, 1, 1, 0, 1, 0, 1, 0, 0, 1]);
        assert!(net.graph().has_arc(2, 8));
        assert!(net.graph().has_arc(7, 8));
        assert!(net.graph().has_arc(9, 8));
        assert!(net.graph().has_arc(9, 10) && net.graph().has_arc(10, 9));
        assert_eq!(net.graph().arc_count(), 3 + 5 + 2 + 3);
        assert_eq!(build_landau(&[4]).unwrap_err(), ConstructionError::LandauLength(4));
        assert_eq!(build_landau(&[1]).unwrap_err(), ConstructionError::LandauLength(1));
        assert_eq!(build_landau(&[]).unwrap_err(), ConstructionError::NoCycles);
    }

    #[test]
    fn landau_goldens() {
        // brute-force oracle over the explicit state sequence
        let cases: [(&[usize], (u64, u64)); 8] = [
            (&[3], (4, 6)),
            (&[5], (6, 10)),
            (&[7], (8, 14)),
            (&[3, 3], (4, 6)),
            (&[3, 5], (6, 30)),
            (&[3, 7], (10, 42)),
            (&[5, 7], (8, 70)),
            (&[3, 5, 7], (10, 210)),
        ];
        for (ks, expected) in cases {
            assert_eq!(tau_alpha(&build_landau(ks).unwrap()), expected, "ks = {ks:?}");
        }
    }

    #[test]
    fn tree_witness_shape() {
        let (net, s) = build_tree_witness(2, 2, 1).unwrap();
        assert_eq!(net.node_count(), 7);
        assert_eq!(s.as_slice(), &[0, 1, 1, 0, 0, 0, 0]);
        let (_, s) = build_tree_witness(2, 2, 2).unwrap();
        assert_eq!(s.as_slice(), &[1, 2, 2, 0, 0, 0, 0]);
        assert_eq!(tree_size(2, 3), Some(13));
        assert_eq!(tree_size(3, 1), Some(4));
        assert!(build_tree_witness(0, 2, 1).is_err());
        assert!(build_tree_witness(2, 1, 1).is_err());
        assert!(build_tree_witness(2, 2, 0).is_err());
        assert_eq!(build_tree_witness(24, 2, 1).unwrap_err(), ConstructionError::TooLarge);
    }

    #[test]
    fn tree_witness_transients() {
        for depth in 1..=4 {
            for th in [2, 3] {
                for p in [1u16, 2] {
                    let built = build_tree_witness(depth, th, p).unwrap();
                    assert_eq!(tau_alpha(&built), (depth as u64 + p as u64, 1));
                }
            }
        }
    }

    #[test]
    fn tree_witness_round_trip_and_mutations() {
        let (net, s) = build_tree_witness(2, 2, 1).unwrap();
        let labels = tree_witness_labeling(2, 2).unwrap();
        assert!(verify_tree_witness(&net, &s, &labels, 2, 2, 1));
        assert!(!verify_tree_witness(&net, &s, &labels, 2, 2, 2));
        assert!(!verify_tree_witness(&net, &s, &labels, 3, 2, 1));

        let mut extra: Vec<_> = net.graph().arcs().collect();
        extra.push((3, 4));
        let g = Digraph::from_arcs(7, extra).unwrap();
        let mutated = Network::uniform(g, 1, 2).unwrap();
        assert!(!verify_tree_witness(&mutated, &s, &labels, 2, 2, 1));

        // an arc out of the root is not required by the tree either
        let (big, big_s) = disjoint_union(&[(net.clone(), s.clone()), build_nsc(2).unwrap()]);
        assert!(verify_tree_witness(&big, &big_s, &labels, 2, 2, 1));
        let mut arcs: Vec<_> = big.graph().arcs().collect();
        arcs.push((0, 7));
        let g = Digraph::from_arcs(9, arcs).unwrap();
        let leaky = Network::new(g, big.refractory().to_vec(), big.threshold().to_vec()).unwrap();
        assert!(!verify_tree_witness(&leaky, &big_s, &labels, 2, 2, 1));

        let mut perturbed = s.0.clone();
        perturbed[6] = 1;
        assert!(!verify_tree_witness(&net, &State::new(perturbed), &labels, 2, 2, 1));

        let mut swapped = labels.clone();
        swapped.swap(1, 2);
        assert!(!verify_tree_witness(&net, &s, &swapped, 2, 2, 1));
    }

    #[test]
    fn union_of_coprime_cycles() {
        let parts: Vec<_> = [3, 5, 7, 11].iter().map(|&l| build_nsc1(l, 1).unwrap()).collect();
        let (net, s) = disjoint_union(&parts);
        assert_eq!(net.node_count(), 26);
        let summary = detect_hashing(&net, &s, &DetectOptions::default()).unwrap();
        assert_eq!((summary.tau, summary.alpha_u64()), (0, Some(1155)));
    }

    #[test]
    fn witness_spec_dispatch() {
        let spec = WitnessSpec::Landau { ks: vec![3, 5] };
        assert_eq!(spec.build().unwrap(), build_landau(&[3, 5]).unwrap());
        let spec = WitnessSpec::Tree { depth: 1, branching: 2, p: 1 };
        assert_eq!(spec.build().unwrap().0.node_count(), 3);
    }
}
