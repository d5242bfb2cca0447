//! Networks, states and the synchronous update rule.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::digraph::Digraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("expected {expected} per-node values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("refractory period of node {0} must be at least 1")]
    ZeroRefractory(usize),
    #[error("threshold of node {0} must be at least 1")]
    ZeroThreshold(usize),
    #[error("state of node {node} is {value}, above its refractory period {max}")]
    StateOutOfRange { node: usize, value: u16, max: u16 },
    #[error("invalid sampling bounds [{lo}, {hi}]")]
    InvalidBounds { lo: u32, hi: u32 },
}

/// A digraph with a refractory period and a firing threshold per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    graph: Digraph,
    refractory: Vec<u16>,
    threshold: Vec<u32>,
}

impl Network {
    pub fn new(graph: Digraph, refractory: Vec<u16>, threshold: Vec<u32>) -> Result<Self, NetworkError> {
        let n = graph.node_count();
        for got in [refractory.len(), threshold.len()] {
            if got != n {
                return Err(NetworkError::LengthMismatch { expected: n, got });
            }
        }
        if let Some(i) = refractory.iter().position(|&p| p == 0) {
            return Err(NetworkError::ZeroRefractory(i));
        }
        if let Some(i) = threshold.iter().position(|&t| t == 0) {
            return Err(NetworkError::ZeroThreshold(i));
        }
        Ok(Network {
            graph,
            refractory,
            threshold,
        })
    }

    /// Every node gets refractory period `p` and threshold `th`.
    pub fn uniform(graph: Digraph, p: u16, th: u32) -> Result<Self, NetworkError> {
        let n = graph.node_count();
        Network::new(graph, vec![p; n], vec![th; n])
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn refractory(&self) -> &[u16] {
        &self.refractory
    }

    pub fn threshold(&self) -> &[u32] {
        &self.threshold
    }

    /// `p_*`, or 0 for the empty network.
    pub fn min_refractory(&self) -> u16 {
        self.refractory.iter().copied().min().unwrap_or(0)
    }

    /// `p^*`, or 0 for the empty network.
    pub fn max_refractory(&self) -> u16 {
        self.refractory.iter().copied().max().unwrap_or(0)
    }

    /// The unique steady state: every node at the end of its refractory
    /// period.
    pub fn steady_state(&self) -> State {
        State(self.refractory.clone())
    }

    /// The subnetwork on `nodes` (sorted, distinct), together with the
    /// restriction of `state` to it.
    pub fn restrict(&self, nodes: &[usize], state: &State) -> (Network, State) {
        let graph = self.graph.induced(nodes);
        let refractory = nodes.iter().map(|&v| self.refractory[v]).collect();
        let threshold = nodes.iter().map(|&v| self.threshold[v]).collect();
        let sub_state = State(nodes.iter().map(|&v| state.0[v]).collect());
        (
            Network {
                graph,
                refractory,
                threshold,
            },
            sub_state,
        )
    }

    /// One synchronous update of every node.
    pub fn step(&self, state: &State) -> Result<State, NetworkError> {
        state.validate(self)?;
        let mut next = State(vec![0; self.node_count()]);
        Stepper::new(self).step(&state.0, &mut next.0);
        Ok(next)
    }

    /// The trajectory `[s0, step(s0), ...]` of length `t_max + 1`.
    pub fn simulate(&self, s0: &State, t_max: usize) -> Result<Vec<State>, NetworkError> {
        s0.validate(self)?;
        let mut stepper = Stepper::new(self);
        let mut out = Vec::with_capacity(t_max + 1);
        out.push(s0.clone());
        for _ in 0..t_max {
            let mut next = vec![0; self.node_count()];
            stepper.step(&out.last().expect("trajectory is never empty").0, &mut next);
            out.push(State(next));
        }
        Ok(out)
    }
}

/// Reusable scratch space for repeated unchecked updates.
#[derive(Debug)]
pub(crate) struct Stepper<'a> {
    net: &'a Network,
    inputs: Vec<u32>,
    firing: Vec<usize>,
}

impl<'a> Stepper<'a> {
    pub(crate) fn new(net: &'a Network) -> Self {
        Stepper {
            net,
            inputs: vec![0; net.node_count()],
            firing: Vec::new(),
        }
    }

    /// Writes the successor of `cur` into `next`. The firing set is collected
    /// before anything changes, so the update order is irrelevant.
    pub(crate) fn step(&mut self, cur: &[u16], next: &mut [u16]) {
        let net = self.net;
        self.firing.clear();
        self.firing
            .extend(cur.iter().enumerate().filter(|(_, &s)| s == 0).map(|(j, _)| j));
        for &j in &self.firing {
            for &i in net.graph.out_neighbors(j) {
                self.inputs[i] += 1;
            }
        }
        for (i, out) in next.iter_mut().enumerate() {
            let p = net.refractory[i];
            *out = if cur[i] < p {
                cur[i] + 1
            } else if self.inputs[i] >= net.threshold[i] {
                0
            } else {
                p
            };
        }
        for &j in &self.firing {
            for &i in net.graph.out_neighbors(j) {
                self.inputs[i] = 0;
            }
        }
    }
}

/// A network state: `s_i ∈ 0..=p_i`, where `0` means node `i` fires.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(pub Vec<u16>);

impl State {
    pub fn new(values: Vec<u16>) -> Self {
        State(values)
    }

    pub fn as_slice(&self) -> &[u16] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, net: &Network) -> Result<(), NetworkError> {
        if self.0.len() != net.node_count() {
            return Err(NetworkError::LengthMismatch {
                expected: net.node_count(),
                got: self.0.len(),
            });
        }
        for (node, (&value, &max)) in self.0.iter().zip(&net.refractory).enumerate() {
            if value > max {
                return Err(NetworkError::StateOutOfRange { node, value, max });
            }
        }
        Ok(())
    }

    /// Canonical byte encoding: one byte per node when every value fits in
    /// a byte (`wide == false`), two little-endian bytes per node otherwise.
    pub fn encode_into(values: &[u16], wide: bool, buf: &mut Vec<u8>) {
        buf.clear();
        if wide {
            buf.extend(values.iter().flat_map(|v| v.to_le_bytes()));
        } else {
            buf.extend(values.iter().map(|&v| v as u8));
        }
    }
}

/// Draws `p_i` uniformly from `p_lo..=p_hi` and then `th_i` uniformly from
/// `th_lo..=th_hi`, independently for every node, in node order.
pub fn random_network<R: Rng + ?Sized>(
    graph: Digraph,
    (p_lo, p_hi): (u16, u16),
    (th_lo, th_hi): (u32, u32),
    rng: &mut R,
) -> Result<Network, NetworkError> {
    if p_lo == 0 || p_lo > p_hi {
        return Err(NetworkError::InvalidBounds {
            lo: p_lo.into(),
            hi: p_hi.into(),
        });
    }
    if th_lo == 0 || th_lo > th_hi {
        return Err(NetworkError::InvalidBounds { lo: th_lo, hi: th_hi });
    }
    let n = graph.node_count();
    let refractory = (0..n).map(|_| rng.gen_range(p_lo..=p_hi)).collect();
    let threshold = (0..n).map(|_| rng.gen_range(th_lo..=th_hi)).collect();
    Network::new(graph, refractory, threshold)
}

/// Draws every `s_i` uniformly from `0..=p_i`.
pub fn random_state<R: Rng + ?Sized>(net: &Network, rng: &mut R) -> State {
    State(net.refractory.iter().map(|&p| rng.gen_range(0..=p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Two-cycle 0 <-> 1 feeding node 2, with p = (1, 1, 2) and unit
    /// thresholds.
    fn slow_tail() -> Network {
        let g = Digraph::from_arcs(3, [(0, 1), (1, 0), (0, 2)]).unwrap();
        Network::new(g, vec![1, 1, 2], vec![1, 1, 1]).unwrap()
    }

    #[test]
    fn two_cycle_with_slow_tail_step_and_trajectory() {
        let net = slow_tail();
        let s0 = State::new(vec![0, 1, 1]);
        assert_eq!(net.step(&s0).unwrap(), State::new(vec![1, 0, 2]));
        let traj = net.simulate(&s0, 4).unwrap();
        let expected: Vec<State> = [[0, 1, 1], [1, 0, 2], [0, 1, 2], [1, 0, 0], [0, 1, 1]]
            .iter()
            .map(|s| State::new(s.to_vec()))
            .collect();
        assert_eq!(traj, expected);
    }

    #[test]
    fn steady_state_is_fixed() {
        let net = slow_tail();
        let p = net.steady_state();
        assert_eq!(net.step(&p).unwrap(), p);
        assert_eq!(net.simulate(&p, 3).unwrap(), vec![p.clone(); 4]);
    }

    #[test]
    fn isolated_node_advances() {
        let net = Network::uniform(Digraph::empty(1), 2, 1).unwrap();
        assert_eq!(net.step(&State::new(vec![0])).unwrap(), State::new(vec![1]));
    }

    #[test]
    fn two_cycle_ping_pong() {
        let g = Digraph::from_arcs(2, [(0, 1), (1, 0)]).unwrap();
        let net = Network::uniform(g, 1, 1).unwrap();
        let traj = net.simulate(&State::new(vec![0, 1]), 3).unwrap();
        let values: Vec<_> = traj.iter().map(|s| s.as_slice().to_vec()).collect();
        assert_eq!(values, vec![vec![0, 1], vec![1, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn threshold_counts_distinct_firing_inputs() {
        let g = Digraph::from_arcs(3, [(0, 2), (1, 2)]).unwrap();
        let net = Network::new(g, vec![1, 1, 1], vec![1, 1, 2]).unwrap();
        assert_eq!(net.step(&State::new(vec![0, 1, 1])).unwrap().as_slice(), &[1, 1, 1]);
        assert_eq!(net.step(&State::new(vec![0, 0, 1])).unwrap().as_slice(), &[1, 1, 0]);
    }

    #[test]
    fn validation() {
        let g = Digraph::empty(2);
        assert_eq!(
            Network::new(g.clone(), vec![1], vec![1, 1]),
            Err(NetworkError::LengthMismatch { expected: 2, got: 1 })
        );
        assert_eq!(
            Network::new(g.clone(), vec![1, 0], vec![1, 1]),
            Err(NetworkError::ZeroRefractory(1))
        );
        assert_eq!(
            Network::new(g.clone(), vec![1, 1], vec![0, 1]),
            Err(NetworkError::ZeroThreshold(0))
        );
        let net = Network::uniform(g, 1, 1).unwrap();
        assert!(matches!(
            net.step(&State::new(vec![0, 2])),
            Err(NetworkError::StateOutOfRange { node: 1, .. })
        ));
    }

    #[test]
    fn degenerate_sampling_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let net = random_network(Digraph::empty(6), (1, 1), (1, 1), &mut rng).unwrap();
        assert!(net.refractory().iter().all(|&p| p == 1));
        assert!(net.threshold().iter().all(|&t| t == 1));
        assert!(random_network(Digraph::empty(2), (2, 1), (1, 1), &mut rng).is_err());
        assert!(random_network(Digraph::empty(2), (1, 1), (0, 1), &mut rng).is_err());
    }

    #[test]
    fn uniform_refractory_frequencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let net = random_network(Digraph::empty(30_000), (1, 3), (1, 1), &mut rng).unwrap();
        let draws = 30_000.0;
        let sd = libm::sqrt(draws * (1.0 / 3.0) * (2.0 / 3.0));
        for v in 1..=3u16 {
            let count = net.refractory().iter().filter(|&&p| p == v).count() as f64;
            assert!((count - draws / 3.0).abs() < 3.0 * sd, "value {v}: {count}");
        }
    }

    #[test]
    fn random_state_is_fair_and_seeded() {
        let net = Network::uniform(Digraph::empty(10_000), 1, 1).unwrap();
        let s = random_state(&net, &mut ChaCha8Rng::seed_from_u64(2));
        assert_eq!(s, random_state(&net, &mut ChaCha8Rng::seed_from_u64(2)));
        s.validate(&net).unwrap();
        // chi-square with one degree of freedom, 99.9% quantile 10.83
        let zeros = s.as_slice().iter().filter(|&&v| v == 0).count() as f64;
        let ones = 10_000.0 - zeros;
        let chi2 = ((zeros - 5000.0).powi(2) + (ones - 5000.0).powi(2)) / 5000.0;
        assert!(chi2 < 10.83, "chi2 = {chi2}");
    }

    #[test]
    fn encoding_width() {
        let mut buf = Vec::new();
        State::encode_into(&[1, 2, 3], false, &mut buf);
        assert_eq!(buf, vec![1, 2, 3]);
        State::encode_into(&[1, 300], true, &mut buf);
        assert_eq!(buf, vec![1, 0, 44, 1]);
    }
}
