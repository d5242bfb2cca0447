//! Transient and attractor detection.
//!
//! Three exact detectors:
//!
//! * [`detect_hashing`] remembers the first visit time of every state;
//! * [`detect_brent`] keeps only power-of-two snapshots and re-runs the
//!   trajectory to locate the transient;
//! * [`detect_decomposed`] runs one of the above on every upstream-closed
//!   subsystem `UC(K)` of a strongly connected component `K` and combines
//!   `tau = max tau_K`, `alpha = lcm alpha_K`. The state of `UC(K)` evolves
//!   independently of everything else, so this is exact, and `alpha` may be
//!   far beyond what any global search could reach.
//!
//! All three agree whenever none of them is capped. A run is capped exactly
//! when `tau + alpha > step_cap`.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::dynamics::{Network, NetworkError, State, Stepper};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("the trajectory was capped before its attractor was identified")]
    Capped,
    #[error("attractor of length {0} is too long to replay")]
    AttractorTooLong(BigUint),
    #[error("expected exactly one directed cycle, found {0}")]
    NotOneCycle(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectOptions {
    /// Largest `tau + alpha` that may be resolved.
    pub step_cap: u64,
    /// Memory allowed for the visited-state table before switching to
    /// [`detect_brent`].
    pub byte_budget: usize,
    /// Per-node periods are computed when `alpha * n` is at most this.
    pub period_budget: usize,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            step_cap: 10_000_000,
            byte_budget: 512 << 20,
            period_budget: 1 << 24,
        }
    }
}

impl DetectOptions {
    pub fn with_step_cap(step_cap: u64) -> Self {
        DetectOptions {
            step_cap,
            ..Default::default()
        }
    }
}

/// Which strongly connected components [`detect_decomposed`] analyses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Restriction {
    /// Only sink components. Every `UC(i)` lies inside the upstream
    /// component of some sink downstream of `i`, and the dynamics of a
    /// sub-system is a projection of the larger one, so sinks suffice.
    #[default]
    Sinks,
    /// Every component, i.e. the max/lcm over all nodes.
    AllComponents,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecomposeOptions {
    pub per_component: DetectOptions,
    pub restriction: Restriction,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            per_component: DetectOptions::with_step_cap(1_000_000),
            restriction: Restriction::Sinks,
        }
    }
}

/// Transient length, attractor length and per-node periods of one
/// trajectory.
///
/// When `capped` is set, `tau` holds the number of steps explored and
/// `alpha` is zero; neither is a measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicsSummary {
    pub tau: u64,
    pub alpha: BigUint,
    /// Smallest `T` with `s_i(t + T) = s_i(t)` on the attractor, per node.
    pub per_node_period: Option<Vec<u64>>,
    /// Filled in by [`DynamicsSummary::with_min_cycling`].
    pub min_cycling_onset: Option<Vec<Option<u64>>>,
    pub capped: bool,
}

impl DynamicsSummary {
    fn capped_after(steps: u64) -> Self {
        DynamicsSummary {
            tau: steps,
            alpha: BigUint::zero(),
            per_node_period: None,
            min_cycling_onset: None,
            capped: true,
        }
    }

    pub fn alpha_u64(&self) -> Option<u64> {
        self.alpha.to_u64()
    }

    /// Attaches the minimally-cycling onset times of every node.
    pub fn with_min_cycling(mut self, net: &Network, s0: &State) -> Result<Self, AnalysisError> {
        self.min_cycling_onset = Some(classify_min_cycling(net, s0, &self)?);
        Ok(self)
    }
}

/// Exact detection with a table of visited states.
///
/// Falls back to [`detect_brent`] once the table would exceed
/// `opts.byte_budget`.
pub fn detect_hashing(
    net: &Network,
    s0: &State,
    opts: &DetectOptions,
) -> Result<DynamicsSummary, AnalysisError> {
    s0.validate(net)?;
    let n = net.node_count();
    let wide = net.max_refractory() > u8::MAX as u16;
    let entry_bytes = n * if wide { 2 } else { 1 } + 64;
    let mut seen: HashMap<Vec<u8>, u64> = HashMap::new();
    let mut stepper = Stepper::new(net);
    let mut cur = s0.as_slice().to_vec();
    let mut next = vec![0u16; n];
    let mut key = Vec::with_capacity(entry_bytes);
    let mut t: u64 = 0;
    loop {
        State::encode_into(&cur, wide, &mut key);
        if let Some(&first) = seen.get(&key) {
            return Ok(finish(net, s0, first, t - first, opts));
        }
        if t == opts.step_cap {
            return Ok(DynamicsSummary::capped_after(t));
        }
        if (seen.len() + 1).saturating_mul(entry_bytes) > opts.byte_budget {
            return detect_brent(net, s0, opts);
        }
        seen.insert(key.clone(), t);
        stepper.step(&cur, &mut next);
        core::mem::swap(&mut cur, &mut next);
        t += 1;
    }
}

/// Exact detection in constant memory (Brent's power-of-two cycle finder,
/// then a second pass with two pointers `alpha` apart to find `tau`).
pub fn detect_brent(
    net: &Network,
    s0: &State,
    opts: &DetectOptions,
) -> Result<DynamicsSummary, AnalysisError> {
    s0.validate(net)?;
    let n = net.node_count();
    let mut stepper = Stepper::new(net);
    let mut scratch = vec![0u16; n];
    let mut advance = |s: &mut Vec<u16>, stepper: &mut Stepper<'_>| {
        stepper.step(s, &mut scratch);
        core::mem::swap(s, &mut scratch);
    };

    // The first phase ends once the snapshot is on the attractor and the
    // window covers it, after fewer than 3 (tau + alpha) + 2 hare steps.
    let hare_bound = opts.step_cap.saturating_mul(3).saturating_add(3);
    let mut tortoise = s0.as_slice().to_vec();
    let mut hare = tortoise.clone();
    advance(&mut hare, &mut stepper);
    let mut hare_steps: u64 = 1;
    let mut power: u64 = 1;
    let mut lam: u64 = 1;
    while tortoise != hare {
        if power == lam {
            tortoise.clone_from(&hare);
            power *= 2;
            lam = 0;
        }
        advance(&mut hare, &mut stepper);
        hare_steps += 1;
        lam += 1;
        if hare_steps > hare_bound {
            return Ok(DynamicsSummary::capped_after(opts.step_cap));
        }
    }

    tortoise.copy_from_slice(s0.as_slice());
    hare.copy_from_slice(s0.as_slice());
    for _ in 0..lam {
        advance(&mut hare, &mut stepper);
    }
    let mut mu: u64 = 0;
    while tortoise != hare {
        advance(&mut tortoise, &mut stepper);
        advance(&mut hare, &mut stepper);
        mu += 1;
    }
    if mu + lam > opts.step_cap {
        return Ok(DynamicsSummary::capped_after(opts.step_cap));
    }
    Ok(finish(net, s0, mu, lam, opts))
}

fn finish(net: &Network, s0: &State, tau: u64, alpha: u64, opts: &DetectOptions) -> DynamicsSummary {
    let n = net.node_count();
    let fits = (alpha as u128) * (n.max(1) as u128) <= opts.period_budget as u128;
    let per_node_period = fits.then(|| node_periods(net, s0, tau, alpha));
    DynamicsSummary {
        tau,
        alpha: BigUint::from(alpha),
        per_node_period,
        min_cycling_onset: None,
        capped: false,
    }
}

/// Replays the attractor once and reads off every node's minimal period.
fn node_periods(net: &Network, s0: &State, tau: u64, alpha: u64) -> Vec<u64> {
    let n = net.node_count();
    let mut stepper = Stepper::new(net);
    let mut cur = s0.as_slice().to_vec();
    let mut next = vec![0u16; n];
    for _ in 0..tau {
        stepper.step(&cur, &mut next);
        core::mem::swap(&mut cur, &mut next);
    }
    let len = alpha as usize;
    let mut columns = vec![Vec::with_capacity(len); n];
    for _ in 0..len {
        for (col, &v) in columns.iter_mut().zip(&cur) {
            col.push(v);
        }
        stepper.step(&cur, &mut next);
        core::mem::swap(&mut cur, &mut next);
    }
    columns.iter().map(|c| cyclic_period(c)).collect()
}

/// Smallest `d` dividing `seq.len()` with `seq` a repetition of its first
/// `d` entries, via the prefix function.
fn cyclic_period(seq: &[u16]) -> u64 {
    let len = seq.len();
    let mut pi = vec![0usize; len];
    for i in 1..len {
        let mut k = pi[i - 1];
        while k > 0 && seq[i] != seq[k] {
            k = pi[k - 1];
        }
        if seq[i] == seq[k] {
            k += 1;
        }
        pi[i] = k;
    }
    let candidate = len - pi.last().copied().unwrap_or(0);
    if len % candidate == 0 {
        candidate as u64
    } else {
        len as u64
    }
}

/// The internal dynamics of one upstream-closed subsystem `UC(K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDynamics {
    /// The strongly connected component `K`.
    pub component: Vec<usize>,
    /// `UC(K)`, sorted.
    pub upstream: Vec<usize>,
    pub summary: DynamicsSummary,
}

/// Runs [`detect_hashing`] on `UC(K)` for the components selected by
/// `opts.restriction`.
pub fn decompose(
    net: &Network,
    s0: &State,
    opts: &DecomposeOptions,
) -> Result<Vec<ComponentDynamics>, AnalysisError> {
    s0.validate(net)?;
    let info = net.graph().condense();
    let mut out = Vec::new();
    for (k, members) in info.scc_members.iter().enumerate() {
        if opts.restriction == Restriction::Sinks && !info.is_sink_scc[k] {
            continue;
        }
        let upstream = net
            .graph()
            .upstream(members[0])
            .expect("component members are valid nodes");
        let (sub, sub_state) = net.restrict(&upstream, s0);
        let summary = detect_hashing(&sub, &sub_state, &opts.per_component)?;
        out.push(ComponentDynamics {
            component: members.clone(),
            upstream,
            summary,
        });
    }
    Ok(out)
}

/// `tau = max tau_K` and `alpha = lcm alpha_K` over upstream-closed
/// subsystems, with arbitrary-precision `alpha`.
pub fn detect_decomposed(
    net: &Network,
    s0: &State,
    opts: &DecomposeOptions,
) -> Result<DynamicsSummary, AnalysisError> {
    let parts = decompose(net, s0, opts)?;
    Ok(combine(net.node_count(), &parts))
}

fn combine(n: usize, parts: &[ComponentDynamics]) -> DynamicsSummary {
    if let Some(capped) = parts.iter().find(|p| p.summary.capped) {
        return DynamicsSummary::capped_after(capped.summary.tau);
    }
    let tau = parts.iter().map(|p| p.summary.tau).max().unwrap_or(0);
    let alpha = parts
        .iter()
        .fold(BigUint::one(), |acc, p| acc.lcm(&p.summary.alpha));
    let mut periods: Vec<Option<u64>> = vec![None; n];
    for part in parts {
        if let Some(local) = &part.summary.per_node_period {
            for (&node, &period) in part.upstream.iter().zip(local) {
                periods[node].get_or_insert(period);
            }
        }
    }
    let per_node_period = periods.into_iter().collect::<Option<Vec<u64>>>();
    DynamicsSummary {
        tau,
        alpha,
        per_node_period,
        min_cycling_onset: None,
        capped: false,
    }
}

/// For every node, the time from which it never stalls, where a stall at
/// `t` means `s_i(t) = s_i(t + 1) = p_i`; `None` when it keeps stalling on
/// the attractor.
pub fn classify_min_cycling(
    net: &Network,
    s0: &State,
    summary: &DynamicsSummary,
) -> Result<Vec<Option<u64>>, AnalysisError> {
    s0.validate(net)?;
    if summary.capped {
        return Err(AnalysisError::Capped);
    }
    let alpha = summary
        .alpha_u64()
        .ok_or_else(|| AnalysisError::AttractorTooLong(summary.alpha.clone()))?;
    let n = net.node_count();
    let p = net.refractory();
    let mut stepper = Stepper::new(net);
    let mut cur = s0.as_slice().to_vec();
    let mut next = vec![0u16; n];
    let mut last_stall: Vec<Option<u64>> = vec![None; n];
    let mut stalls_on_attractor = vec![false; n];
    for t in 0..summary.tau + alpha {
        stepper.step(&cur, &mut next);
        for i in 0..n {
            if cur[i] == p[i] && next[i] == p[i] {
                if t < summary.tau {
                    last_stall[i] = Some(t);
                } else {
                    stalls_on_attractor[i] = true;
                }
            }
        }
        core::mem::swap(&mut cur, &mut next);
    }
    Ok((0..n)
        .map(|i| (!stalls_on_attractor[i]).then(|| last_stall[i].map_or(0, |t| t + 1)))
        .collect())
}

/// Which single-cycle bounds a measured trajectory satisfies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneCycleVerdict {
    pub cycle_len: usize,
    /// `gcd(alpha, |C|) > 1`; `None` when `alpha = 1`.
    pub gcd_condition: Option<bool>,
    /// `2 L_max + ((p* + 1)^p* + 1)|C| + 4 p* - 3`; `None` unless the
    /// digraph is supersimple.
    pub tau_bound: Option<u128>,
    pub tau_bound_holds: Option<bool>,
}

impl OneCycleVerdict {
    pub fn holds(&self) -> bool {
        self.gcd_condition != Some(false) && self.tau_bound_holds != Some(false)
    }
}

/// Checks the attractor/cycle gcd condition and, on supersimple digraphs,
/// the transient bound for a network with exactly one directed cycle.
pub fn check_one_cycle_bounds(
    net: &Network,
    summary: &DynamicsSummary,
) -> Result<OneCycleVerdict, AnalysisError> {
    let graph = net.graph();
    let cycle = match graph.cycle_count_at_most_two() {
        (1, Some(c)) => c,
        (0, _) => return Err(AnalysisError::NotOneCycle("none")),
        _ => return Err(AnalysisError::NotOneCycle("more than one")),
    };
    if summary.capped {
        return Err(AnalysisError::Capped);
    }
    let len = cycle.len();
    let gcd_condition = (!summary.alpha.is_one())
        .then(|| summary.alpha.gcd(&BigUint::from(len)) > BigUint::one());
    let (tau_bound, tau_bound_holds) = if graph.is_supersimple() {
        let l_max = graph
            .longest_path(0)
            .expect("longest path is exact with one cycle") as u128;
        let p = net.max_refractory() as u32;
        let growth = (p as u128 + 1).saturating_pow(p);
        let bound = (2 * l_max)
            .saturating_add(growth.saturating_add(1).saturating_mul(len as u128))
            .saturating_add(4 * p as u128)
            .saturating_sub(3);
        (Some(bound), Some(summary.tau as u128 <= bound))
    } else {
        (None, None)
    };
    Ok(OneCycleVerdict {
        cycle_len: len,
        gcd_condition,
        tau_bound,
        tau_bound_holds,
    })
}
