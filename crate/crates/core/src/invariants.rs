//! Executable structural facts about trajectories.
//!
//! Each check returns the list of violations it found; an empty list means
//! the property held. Checks that need a trajectory replay it from `s0` up
//! to `tau + alpha`, after which every transition has been seen.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::analysis::{
    check_one_cycle_bounds, decompose, detect_brent, detect_hashing, AnalysisError,
    DecomposeOptions, DetectOptions, DynamicsSummary, Restriction,
};
use crate::constructions::WitnessSpec;
use crate::dynamics::{Network, State};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A non-trivial attractor shorter than `p_* + 1`.
    AttractorTooShort { alpha: u64, min_refractory: u16 },
    /// The restriction to an upstream-closed set diverged from the
    /// projection of the full trajectory.
    UpstreamDependence { component: Vec<usize>, time: u64 },
    /// An acyclic upstream subsystem did not settle to the steady state.
    AcyclicNotSteady { node: usize, alpha: u64 },
    /// An acyclic upstream subsystem took longer than `L_max(i) + p*`.
    AcyclicTransient { node: usize, tau: u64, bound: u64 },
    /// A cycle with `p = th = 1` lost its mixed 0/1 pattern.
    MixedCycleLost { cycle: Vec<usize>, time: u64 },
    /// Node `target` stalled more than `p_source` times while `source`
    /// fired without interruption on `[start, end)`.
    TooManyStalls { source: usize, target: usize, start: u64, end: u64, stalls: u64 },
    PeriodNotDividing { node: usize, period: u64, alpha: BigUint },
    PeriodLcmMismatch { lcm: BigUint, alpha: BigUint },
    DetectorDisagreement { detector: &'static str, tau: u64, alpha: BigUint },
    OneCycleBound { gcd_condition: Option<bool>, tau_bound_holds: Option<bool> },
    /// A constructed network missed its advertised behaviour.
    Construction { spec: WitnessSpec, claim: &'static str, tau: u64, alpha: BigUint },
}

/// Budget for cycle enumeration in [`check_mixed_cycles`].
pub const CYCLE_CHECK_LIMIT: usize = 10_000;

/// The trajectory `s(0), ..., s(tau + alpha)`, which closes the attractor.
fn replay(net: &Network, s0: &State, summary: &DynamicsSummary) -> Result<Vec<State>, AnalysisError> {
    if summary.capped {
        return Err(AnalysisError::Capped);
    }
    let alpha = summary
        .alpha_u64()
        .ok_or_else(|| AnalysisError::AttractorTooLong(summary.alpha.clone()))?;
    let len = usize::try_from(summary.tau + alpha)
        .map_err(|_| AnalysisError::AttractorTooLong(summary.alpha.clone()))?;
    Ok(net.simulate(s0, len)?)
}

/// Every attractor other than the steady state has length at least
/// `p_* + 1`.
pub fn check_attractor_length(net: &Network, summary: &DynamicsSummary) -> Vec<Violation> {
    let min_refractory = net.min_refractory();
    match summary.alpha_u64() {
        Some(alpha) if !summary.capped && alpha > 1 && alpha < min_refractory as u64 + 1 => {
            vec![Violation::AttractorTooShort {
                alpha,
                min_refractory,
            }]
        }
        _ => Vec::new(),
    }
}

/// The state of `UC(K)` evolves on its own: for every strongly connected
/// component `K`, simulating the restriction to `UC(K)` reproduces the
/// projection of `trajectory`.
pub fn check_upstream_determinism(net: &Network, trajectory: &[State]) -> Vec<Violation> {
    let Some(s0) = trajectory.first() else {
        return Vec::new();
    };
    let steps = trajectory.len() - 1;
    let info = net.graph().condense();
    let mut out = Vec::new();
    for members in &info.scc_members {
        let upstream = net
            .graph()
            .upstream(members[0])
            .expect("component members are valid nodes");
        let (sub, sub_s0) = net.restrict(&upstream, s0);
        let sub_traj = sub.simulate(&sub_s0, steps).expect("restricted state is valid");
        let diverged = sub_traj.iter().zip(trajectory).position(|(local, global)| {
            upstream
                .iter()
                .zip(local.as_slice())
                .any(|(&v, &x)| global.as_slice()[v] != x)
        });
        if let Some(time) = diverged {
            out.push(Violation::UpstreamDependence {
                component: members.clone(),
                time: time as u64,
            });
        }
    }
    out
}

/// When `UC(i)` is acyclic, its restriction reaches the steady state within
/// `L_max(i) + p*` steps, where `p*` is taken over `UC(i)`.
pub fn check_acyclic_transients(net: &Network, s0: &State) -> Result<Vec<Violation>, AnalysisError> {
    s0.validate(net)?;
    let graph = net.graph();
    let info = graph.condense();
    let mut out = Vec::new();
    for (k, members) in info.scc_members.iter().enumerate() {
        if info.is_cyclic_scc[k] {
            continue;
        }
        let node = members[0];
        let upstream = graph.upstream(node).expect("component members are valid nodes");
        let (sub, sub_s0) = net.restrict(&upstream, s0);
        let Some(order) = sub.graph().topological_order() else {
            continue;
        };
        let l_max = longest_in(&sub, &order);
        let bound = l_max + sub.max_refractory() as u64;
        let summary = detect_hashing(&sub, &sub_s0, &DetectOptions::with_step_cap(bound + 1))?;
        if summary.capped {
            out.push(Violation::AcyclicTransient {
                node,
                tau: summary.tau,
                bound,
            });
            continue;
        }
        let alpha = summary.alpha_u64().expect("uncapped attractor is short");
        if alpha != 1 {
            out.push(Violation::AcyclicNotSteady { node, alpha });
        }
        if summary.tau > bound {
            out.push(Violation::AcyclicTransient {
                node,
                tau: summary.tau,
                bound,
            });
        }
    }
    Ok(out)
}

fn longest_in(net: &Network, order: &[usize]) -> u64 {
    let g = net.graph();
    let mut depth = vec![0u64; g.node_count()];
    for &v in order {
        for &w in g.out_neighbors(v) {
            depth[w] = depth[w].max(depth[v] + 1);
        }
    }
    depth.into_iter().max().unwrap_or(0)
}

/// On a cycle whose nodes all have `p = th = 1`, a state with both a 0
/// and a 1 on the cycle stays that way. Examines at most
/// [`CYCLE_CHECK_LIMIT`] cycles.
pub fn check_mixed_cycles(net: &Network, trajectory: &[State]) -> Vec<Violation> {
    let unit = |v: usize| net.refractory()[v] == 1 && net.threshold()[v] == 1;
    let found = net
        .graph()
        .enumerate_cycles(net.node_count(), CYCLE_CHECK_LIMIT);
    let mixed = |s: &State, cycle: &[usize]| {
        let values = s.as_slice();
        cycle.iter().any(|&v| values[v] == 0) && cycle.iter().any(|&v| values[v] == 1)
    };
    let mut out = Vec::new();
    for cycle in found.cycles.iter().filter(|c| c.iter().all(|&v| unit(v))) {
        if let Some(t) = trajectory
            .windows(2)
            .position(|w| mixed(&w[0], cycle) && !mixed(&w[1], cycle))
        {
            out.push(Violation::MixedCycleLost {
                cycle: cycle.clone(),
                time: t as u64 + 1,
            });
        }
    }
    out
}

/// Along an arc `j -> i` with `th_i = 1` and `(p_j + 1) | (p_i + 1)`: if
/// `j` never stalls on `[t0, t1)`, then `i` stalls at most `p_j` times on
/// `[t0 + 1, t1 + 1)`. Stalls are `s(t) = s(t + 1) = p`, so the last state
/// of `trajectory` only closes the final stall window.
pub fn check_stall_bound(net: &Network, trajectory: &[State]) -> Vec<Violation> {
    let horizon = trajectory.len().saturating_sub(1);
    let p = net.refractory();
    let stalls = |v: usize| -> Vec<bool> {
        (0..horizon)
            .map(|t| trajectory[t].as_slice()[v] == p[v] && trajectory[t + 1].as_slice()[v] == p[v])
            .collect()
    };
    let mut out = Vec::new();
    for (j, i) in net.graph().arcs() {
        if net.threshold()[i] != 1 || (p[i] as u32 + 1) % (p[j] as u32 + 1) != 0 {
            continue;
        }
        let stall_j = stalls(j);
        let stall_i = stalls(i);
        let mut t0 = 0;
        while t0 < horizon {
            if stall_j[t0] {
                t0 += 1;
                continue;
            }
            let t1 = (t0..horizon).find(|&t| stall_j[t]).unwrap_or(horizon);
            let count = (t0 + 1..(t1 + 1).min(horizon))
                .filter(|&t| stall_i[t])
                .count() as u64;
            if count > p[j] as u64 {
                out.push(Violation::TooManyStalls {
                    source: j,
                    target: i,
                    start: t0 as u64,
                    end: t1 as u64,
                    stalls: count,
                });
            }
            t0 = t1;
        }
    }
    out
}

/// Every node period divides `alpha`, and their lcm is `alpha`, both over
/// all nodes and over the nodes downstream of a cycle.
pub fn check_periods(net: &Network, summary: &DynamicsSummary) -> Vec<Violation> {
    let Some(periods) = &summary.per_node_period else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (node, &period) in periods.iter().enumerate() {
        if !summary.alpha.is_multiple_of(&BigUint::from(period)) {
            out.push(Violation::PeriodNotDividing {
                node,
                period,
                alpha: summary.alpha.clone(),
            });
        }
    }
    let lcm_over = |nodes: &mut dyn Iterator<Item = usize>| {
        nodes.fold(BigUint::one(), |acc, v| acc.lcm(&BigUint::from(periods[v])))
    };
    let all = lcm_over(&mut (0..periods.len()));
    let cycu = lcm_over(&mut net.graph().condense().cycu.into_iter());
    for lcm in [all, cycu] {
        if lcm != summary.alpha {
            out.push(Violation::PeriodLcmMismatch {
                lcm,
                alpha: summary.alpha.clone(),
            });
        }
    }
    out
}

/// Brent, component-wise (sinks and all components) and hashing detection
/// agree with `reference`.
pub fn check_detector_agreement(
    net: &Network,
    s0: &State,
    reference: &DynamicsSummary,
    opts: &DetectOptions,
) -> Result<Vec<Violation>, AnalysisError> {
    let mut out = Vec::new();
    let mut compare = |detector: &'static str, other: DynamicsSummary| {
        if other.capped || other.tau != reference.tau || other.alpha != reference.alpha {
            out.push(Violation::DetectorDisagreement {
                detector,
                tau: other.tau,
                alpha: other.alpha,
            });
        }
    };
    compare("brent", detect_brent(net, s0, opts)?);
    compare("hashing", detect_hashing(net, s0, opts)?);
    for (detector, restriction) in [
        ("decomposed-sinks", Restriction::Sinks),
        ("decomposed-all", Restriction::AllComponents),
    ] {
        let dopts = DecomposeOptions {
            per_component: *opts,
            restriction,
        };
        let parts = decompose(net, s0, &dopts)?;
        let tau = parts.iter().map(|p| p.summary.tau).max().unwrap_or(0);
        let alpha = parts
            .iter()
            .fold(BigUint::one(), |acc, p| acc.lcm(&p.summary.alpha));
        let capped = parts.iter().any(|p| p.summary.capped);
        compare(
            detector,
            DynamicsSummary {
                tau,
                alpha,
                per_node_period: None,
                min_cycling_onset: None,
                capped,
            },
        );
    }
    Ok(out)
}

/// Runs every trajectory check on one instance. Fails with
/// [`AnalysisError::Capped`] when the trajectory cannot be resolved within
/// `opts.step_cap`.
pub fn check_all(
    net: &Network,
    s0: &State,
    opts: &DetectOptions,
) -> Result<Vec<Violation>, AnalysisError> {
    let summary = detect_hashing(net, s0, opts)?;
    let trajectory = replay(net, s0, &summary)?;
    let mut out = check_attractor_length(net, &summary);
    out.extend(check_upstream_determinism(net, &trajectory));
    out.extend(check_acyclic_transients(net, s0)?);
    out.extend(check_mixed_cycles(net, &trajectory));
    out.extend(check_stall_bound(net, &trajectory));
    out.extend(check_periods(net, &summary));
    out.extend(check_detector_agreement(net, s0, &summary, opts)?);
    if net.graph().cycle_count_at_most_two().0 == 1 {
        let verdict = check_one_cycle_bounds(net, &summary)?;
        if !verdict.holds() {
            out.push(Violation::OneCycleBound {
                gcd_condition: verdict.gcd_condition,
                tau_bound_holds: verdict.tau_bound_holds,
            });
        }
    }
    Ok(out)
}

/// Builds `spec`, detects its dynamics and checks the behaviour the
/// construction is meant to force:
///
/// * NSC: `alpha > 1`;
/// * NSC with a single pulse: `len | alpha`;
/// * NSC with a staircase: `(p + 1) | alpha`;
/// * Landau: `tau = lcm(ks)` and `lcm(ks) | alpha`;
/// * tree witness: `d + 1 <= tau <= d + p`.
pub fn check_construction(
    spec: &WitnessSpec,
    opts: &DetectOptions,
) -> Result<(DynamicsSummary, Vec<Violation>), crate::constructions::ConstructionError> {
    let (net, s0) = spec.build()?;
    let summary = detect_hashing(&net, &s0, opts).expect("constructions produce valid states");
    let mut claims: Vec<(&'static str, bool)> = Vec::new();
    let alpha = &summary.alpha;
    let divides = |m: usize| alpha.is_multiple_of(&BigUint::from(m));
    if summary.capped {
        claims.push(("resolved within the step cap", false));
    } else {
        match spec {
            WitnessSpec::Nsc { .. } => claims.push(("alpha > 1", !alpha.is_one())),
            WitnessSpec::Nsc1 { len, .. } => claims.push(("len divides alpha", divides(*len))),
            WitnessSpec::NscP { p, .. } => {
                claims.push(("p + 1 divides alpha", divides(*p as usize + 1)))
            }
            WitnessSpec::Landau { ks } => {
                let lcm = ks.iter().fold(1usize, |acc, &k| acc.lcm(&k));
                claims.push(("tau = lcm(ks)", summary.tau.to_usize() == Some(lcm)));
                claims.push(("lcm(ks) divides alpha", divides(lcm)));
            }
            WitnessSpec::Tree { depth, p, .. } => {
                let d = *depth as u64;
                claims.push(("tau >= d + 1", summary.tau > d));
                claims.push(("tau <= d + p", summary.tau <= d + *p as u64));
            }
        }
    }
    let violations = claims
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(claim, _)| Violation::Construction {
            spec: spec.clone(),
            claim,
            tau: summary.tau,
            alpha: summary.alpha.clone(),
        })
        .collect();
    Ok((summary, violations))
}
