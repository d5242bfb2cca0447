//! Named invariant suites with fixed seeds.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refnet_core::constructions::{
    build_tree_witness, disjoint_union, tree_witness_labeling, verify_tree_witness, WitnessSpec,
};
use refnet_core::invariants::{check_all, check_construction, Violation};
use refnet_core::{
    detect_decomposed, gen_erdos_renyi, random_network, random_state, DecomposeOptions,
    DetectOptions, Network, State,
};

use crate::experiments::{cell_seed, estimate_graph_laws, rho_of_c};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Props,
    Nsc,
    Landau,
    Tree,
    Laws,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Props, Suite::Nsc, Suite::Landau, Suite::Tree, Suite::Laws];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Props => "props",
            Suite::Nsc => "nsc",
            Suite::Landau => "landau",
            Suite::Tree => "tree",
            Suite::Laws => "laws",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}` (expected props, nsc, landau, tree or laws)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(label: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome {
            label: label.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{mark} {}: {} -- {}", self.suite, c.label, c.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub fuzz_cases: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 20_240_601,
            fuzz_cases: 10_000,
        }
    }
}

/// A small random instance: `n` in `1..=12`, mean degree in `[0.5, 2]`,
/// `p* <= 2`, `th* <= 2`.
pub fn fuzz_instance(seed: u64) -> (Network, State) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=12usize);
    let c = rng.gen_range(0.5..=2.0f64);
    let p_hi = rng.gen_range(1..=2u16);
    let th_hi = rng.gen_range(1..=2u32);
    let g = gen_erdos_renyi(n, (c / n as f64).min(1.0), &mut rng).expect("probability in range");
    let net = random_network(g, (1, p_hi), (1, th_hi), &mut rng).expect("valid bounds");
    let s0 = random_state(&net, &mut rng);
    (net, s0)
}

/// Every construction with the parameters the suites cover.
pub fn witness_catalogue() -> Vec<WitnessSpec> {
    let mut out = Vec::new();
    out.extend((2..=8).map(|len| WitnessSpec::Nsc { len }));
    for len in 2..=8usize {
        for p in 1..len as u16 {
            out.push(WitnessSpec::Nsc1 { len, p });
        }
    }
    for len in 2..=12usize {
        for p in 1..len as u16 {
            if len % (p as usize + 1) == 0 {
                out.push(WitnessSpec::NscP { len, p });
            }
        }
    }
    out.extend(landau_sets().into_iter().map(|ks| WitnessSpec::Landau { ks }));
    for depth in 1..=4 {
        for branching in [2, 3] {
            for p in [1, 2] {
                out.push(WitnessSpec::Tree { depth, branching, p });
            }
        }
    }
    out
}

/// Non-empty subsets of `{3, 5, 7}`, all of total size at most 17.
pub fn landau_sets() -> Vec<Vec<usize>> {
    let base = [3usize, 5, 7];
    (1..8u32)
        .map(|mask| {
            base.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &k)| k)
                .collect::<Vec<_>>()
        })
        .filter(|ks| ks.iter().sum::<usize>() <= 17)
        .collect()
}

fn summarize(violations: &[Violation]) -> String {
    match violations.first() {
        None => "no violations".to_string(),
        Some(first) => format!("{} violations, first: {first:?}", violations.len()),
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> SuiteReport {
    let checks = match suite {
        Suite::Props => props(opts),
        Suite::Nsc => nsc(),
        Suite::Landau => landau(),
        Suite::Tree => tree(opts),
        Suite::Laws => laws(opts),
    };
    SuiteReport { suite, checks }
}

fn props(opts: &VerifyOptions) -> Vec<CheckOutcome> {
    let detect = DetectOptions::default();
    let mut violations = Vec::new();
    let mut unresolved = 0;
    for case in 0..opts.fuzz_cases {
        let (net, s0) = fuzz_instance(cell_seed(opts.seed, 0, 0, case));
        match check_all(&net, &s0, &detect) {
            Ok(found) => violations.extend(found),
            Err(_) => unresolved += 1,
        }
    }
    let mut out = vec![CheckOutcome::new(
        format!("{} fuzzed instances", opts.fuzz_cases),
        violations.is_empty() && unresolved == 0,
        format!("{}; {unresolved} unresolved", summarize(&violations)),
    )];
    let mut witness_violations = Vec::new();
    let catalogue = witness_catalogue();
    for spec in &catalogue {
        let (net, s0) = spec.build().expect("catalogue parameters are valid");
        match check_all(&net, &s0, &detect) {
            Ok(found) => witness_violations.extend(found),
            Err(_) => unresolved += 1,
        }
    }
    out.push(CheckOutcome::new(
        format!("{} constructed witnesses", catalogue.len()),
        witness_violations.is_empty() && unresolved == 0,
        summarize(&witness_violations),
    ));
    out
}

fn construction_family(label: &str, specs: Vec<WitnessSpec>) -> CheckOutcome {
    let mut violations = Vec::new();
    for spec in &specs {
        let (_, found) =
            check_construction(spec, &DetectOptions::default()).expect("valid parameters");
        violations.extend(found);
    }
    CheckOutcome::new(
        format!("{label} ({} instances)", specs.len()),
        violations.is_empty(),
        summarize(&violations),
    )
}

fn nsc() -> Vec<CheckOutcome> {
    let catalogue = witness_catalogue();
    let family = |pick: fn(&WitnessSpec) -> bool| catalogue.iter().filter(|s| pick(s)).cloned().collect();
    vec![
        construction_family(
            "mixed 0/1 cycle has alpha > 1",
            family(|s| matches!(s, WitnessSpec::Nsc { .. })),
        ),
        construction_family(
            "single pulse: len divides alpha",
            family(|s| matches!(s, WitnessSpec::Nsc1 { .. })),
        ),
        construction_family(
            "staircase: p + 1 divides alpha",
            family(|s| matches!(s, WitnessSpec::NscP { .. })),
        ),
    ]
}

fn landau() -> Vec<CheckOutcome> {
    landau_sets()
        .into_iter()
        .map(|ks| {
            let spec = WitnessSpec::Landau { ks: ks.clone() };
            let (summary, violations) =
                check_construction(&spec, &DetectOptions::default()).expect("valid parameters");
            let lcm = ks.iter().fold(1usize, |acc, &k| num_integer::lcm(acc, k));
            CheckOutcome::new(
                format!("ks = {ks:?}: tau = lcm and lcm divides alpha"),
                violations.is_empty(),
                format!("tau = {}, lcm = {lcm}, alpha = {}", summary.tau, summary.alpha),
            )
        })
        .collect()
}

fn tree(opts: &VerifyOptions) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for depth in 1..=4usize {
        for branching in [2u32, 3] {
            for p in [1u16, 2] {
                let spec = WitnessSpec::Tree { depth, branching, p };
                let (summary, violations) =
                    check_construction(&spec, &DetectOptions::default()).expect("valid parameters");
                let (net, s0) = spec.build().expect("valid parameters");
                let labels = tree_witness_labeling(depth, branching).expect("small tree");
                let verified = verify_tree_witness(&net, &s0, &labels, depth, branching, p);
                out.push(CheckOutcome::new(
                    format!("d = {depth}, th = {branching}, p = {p}: d + 1 <= tau <= d + p"),
                    violations.is_empty() && verified,
                    format!("tau = {}, witness conditions hold: {verified}", summary.tau),
                ));
            }
        }
    }

    // a witness next to unrelated random dynamics still forces tau >= d + 1
    let mut margins = Vec::new();
    for case in 0..20usize {
        let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(opts.seed, 1, 1, case));
        let depth = rng.gen_range(1..=4usize);
        let witness = build_tree_witness(depth, 2, 2).expect("valid parameters");
        let g = gen_erdos_renyi(30, 1.2 / 30.0, &mut rng).expect("probability in range");
        let other = random_network(g, (1, 2), (1, 2), &mut rng).expect("valid bounds");
        let other_s = random_state(&other, &mut rng);
        let (net, s0) = disjoint_union(&[(other, other_s), witness]);
        let summary = detect_decomposed(&net, &s0, &DecomposeOptions::default())
            .expect("valid state");
        let margin = if summary.capped { None } else { Some(summary.tau as i64 - depth as i64) };
        margins.push(margin);
    }
    let smallest = margins.iter().min().copied().flatten();
    out.push(CheckOutcome::new(
        "embedded witnesses keep tau >= d + 1 (20 cases)",
        smallest.is_some_and(|m| m >= 1),
        format!("smallest tau - d: {smallest:?}"),
    ));
    out
}

fn laws(opts: &VerifyOptions) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let rho2 = rho_of_c(2.0, 1e-12).expect("c > 1");
    out.push(CheckOutcome::new(
        "rho(2) solves exp(-2 rho) = 1 - rho",
        (rho2 - 0.79681).abs() < 1e-5,
        format!("rho(2) = {rho2:.6}"),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(opts.seed, 3200, 15, 0));
    let report = estimate_graph_laws(3200, 1.5, 50, &mut rng).expect("valid parameters");
    let rho = rho_of_c(1.5, 1e-12).expect("c > 1");
    let dg = report.dg_fraction.mean;
    out.push(CheckOutcome::new(
        "n = 3200, c = 1.5: mean |DG|/n within 0.03 of rho(1.5)",
        (dg - rho).abs() <= 0.03,
        format!("mean |DG|/n = {dg:.4}, rho(1.5) = {rho:.4}"),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(opts.seed, 1000, 8, 0));
    let report = estimate_graph_laws(1000, 0.8, 500, &mut rng).expect("valid parameters");
    let three = report.cycle_counts[&3];
    let expected = 0.8f64.powi(3) / 3.0;
    out.push(CheckOutcome::new(
        "n = 1000, c = 0.8: mean 3-cycle count within 3 SE of c^3/3",
        three.covers(expected, 3.0) && !report.census_truncated,
        format!("mean = {:.4} +- {:.4}, expected {expected:.4}", three.mean, three.se),
    ));
    out
}

/// Decimal `lcm` of cycle lengths, exposed for reports.
pub fn lcm_of(values: &[usize]) -> BigUint {
    values
        .iter()
        .fold(BigUint::from(1u32), |acc, &k| num_integer::Integer::lcm(&acc, &BigUint::from(k)))
}
