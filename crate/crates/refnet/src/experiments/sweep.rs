use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use refnet_core::{
    detect_decomposed, detect_hashing, gen_erdos_renyi, random_network, random_state,
    DecomposeOptions, DetectOptions, DynamicsSummary, Network, Restriction, State,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Toml(#[from] toml::de::Error),
}

/// One sweep over the grid `n_list x c_list`, `reps` runs per cell, with
/// arc probability `min(c / n, 1)`.
///
/// Stored as flat TOML:
///
/// ```toml
/// n_list = [100, 200, 400]
/// c_list = [0.8, 1.0, 1.5]
/// reps = 500
/// p_lo = 1
/// p_hi = 1
/// th_lo = 1
/// th_hi = 1
/// step_cap = 1000000
/// base_seed = 2024
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n_list: Vec<usize>,
    pub c_list: Vec<f64>,
    pub reps: usize,
    pub p_lo: u16,
    pub p_hi: u16,
    pub th_lo: u32,
    pub th_hi: u32,
    pub step_cap: u64,
    pub base_seed: u64,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: SweepConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.n_list.is_empty() || self.c_list.is_empty() {
            return fail("n_list and c_list must be non-empty");
        }
        if self.n_list.contains(&0) {
            return fail("every n must be at least 1");
        }
        if self.c_list.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return fail("every c must be finite and non-negative");
        }
        if self.reps == 0 {
            return fail("reps must be at least 1");
        }
        if self.p_lo == 0 || self.th_lo == 0 || self.p_lo > self.p_hi || self.th_lo > self.th_hi {
            return fail("bounds must satisfy 1 <= lo <= hi");
        }
        Ok(())
    }
}

/// One run of a sweep. `alpha` and `tau` are empty when the run was capped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: usize,
    pub c: String,
    pub rep: usize,
    pub seed: u64,
    pub alpha: Option<String>,
    pub tau: Option<u64>,
    pub capped_alpha: bool,
    pub capped_tau: bool,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of run `rep` in cell `(n, c_list[c_index])`: each coordinate is
/// folded in with a splitmix64 round, so every cell is reproducible on its
/// own.
pub fn cell_seed(base_seed: u64, n: usize, c_index: usize, rep: usize) -> u64 {
    [n as u64, c_index as u64, rep as u64]
        .into_iter()
        .fold(splitmix64(base_seed), |acc, x| splitmix64(acc ^ x))
}

/// Draws the digraph, then `(p, th)`, then the initial state, all from one
/// ChaCha8 stream seeded with `seed`.
pub fn run_single(cfg: &SweepConfig, n: usize, c: f64, seed: u64) -> (Network, State) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pi = (c / n as f64).min(1.0);
    let graph = gen_erdos_renyi(n, pi, &mut rng).expect("validated probability");
    let net = random_network(graph, (cfg.p_lo, cfg.p_hi), (cfg.th_lo, cfg.th_hi), &mut rng)
        .expect("validated bounds");
    let state = random_state(&net, &mut rng);
    (net, state)
}

/// Whole-network detection, retried component-wise when it caps: the
/// decomposition resolves attractors whose lcm structure puts them far
/// beyond any global search.
pub fn measure(net: &Network, s0: &State, step_cap: u64) -> DynamicsSummary {
    let opts = DetectOptions {
        step_cap,
        period_budget: 0,
        ..Default::default()
    };
    let global = detect_hashing(net, s0, &opts).expect("sampled state is valid");
    if !global.capped {
        return global;
    }
    let dopts = DecomposeOptions {
        per_component: opts,
        restriction: Restriction::Sinks,
    };
    detect_decomposed(net, s0, &dopts).expect("sampled state is valid")
}

/// Runs every `(n, c, rep)` on the current rayon pool. Records come back in
/// grid order (`n_list`, then `c_list`, then `rep`) whatever the schedule.
pub fn run_sweep(cfg: &SweepConfig) -> Vec<SweepRecord> {
    let tasks: Vec<(usize, usize, usize)> = cfg
        .n_list
        .iter()
        .flat_map(|&n| {
            (0..cfg.c_list.len()).flat_map(move |ci| (0..cfg.reps).map(move |rep| (n, ci, rep)))
        })
        .collect();
    tasks
        .into_par_iter()
        .map(|(n, ci, rep)| {
            let c = cfg.c_list[ci];
            let seed = cell_seed(cfg.base_seed, n, ci, rep);
            let (net, s0) = run_single(cfg, n, c, seed);
            let summary = measure(&net, &s0, cfg.step_cap);
            let capped = summary.capped;
            SweepRecord {
                n,
                c: c.to_string(),
                rep,
                seed,
                alpha: (!capped).then(|| summary.alpha.to_string()),
                tau: (!capped).then_some(summary.tau),
                capped_alpha: capped,
                capped_tau: capped,
            }
        })
        .collect()
}

pub fn write_records_csv<W: std::io::Write>(
    records: &[SweepRecord],
    out: W,
) -> Result<(), csv::Error> {
    let mut writer = csv::Writer::from_writer(out);
    for r in records {
        writer.serialize(r)?;
    }
    if records.is_empty() {
        writer.write_record(["n", "c", "rep", "seed", "alpha", "tau", "capped_alpha", "capped_tau"])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_records_csv<R: std::io::Read>(input: R) -> Result<Vec<SweepRecord>, csv::Error> {
    csv::Reader::from_reader(input).deserialize().collect()
}
