use std::collections::BTreeMap;

use rand::Rng;
use refnet_core::gen_erdos_renyi;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LawError {
    #[error("mean degree {0} has no giant-component root; it must exceed 1")]
    Subcritical(f64),
    #[error("tolerance must be positive")]
    Tolerance,
    #[error("at least {min} repetitions are required, got {got}")]
    TooFewReps { min: usize, got: usize },
    #[error("invalid parameters: n = {n}, c = {c}")]
    Parameters { n: usize, c: f64 },
}

/// The root in `(0, 1)` of `exp(-c x) = 1 - x`, for `c > 1`.
///
/// Bisection on `g(x) = (1 - x - exp(-c x)) / x`, which is positive near 0
/// (with limit `c - 1`) and negative at 1, so the trivial root at 0 never
/// interferes.
pub fn rho_of_c(c: f64, tol: f64) -> Result<f64, LawError> {
    if !(c > 1.0) || !c.is_finite() {
        return Err(LawError::Subcritical(c));
    }
    if !(tol > 0.0) {
        return Err(LawError::Tolerance);
    }
    let g = |x: f64| {
        if x == 0.0 {
            c - 1.0
        } else {
            (1.0 - x - (-c * x).exp()) / x
        }
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if mid == lo && mid == hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
}

impl MeanSe {
    pub fn of(samples: &[f64]) -> Self {
        let k = samples.len() as f64;
        if samples.is_empty() {
            return MeanSe { mean: 0.0, se: 0.0 };
        }
        let mean = samples.iter().sum::<f64>() / k;
        if samples.len() < 2 {
            return MeanSe { mean, se: 0.0 };
        }
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1.0);
        MeanSe {
            mean,
            se: (var / k).sqrt(),
        }
    }

    /// Whether `target` lies within `z` standard errors of the mean.
    pub fn covers(&self, target: f64, z: f64) -> bool {
        (self.mean - target).abs() <= z * self.se
    }
}

/// Structure of random digraphs at arc probability `min(c / n, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawReport {
    pub n: usize,
    pub c: f64,
    pub reps: usize,
    /// Limiting giant-component fraction, when `c > 1`.
    pub rho: Option<f64>,
    pub gc_fraction: MeanSe,
    pub ug_fraction: MeanSe,
    pub dg_fraction: MeanSe,
    /// Mean number of directed cycles per length.
    pub cycle_counts: BTreeMap<usize, MeanSe>,
    /// `c^l / l`, the limiting expected number of `l`-cycles.
    pub expected_cycle_counts: BTreeMap<usize, f64>,
    /// Fraction of sampled nodes `i` whose `UC(i)` is supersimple.
    pub supersimple_uc_fraction: MeanSe,
    pub census_truncated: bool,
}

pub const MIN_LAW_REPS: usize = 30;
pub const CENSUS_LENGTHS: [usize; 3] = [2, 3, 4];
/// Nodes sampled per digraph for the supersimple fraction.
pub const UC_SAMPLES: usize = 10;
const CENSUS_CAP: usize = 10_000_000;

pub fn estimate_graph_laws<R: Rng + ?Sized>(
    n: usize,
    c: f64,
    reps: usize,
    rng: &mut R,
) -> Result<LawReport, LawError> {
    if reps < MIN_LAW_REPS {
        return Err(LawError::TooFewReps {
            min: MIN_LAW_REPS,
            got: reps,
        });
    }
    if n == 0 || !c.is_finite() || c < 0.0 {
        return Err(LawError::Parameters { n, c });
    }
    let pi = (c / n as f64).min(1.0);
    let nf = n as f64;
    let max_len = *CENSUS_LENGTHS.iter().max().expect("non-empty");
    let (mut gc, mut ug, mut dg, mut simple) = (vec![], vec![], vec![], vec![]);
    let mut cycles: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    let mut truncated = false;
    for _ in 0..reps {
        let g = gen_erdos_renyi(n, pi, rng).expect("probability is in range");
        let info = g.condense();
        gc.push(info.gc.len() as f64 / nf);
        ug.push(info.ug.len() as f64 / nf);
        dg.push(info.dg.len() as f64 / nf);
        let census = g.cycle_census(max_len, CENSUS_CAP);
        truncated |= census.truncated;
        for len in CENSUS_LENGTHS {
            cycles.entry(len).or_default().push(census.count(len) as f64);
        }
        let hits = (0..UC_SAMPLES)
            .filter(|_| {
                let i = rng.gen_range(0..n);
                let up = g.upstream(i).expect("sampled node is in range");
                g.induced(&up).is_supersimple()
            })
            .count();
        simple.push(hits as f64 / UC_SAMPLES as f64);
    }
    Ok(LawReport {
        n,
        c,
        reps,
        rho: rho_of_c(c, 1e-12).ok(),
        gc_fraction: MeanSe::of(&gc),
        ug_fraction: MeanSe::of(&ug),
        dg_fraction: MeanSe::of(&dg),
        cycle_counts: cycles.into_iter().map(|(k, v)| (k, MeanSe::of(&v))).collect(),
        expected_cycle_counts: CENSUS_LENGTHS
            .iter()
            .map(|&len| (len, c.powi(len as i32) / len as f64))
            .collect(),
        supersimple_uc_fraction: MeanSe::of(&simple),
        census_truncated: truncated,
    })
}
