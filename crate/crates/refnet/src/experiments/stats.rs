use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::sweep::SweepRecord;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("no records for the cell")]
    Empty,
    #[error("records from different cells were mixed")]
    MixedCells,
    #[error("unparsable alpha `{0}`")]
    BadAlpha(String),
}

/// Order statistics of one `(n, c)` cell over its uncapped runs.
///
/// `p999` is the mean of the second and third largest values and needs at
/// least three uncapped runs; median and max need one. Missing statistics
/// are empty. Values are decimal strings because `alpha` is unbounded and
/// `p999` may end in `.5`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub n: usize,
    pub c: String,
    pub reps: usize,
    pub median_alpha: Option<String>,
    pub p999_alpha: Option<String>,
    pub max_alpha: Option<String>,
    pub median_tau: Option<String>,
    pub p999_tau: Option<String>,
    pub max_tau: Option<String>,
    pub capped_fraction: f64,
}

/// `(lower median, mean of 2nd and 3rd largest, max)`.
pub(crate) fn order_stats(values: &mut [BigUint]) -> (Option<String>, Option<String>, Option<String>) {
    values.sort_unstable();
    let len = values.len();
    if len == 0 {
        return (None, None, None);
    }
    let median = values[(len - 1) / 2].to_string();
    let max = values[len - 1].to_string();
    let p999 = (len >= 3).then(|| half(&(&values[len - 2] + &values[len - 3])));
    (Some(median), p999, Some(max))
}

fn half(x: &BigUint) -> String {
    let q: BigUint = x >> 1u32;
    if x.bit(0) {
        format!("{q}.5")
    } else {
        q.to_string()
    }
}

pub fn cell_stats(records: &[SweepRecord]) -> Result<CellStats, StatsError> {
    let first = records.first().ok_or(StatsError::Empty)?;
    if records.iter().any(|r| r.n != first.n || r.c != first.c) {
        return Err(StatsError::MixedCells);
    }
    let mut alphas = Vec::new();
    let mut taus = Vec::new();
    for r in records {
        if let (Some(a), Some(t)) = (&r.alpha, r.tau) {
            alphas.push(
                a.parse::<BigUint>()
                    .map_err(|_| StatsError::BadAlpha(a.clone()))?,
            );
            taus.push(BigUint::from(t));
        }
    }
    let capped = records.len() - alphas.len();
    let (median_alpha, p999_alpha, max_alpha) = order_stats(&mut alphas);
    let (median_tau, p999_tau, max_tau) = order_stats(&mut taus);
    Ok(CellStats {
        n: first.n,
        c: first.c.clone(),
        reps: records.len(),
        median_alpha,
        p999_alpha,
        max_alpha,
        median_tau,
        p999_tau,
        max_tau,
        capped_fraction: capped as f64 / records.len() as f64,
    })
}

/// Groups consecutive records by `(n, c)`, in order of first appearance.
pub fn stats_from_records(records: &[SweepRecord]) -> Result<Vec<CellStats>, StatsError> {
    let mut cells: Vec<Vec<SweepRecord>> = Vec::new();
    for r in records {
        match cells
            .iter_mut()
            .find(|cell| cell[0].n == r.n && cell[0].c == r.c)
        {
            Some(cell) => cell.push(r.clone()),
            None => cells.push(vec![r.clone()]),
        }
    }
    cells.iter().map(|cell| cell_stats(cell)).collect()
}

pub fn write_stats_csv<W: std::io::Write>(stats: &[CellStats], out: W) -> Result<(), csv::Error> {
    let mut writer = csv::Writer::from_writer(out);
    for s in stats {
        writer.serialize(s)?;
    }
    if stats.is_empty() {
        writer.write_record([
            "n",
            "c",
            "reps",
            "median_alpha",
            "p999_alpha",
            "max_alpha",
            "median_tau",
            "p999_tau",
            "max_tau",
            "capped_fraction",
        ])?;
    }
    writer.flush()?;
    Ok(())
}
