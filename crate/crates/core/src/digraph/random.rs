//! Erdős–Rényi sampling: every ordered pair of distinct nodes becomes an arc
//! independently with probability `pi`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{Digraph, GraphError};

/// Below this arc probability the geometric-skip sampler is used.
const SKIP_THRESHOLD: f64 = 0.1;

/// Samples a digraph on `n` nodes with arc probability `pi`.
///
/// Dispatches to [`gen_erdos_renyi_skip`] for sparse graphs and to
/// [`gen_erdos_renyi_bernoulli`] otherwise. The two samplers produce the same
/// distribution but consume randomness differently, so the choice is a pure
/// function of `pi` to keep results reproducible.
pub fn gen_erdos_renyi<R: Rng + ?Sized>(
    n: usize,
    pi: f64,
    rng: &mut R,
) -> Result<Digraph, GraphError> {
    check_probability(pi)?;
    if pi < SKIP_THRESHOLD {
        gen_erdos_renyi_skip(n, pi, rng)
    } else {
        gen_erdos_renyi_bernoulli(n, pi, rng)
    }
}

/// One Bernoulli trial per ordered non-loop pair, in (source, target) order.
pub fn gen_erdos_renyi_bernoulli<R: Rng + ?Sized>(
    n: usize,
    pi: f64,
    rng: &mut R,
) -> Result<Digraph, GraphError> {
    check_probability(pi)?;
    let mut out_adj = vec![Vec::new(); n];
    for (a, outs) in out_adj.iter_mut().enumerate() {
        for b in 0..n {
            if a != b && rng.gen_bool(pi) {
                outs.push(b);
            }
        }
    }
    Ok(Digraph::from_sorted_out_lists(out_adj))
}

/// Walks the `n(n-1)` ordered non-loop pairs in (source, target) order,
/// jumping over runs of absent arcs with geometrically distributed gaps.
pub fn gen_erdos_renyi_skip<R: Rng + ?Sized>(
    n: usize,
    pi: f64,
    rng: &mut R,
) -> Result<Digraph, GraphError> {
    check_probability(pi)?;
    let mut out_adj = vec![Vec::new(); n];
    if pi == 0.0 || n < 2 {
        return Ok(Digraph::from_sorted_out_lists(out_adj));
    }
    let total = (n as u64) * (n as u64 - 1);
    let log_q = libm::log1p(-pi);
    let width = n as u64 - 1;
    let mut idx: u64 = 0;
    loop {
        // 1 - U lies in (0, 1], so the logarithm is finite.
        let u: f64 = 1.0 - rng.gen::<f64>();
        let gap = libm::floor(libm::log(u) / log_q);
        if gap >= (total - idx) as f64 {
            break;
        }
        idx += gap as u64;
        let a = (idx / width) as usize;
        let r = (idx % width) as usize;
        let b = if r < a { r } else { r + 1 };
        out_adj[a].push(b);
        idx += 1;
        if idx >= total {
            break;
        }
    }
    Ok(Digraph::from_sorted_out_lists(out_adj))
}

fn check_probability(pi: f64) -> Result<(), GraphError> {
    if (0.0..=1.0).contains(&pi) {
        Ok(())
    } else {
        Err(GraphError::InvalidProbability(pi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for generator in [gen_erdos_renyi_skip::<ChaCha8Rng>, gen_erdos_renyi_bernoulli] {
            assert_eq!(generator(5, 0.0, &mut rng).unwrap().arc_count(), 0);
            let full = generator(5, 1.0, &mut rng).unwrap();
            assert_eq!(full.arc_count(), 20);
            assert!(full.arcs().all(|(a, b)| a != b));
        }
        assert_eq!(gen_erdos_renyi(1, 0.5, &mut rng).unwrap().arc_count(), 0);
        assert!(matches!(
            gen_erdos_renyi(5, 1.5, &mut rng),
            Err(GraphError::InvalidProbability(_))
        ));
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = gen_erdos_renyi(200, 0.01, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = gen_erdos_renyi(200, 0.01, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn arc_count_of_a_sparse_graph() {
        // Binomial(999000, 0.0009): mean 899.1, sd about 29.97.
        let g = gen_erdos_renyi(1000, 0.9 / 1000.0, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        let dev = (g.arc_count() as f64 - 899.1).abs();
        assert!(dev < 4.0 * 29.97, "arc count {}", g.arc_count());
    }

    /// Both samplers must hit every pair with probability `pi`: compare
    /// per-pair inclusion frequencies on a small graph.
    #[test]
    fn samplers_agree_per_pair() {
        let n = 4;
        let pi = 0.07;
        let draws = 40_000;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut freq_skip = [[0u32; 4]; 4];
        let mut freq_bern = [[0u32; 4]; 4];
        for _ in 0..draws {
            for (a, b) in gen_erdos_renyi_skip(n, pi, &mut rng).unwrap().arcs() {
                freq_skip[a][b] += 1;
            }
            for (a, b) in gen_erdos_renyi_bernoulli(n, pi, &mut rng).unwrap().arcs() {
                freq_bern[a][b] += 1;
            }
        }
        let sd = libm::sqrt(draws as f64 * pi * (1.0 - pi));
        let mean = draws as f64 * pi;
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    assert_eq!(freq_skip[a][b] + freq_bern[a][b], 0);
                    continue;
                }
                assert!((freq_skip[a][b] as f64 - mean).abs() < 4.0 * sd);
                assert!((freq_bern[a][b] as f64 - mean).abs() < 4.0 * sd);
            }
        }
    }
}
