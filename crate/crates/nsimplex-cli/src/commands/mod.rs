//! One module per subcommand.

pub mod angles;
pub mod bench;
pub mod datacmd;
pub mod profile;
pub mod recall;
pub mod shepard;

use anyhow::Result;
use nsimplex::quality::dcg_recall;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Distinct unordered index pairs sampled without replacement, capped at
/// half the number available so rejection sampling stays efficient.
pub fn sample_distinct_pairs(
    rng: &mut ChaCha8Rng,
    n: usize,
    requested: usize,
) -> Vec<(usize, usize)> {
    let available = n * (n - 1) / 2;
    let count = requested.min(available / 2).max(1);
    let mut seen = std::collections::HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let key = (i.min(j), i.max(j));
        if seen.insert(key) {
            out.push(key);
        }
    }
    out
}

/// Mean DCG recall of found lists against true lists.
pub fn mean_recall(truth: &[Vec<usize>], found: &[Vec<usize>]) -> Result<f64> {
    let mut acc = 0.0;
    for (t, f) in truth.iter().zip(found) {
        acc += dcg_recall(t, f)?;
    }
    Ok(acc / truth.len() as f64)
}
