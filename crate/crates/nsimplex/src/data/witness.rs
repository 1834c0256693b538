//! Seeded witness/evaluation splits: disjoint index sets sampled uniformly
//! without replacement.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct WitnessSplit {
    pub witness: Vec<usize>,
    pub evaluation: Vec<usize>,
    pub seed: u64,
}

/// Splits `0..n` into disjoint blocks of the requested sizes via a partial
/// Fisher-Yates shuffle; deterministic for a seed.
pub fn sample_partition(n: usize, sizes: &[usize], seed: u64) -> Result<Vec<Vec<usize>>> {
    let total: usize = sizes.iter().sum();
    if total > n {
        return Err(Error::InvalidArgument(format!(
            "requested {total} indices from a population of {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..total {
        let j = i + rng.gen_range(0..n - i);
        indices.swap(i, j);
    }
    let mut out = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for &s in sizes {
        out.push(indices[start..start + s].to_vec());
        start += s;
    }
    Ok(out)
}

/// The witness set fits transforms; the evaluation set measures them. The
/// two never intersect.
pub fn sample_witness(
    dataset: &Dataset,
    witness_size: usize,
    eval_size: usize,
    seed: u64,
) -> Result<WitnessSplit> {
    let mut parts = sample_partition(dataset.len(), &[witness_size, eval_size], seed)?;
    let evaluation = parts.pop().unwrap();
    let witness = parts.pop().unwrap();
    Ok(WitnessSplit {
        witness,
        evaluation,
        seed,
    })
}
