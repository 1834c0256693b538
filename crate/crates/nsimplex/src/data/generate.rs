//! Synthetic dataset generators. ChaCha8 keyed by the seed, so the same
//! (n, m, seed) triple reproduces the same matrix on any platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::RowMatrix;

/// `n x m` i.i.d. uniform `[0, 1)` entries, row-major draw order.
pub fn gen_uniform(n: usize, m: usize, seed: u64) -> RowMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<f64> = (0..n * m).map(|_| rng.gen::<f64>()).collect();
    RowMatrix::from_vec(data, n, m).unwrap()
}

/// `n x m` i.i.d. standard normal entries.
pub fn gen_gaussian(n: usize, m: usize, seed: u64) -> RowMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<f64> = (0..n * m).map(|_| rng.sample(StandardNormal)).collect();
    RowMatrix::from_vec(data, n, m).unwrap()
}
