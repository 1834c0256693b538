//! Sparse random projection.
//!
//! Entries are drawn i.i.d. as
//!
//! ```text
//! sqrt(3) * { +1 with probability 1/6, 0 with 2/3, -1 with 1/6 }
//! ```
//!
//! which is pseudo-orthogonal and mostly zero. The `1/sqrt(k)` factor that
//! preserves expected squared norms is applied at projection time (as the
//! transform's scale), so the stored entries keep the three-valued
//! distribution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baselines::LinearTransform;
use crate::error::Result;

/// Deterministic for a seed: entries are drawn row-major from ChaCha8.
pub fn rp_fit(input_dim: usize, output_dim: usize, seed: u64) -> Result<LinearTransform> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let root3 = 3.0_f64.sqrt();
    let matrix: Vec<f64> = (0..input_dim * output_dim)
        .map(|_| {
            let u: f64 = rng.gen();
            if u < 1.0 / 6.0 {
                root3
            } else if u < 1.0 / 3.0 {
                -root3
            } else {
                0.0
            }
        })
        .collect();
    LinearTransform::new(
        &matrix,
        input_dim,
        output_dim,
        None,
        1.0 / (output_dim as f64).sqrt(),
    )
}
