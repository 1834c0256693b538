//! The high-dimensional angle experiment.
//!
//! For a point `b` and an in-plane direction towards another point `a`, a
//! third point sampled at a fixed radius around `b` (a uniform direction)
//! forms an angle whose distribution concentrates around `pi/2` as the
//! dimension grows, with standard deviation close to `1/sqrt(m)`. This
//! near-orthogonality is what makes the zenith estimator accurate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct AngleStats {
    pub mean: f64,
    pub stdev: f64,
}

/// Samples `samples` angles in dimension `m`: `a`, `b` uniform in the unit
/// cube, the third point a uniform direction from `b`; the angle is taken
/// at `b`. Deterministic for a seed.
pub fn angle_distribution(dim: usize, samples: usize, seed: u64) -> Result<AngleStats> {
    Ok(angle_histogram(dim, samples, seed, 1)?.0)
}

/// Same experiment, also binning the angles over `[0, pi]`.
pub fn angle_histogram(
    dim: usize,
    samples: usize,
    seed: u64,
    bins: usize,
) -> Result<(AngleStats, Vec<u64>)> {
    if dim < 2 {
        return Err(Error::InvalidArgument(
            "angle experiment needs dim >= 2".into(),
        ));
    }
    if samples == 0 || bins == 0 {
        return Err(Error::InvalidArgument(
            "samples and bins must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hist = vec![0u64; bins];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut x = vec![0.0; dim];
    let mut w = vec![0.0; dim];
    for _ in 0..samples {
        for v in x.iter_mut() {
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            *v = a - b;
        }
        let mut w_norm_sq = 0.0;
        for v in w.iter_mut() {
            let g: f64 = rng.sample(StandardNormal);
            *v = g;
            w_norm_sq += g * g;
        }
        let x_norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let dot: f64 = x.iter().zip(&w).map(|(a, b)| a * b).sum();
        let cos = (dot / (x_norm * w_norm_sq.sqrt())).clamp(-1.0, 1.0);
        let theta = cos.acos();
        sum += theta;
        sum_sq += theta * theta;
        let bin = ((theta / std::f64::consts::PI) * bins as f64) as usize;
        hist[bin.min(bins - 1)] += 1;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = if samples > 1 {
        (sum_sq - n * mean * mean) / (n - 1.0)
    } else {
        0.0
    };
    Ok((
        AngleStats {
            mean,
            stdev: var.max(0.0).sqrt(),
        },
        hist,
    ))
}
