//! Reduction-quality measures: Kruskal stress over an isotonic fit, Sammon
//! stress, quadratic loss, Spearman rank correlation, logistic-relevance DCG
//! recall, and the high-dimensional angle experiment.
//!
//! Profiles report each measure normalized into `[0, 1]` where 1 is a
//! perfect reduction: stresses are subtracted from 1, Spearman rho and the
//! subtractions clamp at 0 (a transform that bad has no practical value),
//! and quadratic loss is rescaled by the largest raw value in the profile.

mod angles;
mod isotonic;
mod recall;

pub use angles::{angle_distribution, angle_histogram, AngleStats};
pub use isotonic::isotonic_fit;
pub use recall::{dcg_perfect, dcg_recall, dcg_recall_raw, relevance};

use crate::error::{Error, Result};

/// Parallel sequences of true distances (`delta`) and reduced-space
/// distances (`zeta`) for a sampled set of object pairs.
#[derive(Debug, Clone)]
pub struct DistancePairSample {
    delta: Vec<f64>,
    zeta: Vec<f64>,
}

impl DistancePairSample {
    pub fn new(delta: Vec<f64>, zeta: Vec<f64>) -> Result<Self> {
        if delta.len() != zeta.len() {
            return Err(Error::DimensionMismatch {
                left: delta.len(),
                right: zeta.len(),
            });
        }
        if delta.is_empty() {
            return Err(Error::InvalidArgument("empty pair sample".into()));
        }
        if delta
            .iter()
            .chain(&zeta)
            .any(|v| !v.is_finite() || *v < 0.0)
        {
            return Err(Error::InvalidArgument(
                "distances must be finite and >= 0".into(),
            ));
        }
        Ok(Self { delta, zeta })
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn zeta(&self) -> &[f64] {
        &self.zeta
    }
}

/// Kruskal stress-1: residual of the least-squares isotonic fit of the true
/// distances over the reduced ordering,
/// `sqrt(sum (delta - d*)^2 / sum delta^2)`. Zero iff the pair relation is
/// perfectly monotone, and invariant under any strictly increasing
/// transform of the reduced distances (only their ordering enters).
pub fn kruskal_stress(sample: &DistancePairSample) -> Result<f64> {
    if sample.zeta.iter().all(|&z| z == 0.0) {
        return Err(Error::InvalidArgument("all-zero reduced distances".into()));
    }
    let dstar = isotonic_fit(&sample.zeta, &sample.delta)?;
    let num: f64 = sample
        .delta
        .iter()
        .zip(&dstar)
        .map(|(d, f)| (d - f) * (d - f))
        .sum();
    let den: f64 = sample.delta.iter().map(|d| d * d).sum();
    if num == 0.0 {
        Ok(0.0)
    } else {
        Ok((num / den).sqrt())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SammonStress {
    pub stress: f64,
    /// Pairs dropped because their true distance was zero.
    pub excluded_zero_delta: usize,
}

/// Sammon stress `1/(sum delta) * sum (delta - zeta)^2 / delta`; sensitive
/// to absolute differences, unlike Kruskal stress.
pub fn sammon_stress(sample: &DistancePairSample) -> Result<SammonStress> {
    let mut denom = 0.0;
    let mut acc = 0.0;
    let mut excluded = 0;
    for (&d, &z) in sample.delta.iter().zip(&sample.zeta) {
        if d == 0.0 {
            excluded += 1;
            continue;
        }
        denom += d;
        acc += (d - z) * (d - z) / d;
    }
    if denom == 0.0 {
        return Err(Error::InvalidArgument(
            "no pairs with nonzero true distance".into(),
        ));
    }
    Ok(SammonStress {
        stress: acc / denom,
        excluded_zero_delta: excluded,
    })
}

/// Raw quadratic loss `sum (delta - zeta)^2`.
pub fn quadratic_loss(sample: &DistancePairSample) -> f64 {
    sample
        .delta
        .iter()
        .zip(&sample.zeta)
        .map(|(d, z)| (d - z) * (d - z))
        .sum()
}

/// Converts a raw quadratic loss to a `[0,1]` quality using the largest raw
/// value in the profile being visualized.
pub fn normalize_quadratic(raw: f64, q_max: f64) -> f64 {
    if q_max <= 0.0 {
        1.0
    } else {
        ((q_max - raw) / q_max).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SpearmanRho {
    pub rho: f64,
    /// True when one sequence is constant; rho is undefined and reported 0.
    pub degenerate: bool,
}

/// Spearman rank correlation `1 - 6 sum (z_i - z'_i)^2 / (T^3 - T)` over the
/// pair rankings, ties assigned average ranks.
pub fn spearman_rho(sample: &DistancePairSample) -> Result<SpearmanRho> {
    let t = sample.len();
    if t < 2 {
        return Err(Error::InvalidArgument("need at least two pairs".into()));
    }
    let constant = |v: &[f64]| v.iter().all(|x| *x == v[0]);
    if constant(&sample.delta) || constant(&sample.zeta) {
        return Ok(SpearmanRho {
            rho: 0.0,
            degenerate: true,
        });
    }
    let rd = average_ranks(&sample.delta);
    let rz = average_ranks(&sample.zeta);
    let d_sq: f64 = rd.iter().zip(&rz).map(|(a, b)| (a - b) * (a - b)).sum();
    let t = t as f64;
    Ok(SpearmanRho {
        rho: 1.0 - 6.0 * d_sq / (t * t * t - t),
        degenerate: false,
    })
}

/// 1-based ranks; tied values share the average of their positions.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + 1 + j) as f64 / 2.0; // mean of ranks i+1 ..= j
        for &idx in &order[i..j] {
            ranks[idx] = avg;
        }
        i = j;
    }
    ranks
}

/// One profile cell: every measure for a (method, dimension) pair.
#[derive(Debug, Clone)]
pub struct QualityReport {
    pub kruskal: f64,
    pub sammon: f64,
    pub quadratic_raw: f64,
    pub spearman: f64,
    pub recall: Option<f64>,
    pub excluded_zero_delta: usize,
    pub spearman_degenerate: bool,
}

impl QualityReport {
    pub fn from_sample(sample: &DistancePairSample, recall: Option<f64>) -> Result<Self> {
        let sammon = sammon_stress(sample)?;
        let spearman = spearman_rho(sample)?;
        Ok(Self {
            kruskal: kruskal_stress(sample)?,
            sammon: sammon.stress,
            quadratic_raw: quadratic_loss(sample),
            spearman: spearman.rho,
            recall,
            excluded_zero_delta: sammon.excluded_zero_delta,
            spearman_degenerate: spearman.degenerate,
        })
    }

    /// Normalized qualities in `[0,1]`, 1 = perfect. Quadratic loss needs
    /// the profile-wide maximum raw value.
    pub fn normalized(&self, q_max: f64) -> NormalizedQuality {
        NormalizedQuality {
            kruskal: (1.0 - self.kruskal).clamp(0.0, 1.0),
            sammon: (1.0 - self.sammon).clamp(0.0, 1.0),
            quadratic: normalize_quadratic(self.quadratic_raw, q_max),
            spearman: self.spearman.clamp(0.0, 1.0),
            recall: self.recall.map(|r| r.clamp(0.0, 1.0)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NormalizedQuality {
    pub kruskal: f64,
    pub sammon: f64,
    pub quadratic: f64,
    pub spearman: f64,
    pub recall: Option<f64>,
}
