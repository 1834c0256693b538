//! k-NN recall as discounted cumulative gain over a logistic rank-relevance
//! function.
//!
//! The `i`th true neighbour carries relevance
//! `R_i = 1 - 1/(1 + exp(-(i - 500)/100))`, an inverse sigmoid that weighs
//! near neighbours far more than distant ones. The reduced-space list is
//! scored by
//!
//! ```text
//! DCG = sum_p (2^{DR_p} - 1) / log2(p + 1)
//! ```
//!
//! where `DR_p` is the relevance of the true rank (0-based) of the `p`th
//! reduced neighbour, zero if it is not a true neighbour at all. Identical
//! 1000-long lists score 66.0435; the result is normalized by that
//! perfect-correlation value (recomputed for other list lengths) into
//! `[0, 1]`.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Relevance of the `i`th true nearest neighbour, `i >= 1`. Strictly
/// decreasing; `relevance(500) = 0.5`.
pub fn relevance(i: usize) -> f64 {
    logistic_relevance(i as f64)
}

fn logistic_relevance(rank: f64) -> f64 {
    1.0 - 1.0 / (1.0 + (-(rank - 500.0) / 100.0).exp())
}

/// The DCG of a perfectly correlated list of the given length; 66.0435 for
/// length 1000.
pub fn dcg_perfect(len: usize) -> f64 {
    (1..=len)
        .map(|p| {
            let dr = logistic_relevance((p - 1) as f64);
            (2.0_f64.powf(dr) - 1.0) / ((p + 1) as f64).log2()
        })
        .sum()
}

/// Unnormalized DCG of `reduced_nn` against `true_nn` (equal lengths,
/// duplicate-free true list).
pub fn dcg_recall_raw(true_nn: &[usize], reduced_nn: &[usize]) -> Result<f64> {
    if true_nn.len() != reduced_nn.len() {
        return Err(Error::DimensionMismatch {
            left: true_nn.len(),
            right: reduced_nn.len(),
        });
    }
    if true_nn.is_empty() {
        return Err(Error::InvalidArgument("empty neighbour lists".into()));
    }
    let mut position = HashMap::with_capacity(true_nn.len());
    for (rank0, &id) in true_nn.iter().enumerate() {
        if position.insert(id, rank0).is_some() {
            return Err(Error::InvalidArgument(format!(
                "duplicate id {id} in true list"
            )));
        }
    }
    let mut acc = 0.0;
    for (p0, id) in reduced_nn.iter().enumerate() {
        let dr = match position.get(id) {
            Some(&rank0) => logistic_relevance(rank0 as f64),
            None => 0.0,
        };
        acc += (2.0_f64.powf(dr) - 1.0) / ((p0 + 2) as f64).log2();
    }
    Ok(acc)
}

/// Normalized DCG recall in `[0, 1]`: 1 for identical lists, 0 for disjoint
/// ones.
pub fn dcg_recall(true_nn: &[usize], reduced_nn: &[usize]) -> Result<f64> {
    Ok(dcg_recall_raw(true_nn, reduced_nn)? / dcg_perfect(true_nn.len()))
}
