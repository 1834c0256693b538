//! Exhaustive k-nearest-neighbour ground truth.
//!
//! Lists are canonical: ascending distance with ties broken by ascending id,
//! and the query never appears in its own list. Queries run in parallel with
//! results collected in query order, so output is independent of thread
//! count.

use rayon::prelude::*;

use crate::data::Dataset;
use crate::error::{Error, Result};

/// k-NN over an arbitrary distance closure; `dist(q, i)` gives the distance
/// from query index `q` to corpus id `i`.
pub fn knn_lists<F>(n: usize, queries: &[usize], k: usize, dist: F) -> Result<Vec<Vec<usize>>>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("k = {k} must be in 1..{n}")));
    }
    if let Some(&q) = queries.iter().find(|&&q| q >= n) {
        return Err(Error::InvalidArgument(format!(
            "query index {q} out of range"
        )));
    }
    Ok(queries
        .par_iter()
        .map(|&q| {
            let mut scored: Vec<(f64, usize)> = (0..n)
                .filter(|&i| i != q)
                .map(|i| (dist(q, i), i))
                .collect();
            let total = |a: &(f64, usize), b: &(f64, usize)| {
                a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1))
            };
            scored.select_nth_unstable_by(k - 1, total);
            scored.truncate(k);
            scored.sort_by(total);
            scored.into_iter().map(|(_, id)| id).collect()
        })
        .collect())
}

/// Ground truth under the dataset's own metric.
pub fn knn_ground_truth(dataset: &Dataset, queries: &[usize], k: usize) -> Result<Vec<Vec<usize>>> {
    knn_lists(dataset.len(), queries, k, |q, i| dataset.distance(q, i))
}
