//! Least-squares isotonic regression by pool-adjacent-violators.

use crate::error::{Error, Result};

/// Fits `delta` as a non-decreasing function of `zeta` and returns the
/// fitted value for every input pair, in input order. Pairs with equal
/// `zeta` are merged (their `delta` averaged) before pooling, so the fit is
/// a well-defined function of `zeta`.
pub fn isotonic_fit(zeta: &[f64], delta: &[f64]) -> Result<Vec<f64>> {
    if zeta.len() != delta.len() {
        return Err(Error::DimensionMismatch {
            left: zeta.len(),
            right: delta.len(),
        });
    }
    if zeta.is_empty() {
        return Err(Error::InvalidArgument("empty sample".into()));
    }
    if zeta.iter().chain(delta).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite sample values".into()));
    }

    let n = zeta.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| zeta[a].partial_cmp(&zeta[b]).unwrap());

    // Tie-merge: one block per distinct zeta, weighted by multiplicity.
    let mut starts: Vec<usize> = Vec::new(); // start position (in `order`) of each tie group
    let mut values: Vec<f64> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut pos = 0;
    while pos < n {
        let z = zeta[order[pos]];
        let mut end = pos + 1;
        let mut sum = delta[order[pos]];
        while end < n && zeta[order[end]] == z {
            sum += delta[order[end]];
            end += 1;
        }
        starts.push(pos);
        values.push(sum / (end - pos) as f64);
        weights.push((end - pos) as f64);
        pos = end;
    }

    // Pool adjacent violators over the merged blocks. `spans` counts how
    // many tie groups each pooled block covers.
    let mut vals: Vec<f64> = Vec::with_capacity(values.len());
    let mut wts: Vec<f64> = Vec::with_capacity(values.len());
    let mut spans: Vec<usize> = Vec::with_capacity(values.len());
    for (v, w) in values.iter().zip(&weights) {
        vals.push(*v);
        wts.push(*w);
        spans.push(1);
        while vals.len() > 1 && vals[vals.len() - 2] > vals[vals.len() - 1] {
            let (v1, w1, s1) = (
                vals.pop().unwrap(),
                wts.pop().unwrap(),
                spans.pop().unwrap(),
            );
            let last = vals.len() - 1;
            let merged_w = wts[last] + w1;
            vals[last] = (vals[last] * wts[last] + v1 * w1) / merged_w;
            wts[last] = merged_w;
            spans[last] += s1;
        }
    }

    // Scatter fitted block values back to the original positions.
    let mut out = vec![0.0; n];
    let mut group = 0;
    for (v, s) in vals.iter().zip(&spans) {
        for _ in 0..*s {
            let start = starts[group];
            let end = if group + 1 < starts.len() {
                starts[group + 1]
            } else {
                n
            };
            for &idx in &order[start..end] {
                out[idx] = *v;
            }
            group += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn monotone_input_is_its_own_fit() {
        let zeta = [0.1, 0.5, 0.9, 2.0];
        let delta = [1.0, 1.5, 1.5, 3.0];
        assert_eq!(isotonic_fit(&zeta, &delta).unwrap(), delta.to_vec());
    }

    #[test]
    fn single_violation_pools_to_mean() {
        assert_eq!(
            isotonic_fit(&[1.0, 2.0], &[5.0, 3.0]).unwrap(),
            vec![4.0, 4.0]
        );
    }

    #[test]
    fn ties_in_zeta_are_averaged() {
        let fit = isotonic_fit(&[1.0, 1.0, 2.0], &[0.0, 2.0, 5.0]).unwrap();
        assert_eq!(fit, vec![1.0, 1.0, 5.0]);
    }

    #[test]
    fn output_is_nondecreasing_in_zeta_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(70);
        for _ in 0..50 {
            let n = rng.gen_range(1..60);
            let zeta: Vec<f64> = (0..n)
                .map(|_| (rng.gen::<f64>() * 8.0).round() / 4.0)
                .collect();
            let delta: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let fit = isotonic_fit(&zeta, &delta).unwrap();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| zeta[a].partial_cmp(&zeta[b]).unwrap());
            for w in order.windows(2) {
                assert!(fit[w[0]] <= fit[w[1]] + 1e-12);
            }
        }
    }

    /// Greatest-convex-minorant oracle: for distinct sorted x, the isotonic
    /// LS fit equals the left slopes of the convex hull of the cumulative
    /// sum graph. Entirely independent of the PAVA code path.
    fn gcm_oracle(y: &[f64]) -> Vec<f64> {
        let n = y.len();
        let mut cum = vec![(0.0_f64, 0.0_f64); n + 1];
        let mut acc = 0.0;
        for i in 0..n {
            acc += y[i];
            cum[i + 1] = ((i + 1) as f64, acc);
        }
        // Lower convex hull by monotone chain.
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for p in cum {
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let mut out = vec![0.0; n];
        for w in hull.windows(2) {
            let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            for i in w[0].0 as usize..w[1].0 as usize {
                out[i] = slope;
            }
        }
        out
    }

    #[test]
    fn matches_convex_minorant_oracle_on_100_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let mut zeta: Vec<f64> = (0..100).map(|_| rng.gen::<f64>()).collect();
        zeta.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let delta: Vec<f64> = (0..100).map(|_| rng.gen::<f64>() * 3.0).collect();
        let fit = isotonic_fit(&zeta, &delta).unwrap();
        let oracle = gcm_oracle(&delta);
        for (a, b) in fit.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    /// Brute-force projection onto the monotone cone for small n: enumerate
    /// every composition into consecutive blocks, fit each block to its
    /// mean, keep feasible candidates, take the best.
    fn brute_force(y: &[f64]) -> Vec<f64> {
        let n = y.len();
        let mut best: Option<(f64, Vec<f64>)> = None;
        for mask in 0..(1u32 << (n - 1)) {
            let mut fit = vec![0.0; n];
            let mut start = 0;
            let mut prev = f64::NEG_INFINITY;
            let mut feasible = true;
            for i in 0..n {
                let boundary = i == n - 1 || (mask >> i) & 1 == 1;
                if boundary {
                    let mean: f64 = y[start..=i].iter().sum::<f64>() / (i - start + 1) as f64;
                    if mean < prev {
                        feasible = false;
                        break;
                    }
                    fit[start..=i].iter_mut().for_each(|v| *v = mean);
                    prev = mean;
                    start = i + 1;
                }
            }
            if !feasible {
                continue;
            }
            let sse: f64 = y.iter().zip(&fit).map(|(a, b)| (a - b) * (a - b)).sum();
            if best.as_ref().is_none_or(|(s, _)| sse < *s) {
                best = Some((sse, fit));
            }
        }
        best.unwrap().1
    }

    #[test]
    fn matches_brute_force_on_small_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        for _ in 0..30 {
            let n = rng.gen_range(2..9);
            let mut zeta: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            zeta.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let delta: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let fit = isotonic_fit(&zeta, &delta).unwrap();
            let oracle = brute_force(&delta);
            for (a, b) in fit.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }
}
