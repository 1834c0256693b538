//! Acceptance suite: one test per criterion, each printing its own
//! pass/fail line via the harness. Every tolerance is pinned in the
//! assertions below. Desk scale throughout.

use std::collections::HashSet;
use std::time::Instant;

use nalgebra::DMatrix;
use nsimplex::baselines::{lmds_fit, mds_fit, pca_fit, rp_fit};
use nsimplex::data::{gen_uniform, knn_lists, l1_normalize, sample_partition, Dataset};
use nsimplex::quality::{
    angle_distribution, dcg_perfect, dcg_recall, dcg_recall_raw, isotonic_fit, kruskal_stress,
    normalize_quadratic, quadratic_loss, relevance, sammon_stress, spearman_rho,
    DistancePairSample,
};
use nsimplex::simplex::DEGENERACY_TOLERANCE;
use nsimplex::{reduced_distances, BaseSimplex, Metric, NSimplexTransform, RowMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Random index pairs (i != j), deterministic per rng.
fn random_pairs(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i != j {
            out.push((i, j));
        }
    }
    out
}

/// Distinct unordered index pairs, sampled without replacement.
fn distinct_pairs(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<(usize, usize)> {
    let mut seen = HashSet::with_capacity(count);
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

fn random_psd_metric(dim: usize, seed: u64) -> Metric {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::from_fn(dim, dim, |_, _| rng.gen::<f64>() - 0.5);
    Metric::quadratic_form(&a.transpose() * &a).unwrap()
}

/// The five-metric family of criterion 2 over 100-d uniform data.
fn criterion2_metrics() -> Vec<Metric> {
    vec![
        Metric::Euclidean,
        Metric::CosineL2Normed,
        Metric::JensenShannon,
        Metric::Triangular,
        random_psd_metric(100, 1234),
    ]
}

fn dataset_for(metric: &Metric, n: usize, m: usize, seed: u64) -> Dataset {
    let raw = gen_uniform(n, m, seed);
    let rows = if metric.kind().requires_probability_input() {
        l1_normalize(&raw).unwrap()
    } else {
        raw
    };
    Dataset::new(rows, metric.clone(), "acceptance").unwrap()
}

/// Criterion 1: simplex reconstruction across dimensions, with the k = 100
/// batch finishing inside 2 seconds.
#[test]
fn c01_simplex_reconstruction() {
    for &k in &[2usize, 5, 10, 50, 100] {
        let started = Instant::now();
        for instance in 0..50 {
            let pts = gen_uniform(k + 1, k, 1000 + 97 * k as u64 + instance);
            let d = Metric::Euclidean.pairwise(&pts).unwrap();
            let s = BaseSimplex::from_distances(&d).unwrap();
            let mut worst = 0.0_f64;
            for i in 0..=k {
                for j in (i + 1)..=k {
                    let want = d.row(i)[j];
                    let got = s.row_distance(i, j);
                    worst = worst.max((got - want).abs() / want);
                }
            }
            assert!(
                worst < 1e-8,
                "k={k} instance {instance}: max relative error {worst:e}"
            );
        }
        if k == 100 {
            let elapsed = started.elapsed();
            assert!(elapsed.as_secs_f64() < 2.0, "k=100 batch took {elapsed:?}");
        }
    }
}

struct BoundSample {
    true_d: Vec<f64>,
    lwb: Vec<f64>,
    zen: Vec<f64>,
    upb: Vec<f64>,
    cross: Vec<f64>, // 2 * x_k * y_k per pair
}

/// Shared machinery for criteria 2, 3 and 5d: k = 20 references over 100-d
/// uniform data, 10^4 random pairs of transformed points.
fn bound_sample(metric: &Metric, seed: u64) -> BoundSample {
    let ds = dataset_for(metric, 1100, 100, seed);
    let parts = sample_partition(ds.len(), &[500, 600], seed ^ 0xabcd).unwrap();
    let witness = ds.rows().select_rows(&parts[0]);
    let eval = ds.rows().select_rows(&parts[1]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77);
    let t = NSimplexTransform::fit_from_pool(&witness, 20, metric.clone(), &mut rng).unwrap();
    let reduced = t.transform_rows(&eval).unwrap();
    let pairs = random_pairs(&mut rng, eval.nrows(), 10_000);
    let mut out = BoundSample {
        true_d: Vec::new(),
        lwb: Vec::new(),
        zen: Vec::new(),
        upb: Vec::new(),
        cross: Vec::new(),
    };
    for (i, j) in pairs {
        let d = metric.distance(eval.row(i), eval.row(j)).unwrap();
        let b = reduced_distances(reduced.row(i), reduced.row(j)).unwrap();
        out.true_d.push(d);
        out.lwb.push(b.lwb);
        out.zen.push(b.zen);
        out.upb.push(b.upb);
        out.cross
            .push(2.0 * reduced.row(i)[19] * reduced.row(j)[19]);
    }
    out
}

/// Criterion 2: lwb <= d <= upb within 1e-7 * d, and lwb <= zen <= upb, for
/// all five metrics.
#[test]
fn c02_bound_sandwich() {
    for metric in criterion2_metrics() {
        let s = bound_sample(&metric, 2024);
        for idx in 0..s.true_d.len() {
            let d = s.true_d[idx];
            assert!(
                s.lwb[idx] <= d + 1e-7 * d,
                "{:?} pair {idx}: lwb {} > d {d}",
                metric.kind(),
                s.lwb[idx]
            );
            assert!(
                d <= s.upb[idx] + 1e-7 * d,
                "{:?} pair {idx}: upb {} < d {d}",
                metric.kind(),
                s.upb[idx]
            );
            assert!(s.lwb[idx] <= s.zen[idx] + 1e-12 && s.zen[idx] <= s.upb[idx] + 1e-12);
        }
    }
}

/// Criterion 3: lwb^2 + 2 x_k y_k = zen^2 = upb^2 - 2 x_k y_k to 1e-9.
#[test]
fn c03_squared_identity() {
    for metric in criterion2_metrics() {
        let s = bound_sample(&metric, 2024);
        for idx in 0..s.true_d.len() {
            let zen_sq = s.zen[idx] * s.zen[idx];
            assert!((s.lwb[idx] * s.lwb[idx] + s.cross[idx] - zen_sq).abs() < 1e-9);
            assert!((s.upb[idx] * s.upb[idx] - s.cross[idx] - zen_sq).abs() < 1e-9);
        }
    }
}

/// Criterion 4: with nested reference prefixes k = 2..20, lwb never
/// decreases and upb never increases in k for any fixed pair.
#[test]
fn c04_monotonicity_in_k() {
    let data = gen_uniform(140, 100, 7);
    let refs = data.select_rows(&(0..20).collect::<Vec<_>>());
    let points = data.select_rows(&(20..140).collect::<Vec<_>>());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let pairs = random_pairs(&mut rng, points.nrows(), 50);

    let mut lwb_prev = vec![f64::NEG_INFINITY; pairs.len()];
    let mut upb_prev = vec![f64::INFINITY; pairs.len()];
    for k in 2..=20 {
        let prefix = refs.select_rows(&(0..k).collect::<Vec<_>>());
        let t = NSimplexTransform::fit(prefix, Metric::Euclidean).unwrap();
        let reduced = t.transform_rows(&points).unwrap();
        for (p, &(i, j)) in pairs.iter().enumerate() {
            let b = reduced_distances(reduced.row(i), reduced.row(j)).unwrap();
            assert!(
                b.lwb >= lwb_prev[p] - 1e-9,
                "pair {p}: lwb dropped {} -> {} at k={k}",
                lwb_prev[p],
                b.lwb
            );
            assert!(
                b.upb <= upb_prev[p] + 1e-9,
                "pair {p}: upb rose {} -> {} at k={k}",
                upb_prev[p],
                b.upb
            );
            lwb_prev[p] = b.lwb;
            upb_prev[p] = b.upb;
        }
    }
}

struct StressCell {
    kruskal: f64,
    sammon: f64,
    quadratic_raw: f64,
    spearman: f64,
    recall: f64,
}

/// Fits and measures one (method, k) cell on a uniform Euclidean dataset.
/// `method` is "zen", "pca" or "rp". Recall uses the evaluation set as the
/// corpus with the first `queries` points as queries.
fn measure_cell(
    m: usize,
    k: usize,
    seed: u64,
    method: &str,
    pair_count: usize,
    recall_k: usize,
    queries: usize,
) -> StressCell {
    let ds = dataset_for(&Metric::Euclidean, 2200, m, seed);
    let parts = sample_partition(ds.len(), &[1000, 1200], seed ^ 0x5eed).unwrap();
    let witness = ds.rows().select_rows(&parts[0]);
    let eval = ds.rows().select_rows(&parts[1]);
    let n_eval = eval.nrows();

    let reduced: RowMatrix = match method {
        "zen" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2e2);
            let t =
                NSimplexTransform::fit_from_pool(&witness, k, Metric::Euclidean, &mut rng).unwrap();
            t.transform_rows(&eval).unwrap()
        }
        "pca" => pca_fit(&witness, k)
            .unwrap()
            .transform
            .apply(&eval)
            .unwrap(),
        "rp" => rp_fit(m, k, seed ^ 0x999).unwrap().apply(&eval).unwrap(),
        other => panic!("unknown method {other}"),
    };
    let zeta_of = |i: usize, j: usize| -> f64 {
        if method == "zen" {
            reduced_distances(reduced.row(i), reduced.row(j))
                .unwrap()
                .zen
        } else {
            euclid(reduced.row(i), reduced.row(j))
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa1a);
    let pairs = distinct_pairs(&mut rng, n_eval, pair_count);
    let mut delta = Vec::with_capacity(pairs.len());
    let mut zeta = Vec::with_capacity(pairs.len());
    for &(i, j) in &pairs {
        delta.push(ds.metric().distance(eval.row(i), eval.row(j)).unwrap());
        zeta.push(zeta_of(i, j));
    }
    let sample = DistancePairSample::new(delta, zeta).unwrap();

    let query_ids: Vec<usize> = (0..queries).collect();
    let truth = knn_lists(n_eval, &query_ids, recall_k, |q, i| {
        ds.metric().distance_unchecked(eval.row(q), eval.row(i))
    })
    .unwrap();
    let found = knn_lists(n_eval, &query_ids, recall_k, zeta_of).unwrap();
    let recall = truth
        .iter()
        .zip(&found)
        .map(|(t, f)| dcg_recall(t, f).unwrap())
        .sum::<f64>()
        / queries as f64;

    StressCell {
        kruskal: kruskal_stress(&sample).unwrap(),
        sammon: sammon_stress(&sample).unwrap().stress,
        quadratic_raw: quadratic_loss(&sample),
        spearman: spearman_rho(&sample).unwrap().rho,
        recall,
    }
}

/// Criterion 5a: on 100-d uniform at k = 80, S_K(zen) < S_K(pca) <= S_K(rp),
/// majority over 5 seeds.
#[test]
fn c05a_kruskal_ordering_at_80() {
    let mut zen_beats_pca = 0;
    let mut pca_le_rp = 0;
    for seed in 0..5u64 {
        let zen = measure_cell(100, 80, 3000 + seed, "zen", 20_000, 100, 20);
        let pca = measure_cell(100, 80, 3000 + seed, "pca", 20_000, 100, 20);
        let rp = measure_cell(100, 80, 3000 + seed, "rp", 20_000, 100, 20);
        if zen.kruskal < pca.kruskal {
            zen_beats_pca += 1;
        }
        if pca.kruskal <= rp.kruskal {
            pca_le_rp += 1;
        }
    }
    assert!(
        zen_beats_pca >= 3,
        "zen beat pca on {zen_beats_pca}/5 seeds"
    );
    assert!(pca_le_rp >= 3, "pca <= rp on {pca_le_rp}/5 seeds");
}

/// Criterion 5b: S_K(zen at k=2) < S_K(pca at k=80) on 100-d uniform,
/// majority over 5 seeds. Known not to hold for uniform synthetic data:
/// measured stress puts zen@2 near 0.056 against pca@80 near 0.030 for
/// every seed and reference draw tried, under every stress variant, so
/// this check is expected to fail. It is kept faithful to the comparison
/// it encodes rather than weakened.
#[test]
fn c05b_zen_at_two_beats_pca_at_eighty() {
    let mut wins = 0;
    let mut detail = String::new();
    for seed in 0..5u64 {
        let zen = measure_cell(100, 2, 3100 + seed, "zen", 20_000, 100, 20);
        let pca = measure_cell(100, 80, 3100 + seed, "pca", 20_000, 100, 20);
        if zen.kruskal < pca.kruskal {
            wins += 1;
        }
        detail.push_str(&format!(
            "\n  seed {seed}: S_K(zen@2) = {:.4}, S_K(pca@80) = {:.4}",
            zen.kruskal, pca.kruskal
        ));
    }
    assert!(
        wins >= 3,
        "zen@2 beat pca@80 on only {wins}/5 seeds:{detail}\n\
         (known not to hold for uniform data; zen crosses pca@80 only near k=5)"
    );
}

/// Criterion 5c: 500-d uniform reduced to k = 400 — zen dominates pca and rp
/// on all five normalized measures, majority over 5 seeds.
#[test]
fn c05c_zen_dominates_at_500_to_400() {
    let mut domination = 0;
    for seed in 0..5u64 {
        let zen = measure_cell(500, 400, 3200 + seed, "zen", 20_000, 120, 30);
        let pca = measure_cell(500, 400, 3200 + seed, "pca", 20_000, 120, 30);
        let rp = measure_cell(500, 400, 3200 + seed, "rp", 20_000, 120, 30);
        let q_max = zen
            .quadratic_raw
            .max(pca.quadratic_raw)
            .max(rp.quadratic_raw);
        let quality = |c: &StressCell| {
            [
                (1.0 - c.kruskal).clamp(0.0, 1.0),
                (1.0 - c.sammon).clamp(0.0, 1.0),
                normalize_quadratic(c.quadratic_raw, q_max),
                c.spearman.clamp(0.0, 1.0),
                c.recall,
            ]
        };
        let (qz, qp, qr) = (quality(&zen), quality(&pca), quality(&rp));
        let dominates =
            qz.iter().zip(&qp).all(|(a, b)| a > b) && qz.iter().zip(&qr).all(|(a, b)| a > b);
        if dominates {
            domination += 1;
        } else {
            eprintln!("seed {seed}: zen {qz:.4?} pca {qp:.4?} rp {qr:.4?}");
        }
    }
    assert!(domination >= 3, "zen dominated on {domination}/5 seeds");
}

/// Criterion 5d: zen is the better estimator — its mean absolute error is
/// below lwb's and upb's on criterion 2's Euclidean sample.
#[test]
fn c05d_zen_mean_error_smallest() {
    let s = bound_sample(&Metric::Euclidean, 2024);
    let n = s.true_d.len() as f64;
    let mean_err = |est: &[f64]| {
        est.iter()
            .zip(&s.true_d)
            .map(|(e, d)| (e - d).abs())
            .sum::<f64>()
            / n
    };
    let (zen_err, lwb_err, upb_err) = (mean_err(&s.zen), mean_err(&s.lwb), mean_err(&s.upb));
    assert!(zen_err < lwb_err, "zen {zen_err} !< lwb {lwb_err}");
    assert!(zen_err < upb_err, "zen {zen_err} !< upb {upb_err}");
}

/// Criterion 6: PCA — orthonormal columns, contraction on every pair,
/// explained-variance knee at 80 +/- 2 for 100-d uniform, planar data fully
/// explained at k = 2.
#[test]
fn c06_pca() {
    // Orthonormality at 1e-9 and contraction on every pair.
    let witness = gen_uniform(400, 100, 60);
    let fit = pca_fit(&witness, 40).unwrap();
    for a in 0..40 {
        for b in 0..40 {
            let dot: f64 = fit
                .transform
                .column(a)
                .iter()
                .zip(fit.transform.column(b))
                .map(|(x, y)| x * y)
                .sum();
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((dot - want).abs() < 1e-9, "column dot ({a},{b}) = {dot}");
        }
    }
    let held = gen_uniform(300, 100, 61);
    let proj = fit.transform.apply(&held).unwrap();
    for i in 0..300 {
        for j in (i + 1)..300 {
            let d0 = euclid(held.row(i), held.row(j));
            let d1 = euclid(proj.row(i), proj.row(j));
            assert!(d1 <= d0 + 1e-12, "expansion at ({i},{j}): {d1} > {d0}");
        }
    }

    // Explained-variance knee for 100-d uniform data: smallest k reaching
    // 80% of total variance is 80 +/- 2.
    let big = gen_uniform(100_000, 100, 62);
    let knee_fit = pca_fit(&big, 80).unwrap();
    let knee = knee_fit.dimension_for_explained(0.8);
    assert!((78..=82).contains(&knee), "knee at {knee}");

    // Planar data in R^3 is fully explained by two components.
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    let planar = RowMatrix::from_rows(
        &(0..500)
            .map(|_| {
                let (a, b): (f64, f64) = (rng.gen(), rng.gen());
                vec![2.0 * a - b, a + b, 0.5 * a - 3.0 * b]
            })
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let planar_fit = pca_fit(&planar, 2).unwrap();
    assert!(
        (planar_fit.explained - 1.0).abs() < 1e-9,
        "explained {}",
        planar_fit.explained
    );
}

/// Criterion 7: RP — entry distribution, seed determinism, mean
/// squared-distance ratio within 5% at m=500, k=200.
#[test]
fn c07_random_projection() {
    let t = rp_fit(1000, 100, 77).unwrap();
    let entries = t.matrix_row_major();
    let root3 = 3.0_f64.sqrt();
    let total = entries.len() as f64;
    assert!(total >= 1e5);
    let frac = |v: f64| entries.iter().filter(|&&e| e == v).count() as f64 / total;
    assert!((frac(root3) - 1.0 / 6.0).abs() < 0.02);
    assert!((frac(-root3) - 1.0 / 6.0).abs() < 0.02);
    assert!((frac(0.0) - 2.0 / 3.0).abs() < 0.02);

    assert_eq!(
        rp_fit(64, 8, 5).unwrap().matrix_row_major(),
        rp_fit(64, 8, 5).unwrap().matrix_row_major()
    );

    let (m, k) = (500, 200);
    let proj = rp_fit(m, k, 78).unwrap();
    let data = gen_uniform(600, m, 79);
    let reduced = proj.apply(&data).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    let pairs = random_pairs(&mut rng, 600, 1000);
    let mut ratio = 0.0;
    for &(i, j) in &pairs {
        let d0 = euclid(data.row(i), data.row(j));
        let d1 = euclid(reduced.row(i), reduced.row(j));
        ratio += (d1 * d1) / (d0 * d0);
    }
    ratio /= pairs.len() as f64;
    assert!(
        (ratio - 1.0).abs() < 0.05,
        "mean squared-distance ratio {ratio}"
    );
}

/// Criterion 8: classical MDS exact recovery, LMDS landmark self-insertion,
/// and the zen < LMDS Kruskal ordering on 100-d probability data at k = 80.
#[test]
fn c08_mds_lmds() {
    // Classical MDS recovers realizable matrices at intrinsic dimension.
    let pts = gen_uniform(40, 3, 90);
    let d = Metric::Euclidean.pairwise(&pts).unwrap();
    let emb = mds_fit(&d, 3).unwrap();
    for i in 0..40 {
        for j in (i + 1)..40 {
            let want = d.row(i)[j];
            let got = euclid(emb.coords.row(i), emb.coords.row(j));
            assert!(
                (got - want).abs() <= 1e-6 * want,
                "({i},{j}): {got} vs {want}"
            );
        }
    }

    // LMDS self-insertion.
    let landmarks = l1_normalize(&gen_uniform(100, 100, 91)).unwrap();
    let lmds = lmds_fit(landmarks.clone(), Metric::JensenShannon, 20).unwrap();
    for i in 0..100 {
        let got = lmds.transform(landmarks.row(i)).unwrap();
        for (a, b) in got.iter().zip(lmds.landmark_embedding().row(i)) {
            assert!((a - b).abs() < 1e-6, "landmark {i}: {a} vs {b}");
        }
    }

    // zen vs LMDS on generated probability data with Jensen-Shannon at k=80.
    let ds = dataset_for(&Metric::JensenShannon, 1900, 100, 92);
    let parts = sample_partition(ds.len(), &[1000, 900], 93).unwrap();
    let witness = ds.rows().select_rows(&parts[0]);
    let eval = ds.rows().select_rows(&parts[1]);
    let mut rng = ChaCha8Rng::seed_from_u64(94);
    let zen_t =
        NSimplexTransform::fit_from_pool(&witness, 80, Metric::JensenShannon, &mut rng).unwrap();
    let zen_red = zen_t.transform_rows(&eval).unwrap();
    let lmds_t = lmds_fit(witness, Metric::JensenShannon, 80).unwrap();
    let lmds_red = lmds_t.transform_rows(&eval).unwrap();

    let pairs = distinct_pairs(&mut rng, eval.nrows(), 15_000);
    let mut delta = Vec::new();
    let mut zeta_zen = Vec::new();
    let mut zeta_lmds = Vec::new();
    for &(i, j) in &pairs {
        delta.push(ds.distance(parts[1][i], parts[1][j]));
        zeta_zen.push(
            reduced_distances(zen_red.row(i), zen_red.row(j))
                .unwrap()
                .zen,
        );
        zeta_lmds.push(euclid(lmds_red.row(i), lmds_red.row(j)));
    }
    let s_zen = kruskal_stress(&DistancePairSample::new(delta.clone(), zeta_zen).unwrap()).unwrap();
    let s_lmds = kruskal_stress(&DistancePairSample::new(delta, zeta_lmds).unwrap()).unwrap();
    assert!(s_zen < s_lmds, "S_K zen {s_zen} !< lmds {s_lmds}");
}

/// Criterion 9: the quality measures themselves.
#[test]
fn c09_quality_measures() {
    let mut rng = ChaCha8Rng::seed_from_u64(95);
    let delta: Vec<f64> = (0..500).map(|_| rng.gen::<f64>() * 4.0 + 0.1).collect();
    // Kruskal stress vanishes under strictly monotone transforms.
    for f in [|d: f64| 2.0 * d, |d: f64| d * d, |d: f64| 3.0 * d + 1.0] {
        let zeta: Vec<f64> = delta.iter().map(|&d| f(d)).collect();
        let s = kruskal_stress(&DistancePairSample::new(delta.clone(), zeta).unwrap()).unwrap();
        assert!(s < 1e-9, "stress {s} for a monotone transform");
    }

    // Spearman extremes.
    let ordered: Vec<f64> = (0..100).map(|i| i as f64).collect();
    let reversed: Vec<f64> = ordered.iter().rev().cloned().collect();
    let same = DistancePairSample::new(ordered.clone(), ordered.clone()).unwrap();
    let flip = DistancePairSample::new(ordered.clone(), reversed).unwrap();
    assert_eq!(spearman_rho(&same).unwrap().rho, 1.0);
    assert_eq!(spearman_rho(&flip).unwrap().rho, -1.0);

    // PAVA against the small-instance brute-force projection.
    for _ in 0..20 {
        let n = rng.gen_range(2..9);
        let mut zeta: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
        zeta.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let delta: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
        let fit = isotonic_fit(&zeta, &delta).unwrap();
        let oracle = brute_force_isotonic(&delta);
        for (a, b) in fit.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    // DCG constants.
    let ids: Vec<usize> = (0..1000).collect();
    let raw = dcg_recall_raw(&ids, &ids).unwrap();
    assert!((raw - 66.0435).abs() < 1e-3, "raw perfect DCG {raw}");
    assert!((raw - dcg_perfect(1000)).abs() < 1e-12);
    assert!((dcg_recall(&ids, &ids).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(relevance(500), 0.5);
}

fn brute_force_isotonic(y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0..(1u32 << (n - 1)) {
        let mut fit = vec![0.0; n];
        let mut start = 0;
        let mut prev = f64::NEG_INFINITY;
        let mut ok = true;
        for i in 0..n {
            if i == n - 1 || (mask >> i) & 1 == 1 {
                let mean: f64 = y[start..=i].iter().sum::<f64>() / (i - start + 1) as f64;
                if mean < prev {
                    ok = false;
                    break;
                }
                fit[start..=i].iter_mut().for_each(|v| *v = mean);
                prev = mean;
                start = i + 1;
            }
        }
        if !ok {
            continue;
        }
        let sse: f64 = y.iter().zip(&fit).map(|(a, b)| (a - b) * (a - b)).sum();
        if best.as_ref().is_none_or(|(s, _)| sse < *s) {
            best = Some((sse, fit));
        }
    }
    best.unwrap().1
}

/// Criterion 10: angle concentration at pi/2 with sigma near 1/sqrt(m), and
/// strictly tighter with rising dimension.
#[test]
fn c10_angle_concentration() {
    let stats = angle_distribution(100, 100_000, 11).unwrap();
    assert!(
        (stats.mean - std::f64::consts::FRAC_PI_2).abs() < 0.02,
        "mean {} off pi/2",
        stats.mean
    );
    assert!(
        (0.08..=0.12).contains(&stats.stdev),
        "stdev {}",
        stats.stdev
    );

    let s10 = angle_distribution(10, 100_000, 12).unwrap();
    let s100 = angle_distribution(100, 100_000, 12).unwrap();
    let s1000 = angle_distribution(1000, 100_000, 12).unwrap();
    assert!(s10.stdev > s100.stdev && s100.stdev > s1000.stdev);
}

/// Criterion 11: recall sanity at a 10^5 corpus — lossless transform scores
/// 1.0, a random list scores below 0.01, zen beats rp at k = 20.
#[test]
fn c11_recall_sanity() {
    let total = 101_000;
    let all = gen_uniform(total, 100, 13);
    let parts = sample_partition(total, &[1000, 100_000], 14).unwrap();
    let witness = all.select_rows(&parts[0]);
    let corpus = all.select_rows(&parts[1]);
    let n = corpus.nrows();
    let queries: Vec<usize> = (0..100).collect();
    let k_nn = 1000;

    let truth = knn_lists(n, &queries, k_nn, |q, i| {
        euclid(corpus.row(q), corpus.row(i))
    })
    .unwrap();

    // Lossless: full-rank PCA preserves distances exactly.
    let lossless = pca_fit(&witness, 100)
        .unwrap()
        .transform
        .apply(&corpus)
        .unwrap();
    let found = knn_lists(n, &queries, k_nn, |q, i| {
        euclid(lossless.row(q), lossless.row(i))
    })
    .unwrap();
    let recall_lossless: f64 = truth
        .iter()
        .zip(&found)
        .map(|(t, f)| dcg_recall(t, f).unwrap())
        .sum::<f64>()
        / queries.len() as f64;
    assert!(
        (recall_lossless - 1.0).abs() < 1e-6,
        "lossless recall {recall_lossless}"
    );

    // Null baseline: random id lists score essentially zero.
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut null_total = 0.0;
    let null_draws = 50;
    for d in 0..null_draws {
        let t = &truth[d % truth.len()];
        let random_list = sample_partition(n, &[k_nn], rng.gen())
            .unwrap()
            .pop()
            .unwrap();
        null_total += dcg_recall(t, &random_list).unwrap();
    }
    let null_mean = null_total / null_draws as f64;
    assert!(null_mean < 0.01, "null recall {null_mean}");

    // zen vs rp at k = 20.
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let zen_t =
        NSimplexTransform::fit_from_pool(&witness, 20, Metric::Euclidean, &mut rng).unwrap();
    let zen_red = zen_t.transform_rows(&corpus).unwrap();
    let zen_found = knn_lists(n, &queries, k_nn, |q, i| {
        reduced_distances(zen_red.row(q), zen_red.row(i))
            .unwrap()
            .zen
    })
    .unwrap();
    let rp_red = rp_fit(100, 20, 17).unwrap().apply(&corpus).unwrap();
    let rp_found = knn_lists(n, &queries, k_nn, |q, i| {
        euclid(rp_red.row(q), rp_red.row(i))
    })
    .unwrap();
    let mean = |lists: &[Vec<usize>]| {
        truth
            .iter()
            .zip(lists)
            .map(|(t, f)| dcg_recall(t, f).unwrap())
            .sum::<f64>()
            / queries.len() as f64
    };
    let (zen_recall, rp_recall) = (mean(&zen_found), mean(&rp_found));
    assert!(
        zen_recall > rp_recall,
        "zen recall {zen_recall} !> rp recall {rp_recall}"
    );
}

/// Degeneracy detection stays active even though the pathological case is
/// improbable: a duplicated reference must be rejected, not absorbed.
#[test]
fn degenerate_references_detected() {
    let data = gen_uniform(10, 20, 18);
    let mut rows: Vec<Vec<f64>> = (0..5).map(|i| data.row(i).to_vec()).collect();
    rows.push(rows[2].clone());
    let refs = RowMatrix::from_rows(&rows).unwrap();
    let err = NSimplexTransform::fit(refs, Metric::Euclidean).unwrap_err();
    match err {
        nsimplex::Error::DegenerateSimplex { altitude, .. } => {
            assert!(altitude <= DEGENERACY_TOLERANCE);
        }
        other => panic!("expected degenerate simplex, got {other}"),
    }
}
