//! Quality-vs-dimension profiles: every requested method at every requested
//! dimension, scored with all five normalized measures.

use anyhow::{bail, Result};
use nsimplex::data::{knn_lists, sample_partition};
use nsimplex::quality::{DistancePairSample, QualityReport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::commands::{mean_recall, sample_distinct_pairs};
use crate::config::{ExperimentConfig, Method};
use crate::csv_row;
use crate::output::CsvWriter;
use crate::runner::{derive_seed, EvalSet, Experiment, MethodFitter};

pub fn run(config: &ExperimentConfig) -> Result<()> {
    let needed = config.witness_size + config.eval_size;
    let experiment = Experiment::prepare(config, needed)?;
    let parts = sample_partition(
        experiment.dataset.len(),
        &[config.witness_size, config.eval_size],
        derive_seed(config.seed, "split", 0),
    )?;
    let fitter = MethodFitter::new(&experiment, &parts[0], config, &config.methods)?;
    let eval = EvalSet::select(&experiment, &parts[1]);
    let n_eval = eval.rows.nrows();

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, "pairs", 0));
    let pairs = sample_distinct_pairs(&mut rng, n_eval, config.pairs);
    let delta: Vec<f64> = pairs
        .iter()
        .map(|&(i, j)| {
            experiment
                .metric
                .distance_unchecked(eval.rows.row(i), eval.rows.row(j))
        })
        .collect();

    let recall_k = config.recall_k.min(n_eval - 1);
    let queries: Vec<usize> = (0..config.recall_queries.min(n_eval)).collect();
    let truth = knn_lists(n_eval, &queries, recall_k, |q, i| {
        experiment
            .metric
            .distance_unchecked(eval.rows.row(q), eval.rows.row(i))
    })?;

    let cells: Vec<(Method, usize)> = config
        .methods
        .iter()
        .flat_map(|&m| config.dims.iter().map(move |&k| (m, k)))
        .collect();
    let results: Vec<(Method, usize, Result<QualityReport>)> = cells
        .par_iter()
        .map(|&(method, k)| {
            let report = measure(
                &fitter, &eval, method, k, &pairs, &delta, &truth, &queries, recall_k,
            );
            (method, k, report)
        })
        .collect();

    let q_max = results
        .iter()
        .filter_map(|(_, _, r)| r.as_ref().ok().map(|c| c.quadratic_raw))
        .fold(0.0_f64, f64::max);

    let mut writer = CsvWriter::create(
        &config.out.join("profile.csv"),
        "profile",
        &config.provenance(),
    )?;
    writer.header(&[
        "method",
        "k",
        "kruskal",
        "sammon_norm",
        "quadloss_norm",
        "spearman",
        "recall",
    ])?;
    let mut failures = Vec::new();
    for (method, k, result) in &results {
        match result {
            Ok(report) => {
                let n = report.normalized(q_max);
                writer.row(csv_row![
                    method.name(),
                    k,
                    n.kruskal,
                    n.sammon,
                    n.quadratic,
                    n.spearman,
                    n.recall.unwrap_or(0.0)
                ])?;
            }
            Err(e) => {
                eprintln!("cell ({}, {k}) failed: {e}", method.name());
                failures.push(format!("{}@{k}", method.name()));
            }
        }
    }
    writer.finish()?;
    if !failures.is_empty() {
        bail!("{} cells failed: {}", failures.len(), failures.join(", "));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn measure(
    fitter: &MethodFitter,
    eval: &EvalSet,
    method: Method,
    k: usize,
    pairs: &[(usize, usize)],
    delta: &[f64],
    truth: &[Vec<usize>],
    queries: &[usize],
    recall_k: usize,
) -> Result<QualityReport> {
    let reducer = fitter.fit(method, k)?;
    let reduced = reducer.reduce(eval.input_for(&reducer))?;
    let zeta: Vec<f64> = pairs
        .iter()
        .map(|&(i, j)| reducer.distance(reduced.row(i), reduced.row(j)))
        .collect();
    let sample = DistancePairSample::new(delta.to_vec(), zeta)?;
    let found = knn_lists(reduced.nrows(), queries, recall_k, |q, i| {
        reducer.distance(reduced.row(q), reduced.row(i))
    })?;
    let recall = mean_recall(truth, &found)?;
    Ok(QualityReport::from_sample(&sample, Some(recall))?)
}
