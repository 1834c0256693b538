//! Shepard plots: the (reduced, true) distance scatter for every pair of a
//! small object sample, the isotonic fit curve over it, and the Kruskal
//! stress computed on the larger evaluation sample.

use anyhow::{bail, Result};
use nsimplex::data::sample_partition;
use nsimplex::quality::{isotonic_fit, kruskal_stress, DistancePairSample};
use nsimplex::Metric;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::commands::sample_distinct_pairs;
use crate::config::{ExperimentConfig, Method};
use crate::csv_row;
use crate::output::CsvWriter;
use crate::runner::{derive_seed, EvalSet, Experiment, MethodFitter};

pub fn run(config: &ExperimentConfig) -> Result<()> {
    let k = config.dims[0];
    let needed = config.witness_size + config.eval_size + config.shepard_size;
    let experiment = Experiment::prepare(config, needed)?;
    let parts = sample_partition(
        experiment.dataset.len(),
        &[config.witness_size, config.eval_size, config.shepard_size],
        derive_seed(config.seed, "split", 0),
    )?;
    let fitter = MethodFitter::new(&experiment, &parts[0], config, &config.methods)?;
    let eval = EvalSet::select(&experiment, &parts[1]);
    let shepard = EvalSet::select(&experiment, &parts[2]);

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, "pairs", 0));
    let stress_pairs = sample_distinct_pairs(&mut rng, eval.rows.nrows(), config.pairs);
    let stress_delta: Vec<f64> = stress_pairs
        .iter()
        .map(|&(i, j)| {
            experiment
                .metric
                .distance_unchecked(eval.rows.row(i), eval.rows.row(j))
        })
        .collect();

    let mut summary = CsvWriter::create(
        &config.out.join("shepard.csv"),
        "shepard",
        &config.provenance(),
    )?;
    summary.header(&["method", "k", "kruskal"])?;
    let mut failures = Vec::new();
    for &method in &config.methods {
        match run_method(
            config,
            &experiment.metric,
            &fitter,
            &eval,
            &shepard,
            method,
            k,
            &stress_pairs,
            &stress_delta,
        ) {
            Ok(stress) => {
                summary.row(csv_row![method.name(), k, stress])?;
            }
            Err(e) => {
                eprintln!("method {} failed: {e}", method.name());
                failures.push(method.name().to_string());
            }
        }
    }
    summary.finish()?;
    if !failures.is_empty() {
        bail!("{} methods failed: {}", failures.len(), failures.join(", "));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_method(
    config: &ExperimentConfig,
    metric: &Metric,
    fitter: &MethodFitter,
    eval: &EvalSet,
    shepard: &EvalSet,
    method: Method,
    k: usize,
    stress_pairs: &[(usize, usize)],
    stress_delta: &[f64],
) -> Result<f64> {
    let reducer = fitter.fit(method, k)?;

    // Scatter: every pair of the small sample.
    let reduced_small = reducer.reduce(shepard.input_for(&reducer))?;
    let n = reduced_small.nrows();
    let mut zeta = Vec::with_capacity(n * (n - 1) / 2);
    let mut delta = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            zeta.push(reducer.distance(reduced_small.row(i), reduced_small.row(j)));
            delta.push(metric.distance_unchecked(shepard.rows.row(i), shepard.rows.row(j)));
        }
    }
    let scatter_path = config
        .out
        .join(format!("shepard_scatter_{}_k{k}.csv", method.name()));
    let mut scatter = CsvWriter::create(&scatter_path, "shepard", &config.provenance())?;
    scatter.header(&["zeta", "delta"])?;
    for (z, d) in zeta.iter().zip(&delta) {
        scatter.row(csv_row![z, d])?;
    }
    scatter.finish()?;

    // Isotonic fit curve over the scatter, emitted in zeta order.
    let dstar = isotonic_fit(&zeta, &delta)?;
    let mut order: Vec<usize> = (0..zeta.len()).collect();
    order.sort_by(|&a, &b| zeta[a].partial_cmp(&zeta[b]).unwrap());
    let fit_path = config
        .out
        .join(format!("shepard_fit_{}_k{k}.csv", method.name()));
    let mut fit = CsvWriter::create(&fit_path, "shepard", &config.provenance())?;
    fit.header(&["zeta", "dstar"])?;
    for idx in order {
        fit.row(csv_row![zeta[idx], dstar[idx]])?;
    }
    fit.finish()?;

    // Stress on the large sample.
    let reduced_eval = reducer.reduce(eval.input_for(&reducer))?;
    let stress_zeta: Vec<f64> = stress_pairs
        .iter()
        .map(|&(i, j)| reducer.distance(reduced_eval.row(i), reduced_eval.row(j)))
        .collect();
    let sample = DistancePairSample::new(stress_delta.to_vec(), stress_zeta)?;
    Ok(kruskal_stress(&sample)?)
}
