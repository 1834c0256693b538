//! Wall-time benchmarks: transform creation cost and per-object application
//! cost, medians over repeated runs.
//!
//! The timing columns are measurements and naturally vary between runs;
//! they are the one exception to the byte-identical-body rule (method and
//! dimension columns remain deterministic).

use std::time::Instant;

use anyhow::{bail, Result};
use nsimplex::data::sample_partition;

use crate::config::{ExperimentConfig, Method};
use crate::csv_row;
use crate::output::CsvWriter;
use crate::runner::{derive_seed, EvalSet, Experiment, MethodFitter};

pub fn run(config: &ExperimentConfig) -> Result<()> {
    let needed = config.witness_size + config.bench_objects;
    let experiment = Experiment::prepare(config, needed)?;
    let parts = sample_partition(
        experiment.dataset.len(),
        &[config.witness_size, config.bench_objects],
        derive_seed(config.seed, "split", 0),
    )?;
    let batch = EvalSet::select(&experiment, &parts[1]);

    let mut writer =
        CsvWriter::create(&config.out.join("bench.csv"), "bench", &config.provenance())?;
    writer.header(&[
        "method",
        "k",
        "fit_seconds",
        "transform_per_object_seconds",
        "transform_per_object_looped_seconds",
    ])?;
    let mut failures = Vec::new();
    for &method in &config.methods {
        for &k in &config.dims {
            match bench_cell(config, &experiment, &parts[0], &batch, method, k) {
                Ok((fit_s, per_object_s, looped_s)) => {
                    writer.row(csv_row![method.name(), k, fit_s, per_object_s, looped_s])?;
                }
                Err(e) => {
                    eprintln!("cell ({}, {k}) failed: {e}", method.name());
                    failures.push(format!("{}@{k}", method.name()));
                }
            }
        }
    }
    writer.finish()?;
    if !failures.is_empty() {
        bail!("{} cells failed: {}", failures.len(), failures.join(", "));
    }
    Ok(())
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs[xs.len() / 2]
}

fn bench_cell(
    config: &ExperimentConfig,
    experiment: &Experiment,
    witness_indices: &[usize],
    batch: &EvalSet,
    method: Method,
    k: usize,
) -> Result<(f64, f64, f64)> {
    let reps = config.bench_reps.max(5);
    let mut fit_times = Vec::with_capacity(reps);
    let mut per_object = Vec::with_capacity(reps);
    let mut reducer = None;
    for _ in 0..reps {
        // The timed region covers the whole transform-creation pipeline,
        // including the pairwise distances and eigendecomposition that
        // MDS-family fits need.
        let started = Instant::now();
        let fitter = MethodFitter::new(
            experiment,
            witness_indices,
            config,
            std::slice::from_ref(&method),
        )?;
        let fitted = fitter.fit(method, k)?;
        fit_times.push(started.elapsed().as_secs_f64());
        reducer = Some(fitted);
    }
    let reducer = reducer.unwrap();
    let input = batch.input_for(&reducer);
    let mut looped = Vec::with_capacity(reps);
    for _ in 0..reps {
        let started = Instant::now();
        let out = reducer.reduce(input)?;
        let elapsed = started.elapsed().as_secs_f64();
        per_object.push(elapsed / out.nrows() as f64);

        let started = Instant::now();
        for i in 0..input.nrows() {
            std::hint::black_box(reducer.reduce_row(input.row(i))?);
        }
        looped.push(started.elapsed().as_secs_f64() / input.nrows() as f64);
    }
    Ok((median(fit_times), median(per_object), median(looped)))
}
