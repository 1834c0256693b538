//! k-NN recall per (method, dimension) against a disk-cached ground truth.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use nsimplex::data::{knn_lists, sample_partition};
use rayon::prelude::*;

use crate::commands::mean_recall;
use crate::config::{ExperimentConfig, Method};
use crate::csv_row;
use crate::output::CsvWriter;
use crate::runner::{derive_seed, EvalSet, Experiment, MethodFitter};

pub fn run(config: &ExperimentConfig) -> Result<()> {
    let needed = config.witness_size + config.recall_corpus;
    let experiment = Experiment::prepare(config, needed)?;
    let parts = sample_partition(
        experiment.dataset.len(),
        &[config.witness_size, config.recall_corpus],
        derive_seed(config.seed, "split", 0),
    )?;
    let fitter = MethodFitter::new(&experiment, &parts[0], config, &config.methods)?;
    let corpus = EvalSet::select(&experiment, &parts[1]);
    let n = corpus.rows.nrows();
    let k_nn = config.recall_k.min(n - 1);
    let queries: Vec<usize> = (0..config.recall_queries.min(n)).collect();

    let truth = load_or_compute_truth(config, &experiment, &corpus, &queries, k_nn)?;

    let mut writer = CsvWriter::create(
        &config.out.join("recall.csv"),
        "recall",
        &config.provenance(),
    )?;
    writer.header(&["method", "k", "recall"])?;

    let cells: Vec<(Method, usize)> = config
        .methods
        .iter()
        .flat_map(|&m| config.dims.iter().map(move |&k| (m, k)))
        .collect();
    let results: Vec<(Method, usize, Result<f64>)> = cells
        .par_iter()
        .map(|&(method, k)| {
            let r = (|| -> Result<f64> {
                let reducer = fitter.fit(method, k)?;
                let reduced = reducer.reduce(corpus.input_for(&reducer))?;
                let found = knn_lists(n, &queries, k_nn, |q, i| {
                    reducer.distance(reduced.row(q), reduced.row(i))
                })?;
                mean_recall(&truth, &found)
            })();
            (method, k, r)
        })
        .collect();

    let mut failures = Vec::new();
    for (method, k, result) in &results {
        match result {
            Ok(recall) => writer.row(csv_row![method.name(), k, recall])?,
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

const CACHE_MAGIC: &[u8; 4] = b"NSGT";

fn cache_path(config: &ExperimentConfig, k_nn: usize, queries: usize) -> PathBuf {
    // The corpus is a seeded split, so everything that shapes the split
    // (population size, witness size, seed) must key the cache too.
    let key = format!(
        "{}|{}|{}|{}|{}|{}|{}|{}|{}",
        config.dataset,
        config.metric.name(),
        config.seed,
        config.recall_corpus,
        queries,
        k_nn,
        config.m,
        config.n,
        config.witness_size
    );
    let mut h: u64 = 0xcbf29ce484222325;
    for b in key.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    config.out.join(format!("gt-{h:016x}.gtc"))
}

/// Ground truth is cached on disk keyed by (dataset, metric, seed, sizes);
/// a cache whose header disagrees with the request is an error.
fn load_or_compute_truth(
    config: &ExperimentConfig,
    experiment: &Experiment,
    corpus: &EvalSet,
    queries: &[usize],
    k_nn: usize,
) -> Result<Vec<Vec<usize>>> {
    let path = cache_path(config, k_nn, queries.len());
    if path.exists() {
        return read_cache(&path, queries.len(), k_nn)
            .with_context(|| format!("reading ground-truth cache {}", path.display()));
    }
    let truth = knn_lists(corpus.rows.nrows(), queries, k_nn, |q, i| {
        experiment
            .metric
            .distance_unchecked(corpus.rows.row(q), corpus.rows.row(i))
    })?;
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut w = BufWriter::new(File::create(&path)?);
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&(queries.len() as u32).to_le_bytes())?;
    w.write_all(&(k_nn as u32).to_le_bytes())?;
    for list in &truth {
        for &id in list {
            w.write_all(&(id as u64).to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(truth)
}

fn read_cache(path: &std::path::Path, queries: usize, k_nn: usize) -> Result<Vec<Vec<usize>>> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != CACHE_MAGIC {
        bail!("bad cache magic");
    }
    let mut buf4 = [0u8; 4];
    r.read_exact(&mut buf4)?;
    let q = u32::from_le_bytes(buf4) as usize;
    r.read_exact(&mut buf4)?;
    let k = u32::from_le_bytes(buf4) as usize;
    if q != queries || k != k_nn {
        bail!("cache holds {q} queries x {k} neighbours, expected {queries} x {k_nn}");
    }
    let mut out = Vec::with_capacity(q);
    let mut buf8 = [0u8; 8];
    for _ in 0..q {
        let mut list = Vec::with_capacity(k);
        for _ in 0..k {
            r.read_exact(&mut buf8)?;
            list.push(u64::from_le_bytes(buf8) as usize);
        }
        out.push(list);
    }
    Ok(out)
}
