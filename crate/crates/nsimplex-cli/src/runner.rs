//! Shared experiment machinery: dataset preparation, seeded splits, and a
//! uniform interface over the seven reduction methods.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use nsimplex::baselines::{
    lmds_fit, mds_extend, pca_fit, rp_fit, LinearTransform, LmdsTransform, MdsSolution,
};
use nsimplex::data::{
    gen_gaussian, gen_uniform, l1_normalize, l2_normalize, load_csv, load_fvecs, Dataset,
};
use nsimplex::{Estimator, Metric, NSimplexTransform, RowMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{DatasetSpec, ExperimentConfig, Method, MetricChoice};

/// Stable per-purpose seed derivation (FNV-1a over the label and values);
/// every cell draws from its own stream, so results do not depend on the
/// order or parallelism of cell execution.
pub fn derive_seed(base: u64, label: &str, value: u64) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in label
        .bytes()
        .chain(base.to_le_bytes())
        .chain(value.to_le_bytes())
    {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// The prepared data for one experiment: rows under the chosen metric, plus
/// a coordinate view for the matrix methods (l2-normalised when the metric
/// is cosine, so Euclidean distances over it equal the metric).
pub struct Experiment {
    pub dataset: Dataset,
    pub coords: Option<RowMatrix>,
    pub metric: Metric,
}

impl Experiment {
    /// Loads or generates at least `needed` rows. Generators extend
    /// themselves beyond `n` when a command needs more; files must simply
    /// be large enough.
    pub fn prepare(config: &ExperimentConfig, needed: usize) -> Result<Self> {
        let n = config.n.max(needed);
        let raw = match &config.dataset {
            DatasetSpec::GenUniform => gen_uniform(n, config.m, config.seed),
            DatasetSpec::GenGaussian => gen_gaussian(n, config.m, config.seed),
            DatasetSpec::File(path) => load_rows(path)?,
        };
        if raw.nrows() < needed {
            bail!(
                "dataset {} has {} rows but the experiment needs {needed}",
                config.dataset,
                raw.nrows()
            );
        }
        let metric = config.metric.to_metric();
        let rows = match config.metric {
            MetricChoice::JensenShannon | MetricChoice::Triangular => {
                // Generated or loaded data is normalised into the metric's
                // domain; gaussian data cannot be (negative components).
                let shifted = ensure_nonnegative(&raw)?;
                l1_normalize(&shifted).context("L1-normalising rows for a probability metric")?
            }
            _ => raw,
        };
        let coords = match config.metric {
            MetricChoice::Euclidean => Some(rows.clone()),
            MetricChoice::Cosine => Some(l2_normalize(&rows)?),
            _ => None,
        };
        let dataset = Dataset::new(rows, metric.clone(), config.dataset.to_string())
            .map_err(|e| anyhow!("dataset rejected by metric domain checks: {e}"))?;
        Ok(Self {
            dataset,
            coords,
            metric,
        })
    }

    pub fn rows(&self) -> &RowMatrix {
        self.dataset.rows()
    }
}

pub fn load_rows(path: &Path) -> Result<RowMatrix> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let rows = match ext {
        "fvecs" => load_fvecs(path)?,
        "csv" => load_csv(path)?,
        other => bail!("unsupported dataset extension {other:?} (use .fvecs or .csv)"),
    };
    Ok(rows)
}

pub fn write_rows(path: &Path, rows: &RowMatrix) -> Result<()> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    match ext {
        "fvecs" => nsimplex::data::write_fvecs(path, rows)?,
        "csv" => nsimplex::data::write_csv(path, rows)?,
        other => bail!("unsupported output extension {other:?} (use .fvecs or .csv)"),
    }
    Ok(())
}

fn ensure_nonnegative(raw: &RowMatrix) -> Result<RowMatrix> {
    if raw.as_slice().iter().all(|v| *v >= 0.0) {
        return Ok(raw.clone());
    }
    bail!("probability metrics need nonnegative data (generate with gen-uniform)")
}

/// A fitted reduction with a uniform reduce/distance interface.
pub enum Reducer {
    Simplex {
        transform: NSimplexTransform,
        estimator: Estimator,
    },
    Linear(LinearTransform),
    Lmds(LmdsTransform),
}

impl Reducer {
    pub fn reduce(&self, rows: &RowMatrix) -> Result<RowMatrix> {
        Ok(match self {
            Reducer::Simplex { transform, .. } => transform.transform_rows(rows)?,
            Reducer::Linear(t) => t.apply(rows)?,
            Reducer::Lmds(t) => t.transform_rows(rows)?,
        })
    }

    /// Single-object application (the looped path benchmarks compare
    /// against batch application).
    pub fn reduce_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        Ok(match self {
            Reducer::Simplex { transform, .. } => transform.transform(row)?.into_vec(),
            Reducer::Linear(t) => t.apply_row(row)?,
            Reducer::Lmds(t) => t.transform(row)?,
        })
    }

    /// The reduced-space distance this method is scored with.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Reducer::Simplex { estimator, .. } => estimator.eval(a, b).unwrap(),
            _ => euclid(a, b),
        }
    }
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Reusable fitting state for one witness set: matrix methods see the
/// coordinate view, the simplex and landmark methods see the metric. The
/// MDS/LMDS eigendecompositions are solved once and sliced per dimension.
pub struct MethodFitter<'a> {
    experiment: &'a Experiment,
    witness: RowMatrix,
    coord_witness: Option<RowMatrix>,
    seed: u64,
    mds: Option<(MdsSolution, RowMatrix)>, // solution + witness distance matrix
    lmds: Option<(MdsSolution, RowMatrix, RowMatrix)>, // solution, distances, landmarks
}

impl<'a> MethodFitter<'a> {
    pub fn new(
        experiment: &'a Experiment,
        witness_indices: &[usize],
        config: &ExperimentConfig,
        methods: &[Method],
    ) -> Result<Self> {
        let witness = experiment.rows().select_rows(witness_indices);
        let coord_witness = experiment
            .coords
            .as_ref()
            .map(|c| c.select_rows(witness_indices));
        let mut fitter = Self {
            experiment,
            witness,
            coord_witness,
            seed: config.seed,
            mds: None,
            lmds: None,
        };
        if methods.contains(&Method::Mds) {
            let coords = fitter
                .coord_witness
                .as_ref()
                .ok_or_else(|| anyhow!("mds needs a coordinate metric"))?;
            let d = Metric::Euclidean.pairwise(coords)?;
            fitter.mds = Some((MdsSolution::solve(&d)?, d));
        }
        if methods.contains(&Method::Lmds) {
            let l = config.lmds_landmarks.min(fitter.witness.nrows());
            let landmarks = fitter.witness.select_rows(&(0..l).collect::<Vec<_>>());
            let d = experiment.metric.pairwise(&landmarks)?;
            fitter.lmds = Some((MdsSolution::solve(&d)?, d, landmarks));
        }
        Ok(fitter)
    }

    pub fn fit(&self, method: Method, k: usize) -> Result<Reducer> {
        if k == 0 {
            bail!("k must be positive");
        }
        match method {
            Method::Zen | Method::Lwb | Method::Upb => {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, "refs", k as u64));
                let transform = NSimplexTransform::fit_from_pool(
                    &self.witness,
                    k,
                    self.experiment.metric.clone(),
                    &mut rng,
                )?;
                let estimator = match method {
                    Method::Zen => Estimator::Zen,
                    Method::Lwb => Estimator::Lwb,
                    Method::Upb => Estimator::Upb,
                    _ => unreachable!(),
                };
                Ok(Reducer::Simplex {
                    transform,
                    estimator,
                })
            }
            Method::Pca => {
                let coords = self
                    .coord_witness
                    .as_ref()
                    .ok_or_else(|| anyhow!("pca needs a coordinate metric"))?;
                Ok(Reducer::Linear(pca_fit(coords, k)?.transform))
            }
            Method::Rp => {
                let coords = self
                    .coord_witness
                    .as_ref()
                    .ok_or_else(|| anyhow!("rp needs a coordinate metric"))?;
                let t = rp_fit(coords.ncols(), k, derive_seed(self.seed, "rp", k as u64))?;
                Ok(Reducer::Linear(t))
            }
            Method::Mds => {
                let (solution, _) = self
                    .mds
                    .as_ref()
                    .ok_or_else(|| anyhow!("mds solution missing"))?;
                let coords = self.coord_witness.as_ref().unwrap();
                let (embedding, _) = solution.embedding(k);
                let ext = mds_extend(coords, &embedding)?;
                Ok(Reducer::Linear(ext.transform))
            }
            Method::Lmds => {
                let (solution, distances, landmarks) = self
                    .lmds
                    .as_ref()
                    .ok_or_else(|| anyhow!("lmds solution missing"))?;
                Ok(Reducer::Lmds(LmdsTransform::from_solution(
                    landmarks.clone(),
                    self.experiment.metric.clone(),
                    distances,
                    solution,
                    k,
                )?))
            }
        }
    }

    /// One-off fit without the profile caches (used by the `fit` command).
    pub fn fit_standalone(
        experiment: &Experiment,
        witness_indices: &[usize],
        config: &ExperimentConfig,
        method: Method,
        k: usize,
    ) -> Result<Reducer> {
        match method {
            Method::Lmds => {
                let witness = experiment.rows().select_rows(witness_indices);
                let l = config.lmds_landmarks.min(witness.nrows());
                let landmarks = witness.select_rows(&(0..l).collect::<Vec<_>>());
                Ok(Reducer::Lmds(lmds_fit(
                    landmarks,
                    experiment.metric.clone(),
                    k,
                )?))
            }
            _ => {
                let fitter = MethodFitter::new(
                    experiment,
                    witness_indices,
                    config,
                    std::slice::from_ref(&method),
                )?;
                fitter.fit(method, k)
            }
        }
    }
}

/// The sampled evaluation view a method's reductions get scored against.
pub struct EvalSet {
    pub rows: RowMatrix,
    pub coords: Option<RowMatrix>,
}

impl EvalSet {
    pub fn select(experiment: &Experiment, indices: &[usize]) -> Self {
        Self {
            rows: experiment.rows().select_rows(indices),
            coords: experiment.coords.as_ref().map(|c| c.select_rows(indices)),
        }
    }

    /// Rows in the representation the given reducer consumes.
    pub fn input_for(&self, reducer: &Reducer) -> &RowMatrix {
        match reducer {
            Reducer::Linear(_) => self.coords.as_ref().unwrap_or(&self.rows),
            _ => &self.rows,
        }
    }
}
