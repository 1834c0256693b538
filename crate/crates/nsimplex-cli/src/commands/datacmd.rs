//! Dataset and transform file commands: generate, fit, transform.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use nsimplex::data::sample_partition;
use nsimplex::persist::{load_transform, save_transform, PersistedTransform};
use nsimplex::RowMatrix;

use crate::config::{DatasetSpec, ExperimentConfig};
use crate::runner::{derive_seed, Experiment, MethodFitter, Reducer};

/// Writes a generated dataset to the `out` file (.fvecs or .csv).
pub fn generate(config: &ExperimentConfig) -> Result<()> {
    let rows = match config.dataset {
        DatasetSpec::GenUniform => nsimplex::data::gen_uniform(config.n, config.m, config.seed),
        DatasetSpec::GenGaussian => nsimplex::data::gen_gaussian(config.n, config.m, config.seed),
        DatasetSpec::File(_) => {
            bail!("generate needs a generator dataset (gen-uniform/gen-gaussian)")
        }
    };
    ensure_parent(&config.out)?;
    crate::runner::write_rows(&config.out, &rows)?;
    eprintln!(
        "wrote {} x {} rows to {}",
        rows.nrows(),
        rows.ncols(),
        config.out.display()
    );
    Ok(())
}

/// Fits one method at the first requested dimension on the witness set and
/// persists it to the `out` file.
pub fn fit(config: &ExperimentConfig) -> Result<()> {
    let method = *config
        .methods
        .first()
        .ok_or_else(|| anyhow!("fit needs a method"))?;
    let k = config.dims[0];
    let experiment = Experiment::prepare(config, config.witness_size)?;
    let parts = sample_partition(
        experiment.dataset.len(),
        &[config.witness_size],
        derive_seed(config.seed, "split", 0),
    )?;
    let reducer = MethodFitter::fit_standalone(&experiment, &parts[0], config, method, k)?;
    let persisted = match reducer {
        Reducer::Simplex { transform, .. } => PersistedTransform::Simplex(transform),
        Reducer::Linear(t) => PersistedTransform::Linear(t),
        Reducer::Lmds(t) => PersistedTransform::Lmds(t),
    };
    ensure_parent(&config.out)?;
    save_transform(&config.out, &persisted)?;
    eprintln!(
        "fitted {} at k={k} and wrote a {} payload to {}",
        method.name(),
        persisted.kind_name(),
        config.out.display()
    );
    Ok(())
}

/// Applies a persisted transform to a dataset file and writes the reduced
/// rows to the `out` file.
pub fn transform(config: &ExperimentConfig, transform_path: &Path) -> Result<()> {
    let rows = match &config.dataset {
        DatasetSpec::File(path) => crate::runner::load_rows(path)?,
        spec => bail!("transform needs a dataset file, not {spec}"),
    };
    let persisted = load_transform(transform_path)
        .with_context(|| format!("loading {}", transform_path.display()))?;
    let reduced: RowMatrix = match &persisted {
        PersistedTransform::Simplex(t) => t.transform_rows(&rows)?,
        PersistedTransform::Linear(t) => t.apply(&rows)?,
        PersistedTransform::Lmds(t) => t.transform_rows(&rows)?,
    };
    ensure_parent(&config.out)?;
    crate::runner::write_rows(&config.out, &reduced)?;
    eprintln!(
        "applied {} transform to {} rows -> {}",
        persisted.kind_name(),
        reduced.nrows(),
        config.out.display()
    );
    Ok(())
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(())
}
