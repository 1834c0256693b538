//! Experiment configuration: defaults, flat key=value config files,
//! `NSIMPLEX_*` environment overrides and command-line overrides, applied in
//! that order (later wins).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

/// Environment variables `NSIMPLEX_<KEY>` (key upper-cased) override config
/// file values; command-line flags override both.
pub const ENV_PREFIX: &str = "NSIMPLEX_";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Zen,
    Lwb,
    Upb,
    Pca,
    Mds,
    Lmds,
    Rp,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Zen => "zen",
            Method::Lwb => "lwb",
            Method::Upb => "upb",
            Method::Pca => "pca",
            Method::Mds => "mds",
            Method::Lmds => "lmds",
            Method::Rp => "rp",
        }
    }
}

impl FromStr for Method {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "zen" => Method::Zen,
            "lwb" => Method::Lwb,
            "upb" => Method::Upb,
            "pca" => Method::Pca,
            "mds" => Method::Mds,
            "lmds" => Method::Lmds,
            "rp" => Method::Rp,
            other => bail!("unknown method {other:?} (zen|lwb|upb|pca|mds|lmds|rp)"),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricChoice {
    Euclidean,
    Cosine,
    JensenShannon,
    Triangular,
}

impl MetricChoice {
    pub fn name(self) -> &'static str {
        match self {
            MetricChoice::Euclidean => "euclidean",
            MetricChoice::Cosine => "cosine",
            MetricChoice::JensenShannon => "jensen-shannon",
            MetricChoice::Triangular => "triangular",
        }
    }

    pub fn to_metric(self) -> nsimplex::Metric {
        match self {
            MetricChoice::Euclidean => nsimplex::Metric::Euclidean,
            MetricChoice::Cosine => nsimplex::Metric::CosineL2Normed,
            MetricChoice::JensenShannon => nsimplex::Metric::JensenShannon,
            MetricChoice::Triangular => nsimplex::Metric::Triangular,
        }
    }
}

impl FromStr for MetricChoice {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "euclidean" | "l2" => MetricChoice::Euclidean,
            "cosine" | "cosine-l2" => MetricChoice::Cosine,
            "jensen-shannon" | "jsd" => MetricChoice::JensenShannon,
            "triangular" | "tri" => MetricChoice::Triangular,
            other => bail!("unknown metric {other:?} (euclidean|cosine|jensen-shannon|triangular)"),
        })
    }
}

/// Where the data comes from: a generator or a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatasetSpec {
    GenUniform,
    GenGaussian,
    File(PathBuf),
}

impl DatasetSpec {
    pub fn parse(s: &str) -> Self {
        match s.trim() {
            "gen-uniform" | "uniform" => DatasetSpec::GenUniform,
            "gen-gaussian" | "gaussian" => DatasetSpec::GenGaussian,
            path => DatasetSpec::File(PathBuf::from(path)),
        }
    }
}

impl fmt::Display for DatasetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetSpec::GenUniform => write!(f, "gen-uniform"),
            DatasetSpec::GenGaussian => write!(f, "gen-gaussian"),
            DatasetSpec::File(p) => write!(f, "{}", p.display()),
        }
    }
}

/// Everything a command needs. Defaults mirror the standard experimental
/// sample sizes: witness 1000, 50-object Shepard sample, 10^4 stress
/// objects with 10^5 sampled pairs, and a 10^6-object recall corpus with
/// 1000 neighbours for 100 queries.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    pub metric: MetricChoice,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    /// Target dimensions; stored strictly decreasing and deduplicated.
    pub dims: Vec<usize>,
    pub witness_size: usize,
    pub eval_size: usize,
    pub shepard_size: usize,
    pub pairs: usize,
    pub lmds_landmarks: usize,
    pub recall_corpus: usize,
    pub recall_queries: usize,
    pub recall_k: usize,
    pub bench_reps: usize,
    pub bench_objects: usize,
    pub angle_samples: usize,
    pub angle_bins: usize,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetSpec::GenUniform,
            metric: MetricChoice::Euclidean,
            n: 12_000,
            m: 100,
            seed: 0,
            methods: vec![Method::Zen, Method::Pca, Method::Rp],
            dims: vec![80, 40, 20, 10, 5, 2],
            witness_size: 1000,
            eval_size: 10_000,
            shepard_size: 50,
            pairs: 100_000,
            lmds_landmarks: 1000,
            recall_corpus: 1_000_000,
            recall_queries: 100,
            recall_k: 1000,
            bench_reps: 5,
            bench_objects: 200,
            angle_samples: 100_000,
            angle_bins: 64,
            out: PathBuf::from("out"),
        }
    }
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<T>()
                .map_err(|e| anyhow!("bad list item {t:?}: {e}"))
        })
        .collect()
}

impl ExperimentConfig {
    /// Applies one key=value assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "dataset" => self.dataset = DatasetSpec::parse(value),
            "metric" => self.metric = value.parse()?,
            "n" => self.n = value.parse().context("n")?,
            "m" => self.m = value.parse().context("m")?,
            "seed" => self.seed = value.parse().context("seed")?,
            "methods" => self.methods = parse_list(value)?,
            "dims" => self.dims = parse_list(value)?,
            "witness_size" => self.witness_size = value.parse().context("witness_size")?,
            "eval_size" => self.eval_size = value.parse().context("eval_size")?,
            "shepard_size" => self.shepard_size = value.parse().context("shepard_size")?,
            "pairs" => self.pairs = value.parse().context("pairs")?,
            "lmds_landmarks" => self.lmds_landmarks = value.parse().context("lmds_landmarks")?,
            "recall_corpus" => self.recall_corpus = value.parse().context("recall_corpus")?,
            "recall_queries" => self.recall_queries = value.parse().context("recall_queries")?,
            "recall_k" => self.recall_k = value.parse().context("recall_k")?,
            "bench_reps" => self.bench_reps = value.parse().context("bench_reps")?,
            "bench_objects" => self.bench_objects = value.parse().context("bench_objects")?,
            "angle_samples" => self.angle_samples = value.parse().context("angle_samples")?,
            "angle_bins" => self.angle_bins = value.parse().context("angle_bins")?,
            "out" => self.out = PathBuf::from(value),
            other => bail!("unknown config key {other:?}"),
        }
        Ok(())
    }

    /// Flat key=value file; '#' starts a comment, blank lines are ignored.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}:{}: expected key=value", path.display(), lineno + 1))?;
            self.set(key.trim(), value.trim())
                .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        }
        Ok(())
    }

    /// `NSIMPLEX_<KEY>` environment overrides for every config key.
    pub fn apply_env(&mut self) -> Result<()> {
        for key in [
            "dataset",
            "metric",
            "n",
            "m",
            "seed",
            "methods",
            "dims",
            "witness_size",
            "eval_size",
            "shepard_size",
            "pairs",
            "lmds_landmarks",
            "recall_corpus",
            "recall_queries",
            "recall_k",
            "bench_reps",
            "bench_objects",
            "angle_samples",
            "angle_bins",
            "out",
        ] {
            let var = format!("{ENV_PREFIX}{}", key.to_ascii_uppercase());
            if let Ok(value) = std::env::var(&var) {
                self.set(key, &value).with_context(|| var)?;
            }
        }
        Ok(())
    }

    /// Normalizes the dimension list: deduplicate, sort strictly decreasing.
    pub fn finalize(&mut self) -> Result<()> {
        if self.dims.is_empty() {
            bail!("dims must not be empty");
        }
        self.dims.sort_unstable_by(|a, b| b.cmp(a));
        self.dims.dedup();
        if self.methods.is_empty() {
            bail!("methods must not be empty");
        }
        Ok(())
    }

    /// Key=value view for provenance headers.
    pub fn provenance(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        map.insert("dataset".into(), self.dataset.to_string());
        map.insert("metric".into(), self.metric.name().into());
        map.insert("n".into(), self.n.to_string());
        map.insert("m".into(), self.m.to_string());
        map.insert("seed".into(), self.seed.to_string());
        map.insert(
            "methods".into(),
            self.methods
                .iter()
                .map(|m| m.name())
                .collect::<Vec<_>>()
                .join(","),
        );
        map.insert(
            "dims".into(),
            self.dims
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        map.insert("witness_size".into(), self.witness_size.to_string());
        map.insert("eval_size".into(), self.eval_size.to_string());
        map.insert("shepard_size".into(), self.shepard_size.to_string());
        map.insert("pairs".into(), self.pairs.to_string());
        map.insert("lmds_landmarks".into(), self.lmds_landmarks.to_string());
        map.insert("recall_corpus".into(), self.recall_corpus.to_string());
        map.insert("recall_queries".into(), self.recall_queries.to_string());
        map.insert("recall_k".into(), self.recall_k.to_string());
        map
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_override() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.cfg");
        std::fs::write(&path, "seed = 9\nmethods = zen,rp # comment\ndims=5,80,5\n").unwrap();
        let mut cfg = ExperimentConfig::default();
        cfg.apply_file(&path).unwrap();
        cfg.set("seed", "11").unwrap();
        cfg.finalize().unwrap();
        assert_eq!(cfg.seed, 11);
        assert_eq!(cfg.methods, vec![Method::Zen, Method::Rp]);
        assert_eq!(cfg.dims, vec![80, 5]); // deduplicated, decreasing
    }

    #[test]
    fn rejects_unknown_keys() {
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.set("no_such_key", "1").is_err());
        assert!(cfg.set("methods", "zen,warp").is_err());
    }
}
