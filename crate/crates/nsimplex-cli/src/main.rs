//! Experiment driver over the nsimplex library: reduction-quality
//! experiments emitted as CSV files with provenance headers.

mod commands;
mod config;
mod output;
mod runner;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use config::ExperimentConfig;

#[derive(Parser)]
#[command(
    name = "nsimplex",
    version,
    about = "Dimensionality-reduction experiments: simplex transforms vs RP/PCA/MDS/LMDS",
    after_help = "Configuration precedence: defaults < --config file < NSIMPLEX_* env vars < flags.\n\
                  Config keys: dataset metric n m seed methods dims witness_size eval_size\n\
                  shepard_size pairs lmds_landmarks recall_corpus recall_queries recall_k\n\
                  bench_reps bench_objects angle_samples angle_bins out"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key=value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed for all random draws.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (or file for generate/fit/transform).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated methods: zen,lwb,upb,pca,mds,lmds,rp.
    #[arg(long)]
    method: Option<String>,
    /// Comma-separated target dimensions (space dimensions for `angles`).
    #[arg(long)]
    dims: Option<String>,
    /// Metric: euclidean | cosine | jensen-shannon | triangular.
    #[arg(long)]
    metric: Option<String>,
    /// Dataset: gen-uniform | gen-gaussian | path (.fvecs/.csv).
    #[arg(long)]
    dataset: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced-vs-true distance scatter with an isotonic fit overlay.
    Shepard(CommonArgs),
    /// All five quality measures per (method, dimension).
    Profile(CommonArgs),
    /// DCG k-NN recall per (method, dimension), ground truth cached.
    Recall(CommonArgs),
    /// Angle concentration statistics per space dimension.
    Angles(CommonArgs),
    /// Fit and per-object transform wall times.
    Bench(CommonArgs),
    /// Write a generated dataset to a file.
    Generate(CommonArgs),
    /// Fit one transform and persist it.
    Fit(CommonArgs),
    /// Apply a persisted transform to a dataset file.
    Transform {
        /// Transform container written by `fit`.
        transform: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn build_config(args: &CommonArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = &args.config {
        cfg.apply_file(path)?;
    }
    cfg.apply_env()?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.out = out.clone();
    }
    if let Some(methods) = &args.method {
        cfg.set("methods", methods)?;
    }
    if let Some(dims) = &args.dims {
        cfg.set("dims", dims)?;
    }
    if let Some(metric) = &args.metric {
        cfg.set("metric", metric)?;
    }
    if let Some(dataset) = &args.dataset {
        cfg.set("dataset", dataset)?;
    }
    cfg.finalize()?;
    Ok(cfg)
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Shepard(args) => build_config(args).and_then(|c| commands::shepard::run(&c)),
        Command::Profile(args) => build_config(args).and_then(|c| commands::profile::run(&c)),
        Command::Recall(args) => build_config(args).and_then(|c| commands::recall::run(&c)),
        Command::Angles(args) => build_config(args).and_then(|c| commands::angles::run(&c)),
        Command::Bench(args) => build_config(args).and_then(|c| commands::bench::run(&c)),
        Command::Generate(args) => build_config(args).and_then(|c| commands::datacmd::generate(&c)),
        Command::Fit(args) => build_config(args).and_then(|c| commands::datacmd::fit(&c)),
        Command::Transform { transform, common } => {
            build_config(common).and_then(|c| commands::datacmd::transform(&c, transform))
        }
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
