//! Angle statistics per dimension: mean, standard deviation and a histogram
//! over `[0, pi]`.

use anyhow::Result;
use nsimplex::quality::angle_histogram;

use crate::config::ExperimentConfig;
use crate::csv_row;
use crate::output::CsvWriter;
use crate::runner::derive_seed;

/// Here `dims` are the dimensions of the sampled spaces themselves.
pub fn run(config: &ExperimentConfig) -> Result<()> {
    let mut stats = CsvWriter::create(
        &config.out.join("angles.csv"),
        "angles",
        &config.provenance(),
    )?;
    stats.header(&["dim", "samples", "mean", "stdev"])?;
    let mut hist_out = CsvWriter::create(
        &config.out.join("angles_hist.csv"),
        "angles",
        &config.provenance(),
    )?;
    hist_out.header(&["dim", "bin_low", "bin_high", "count"])?;

    for &dim in &config.dims {
        let seed = derive_seed(config.seed, "angles", dim as u64);
        let (s, hist) = angle_histogram(dim, config.angle_samples, seed, config.angle_bins)?;
        stats.row(csv_row![dim, config.angle_samples, s.mean, s.stdev])?;
        let width = std::f64::consts::PI / config.angle_bins as f64;
        for (b, count) in hist.iter().enumerate() {
            hist_out.row(csv_row![
                dim,
                b as f64 * width,
                (b + 1) as f64 * width,
                count
            ])?;
        }
    }
    stats.finish()?;
    hist_out.finish()?;
    Ok(())
}
