//! Distance-preserving dimensionality reduction for metric spaces that embed
//! isometrically in Hilbert space.
//!
//! The central construction maps a metric space into `R^k` using only distances
//! to `k` reference objects: the references span a base simplex built from
//! their pairwise distances, and every further object becomes the apex of a
//! simplex erected over that base. Over the transformed coordinates three
//! distance estimators are available — `Lwb` (a contraction, plain `l2`),
//! `Upb` (an expansion) and `Zen`, which evaluates the apex pair at a right
//! angle and sits between the two bounds.
//!
//! The crate also provides the standard transforms the simplex method is
//! usually compared against (sparse random projection, PCA, classical MDS with
//! an out-of-sample extension, and Landmark MDS), the quality measures used to
//! score reductions (Kruskal stress over an isotonic fit, Sammon stress,
//! quadratic loss, Spearman rho, DCG-based k-NN recall), dataset generation
//! and loading, and a stable on-disk container for fitted transforms.
//!
//! ```
//! use nsimplex::{reduced_distances, Metric, NSimplexTransform};
//! use rand::SeedableRng;
//!
//! let data = nsimplex::data::gen_uniform(200, 50, 7);
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let t = NSimplexTransform::fit_from_pool(&data, 8, Metric::Euclidean, &mut rng)?;
//!
//! let (u, v) = (data.row(100), data.row(101));
//! let x = t.transform(u)?;
//! let y = t.transform(v)?;
//! let bounds = reduced_distances(x.coords(), y.coords())?;
//! let true_d = Metric::Euclidean.distance(u, v)?;
//! assert!(bounds.lwb <= true_d + 1e-9 && true_d <= bounds.upb + 1e-9);
//! assert!((bounds.zen - true_d).abs() < (bounds.lwb - true_d).abs());
//! # Ok::<(), nsimplex::Error>(())
//! ```

pub mod baselines;
pub mod data;
pub mod error;
pub mod matrix;
pub mod metrics;
pub mod persist;
pub mod quality;
pub mod simplex;

pub use error::{Error, Result};
pub use matrix::RowMatrix;
pub use metrics::{Metric, MetricKind};
pub use simplex::{
    reduced_distances, BaseSimplex, BoundEstimates, Estimator, NSimplexTransform, ReducedPoint,
};
