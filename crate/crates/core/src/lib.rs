//! Estimating error-rate bias of individual human decision-makers.
//!
//! Each human has a history of decisions on their own instances; a separate,
//! much smaller pool carries gold-standard labels. The crate measures each
//! human's true-positive-rate gap between two groups without ever seeing gold
//! labels for the human's own instances.
//!
//! The main estimator ([`mdba::estimate_bias`]) trains one model per human,
//! moves each model's per-group thresholds until the ratio of predicted to
//! actual positive decisions hits a common target `c`, scores the gold pool
//! with the adjusted models and reports the resulting gap (optionally divided
//! by `c`). [`baselines`] holds three comparison estimators, [`simulate`]
//! generates biased decision-makers with known gaps, and [`harness`] runs the
//! seeded Monte-Carlo comparison and writes JSON/CSV reports.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory:
//!
//! ```bash
//! cargo run --release --example estimate_bias
//! cargo run --release --example benchmark_grid
//! ```

pub mod baselines;
pub mod data;
pub mod error;
pub mod harness;
pub mod learners;
pub mod mdba;
pub mod metrics;
pub mod simulate;
pub mod stats;
pub mod synth;

pub use data::{ingest_csv, DatasetSchema, DecisionSet, GoldStandardSet, Group, Instance, InstanceId};
pub use error::{Error, Result};
pub use mdba::{estimate_bias, BiasEstimate, MdbaConfig};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic RNG for a `(seed, stream)` pair. Streams let independent
/// consumers of one seed draw without perturbing each other.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
