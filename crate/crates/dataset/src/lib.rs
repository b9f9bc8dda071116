//! Training data for the field surrogate: random forging plans, oracle runs,
//! pairs of (contour history, transition window) → normalized fields, and a
//! manifest + flat little-endian `f32` file on disk.

mod error;
mod generate;
mod pairs;
mod sample;
mod store;

pub use error::DatasetError;
pub use generate::{generate, simulate_run, split_runs, GenerateConfig};
pub use pairs::{
    build_pairs, contour_window, encode_transition, strategy_triplets, strategy_window,
    RecordLayout, Section, TrainingPair, CONTOUR_FLOATS, HISTORY, RECORD_FLOATS, STRATEGY_FLOATS,
    TARGET_FLOATS, TRIPLETS,
};
pub use sample::{run_rng, sample_strategy};
pub use store::{
    Dataset, DatasetManifest, Split, Splits, DATA_FILE, FORMAT_VERSION, MANIFEST_FILE,
};

/// Network input width: contour history plus strategy window.
pub const INPUT_FLOATS: usize = CONTOUR_FLOATS + STRATEGY_FLOATS;
