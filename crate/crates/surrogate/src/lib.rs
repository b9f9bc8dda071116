//! The field surrogate: three 1-D convolutions over the contour history, a
//! GRU across the resulting channels, and a dense head that also sees the
//! transition window. Prediction, a header-plus-blob file format and a
//! per-field error report live here as well.

mod error;
mod eval;
mod model;
mod persist;

use forge_dataset::TrainingPair;
use forge_neuro::{Float, Samples};

pub use error::SurrogateError;
pub use eval::{evaluate, EvalReport, FieldError, FieldPredictor, LatencyStats};
pub use model::{
    Architecture, ForwardCache, InitDescriptor, SurrogateModel, CONCAT_WIDTH, CONV_CHANNELS,
    DROPOUT, FLATTEN_WIDTH, GRU_HIDDEN, HEAD_WIDTHS,
};
pub use persist::{
    decode_model, encode_model, load_model, save_model, ModelHeader, MODEL_FORMAT_VERSION,
};

/// Training and gradient-check precision.
pub type Surrogate64 = SurrogateModel<f64>;
/// Inference precision.
pub type Surrogate32 = SurrogateModel<f32>;

/// Input and target rows of `pairs` for the training loop.
pub fn samples_from_pairs<T: Float>(pairs: &[&TrainingPair]) -> Samples<T> {
    let mut s = Samples::new(forge_dataset::INPUT_FLOATS, forge_dataset::TARGET_FLOATS);
    for p in pairs {
        s.push(
            p.input().map(|v| T::of(v as f64)),
            p.target.iter().map(|&v| T::of(v as f64)),
        );
    }
    s
}
