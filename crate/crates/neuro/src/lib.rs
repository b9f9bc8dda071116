//! A small CPU network engine: dense tensors, Conv1D / GRU / Linear /
//! Dropout / ReLU with hand-written backward passes, MAE, Adam and a
//! seeded mini-batch training loop.
//!
//! Generic over [`Float`] (`f32` or `f64`); training and gradient checks
//! run in `f64`, inference may use `f32`.

mod error;
mod float;
mod gradcheck;
pub mod layers;
mod sequential;
mod spec;
mod tensor;
mod train;

pub use error::NeuroError;
pub use float::{gemm, Float, Strides};
pub use gradcheck::{gradient_check, random_picks, relative_error, GradCheck};
pub use sequential::Sequential;
pub use spec::{Cache, Layer, LayerSpec, Mode};
pub use tensor::Tensor;
pub use train::{
    evaluate_mae, mae, mae_grad, train, Adam, EpochRecord, LossCurve, Samples, TrainConfig,
    Trainable,
};

pub type Tensor32 = Tensor<f32>;
pub type Tensor64 = Tensor<f64>;
pub type Sequential64 = Sequential<f64>;
