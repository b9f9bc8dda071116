mod activation;
mod conv1d;
mod gru;
mod linear;

pub use activation::{dropout, dropout_backward, relu, relu_backward};
pub use conv1d::{Conv1d, KERNEL, PADDING};
pub use gru::{Gru, GruCache};
pub use linear::Linear;
