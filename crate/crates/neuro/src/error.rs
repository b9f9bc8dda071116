#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NeuroError {
    #[error("{layer}: expected input {expected}, got {actual:?}")]
    Shape {
        layer: String,
        expected: String,
        actual: Vec<usize>,
    },
    #[error("tensor of shape {shape:?} cannot hold {len} values")]
    Length { shape: Vec<usize>, len: usize },
    #[error("non-finite loss at epoch {epoch}, batch {batch}")]
    NonFiniteLoss { epoch: usize, batch: usize },
    #[error("empty training set")]
    EmptyDataset,
    #[error("invalid layer spec: {0}")]
    InvalidSpec(String),
}
