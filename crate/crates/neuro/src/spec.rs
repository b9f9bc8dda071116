use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::layers::{
    dropout, dropout_backward, relu, relu_backward, Conv1d, Gru, GruCache, Linear,
};
use crate::{Float, NeuroError, Tensor};

/// Whether dropout is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Train,
    Eval,
}

/// Serializable description of one layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LayerSpec {
    Conv1d {
        in_channels: usize,
        out_channels: usize,
        stride: usize,
    },
    Gru {
        input_size: usize,
        hidden_size: usize,
    },
    Linear {
        in_features: usize,
        out_features: usize,
    },
    Dropout {
        p: f64,
    },
    Relu,
}

impl LayerSpec {
    pub fn validate(&self) -> Result<(), NeuroError> {
        let bad = |m: &str| Err(NeuroError::InvalidSpec(format!("{self:?}: {m}")));
        match *self {
            LayerSpec::Conv1d {
                in_channels,
                out_channels,
                stride,
            } if in_channels == 0 || out_channels == 0 || stride == 0 => bad("zero size"),
            LayerSpec::Gru {
                input_size,
                hidden_size,
            } if input_size == 0 || hidden_size == 0 => bad("zero size"),
            LayerSpec::Linear {
                in_features,
                out_features,
            } if in_features == 0 || out_features == 0 => bad("zero size"),
            LayerSpec::Dropout { p } if !(0.0..1.0).contains(&p) => bad("p outside [0, 1)"),
            _ => Ok(()),
        }
    }

    pub fn param_count(&self) -> usize {
        match *self {
            LayerSpec::Conv1d {
                in_channels,
                out_channels,
                ..
            } => Conv1d::<f64>::param_count(in_channels, out_channels),
            LayerSpec::Gru {
                input_size,
                hidden_size,
            } => Gru::<f64>::param_count(input_size, hidden_size),
            LayerSpec::Linear {
                in_features,
                out_features,
            } => Linear::<f64>::param_count(in_features, out_features),
            LayerSpec::Dropout { .. } | LayerSpec::Relu => 0,
        }
    }

    /// Instantiates the layer with freshly initialized parameters.
    pub fn build<T: Float, R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Layer<T>, NeuroError> {
        self.validate()?;
        Ok(match *self {
            LayerSpec::Conv1d {
                in_channels,
                out_channels,
                stride,
            } => Layer::Conv1d(Conv1d::new(in_channels, out_channels, stride, rng)),
            LayerSpec::Gru {
                input_size,
                hidden_size,
            } => Layer::Gru(Gru::new(input_size, hidden_size, rng)),
            LayerSpec::Linear {
                in_features,
                out_features,
            } => Layer::Linear(Linear::new(in_features, out_features, rng)),
            LayerSpec::Dropout { p } => Layer::Dropout(p),
            LayerSpec::Relu => Layer::Relu,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Layer<T> {
    Conv1d(Conv1d<T>),
    Gru(Gru<T>),
    Linear(Linear<T>),
    Dropout(f64),
    Relu,
}

/// What a layer keeps from its forward pass for the backward pass.
#[derive(Debug, Clone)]
pub enum Cache<T> {
    Input(Tensor<T>),
    Gru {
        input: Tensor<T>,
        output: Tensor<T>,
        gates: GruCache<T>,
    },
    Output(Tensor<T>),
    Mask(Vec<T>),
    None,
}

impl<T: Float> Layer<T> {
    pub fn spec(&self) -> LayerSpec {
        match self {
            Layer::Conv1d(c) => LayerSpec::Conv1d {
                in_channels: c.in_channels,
                out_channels: c.out_channels,
                stride: c.stride,
            },
            Layer::Gru(g) => LayerSpec::Gru {
                input_size: g.input_size,
                hidden_size: g.hidden_size,
            },
            Layer::Linear(l) => LayerSpec::Linear {
                in_features: l.in_features,
                out_features: l.out_features,
            },
            Layer::Dropout(p) => LayerSpec::Dropout { p: *p },
            Layer::Relu => LayerSpec::Relu,
        }
    }

    pub fn params(&self) -> &[T] {
        match self {
            Layer::Conv1d(c) => &c.params,
            Layer::Gru(g) => &g.params,
            Layer::Linear(l) => &l.params,
            Layer::Dropout(_) | Layer::Relu => &[],
        }
    }

    pub fn params_mut(&mut self) -> &mut [T] {
        match self {
            Layer::Conv1d(c) => &mut c.params,
            Layer::Gru(g) => &mut g.params,
            Layer::Linear(l) => &mut l.params,
            Layer::Dropout(_) | Layer::Relu => &mut [],
        }
    }

    pub fn forward<R: Rng + ?Sized>(
        &self,
        x: Tensor<T>,
        mode: Mode,
        rng: &mut R,
    ) -> Result<(Tensor<T>, Cache<T>), NeuroError> {
        Ok(match self {
            Layer::Conv1d(c) => (c.forward(&x)?, Cache::Input(x)),
            Layer::Linear(l) => (l.forward(&x)?, Cache::Input(x)),
            Layer::Gru(g) => {
                let (y, gates) = g.forward(&x)?;
                (
                    y.clone(),
                    Cache::Gru {
                        input: x,
                        output: y,
                        gates,
                    },
                )
            }
            Layer::Relu => {
                let y = relu(&x);
                (y.clone(), Cache::Output(y))
            }
            Layer::Dropout(p) => match mode {
                Mode::Eval => (x, Cache::None),
                Mode::Train => {
                    let (y, mask) = dropout(*p, &x, rng);
                    (y, Cache::Mask(mask))
                }
            },
        })
    }

    /// Accumulates parameter gradients into `grads` (same length as
    /// [`Layer::params`]) and returns the input gradient.
    pub fn backward(&self, cache: &Cache<T>, dy: &Tensor<T>, grads: &mut [T]) -> Tensor<T> {
        match (self, cache) {
            (Layer::Conv1d(c), Cache::Input(x)) => c.backward(x, dy, grads),
            (Layer::Linear(l), Cache::Input(x)) => l.backward(x, dy, grads),
            (
                Layer::Gru(g),
                Cache::Gru {
                    input,
                    output,
                    gates,
                },
            ) => g.backward(input, output, gates, dy, grads),
            (Layer::Relu, Cache::Output(y)) => relu_backward(y, dy),
            (Layer::Dropout(_), Cache::Mask(m)) => dropout_backward(m, dy),
            (Layer::Dropout(_), Cache::None) => dy.clone(),
            _ => panic!("cache does not belong to {:?}", self.spec()),
        }
    }
}
