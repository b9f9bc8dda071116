use forge_core::{FieldStack, Grid, CONTOUR_LEN};
use forge_dataset::{CONTOUR_FLOATS, HISTORY, INPUT_FLOATS, STRATEGY_FLOATS, TARGET_FLOATS};
use forge_neuro::layers::Gru;
use forge_neuro::{
    Cache, Float, Layer, LayerSpec, Mode, NeuroError, Sequential, Tensor, Trainable,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::SurrogateError;

/// Channels after each convolution.
pub const CONV_CHANNELS: [usize; 3] = [8, 16, 32];
pub const GRU_HIDDEN: usize = 16;
pub const HEAD_WIDTHS: [usize; 4] = [1024, 512, 1024, TARGET_FLOATS];
pub const DROPOUT: f64 = 0.1;
/// Width of the flattened recurrent output.
pub const FLATTEN_WIDTH: usize = 32 * GRU_HIDDEN;
pub const CONCAT_WIDTH: usize = FLATTEN_WIDTH + STRATEGY_FLOATS;

/// Layer inventory of the three network parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Architecture {
    pub conv: Vec<LayerSpec>,
    pub gru: LayerSpec,
    pub head: Vec<LayerSpec>,
}

impl Architecture {
    /// Conv1D 31→8→16→32 (stride 1, ReLU each), GRU 3→16 over the 32
    /// channels, then Linear 521→1024→512→1024→1386 with ReLU and dropout
    /// between the linear layers.
    pub fn standard() -> Self {
        let mut conv = Vec::new();
        let mut c_in = CONTOUR_LEN;
        for c_out in CONV_CHANNELS {
            conv.push(LayerSpec::Conv1d {
                in_channels: c_in,
                out_channels: c_out,
                stride: 1,
            });
            conv.push(LayerSpec::Relu);
            c_in = c_out;
        }
        let mut head = Vec::new();
        let mut w_in = CONCAT_WIDTH;
        for (i, &w_out) in HEAD_WIDTHS.iter().enumerate() {
            head.push(LayerSpec::Linear {
                in_features: w_in,
                out_features: w_out,
            });
            if i + 1 < HEAD_WIDTHS.len() {
                head.push(LayerSpec::Relu);
                head.push(LayerSpec::Dropout { p: DROPOUT });
            }
            w_in = w_out;
        }
        Self {
            conv,
            gru: LayerSpec::Gru {
                input_size: HISTORY,
                hidden_size: GRU_HIDDEN,
            },
            head,
        }
    }

    pub fn param_count(&self) -> usize {
        self.conv
            .iter()
            .chain(std::iter::once(&self.gru))
            .chain(&self.head)
            .map(LayerSpec::param_count)
            .sum()
    }

    /// Checks that the three parts fit together and produce the stored
    /// record widths.
    pub fn validate(&self) -> Result<(), SurrogateError> {
        let bad = |m: String| Err(SurrogateError::Architecture(m));
        let mut channels = CONTOUR_LEN;
        for s in &self.conv {
            match *s {
                LayerSpec::Conv1d {
                    in_channels,
                    out_channels,
                    stride,
                } => {
                    if in_channels != channels || stride != 1 {
                        return bad(format!("{s:?} does not follow {channels} channels"));
                    }
                    channels = out_channels;
                }
                LayerSpec::Relu => {}
                other => return bad(format!("{other:?} in the convolution stack")),
            }
        }
        let LayerSpec::Gru {
            input_size,
            hidden_size,
        } = self.gru
        else {
            return bad(format!("{:?} in the recurrent slot", self.gru));
        };
        if input_size != HISTORY {
            return bad(format!("recurrent input {input_size}, time axis has {HISTORY}"));
        }
        let mut width = channels * hidden_size + STRATEGY_FLOATS;
        if width != CONCAT_WIDTH {
            return bad(format!("concat width {width}, expected {CONCAT_WIDTH}"));
        }
        for s in &self.head {
            match *s {
                LayerSpec::Linear {
                    in_features,
                    out_features,
                } => {
                    if in_features != width {
                        return bad(format!("{s:?} after width {width}"));
                    }
                    width = out_features;
                }
                LayerSpec::Relu | LayerSpec::Dropout { .. } => {}
                other => return bad(format!("{other:?} in the head")),
            }
        }
        if width != TARGET_FLOATS {
            return bad(format!("output width {width}, expected {TARGET_FLOATS}"));
        }
        Ok(())
    }
}

/// How the parameters were first drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitDescriptor {
    pub scheme: String,
    pub seed: u64,
}

impl InitDescriptor {
    pub const SCHEME: &'static str =
        "xavier-uniform linear/conv weights, zero biases; gru uniform ±1/sqrt(hidden)";

    pub fn seeded(seed: u64) -> Self {
        Self {
            scheme: Self::SCHEME.into(),
            seed,
        }
    }
}

/// Contour history and transition window in, six normalized fields out.
#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateModel<T> {
    pub architecture: Architecture,
    pub init: InitDescriptor,
    pub training_seed: Option<u64>,
    conv: Sequential<T>,
    gru: Gru<T>,
    head: Sequential<T>,
}

/// Activations kept for the backward pass.
pub struct ForwardCache<T> {
    batch: usize,
    conv: Vec<Cache<T>>,
    gru_in: Tensor<T>,
    gru_out: Tensor<T>,
    gru: forge_neuro::layers::GruCache<T>,
    head: Vec<Cache<T>>,
}

impl<T: Float> SurrogateModel<T> {
    pub fn new(architecture: Architecture, seed: u64) -> Result<Self, SurrogateError> {
        architecture.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let conv = Sequential::new(&architecture.conv, &[CONTOUR_LEN, HISTORY], &mut rng)?;
        let Layer::Gru(gru) = architecture.gru.build(&mut rng)? else {
            unreachable!("validated recurrent slot");
        };
        let head = Sequential::new(&architecture.head, &[CONCAT_WIDTH], &mut rng)?;
        Ok(Self {
            architecture,
            init: InitDescriptor::seeded(seed),
            training_seed: None,
            conv,
            gru,
            head,
        })
    }

    /// The default network with freshly drawn parameters.
    pub fn standard(seed: u64) -> Self {
        let m = Self::new(Architecture::standard(), seed).expect("standard architecture");
        assert_eq!(CONCAT_WIDTH, 521);
        assert_eq!(m.output_width(), 1386);
        m
    }

    pub fn output_width(&self) -> usize {
        match self.head.layers.last() {
            Some(Layer::Linear(l)) => l.out_features,
            _ => 0,
        }
    }

    /// Sets every parameter to `value`.
    pub fn fill(&mut self, value: T) {
        for p in self.params_mut() {
            p.fill(value);
        }
    }

    /// Copies `flat` into the parameters in [`Trainable::params`] order.
    pub fn load_flat(&mut self, flat: &[T]) -> Result<(), SurrogateError> {
        let total = self.param_count();
        if flat.len() != total {
            return Err(SurrogateError::InputLength {
                what: "parameters",
                expected: total,
                actual: flat.len(),
            });
        }
        let mut off = 0;
        for p in self.params_mut() {
            p.copy_from_slice(&flat[off..off + p.len()]);
            off += p.len();
        }
        Ok(())
    }

    pub fn to_flat(&self) -> Vec<T> {
        self.params().concat()
    }

    /// Same network in another precision.
    pub fn cast<U: Float>(&self) -> SurrogateModel<U> {
        let mut out = SurrogateModel::<U>::new(self.architecture.clone(), self.init.seed)
            .expect("validated architecture");
        let flat: Vec<U> = self.to_flat().iter().map(|&x| U::of(x.to_f64_lossy())).collect();
        out.load_flat(&flat).expect("same architecture");
        out.training_seed = self.training_seed;
        out
    }

    fn eval_rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0)
    }

    /// Clamped prediction for a batch of input rows `[batch, 102]`.
    pub fn predict_batch(&self, x: &Tensor<T>) -> Result<Tensor<T>, SurrogateError> {
        let (mut y, _) = self.forward_batch(x, Mode::Eval, &mut Self::eval_rng())?;
        self.finish(&mut y);
        Ok(y)
    }

    /// Normalized fields for one input. `contours` is `3 × 31` oldest first,
    /// `strategy` is `3 × 3`.
    pub fn predict(&self, contours: &[T], strategy: &[T]) -> Result<FieldStack<T>, SurrogateError> {
        let flat = self.predict_flat(contours, strategy)?;
        Ok(FieldStack::from_flat(&Grid::default(), &flat).expect("1386 outputs"))
    }

    /// As [`SurrogateModel::predict`], returning the flat `6 × 21 × 11` vector.
    pub fn predict_flat(&self, contours: &[T], strategy: &[T]) -> Result<Vec<T>, SurrogateError> {
        check_len("contours", CONTOUR_FLOATS, contours.len())?;
        check_len("strategy", STRATEGY_FLOATS, strategy.len())?;
        let mut row = Vec::with_capacity(INPUT_FLOATS);
        row.extend_from_slice(contours);
        row.extend_from_slice(strategy);
        let x = Tensor::from_vec(&[1, INPUT_FLOATS], row)?;
        Ok(self.predict_batch(&x)?.into_vec())
    }
}

fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<(), SurrogateError> {
    if expected == actual {
        Ok(())
    } else {
        Err(SurrogateError::InputLength {
            what,
            expected,
            actual,
        })
    }
}

impl<T: Float> Trainable<T> for SurrogateModel<T> {
    type Cache = ForwardCache<T>;

    fn params(&self) -> Vec<&[T]> {
        let mut p = self.conv.params();
        p.push(&self.gru.params);
        p.extend(self.head.params());
        p
    }

    fn params_mut(&mut self) -> Vec<&mut [T]> {
        let mut p = self.conv.params_mut();
        p.push(&mut self.gru.params);
        p.extend(self.head.params_mut());
        p
    }

    fn forward_batch<R: Rng + ?Sized>(
        &self,
        x: &Tensor<T>,
        mode: Mode,
        rng: &mut R,
    ) -> Result<(Tensor<T>, Self::Cache), NeuroError> {
        if x.shape().len() != 2 || x.dim(1) != INPUT_FLOATS {
            return Err(NeuroError::Shape {
                layer: "surrogate input".into(),
                expected: format!("[batch, {INPUT_FLOATS}]"),
                actual: x.shape().to_vec(),
            });
        }
        let batch = x.dim(0);
        // contours arrive time-major (3 × 31); convolve along time with the
        // 31 contour points as channels
        let mut conv_in = vec![T::zero(); batch * CONTOUR_FLOATS];
        for b in 0..batch {
            let row = &x.data()[b * INPUT_FLOATS..];
            for t in 0..HISTORY {
                for c in 0..CONTOUR_LEN {
                    conv_in[(b * CONTOUR_LEN + c) * HISTORY + t] = row[t * CONTOUR_LEN + c];
                }
            }
        }
        let conv_in = Tensor::from_vec(&[batch, CONTOUR_LEN, HISTORY], conv_in)?;
        let (conv_out, conv_cache) = self.conv.forward(conv_in, mode, rng)?;
        // [batch, 32 channels, 3] read as a 32-step sequence of 3-vectors
        let (gru_out, gru_cache) = self.gru.forward(&conv_out)?;
        let hidden = gru_out.len() / batch.max(1);
        let mut concat = Vec::with_capacity(batch * (hidden + STRATEGY_FLOATS));
        for b in 0..batch {
            concat.extend_from_slice(&gru_out.data()[b * hidden..(b + 1) * hidden]);
            concat.extend_from_slice(&x.data()[b * INPUT_FLOATS + CONTOUR_FLOATS..(b + 1) * INPUT_FLOATS]);
        }
        let concat = Tensor::from_vec(&[batch, hidden + STRATEGY_FLOATS], concat)?;
        let (y, head_cache) = self.head.forward(concat, mode, rng)?;
        Ok((
            y,
            ForwardCache {
                batch,
                conv: conv_cache,
                gru_in: conv_out,
                gru_out,
                gru: gru_cache,
                head: head_cache,
            },
        ))
    }

    fn backward_batch(&self, cache: &Self::Cache, dy: &Tensor<T>, grads: &mut [Vec<T>]) {
        let n_conv = self.conv.layers.len();
        let (conv_grads, rest) = grads.split_at_mut(n_conv);
        let (gru_grads, head_grads) = rest.split_first_mut().expect("gru buffer");
        let d_concat = self.head.backward(&cache.head, dy.clone(), head_grads);
        let batch = cache.batch;
        let hidden = cache.gru_out.len() / batch.max(1);
        let width = hidden + STRATEGY_FLOATS;
        let mut d_gru = Vec::with_capacity(batch * hidden);
        for b in 0..batch {
            d_gru.extend_from_slice(&d_concat.data()[b * width..b * width + hidden]);
        }
        let d_gru = Tensor::from_vec(cache.gru_out.shape(), d_gru).expect("gru output shape");
        let d_conv = self
            .gru
            .backward(&cache.gru_in, &cache.gru_out, &cache.gru, &d_gru, gru_grads);
        self.conv.backward(&cache.conv, d_conv, conv_grads);
    }

    /// Clamps into `[0, 1]`.
    fn finish(&self, y: &mut Tensor<T>) {
        for v in y.data_mut() {
            *v = v.max(T::zero()).min(T::one());
        }
    }
}
