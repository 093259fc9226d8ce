//! The KAN autoencoder.
//!
//! ```text
//! encoder: x --KAN--> h1 --ReLU--> a1 --Dense--> z
//! decoder: z --Dense--> h2 --ReLU--> a2 --KAN--> x_hat
//! ```
//! with `KAN(input -> hidden)`, `Dense(hidden -> bottleneck)`,
//! `Dense(bottleneck -> hidden)`, `KAN(hidden -> input)`.

mod checkpoint;
mod train;

use ndarray::{Array2, ArrayView2};

use crate::bspline::SplineGrid;
use crate::error::{Error, Result};
use crate::kan_layer::{KanCache, KanLayer, KanLayerGrads};
use crate::nn::{mse_loss, relu, relu_backward, DenseGrads, DenseLayer};
use crate::seed::sub_seed;
use crate::Real;

pub use checkpoint::{read_header, CheckpointHeader, CHECKPOINT_MAGIC};
pub use train::{evaluate_mse, train, train_observed, EpochRecord, TrainConfig, TrainReport};

#[derive(Debug, Clone, PartialEq)]
pub struct KanAutoencoder<T: Real> {
    enc_kan: KanLayer<T>,
    enc_dense: DenseLayer<T>,
    dec_dense: DenseLayer<T>,
    dec_kan: KanLayer<T>,
}

/// Intermediate activations of one forward pass.
#[derive(Debug, Clone)]
pub struct ForwardPass<T: Real> {
    enc_cache: KanCache<T>,
    h1: Array2<T>,
    a1: Array2<T>,
    z: Array2<T>,
    h2: Array2<T>,
    dec_cache: KanCache<T>,
    pub x_hat: Array2<T>,
}

impl<T: Real> ForwardPass<T> {
    pub fn latent(&self) -> &Array2<T> {
        &self.z
    }
}

/// Gradients for every trainable tensor, same structure as the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<T: Real> {
    pub enc_kan: KanLayerGrads<T>,
    pub enc_dense: DenseGrads<T>,
    pub dec_dense: DenseGrads<T>,
    pub dec_kan: KanLayerGrads<T>,
}

impl<T: Real> KanAutoencoder<T> {
    /// Seeded construction. Each layer draws from its own named sub-seed.
    pub fn build(
        input_size: usize,
        hidden_size: usize,
        bottleneck_size: usize,
        grid: SplineGrid,
        use_base: bool,
        seed: u64,
    ) -> Result<Self> {
        if input_size == 0 || hidden_size == 0 || bottleneck_size == 0 {
            return Err(Error::InvalidArgument(format!(
                "autoencoder sizes must be >= 1, got ({input_size}, {hidden_size}, {bottleneck_size})"
            )));
        }
        Ok(KanAutoencoder {
            enc_kan: KanLayer::new(input_size, hidden_size, grid.clone(), use_base, sub_seed(seed, "enc_kan"))?,
            enc_dense: DenseLayer::new(hidden_size, bottleneck_size, sub_seed(seed, "enc_dense"))?,
            dec_dense: DenseLayer::new(bottleneck_size, hidden_size, sub_seed(seed, "dec_dense"))?,
            dec_kan: KanLayer::new(hidden_size, input_size, grid, use_base, sub_seed(seed, "dec_kan"))?,
        })
    }

    pub fn from_layers(
        enc_kan: KanLayer<T>,
        enc_dense: DenseLayer<T>,
        dec_dense: DenseLayer<T>,
        dec_kan: KanLayer<T>,
    ) -> Result<Self> {
        let chain = [
            (enc_kan.out_features(), enc_dense.in_features()),
            (enc_dense.out_features(), dec_dense.in_features()),
            (dec_dense.out_features(), dec_kan.in_features()),
            (dec_kan.out_features(), enc_kan.in_features()),
        ];
        for (a, b) in chain {
            if a != b {
                return Err(Error::shape("autoencoder layer chain", a, b));
            }
        }
        if enc_kan.grid() != dec_kan.grid() || enc_kan.use_base() != dec_kan.use_base() {
            return Err(Error::InvalidArgument(
                "encoder and decoder KAN layers must share grid and base setting".into(),
            ));
        }
        Ok(KanAutoencoder {
            enc_kan,
            enc_dense,
            dec_dense,
            dec_kan,
        })
    }

    pub fn input_size(&self) -> usize {
        self.enc_kan.in_features()
    }

    pub fn hidden_size(&self) -> usize {
        self.enc_kan.out_features()
    }

    pub fn bottleneck_size(&self) -> usize {
        self.enc_dense.out_features()
    }

    pub fn grid(&self) -> &SplineGrid {
        self.enc_kan.grid()
    }

    pub fn use_base(&self) -> bool {
        self.enc_kan.use_base()
    }

    pub fn enc_kan(&self) -> &KanLayer<T> {
        &self.enc_kan
    }

    pub fn enc_dense(&self) -> &DenseLayer<T> {
        &self.enc_dense
    }

    pub fn dec_dense(&self) -> &DenseLayer<T> {
        &self.dec_dense
    }

    pub fn dec_kan(&self) -> &KanLayer<T> {
        &self.dec_kan
    }

    pub fn enc_kan_mut(&mut self) -> &mut KanLayer<T> {
        &mut self.enc_kan
    }

    pub fn enc_dense_mut(&mut self) -> &mut DenseLayer<T> {
        &mut self.enc_dense
    }

    pub fn dec_dense_mut(&mut self) -> &mut DenseLayer<T> {
        &mut self.dec_dense
    }

    pub fn dec_kan_mut(&mut self) -> &mut KanLayer<T> {
        &mut self.dec_kan
    }

    /// `z = Dense(ReLU(KAN(x)))`
    pub fn encode(&self, x: ArrayView2<'_, T>) -> Result<Array2<T>> {
        let h = self.enc_kan.apply(x)?;
        self.enc_dense.forward(relu(h.view()).view())
    }

    /// `x_hat = KAN(ReLU(Dense(z)))`
    pub fn decode(&self, z: ArrayView2<'_, T>) -> Result<Array2<T>> {
        let h = self.dec_dense.forward(z)?;
        self.dec_kan.apply(relu(h.view()).view())
    }

    pub fn reconstruct(&self, x: ArrayView2<'_, T>) -> Result<Array2<T>> {
        self.decode(self.encode(x)?.view())
    }

    /// Forward pass keeping every intermediate needed by [`Self::backward`].
    pub fn forward(&self, x: ArrayView2<'_, T>) -> Result<ForwardPass<T>> {
        let (h1, enc_cache) = self.enc_kan.forward(x)?;
        let a1 = relu(h1.view());
        let z = self.enc_dense.forward(a1.view())?;
        let h2 = self.dec_dense.forward(z.view())?;
        let a2 = relu(h2.view());
        let (x_hat, dec_cache) = self.dec_kan.forward(a2.view())?;
        Ok(ForwardPass {
            enc_cache,
            h1,
            a1,
            z,
            h2,
            dec_cache,
            x_hat,
        })
    }

    /// Chain rule through the six stages, given `d loss / d x_hat`.
    pub fn backward(&self, pass: &ForwardPass<T>, dx_hat: ArrayView2<'_, T>) -> Result<Gradients<T>> {
        let mut dec_kan = self.dec_kan.backward(&pass.dec_cache, dx_hat, true)?;
        let da2 = dec_kan.take_input_grad().expect("requested input gradient");
        let dh2 = relu_backward(pass.h2.view(), da2.view())?;
        let dec_dense = self.dec_dense.backward(pass.z.view(), dh2.view())?;
        let enc_dense = self.enc_dense.backward(pass.a1.view(), dec_dense.input.view())?;
        let dh1 = relu_backward(pass.h1.view(), enc_dense.input.view())?;
        let enc_kan = self.enc_kan.backward(&pass.enc_cache, dh1.view(), false)?;
        Ok(Gradients {
            enc_kan,
            enc_dense,
            dec_dense,
            dec_kan,
        })
    }

    /// Reconstruction MSE of `x`, plus `l1_lambda` times the L1 penalty on
    /// both KAN layers. Returns `(total loss, mse, gradients)`.
    pub fn loss_and_grads(&self, x: ArrayView2<'_, T>, l1_lambda: T) -> Result<(T, T, Gradients<T>)> {
        let pass = self.forward(x)?;
        let (mse, dx_hat) = mse_loss(pass.x_hat.view(), x)?;
        let mut grads = self.backward(&pass, dx_hat.view())?;
        let mut loss = mse;
        if l1_lambda != T::zero() {
            loss += l1_lambda * (self.enc_kan.l1_penalty() + self.dec_kan.l1_penalty());
            self.enc_kan.add_l1_subgradient(&mut grads.enc_kan, l1_lambda);
            self.dec_kan.add_l1_subgradient(&mut grads.dec_kan, l1_lambda);
        }
        Ok((loss, mse, grads))
    }

    /// Trainable tensors in checkpoint order.
    pub fn params(&self) -> Vec<&[T]> {
        let mut v = self.enc_kan.params();
        v.extend(self.enc_dense.params());
        v.extend(self.dec_dense.params());
        v.extend(self.dec_kan.params());
        v
    }

    pub fn params_mut(&mut self) -> Vec<&mut [T]> {
        let mut v = self.enc_kan.params_mut();
        v.extend(self.enc_dense.params_mut());
        v.extend(self.dec_dense.params_mut());
        v.extend(self.dec_kan.params_mut());
        v
    }

    pub fn param_lens(&self) -> Vec<usize> {
        self.params().iter().map(|p| p.len()).collect()
    }

    /// All trainable scalars concatenated in checkpoint order.
    pub fn flat_params(&self) -> Vec<T> {
        self.params().concat()
    }

    pub fn set_flat_params(&mut self, flat: &[T]) -> Result<()> {
        let total = self.count_params_actual();
        if flat.len() != total {
            return Err(Error::shape("flat parameter vector", total, flat.len()));
        }
        let mut offset = 0;
        for p in self.params_mut() {
            let n = p.len();
            p.copy_from_slice(&flat[offset..offset + n]);
            offset += n;
        }
        Ok(())
    }

    /// True number of trainable scalars in the implemented layers.
    pub fn count_params_actual(&self) -> usize {
        self.enc_kan.param_count()
            + self.enc_dense.param_count()
            + self.dec_dense.param_count()
            + self.dec_kan.param_count()
    }

    /// The printed closed-form count for this model's sizes and grid.
    pub fn count_params_paper(&self) -> usize {
        count_params_paper(
            self.input_size(),
            self.hidden_size(),
            self.bottleneck_size(),
            self.grid().grid_size(),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.enc_kan.is_finite()
            && self.enc_dense.is_finite()
            && self.dec_dense.is_finite()
            && self.dec_kan.is_finite()
    }
}

impl<T: Real> Gradients<T> {
    /// Gradient tensors aligned with [`KanAutoencoder::params`].
    pub fn slices(&self, use_base: bool) -> Vec<&[T]> {
        let mut v = self.enc_kan.slices(use_base);
        v.extend(self.enc_dense.slices());
        v.extend(self.dec_dense.slices());
        v.extend(self.dec_kan.slices(use_base));
        v
    }

    pub fn flat(&self, use_base: bool) -> Vec<T> {
        self.slices(use_base).concat()
    }
}

/// Closed-form parameter count as published for KAN autoencoders:
///
/// `grid*input*hidden + hidden*(bottleneck+1) + grid*hidden*input + bottleneck*(hidden+1)`
///
/// It charges `grid` coefficients per spline edge and ignores base weights,
/// so it equals [`KanAutoencoder::count_params_actual`] only for degree 0
/// without the base path.
pub fn count_params_paper(input_size: usize, hidden_size: usize, bottleneck_size: usize, grid: usize) -> usize {
    grid * input_size * hidden_size
        + hidden_size * (bottleneck_size + 1)
        + grid * hidden_size * input_size
        + bottleneck_size * (hidden_size + 1)
}

/// Trainable entries of a model with these sizes, without allocating one.
pub fn count_params_actual(
    input_size: usize,
    hidden_size: usize,
    bottleneck_size: usize,
    grid: &SplineGrid,
    use_base: bool,
) -> usize {
    let per_edge = grid.basis_count() + usize::from(use_base);
    2 * input_size * hidden_size * per_edge
        + bottleneck_size * (hidden_size + 1)
        + hidden_size * (bottleneck_size + 1)
}
