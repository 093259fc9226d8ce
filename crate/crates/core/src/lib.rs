//! # kanae-core
//!
//! Autoencoders built from Kolmogorov-Arnold network (KAN) layers.
//!
//! Every edge of a KAN layer carries a learnable univariate function: a linear
//! combination of B-spline basis functions on a fixed uniform grid, plus an
//! optional silu-weighted residual. Layers are evaluated by expanding the input
//! into its basis values and doing a single matrix multiplication.
//!
//! ## Layout
//! - [`bspline`]: knot grids, Cox-de Boor basis values and derivatives
//! - [`kan_layer`]: KAN layer forward/backward, L1 penalty, parameter counts
//! - [`nn`]: dense layer, ReLU, MSE, AdamW, finite-difference gradient checker
//! - [`autoencoder`]: `KAN -> ReLU -> Dense` encoder, `Dense -> ReLU -> KAN`
//!   decoder, training loop and checkpoint file
//! - [`data`]: IDX / CIFAR-10 / RAWDS1 loaders behind a named format registry,
//!   pixel normalization, PGM/PPM image strips
//! - [`eval`]: KNN on latents, accuracy / macro F1, bottleneck sweeps
//!
//! All numeric kernels are generic over [`Real`] (`f32` or `f64`).

pub mod autoencoder;
pub mod bspline;
pub mod data;
pub mod error;
pub mod eval;
pub mod kan_layer;
pub mod nn;
mod real;
pub mod seed;

pub use autoencoder::{
    count_params_actual, count_params_paper, KanAutoencoder, TrainConfig, TrainReport, CHECKPOINT_MAGIC,
};
pub use bspline::SplineGrid;
pub use data::{Dataset, DatasetFormat, DatasetRegistry, ImageBytes, ImageMeta, Split};
pub use error::{DataError, Error, Result};
pub use eval::{EvalMetrics, KnnModel};
pub use kan_layer::{count_activations, count_spline_params, KanLayer, KanLayerGrads};
pub use nn::{AdamW, AdamWConfig, DenseLayer};
pub use real::Real;
