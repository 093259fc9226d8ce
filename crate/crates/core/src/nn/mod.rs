//! Non-KAN building blocks of the autoencoder.

mod adamw;
mod dense;
mod grad_check;
mod loss;

pub use adamw::{AdamW, AdamWConfig};
pub use dense::{relu, relu_backward, DenseGrads, DenseLayer};
pub use grad_check::{grad_check, rel_error, GradCheckReport};
pub use loss::mse_loss;
