//! Latent-representation quality: KNN classification of encoder outputs.

mod knn;
mod metrics;
mod sweep;

use ndarray::{Array2, Axis};

use crate::autoencoder::KanAutoencoder;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::Real;

pub use knn::KnnModel;
pub use metrics::{metrics, EvalMetrics, NUM_CLASSES};
pub use sweep::{sweep, SweepConfig, SweepRow, SWEEP_CSV_HEADER};

/// Default number of neighbours.
pub const DEFAULT_K: usize = 5;

/// Encodes every sample of `data`, `batch_size` rows at a time.
pub fn encode_dataset<T: Real>(model: &KanAutoencoder<T>, data: &Dataset<T>, batch_size: usize) -> Result<Array2<T>> {
    if data.dim() != model.input_size() {
        return Err(Error::shape("dataset width", model.input_size(), data.dim()));
    }
    let mut out = Array2::zeros((data.len(), model.bottleneck_size()));
    let x = data.features();
    for (src, mut dst) in x
        .axis_chunks_iter(Axis(0), batch_size.max(1))
        .zip(out.axis_chunks_iter_mut(Axis(0), batch_size.max(1)))
    {
        dst.assign(&model.encode(src)?);
    }
    Ok(out)
}

/// KNN with train-split latents as references and test-split latents as
/// queries.
pub fn evaluate_latents<T: Real>(
    model: &KanAutoencoder<T>,
    train: &Dataset<T>,
    test: &Dataset<T>,
    k: usize,
) -> Result<EvalMetrics> {
    let refs = encode_dataset(model, train, 512)?;
    let queries = encode_dataset(model, test, 512)?;
    let knn = KnnModel::fit(refs, train.labels().to_vec(), k)?;
    let pred = knn.predict(queries.view())?;
    metrics(&pred, test.labels())
}
