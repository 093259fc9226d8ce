use std::time::Instant;

use ndarray::{s, Axis};
use rand::seq::SliceRandom;

use super::KanAutoencoder;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::nn::{AdamW, AdamWConfig};
use crate::{seed, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub lr: f64,
    pub weight_decay: f64,
    pub batch_size: usize,
    pub l1_lambda: f64,
    /// Seeds the per-epoch shuffle.
    pub seed: u64,
    pub shuffle: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 10,
            lr: 1e-3,
            weight_decay: 1e-4,
            batch_size: 128,
            l1_lambda: 0.0,
            seed: 42,
            shuffle: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 || self.batch_size == 0 {
            return Err(Error::InvalidArgument("epochs and batch_size must be positive".into()));
        }
        if !(self.lr >= 0.0 && self.lr.is_finite()) || !(self.weight_decay >= 0.0) || !(self.l1_lambda >= 0.0) {
            return Err(Error::InvalidArgument(
                "lr, weight_decay and l1 must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    /// 1-based.
    pub epoch: usize,
    /// Mean reconstruction MSE over the epoch's training samples.
    pub train_mse: f64,
    /// Seconds since training started.
    pub wall_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub epochs: Vec<EpochRecord>,
    /// Test MSE of the model before the first update.
    pub initial_test_mse: f64,
    pub final_test_mse: f64,
    pub wall_seconds: f64,
    pub params_paper: usize,
    pub params_actual: usize,
}

impl TrainReport {
    /// Equality ignoring wall-clock fields.
    pub fn same_outcome(&self, other: &TrainReport) -> bool {
        self.initial_test_mse == other.initial_test_mse
            && self.final_test_mse == other.final_test_mse
            && self.params_paper == other.params_paper
            && self.params_actual == other.params_actual
            && self.epochs.len() == other.epochs.len()
            && self
                .epochs
                .iter()
                .zip(&other.epochs)
                .all(|(a, b)| a.epoch == b.epoch && a.train_mse == b.train_mse)
    }
}

/// Mean per-entry squared reconstruction error over the whole dataset.
pub fn evaluate_mse<T: Real>(model: &KanAutoencoder<T>, data: &Dataset<T>, batch_size: usize) -> Result<f64> {
    if data.dim() != model.input_size() {
        return Err(Error::shape("dataset width", model.input_size(), data.dim()));
    }
    if data.is_empty() {
        return Err(Error::EmptyInput("evaluation dataset"));
    }
    let x = data.features();
    let mut sum = 0.0;
    for chunk in x.axis_chunks_iter(Axis(0), batch_size.max(1)) {
        let xh = model.reconstruct(chunk)?;
        sum += (&xh - &chunk).iter().map(|v| v.as_f64() * v.as_f64()).sum::<f64>();
    }
    Ok(sum / (data.len() * data.dim()) as f64)
}

pub fn train<T: Real>(
    model: &mut KanAutoencoder<T>,
    train_set: &Dataset<T>,
    test_set: &Dataset<T>,
    cfg: &TrainConfig,
) -> Result<TrainReport> {
    train_observed(model, train_set, test_set, cfg, |_| {})
}

/// Mini-batch AdamW training on the reconstruction MSE. `on_epoch` sees
/// each epoch's record as soon as it completes.
pub fn train_observed<T: Real>(
    model: &mut KanAutoencoder<T>,
    train_set: &Dataset<T>,
    test_set: &Dataset<T>,
    cfg: &TrainConfig,
    mut on_epoch: impl FnMut(&EpochRecord),
) -> Result<TrainReport> {
    cfg.validate()?;
    for (what, ds) in [("training set width", train_set), ("test set width", test_set)] {
        if ds.dim() != model.input_size() {
            return Err(Error::shape(what, model.input_size(), ds.dim()));
        }
    }
    if train_set.is_empty() {
        return Err(Error::EmptyInput("training set"));
    }
    let start = Instant::now();
    let eval_batch = cfg.batch_size.max(256);
    let initial_test_mse = evaluate_mse(model, test_set, eval_batch)?;

    let mut opt = AdamW::<T>::new(
        AdamWConfig {
            lr: cfg.lr,
            weight_decay: cfg.weight_decay,
            ..AdamWConfig::default()
        },
        &model.param_lens(),
    );
    let mut rng = seed::rng(cfg.seed);
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let features = train_set.features();
    let use_base = model.use_base();
    let l1 = T::lit(cfg.l1_lambda);
    let mut epochs = Vec::with_capacity(cfg.epochs);

    for epoch in 1..=cfg.epochs {
        if cfg.shuffle {
            order.shuffle(&mut rng);
        }
        let mut sum = 0.0;
        for (step, idx) in order.chunks(cfg.batch_size).enumerate() {
            let batch = if cfg.shuffle {
                features.select(Axis(0), idx)
            } else {
                features.slice(s![idx[0]..idx[0] + idx.len(), ..]).to_owned()
            };
            let (loss, mse, grads) = model.loss_and_grads(batch.view(), l1)?;
            if !loss.is_finite() {
                return Err(Error::Diverged {
                    epoch,
                    step,
                    loss: loss.as_f64(),
                });
            }
            opt.step(&mut model.params_mut(), &grads.slices(use_base))?;
            if !model.is_finite() {
                return Err(Error::Diverged {
                    epoch,
                    step,
                    loss: f64::NAN,
                });
            }
            sum += mse.as_f64() * idx.len() as f64;
        }
        let rec = EpochRecord {
            epoch,
            train_mse: sum / train_set.len() as f64,
            wall_s: start.elapsed().as_secs_f64(),
        };
        on_epoch(&rec);
        epochs.push(rec);
    }

    let final_test_mse = evaluate_mse(model, test_set, eval_batch)?;
    Ok(TrainReport {
        epochs,
        initial_test_mse,
        final_test_mse,
        wall_seconds: start.elapsed().as_secs_f64(),
        params_paper: model.count_params_paper(),
        params_actual: model.count_params_actual(),
    })
}
