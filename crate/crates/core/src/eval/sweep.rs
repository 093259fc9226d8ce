use std::collections::BTreeSet;
use std::time::Instant;

use super::{evaluate_latents, DEFAULT_K};
use crate::autoencoder::{train, KanAutoencoder, TrainConfig};
use crate::bspline::SplineGrid;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::Real;

pub const SWEEP_CSV_HEADER: &str = "bottleneck,test_mse,acc,f1,params_paper,params_actual,wall_s";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub grid: SplineGrid,
    pub use_base: bool,
    pub train: TrainConfig,
    pub init_seed: u64,
    pub k: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            grid: SplineGrid::default(),
            use_base: true,
            train: TrainConfig::default(),
            init_seed: 42,
            k: DEFAULT_K,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub bottleneck: usize,
    pub test_mse: f64,
    pub accuracy: f64,
    pub macro_f1: f64,
    pub params_paper: usize,
    pub params_actual: usize,
    pub wall_s: f64,
}

impl SweepRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.3}",
            self.bottleneck,
            self.test_mse,
            self.accuracy,
            self.macro_f1,
            self.params_paper,
            self.params_actual,
            self.wall_s
        )
    }
}

/// Trains one model per bottleneck size `b` with `hidden = bottleneck = b`
/// and records reconstruction and KNN quality. Rows come back sorted by `b`.
pub fn sweep<T: Real>(
    train_set: &Dataset<T>,
    test_set: &Dataset<T>,
    bottlenecks: &[usize],
    cfg: &SweepConfig,
) -> Result<Vec<SweepRow>> {
    if bottlenecks.is_empty() {
        return Err(Error::InvalidArgument("bottleneck list is empty".into()));
    }
    let set: BTreeSet<usize> = bottlenecks.iter().copied().collect();
    if set.len() != bottlenecks.len() {
        return Err(Error::InvalidArgument("bottleneck sizes must be distinct".into()));
    }
    if set.contains(&0) {
        return Err(Error::InvalidArgument("bottleneck sizes must be positive".into()));
    }
    set.into_iter()
        .map(|b| {
            run_one(train_set, test_set, b, cfg).map_err(|e| Error::Sweep {
                bottleneck: b,
                source: Box::new(e),
            })
        })
        .collect()
}

fn run_one<T: Real>(train_set: &Dataset<T>, test_set: &Dataset<T>, b: usize, cfg: &SweepConfig) -> Result<SweepRow> {
    let start = Instant::now();
    let mut model = KanAutoencoder::build(train_set.dim(), b, b, cfg.grid.clone(), cfg.use_base, cfg.init_seed)?;
    let report = train(&mut model, train_set, test_set, &cfg.train)?;
    let m = evaluate_latents(&model, train_set, test_set, cfg.k)?;
    Ok(SweepRow {
        bottleneck: b,
        test_mse: report.final_test_mse,
        accuracy: m.accuracy,
        macro_f1: m.macro_f1,
        params_paper: report.params_paper,
        params_actual: report.params_actual,
        wall_s: start.elapsed().as_secs_f64(),
    })
}
