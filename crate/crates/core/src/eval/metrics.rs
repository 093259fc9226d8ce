use crate::error::{Error, Result};

pub const NUM_CLASSES: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct EvalMetrics {
    pub accuracy: f64,
    pub macro_f1: f64,
    pub precision: [f64; NUM_CLASSES],
    pub recall: [f64; NUM_CLASSES],
    pub f1: [f64; NUM_CLASSES],
    /// `confusion[truth][predicted]`
    pub confusion: [[usize; NUM_CLASSES]; NUM_CLASSES],
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Accuracy and macro F1 over the ten classes. Any `0/0` is taken as 0.
pub fn metrics(predictions: &[u8], truth: &[u8]) -> Result<EvalMetrics> {
    if predictions.len() != truth.len() {
        return Err(Error::shape("prediction count", truth.len(), predictions.len()));
    }
    let mut confusion = [[0usize; NUM_CLASSES]; NUM_CLASSES];
    for (&p, &t) in predictions.iter().zip(truth) {
        if p as usize >= NUM_CLASSES || t as usize >= NUM_CLASSES {
            return Err(Error::InvalidArgument(format!("label out of range: truth {t}, predicted {p}")));
        }
        confusion[t as usize][p as usize] += 1;
    }
    let correct: usize = (0..NUM_CLASSES).map(|c| confusion[c][c]).sum();
    let mut precision = [0.0; NUM_CLASSES];
    let mut recall = [0.0; NUM_CLASSES];
    let mut f1 = [0.0; NUM_CLASSES];
    for c in 0..NUM_CLASSES {
        let tp = confusion[c][c];
        let predicted: usize = (0..NUM_CLASSES).map(|t| confusion[t][c]).sum();
        let actual: usize = confusion[c].iter().sum();
        precision[c] = ratio(tp, predicted);
        recall[c] = ratio(tp, actual);
        let s = precision[c] + recall[c];
        f1[c] = if s == 0.0 { 0.0 } else { 2.0 * precision[c] * recall[c] / s };
    }
    Ok(EvalMetrics {
        accuracy: ratio(correct, truth.len()),
        macro_f1: f1.iter().sum::<f64>() / NUM_CLASSES as f64,
        precision,
        recall,
        f1,
        confusion,
    })
}
