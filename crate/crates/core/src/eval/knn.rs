use ndarray::{Array2, ArrayView1, ArrayView2};

use super::NUM_CLASSES;
use crate::error::{Error, Result};
use crate::Real;

/// Brute-force Euclidean k-nearest-neighbour classifier.
///
/// Distance ties go to the lower reference index; vote ties go to the
/// smaller label.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel<T: Real> {
    references: Array2<T>,
    labels: Vec<u8>,
    k: usize,
}

impl<T: Real> KnnModel<T> {
    pub fn fit(latents: Array2<T>, labels: Vec<u8>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if latents.nrows() == 0 {
            return Err(Error::EmptyInput("KNN references"));
        }
        if latents.nrows() != labels.len() {
            return Err(Error::shape("KNN labels", latents.nrows(), labels.len()));
        }
        if k > labels.len() {
            return Err(Error::KTooLarge { k, m: labels.len() });
        }
        if labels.iter().any(|&l| l as usize >= NUM_CLASSES) {
            return Err(Error::InvalidArgument("labels must be in 0..=9".into()));
        }
        Ok(KnnModel {
            references: latents.as_standard_layout().into_owned(),
            labels,
            k,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn predict(&self, queries: ArrayView2<'_, T>) -> Result<Vec<u8>> {
        if queries.ncols() != self.references.ncols() {
            return Err(Error::shape("KNN query width", self.references.ncols(), queries.ncols()));
        }
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(self.k + 1);
        Ok(queries
            .rows()
            .into_iter()
            .map(|q| self.predict_one(q, &mut best))
            .collect())
    }

    fn predict_one(&self, q: ArrayView1<'_, T>, best: &mut Vec<(f64, usize)>) -> u8 {
        best.clear();
        let q: Vec<f64> = q.iter().map(|v| v.as_f64()).collect();
        let d = q.len();
        let refs = self.references.as_slice().expect("standard layout");
        for (idx, r) in refs.chunks_exact(d.max(1)).enumerate().take(self.labels.len()) {
            let dist: f64 = r
                .iter()
                .zip(&q)
                .map(|(a, b)| {
                    let t = a.as_f64() - b;
                    t * t
                })
                .sum();
            // Strict comparison keeps the earlier index on equal distance.
            if best.len() < self.k || dist < best[best.len() - 1].0 {
                let pos = best.partition_point(|&(bd, _)| bd <= dist);
                best.insert(pos, (dist, idx));
                best.truncate(self.k);
            }
        }
        let mut votes = [0usize; NUM_CLASSES];
        for &(_, idx) in best.iter() {
            votes[self.labels[idx] as usize] += 1;
        }
        let mut winner = 0;
        for (label, &count) in votes.iter().enumerate() {
            if count > votes[winner] {
                winner = label;
            }
        }
        winner as u8
    }
}
