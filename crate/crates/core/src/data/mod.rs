//! Dataset ingestion.
//!
//! Each on-disk format parses into [`ImageBytes`] (raw pixel bytes, labels,
//! image shape). [`Dataset`] holds the same samples normalized into the
//! spline domain `[-1, 1]` as floats. Formats are looked up by name through
//! [`DatasetRegistry`].

mod cifar;
mod idx;
mod image;
mod raw;
mod registry;

use ndarray::{Array2, ArrayView2, Axis};

use crate::error::DataError;
use crate::Real;

pub use cifar::{load_cifar10, parse_cifar10, CIFAR_RECORD_LEN};
pub use idx::{load_idx, parse_idx_images, parse_idx_labels, IDX_IMAGES_MAGIC, IDX_LABELS_MAGIC};
pub use image::{encode_image_grid, write_image_grid};
pub use raw::{load_raw, parse_raw, raw_bytes, write_raw, RAW_MAGIC};
pub use registry::{Cifar10Binary, DatasetFormat, DatasetRegistry, MnistIdx, RawContainer, Split};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageMeta {
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    pub name: String,
}

impl ImageMeta {
    pub fn new(height: usize, width: usize, channels: usize, name: impl Into<String>) -> Self {
        ImageMeta {
            height,
            width,
            channels,
            name: name.into(),
        }
    }

    /// Flat sample length `h * w * c`.
    pub fn dim(&self) -> usize {
        self.height * self.width * self.channels
    }
}

/// Pixel bytes as stored on disk, one row per sample. Color images are
/// channel-major (`c, h, w`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBytes {
    pub pixels: Array2<u8>,
    pub labels: Vec<u8>,
    pub meta: ImageMeta,
}

impl ImageBytes {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The first `n` samples (all of them if `n >= len`).
    pub fn head(&self, n: usize) -> Self {
        let n = n.min(self.len());
        ImageBytes {
            pixels: self.pixels.slice(ndarray::s![..n, ..]).to_owned(),
            labels: self.labels[..n].to_vec(),
            meta: self.meta.clone(),
        }
    }

    pub fn normalize<T: Real>(&self) -> Dataset<T> {
        Dataset {
            features: self.pixels.mapv(normalize::<T>),
            labels: self.labels.clone(),
            meta: self.meta.clone(),
        }
    }
}

/// Normalized samples (`n x d`, values in `[-1, 1]`) with labels `0..=9`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T: Real = f64> {
    features: Array2<T>,
    labels: Vec<u8>,
    meta: ImageMeta,
}

impl<T: Real> Dataset<T> {
    pub fn new(features: Array2<T>, labels: Vec<u8>, meta: ImageMeta) -> Result<Self, DataError> {
        if features.nrows() != labels.len() {
            return Err(DataError::CountMismatch {
                images: features.nrows(),
                labels: labels.len(),
            });
        }
        if features.ncols() != meta.dim() {
            return Err(DataError::ShapeMismatch(format!(
                "{} features per sample but image shape {}x{}x{}",
                features.ncols(),
                meta.height,
                meta.width,
                meta.channels
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l > 9) {
            return Err(DataError::LabelOutOfRange {
                path: "<memory>".into(),
                index: labels.iter().position(|&l| l == bad).unwrap_or(0),
                label: bad,
            });
        }
        Ok(Dataset {
            features: features.as_standard_layout().into_owned(),
            labels,
            meta,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Features per sample.
    pub fn dim(&self) -> usize {
        self.features.ncols()
    }

    pub fn features(&self) -> ArrayView2<'_, T> {
        self.features.view()
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn meta(&self) -> &ImageMeta {
        &self.meta
    }

    /// The first `n` samples (all of them if `n >= len`).
    pub fn head(&self, n: usize) -> Self {
        let n = n.min(self.len());
        Dataset {
            features: self.features.slice(ndarray::s![..n, ..]).to_owned(),
            labels: self.labels[..n].to_vec(),
            meta: self.meta.clone(),
        }
    }

    pub fn select(&self, indices: &[usize]) -> Self {
        Dataset {
            features: self.features.select(Axis(0), indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            meta: self.meta.clone(),
        }
    }

    /// Back to bytes via [`denormalize`].
    pub fn to_bytes(&self) -> ImageBytes {
        ImageBytes {
            pixels: self.features.mapv(denormalize),
            labels: self.labels.clone(),
            meta: self.meta.clone(),
        }
    }
}

/// `2 * (p / 255) - 1`
pub fn normalize<T: Real>(pixel: u8) -> T {
    T::lit(2.0 * (pixel as f64 / 255.0) - 1.0)
}

/// `round(255 * (v + 1) / 2)` clipped to `0..=255`; NaN maps to 0.
pub fn denormalize<T: Real>(v: T) -> u8 {
    let b = (255.0 * (v.as_f64() + 1.0) / 2.0).round();
    if b.is_nan() {
        0
    } else {
        b.clamp(0.0, 255.0) as u8
    }
}
