//! Binary PGM (P5) / PPM (P6) strips of samples laid side by side.

use std::fs;
use std::path::Path;

use ndarray::ArrayView2;

use super::{denormalize, ImageMeta};
use crate::error::DataError;
use crate::Real;

const GUTTER: usize = 2;

/// Encodes `k` samples as one image, tiled horizontally with a 2-pixel
/// black gutter. One channel gives P5, three give P6.
pub fn encode_image_grid<T: Real>(samples: ArrayView2<'_, T>, meta: &ImageMeta) -> Result<Vec<u8>, DataError> {
    if samples.ncols() != meta.dim() {
        return Err(DataError::ShapeMismatch(format!(
            "samples have {} values, image shape needs {}",
            samples.ncols(),
            meta.dim()
        )));
    }
    let (h, w, c) = (meta.height, meta.width, meta.channels);
    let tag = match c {
        1 => "P5",
        3 => "P6",
        _ => {
            return Err(DataError::ShapeMismatch(format!(
                "cannot write {c}-channel images"
            )))
        }
    };
    let k = samples.nrows();
    let total_w = if k == 0 { 0 } else { k * w + (k - 1) * GUTTER };
    let mut out = format!("{tag}\n{total_w} {h}\n255\n").into_bytes();
    let header = out.len();
    out.resize(header + total_w * h * c, 0);
    let plane = h * w;
    for (s, sample) in samples.rows().into_iter().enumerate() {
        let x0 = s * (w + GUTTER);
        for y in 0..h {
            for x in 0..w {
                let dst = header + (y * total_w + x0 + x) * c;
                for ch in 0..c {
                    out[dst + ch] = denormalize(sample[ch * plane + y * w + x]);
                }
            }
        }
    }
    Ok(out)
}

pub fn write_image_grid<T: Real>(
    samples: ArrayView2<'_, T>,
    meta: &ImageMeta,
    path: impl AsRef<Path>,
) -> Result<(), DataError> {
    let path = path.as_ref();
    let bytes = encode_image_grid(samples, meta)?;
    fs::write(path, bytes).map_err(|e| DataError::io(path, e))
}
