//! IDX files (MNIST's native format): big-endian `u32` magic, big-endian
//! `u32` dimensions, then unsigned bytes.

use std::fs;
use std::path::Path;

use ndarray::Array2;

use super::{Dataset, ImageBytes, ImageMeta};
use crate::error::DataError;
use crate::Real;

pub const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
pub const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

fn be_u32(bytes: &[u8], at: usize, path: &Path) -> Result<u32, DataError> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| DataError::Truncated {
            path: path.into(),
            detail: format!("header ends before byte {}", at + 4),
        })
}

fn check_magic(bytes: &[u8], expected: u32, path: &Path) -> Result<(), DataError> {
    let found = be_u32(bytes, 0, path)?;
    if found != expected {
        return Err(DataError::BadMagic {
            path: path.into(),
            expected: format!("{expected:#010x}"),
            found: format!("{found:#010x}"),
        });
    }
    Ok(())
}

fn check_payload(bytes: &[u8], header: usize, expected: usize, path: &Path) -> Result<(), DataError> {
    let have = bytes.len() - header;
    if have < expected {
        return Err(DataError::Truncated {
            path: path.into(),
            detail: format!("expected {expected} data bytes, found {have}"),
        });
    }
    if have > expected {
        return Err(DataError::BadHeader {
            path: path.into(),
            detail: format!("{} trailing bytes after {expected} data bytes", have - expected),
        });
    }
    Ok(())
}

/// Parses an image file with dims `(n, rows, cols)` into `n x rows*cols` bytes.
pub fn parse_idx_images(bytes: &[u8], path: &Path) -> Result<(Array2<u8>, usize, usize), DataError> {
    check_magic(bytes, IDX_IMAGES_MAGIC, path)?;
    let n = be_u32(bytes, 4, path)? as usize;
    let rows = be_u32(bytes, 8, path)? as usize;
    let cols = be_u32(bytes, 12, path)? as usize;
    let d = rows * cols;
    check_payload(bytes, 16, n * d, path)?;
    let pixels = Array2::from_shape_vec((n, d), bytes[16..].to_vec()).expect("length checked");
    Ok((pixels, rows, cols))
}

pub fn parse_idx_labels(bytes: &[u8], path: &Path) -> Result<Vec<u8>, DataError> {
    check_magic(bytes, IDX_LABELS_MAGIC, path)?;
    let n = be_u32(bytes, 4, path)? as usize;
    check_payload(bytes, 8, n, path)?;
    let labels = bytes[8..].to_vec();
    if let Some(index) = labels.iter().position(|&l| l > 9) {
        return Err(DataError::LabelOutOfRange {
            path: path.into(),
            index,
            label: labels[index],
        });
    }
    Ok(labels)
}

pub(crate) fn read_idx_pair(images_path: &Path, labels_path: &Path) -> Result<ImageBytes, DataError> {
    let img = fs::read(images_path).map_err(|e| DataError::io(images_path, e))?;
    let lab = fs::read(labels_path).map_err(|e| DataError::io(labels_path, e))?;
    let (pixels, rows, cols) = parse_idx_images(&img, images_path)?;
    let labels = parse_idx_labels(&lab, labels_path)?;
    if pixels.nrows() != labels.len() {
        return Err(DataError::CountMismatch {
            images: pixels.nrows(),
            labels: labels.len(),
        });
    }
    Ok(ImageBytes {
        pixels,
        labels,
        meta: ImageMeta::new(rows, cols, 1, "mnist"),
    })
}

/// Loads an IDX image/label file pair and normalizes pixels into `[-1, 1]`.
pub fn load_idx<T: Real>(images_path: impl AsRef<Path>, labels_path: impl AsRef<Path>) -> Result<Dataset<T>, DataError> {
    read_idx_pair(images_path.as_ref(), labels_path.as_ref()).map(|b| b.normalize())
}
