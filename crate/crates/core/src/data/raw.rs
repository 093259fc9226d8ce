//! RAWDS1 container, used for SVHN and anything pre-converted:
//!
//! ```text
//! "RAWDS1\0\0"                     8 bytes
//! n, h, w, c                       u32 little-endian each
//! labels                           n bytes
//! pixels                           n*h*w*c bytes, channel-major per sample
//! ```

use std::fs;
use std::path::Path;

use ndarray::Array2;

use super::{Dataset, ImageBytes, ImageMeta};
use crate::error::DataError;
use crate::Real;

pub const RAW_MAGIC: &[u8; 8] = b"RAWDS1\0\0";
const HEADER: usize = 8 + 16;

pub fn parse_raw(bytes: &[u8], path: &Path) -> Result<ImageBytes, DataError> {
    if bytes.len() < 8 || &bytes[..8] != RAW_MAGIC {
        return Err(DataError::BadMagic {
            path: path.into(),
            expected: format!("{:?}", String::from_utf8_lossy(RAW_MAGIC)),
            found: format!("{:?}", String::from_utf8_lossy(&bytes[..bytes.len().min(8)])),
        });
    }
    if bytes.len() < HEADER {
        return Err(DataError::Truncated {
            path: path.into(),
            detail: "header shorter than 24 bytes".into(),
        });
    }
    let field = |i: usize| {
        let at = 8 + 4 * i;
        u32::from_le_bytes([bytes[at], bytes[at + 1], bytes[at + 2], bytes[at + 3]]) as usize
    };
    let (n, h, w, c) = (field(0), field(1), field(2), field(3));
    let d = h * w * c;
    let expected = n + n * d;
    let have = bytes.len() - HEADER;
    if have < expected {
        return Err(DataError::Truncated {
            path: path.into(),
            detail: format!("expected {expected} bytes after the header, found {have}"),
        });
    }
    if have > expected {
        return Err(DataError::BadHeader {
            path: path.into(),
            detail: format!("{} trailing bytes", have - expected),
        });
    }
    let labels = bytes[HEADER..HEADER + n].to_vec();
    if let Some(index) = labels.iter().position(|&l| l > 9) {
        return Err(DataError::LabelOutOfRange {
            path: path.into(),
            index,
            label: labels[index],
        });
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "raw".into());
    Ok(ImageBytes {
        pixels: Array2::from_shape_vec((n, d), bytes[HEADER + n..].to_vec()).expect("length checked"),
        labels,
        meta: ImageMeta::new(h, w, c, name),
    })
}

pub fn raw_bytes(images: &ImageBytes) -> Vec<u8> {
    let m = &images.meta;
    let mut out = Vec::with_capacity(HEADER + images.len() * (1 + m.dim()));
    out.extend_from_slice(RAW_MAGIC);
    for v in [images.len(), m.height, m.width, m.channels] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    out.extend_from_slice(&images.labels);
    out.extend(images.pixels.iter());
    out
}

pub fn load_raw<T: Real>(path: impl AsRef<Path>) -> Result<Dataset<T>, DataError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| DataError::io(path, e))?;
    parse_raw(&bytes, path).map(|b| b.normalize())
}

/// Writes `dataset` as RAWDS1, mapping features back to bytes.
pub fn write_raw<T: Real>(dataset: &Dataset<T>, path: impl AsRef<Path>) -> Result<(), DataError> {
    let path = path.as_ref();
    fs::write(path, raw_bytes(&dataset.to_bytes())).map_err(|e| DataError::io(path, e))
}
