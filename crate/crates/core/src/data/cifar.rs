//! CIFAR-10 binary batches: records of 1 label byte + 3072 pixel bytes
//! (1024 red, 1024 green, 1024 blue; row-major 32x32 each).

use std::fs;
use std::path::Path;

use ndarray::Array2;

use super::{Dataset, ImageBytes, ImageMeta};
use crate::error::DataError;
use crate::Real;

pub const CIFAR_RECORD_LEN: usize = 3073;
const PIXELS: usize = 3072;

pub fn parse_cifar10(bytes: &[u8], path: &Path) -> Result<(Vec<u8>, Vec<u8>), DataError> {
    if bytes.len() % CIFAR_RECORD_LEN != 0 {
        return Err(DataError::Truncated {
            path: path.into(),
            detail: format!(
                "{} bytes is not a whole number of {CIFAR_RECORD_LEN}-byte records",
                bytes.len()
            ),
        });
    }
    let n = bytes.len() / CIFAR_RECORD_LEN;
    let mut labels = Vec::with_capacity(n);
    let mut pixels = Vec::with_capacity(n * PIXELS);
    for (index, rec) in bytes.chunks_exact(CIFAR_RECORD_LEN).enumerate() {
        if rec[0] > 9 {
            return Err(DataError::LabelOutOfRange {
                path: path.into(),
                index,
                label: rec[0],
            });
        }
        labels.push(rec[0]);
        pixels.extend_from_slice(&rec[1..]);
    }
    Ok((labels, pixels))
}

pub(crate) fn read_cifar10<P: AsRef<Path>>(batch_paths: &[P]) -> Result<ImageBytes, DataError> {
    let mut labels = Vec::new();
    let mut pixels = Vec::new();
    for p in batch_paths {
        let p = p.as_ref();
        let bytes = fs::read(p).map_err(|e| DataError::io(p, e))?;
        let (l, px) = parse_cifar10(&bytes, p)?;
        labels.extend(l);
        pixels.extend(px);
    }
    let n = labels.len();
    Ok(ImageBytes {
        pixels: Array2::from_shape_vec((n, PIXELS), pixels).expect("whole records"),
        labels,
        meta: ImageMeta::new(32, 32, 3, "cifar10"),
    })
}

/// Concatenates the given batch files and normalizes pixels into `[-1, 1]`.
pub fn load_cifar10<T: Real, P: AsRef<Path>>(batch_paths: &[P]) -> Result<Dataset<T>, DataError> {
    read_cifar10(batch_paths).map(|b| b.normalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::normalize;

    #[test]
    fn handcrafted_record() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("b.bin");
        let mut rec = vec![3u8];
        rec.extend(std::iter::repeat(255u8).take(PIXELS));
        fs::write(&p, &rec).unwrap();
        let ds = load_cifar10::<f32, _>(&[&p]).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.labels(), &[3]);
        assert!(ds.features().iter().all(|&v| v == normalize::<f32>(255)));
        assert_eq!(ds.meta().channels, 3);

        // Two files concatenate.
        let ds = load_cifar10::<f32, _>(&[&p, &p]).unwrap();
        assert_eq!(ds.len(), 2);
    }

    #[test]
    fn malformed() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("short.bin");
        fs::write(&p, vec![0u8; PIXELS]).unwrap();
        assert!(matches!(load_cifar10::<f64, _>(&[&p]), Err(DataError::Truncated { .. })));

        let mut rec = vec![10u8];
        rec.extend(vec![0u8; PIXELS]);
        fs::write(&p, &rec).unwrap();
        assert!(matches!(
            load_cifar10::<f64, _>(&[&p]),
            Err(DataError::LabelOutOfRange { label: 10, .. })
        ));
    }
}
