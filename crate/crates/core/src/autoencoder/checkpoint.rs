//! Flat binary checkpoint.
//!
//! ```text
//! "KANAE1\0"                                   7 bytes
//! input, hidden, bottleneck, G, K,
//! use_base (0/1), float width (4/8)            7 x u32 little-endian
//! tensors in parameter order, raw little-endian floats
//! ```
//! The spline domain is not stored; checkpoints always use `[-1, 1]`.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use ndarray::{Array1, Array2, Array3};

use super::KanAutoencoder;
use crate::bspline::SplineGrid;
use crate::error::{DataError, Error, Result};
use crate::kan_layer::KanLayer;
use crate::nn::DenseLayer;
use crate::Real;

pub const CHECKPOINT_MAGIC: &[u8; 7] = b"KANAE1\0";
const HEADER_LEN: usize = 7 + 7 * 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckpointHeader {
    pub input_size: u32,
    pub hidden_size: u32,
    pub bottleneck_size: u32,
    pub grid_size: u32,
    pub degree: u32,
    pub use_base: bool,
    pub float_width: u32,
}

fn parse_header(bytes: &[u8], path: &Path) -> Result<CheckpointHeader, DataError> {
    if bytes.len() < CHECKPOINT_MAGIC.len() || &bytes[..7] != CHECKPOINT_MAGIC {
        let found = &bytes[..bytes.len().min(7)];
        return Err(DataError::BadMagic {
            path: path.into(),
            expected: format!("{:?}", String::from_utf8_lossy(CHECKPOINT_MAGIC)),
            found: format!("{:?}", String::from_utf8_lossy(found)),
        });
    }
    if bytes.len() < HEADER_LEN {
        return Err(DataError::Truncated {
            path: path.into(),
            detail: format!("header needs {HEADER_LEN} bytes, file has {}", bytes.len()),
        });
    }
    let mut cur = Cursor::new(&bytes[7..HEADER_LEN]);
    let mut next = || cur.read_u32::<LittleEndian>().expect("header length checked");
    let h = CheckpointHeader {
        input_size: next(),
        hidden_size: next(),
        bottleneck_size: next(),
        grid_size: next(),
        degree: next(),
        use_base: match next() {
            0 => false,
            1 => true,
            other => {
                return Err(DataError::BadHeader {
                    path: path.into(),
                    detail: format!("use_base flag must be 0 or 1, found {other}"),
                })
            }
        },
        float_width: next(),
    };
    if h.float_width != 4 && h.float_width != 8 {
        return Err(DataError::BadHeader {
            path: path.into(),
            detail: format!("float width must be 4 or 8, found {}", h.float_width),
        });
    }
    if h.input_size == 0 || h.hidden_size == 0 || h.bottleneck_size == 0 || h.grid_size == 0 {
        return Err(DataError::BadHeader {
            path: path.into(),
            detail: "zero size in header".into(),
        });
    }
    Ok(h)
}

/// Reads only the header, e.g. to pick the float type before loading.
pub fn read_header(path: impl AsRef<Path>) -> Result<CheckpointHeader, DataError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| DataError::io(path, e))?;
    parse_header(&bytes, path)
}

impl<T: Real> KanAutoencoder<T> {
    pub fn header(&self) -> CheckpointHeader {
        CheckpointHeader {
            input_size: self.input_size() as u32,
            hidden_size: self.hidden_size() as u32,
            bottleneck_size: self.bottleneck_size() as u32,
            grid_size: self.grid().grid_size() as u32,
            degree: self.grid().degree() as u32,
            use_base: self.use_base(),
            float_width: T::WIDTH,
        }
    }

    pub fn to_checkpoint_bytes(&self) -> Vec<u8> {
        let h = self.header();
        let mut out = Vec::with_capacity(HEADER_LEN + self.count_params_actual() * T::WIDTH as usize);
        out.extend_from_slice(CHECKPOINT_MAGIC);
        for v in [
            h.input_size,
            h.hidden_size,
            h.bottleneck_size,
            h.grid_size,
            h.degree,
            h.use_base as u32,
            h.float_width,
        ] {
            out.write_u32::<LittleEndian>(v).expect("write to Vec");
        }
        for p in self.params() {
            for &v in p {
                v.write_le(&mut out);
            }
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), DataError> {
        let path = path.as_ref();
        fs::write(path, self.to_checkpoint_bytes()).map_err(|e| DataError::io(path, e))
    }

    pub fn from_checkpoint_bytes(bytes: &[u8], path: &Path) -> Result<Self> {
        let h = parse_header(bytes, path)?;
        if h.float_width != T::WIDTH {
            return Err(DataError::BadHeader {
                path: path.into(),
                detail: format!("checkpoint stores {}-byte floats, expected {}", h.float_width, T::WIDTH),
            }
            .into());
        }
        let grid = SplineGrid::new(h.grid_size as usize, h.degree as usize, -1.0, 1.0)?;
        let (i, hd, b) = (h.input_size as usize, h.hidden_size as usize, h.bottleneck_size as usize);
        let nb = grid.basis_count();
        let w = T::WIDTH as usize;

        let base_len = |rows: usize, cols: usize| if h.use_base { rows * cols } else { 0 };
        let expected = i * hd * nb * 2 + base_len(hd, i) * 2 + (b * hd + b) + (hd * b + hd);
        let payload = &bytes[HEADER_LEN..];
        if payload.len() != expected * w {
            let detail = format!("expected {} payload bytes, found {}", expected * w, payload.len());
            return Err(if payload.len() < expected * w {
                DataError::Truncated { path: path.into(), detail }
            } else {
                DataError::BadHeader { path: path.into(), detail }
            }
            .into());
        }
        let mut chunks = payload.chunks_exact(w).map(T::read_le);
        let mut take = |n: usize| -> Vec<T> { chunks.by_ref().take(n).collect() };
        let shaped = |e: ndarray::ShapeError| Error::InvalidArgument(e.to_string());

        let enc_coeff = Array3::from_shape_vec((hd, i, nb), take(hd * i * nb)).map_err(shaped)?;
        let enc_base = if h.use_base {
            Array2::from_shape_vec((hd, i), take(hd * i)).map_err(shaped)?
        } else {
            Array2::zeros((hd, i))
        };
        let enc_w = Array2::from_shape_vec((b, hd), take(b * hd)).map_err(shaped)?;
        let enc_b = Array1::from(take(b));
        let dec_w = Array2::from_shape_vec((hd, b), take(hd * b)).map_err(shaped)?;
        let dec_b = Array1::from(take(hd));
        let dec_coeff = Array3::from_shape_vec((i, hd, nb), take(i * hd * nb)).map_err(shaped)?;
        let dec_base = if h.use_base {
            Array2::from_shape_vec((i, hd), take(i * hd)).map_err(shaped)?
        } else {
            Array2::zeros((i, hd))
        };

        KanAutoencoder::from_layers(
            KanLayer::from_parts(grid.clone(), enc_coeff, enc_base, h.use_base)?,
            DenseLayer::from_parts(enc_w, enc_b)?,
            DenseLayer::from_parts(dec_w, dec_b)?,
            KanLayer::from_parts(grid, dec_coeff, dec_base, h.use_base)?,
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| DataError::io(path, e))?;
        Self::from_checkpoint_bytes(&bytes, path)
    }
}
