use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::cifar::read_cifar10;
use super::idx::read_idx_pair;
use super::ImageBytes;
use crate::error::DataError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Test => "test",
        })
    }
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            other => Err(format!("unknown split '{other}'")),
        }
    }
}

/// An on-disk dataset layout that can be loaded from a directory.
pub trait DatasetFormat: Send + Sync {
    /// Name used on the command line.
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Files read for `split`, in load order.
    fn files(&self, data_dir: &Path, split: Split) -> Vec<PathBuf>;

    fn load(&self, data_dir: &Path, split: Split) -> Result<ImageBytes, DataError>;
}

/// MNIST as distributed: `{train,t10k}-{images-idx3,labels-idx1}-ubyte`.
#[derive(Debug, Default)]
pub struct MnistIdx;

impl DatasetFormat for MnistIdx {
    fn name(&self) -> &'static str {
        "mnist"
    }

    fn description(&self) -> &'static str {
        "IDX image/label pairs (train-*-ubyte, t10k-*-ubyte)"
    }

    fn files(&self, data_dir: &Path, split: Split) -> Vec<PathBuf> {
        let prefix = match split {
            Split::Train => "train",
            Split::Test => "t10k",
        };
        vec![
            data_dir.join(format!("{prefix}-images-idx3-ubyte")),
            data_dir.join(format!("{prefix}-labels-idx1-ubyte")),
        ]
    }

    fn load(&self, data_dir: &Path, split: Split) -> Result<ImageBytes, DataError> {
        let f = self.files(data_dir, split);
        read_idx_pair(&f[0], &f[1])
    }
}

/// CIFAR-10 binary version: `data_batch_{1..5}.bin` and `test_batch.bin`,
/// directly in the directory or under `cifar-10-batches-bin/`.
#[derive(Debug, Default)]
pub struct Cifar10Binary;

impl DatasetFormat for Cifar10Binary {
    fn name(&self) -> &'static str {
        "cifar10"
    }

    fn description(&self) -> &'static str {
        "CIFAR-10 binary batches (data_batch_N.bin, test_batch.bin)"
    }

    fn files(&self, data_dir: &Path, split: Split) -> Vec<PathBuf> {
        let nested = data_dir.join("cifar-10-batches-bin");
        let dir = if nested.is_dir() { nested } else { data_dir.to_path_buf() };
        match split {
            Split::Train => (1..=5).map(|i| dir.join(format!("data_batch_{i}.bin"))).collect(),
            Split::Test => vec![dir.join("test_batch.bin")],
        }
    }

    fn load(&self, data_dir: &Path, split: Split) -> Result<ImageBytes, DataError> {
        read_cifar10(&self.files(data_dir, split))
    }
}

/// RAWDS1 containers `train.rawds` / `test.rawds`.
#[derive(Debug, Default)]
pub struct RawContainer;

impl DatasetFormat for RawContainer {
    fn name(&self) -> &'static str {
        "raw"
    }

    fn description(&self) -> &'static str {
        "RAWDS1 containers (train.rawds, test.rawds)"
    }

    fn files(&self, data_dir: &Path, split: Split) -> Vec<PathBuf> {
        vec![data_dir.join(format!("{split}.rawds"))]
    }

    fn load(&self, data_dir: &Path, split: Split) -> Result<ImageBytes, DataError> {
        let path = &self.files(data_dir, split)[0];
        let bytes = std::fs::read(path).map_err(|e| DataError::io(path, e))?;
        super::parse_raw(&bytes, path)
    }
}

/// Dataset formats by name.
pub struct DatasetRegistry {
    formats: BTreeMap<&'static str, Box<dyn DatasetFormat>>,
}

impl DatasetRegistry {
    pub fn empty() -> Self {
        DatasetRegistry {
            formats: BTreeMap::new(),
        }
    }

    /// `mnist`, `cifar10` and `raw`.
    pub fn with_builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(MnistIdx));
        r.register(Box::new(Cifar10Binary));
        r.register(Box::new(RawContainer));
        r
    }

    /// Adds `format`, replacing any previous entry with the same name.
    pub fn register(&mut self, format: Box<dyn DatasetFormat>) {
        self.formats.insert(format.name(), format);
    }

    pub fn get(&self, name: &str) -> Result<&dyn DatasetFormat, DataError> {
        self.formats
            .get(name)
            .map(|f| f.as_ref())
            .ok_or_else(|| DataError::UnknownFormat(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.formats.keys().copied()
    }
}

impl Default for DatasetRegistry {
    fn default() -> Self {
        Self::with_builtin()
    }
}
