//! Flag + `key=value` file resolution into one fully explicit [`RunConfig`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use kanae_core::autoencoder::TrainConfig;
use kanae_core::seed::sub_seed;
use kanae_core::SplineGrid;

use crate::args::{Common, Precision};
use crate::error::{CliError, CliResult};

/// Spline domain of every model the CLI builds. Checkpoints do not store it.
pub const DOMAIN: (f64, f64) = (-1.0, 1.0);

const KEYS: &[&str] = &[
    "command",
    "dataset",
    "data-dir",
    "input",
    "hidden",
    "bottleneck",
    "grid",
    "degree",
    "domain",
    "epochs",
    "lr",
    "weight-decay",
    "batch-size",
    "l1",
    "seed",
    "out",
    "no-base",
    "k",
    "train-limit",
    "test-limit",
    "precision",
    "no-timing",
    "bottlenecks",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    pub dataset: String,
    pub data_dir: PathBuf,
    pub hidden: usize,
    pub bottleneck: usize,
    pub grid: usize,
    pub degree: usize,
    pub epochs: usize,
    pub lr: f64,
    pub weight_decay: f64,
    pub batch_size: usize,
    pub l1: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub use_base: bool,
    pub k: usize,
    pub train_limit: Option<usize>,
    pub test_limit: Option<usize>,
    pub precision: Precision,
    pub timing: bool,
    /// Sweep only.
    pub bottlenecks: Vec<usize>,
}

struct FileValues {
    path: PathBuf,
    map: BTreeMap<String, String>,
}

impl FileValues {
    fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(FileValues {
                path: PathBuf::new(),
                map: BTreeMap::new(),
            });
        };
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Ok(FileValues {
            path: path.to_path_buf(),
            map: parse_key_values(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
        })
    }

    fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| {
                CliError::Usage(format!("{}: invalid value '{v}' for '{key}'", self.path.display()))
            }),
        }
    }

    fn flag(&self, key: &str) -> CliResult<bool> {
        Ok(self.get::<bool>(key)?.unwrap_or(false))
    }

    fn limit(&self, key: &str) -> CliResult<Option<usize>> {
        match self.map.get(key).map(String::as_str) {
            None | Some("none") => Ok(None),
            Some(_) => self.get(key),
        }
    }
}

/// Parses `key=value` lines. `#` starts a comment; `_` in keys reads as `-`.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value", no + 1))?;
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(format!("line {}: unknown key '{key}'", no + 1));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<usize>().map_err(|_| format!("invalid bottleneck '{p}'")))
        .collect()
}

impl RunConfig {
    pub fn resolve(command: &'static str, c: &Common, bottlenecks: &[usize]) -> CliResult<Self> {
        let f = FileValues::load(c.config.as_deref())?;
        if let Some(d) = f.map.get("domain") {
            if d.replace(' ', "") != "-1,1" {
                return Err(CliError::Usage(format!("only the domain -1,1 is supported, got '{d}'")));
            }
        }
        let dataset = c.dataset.clone().or(f.get("dataset")?).unwrap_or_else(|| "mnist".into());
        let precision = match c.precision {
            Some(p) => p,
            None => match f.map.get("precision") {
                Some(s) => Precision::from_str(s, true).map_err(|_| CliError::Usage(format!("invalid precision '{s}'")))?,
                None => Precision::F64,
            },
        };
        let bottlenecks = if !bottlenecks.is_empty() {
            bottlenecks.to_vec()
        } else if let Some(s) = f.map.get("bottlenecks") {
            parse_list(s).map_err(CliError::Usage)?
        } else {
            Vec::new()
        };
        let cfg = RunConfig {
            command,
            data_dir: c
                .data_dir
                .clone()
                .or(f.get("data-dir")?)
                .unwrap_or_else(|| Path::new("data").join(&dataset)),
            dataset,
            hidden: c.hidden.or(f.get("hidden")?).unwrap_or(8),
            bottleneck: c.bottleneck.or(f.get("bottleneck")?).unwrap_or(9),
            grid: c.grid.or(f.get("grid")?).unwrap_or(5),
            degree: c.degree.or(f.get("degree")?).unwrap_or(3),
            epochs: c.epochs.or(f.get("epochs")?).unwrap_or(10),
            lr: c.lr.or(f.get("lr")?).unwrap_or(1e-3),
            weight_decay: c.weight_decay.or(f.get("weight-decay")?).unwrap_or(1e-4),
            batch_size: c.batch_size.or(f.get("batch-size")?).unwrap_or(128),
            l1: c.l1.or(f.get("l1")?).unwrap_or(0.0),
            seed: c.seed.or(f.get("seed")?).unwrap_or(42),
            out: c.out.clone().or(f.get("out")?).unwrap_or_else(|| PathBuf::from("out")),
            use_base: !(c.no_base || f.flag("no-base")?),
            k: c.k.or(f.get("k")?).unwrap_or(5),
            train_limit: c.train_limit.map(Some).unwrap_or(f.limit("train-limit")?),
            test_limit: c.test_limit.map(Some).unwrap_or(f.limit("test-limit")?),
            precision,
            timing: !(c.no_timing || f.flag("no-timing")?),
            bottlenecks,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        let usage = |m: &str| Err(CliError::Usage(m.to_string()));
        if self.hidden == 0 || self.bottleneck == 0 {
            return usage("--hidden and --bottleneck must be at least 1");
        }
        if self.grid == 0 {
            return usage("--grid must be at least 1");
        }
        if self.k == 0 {
            return usage("--k must be at least 1");
        }
        self.train_config()
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn spline_grid(&self) -> SplineGrid {
        SplineGrid::new(self.grid, self.degree, DOMAIN.0, DOMAIN.1).expect("validated grid")
    }

    pub fn init_seed(&self) -> u64 {
        sub_seed(self.seed, "init")
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            epochs: self.epochs,
            lr: self.lr,
            weight_decay: self.weight_decay,
            batch_size: self.batch_size,
            l1_lambda: self.l1,
            seed: sub_seed(self.seed, "shuffle"),
            shuffle: true,
        }
    }

    /// The resolved configuration in the `key=value` format accepted by
    /// `--config`.
    pub fn echo(&self, input: usize) -> String {
        let limit = |l: Option<usize>| l.map_or_else(|| "none".to_string(), |n| n.to_string());
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        kv("command", self.command.into());
        kv("dataset", self.dataset.clone());
        kv("data-dir", self.data_dir.display().to_string());
        kv("input", input.to_string());
        kv("hidden", self.hidden.to_string());
        kv("bottleneck", self.bottleneck.to_string());
        kv("grid", self.grid.to_string());
        kv("degree", self.degree.to_string());
        kv("domain", format!("{},{}", DOMAIN.0, DOMAIN.1));
        kv("epochs", self.epochs.to_string());
        kv("lr", self.lr.to_string());
        kv("weight-decay", self.weight_decay.to_string());
        kv("batch-size", self.batch_size.to_string());
        kv("l1", self.l1.to_string());
        kv("seed", self.seed.to_string());
        kv("out", self.out.display().to_string());
        kv("no-base", (!self.use_base).to_string());
        kv("k", self.k.to_string());
        kv("train-limit", limit(self.train_limit));
        kv("test-limit", limit(self.test_limit));
        kv("precision", self.precision.as_str().into());
        kv("no-timing", (!self.timing).to_string());
        if !self.bottlenecks.is_empty() {
            let list: Vec<String> = self.bottlenecks.iter().map(usize::to_string).collect();
            kv("bottlenecks", list.join(","));
        }
        s
    }
}
