//! Flat `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored. Relative paths in a file
//! resolve against the file's directory; paths given as flags resolve
//! against the working directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cepstex_core::imaging::DEFAULT_LEVELS;
use cepstex_core::learn::GbmParams;
use cepstex_core::synth::{SynthKind, SynthParams};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scorer {
    Fast,
    Full,
}

/// How the "+cepstrum" model of a base-vs-augmented comparison is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Augment {
    /// Family columns plus every cepstral column.
    Concat,
    /// Family columns plus the best greedy-selected cepstral prefix.
    Select,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub manifest: Option<PathBuf>,
    pub features: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub levels: usize,
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
    pub test_fraction: f64,
    pub validation_fraction: f64,
    pub threshold: f64,
    pub gbm: GbmParams,
    pub select_k: usize,
    pub scorer: Scorer,
    pub augment: Augment,
    pub merge: Vec<PathBuf>,
    pub synth: SynthParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            manifest: None,
            features: None,
            out: None,
            seed: 42,
            levels: DEFAULT_LEVELS,
            jobs: 0,
            test_fraction: 0.2,
            validation_fraction: 0.25,
            threshold: 0.5,
            gbm: GbmParams::default(),
            select_k: 0,
            scorer: Scorer::Fast,
            augment: Augment::Concat,
            merge: vec![],
            synth: SynthParams::default(),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid value `{value}` for `{key}`")))
}

impl RunConfig {
    /// Reads a config file on top of the defaults.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let mut cfg = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("{}:{}: expected `key = value`", path.display(), n + 1)))?;
            cfg.set(key.trim(), value.trim(), base)?;
        }
        Ok(cfg)
    }

    /// Sets one key; relative paths are joined onto `base`.
    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<(), CliError> {
        let path = |v: &str| base.join(v);
        match key {
            "manifest" => self.manifest = Some(path(value)),
            "features" => self.features = Some(path(value)),
            "out" => self.out = Some(path(value)),
            "seed" => self.seed = parse(key, value)?,
            "levels" => self.levels = parse(key, value)?,
            "jobs" => self.jobs = parse(key, value)?,
            "test_fraction" => self.test_fraction = parse(key, value)?,
            "validation_fraction" => self.validation_fraction = parse(key, value)?,
            "threshold" => self.threshold = parse(key, value)?,
            "rounds" => self.gbm.rounds = parse(key, value)?,
            "max_depth" => self.gbm.max_depth = parse(key, value)?,
            "learning_rate" => self.gbm.learning_rate = parse(key, value)?,
            "min_child_weight" => self.gbm.min_child_weight = parse(key, value)?,
            "lambda" => self.gbm.lambda = parse(key, value)?,
            "subsample" => self.gbm.subsample = parse(key, value)?,
            "colsample" => self.gbm.colsample = parse(key, value)?,
            "select_k" => self.select_k = parse(key, value)?,
            "scorer" => {
                self.scorer = match value {
                    "fast" => Scorer::Fast,
                    "full" => Scorer::Full,
                    _ => return Err(CliError::Usage(format!("scorer must be `fast` or `full`, got `{value}`"))),
                }
            }
            "augment" => {
                self.augment = match value {
                    "concat" => Augment::Concat,
                    "select" => Augment::Select,
                    _ => return Err(CliError::Usage(format!("augment must be `concat` or `select`, got `{value}`"))),
                }
            }
            "merge" => {
                self.merge = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(path)
                    .collect()
            }
            "synth_kind" => {
                self.synth.kind = value
                    .parse::<SynthKind>()
                    .map_err(|e| CliError::Usage(e.to_string()))?
            }
            "synth_count" => self.synth.count = parse(key, value)?,
            "synth_size" => self.synth.size = parse(key, value)?,
            "synth_period" => self.synth.period = parse(key, value)?,
            "synth_contrast" => self.synth.contrast = parse(key, value)?,
            _ => return Err(CliError::Usage(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    /// Every setting that can change results, as sorted `key=value` pairs.
    /// Output location and thread count are left out.
    pub fn canonical(&self) -> BTreeMap<&'static str, String> {
        let p = |v: &Option<PathBuf>| v.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        let g = &self.gbm;
        let s = &self.synth;
        BTreeMap::from([
            ("manifest", p(&self.manifest)),
            ("features", p(&self.features)),
            ("seed", self.seed.to_string()),
            ("levels", self.levels.to_string()),
            ("test_fraction", self.test_fraction.to_string()),
            ("validation_fraction", self.validation_fraction.to_string()),
            ("threshold", self.threshold.to_string()),
            ("rounds", g.rounds.to_string()),
            ("max_depth", g.max_depth.to_string()),
            ("learning_rate", g.learning_rate.to_string()),
            ("min_child_weight", g.min_child_weight.to_string()),
            ("lambda", g.lambda.to_string()),
            ("subsample", g.subsample.to_string()),
            ("colsample", g.colsample.to_string()),
            ("select_k", self.select_k.to_string()),
            ("scorer", format!("{:?}", self.scorer).to_lowercase()),
            ("augment", format!("{:?}", self.augment).to_lowercase()),
            (
                "merge",
                self.merge.iter().map(|m| m.display().to_string()).collect::<Vec<_>>().join(","),
            ),
            ("synth_kind", s.kind.name().to_string()),
            ("synth_count", s.count.to_string()),
            ("synth_size", s.size.to_string()),
            ("synth_period", s.period.to_string()),
            ("synth_contrast", s.contrast.to_string()),
        ])
    }

    /// SHA-256 of the canonical settings, hex encoded.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in self.canonical() {
            h.update(format!("{k}={v}\n").as_bytes());
        }
        format!("{:x}", h.finalize())
    }

    /// Comment lines stamped onto every CSV artifact.
    pub fn stamp(&self) -> Vec<String> {
        vec![format!("seed={}", self.seed), format!("config_sha256={}", self.hash())]
    }

    pub fn scorer_params(&self) -> GbmParams {
        match self.scorer {
            Scorer::Fast => GbmParams {
                rounds: GbmParams::fast().rounds,
                ..self.gbm
            },
            Scorer::Full => self.gbm,
        }
    }

    pub fn require_out(&self) -> Result<&Path, CliError> {
        self.out
            .as_deref()
            .ok_or_else(|| CliError::Usage("an output directory is required (--out or `out =`)".into()))
    }
}

/// Fails unless `path` is an existing file.
pub fn require_file(what: &str, path: Option<&Path>) -> Result<PathBuf, CliError> {
    let path = path.ok_or_else(|| CliError::Usage(format!("a {what} path is required")))?;
    if !path.is_file() {
        return Err(CliError::Usage(format!("{what} {} does not exist", path.display())));
    }
    Ok(path.to_path_buf())
}
