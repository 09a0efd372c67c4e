//! Flat `key = value` run configuration.
//!
//! ```text
//! # kill-web defaults, spelled out
//! eta = 0.7
//! lambda_decay = 0.7
//! steps = 500
//! weights = 0.25, 0.25, 0.25, 0.25
//! ```
//!
//! Lists are comma-separated. Relative paths resolve against the config
//! file's directory. Unknown or repeated keys are parse errors.

use std::path::{Path, PathBuf};

use qiham_core::evolution::StateSource;

use crate::error::CliError;
use crate::table::read_text;

pub const KEYS: &[&str] = &[
    "n",
    "d",
    "eta",
    "lambda_decay",
    "steps",
    "seed",
    "snapshot_stride",
    "state_source",
    "mask_path",
    "weights",
    "energies",
    "grid_points",
    "restarts",
    "max_rounds",
    "tolerance",
    "out_dir",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub eta: Option<f64>,
    pub lambda_decay: Option<f64>,
    pub steps: Option<usize>,
    pub seed: Option<u64>,
    pub snapshot_stride: Option<usize>,
    pub state_source: Option<StateSource>,
    pub mask_path: Option<PathBuf>,
    pub weights: Option<Vec<f64>>,
    pub energies: Option<Vec<f64>>,
    pub grid_points: Option<usize>,
    pub restarts: Option<usize>,
    pub max_rounds: Option<usize>,
    pub tolerance: Option<f64>,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read_text(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(&text, path, base)
    }

    /// `origin` names the document in errors; `base` anchors relative paths.
    pub fn parse(text: &str, origin: &Path, base: &Path) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<&str> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let err = |column: usize, msg: String| CliError::parse(origin, ln + 1, column, msg);
            let Some((key, value)) = line.split_once('=') else {
                return Err(err(1, "expected `key = value`".into()));
            };
            let eq = key.len();
            let rest = &line[eq + 1..];
            let vcol = eq + 2 + (rest.len() - rest.trim_start().len());
            let key = key.trim();
            let value = value.trim();
            let kcol = line.len() - line.trim_start().len() + 1;
            let Some(&key) = KEYS.iter().find(|k| **k == key) else {
                return Err(err(kcol, format!("unknown key `{key}`")));
            };
            if seen.contains(&key) {
                return Err(err(kcol, format!("key `{key}` given twice")));
            }
            seen.push(key);
            let bad = |what: &str| err(vcol, format!("`{value}` is not {what} for `{key}`"));
            let int = || {
                value
                    .parse::<usize>()
                    .map_err(|_| bad("a nonnegative integer"))
            };
            let real = || {
                value
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| bad("a finite number"))
            };
            let list = || {
                value
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
                    .collect::<Option<Vec<f64>>>()
                    .ok_or_else(|| bad("a comma-separated list of numbers"))
            };
            let path = || {
                if value.is_empty() {
                    Err(bad("a path"))
                } else {
                    Ok(base.join(value))
                }
            };
            match key {
                "n" => cfg.n = Some(int()?),
                "d" => cfg.d = Some(int()?),
                "eta" => cfg.eta = Some(real()?),
                "lambda_decay" => cfg.lambda_decay = Some(real()?),
                "steps" => cfg.steps = Some(int()?),
                "seed" => {
                    cfg.seed = Some(
                        value
                            .parse()
                            .map_err(|_| bad("a 64-bit unsigned integer"))?,
                    )
                }
                "snapshot_stride" => cfg.snapshot_stride = Some(int()?),
                "state_source" => {
                    cfg.state_source = Some(
                        value
                            .parse()
                            .map_err(|_| bad("`random_bipartite` or `blue_superposition`"))?,
                    )
                }
                "mask_path" => cfg.mask_path = Some(path()?),
                "weights" => cfg.weights = Some(list()?),
                "energies" => cfg.energies = Some(list()?),
                "grid_points" => cfg.grid_points = Some(int()?),
                "restarts" => cfg.restarts = Some(int()?),
                "max_rounds" => cfg.max_rounds = Some(int()?),
                "tolerance" => cfg.tolerance = Some(real()?),
                "out_dir" => cfg.out_dir = Some(path()?),
                _ => unreachable!("key list is exhaustive"),
            }
        }
        Ok(cfg)
    }
}
