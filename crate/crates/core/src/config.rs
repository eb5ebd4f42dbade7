//! TOML configuration file. Every field is optional; command-line flags
//! override whatever is set here.
//!
//! ```toml
//! synonyms = "synonyms.txt"
//! stoplist = "stop.txt"
//!
//! [thresholds]
//! alpha1 = 0.5
//! alpha2 = 0.75
//! beta = 1.0
//! gamma = 5.0
//! sim_threshold = 0.75
//!
//! [checkers]
//! cover = true
//! statistical = true
//!
//! [filters]
//! disabled = ["type-check"]
//! whitelist_words = ["swap", "exchange", "rotate", "flip"]
//! max_swap_distance = 2
//! not_rare_count = 3
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::checker::Thresholds;
use crate::error::{Error, Result};
use crate::filters::{Filter, FilterConfig};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub synonyms: Option<PathBuf>,
    pub stoplist: Option<PathBuf>,
    #[serde(default)]
    pub thresholds: ThresholdConfig,
    #[serde(default)]
    pub checkers: CheckerConfig,
    #[serde(default)]
    pub filters: FilterSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdConfig {
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub sim_threshold: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckerConfig {
    pub cover: Option<bool>,
    pub statistical: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterSection {
    #[serde(default)]
    pub disabled: Vec<String>,
    pub whitelist_words: Option<Vec<String>>,
    pub max_swap_distance: Option<usize>,
    pub not_rare_count: Option<usize>,
}

impl Config {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut cfg: Config =
            toml::from_str(text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        // Relative file references are relative to the config file.
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.synonyms, &mut cfg.stoplist].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Applies the file's values on top of `th`.
    pub fn apply_thresholds(&self, th: &mut Thresholds) {
        let t = &self.thresholds;
        for (slot, v) in [
            (&mut th.alpha1, t.alpha1),
            (&mut th.alpha2, t.alpha2),
            (&mut th.beta, t.beta),
            (&mut th.gamma, t.gamma),
            (&mut th.sim_threshold, t.sim_threshold),
        ] {
            if let Some(v) = v {
                *slot = v;
            }
        }
    }

    pub fn apply_filters(&self, cfg: &mut FilterConfig) -> Result<()> {
        let f = &self.filters;
        for name in &f.disabled {
            cfg.disabled.insert(name.parse::<Filter>()?);
        }
        if let Some(words) = &f.whitelist_words {
            cfg.whitelist_words = words.clone();
        }
        if let Some(d) = f.max_swap_distance {
            cfg.max_swap_distance = d;
        }
        if let Some(n) = f.not_rare_count {
            cfg.not_rare_count = n;
        }
        Ok(())
    }
}
