//! Run configuration: a JSON file merged with command-line flags.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::claims::{default_strategy, Selection, DEFAULT_N_MAX, DEFAULT_SAMPLES};
use crate::error::{Error, Result};
use crate::instances::{FilteredInstance, InstanceSpec};
use crate::report::{SearchStrategy, DEFAULT_LEVEL_BOUND};

/// Strategy as written in a config file. Missing bounded parameters take
/// their defaults.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyConfig {
    pub kind: Option<String>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub level_bound: Option<u32>,
}

impl StrategyConfig {
    /// Resolves the strategy. An unset kind means exhaustive on finite
    /// instances unless a bounded parameter was given.
    pub fn resolve(&self, inst: &FilteredInstance) -> Result<SearchStrategy> {
        let any_param = self.seed.is_some() || self.samples.is_some() || self.level_bound.is_some();
        let bounded = || {
            SearchStrategy::bounded(
                self.seed.unwrap_or(0),
                self.samples.unwrap_or(DEFAULT_SAMPLES),
                self.level_bound.unwrap_or(DEFAULT_LEVEL_BOUND),
            )
        };
        match self.kind.as_deref() {
            None if any_param => Ok(bounded()),
            None => Ok(default_strategy(inst)),
            Some("exhaustive") if any_param => Err(Error::config(
                "strategy",
                "seed, samples and level_bound apply to bounded_random only",
            )),
            Some("exhaustive") => Ok(SearchStrategy::Exhaustive),
            Some("bounded_random" | "bounded") => Ok(bounded()),
            Some(other) => Err(Error::config(
                "strategy.kind",
                format!("unknown strategy {other:?} (expected exhaustive or bounded_random)"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub instance: Option<InstanceSpec>,
    pub checks: Vec<String>,
    pub strategy: StrategyConfig,
    pub output: Option<PathBuf>,
    pub expect: Option<PathBuf>,
    pub n_max: usize,
    /// Elements for the `valuate` command.
    pub elements: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            instance: None,
            checks: Vec::new(),
            strategy: StrategyConfig::default(),
            output: None,
            expect: None,
            n_max: DEFAULT_N_MAX,
            elements: Vec::new(),
        }
    }
}

fn field<T: DeserializeOwned>(name: &str, v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::config(name, e.to_string()))
}

impl RunConfig {
    /// Parses a config document. Relative paths are taken relative to
    /// `base`, normally the directory holding the config file.
    pub fn from_json(text: &str, base: &Path) -> Result<RunConfig> {
        let root: Value = serde_json::from_str(text).map_err(|e| Error::config("<config>", e.to_string()))?;
        let Value::Object(map) = root else {
            return Err(Error::config("<config>", "expected a JSON object"));
        };
        let mut cfg = RunConfig::default();
        let path = |name: &str, v: Value| -> Result<PathBuf> {
            let p: PathBuf = field(name, v)?;
            Ok(if p.is_absolute() { p } else { base.join(p) })
        };
        for (key, v) in map {
            match key.as_str() {
                "instance" => cfg.instance = Some(field("instance", v)?),
                "checks" => {
                    cfg.checks = match v {
                        Value::String(s) => vec![s],
                        v => field("checks", v)?,
                    }
                }
                "strategy" => cfg.strategy = field("strategy", v)?,
                "output" => cfg.output = Some(path("output", v)?),
                "expect" => cfg.expect = Some(path("expect", v)?),
                "n_max" => cfg.n_max = field("n_max", v)?,
                "elements" => cfg.elements = field("elements", v)?,
                other => return Err(Error::config(other, "unknown field")),
            }
        }
        // unknown claim ids are rejected before anything runs
        Selection::parse(&cfg.checks)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("--config", format!("cannot read {}: {e}", path.display())))?;
        RunConfig::from_json(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn selection(&self) -> Result<Selection> {
        Selection::parse(&self.checks)
    }

    pub fn build_instance(&self) -> Result<FilteredInstance> {
        self.instance
            .as_ref()
            .ok_or_else(|| Error::config("instance", "no instance given"))?
            .build()
            .map_err(|e| match e {
                Error::Config { .. } => e,
                other => Error::config("instance", other.to_string()),
            })
    }
}
