//! Flat `key = value` run configuration.
//!
//! ```text
//! # families take a range `a..b` (inclusive) or a list `3,6,9`
//! storecomm = 2..15
//! circular_queue = 3,6,9
//! k = 3
//! count = 9
//! seed = 42
//! ordering = good-lpo, std-kbo
//! timeout = 150
//! ```

use std::time::Duration;

use thiserror::Error;

use crate::benchgen::Family;
use crate::orderings::Scheme;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("no families given")]
    NoFamilies,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyRange {
    pub family: Family,
    pub sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub families: Vec<FamilyRange>,
    /// Instances per (family, n) point.
    pub count: usize,
    pub seed: u64,
    /// Modulus for CIRCULARQUEUE.
    pub k: usize,
    pub orderings: Vec<Scheme>,
    /// Search plan; `None` uses the plan that belongs to each ordering.
    pub plan: Option<Scheme>,
    pub timeout: Duration,
    pub clause_cap: usize,
    pub lemma_store_comm: bool,
    pub nontrivial: bool,
    pub audit: bool,
    /// Replay the proof of every unsatisfiable instance.
    pub replay: bool,
    /// Worker threads; 0 means one per CPU.
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            families: Vec::new(),
            count: 9,
            seed: 42,
            k: 3,
            orderings: vec![Scheme::GoodLpo],
            plan: None,
            timeout: Duration::from_secs(150),
            clause_cap: 1_000_000,
            lemma_store_comm: false,
            nontrivial: false,
            audit: false,
            replay: true,
            jobs: 0,
        }
    }
}

fn parse_sizes(v: &str) -> Result<Vec<usize>, String> {
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad number `{}`", s.trim()));
    let mut out = Vec::new();
    for part in v.split(',') {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty range `{}`", part.trim()));
            }
            out.extend(a..=b);
        } else {
            out.push(num(part)?);
        }
    }
    Ok(out)
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(format!("expected a boolean, got `{v}`")),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ConfigError::Syntax { line: i + 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let int = |v: &str| v.parse::<u64>().map_err(|_| err(format!("bad number `{v}` for `{key}`")));
            match key {
                "count" => cfg.count = int(value)? as usize,
                "seed" => cfg.seed = int(value)?,
                "k" => cfg.k = int(value)? as usize,
                "timeout" => {
                    let secs: f64 = value.parse().map_err(|_| err(format!("bad timeout `{value}`")))?;
                    if !(secs > 0.0 && secs.is_finite()) {
                        return Err(err("timeout must be positive".into()));
                    }
                    cfg.timeout = Duration::from_secs_f64(secs);
                }
                "clause_cap" => cfg.clause_cap = int(value)? as usize,
                "jobs" => cfg.jobs = int(value)? as usize,
                "ordering" | "orderings" => {
                    cfg.orderings = value
                        .split(',')
                        .map(|s| s.trim().parse::<Scheme>().map_err(&err))
                        .collect::<Result<_, _>>()?;
                }
                "plan" => {
                    cfg.plan = match value {
                        "auto" => None,
                        v => Some(v.parse::<Scheme>().map_err(err)?),
                    }
                }
                "lemma_store_comm" | "lemma" => cfg.lemma_store_comm = parse_bool(value).map_err(err)?,
                "nontrivial" => cfg.nontrivial = parse_bool(value).map_err(err)?,
                "audit" => cfg.audit = parse_bool(value).map_err(err)?,
                "replay" => cfg.replay = parse_bool(value).map_err(err)?,
                _ => {
                    let family: Family = key.parse().map_err(|_| err(format!("unknown key `{key}`")))?;
                    let sizes = parse_sizes(value).map_err(err)?;
                    cfg.families.retain(|f| f.family != family);
                    cfg.families.push(FamilyRange { family, sizes });
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.families.is_empty() {
            return Err(ConfigError::NoFamilies);
        }
        if self.families.iter().any(|f| f.sizes.is_empty()) {
            return Err(ConfigError::Invalid("empty size range".into()));
        }
        if self.timeout.is_zero() {
            return Err(ConfigError::Invalid("timeout must be positive".into()));
        }
        if self.count == 0 {
            return Err(ConfigError::Invalid("count must be positive".into()));
        }
        if self.orderings.is_empty() {
            return Err(ConfigError::Invalid("no ordering given".into()));
        }
        Ok(())
    }
}
