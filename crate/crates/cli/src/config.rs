//! Run configuration: defaults, then an optional TOML or JSON file, then the
//! `SEED` environment variable, then command-line flags.

use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use pnveri::bifactor::{BiFactorConfig, DEFAULT_DEGREE_CAP, DEFAULT_SUBSET_CAP};
use pnveri::criteria::CriteriaConfig;
use pnveri::oracle::{OracleConfig, DEFAULT_CANDIDATE_CAP, DEFAULT_FIELD_CAP, DEFAULT_PAIR_CAP};
use pnveri::poly::factor::DEFAULT_SEED;
use pnveri::sing::{SingConfig, DEFAULT_POINT_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub max_ext_degree: usize,
    pub bifactor_degree: u32,
    pub recombination_subsets: u64,
    pub oracle_field: u64,
    pub oracle_pairs: u64,
    pub oracle_candidates: u64,
    pub census_points: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_ext_degree: 300,
            bifactor_degree: DEFAULT_DEGREE_CAP,
            recombination_subsets: DEFAULT_SUBSET_CAP,
            oracle_field: DEFAULT_FIELD_CAP,
            oracle_pairs: DEFAULT_PAIR_CAP,
            oracle_candidates: DEFAULT_CANDIDATE_CAP,
            census_points: DEFAULT_POINT_CAP,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub caps: Caps,
    pub seed: u64,
    pub groups: BTreeSet<u8>,
    pub with_b: bool,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            caps: Caps::default(),
            seed: DEFAULT_SEED,
            groups: (1..=5).collect(),
            with_b: false,
            format: Format::Text,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<RunConfig> {
        let mut cfg = match path {
            None => RunConfig::default(),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
                if is_json {
                    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
                } else {
                    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
                }
            }
        };
        if let Ok(seed) = std::env::var("SEED") {
            cfg.seed = parse_seed(&seed).context("SEED environment variable")?;
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.caps;
        if c.max_ext_degree == 0
            || c.bifactor_degree == 0
            || c.recombination_subsets == 0
            || c.oracle_field == 0
            || c.oracle_pairs == 0
            || c.oracle_candidates == 0
            || c.census_points == 0
        {
            bail!("caps must be positive");
        }
        if self.groups.is_empty() || self.groups.iter().any(|g| !(1..=5).contains(g)) {
            bail!("groups must be a nonempty subset of 1..5");
        }
        Ok(())
    }

    pub fn sing(&self) -> SingConfig {
        SingConfig {
            ext_cap: self.caps.max_ext_degree,
            point_cap: self.caps.census_points,
            ..SingConfig::default()
        }
    }

    pub fn bifactor(&self) -> BiFactorConfig {
        BiFactorConfig {
            degree_cap: self.caps.bifactor_degree,
            subset_cap: self.caps.recombination_subsets,
            ext_cap: self.caps.max_ext_degree,
            seed: self.seed,
            ..BiFactorConfig::default()
        }
    }

    pub fn criteria(&self, exhaustive: bool) -> CriteriaConfig {
        CriteriaConfig {
            sing: self.sing(),
            bifactor: self.bifactor(),
            groups: self.groups.clone(),
            with_b: self.with_b,
            exhaustive,
        }
    }

    pub fn oracle(&self) -> OracleConfig {
        OracleConfig {
            field_cap: self.caps.oracle_field,
            pair_cap: self.caps.oracle_pairs,
            candidate_cap: self.caps.oracle_candidates,
            ext_cap: self.caps.max_ext_degree,
            seed: self.seed,
        }
    }
}

/// Decimal or `0x`-prefixed hexadecimal.
pub fn parse_seed(s: &str) -> Result<u64> {
    let s = s.trim();
    let v = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    v.with_context(|| format!("invalid seed {s:?}"))
}

/// `"1,2,3"` or `"1-3"` or `"3"`.
pub fn parse_groups(s: &str) -> Result<BTreeSet<u8>, String> {
    let mut out = BTreeSet::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (u8, u8) = (a.parse().map_err(|_| bad(part))?, b.parse().map_err(|_| bad(part))?);
                out.extend(a..=b);
            }
            None => {
                out.insert(part.parse().map_err(|_| bad(part))?);
            }
        }
    }
    if out.is_empty() || out.iter().any(|g| !(1..=5).contains(g)) {
        return Err(format!("groups must lie in 1..5, got {s:?}"));
    }
    Ok(out)
}

fn bad(part: &str) -> String {
    format!("invalid group {part:?}")
}

/// `"1..5"` (inclusive), `"1,3,4"` or `"2"`.
pub fn parse_range(s: &str) -> Result<Vec<usize>, String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| format!("invalid range {s:?}"))?;
        let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| format!("invalid range {s:?}"))?;
        if a == 0 || a > b {
            return Err(format!("invalid range {s:?}"));
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| format!("invalid list {s:?}")))
        .filter(|r| !matches!(r, Ok(0)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_groups_and_ranges() {
        assert_eq!(parse_groups("1,3").unwrap(), [1, 3].into());
        assert_eq!(parse_groups("1-3").unwrap(), [1, 2, 3].into());
        assert!(parse_groups("6").is_err());
        assert_eq!(parse_range("1..5").unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(parse_range("2,4").unwrap(), vec![2, 4]);
        assert!(parse_range("3..1").is_err());
    }

    #[test]
    fn parses_seeds() {
        assert_eq!(parse_seed("0xC0FFEE").unwrap(), 0xC0FFEE);
        assert_eq!(parse_seed("42").unwrap(), 42);
        assert!(parse_seed("x").is_err());
    }

    #[test]
    fn toml_overrides_defaults() {
        let cfg: RunConfig = toml::from_str("seed = 7\n[caps]\nbifactor_degree = 40\n").unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.caps.bifactor_degree, 40);
        assert_eq!(cfg.caps.oracle_field, DEFAULT_FIELD_CAP);
        assert!(toml::from_str::<RunConfig>("colour = 1").is_err());
    }
}
