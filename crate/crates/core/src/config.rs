//! `key = value` configuration files.
//!
//! One assignment per line; blank lines and `#` comments are ignored. Lists
//! are comma separated. Unknown keys are errors.

use crate::error::{Error, Result};
use crate::experiments::RandomSetConfig;
use crate::geometry::Point;
use crate::growth::GrowthConfig;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    source_name: String,
    entries: BTreeMap<String, (usize, String)>,
    used: BTreeSet<String>,
}

impl KeyValues {
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                source_name: source_name.to_string(),
                line: i + 1,
                message,
            };
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got '{body}'")))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(err("empty key".into()));
            }
            if entries.insert(key.to_string(), (i + 1, value.trim().to_string())).is_some() {
                return Err(err(format!("duplicate key '{key}'")));
            }
        }
        Ok(KeyValues {
            source_name: source_name.to_string(),
            entries,
            used: BTreeSet::new(),
        })
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn raw(&mut self, key: &str) -> Option<(usize, String)> {
        let found = self.entries.get(key).cloned();
        if found.is_some() {
            self.used.insert(key.to_string());
        }
        found
    }

    pub fn get<T: FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<T>().map(Some).map_err(|e| Error::Parse {
                source_name: self.source_name.clone(),
                line,
                message: format!("bad value for '{key}': '{v}' ({e})"),
            }),
        }
    }

    pub fn get_list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => parse_list(&v).map(Some).map_err(|message| Error::Parse {
                source_name: self.source_name.clone(),
                line,
                message: format!("bad list for '{key}': {message}"),
            }),
        }
    }

    /// Fails on the first key that no getter asked for.
    pub fn finish(&self) -> Result<()> {
        match self.entries.iter().find(|(k, _)| !self.used.contains(*k)) {
            None => Ok(()),
            Some((k, (line, _))) => Err(Error::Parse {
                source_name: self.source_name.clone(),
                line: *line,
                message: format!("unknown key '{k}'"),
            }),
        }
    }
}

/// Parses `a, b, c`. An empty string is an empty list.
pub fn parse_list<T: FromStr>(s: &str) -> std::result::Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|item| {
            let item = item.trim();
            item.parse::<T>().map_err(|e| format!("'{item}': {e}"))
        })
        .collect()
}

/// Overrides fields of `base` with the growth keys present in `kv`.
pub fn apply_growth_keys(kv: &mut KeyValues, base: GrowthConfig) -> Result<GrowthConfig> {
    let mut cfg = base;
    let seed_x = kv.get("seed_x")?.unwrap_or(cfg.seed.x);
    let seed_y = kv.get("seed_y")?.unwrap_or(cfg.seed.y);
    cfg.seed = Point::new(seed_x, seed_y);
    macro_rules! take {
        ($($field:ident),*) => {
            $(if let Some(v) = kv.get(stringify!($field))? { cfg.$field = v; })*
        };
    }
    take!(beta, r0, dr, dtheta, delta, r_max, connectivity_mode, strict);
    Ok(cfg)
}

pub fn growth_config_text(cfg: &GrowthConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "seed_x = {}", cfg.seed.x);
    let _ = writeln!(out, "seed_y = {}", cfg.seed.y);
    let _ = writeln!(out, "beta = {}", cfg.beta);
    let _ = writeln!(out, "r0 = {}", cfg.r0);
    let _ = writeln!(out, "dr = {}", cfg.dr);
    let _ = writeln!(out, "dtheta = {}", cfg.dtheta);
    let _ = writeln!(out, "delta = {}", cfg.delta);
    let _ = writeln!(out, "r_max = {}", cfg.r_max);
    let _ = writeln!(out, "connectivity_mode = {}", cfg.connectivity_mode);
    let _ = writeln!(out, "strict = {}", cfg.strict);
    out
}

pub fn apply_random_set_keys(kv: &mut KeyValues, base: RandomSetConfig) -> Result<RandomSetConfig> {
    let mut cfg = base;
    macro_rules! take {
        ($($field:ident),*) => {
            $(if let Some(v) = kv.get(stringify!($field))? { cfg.$field = v; })*
        };
    }
    take!(n, domain_radius, min_separation, rng_seed);
    Ok(cfg)
}

pub fn random_set_config_text(cfg: &RandomSetConfig) -> String {
    format!(
        "n = {}\ndomain_radius = {}\nmin_separation = {}\nrng_seed = {}\n",
        cfg.n, cfg.domain_radius, cfg.min_separation, cfg.rng_seed
    )
}
