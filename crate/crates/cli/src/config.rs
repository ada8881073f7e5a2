//! Flat `key = value` experiment files. Blank lines and lines starting with
//! `#` are ignored; keys use the long flag names with `-` or `_`.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::Failure;

pub const KEYS: &[&str] = &[
    "preset",
    "cf",
    "method",
    "t0",
    "kappa",
    "morphism",
    "seed",
    "input",
    "length",
    "depth",
    "initial_window",
    "per_n",
    "window_cap",
    "window",
    "power_cap",
    "max_len",
    "jobs",
    "output",
    "samples",
    "rng_seed",
];

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        text.parse()
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, Failure>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Failure::Usage(format!("config key {key}: {e}")))
            })
            .transpose()
    }

    /// `flag` when given, otherwise the file's value.
    pub fn or<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, Failure>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

impl FromStr for ConfigFile {
    type Err = Failure;

    fn from_str(text: &str) -> Result<Self, Failure> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Failure::Usage(format!("config line {}: expected key = value", i + 1)))?;
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(Failure::Usage(format!("config line {}: unknown key {key:?}", i + 1)));
            }
            let value = value.trim().trim_matches('"').to_string();
            if values.insert(key.clone(), value).is_some() {
                return Err(Failure::Usage(format!("config line {}: {key} set twice", i + 1)));
            }
        }
        Ok(ConfigFile { values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_pairs() {
        let c: ConfigFile = "# rates run\npreset = fibonacci\ndepth=500\nwindow-cap = 1000000\ncf = \"[0; (1)]\"\n"
            .parse()
            .unwrap();
        assert_eq!(c.get::<String>("preset").unwrap().as_deref(), Some("fibonacci"));
        assert_eq!(c.get::<usize>("depth").unwrap(), Some(500));
        assert_eq!(c.get::<usize>("window_cap").unwrap(), Some(1_000_000));
        assert_eq!(c.get::<String>("cf").unwrap().as_deref(), Some("[0; (1)]"));
        assert_eq!(c.or(Some(7usize), "depth").unwrap(), Some(7));
        assert_eq!(c.get::<usize>("length").unwrap(), None);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!("depth 5".parse::<ConfigFile>().is_err());
        assert!("colour = red".parse::<ConfigFile>().is_err());
        assert!("depth = 1\ndepth = 2".parse::<ConfigFile>().is_err());
        let c: ConfigFile = "depth = many".parse().unwrap();
        assert!(c.get::<usize>("depth").is_err());
    }
}
