//! Flat `key = value` scenario files.
//!
//! ```text
//! # desk defaults for the α = -2 column
//! alpha = -2
//! beta = 0.5
//! hurst = 0.8
//! maturities = 1, 2, 5
//! ```

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

pub const KNOWN_KEYS: &[&str] = &[
    "alpha",
    "beta",
    "hurst",
    "sigma0",
    "rate",
    "s0",
    "recovery",
    "maturity",
    "freq",
    "maturities",
    "alphas",
    "tmax",
    "points",
    "series",
    "paths",
    "steps",
    "seed",
    "scheme",
    "target",
    "precision",
    "output",
];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("scenario line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("scenario line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("scenario line {line}: key `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("scenario key `{key}`: cannot parse `{value}`: {reason}")]
    Value { key: String, value: String, reason: String },
}

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Scenario {
    entries: BTreeMap<String, String>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Read {
            path: path.display().to_string(),
            source,
        })?;
        text.parse()
    }

    fn raw(&self, key: &str) -> Option<&str> {
        debug_assert!(KNOWN_KEYS.contains(&key), "lookup of undeclared key {key}");
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T>(&self, key: &str) -> Result<Option<T>, ScenarioError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.raw(key).map(|v| parse_value(key, v)).transpose()
    }

    pub fn get_list<T>(&self, key: &str) -> Result<Option<Vec<T>>, ScenarioError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|item| parse_value(key, item))
                    .collect()
            })
            .transpose()
    }

    /// An explicit flag wins over the scenario entry.
    pub fn merge<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, ScenarioError>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn merge_list<T>(&self, flag: Vec<T>, key: &str) -> Result<Option<Vec<T>>, ScenarioError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_empty() {
            self.get_list(key)
        } else {
            Ok(Some(flag))
        }
    }
}

fn parse_value<T>(key: &str, value: &str) -> Result<T, ScenarioError>
where
    T: FromStr,
    T::Err: Display,
{
    value.parse().map_err(|e: T::Err| ScenarioError::Value {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

impl FromStr for Scenario {
    type Err = ScenarioError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut entries = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(ScenarioError::Syntax { line: line_no })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                return Err(ScenarioError::Syntax { line: line_no });
            }
            if !KNOWN_KEYS.contains(&key) {
                return Err(ScenarioError::UnknownKey {
                    line: line_no,
                    key: key.to_string(),
                });
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(ScenarioError::Duplicate {
                    line: line_no,
                    key: key.to_string(),
                });
            }
        }
        Ok(Self { entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_lists() {
        let s: Scenario = "# header\nalpha = -2\n\nmaturities = 1, 2 ,5 # trailing\n"
            .parse()
            .unwrap();
        assert_eq!(s.get::<f64>("alpha").unwrap(), Some(-2.0));
        assert_eq!(s.get_list::<f64>("maturities").unwrap(), Some(vec![1.0, 2.0, 5.0]));
        assert_eq!(s.get::<f64>("beta").unwrap(), None);
    }

    #[test]
    fn unknown_and_duplicate_keys_are_rejected() {
        assert!(matches!(
            "alpha = 1\nvolatility = 2".parse::<Scenario>(),
            Err(ScenarioError::UnknownKey { line: 2, .. })
        ));
        assert!(matches!(
            "alpha = 1\nalpha = 2".parse::<Scenario>(),
            Err(ScenarioError::Duplicate { line: 2, .. })
        ));
        assert!(matches!(
            "alpha".parse::<Scenario>(),
            Err(ScenarioError::Syntax { line: 1 })
        ));
        assert!(matches!(
            "alpha =".parse::<Scenario>(),
            Err(ScenarioError::Syntax { line: 1 })
        ));
    }

    #[test]
    fn flags_win_over_file() {
        let s: Scenario = "beta = 0.5".parse().unwrap();
        assert_eq!(s.merge(Some(1.0), "beta").unwrap(), Some(1.0));
        assert_eq!(s.merge::<f64>(None, "beta").unwrap(), Some(0.5));
        assert_eq!(s.merge_list(vec![3.0], "maturities").unwrap(), Some(vec![3.0]));
    }

    #[test]
    fn bad_values_name_the_key() {
        let s: Scenario = "paths = many".parse().unwrap();
        let err = s.get::<usize>("paths").unwrap_err();
        assert!(err.to_string().contains("paths"));
    }
}
