//! Flat JSON config file; flags win over file values, file values over defaults.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    map: Map<String, Value>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {}", path.display(), e))
        })?;
        let value: Value = serde_json::from_str(&text).map_err(|e| {
            CliError::Config(format!(
                "config {} is not valid JSON: {}",
                path.display(),
                e
            ))
        })?;
        match value {
            Value::Object(obj) => Ok(FileConfig {
                map: obj
                    .into_iter()
                    .map(|(k, v)| (k.replace('-', "_"), v))
                    .collect(),
            }),
            _ => Err(CliError::Config(
                "config file must hold a JSON object".into(),
            )),
        }
    }

    fn get<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => {
                // numbers and lists may be given where the flag expects text
                let v = match v {
                    Value::Number(_) | Value::Array(_) | Value::Bool(_)
                        if std::any::type_name::<T>().contains("String") =>
                    {
                        Value::String(flatten(v))
                    }
                    _ => v.clone(),
                };
                serde_json::from_value(v)
                    .map(Some)
                    .map_err(|e| CliError::Config(format!("config key '{}': {}", key, e)))
            }
        }
    }

    /// Flag value, else file value, else default.
    pub fn pick<T: DeserializeOwned>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, CliError> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    pub fn pick_opt<T: DeserializeOwned>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

fn flatten(v: &Value) -> String {
    match v {
        Value::Array(items) => items.iter().map(flatten).collect::<Vec<_>>().join(","),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `"2..8"` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Config(format!("bad integer range '{}'", s));
    if let Some((a, b)) = s.split_once("..") {
        let b = b.trim_start_matches('=');
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        Ok((a..=b).collect())
    } else {
        parse_list(s)
    }
}

/// Comma-separated values.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, CliError> {
    let items: Result<Vec<T>, _> = s.split(',').map(|x| x.trim().parse::<T>()).collect();
    match items {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Config(format!("bad list '{}'", s))),
    }
}

/// `"start:end:points"` grid or a comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let bad = || CliError::Config(format!("bad grid '{}'", s));
        let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        qpa_core::trotter_bench::linear_grid(a, b, n).map_err(CliError::from)
    } else {
        parse_list(s)
    }
}
