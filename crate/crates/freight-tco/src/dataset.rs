//! Dataset files: TOML loading with field-level diagnostics, unknown-field
//! warnings, source-annotation coverage and a canonical content hash.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use freight_tco_core::dataset::{Source, SCHEMA_VERSION};
use freight_tco_core::{CostDataset, Error as CoreError};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// The bundled default dataset.
pub const DEFAULT_DATASET: &str = include_str!("../data/default_dataset.toml");

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedDataset {
    pub dataset: CostDataset,
    pub warnings: Vec<String>,
    /// Lowercase hex SHA-256 of the canonical JSON encoding.
    pub hash: String,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("unsupported schema version {found} (this build reads version {expected})")]
    Schema { found: i64, expected: u32 },
    #[error("missing schema_version")]
    MissingSchema,
    #[error("{}", Diagnostics(.0))]
    Invalid(Vec<CoreError>),
}

struct Diagnostics<'a>(&'a [CoreError]);

impl fmt::Display for Diagnostics<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dataset rejected with {} error(s)", self.0.len())?;
        for e in self.0 {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<LoadedDataset, LoadError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.display().to_string(), source })?;
    parse_dataset(&text)
}

pub fn load_default() -> LoadedDataset {
    parse_dataset(DEFAULT_DATASET).expect("bundled dataset is valid")
}

pub fn parse_dataset(text: &str) -> Result<LoadedDataset, LoadError> {
    let table: toml::Table = toml::from_str(text).map_err(|e| LoadError::Parse(e.to_string()))?;
    match table.get("schema_version") {
        None => return Err(LoadError::MissingSchema),
        Some(toml::Value::Integer(v)) if *v == SCHEMA_VERSION as i64 => {}
        Some(toml::Value::Integer(v)) => return Err(LoadError::Schema { found: *v, expected: SCHEMA_VERSION }),
        Some(_) => return Err(LoadError::Parse("schema_version must be an integer".into())),
    }

    let mut warnings = Vec::new();
    let dataset: CostDataset = serde_ignored::deserialize(toml::Value::Table(table), |p| {
        warnings.push(format!("unknown field `{p}` ignored"));
    })
    .map_err(|e| LoadError::Parse(e.to_string()))?;

    let report = dataset.validate();
    if !report.errors.is_empty() {
        return Err(LoadError::Invalid(report.errors));
    }
    warnings.extend(report.warnings);
    warnings.extend(source_coverage(&dataset));
    let hash = dataset_hash(&dataset);
    Ok(LoadedDataset { dataset, warnings, hash })
}

pub fn to_toml(ds: &CostDataset) -> String {
    toml::to_string_pretty(ds).expect("dataset serializes to TOML")
}

/// SHA-256 over the compact JSON encoding, which fixes field order and
/// prints floats in shortest round-trip form.
pub fn dataset_hash(ds: &CostDataset) -> String {
    let bytes = serde_json::to_vec(ds).expect("dataset serializes to JSON");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Warnings for numeric fields with no source annotation. The schema
/// version is format metadata and needs none.
pub fn source_coverage(ds: &CostDataset) -> Vec<String> {
    let value = serde_json::to_value(ds).expect("dataset serializes to JSON");
    numeric_paths(&value)
        .into_iter()
        .filter(|p| p != "schema_version" && source_of(&ds.sources, p).is_none())
        .map(|p| format!("no source annotation covers `{p}`"))
        .collect()
}

/// Most specific annotation whose key matches a prefix of `path`. Key
/// segments are dot-separated and `*` matches any one segment.
pub fn source_of(sources: &BTreeMap<String, Source>, path: &str) -> Option<Source> {
    let segs: Vec<&str> = path.split('.').collect();
    sources
        .iter()
        .filter_map(|(key, src)| {
            let k: Vec<&str> = key.split('.').collect();
            let hit = k.len() <= segs.len() && k.iter().zip(&segs).all(|(a, b)| *a == "*" || a == b);
            hit.then(|| ((k.len(), k.iter().filter(|s| **s != "*").count()), *src))
        })
        .max_by_key(|(rank, _)| *rank)
        .map(|(_, s)| s)
}

/// Dotted paths of every numeric leaf. Array elements are labelled by their
/// `id`, `class/powertrain`, `kind` or `class` where present, else by index.
pub fn numeric_paths(v: &Value) -> Vec<String> {
    let mut out = Vec::new();
    walk(v, String::new(), &mut out);
    out
}

fn label(v: &Value, i: usize) -> String {
    let s = |k: &str| v.get(k).and_then(Value::as_str);
    match (s("id"), s("class"), s("powertrain"), s("kind")) {
        (Some(id), ..) => id.to_string(),
        (None, Some(c), Some(p), _) => format!("{c}/{p}"),
        (None, _, _, Some(k)) => k.to_string(),
        (None, Some(c), None, None) => c.to_string(),
        _ => i.to_string(),
    }
}

fn walk(v: &Value, path: String, out: &mut Vec<String>) {
    let join = |seg: &str| if path.is_empty() { seg.to_string() } else { format!("{path}.{seg}") };
    match v {
        Value::Number(_) => out.push(path),
        Value::Object(m) => m.iter().for_each(|(k, x)| walk(x, join(k), out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(x, join(&label(x, i)), out)),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wildcard_and_specificity() {
        let mut m = BTreeMap::new();
        m.insert("vehicles".to_string(), Source::Assumption);
        m.insert("vehicles.*.battery_kwh".to_string(), Source::Published);
        m.insert("vehicles.day_cab/BEV.battery_kwh".to_string(), Source::User);
        assert_eq!(source_of(&m, "vehicles.sleeper/BEV.battery_kwh"), Some(Source::Published));
        assert_eq!(source_of(&m, "vehicles.day_cab/BEV.battery_kwh"), Some(Source::User));
        assert_eq!(source_of(&m, "vehicles.day_cab/BEV.multiplier"), Some(Source::Assumption));
        assert_eq!(source_of(&m, "vehiclesx.a"), None);
        assert_eq!(source_of(&m, "prices.diesel"), None);
    }

    #[test]
    fn labels() {
        let v: Value = serde_json::json!({
            "a": [{"id": "x", "n": 1}, {"class": "c", "powertrain": "p", "n": 2}, {"kind": "H2", "n": 3}, 4.0]
        });
        assert_eq!(numeric_paths(&v), vec!["a.x.n", "a.c/p.n", "a.H2.n", "a.3"]);
    }
}
