//! File inputs. Everything is read once at parse time and embedded in the
//! request, so a report can be replayed without the original files.

use std::fs;
use std::path::{Path, PathBuf};

use evspace::metric::{builtin_lazy, BuiltinParams, LazyMetric, MetricMatrix, BUILTIN_NAMES};
use evspace::{Error, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::request::InstanceTag;

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// JSON `{"labels", "rows"}`, or CSV with a header row when the extension is `.csv`.
pub fn matrix(path: &Path) -> Result<MetricMatrix> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        MetricMatrix::from_csv(&read(path)?)
    } else {
        json(path)
    }
}

/// A lazy-metric JSON file, or the bare name of a parameterless builtin.
pub fn lazy(arg: &str) -> Result<LazyMetric> {
    if BUILTIN_NAMES.contains(&arg) && !Path::new(arg).exists() {
        return builtin_lazy(arg, &BuiltinParams::default());
    }
    json(Path::new(arg))
}

/// A matrix file or a lazy-metric file, told apart by their keys.
pub fn metric_value(path: &Path) -> Result<Value> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        return to_value(&matrix(path)?);
    }
    json(path)
}

pub fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Parse(e.to_string()))
}

pub fn from_value<T: DeserializeOwned>(v: &Value) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Parse(e.to_string()))
}

/// `{"instance": tag, ...tag fields, "elements": [paths relative to the manifest]}`.
#[derive(Debug, Deserialize)]
pub struct Manifest {
    #[serde(flatten)]
    pub instance: InstanceTag,
    #[serde(default)]
    pub elements: Vec<PathBuf>,
}

pub struct LoadedManifest {
    pub instance: InstanceTag,
    pub elements: Vec<Value>,
}

pub fn manifest(path: &Path) -> Result<LoadedManifest> {
    let m: Manifest = json(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let elements = m
        .elements
        .iter()
        .map(|p| match (&m.instance, p.to_str()) {
            (InstanceTag::Lazy { .. }, Some(name)) if BUILTIN_NAMES.contains(&name) => to_value(&lazy(name)?),
            _ => element(&m.instance, &base.join(p)),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LoadedManifest { instance: m.instance, elements })
}

/// One element file for the given instance, as raw JSON.
pub fn element(instance: &InstanceTag, path: &Path) -> Result<Value> {
    match instance {
        InstanceTag::Metric => to_value(&matrix(path)?),
        InstanceTag::Lazy { .. } => to_value(&lazy(&path.to_string_lossy())?),
        _ => json(path),
    }
}
