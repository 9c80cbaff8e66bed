//! Machine-readable metric reports and the small file helpers the CLI needs.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::format_float;

pub const PROJECTION_BIAS: &str = "projection_bias";
pub const SEMBIAS_ACC: &str = "sembias_acc";
pub const SEMBIAS_SUBSET_ACC: &str = "sembias_subset_acc";
pub const GBWR_PURITY: &str = "gbwr_purity";
pub const GBWR_CORRELATION: &str = "gbwr_correlation";
pub const GBWR_PROFESSION: &str = "gbwr_profession";
pub const WEAT_PVALUES: &str = "weat_pvalues";
pub const GBWR_ASSOCIATION_SIGNIFICANT: &str = "gbwr_association_significant";
pub const GBWR_CLASSIFICATION_ACC: &str = "gbwr_classification_acc";

/// p-values below this count as significant in the association summary.
pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricValue {
    Scalar(f64),
    List(Vec<f64>),
}

impl MetricValue {
    /// Table cell text: the number, or comma-joined numbers for lists.
    pub fn render(&self) -> String {
        match self {
            MetricValue::Scalar(v) => format_float(*v),
            MetricValue::List(vs) => vs.iter().map(|v| format_float(*v)).collect::<Vec<_>>().join(","),
        }
    }
}

/// Valid range of a named metric, if it has one.
fn metric_range(name: &str) -> Option<(f64, f64)> {
    match name {
        PROJECTION_BIAS => Some((0.0, f64::INFINITY)),
        SEMBIAS_ACC | SEMBIAS_SUBSET_ACC | GBWR_PURITY | GBWR_CLASSIFICATION_ACC => Some((0.0, 1.0)),
        GBWR_CORRELATION | GBWR_PROFESSION => Some((-1.0, 1.0)),
        WEAT_PVALUES => Some((0.0, 1.0)),
        GBWR_ASSOCIATION_SIGNIFICANT => Some((0.0, f64::INFINITY)),
        n if n.starts_with("wordsim:") => Some((-1.0, 1.0)),
        n if n.starts_with("sts:") || n.starts_with("sts_year:") => Some((-100.0, 100.0)),
        _ => None,
    }
}

/// Named metric values for one embedding, with the provenance needed to
/// reproduce them. Serialized as JSON with sorted keys.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BiasReport {
    pub method: String,
    pub metrics: BTreeMap<String, MetricValue>,
    /// Item counts behind the metrics (used / skipped words, pairs, instances).
    #[serde(default)]
    pub counts: BTreeMap<String, u64>,
    /// Metrics that were requested but could not be computed, with the reason.
    #[serde(default)]
    pub errors: BTreeMap<String, String>,
    /// Configuration values and input digests.
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
}

impl BiasReport {
    pub fn new(method: impl Into<String>) -> Self {
        Self {
            method: method.into(),
            ..Self::default()
        }
    }

    /// Records a metric after checking it against its documented range.
    pub fn insert(&mut self, name: &str, value: MetricValue) -> Result<()> {
        if let Some((lo, hi)) = metric_range(name) {
            let values = match &value {
                MetricValue::Scalar(v) => std::slice::from_ref(v),
                MetricValue::List(vs) => vs.as_slice(),
            };
            if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= lo && **v <= hi)) {
                return Err(Error::input(format!("{name} = {bad} is outside [{lo}, {hi}]")));
            }
        }
        self.metrics.insert(name.to_owned(), value);
        Ok(())
    }

    pub fn insert_scalar(&mut self, name: &str, value: f64) -> Result<()> {
        self.insert(name, MetricValue::Scalar(value))
    }

    pub fn record_error(&mut self, name: &str, err: impl std::fmt::Display) {
        self.errors.insert(name.to_owned(), err.to_string());
    }

    pub fn scalar(&self, name: &str) -> Option<f64> {
        match self.metrics.get(name)? {
            MetricValue::Scalar(v) => Some(*v),
            MetricValue::List(_) => None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Hex SHA-256 of a file's contents.
pub fn file_digest(path: &Path) -> Result<String> {
    let mut hasher = Sha256::new();
    let mut file = fs::File::open(path)?;
    io::copy(&mut file, &mut hasher)?;
    Ok(format!("{:x}", hasher.finalize()))
}

/// Writes `path` through a temporary sibling file and a rename, so readers
/// never observe a partial file. The temporary is removed on failure.
pub fn write_atomic(path: &Path, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::input(format!("{} is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp: PathBuf = path.with_file_name(tmp_name);

    let result = (|| {
        let file = fs::File::create(&tmp)?;
        let mut w = io::BufWriter::new(file);
        write(&mut w)?;
        let file = w.into_inner().map_err(|e| e.into_error())?;
        file.sync_all()?;
        fs::rename(&tmp, path)?;
        Ok(())
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}
