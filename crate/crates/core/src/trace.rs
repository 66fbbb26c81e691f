//! Time-stamped observable records shared by every module that emits output.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraceError {
    #[error("record has {got} values but the trace has {expected} observables")]
    Width { expected: usize, got: usize },
    #[error("time must increase monotonically: {t} after {last}")]
    NonMonotonic { last: f64, t: f64 },
    #[error("non-finite value for `{name}` at t = {t}")]
    NonFinite { name: String, t: f64 },
    #[error("invalid observable name `{0}`")]
    BadName(String),
}

/// One row: a time and one value per observable of the owning [`Trace`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub t: f64,
    pub values: Vec<f64>,
}

/// Ordered observable names plus rows of values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    names: Vec<String>,
    records: Vec<TraceRecord>,
}

impl Trace {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, TraceError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for n in &names {
            if n.is_empty() || n == "t" || n.contains([',', '\n', '\r', '"']) {
                return Err(TraceError::BadName(n.clone()));
            }
        }
        Ok(Self { names, records: Vec::new() })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn push(&mut self, t: f64, values: Vec<f64>) -> Result<(), TraceError> {
        if values.len() != self.names.len() {
            return Err(TraceError::Width { expected: self.names.len(), got: values.len() });
        }
        if !t.is_finite() {
            return Err(TraceError::NonFinite { name: "t".into(), t });
        }
        if let Some(last) = self.records.last() {
            if t <= last.t {
                return Err(TraceError::NonMonotonic { last: last.t, t });
            }
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(TraceError::NonFinite { name: self.names[i].clone(), t });
        }
        self.records.push(TraceRecord { t, values });
        Ok(())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.index_of(name)?;
        Some(self.records.iter().map(|r| r.values[i]).collect())
    }

    pub fn last_value(&self, name: &str) -> Option<f64> {
        let i = self.index_of(name)?;
        self.records.last().map(|r| r.values[i])
    }

    /// Name/value pairs of row `row` in emission order.
    pub fn observables(&self, row: usize) -> Vec<(&str, f64)> {
        self.names.iter().map(String::as_str).zip(self.records[row].values.iter().copied()).collect()
    }
}
