//! Structure-definition documents.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use subriem::builtins::definition;
use subriem::calculus::VectorField;
use subriem::structure::SubPRStructure;
use subriem::symexpr::{parse, Chart, Context, SamplingPlan};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Engine(#[from] subriem::Error),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDoc {
    pub coords: Vec<String>,
    pub domain: BTreeMap<String, [f64; 2]>,
    #[serde(default)]
    pub excluded: Vec<String>,
}

/// Parameters of one analysis; shared by command-line flags and document tasks.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub coordinate_family: bool,
    /// Candidate map components.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<Vec<String>>,
    /// `CASE:INDEX`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reading: Option<String>,
    /// Model base for `lift`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
}

pub const COMMANDS: [&str; 5] = ["invariants", "curvature", "ew", "isometry", "lift"];

#[derive(Debug, Clone)]
pub struct Task {
    pub command: String,
    pub params: Params,
}

impl Task {
    /// `{"command": NAME, ...params}`.
    fn from_value(v: &Value) -> Result<Task, String> {
        let mut obj = v.as_object().ok_or("a task must be an object")?.clone();
        let command = match obj.remove("command") {
            Some(Value::String(c)) => c,
            _ => return Err("a task needs a string 'command'".into()),
        };
        if !COMMANDS.contains(&command.as_str()) {
            return Err(format!("unknown command '{command}'"));
        }
        let params = Params::deserialize(Value::Object(obj)).map_err(|e| e.to_string())?;
        Ok(Task { command, params })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDoc {
    pub chart: ChartDoc,
    pub frame: Vec<Vec<String>>,
    pub signature: Vec<i32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<Value>,
}

impl StructureDoc {
    pub fn from_json(text: &str) -> Result<StructureDoc, DocError> {
        let doc: StructureDoc = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn read(path: &str) -> Result<StructureDoc, DocError> {
        let text = std::fs::read_to_string(path).map_err(|source| DocError::Io {
            path: path.to_string(),
            source,
        })?;
        StructureDoc::from_json(&text)
    }

    pub fn from_builtin(name: &str) -> Result<StructureDoc, DocError> {
        let def = definition(name)?;
        let chart = &def.chart;
        let coords: Vec<String> = chart.names().to_vec();
        let domain = coords
            .iter()
            .zip(chart.domain())
            .map(|(n, &(lo, hi))| (n.clone(), [lo, hi]))
            .collect();
        let excluded = chart.excluded().iter().map(|e| e.to_text(chart)).collect();
        Ok(StructureDoc {
            chart: ChartDoc {
                coords,
                domain,
                excluded,
            },
            frame: def
                .frame
                .iter()
                .map(|f| f.iter().map(|s| s.to_string()).collect())
                .collect(),
            signature: def.signature,
            tasks: Vec::new(),
        })
    }

    /// Shape checks that need no expression parsing.
    fn validate(&self) -> Result<(), DocError> {
        let schema = |m: String| Err(DocError::Schema(m));
        let d = self.chart.coords.len();
        if d == 0 {
            return schema("chart.coords is empty".into());
        }
        for name in &self.chart.coords {
            if !self.chart.domain.contains_key(name) {
                return schema(format!("chart.domain has no interval for '{name}'"));
            }
        }
        for name in self.chart.domain.keys() {
            if !self.chart.coords.contains(name) {
                return schema(format!("chart.domain names unknown coordinate '{name}'"));
            }
        }
        for (k, row) in self.frame.iter().enumerate() {
            if row.len() != d {
                return schema(format!(
                    "frame[{k}] has {} components, the chart has {d} coordinates",
                    row.len()
                ));
            }
        }
        if self.signature.len() != self.frame.len() {
            return schema(format!(
                "signature has {} entries for {} frame fields",
                self.signature.len(),
                self.frame.len()
            ));
        }
        if let Some(s) = self.signature.iter().find(|s| s.abs() != 1) {
            return schema(format!("signature entries must be ±1, found {s}"));
        }
        self.parsed_tasks()?;
        Ok(())
    }

    pub fn chart(&self) -> Result<Chart, DocError> {
        let domain = self
            .chart
            .coords
            .iter()
            .map(|n| {
                let [lo, hi] = self.chart.domain[n];
                (lo, hi)
            })
            .collect();
        let chart = Chart::new(self.chart.coords.clone(), domain)?;
        let loci = self
            .chart
            .excluded
            .iter()
            .map(|t| parse(t, &chart))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(chart.with_excluded(loci)?)
    }

    pub fn build(&self, plan: SamplingPlan) -> Result<SubPRStructure, DocError> {
        let chart = self.chart()?;
        let frame = self
            .frame
            .iter()
            .map(|row| {
                let texts: Vec<&str> = row.iter().map(String::as_str).collect();
                VectorField::parse(&texts, &chart)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SubPRStructure::build(
            Context::new(chart, plan),
            frame,
            self.signature.clone(),
        )?)
    }

    pub fn parsed_tasks(&self) -> Result<Vec<Task>, DocError> {
        self.tasks
            .iter()
            .enumerate()
            .map(|(k, v)| {
                Task::from_value(v).map_err(|e| DocError::Schema(format!("tasks[{k}]: {e}")))
            })
            .collect()
    }
}
