//! Trained per-patient model and its on-disk schema.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::comm::CommModel;
use crate::config::Config;
use crate::error::Error;
use crate::home::HomeModel;
use crate::sleep::SleepModel;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatientModel {
    pub schema_version: u32,
    pub patient_id: String,
    /// Snapshot of every threshold the model was trained under; evaluation
    /// uses this, never the current CLI flags.
    pub config: Config,
    pub home: HomeModel,
    pub sleep: SleepModel,
    pub comm: CommModel,
    pub training_span: (NaiveDate, NaiveDate),
}

impl PatientModel {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let m: PatientModel =
            serde_json::from_str(text).map_err(|e| Error::Schema(format!("model file: {e}")))?;
        if m.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "model schema version {} unsupported (expected {})",
                m.schema_version, SCHEMA_VERSION
            )));
        }
        Ok(m)
    }
}

pub fn save_model(m: &PatientModel, path: &std::path::Path) -> Result<(), Error> {
    std::fs::write(path, m.to_json())
        .map_err(|e| Error::io(format!("writing model {}", path.display()), e))
}

pub fn load_model(path: &std::path::Path) -> Result<PatientModel, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading model {}", path.display()), e))?;
    PatientModel::from_json(&text)
}
