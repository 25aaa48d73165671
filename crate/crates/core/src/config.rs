//! Pipeline configuration. Every threshold named by the analyzers lives
//! here, serializes into the model file, and is read back on evaluation so
//! a saved model always replays with the knobs it was trained under.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::time::NightWindow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    /// Normal approximation: mean +/- z * sd.
    #[default]
    Z,
    /// Student-t quantile at the same confidence level.
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub night_window: NightWindow,
    pub seed: u64,

    // rest detection
    pub eps_accel: f64,
    pub eps_gyro: f64,
    pub max_gap_s: f64,
    pub min_sleep_h: f64,
    /// Strict per-axis (0,0,9.8)/(0,0,0) rest test instead of the
    /// orientation-invariant magnitude test.
    pub per_axis_rest: bool,

    // home location
    pub home_radius_floor_m: f64,
    pub min_night_samples: usize,
    pub min_nights: usize,

    // clustering
    pub elbow_threshold: f64,
    pub restarts: usize,
    pub k_max_cap: usize,

    // sleep model
    pub slack: f64,
    pub min_frac: f64,
    pub min_dist_h: f64,
    pub min_sleep_points: usize,

    // communication model
    pub split_weekend: bool,
    pub z: f64,
    pub ci_method: CiMethod,
    pub min_half_width: f64,
    pub min_weekday_records: usize,
    pub min_weekend_records: usize,

    // ingestion / training floors
    pub max_bad_fraction: f64,
    pub min_train_days: usize,
    pub warn_train_days: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            night_window: NightWindow::default(),
            seed: 0,
            eps_accel: 0.5,
            eps_gyro: 0.1,
            max_gap_s: 120.0,
            min_sleep_h: 1.0,
            per_axis_rest: false,
            home_radius_floor_m: 100.0,
            min_night_samples: 50,
            min_nights: 5,
            elbow_threshold: 0.5,
            restarts: 10,
            k_max_cap: 8,
            slack: 1.5,
            min_frac: 0.1,
            min_dist_h: 3.0,
            min_sleep_points: 7,
            split_weekend: true,
            z: 1.96,
            ci_method: CiMethod::Z,
            min_half_width: 1.0,
            min_weekday_records: 10,
            min_weekend_records: 4,
            max_bad_fraction: 0.05,
            min_train_days: 7,
            warn_train_days: 14,
        }
    }
}

impl Config {
    pub fn from_toml_file(path: &std::path::Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading config {}", path.display()), e))?;
        toml::from_str(&text).map_err(|e| Error::Schema(format!("config: {e}")))
    }
}
