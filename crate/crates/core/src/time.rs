//! Local-time handling and the night window.
//!
//! Every record carries its own UTC offset, so local wall-clock time is
//! `epoch_seconds + 60 * utc_offset_minutes` with no timezone database
//! involved. Clustering of bedtimes works in "canonical hours" ([12, 36),
//! pivot at noon) so that times just before and just after midnight stay
//! adjacent.

use chrono::{DateTime, Duration, NaiveDate, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timestamp {
    pub epoch_seconds: i64,
    pub utc_offset_minutes: i32,
}

impl Timestamp {
    pub fn new(epoch_seconds: i64, utc_offset_minutes: i32) -> Self {
        Self { epoch_seconds, utc_offset_minutes }
    }

    /// Local wall-clock datetime (naive: the offset has already been applied).
    pub fn local(&self) -> NaiveDateTime {
        DateTime::from_timestamp(self.epoch_seconds, 0)
            .expect("epoch seconds in chrono range")
            .naive_utc()
            + Duration::minutes(self.utc_offset_minutes as i64)
    }

    pub fn local_date(&self) -> NaiveDate {
        self.local().date()
    }

    /// Fractional local hour-of-day in [0, 24).
    pub fn local_hour(&self) -> f64 {
        let t = self.local().time();
        t.hour() as f64 + t.minute() as f64 / 60.0 + t.second() as f64 / 3600.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftMode {
    NightSleeper,
    DaySleeper,
}

/// Hours-of-day window used to filter location fixes and anchor the sleep
/// search. May wrap midnight (start > end). For day sleepers the complement
/// window is used by the analyzers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NightWindow {
    pub start_hour: f64,
    pub end_hour: f64,
    pub shift_mode: ShiftMode,
}

impl Default for NightWindow {
    fn default() -> Self {
        Self { start_hour: 0.0, end_hour: 6.0, shift_mode: ShiftMode::NightSleeper }
    }
}

impl NightWindow {
    /// Half-open containment of an hour-of-day in the raw window, wrap-aware.
    pub fn contains_hour(&self, h: f64) -> bool {
        if self.start_hour <= self.end_hour {
            h >= self.start_hour && h < self.end_hour
        } else {
            h >= self.start_hour || h < self.end_hour
        }
    }

    /// The window the analyzers actually filter with: the raw window for
    /// night sleepers, its complement for day sleepers.
    pub fn filter_window(&self) -> NightWindow {
        match self.shift_mode {
            ShiftMode::NightSleeper => *self,
            ShiftMode::DaySleeper => NightWindow {
                start_hour: self.end_hour,
                end_hour: self.start_hour,
                shift_mode: ShiftMode::NightSleeper,
            },
        }
    }

    /// Hour span of the window, accounting for wrap.
    pub fn span_hours(&self) -> f64 {
        let s = self.end_hour - self.start_hour;
        if s > 0.0 {
            s
        } else {
            s + 24.0
        }
    }
}

/// True iff the local hour of `t` lies in the raw window `[start, end)`.
pub fn in_window(t: &Timestamp, w: &NightWindow) -> bool {
    w.contains_hour(t.local_hour())
}

/// Remap an hour-of-day to [12, 36) so bedtimes around midnight cluster
/// contiguously: h for h >= 12, h + 24 otherwise.
pub fn canonical_hour(h: f64) -> Result<f64, Error> {
    if !(0.0..24.0).contains(&h) {
        return Err(Error::InvalidInput(format!("hour {h} outside [0, 24)")));
    }
    Ok(if h >= 12.0 { h } else { h + 24.0 })
}

/// Inverse of `canonical_hour`: back to raw hour-of-day in [0, 24).
pub fn raw_hour(canonical: f64) -> f64 {
    canonical % 24.0
}
