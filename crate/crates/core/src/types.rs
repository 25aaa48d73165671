//! Raw sensor record types. Immutable values after construction.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::time::Timestamp;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocationSample {
    pub t: Timestamp,
    pub lat: f64,
    pub lon: f64,
}

impl LocationSample {
    pub fn validate(&self) -> Result<(), Error> {
        if !self.lat.is_finite() || !self.lon.is_finite() {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        if !(-90.0..=90.0).contains(&self.lat) {
            return Err(Error::InvalidInput(format!("lat {} outside [-90, 90]", self.lat)));
        }
        if !(self.lon > -180.0 && self.lon <= 180.0) {
            return Err(Error::InvalidInput(format!("lon {} outside (-180, 180]", self.lon)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionSample {
    pub t: Timestamp,
    pub accel: [f64; 3],
    pub gyro: [f64; 3],
}

impl MotionSample {
    pub fn accel_magnitude(&self) -> f64 {
        let [x, y, z] = self.accel;
        (x * x + y * y + z * z).sqrt()
    }

    pub fn gyro_magnitude(&self) -> f64 {
        let [x, y, z] = self.gyro;
        (x * x + y * y + z * z).sqrt()
    }

    /// Ingestion sanity filter: finite components, accel magnitude in [0, 40].
    pub fn validate(&self) -> Result<(), Error> {
        if self.accel.iter().chain(self.gyro.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite motion component".into()));
        }
        let mag = self.accel_magnitude();
        if mag > 40.0 {
            return Err(Error::InvalidInput(format!("accel magnitude {mag} exceeds 40 m/s^2")));
        }
        Ok(())
    }
}

/// One calendar day of communication counts. Incoming counts are ingested
/// and persisted but excluded from modeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommDay {
    pub date: NaiveDate,
    pub out_calls: u32,
    pub missed_calls: u32,
    pub out_sms: u32,
    pub in_calls: u32,
    pub in_sms: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommMetric {
    OutCalls,
    MissedCalls,
    OutSms,
}

impl CommMetric {
    pub const ALL: [CommMetric; 3] = [CommMetric::OutCalls, CommMetric::MissedCalls, CommMetric::OutSms];

    pub fn value(&self, day: &CommDay) -> f64 {
        match self {
            CommMetric::OutCalls => day.out_calls as f64,
            CommMetric::MissedCalls => day.missed_calls as f64,
            CommMetric::OutSms => day.out_sms as f64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::Timestamp;

    #[test]
    fn location_range_checks() {
        let t = Timestamp::new(0, 0);
        assert!(LocationSample { t, lat: 41.9, lon: -87.6 }.validate().is_ok());
        assert!(LocationSample { t, lat: 123.0, lon: 0.0 }.validate().is_err());
        assert!(LocationSample { t, lat: 0.0, lon: -180.0 }.validate().is_err());
        assert!(LocationSample { t, lat: 0.0, lon: 180.0 }.validate().is_ok());
        assert!(LocationSample { t, lat: f64::NAN, lon: 0.0 }.validate().is_err());
    }

    #[test]
    fn motion_sanity_filter() {
        let t = Timestamp::new(0, 0);
        let ok = MotionSample { t, accel: [0.0, 0.0, 9.8], gyro: [0.0; 3] };
        assert!(ok.validate().is_ok());
        let fast = MotionSample { t, accel: [50.0, 0.0, 0.0], gyro: [0.0; 3] };
        assert!(fast.validate().is_err());
    }
}
