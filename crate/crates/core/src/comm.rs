//! Communication-pattern confidence intervals over day-to-day deltas.
//!
//! Weekday counts are stabilized with overlapping 3-day sums before taking
//! deltas; weekend counts (in split mode) use raw daily deltas. Outgoing
//! calls and SMS only alarm below the lower bound, missed calls only above
//! the upper bound.

use chrono::{Datelike, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};

use crate::config::{CiMethod, Config};
use crate::error::Error;
use crate::types::{CommDay, CommMetric};

/// Day-over-day differences: out[i] = values[i+1] - values[i].
pub fn deltas(values: &[f64]) -> Result<Vec<f64>, Error> {
    if values.len() < 2 {
        return Err(Error::InvalidInput("deltas needs at least 2 values".into()));
    }
    Ok(values.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Overlapping sums of three consecutive values.
pub fn rolling3_sums(values: &[f64]) -> Result<Vec<f64>, Error> {
    if values.len() < 3 {
        return Err(Error::InvalidInput("rolling3_sums needs at least 3 values".into()));
    }
    Ok(values.windows(3).map(|w| w.iter().sum()).collect())
}

pub fn is_weekend(date: NaiveDate) -> bool {
    matches!(date.weekday(), Weekday::Sat | Weekday::Sun)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommInterval {
    pub mean: f64,
    pub half_width: f64,
    pub lower: f64,
    pub upper: f64,
    pub n_deltas: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentModel {
    pub out_calls: CommInterval,
    pub missed_calls: CommInterval,
    pub out_sms: CommInterval,
}

impl SegmentModel {
    pub fn interval(&self, m: CommMetric) -> &CommInterval {
        match m {
            CommMetric::OutCalls => &self.out_calls,
            CommMetric::MissedCalls => &self.missed_calls,
            CommMetric::OutSms => &self.out_sms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommModel {
    pub split_weekend: bool,
    pub weekday: SegmentModel,
    pub weekend: Option<SegmentModel>,
}

fn sample_sd(values: &[f64], mean: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

fn interval_from_deltas(ds: &[f64], cfg: &Config) -> CommInterval {
    let n = ds.len();
    let mean = ds.iter().sum::<f64>() / n as f64;
    let sd = sample_sd(ds, mean);
    let quantile = match cfg.ci_method {
        CiMethod::Z => cfg.z,
        CiMethod::T => {
            use statrs::distribution::{ContinuousCDF, StudentsT};
            // map the configured z back to its two-sided confidence level
            let level = normal_cdf(cfg.z) - normal_cdf(-cfg.z);
            if n >= 2 {
                let t = StudentsT::new(0.0, 1.0, (n - 1) as f64).unwrap();
                t.inverse_cdf(0.5 + level / 2.0)
            } else {
                cfg.z
            }
        }
    };
    let half_width = cfg.min_half_width.max(quantile * sd);
    CommInterval { mean, half_width, lower: mean - half_width, upper: mean + half_width, n_deltas: n }
}

fn normal_cdf(x: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, Normal};
    Normal::new(0.0, 1.0).unwrap().cdf(x)
}

/// Deltas of overlapping 3-day sums over an in-segment value sequence.
pub fn weekday_segment_deltas(values: &[f64]) -> Result<Vec<f64>, Error> {
    deltas(&rolling3_sums(values)?)
}

fn segment_model(days: &[&CommDay], weekday_pipeline: bool, cfg: &Config) -> Result<SegmentModel, Error> {
    let series = |m: CommMetric| -> Vec<f64> { days.iter().map(|d| m.value(d)).collect() };
    let make = |m: CommMetric| -> Result<CommInterval, Error> {
        let values = series(m);
        let ds = if weekday_pipeline { weekday_segment_deltas(&values)? } else { deltas(&values)? };
        Ok(interval_from_deltas(&ds, cfg))
    };
    Ok(SegmentModel {
        out_calls: make(CommMetric::OutCalls)?,
        missed_calls: make(CommMetric::MissedCalls)?,
        out_sms: make(CommMetric::OutSms)?,
    })
}

/// Fit per-metric confidence intervals. Days must be date-sorted and unique.
pub fn train_comm_model(days: &[CommDay], split_weekend: bool, cfg: &Config) -> Result<CommModel, Error> {
    for w in days.windows(2) {
        if w[1].date <= w[0].date {
            return Err(Error::InvalidInput("comm days must be sorted and unique by date".into()));
        }
    }
    if split_weekend {
        let weekday: Vec<&CommDay> = days.iter().filter(|d| !is_weekend(d.date)).collect();
        let weekend: Vec<&CommDay> = days.iter().filter(|d| is_weekend(d.date)).collect();
        if weekday.len() < cfg.min_weekday_records {
            return Err(Error::InsufficientData(format!(
                "comm: {} weekday records, need {}",
                weekday.len(),
                cfg.min_weekday_records
            )));
        }
        if weekend.len() < cfg.min_weekend_records {
            return Err(Error::InsufficientData(format!(
                "comm: {} weekend records, need {}",
                weekend.len(),
                cfg.min_weekend_records
            )));
        }
        Ok(CommModel {
            split_weekend: true,
            weekday: segment_model(&weekday, true, cfg)?,
            weekend: Some(segment_model(&weekend, false, cfg)?),
        })
    } else {
        let all: Vec<&CommDay> = days.iter().collect();
        if all.len() < cfg.min_weekday_records {
            return Err(Error::InsufficientData(format!(
                "comm: {} records, need {}",
                all.len(),
                cfg.min_weekday_records
            )));
        }
        Ok(CommModel { split_weekend: false, weekday: segment_model(&all, true, cfg)?, weekend: None })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommFlag {
    Pass,
    Fail,
    InsufficientContext,
}

impl CommFlag {
    /// Report encoding: pass as 1, fail as 0.
    pub fn as_pf(&self) -> &'static str {
        match self {
            CommFlag::Pass => "1",
            CommFlag::Fail => "0",
            CommFlag::InsufficientContext => "-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricVerdict {
    pub delta: Option<f64>,
    pub flag: CommFlag,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommVerdict {
    pub out_calls: MetricVerdict,
    pub missed_calls: MetricVerdict,
    pub out_sms: MetricVerdict,
}

impl CommVerdict {
    pub fn metric(&self, m: CommMetric) -> &MetricVerdict {
        match m {
            CommMetric::OutCalls => &self.out_calls,
            CommMetric::MissedCalls => &self.missed_calls,
            CommMetric::OutSms => &self.out_sms,
        }
    }

    pub fn any_fail(&self) -> bool {
        [self.out_calls, self.missed_calls, self.out_sms]
            .iter()
            .any(|v| v.flag == CommFlag::Fail)
    }

    pub fn insufficient() -> Self {
        let v = MetricVerdict { delta: None, flag: CommFlag::InsufficientContext };
        Self { out_calls: v, missed_calls: v, out_sms: v }
    }
}

/// Asymmetric interval test: outgoing metrics fail only below the lower
/// bound, missed calls only above the upper bound.
pub fn flag_delta(metric: CommMetric, delta: f64, interval: &CommInterval) -> CommFlag {
    let breach = match metric {
        CommMetric::OutCalls | CommMetric::OutSms => delta < interval.lower,
        CommMetric::MissedCalls => delta > interval.upper,
    };
    if breach {
        CommFlag::Fail
    } else {
        CommFlag::Pass
    }
}

/// Evaluate one day against the model. `history` is the full date-sorted
/// comm log; the relevant in-segment predecessors are pulled from it. A
/// weekday needs the three preceding in-segment days (the delta of
/// overlapping 3-day sums reduces to v[today] - v[3 back]); a weekend day
/// needs the previous weekend day.
pub fn evaluate_comm_day(history: &[CommDay], date: NaiveDate, m: &CommModel) -> CommVerdict {
    let weekend_path = m.split_weekend && is_weekend(date);
    let segment: Vec<&CommDay> = if m.split_weekend {
        history.iter().filter(|d| is_weekend(d.date) == is_weekend(date)).collect()
    } else {
        history.iter().collect()
    };
    let Some(pos) = segment.iter().position(|d| d.date == date) else {
        return CommVerdict::insufficient();
    };
    let (need_back, seg_model) = if weekend_path {
        (1, m.weekend.as_ref().expect("split model has weekend segment"))
    } else {
        (3, &m.weekday)
    };
    if pos < need_back {
        return CommVerdict::insufficient();
    }
    let eval = |metric: CommMetric| -> MetricVerdict {
        let today = metric.value(segment[pos]);
        let back = metric.value(segment[pos - need_back]);
        let delta = today - back;
        MetricVerdict { delta: Some(delta), flag: flag_delta(metric, delta, seg_model.interval(metric)) }
    };
    CommVerdict {
        out_calls: eval(CommMetric::OutCalls),
        missed_calls: eval(CommMetric::MissedCalls),
        out_sms: eval(CommMetric::OutSms),
    }
}
