//! Train / evaluate orchestration and the per-day verdict report.

use chrono::{Duration, NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};

use crate::comm::{evaluate_comm_day, train_comm_model, CommVerdict};
use crate::config::Config;
use crate::error::Error;
use crate::home::locate_home;
use crate::model::{PatientModel, SCHEMA_VERSION};
use crate::sleep::{
    classify_sleep, extract_sleep_point_between, train_sleep_model, RestTolerances, SleepClass,
    SleepPoint, SEARCH_PAD_H,
};
use crate::time::NightWindow;
use crate::types::{CommDay, LocationSample, MotionSample};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "index")]
pub enum SleepState {
    Cluster(usize),
    Outlier,
    /// No qualifying rest interval; reported separately from Outlier and
    /// never an anomaly by itself.
    NoData,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SleepVerdict {
    pub state: SleepState,
    pub start_hour: Option<f64>,
    pub duration_h: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayVerdict {
    pub date: NaiveDate,
    pub sleep: SleepVerdict,
    pub comm: CommVerdict,
    pub overall_anomaly: bool,
}

impl DayVerdict {
    fn fuse(date: NaiveDate, sleep: SleepVerdict, comm: CommVerdict) -> Self {
        let overall_anomaly = matches!(sleep.state, SleepState::Outlier) || comm.any_fail();
        Self { date, sleep, comm, overall_anomaly }
    }
}

/// Absolute local-time search bounds for the night attributed to `wake_date`,
/// padded so late bedtimes and oversleep remain observable.
fn night_search_bounds(wake_date: NaiveDate, w: &NightWindow) -> (NaiveDateTime, NaiveDateTime) {
    let f = w.filter_window();
    let midnight = wake_date.and_hms_opt(0, 0, 0).unwrap();
    let start_day = if f.start_hour > f.end_hour || f.span_hours() == 0.0 {
        midnight - Duration::days(1)
    } else {
        midnight
    };
    let start = start_day + Duration::seconds((f.start_hour * 3600.0) as i64);
    let end = midnight + Duration::seconds((f.end_hour * 3600.0) as i64);
    let pad = Duration::seconds((SEARCH_PAD_H * 3600.0) as i64);
    (start - pad, end + pad)
}

fn slice_by_local<T>(
    items: &[T],
    local: impl Fn(&T) -> NaiveDateTime,
    lo: NaiveDateTime,
    hi: NaiveDateTime,
) -> Vec<&T> {
    items.iter().filter(|x| {
        let t = local(x);
        t >= lo && t <= hi
    }).collect()
}

fn sleep_point_for_date(
    wake_date: NaiveDate,
    motion: &[MotionSample],
    location: &[LocationSample],
    home: &crate::home::HomeModel,
    w: &NightWindow,
    tol: &RestTolerances,
    per_axis: bool,
) -> Option<SleepPoint> {
    let (lo, hi) = night_search_bounds(wake_date, w);
    // the slice runs past `hi` so an interval that starts inside the search
    // window keeps its full tail; qualification still uses [lo, hi]
    let tail = hi + Duration::hours(18);
    let m: Vec<MotionSample> =
        slice_by_local(motion, |s| s.t.local(), lo, tail).into_iter().copied().collect();
    // keep one location fix before the slice so "last fix before interval"
    // still has something to fall back on
    let mut l: Vec<LocationSample> =
        slice_by_local(location, |s| s.t.local(), lo, tail).into_iter().copied().collect();
    if let Some(prev) = location.iter().rfind(|s| s.t.local() < lo) {
        l.insert(0, *prev);
    }
    extract_sleep_point_between(&m, &l, home, tol, per_axis, lo, hi)
        .map(|p| SleepPoint { date: wake_date, ..p })
}

fn extract_all_sleep_points(
    dates: &[NaiveDate],
    motion: &[MotionSample],
    location: &[LocationSample],
    home: &crate::home::HomeModel,
    w: &NightWindow,
    tol: &RestTolerances,
    per_axis: bool,
) -> Vec<Option<SleepPoint>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        dates
            .par_iter()
            .map(|&d| sleep_point_for_date(d, motion, location, home, w, tol, per_axis))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        dates
            .iter()
            .map(|&d| sleep_point_for_date(d, motion, location, home, w, tol, per_axis))
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrainReport {
    pub patient_id: String,
    pub training_days: i64,
    pub home_k: usize,
    pub home_night_samples: usize,
    pub sleep_k: usize,
    pub sleep_points: usize,
    pub pruned_sleep_outliers: Vec<SleepPoint>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: PatientModel,
    pub report: TrainReport,
}

/// Train every analyzer on the provided streams and snapshot the config
/// into the model.
pub fn train(
    location: &[LocationSample],
    motion: &[MotionSample],
    comm: &[CommDay],
    cfg: &Config,
    patient_id: &str,
) -> Result<TrainOutcome, Error> {
    if motion.is_empty() || location.is_empty() {
        return Err(Error::InsufficientData("training: empty sensor stream".into()));
    }
    let first = motion.first().unwrap().t.local_date();
    let last = motion.last().unwrap().t.local_date();
    let span_days = (last - first).num_days() + 1;
    let mut warnings = Vec::new();
    if (span_days as usize) < cfg.min_train_days {
        return Err(Error::InsufficientData(format!(
            "training: {span_days} days of motion data, need {}",
            cfg.min_train_days
        )));
    }
    if (span_days as usize) < cfg.warn_train_days {
        warnings.push(format!(
            "only {span_days} days of training data; {} recommended",
            cfg.warn_train_days
        ));
    }

    let home = locate_home(location, &cfg.night_window, cfg)
        .map_err(|e| stage_error("home", e))?;

    let tol = RestTolerances::from_config(cfg);
    let dates: Vec<NaiveDate> = (1..=(last - first).num_days())
        .map(|d| first + Duration::days(d))
        .collect();
    let points: Vec<SleepPoint> = extract_all_sleep_points(
        &dates,
        motion,
        location,
        &home.model,
        &cfg.night_window,
        &tol,
        cfg.per_axis_rest,
    )
    .into_iter()
    .flatten()
    .collect();

    let sleep = train_sleep_model(&points, cfg).map_err(|e| stage_error("sleep", e))?;
    let comm_model =
        train_comm_model(comm, cfg.split_weekend, cfg).map_err(|e| stage_error("comm", e))?;

    let model = PatientModel {
        schema_version: SCHEMA_VERSION,
        patient_id: patient_id.to_string(),
        config: *cfg,
        home: home.model,
        sleep: sleep.model,
        comm: comm_model,
        training_span: (first, last),
    };
    let report = TrainReport {
        patient_id: patient_id.to_string(),
        training_days: span_days,
        home_k: home.chosen_k,
        home_night_samples: home.night_sample_count,
        sleep_k: sleep.chosen_k,
        sleep_points: points.len(),
        pruned_sleep_outliers: sleep.pruned,
        warnings,
    };
    Ok(TrainOutcome { model, report })
}

fn stage_error(stage: &str, e: Error) -> Error {
    match e {
        Error::InsufficientData(msg) => Error::InsufficientData(format!("{stage}: {msg}")),
        other => other,
    }
}

/// Per-day verdicts over [from, to]. The stored home model and config
/// snapshot are used; home is never re-estimated.
pub fn evaluate(
    model: &PatientModel,
    location: &[LocationSample],
    motion: &[MotionSample],
    comm: &[CommDay],
    from: NaiveDate,
    to: NaiveDate,
) -> Result<Vec<DayVerdict>, Error> {
    if to < from {
        return Err(Error::Usage("--to before --from".into()));
    }
    let cfg = &model.config;
    let tol = model.sleep.tolerances;
    let dates: Vec<NaiveDate> = (0..=(to - from).num_days()).map(|d| from + Duration::days(d)).collect();
    let points = extract_all_sleep_points(
        &dates,
        motion,
        location,
        &model.home,
        &model.sleep.night_window,
        &tol,
        cfg.per_axis_rest,
    );
    let verdicts = dates
        .iter()
        .zip(points)
        .map(|(&date, point)| {
            let sleep = match point {
                Some(p) => {
                    let state = match classify_sleep(&p, &model.sleep) {
                        SleepClass::Cluster(i) => SleepState::Cluster(i),
                        SleepClass::Outlier => SleepState::Outlier,
                    };
                    SleepVerdict {
                        state,
                        start_hour: Some(p.start_hour),
                        duration_h: Some(p.duration_h),
                    }
                }
                None => SleepVerdict { state: SleepState::NoData, start_hour: None, duration_h: None },
            };
            let comm_verdict = evaluate_comm_day(comm, date, &model.comm);
            DayVerdict::fuse(date, sleep, comm_verdict)
        })
        .collect();
    Ok(verdicts)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.5}")).unwrap_or_else(|| "-".into())
}

/// Tabular report: sleep columns with 1-based cluster ids ("Outlier",
/// "NoData" otherwise), comm delta columns with their 1/0/- P/F marks.
pub fn render_table(verdicts: &[DayVerdict]) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(
        out,
        "{:<12} {:>11} {:>9} {:>8} | {:>7} {:>4} {:>7} {:>4} {:>7} {:>4} | {:>7}",
        "Date", "Start Hour", "Duration", "Cluster",
        "dCalls", "P/F", "dMissd", "P/F", "dSMS", "P/F", "Anomaly"
    )
    .unwrap();
    for v in verdicts {
        let cluster = match v.sleep.state {
            SleepState::Cluster(i) => (i + 1).to_string(),
            SleepState::Outlier => "Outlier".into(),
            SleepState::NoData => "NoData".into(),
        };
        writeln!(
            out,
            "{:<12} {:>11} {:>9} {:>8} | {:>7} {:>4} {:>7} {:>4} {:>7} {:>4} | {:>7}",
            v.date.to_string(),
            fmt_opt(v.sleep.start_hour),
            fmt_opt(v.sleep.duration_h),
            cluster,
            v.comm.out_calls.delta.map(|d| format!("{d:.0}")).unwrap_or_else(|| "-".into()),
            v.comm.out_calls.flag.as_pf(),
            v.comm.missed_calls.delta.map(|d| format!("{d:.0}")).unwrap_or_else(|| "-".into()),
            v.comm.missed_calls.flag.as_pf(),
            v.comm.out_sms.delta.map(|d| format!("{d:.0}")).unwrap_or_else(|| "-".into()),
            v.comm.out_sms.flag.as_pf(),
            if v.overall_anomaly { "YES" } else { "no" },
        )
        .unwrap();
    }
    out
}

pub fn render_json(verdicts: &[DayVerdict]) -> String {
    let mut s = serde_json::to_string_pretty(verdicts).expect("verdicts serialize");
    s.push('\n');
    s
}

pub fn render_train_report(report: &TrainReport, model: &PatientModel) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "trained patient {}", report.patient_id).unwrap();
    for w in &report.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    writeln!(
        out,
        "home: ({:.6}, {:.6}) radius {:.1} m, k={}, {} night fixes, support {}",
        model.home.lat,
        model.home.lon,
        model.home.radius_m,
        report.home_k,
        report.home_night_samples,
        model.home.support
    )
    .unwrap();
    writeln!(
        out,
        "sleep: {} points, k={}, {} cluster(s) retained",
        report.sleep_points,
        report.sleep_k,
        model.sleep.clusters.len()
    )
    .unwrap();
    for (i, c) in model.sleep.clusters.iter().enumerate() {
        writeln!(
            out,
            "  cluster {}: start {:.2} duration {:.2} h, size {}, max member dist {:.2} h",
            i + 1,
            c.centroid[0] % 24.0,
            c.centroid[1],
            c.size,
            c.max_member_dist
        )
        .unwrap();
    }
    for p in &report.pruned_sleep_outliers {
        writeln!(
            out,
            "  pruned outlier: {} start {:.2} duration {:.2} h",
            p.date, p.start_hour, p.duration_h
        )
        .unwrap();
    }
    let ci = |name: &str, iv: &crate::comm::CommInterval| {
        format!("  {name}: [{:.3}, {:.3}] (n={})", iv.lower, iv.upper, iv.n_deltas)
    };
    writeln!(out, "comm weekday intervals:").unwrap();
    writeln!(out, "{}", ci("out_calls", &model.comm.weekday.out_calls)).unwrap();
    writeln!(out, "{}", ci("missed_calls", &model.comm.weekday.missed_calls)).unwrap();
    writeln!(out, "{}", ci("out_sms", &model.comm.weekday.out_sms)).unwrap();
    if let Some(we) = &model.comm.weekend {
        writeln!(out, "comm weekend intervals:").unwrap();
        writeln!(out, "{}", ci("out_calls", &we.out_calls)).unwrap();
        writeln!(out, "{}", ci("missed_calls", &we.missed_calls)).unwrap();
        writeln!(out, "{}", ci("out_sms", &we.out_sms)).unwrap();
    }
    out
}
