//! Sleep-interval extraction and sleep-pattern clustering.
//!
//! A day's sleep is the longest rest interval (accelerometer magnitude near
//! gravity, gyroscope near zero) that starts inside the padded night window
//! while every location fix inside it is at home. Extracted
//! (start hour, duration) points are clustered in canonical-hour space; all
//! surviving clusters are kept (weekday and weekend regimes are both
//! normal), sparse far-away clusters are pruned from training.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::clustering::{kmeans_best, prune_outlier_clusters, select_k_elbow, sse_curve};
use crate::config::Config;
use crate::error::Error;
use crate::home::{is_at_home, HomeModel};
use crate::time::{canonical_hour, NightWindow, Timestamp};
use crate::types::{LocationSample, MotionSample};

pub const GRAVITY: f64 = 9.8;
/// Hours of padding around the night window within which a qualifying rest
/// interval may start. Late bedtimes and oversleep remain observable.
pub const SEARCH_PAD_H: f64 = 6.0;
/// Membership distance floor so tight clusters still accept near misses.
pub const MIN_MEMBER_DIST_H: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestTolerances {
    pub eps_accel: f64,
    pub eps_gyro: f64,
    pub max_gap_s: f64,
    pub min_sleep_h: f64,
}

impl Default for RestTolerances {
    fn default() -> Self {
        Self { eps_accel: 0.5, eps_gyro: 0.1, max_gap_s: 120.0, min_sleep_h: 1.0 }
    }
}

impl RestTolerances {
    pub fn from_config(cfg: &Config) -> Self {
        Self {
            eps_accel: cfg.eps_accel,
            eps_gyro: cfg.eps_gyro,
            max_gap_s: cfg.max_gap_s,
            min_sleep_h: cfg.min_sleep_h,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SleepPoint {
    /// Wake date: the local date the interval ends on.
    pub date: NaiveDate,
    /// Raw hour-of-day in [0, 24).
    pub start_hour: f64,
    pub duration_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SleepCluster {
    /// (canonical start hour, duration in hours).
    pub centroid: [f64; 2],
    pub max_member_dist: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SleepModel {
    pub clusters: Vec<SleepCluster>,
    pub slack: f64,
    pub tolerances: RestTolerances,
    pub night_window: NightWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SleepClass {
    Cluster(usize),
    Outlier,
}

/// Orientation-invariant rest test: accelerometer magnitude near gravity
/// and gyroscope magnitude near zero.
pub fn is_at_rest(m: &MotionSample, tol: &RestTolerances) -> bool {
    (m.accel_magnitude() - GRAVITY).abs() <= tol.eps_accel && m.gyro_magnitude() <= tol.eps_gyro
}

/// Strict per-axis variant for fidelity experiments: accel near (0,0,9.8)
/// and gyro near (0,0,0) component-wise.
pub fn is_at_rest_per_axis(m: &MotionSample, tol: &RestTolerances) -> bool {
    m.accel[0].abs() <= tol.eps_accel
        && m.accel[1].abs() <= tol.eps_accel
        && (m.accel[2] - GRAVITY).abs() <= tol.eps_accel
        && m.gyro.iter().all(|g| g.abs() <= tol.eps_gyro)
}

/// Maximal rest intervals over a time-sorted stream. Gaps up to
/// `max_gap_s` between consecutive samples are bridged; a longer gap or a
/// moving sample closes the interval at the previous sample. Intervals
/// shorter than `min_sleep_h` are dropped.
pub fn rest_intervals(
    stream: &[MotionSample],
    tol: &RestTolerances,
    per_axis: bool,
) -> Vec<(Timestamp, Timestamp)> {
    let at_rest = |m: &MotionSample| {
        if per_axis {
            is_at_rest_per_axis(m, tol)
        } else {
            is_at_rest(m, tol)
        }
    };
    let mut out = Vec::new();
    let mut open: Option<(Timestamp, Timestamp)> = None;
    let close = |iv: Option<(Timestamp, Timestamp)>, out: &mut Vec<(Timestamp, Timestamp)>| {
        if let Some((s, e)) = iv {
            if (e.epoch_seconds - s.epoch_seconds) as f64 / 3600.0 >= tol.min_sleep_h {
                out.push((s, e));
            }
        }
    };
    for m in stream {
        if at_rest(m) {
            match open {
                Some((s, e)) if (m.t.epoch_seconds - e.epoch_seconds) as f64 <= tol.max_gap_s => {
                    open = Some((s, m.t));
                }
                other => {
                    close(other, &mut out);
                    open = Some((m.t, m.t));
                }
            }
        } else {
            close(open.take(), &mut out);
        }
    }
    close(open, &mut out);
    out
}

fn padded_window_contains(start_hour: f64, w: &NightWindow) -> bool {
    let f = w.filter_window();
    if f.span_hours() + 2.0 * SEARCH_PAD_H >= 24.0 {
        return true;
    }
    let padded = NightWindow {
        start_hour: (f.start_hour - SEARCH_PAD_H).rem_euclid(24.0),
        end_hour: (f.end_hour + SEARCH_PAD_H).rem_euclid(24.0),
        shift_mode: crate::time::ShiftMode::NightSleeper,
    };
    padded.contains_hour(start_hour)
}

/// True iff every location fix inside the interval is at home; with no fix
/// inside, falls back to the last fix before the interval.
fn interval_at_home(
    location: &[LocationSample],
    start: &Timestamp,
    end: &Timestamp,
    home: &HomeModel,
) -> bool {
    let mut inside = location
        .iter()
        .filter(|s| s.t.epoch_seconds >= start.epoch_seconds && s.t.epoch_seconds <= end.epoch_seconds)
        .peekable();
    if inside.peek().is_some() {
        return inside.all(|s| is_at_home(s, home));
    }
    location
        .iter().rfind(|s| s.t.epoch_seconds < start.epoch_seconds)
        .map(|s| is_at_home(s, home))
        .unwrap_or(false)
}

/// Longest at-home rest interval starting within the padded night window.
/// Streams should cover one night (the caller slices per night). Equal
/// lengths tie-break to the earlier start.
pub fn extract_sleep_point(
    motion: &[MotionSample],
    location: &[LocationSample],
    home: &HomeModel,
    w: &NightWindow,
    tol: &RestTolerances,
) -> Option<SleepPoint> {
    extract_sleep_point_mode(motion, location, home, w, tol, false)
}

pub fn extract_sleep_point_mode(
    motion: &[MotionSample],
    location: &[LocationSample],
    home: &HomeModel,
    w: &NightWindow,
    tol: &RestTolerances,
    per_axis: bool,
) -> Option<SleepPoint> {
    select_longest_at_home(motion, location, home, tol, per_axis, |s, _e| {
        padded_window_contains(s.local_hour(), w)
    })
}

/// Bounded variant for a per-night orchestrator that slices multi-day
/// streams: an interval qualifies when it overlaps [lo, hi] in local time,
/// so a tail running past `hi` (oversleep) still counts in full.
pub fn extract_sleep_point_between(
    motion: &[MotionSample],
    location: &[LocationSample],
    home: &HomeModel,
    tol: &RestTolerances,
    per_axis: bool,
    lo: chrono::NaiveDateTime,
    hi: chrono::NaiveDateTime,
) -> Option<SleepPoint> {
    select_longest_at_home(motion, location, home, tol, per_axis, |s, e| {
        s.local() <= hi && e.local() >= lo
    })
}

fn select_longest_at_home(
    motion: &[MotionSample],
    location: &[LocationSample],
    home: &HomeModel,
    tol: &RestTolerances,
    per_axis: bool,
    qualifies: impl Fn(&Timestamp, &Timestamp) -> bool,
) -> Option<SleepPoint> {
    let mut best: Option<(Timestamp, Timestamp)> = None;
    for (s, e) in rest_intervals(motion, tol, per_axis) {
        if !qualifies(&s, &e) {
            continue;
        }
        if !interval_at_home(location, &s, &e, home) {
            continue;
        }
        let len = e.epoch_seconds - s.epoch_seconds;
        let better = match &best {
            None => true,
            Some((bs, be)) => {
                let blen = be.epoch_seconds - bs.epoch_seconds;
                len > blen || (len == blen && s.epoch_seconds < bs.epoch_seconds)
            }
        };
        if better {
            best = Some((s, e));
        }
    }
    best.map(|(s, e)| SleepPoint {
        date: e.local_date(),
        start_hour: s.local_hour(),
        duration_h: (e.epoch_seconds - s.epoch_seconds) as f64 / 3600.0,
    })
}

fn point_coords(p: &SleepPoint) -> [f64; 2] {
    [canonical_hour(p.start_hour).expect("start_hour in range"), p.duration_h]
}

#[derive(Debug, Clone)]
pub struct SleepTraining {
    pub model: SleepModel,
    pub chosen_k: usize,
    /// Points discarded by outlier-cluster pruning, for the training report.
    pub pruned: Vec<SleepPoint>,
}

/// Cluster (canonical start hour, duration) points, prune sparse far-away
/// clusters, and keep every surviving cluster as a normal pattern.
pub fn train_sleep_model(points: &[SleepPoint], cfg: &Config) -> Result<SleepTraining, Error> {
    if points.len() < cfg.min_sleep_points {
        return Err(Error::InsufficientData(format!(
            "sleep: {} points, need {}",
            points.len(),
            cfg.min_sleep_points
        )));
    }
    let coords: Vec<Vec<f64>> = points.iter().map(|p| point_coords(p).to_vec()).collect();
    let mut distinct: Vec<(u64, u64)> =
        coords.iter().map(|p| (p[0].to_bits(), p[1].to_bits())).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let k_max = (cfg.k_max_cap.min(coords.len() / 3).min(distinct.len())).max(1);

    let curve = sse_curve(&coords, k_max, cfg.seed, cfg.restarts)?;
    let k = select_k_elbow(&curve, cfg.elbow_threshold)?;
    let clustering = kmeans_best(&coords, k, cfg.seed, cfg.restarts)?;
    let outcome = prune_outlier_clusters(&clustering, &coords, cfg.min_frac, cfg.min_dist_h);

    let retained = outcome.clustering;
    let mut clusters = Vec::with_capacity(retained.k());
    for ci in 0..retained.k() {
        let mut max_d: f64 = 0.0;
        for (pi, &a) in outcome.kept_points.iter().zip(&retained.assignments) {
            if a == ci {
                let c = &retained.centroids[ci];
                let p = point_coords(&points[*pi]);
                let d = ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)).sqrt();
                max_d = max_d.max(d);
            }
        }
        clusters.push(SleepCluster {
            centroid: [retained.centroids[ci][0], retained.centroids[ci][1]],
            max_member_dist: max_d,
            size: retained.sizes[ci],
        });
    }

    Ok(SleepTraining {
        model: SleepModel {
            clusters,
            slack: cfg.slack,
            tolerances: RestTolerances::from_config(cfg),
            night_window: cfg.night_window,
        },
        chosen_k: k,
        pruned: outcome.removed_points.iter().map(|&i| points[i]).collect(),
    })
}

/// Nearest-cluster membership in (canonical hour, duration) space with a
/// slack-scaled acceptance radius.
pub fn classify_sleep(p: &SleepPoint, m: &SleepModel) -> SleepClass {
    let q = point_coords(p);
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in m.clusters.iter().enumerate() {
        let d = ((q[0] - c.centroid[0]).powi(2) + (q[1] - c.centroid[1]).powi(2)).sqrt();
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    match best {
        Some((i, d)) if d <= m.slack * m.clusters[i].max_member_dist.max(MIN_MEMBER_DIST_H) => {
            SleepClass::Cluster(i)
        }
        _ => SleepClass::Outlier,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::XorShift64Star;

    const BASE: i64 = 1_623_024_000; // 2021-06-07 00:00 UTC (Monday)

    fn motion(epoch: i64, accel: [f64; 3], gyro: [f64; 3]) -> MotionSample {
        MotionSample { t: Timestamp::new(epoch, 0), accel, gyro }
    }

    fn rest_sample(epoch: i64) -> MotionSample {
        motion(epoch, [0.0, 0.0, 9.8], [0.0; 3])
    }

    fn moving_sample(epoch: i64) -> MotionSample {
        motion(epoch, [2.0, 1.0, 9.8], [0.4, 0.0, 0.0])
    }

    fn home_model() -> HomeModel {
        HomeModel {
            lat: 41.88,
            lon: -87.63,
            radius_m: 150.0,
            night_window: NightWindow::default(),
            support: 500,
        }
    }

    fn loc(epoch: i64, lat: f64, lon: f64) -> LocationSample {
        LocationSample { t: Timestamp::new(epoch, 0), lat, lon }
    }

    #[test]
    fn rest_truth_table() {
        // device tolerance tight enough that a 2 m/s^2 lateral push
        // (magnitude deviation 0.202) registers as movement
        let tol = RestTolerances { eps_accel: 0.2, ..RestTolerances::default() };
        assert!(is_at_rest(&motion(0, [0.0, 0.0, 9.8], [0.0; 3]), &tol));
        assert!(!is_at_rest(&motion(0, [2.0, 0.0, 9.8], [0.0; 3]), &tol));
        assert!(!is_at_rest(&motion(0, [0.0, 0.0, 9.8], [0.2, 0.0, 0.0]), &tol));
        // face-down phone still rests under the magnitude test
        assert!(is_at_rest(&motion(0, [0.0, 0.0, -9.8], [0.0; 3]), &tol));
        assert!(!is_at_rest_per_axis(&motion(0, [0.0, 0.0, -9.8], [0.0; 3]), &tol));
        assert!(is_at_rest_per_axis(&motion(0, [0.1, 0.0, 9.7], [0.0; 3]), &tol));
        // at the default 0.5 tolerance the magnitude test is more permissive
        let loose = RestTolerances::default();
        assert!(is_at_rest(&motion(0, [0.0, 0.0, 9.5], [0.0; 3]), &loose));
        assert!(!is_at_rest(&motion(0, [4.0, 0.0, 9.8], [0.0; 3]), &loose));
    }

    #[test]
    fn eight_hours_of_rest_is_one_interval() {
        let tol = RestTolerances::default();
        let stream: Vec<MotionSample> = (0..8 * 3600).map(|s| rest_sample(BASE + s)).collect();
        let ivs = rest_intervals(&stream, &tol, false);
        assert_eq!(ivs.len(), 1);
        let len_h = (ivs[0].1.epoch_seconds - ivs[0].0.epoch_seconds) as f64 / 3600.0;
        assert!((len_h - 8.0).abs() <= 1.0 / 3600.0 + 1e-9);
    }

    #[test]
    fn moving_sample_splits_interval() {
        let tol = RestTolerances::default();
        let mut stream: Vec<MotionSample> = (0..4 * 3600).map(|s| rest_sample(BASE + s)).collect();
        stream.push(moving_sample(BASE + 4 * 3600));
        stream.extend((4 * 3600 + 1..8 * 3600 + 1).map(|s| rest_sample(BASE + s)));
        let ivs = rest_intervals(&stream, &tol, false);
        assert_eq!(ivs.len(), 2);
        for (s, e) in ivs {
            let len_h = (e.epoch_seconds - s.epoch_seconds) as f64 / 3600.0;
            assert!(len_h >= tol.min_sleep_h);
            assert!((len_h - 4.0).abs() < 0.01);
        }
    }

    #[test]
    fn short_gap_is_bridged() {
        let tol = RestTolerances::default();
        let mut stream: Vec<MotionSample> = (0..3600).map(|s| rest_sample(BASE + s)).collect();
        // 90 s data gap, under the 120 s bridge
        stream.extend((3690..2 * 3600).map(|s| rest_sample(BASE + s)));
        assert_eq!(rest_intervals(&stream, &tol, false).len(), 1);
        // a 150 s gap splits (halves are only ~1 h and ~1 h, keep both >= 1 h)
        let mut split: Vec<MotionSample> = (0..3700).map(|s| rest_sample(BASE + s)).collect();
        split.extend((3850..2 * 3600 + 3850).map(|s| rest_sample(BASE + s)));
        assert_eq!(rest_intervals(&split, &tol, false).len(), 2);
    }

    #[test]
    fn sub_hour_rest_discarded() {
        let tol = RestTolerances::default();
        let stream: Vec<MotionSample> = (0..600).map(|s| rest_sample(BASE + s)).collect();
        assert!(rest_intervals(&stream, &tol, false).is_empty());
    }

    fn night_trace(
        sleep_start_offset_s: i64,
        sleep_len_s: i64,
        period_s: i64,
    ) -> (Vec<MotionSample>, Vec<LocationSample>) {
        // trace covers 18:00 (day -1) .. 12:00, sleep planted at the offsets
        // relative to midnight
        let t0 = BASE - 6 * 3600;
        let t1 = BASE + 12 * 3600;
        let mut motion = Vec::new();
        let mut location = Vec::new();
        let mut t = t0;
        while t <= t1 {
            let asleep = t >= BASE + sleep_start_offset_s && t <= BASE + sleep_start_offset_s + sleep_len_s;
            motion.push(if asleep { rest_sample(t) } else { moving_sample(t) });
            location.push(loc(t, 41.88, -87.63));
            t += period_s;
        }
        (motion, location)
    }

    #[test]
    fn planted_overnight_sleep_extracted() {
        let tol = RestTolerances::default();
        // 23:30 -> 06:00
        let (motion, location) = night_trace(-1800, 23_400, 5);
        let p = extract_sleep_point(&motion, &location, &home_model(), &NightWindow::default(), &tol)
            .unwrap();
        assert!((p.start_hour - 23.5).abs() < 0.01, "start {}", p.start_hour);
        assert!((p.duration_h - 6.5).abs() < 0.01, "duration {}", p.duration_h);
        assert_eq!(p.date, NaiveDate::from_ymd_opt(2021, 6, 7).unwrap());
    }

    #[test]
    fn cafe_confound_not_selected() {
        let tol = RestTolerances::default();
        // overnight 6 h sleep at home plus a longer 7 h flat period 13:00-20:00
        // previous day away from home
        let t0 = BASE - 12 * 3600;
        let mut motion = Vec::new();
        let mut location = Vec::new();
        let mut t = t0;
        while t <= BASE + 12 * 3600 {
            let at_cafe = (BASE - 11 * 3600..=BASE - 4 * 3600).contains(&t);
            let asleep = (BASE..=BASE + 6 * 3600).contains(&t);
            motion.push(if at_cafe || asleep { rest_sample(t) } else { moving_sample(t) });
            location.push(if at_cafe { loc(t, 41.95, -87.70) } else { loc(t, 41.88, -87.63) });
            t += 5;
        }
        let p = extract_sleep_point(&motion, &location, &home_model(), &NightWindow::default(), &tol)
            .unwrap();
        assert!((p.start_hour - 0.0).abs() < 0.01);
        assert!((p.duration_h - 6.0).abs() < 0.01);
    }

    #[test]
    fn no_qualifying_interval_returns_none() {
        let tol = RestTolerances::default();
        let motion: Vec<MotionSample> = (0..12 * 720).map(|i| moving_sample(BASE + i * 5)).collect();
        let location = vec![loc(BASE, 41.88, -87.63)];
        assert!(extract_sleep_point(&motion, &location, &home_model(), &NightWindow::default(), &tol)
            .is_none());
    }

    #[test]
    fn extra_rest_samples_inside_interval_are_invariant() {
        let tol = RestTolerances::default();
        let (mut motion, location) = night_trace(0, 6 * 3600, 5);
        let base = extract_sleep_point(&motion, &location, &home_model(), &NightWindow::default(), &tol)
            .unwrap();
        motion.push(rest_sample(BASE + 1000));
        motion.push(rest_sample(BASE + 2003));
        motion.sort_by_key(|m| m.t.epoch_seconds);
        motion.dedup_by_key(|m| m.t.epoch_seconds);
        let more = extract_sleep_point(&motion, &location, &home_model(), &NightWindow::default(), &tol)
            .unwrap();
        assert_eq!(base, more);
    }

    #[test]
    fn shrinking_tolerances_never_lengthens_intervals() {
        let mut rng = XorShift64Star::new(77);
        let tol = RestTolerances::default();
        let tight = RestTolerances { eps_accel: 0.25, eps_gyro: 0.05, ..tol };
        let stream: Vec<MotionSample> = (0..5000)
            .map(|i| {
                let jitter = rng.normal(0.0, 0.3);
                motion(
                    BASE + i * 5,
                    [0.0, 0.0, 9.8 + jitter],
                    [rng.normal(0.0, 0.05), 0.0, 0.0],
                )
            })
            .collect();
        let loose_total: i64 = rest_intervals(&stream, &tol, false)
            .iter()
            .map(|(s, e)| e.epoch_seconds - s.epoch_seconds)
            .sum();
        let tight_total: i64 = rest_intervals(&stream, &tight, false)
            .iter()
            .map(|(s, e)| e.epoch_seconds - s.epoch_seconds)
            .sum();
        assert!(tight_total <= loose_total);
    }

    fn regime_points(seed: u64, n_weekday: usize, n_weekend: usize) -> Vec<SleepPoint> {
        let mut rng = XorShift64Star::new(seed);
        let mut pts = Vec::new();
        let mut date = NaiveDate::from_ymd_opt(2021, 6, 7).unwrap();
        for i in 0..(n_weekday + n_weekend) {
            let weekend = i >= n_weekday;
            let (start_c, dur) = if weekend { (22.0, 8.0) } else { (24.0, 6.0) };
            pts.push(SleepPoint {
                date,
                start_hour: (start_c + rng.normal(0.0, 0.3)).rem_euclid(24.0),
                duration_h: dur + rng.normal(0.0, 0.3),
            });
            date = date.succ_opt().unwrap();
        }
        pts
    }

    #[test]
    fn two_regimes_give_two_clusters() {
        let pts = regime_points(2, 10, 4);
        let cfg = Config::default();
        let t = train_sleep_model(&pts, &cfg).unwrap();
        assert_eq!(t.model.clusters.len(), 2);
        assert!(t.pruned.is_empty());
    }

    #[test]
    fn singleton_outlier_is_pruned() {
        let mut pts = regime_points(2, 10, 4);
        pts.push(SleepPoint {
            date: NaiveDate::from_ymd_opt(2021, 6, 25).unwrap(),
            start_hour: 11.42,
            duration_h: 1.52,
        });
        let cfg = Config::default();
        let t = train_sleep_model(&pts, &cfg).unwrap();
        assert_eq!(t.model.clusters.len(), 2);
        assert_eq!(t.pruned.len(), 1);
        assert!((t.pruned[0].start_hour - 11.42).abs() < 1e-9);
    }

    #[test]
    fn identical_points_single_tight_cluster() {
        let p = SleepPoint {
            date: NaiveDate::from_ymd_opt(2021, 6, 7).unwrap(),
            start_hour: 23.0,
            duration_h: 7.0,
        };
        let pts = vec![p; 10];
        let cfg = Config::default();
        let t = train_sleep_model(&pts, &cfg).unwrap();
        assert_eq!(t.model.clusters.len(), 1);
        assert_eq!(t.model.clusters[0].max_member_dist, 0.0);
    }

    #[test]
    fn too_few_points_is_an_error() {
        let pts = regime_points(1, 4, 2);
        assert!(matches!(
            train_sleep_model(&pts, &Config::default()),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn centroids_classify_to_their_cluster() {
        let pts = regime_points(5, 10, 4);
        let t = train_sleep_model(&pts, &Config::default()).unwrap();
        for (i, c) in t.model.clusters.iter().enumerate() {
            let p = SleepPoint {
                date: NaiveDate::from_ymd_opt(2021, 7, 1).unwrap(),
                start_hour: c.centroid[0] % 24.0,
                duration_h: c.centroid[1],
            };
            assert_eq!(classify_sleep(&p, &t.model), SleepClass::Cluster(i));
        }
    }

    #[test]
    fn late_morning_short_sleep_is_an_outlier() {
        let pts = regime_points(8, 10, 4);
        let t = train_sleep_model(&pts, &Config::default()).unwrap();
        let odd = SleepPoint {
            date: NaiveDate::from_ymd_opt(2021, 7, 1).unwrap(),
            start_hour: 11.41667,
            duration_h: 1.51673,
        };
        assert_eq!(classify_sleep(&odd, &t.model), SleepClass::Outlier);
    }
}
